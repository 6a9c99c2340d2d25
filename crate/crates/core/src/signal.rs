//! Effort-laundering signal model and the principal's recommendation rule.
//!
//! Binary output alphabets on both task channels. Routine output from a
//! low type running low effort is laundered toward the high type's
//! distribution by κ: its high-output probability is the mixture
//! (1−κ)·r_l + κ·r_h, so the routine likelihood ratio decays from r_h/r_l
//! to exactly 1. Novel output is untouched by κ.

use serde::{Deserialize, Serialize};

use crate::model::EconomyParams;
use crate::{Error, Result};

/// Binary task-output outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    High,
    Low,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::High, Outcome::Low];
}

/// Recommendation sent for one (routine, novel) outcome pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recommendation {
    Good,
    Bad,
}

/// Output distributions for the two equilibrium behaviors: the high type
/// exerting effort and the low type shirking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalModel {
    /// P(y_R = high | θ_H, e = 1).
    pub r_h: f64,
    /// Pre-laundering P(y_R = high | θ_L, e = 0), below `r_h`.
    pub r_l: f64,
    /// P(y_N = high | θ_H, e = 1).
    pub a_h: f64,
    /// P(y_N = high | θ_L, e = 0), below `a_h`.
    pub a_l: f64,
    /// Effort-laundering strength κ ∈ [0,1].
    pub kappa: f64,
    /// Posterior level above which the Good recommendation is sent.
    pub posterior_threshold: f64,
}

impl SignalModel {
    pub fn new(
        r_h: f64,
        r_l: f64,
        a_h: f64,
        a_l: f64,
        kappa: f64,
        posterior_threshold: f64,
    ) -> Result<Self> {
        let model = SignalModel { r_h, r_l, a_h, a_l, kappa, posterior_threshold };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("r_h", self.r_h),
            ("r_l", self.r_l),
            ("a_h", self.a_h),
            ("a_l", self.a_l),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::DegenerateSignal(format!(
                    "{name} must lie strictly in (0,1), got {v}"
                )));
            }
        }
        if !(self.r_l < self.r_h) {
            return Err(Error::config("routine outputs must satisfy r_l < r_h"));
        }
        if !(self.a_l < self.a_h) {
            return Err(Error::config("novel outputs must satisfy a_l < a_h"));
        }
        if !(self.kappa >= 0.0 && self.kappa <= 1.0) {
            return Err(Error::config("kappa must lie in [0,1]"));
        }
        if !(self.posterior_threshold > 0.0 && self.posterior_threshold < 1.0) {
            return Err(Error::config("posterior_threshold must lie strictly in (0,1)"));
        }
        let laundered = self.laundered_routine_low();
        if !(laundered >= self.r_l && laundered <= self.r_h) {
            return Err(Error::config("laundered routine probability left [r_l, r_h]"));
        }
        Ok(())
    }

    /// Routine high-output probability of the shirking low type after
    /// laundering: (1−κ)·r_l + κ·r_h.
    pub fn laundered_routine_low(&self) -> f64 {
        (1.0 - self.kappa) * self.r_l + self.kappa * self.r_h
    }

    /// P(outcome | behavior) on the routine channel.
    fn routine_prob(&self, high_type: bool, y: Outcome) -> f64 {
        let p_high = if high_type { self.r_h } else { self.laundered_routine_low() };
        match y {
            Outcome::High => p_high,
            Outcome::Low => 1.0 - p_high,
        }
    }

    /// P(outcome | behavior) on the novel channel; κ-free.
    fn novel_prob(&self, high_type: bool, y: Outcome) -> f64 {
        let p_high = if high_type { self.a_h } else { self.a_l };
        match y {
            Outcome::High => p_high,
            Outcome::Low => 1.0 - p_high,
        }
    }
}

/// Likelihood ratio of a high routine output across the two behaviors:
/// r_h / ((1−κ)·r_l + κ·r_h). Equals r_h/r_l at κ = 0 and exactly 1 at
/// κ = 1, strictly decreasing between.
pub fn routine_likelihood_ratio(model: &SignalModel) -> f64 {
    model.r_h / model.laundered_routine_low()
}

/// Likelihood ratio of a high novel output; constant in κ and above 1.
pub fn novel_likelihood_ratio(model: &SignalModel) -> f64 {
    model.a_h / model.a_l
}

/// Posterior that the RA is the high type after observing both outputs,
/// via the product of per-channel likelihood ratios and the prior p.
pub fn posterior(y_r: Outcome, y_n: Outcome, model: &SignalModel, econ: &EconomyParams) -> f64 {
    let lr = model.routine_prob(true, y_r) / model.routine_prob(false, y_r);
    let ln = model.novel_prob(true, y_n) / model.novel_prob(false, y_n);
    let l = lr * ln;
    l * econ.p / (l * econ.p + (1.0 - econ.p))
}

/// Threshold recommendation rule over the four outcome pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignalingRule {
    /// Indexed [routine][novel] with High = 0, Low = 1.
    cells: [[Recommendation; 2]; 2],
}

impl SignalingRule {
    pub fn get(&self, y_r: Outcome, y_n: Outcome) -> Recommendation {
        self.cells[idx(y_r)][idx(y_n)]
    }

    /// True iff some novel outcome makes the recommendation flip with the
    /// routine outcome.
    pub fn depends_on_routine(&self) -> bool {
        Outcome::BOTH
            .iter()
            .any(|&y_n| self.get(Outcome::High, y_n) != self.get(Outcome::Low, y_n))
    }
}

fn idx(y: Outcome) -> usize {
    match y {
        Outcome::High => 0,
        Outcome::Low => 1,
    }
}

/// The principal's optimal deterministic rule: send Good exactly where the
/// posterior reaches the threshold.
pub fn optimal_rule(model: &SignalModel, econ: &EconomyParams) -> SignalingRule {
    let mut cells = [[Recommendation::Bad; 2]; 2];
    for y_r in Outcome::BOTH {
        for y_n in Outcome::BOTH {
            if posterior(y_r, y_n, model, econ) >= model.posterior_threshold {
                cells[idx(y_r)][idx(y_n)] = Recommendation::Good;
            }
        }
    }
    SignalingRule { cells }
}

/// Test predicate kept as a free function alongside the rule method.
pub fn rule_depends_on_routine(rule: &SignalingRule) -> bool {
    rule.depends_on_routine()
}

/// Scan κ on a uniform grid and return the switch point κ_c: the first grid
/// value whose optimal rule ignores the routine channel. `None` when the
/// rule depends on y_R over the whole grid or never does. Errors when the
/// dependence flips more than once along the grid.
pub fn rule_switch_point(
    model: &SignalModel,
    econ: &EconomyParams,
    grid_points: usize,
) -> Result<Option<f64>> {
    if grid_points < 2 {
        return Err(Error::config("switch-point scan needs at least 2 grid points"));
    }
    let mut switch = None;
    let mut prev_depends = None;
    let mut flips = 0usize;
    for i in 0..grid_points {
        let kappa = i as f64 / (grid_points - 1) as f64;
        let mut m = model.clone();
        m.kappa = kappa;
        let depends = optimal_rule(&m, econ).depends_on_routine();
        if let Some(prev) = prev_depends {
            if prev != depends {
                flips += 1;
                if !depends {
                    switch = Some(kappa);
                }
            }
        }
        prev_depends = Some(depends);
    }
    if flips > 1 {
        return Err(Error::Domain(format!(
            "rule dependence on the routine channel flipped {flips} times; expected one switch"
        )));
    }
    Ok(switch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use approx::assert_relative_eq;

    fn model() -> SignalModel {
        reference::signal()
    }

    fn econ() -> EconomyParams {
        reference::economy()
    }

    #[test]
    fn routine_ratio_examples() {
        let mut m = model();
        m.r_h = 0.9;
        m.r_l = 0.3;
        m.kappa = 0.0;
        assert_relative_eq!(routine_likelihood_ratio(&m), 3.0, max_relative = 1e-12);
        m.kappa = 1.0;
        assert_eq!(routine_likelihood_ratio(&m), 1.0);
        m.kappa = 0.5;
        assert_relative_eq!(routine_likelihood_ratio(&m), 1.5, max_relative = 1e-12);
    }

    #[test]
    fn routine_ratio_monotone_and_bounded() {
        let mut prev = f64::INFINITY;
        for i in 0..=1000 {
            let mut m = model();
            m.kappa = i as f64 / 1000.0;
            let lr = routine_likelihood_ratio(&m);
            assert!(lr >= 1.0);
            assert!(lr < prev, "ratio not strictly decreasing at kappa={}", m.kappa);
            prev = lr;
        }
    }

    #[test]
    fn novel_ratio_constant_in_kappa() {
        let base = novel_likelihood_ratio(&model());
        assert!(base > 1.0);
        for i in 0..=10 {
            let mut m = model();
            m.kappa = i as f64 / 10.0;
            assert_eq!(novel_likelihood_ratio(&m), base);
        }
    }

    #[test]
    fn posterior_examples() {
        // uninformative channels leave the prior: force ratios to 1 via κ=1
        // and equal novel probabilities is invalid, so check the κ=1 routine
        // channel directly against a novel outcome that is held fixed
        let mut m = model();
        m.kappa = 1.0;
        let e = econ();
        for y_n in Outcome::BOTH {
            let hi = posterior(Outcome::High, y_n, &m, &e);
            let lo = posterior(Outcome::Low, y_n, &m, &e);
            assert_eq!(hi, lo, "posterior must ignore routine output at kappa=1");
        }

        // L_R = 3, L_N = 1-ish is impossible under a_l < a_h; instead verify
        // the arithmetic directly: L·p/(L·p + 1−p) at L = 3, p = 0.5
        let mut m = model();
        m.kappa = 0.0;
        let mut e = econ();
        e.p = 0.5;
        // choose a novel outcome whose ratio we divide out analytically
        let l_r = routine_likelihood_ratio(&m);
        let l_n = novel_likelihood_ratio(&m);
        let post = posterior(Outcome::High, Outcome::High, &m, &e);
        let expected = l_r * l_n * 0.5 / (l_r * l_n * 0.5 + 0.5);
        assert_relative_eq!(post, expected, max_relative = 1e-12);
        assert_relative_eq!(3.0 * 0.5 / (3.0 * 0.5 + 0.5), 0.75, max_relative = 1e-12);
    }

    #[test]
    fn posterior_matches_joint_table_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..50 {
            let r_l = rng.gen_range(0.05..0.6);
            let r_h = rng.gen_range((r_l + 0.05)..0.95);
            let a_l = rng.gen_range(0.05..0.6);
            let a_h = rng.gen_range((a_l + 0.05)..0.95);
            let kappa = rng.gen_range(0.0..1.0);
            let m = SignalModel::new(r_h, r_l, a_h, a_l, kappa, 0.6).unwrap();
            let mut e = econ();
            e.p = rng.gen_range(0.05..0.95);

            // brute force: joint over (θ, y_r, y_n) with conditional independence
            for y_r in Outcome::BOTH {
                for y_n in Outcome::BOTH {
                    let joint = |high: bool| {
                        let prior = if high { e.p } else { 1.0 - e.p };
                        prior * m.routine_prob(high, y_r) * m.novel_prob(high, y_n)
                    };
                    let expected = joint(true) / (joint(true) + joint(false));
                    let got = posterior(y_r, y_n, &m, &e);
                    assert!(
                        (got - expected).abs() <= 1e-12,
                        "posterior mismatch: {got} vs {expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn optimal_rule_examples() {
        let e = econ();

        let mut m = model();
        m.kappa = 0.0;
        let rule = optimal_rule(&m, &e);
        assert!(rule.depends_on_routine());
        assert_eq!(rule.get(Outcome::High, Outcome::High), Recommendation::Good);
        assert_eq!(rule.get(Outcome::Low, Outcome::High), Recommendation::Bad);

        m.kappa = 1.0;
        let rule = optimal_rule(&m, &e);
        assert!(!rule.depends_on_routine());
        assert!(!rule_depends_on_routine(&rule));
        assert_eq!(rule.get(Outcome::High, Outcome::High), Recommendation::Good);
        assert_eq!(rule.get(Outcome::High, Outcome::Low), Recommendation::Bad);

        // unreachable threshold: all-Bad rule
        let mut m = model();
        m.posterior_threshold = 0.999;
        let rule = optimal_rule(&m, &e);
        for y_r in Outcome::BOTH {
            for y_n in Outcome::BOTH {
                assert_eq!(rule.get(y_r, y_n), Recommendation::Bad);
            }
        }
    }

    #[test]
    fn single_switch_point() {
        let m = model();
        let e = econ();
        let kc = rule_switch_point(&m, &e, 1001).unwrap();
        let kc = kc.expect("reference model switches to routine-independence");
        // analytic switch: posterior(Low, High) crosses the threshold when
        // ((1−r_h)/(1−r_l(κ)))·(a_h/a_l) = μ̄/(1−μ̄)
        assert!((kc - 0.871).abs() < 2e-3, "switch point {kc}");
        // verified single switch: dependence before, independence after
        for (kappa, expect) in [(kc - 0.01, true), (kc + 0.01, false)] {
            let mut m2 = m.clone();
            m2.kappa = kappa;
            assert_eq!(optimal_rule(&m2, &e).depends_on_routine(), expect);
        }
    }

    #[test]
    fn model_validation() {
        assert!(SignalModel::new(0.9, 0.3, 0.8, 0.3, 0.0, 0.6).is_ok());
        assert!(SignalModel::new(0.3, 0.9, 0.8, 0.3, 0.0, 0.6).is_err());
        assert!(SignalModel::new(1.0, 0.3, 0.8, 0.3, 0.0, 0.6).is_err());
        assert!(SignalModel::new(0.9, 0.3, 0.8, 0.3, 1.5, 0.6).is_err());
        assert!(SignalModel::new(0.9, 0.3, 0.8, 0.3, 0.0, 1.0).is_err());
    }
}
