//! Market fixed point and supermodularity diagnostics.
//!
//! The only channel through which other labs touch a PI's problem is the
//! admission probability, so the population state is the scalar P. The
//! fixed point damps P ← (1−d)·P + d·min(1, S/M(best responses to P)).
//!
//! The B.3 diagnostics run on a one-RA-per-lab population whose capital
//! scale drives the Good-signal measure through the novel-output success
//! probability; the main fixed point instead weights signals by hired head
//! count. The verdict suite reports this aggregation difference.

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::model::{self, EconomyParams, PIType, TechParams};
use crate::optimizer::{self, PIStrategy, SolveOptions};
use crate::tournament;
use crate::{Error, Result};

/// Solved strategies for the two PI types.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyPair {
    pub quality: PIStrategy,
    pub quantity: PIStrategy,
}

impl StrategyPair {
    pub fn get(&self, ty: PIType) -> &PIStrategy {
        match ty {
            PIType::QualityMax => &self.quality,
            PIType::QuantityMax => &self.quantity,
        }
    }
}

/// Per-RA Good-signal probabilities fed into the aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodSignalProbs {
    pub quality: f64,
    pub quantity: f64,
}

impl GoodSignalProbs {
    pub fn uniform(g: f64) -> Self {
        GoodSignalProbs { quality: g, quantity: g }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointOpts {
    pub damping: f64,
    pub max_iterations: usize,
    pub p0: f64,
    pub solve: SolveOptions,
}

impl Default for FixedPointOpts {
    fn default() -> Self {
        FixedPointOpts {
            damping: 0.5,
            max_iterations: 500,
            p0: 1.0,
            solve: SolveOptions::default(),
        }
    }
}

/// A computed equilibrium candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointResult {
    pub admission_prob: f64,
    pub strategies: StrategyPair,
    pub m_good: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
}

/// Damped iteration on the admission probability from `opts.p0`.
///
/// Non-convergence is data, not an error: the best iterate comes back with
/// `converged = false` and the final residual.
pub fn market_fixed_point(
    econ: &EconomyParams,
    tech: &TechParams,
    signal_probs: GoodSignalProbs,
    opts: FixedPointOpts,
) -> Result<FixedPointResult> {
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(Error::config("damping must lie in (0,1]"));
    }
    if opts.max_iterations == 0 {
        return Err(Error::config("max_iterations must be positive"));
    }
    if !(0.0..=1.0).contains(&opts.p0) {
        return Err(Error::config("starting admission probability must lie in [0,1]"));
    }
    let mut p = opts.p0;
    let mut last: Option<FixedPointResult> = None;
    for iter in 1..=opts.max_iterations {
        let quality = optimizer::solve_pi_with(PIType::QualityMax, p, econ, tech, opts.solve)?;
        let quantity = optimizer::solve_pi_with(PIType::QuantityMax, p, econ, tech, opts.solve)?;
        let m_good = tournament::aggregate_good_signals(
            (&quality, signal_probs.quality),
            (&quantity, signal_probs.quantity),
            econ,
        )?;
        let target = (econ.slots / m_good).min(1.0);
        let residual = (p - target).abs();
        let result = FixedPointResult {
            admission_prob: p,
            strategies: StrategyPair { quality, quantity },
            m_good,
            iterations: iter,
            converged: residual <= 1e-8,
            residual,
        };
        if result.converged {
            return Ok(result);
        }
        last = Some(result);
        p = (1.0 - opts.damping) * p + opts.damping * target;
    }
    Ok(last.expect("max_iterations >= 1"))
}

// === B.3 diagnostics ===
//
// The capital game normalizes every lab to one PI-RA pair (the unit
// candidate mass behind the tournament's clearing formula), so the lattice
// is one-dimensional in the capital scale and the diagnostics probe the
// investment externality alone, not the head-count corner.

/// Population capital scale → admission probability under a one-RA-per-lab
/// unit mass: M(s) = p·π(1, θ_H, s).
fn population_admission(s: f64, econ: &EconomyParams, tech: &TechParams) -> f64 {
    let g = econ.p * econ.theta_h * model::success_scale_raw(s, tech);
    (econ.slots / g.max(tournament::M_GOOD_EPS)).min(1.0)
}

/// Payoff of a one-RA lab holding augmentation capital `k`, facing the
/// admission probability implied by the population scale `pop`.
fn own_value(k: f64, pop: f64, ty: PIType, econ: &EconomyParams, tech: &TechParams) -> f64 {
    let p = population_admission(pop, econ, tech);
    optimizer::Objective::new(ty, p, econ, tech).eval(0.0, k, 1.0)
}

/// Capital best response of a one-RA lab at admission probability `p`:
/// coarse scan plus local bisection on the capital derivative.
fn best_capital(ty: PIType, p: f64, econ: &EconomyParams, tech: &TechParams) -> f64 {
    let obj = optimizer::Objective::new(ty, p, econ, tech);
    let k_max = SolveOptions::default().search_box.k_max;
    let points = 64usize;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..=points {
        let k = k_max * i as f64 / points as f64;
        let u = obj.eval(0.0, k, 1.0);
        if u > best.0 {
            best = (u, k);
        }
    }
    let cell = k_max / points as f64;
    let d = |k: f64| obj.grad(0.0, k, 1.0)[1];
    let (mut lo, mut hi) = ((best.1 - cell).max(0.0), (best.1 + cell).min(k_max));
    if d(lo) <= 0.0 && lo <= 0.0 {
        return 0.0;
    }
    if d(hi) >= 0.0 && hi >= k_max {
        return k_max;
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if d(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One violating quadruple of the increasing-differences inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdWitness {
    pub pi_type: PIType,
    pub k_lo: f64,
    pub k_hi: f64,
    pub pop_lo: f64,
    pub pop_hi: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdTestResult {
    pub samples: usize,
    pub holds_fraction: f64,
    pub witnesses: Vec<IdWitness>,
}

/// Sample the displayed increasing-differences inequality
/// U(K′; pop′) − U(K; pop′) ≥ U(K′; pop) − U(K; pop)
/// on random quadruples. Equality counts as holding; violations beyond a
/// 1e-9 slack are collected as witnesses (at most ten are kept).
pub fn increasing_differences_test(
    econ: &EconomyParams,
    tech: &TechParams,
    samples: usize,
) -> Result<IdTestResult> {
    if samples < 100 {
        return Err(Error::config(format!("need at least 100 samples, got {samples}")));
    }
    let k_max = SolveOptions::default().search_box.k_max;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let mut holds = 0usize;
    let mut witnesses = Vec::new();
    for i in 0..samples {
        let ty = if i % 2 == 0 { PIType::QualityMax } else { PIType::QuantityMax };
        let mut k_pair = [rng.gen_range(0.0..k_max), rng.gen_range(0.0..k_max)];
        k_pair.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut pop_pair = [rng.gen_range(0.0..k_max), rng.gen_range(0.0..k_max)];
        pop_pair.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let [k_lo, k_hi] = k_pair;
        let [pop_lo, pop_hi] = pop_pair;

        let lhs = own_value(k_hi, pop_hi, ty, econ, tech) - own_value(k_lo, pop_hi, ty, econ, tech);
        let rhs = own_value(k_hi, pop_lo, ty, econ, tech) - own_value(k_lo, pop_lo, ty, econ, tech);
        if lhs >= rhs - 1e-9 {
            holds += 1;
        } else if witnesses.len() < 10 {
            witnesses.push(IdWitness { pi_type: ty, k_lo, k_hi, pop_lo, pop_hi, lhs, rhs });
        }
    }
    Ok(IdTestResult {
        samples,
        holds_fraction: holds as f64 / samples as f64,
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TarskiDirection {
    FromBottom,
    FromTop,
}

/// Extremal best-response iteration on the population capital scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TarskiResult {
    pub aggregate_capital: f64,
    pub admission_prob: f64,
    pub iterations: usize,
    pub converged: bool,
    pub non_monotone: bool,
    pub breaking_step: Option<usize>,
}

/// Iterate s ← μ·k(λ_Q; P(s)) + (1−μ)·k(λ_N; P(s)) from the lattice
/// bottom (no capital anywhere) or top (everyone at the box edge), each
/// lab normalized to one RA. Iterates are required to move monotonically;
/// a violation halts the iteration and flags the result.
pub fn tarski_extremal(
    econ: &EconomyParams,
    tech: &TechParams,
    direction: TarskiDirection,
) -> Result<TarskiResult> {
    let top = SolveOptions::default().search_box.k_max;
    let mut s = match direction {
        TarskiDirection::FromBottom => 0.0,
        TarskiDirection::FromTop => top,
    };
    let max_iterations = 200;
    for iter in 1..=max_iterations {
        let p = population_admission(s, econ, tech);
        let k_q = best_capital(PIType::QualityMax, p, econ, tech);
        let k_n = best_capital(PIType::QuantityMax, p, econ, tech);
        let next = econ.mu * k_q + (1.0 - econ.mu) * k_n;
        let violated = match direction {
            TarskiDirection::FromBottom => next < s - 1e-12,
            TarskiDirection::FromTop => next > s + 1e-12,
        };
        // the first step leaves the lattice corner by construction
        if violated && iter > 1 {
            return Ok(TarskiResult {
                aggregate_capital: s,
                admission_prob: p,
                iterations: iter,
                converged: false,
                non_monotone: true,
                breaking_step: Some(iter),
            });
        }
        if (next - s).abs() <= 1e-8 {
            return Ok(TarskiResult {
                aggregate_capital: next,
                admission_prob: population_admission(next, econ, tech),
                iterations: iter,
                converged: true,
                non_monotone: false,
                breaking_step: None,
            });
        }
        s = next;
    }
    Ok(TarskiResult {
        aggregate_capital: s,
        admission_prob: population_admission(s, econ, tech),
        iterations: max_iterations,
        converged: false,
        non_monotone: false,
        breaking_step: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use crate::tournament::default_good_signal_prob;

    fn setup() -> (EconomyParams, TechParams, GoodSignalProbs) {
        let e = reference::economy();
        let t = reference::tech();
        let g = default_good_signal_prob(&reference::signal(), &e);
        (e, t, GoodSignalProbs::uniform(g))
    }

    #[test]
    fn slack_capacity_converges_immediately() {
        let (mut e, t, _) = setup();
        e.slots = 1.0;
        // tiny signal probability keeps M below the slot measure
        let g = GoodSignalProbs::uniform(0.004);
        let r = market_fixed_point(&e, &t, g, FixedPointOpts::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.admission_prob, 1.0);
    }

    #[test]
    fn worthless_research_clamps_the_pool() {
        let (mut e, t, g) = setup();
        e.gamma = 0.0;
        let r = market_fixed_point(&e, &t, g, FixedPointOpts::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.m_good, tournament::M_GOOD_EPS);
        assert_eq!(r.admission_prob, 1.0);
        assert_eq!(r.strategies.quality.n_ra_int, 0);
        assert_eq!(r.strategies.quantity.n_ra_int, 0);
    }

    #[test]
    fn reference_converges_and_is_seed_independent() {
        let (e, t, g) = setup();
        let mut probs = Vec::new();
        for p0 in [0.1, 0.5, 1.0] {
            let opts = FixedPointOpts { p0, ..FixedPointOpts::default() };
            let r = market_fixed_point(&e, &t, g, opts).unwrap();
            assert!(r.converged, "not converged from p0={p0}: residual {}", r.residual);
            assert!(r.residual <= 1e-8);
            probs.push(r.admission_prob);
        }
        for w in probs.windows(2) {
            assert!(
                (w[0] - w[1]).abs() <= 1e-6,
                "fixed point depends on the seed: {probs:?}"
            );
        }
    }

    #[test]
    fn increasing_differences_inert_capital() {
        let (e, mut t, _) = setup();
        t.alpha_a = 0.0;
        t.alpha_g = 0.0;
        t.alpha_l = 0.0;
        let r = increasing_differences_test(&e, &t, 200).unwrap();
        assert_eq!(r.holds_fraction, 1.0);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn increasing_differences_reference() {
        let (e, t, _) = setup();
        let r = increasing_differences_test(&e, &t, 1000).unwrap();
        assert!(r.holds_fraction >= 0.99, "fraction {}", r.holds_fraction);
    }

    #[test]
    fn increasing_differences_rejects_small_samples() {
        let (e, t, _) = setup();
        assert!(increasing_differences_test(&e, &t, 50).is_err());
    }

    #[test]
    fn tarski_inert_tech_meets_in_the_middle() {
        let (e, mut t, _) = setup();
        t.alpha_a = 0.0;
        t.alpha_g = 0.0;
        t.alpha_l = 0.0;
        t.c_k = 5.0;
        let bottom = tarski_extremal(&e, &t, TarskiDirection::FromBottom).unwrap();
        let top = tarski_extremal(&e, &t, TarskiDirection::FromTop).unwrap();
        assert!(bottom.converged && top.converged);
        assert!((bottom.aggregate_capital - top.aggregate_capital).abs() <= 1e-6);
    }

    #[test]
    fn tarski_extremal_ordering_and_monotone_shift() {
        let (e, t, _) = setup();
        let bottom = tarski_extremal(&e, &t, TarskiDirection::FromBottom).unwrap();
        let top = tarski_extremal(&e, &t, TarskiDirection::FromTop).unwrap();
        assert!(!bottom.non_monotone && !top.non_monotone);
        assert!(bottom.aggregate_capital <= top.aggregate_capital + 1e-8);

        let mut t2 = t.clone();
        t2.alpha_g *= 1.1;
        let bottom2 = tarski_extremal(&e, &t2, TarskiDirection::FromBottom).unwrap();
        let top2 = tarski_extremal(&e, &t2, TarskiDirection::FromTop).unwrap();
        assert!(bottom2.aggregate_capital >= bottom.aggregate_capital - 1e-8);
        assert!(top2.aggregate_capital >= top.aggregate_capital - 1e-8);
    }
}
