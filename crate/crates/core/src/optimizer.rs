//! Stage-1 solver: each PI type's choice of (k_a, k_g, n_ra).
//!
//! The solver seeds from a brute-force lattice argmax and refines by cyclic
//! coordinate ascent, root-finding each coordinate's partial derivative by
//! bisection. The lattice oracle stays available as an independent check:
//! refined utility must never fall below the oracle's.
//!
//! Head count is continuous inside the solver; the best integer neighbor is
//! chosen afterwards by direct comparison (the objective is unimodal along
//! n for both utility shapes).

use crate::contract;
use crate::model::{self, EconomyParams, PIType, TechParams};
use crate::production;
use crate::{Error, Result};

const DERIV_TOL: f64 = 1e-10;
const POS_TOL: f64 = 1e-13;
const FOC_TOL: f64 = 1e-8;
const MAX_CYCLES: usize = 200;
const BOUND_EPS: f64 = 1e-9;

/// Bounds of the stage-1 search box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBox {
    pub k_max: f64,
    pub n_max: f64,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox { k_max: 10.0, n_max: 10.0 }
    }
}

/// Solver knobs. The seed resolution trades oracle sharpness for speed; the
/// refinement step recovers full precision from any seed in the right basin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub search_box: SearchBox,
    pub seed_resolution: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { search_box: SearchBox::default(), seed_resolution: 32 }
    }
}

/// Where a coordinate sits relative to the search box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CoordStatus {
    Interior,
    AtLower,
    AtUpper,
}

/// One PI type's solved decision bundle.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PIStrategy {
    pub k_a: f64,
    pub k_g: f64,
    pub n_ra: f64,
    pub n_ra_int: u32,
    pub utility: f64,
    /// Objective partials at the returned point, ordered (k_a, k_g, n).
    /// Interior coordinates are driven to ~0; boundary coordinates report
    /// the inward derivative instead.
    pub foc_residuals: [f64; 3],
    pub coord_status: [CoordStatus; 3],
    /// Linear publication value with marginal value above the wage at the
    /// box bound: no interior FOC in n exists, the head count is reported
    /// at the bound rather than faked as interior.
    pub scale_unbounded: bool,
}

impl PIStrategy {
    pub fn k_total(&self) -> f64 {
        self.k_a + self.k_g
    }

    /// Share of capital in the augmentation channel; 1.0 when no capital is
    /// held (the degenerate case counts as all-augmentation).
    pub fn augmentation_share(&self) -> f64 {
        let total = self.k_total();
        if total > 0.0 {
            self.k_g / total
        } else {
            1.0
        }
    }
}

/// Stationary per-period payoff of a PI:
/// V_λ(N(k_a,k_g,n)) − n·w(k_a+k_g) − C(k_a+k_g).
///
/// The infinite discounted sum is this value times the positive constant
/// 1/(1−δ), so the argmax is unchanged by optimizing per period.
pub fn pi_objective(
    k_a: f64,
    k_g: f64,
    n_ra: f64,
    pi_type: PIType,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<f64> {
    if !(k_a >= 0.0 && k_g >= 0.0 && n_ra >= 0.0) {
        return Err(Error::domain("strategy components must be nonnegative".to_string()));
    }
    if !(0.0..=1.0).contains(&admission_prob) {
        return Err(Error::domain(format!(
            "admission probability must lie in [0,1], got {admission_prob}"
        )));
    }
    let obj = Objective::new(pi_type, admission_prob, econ, tech);
    Ok(obj.eval(k_a, k_g, n_ra))
}

/// Exhaustive lattice search over the box. Deterministic: ties resolve to
/// the lexicographically smallest (k_a, k_g, n).
pub fn grid_oracle(
    pi_type: PIType,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
    resolution: usize,
) -> Result<PIStrategy> {
    grid_oracle_in(pi_type, admission_prob, econ, tech, resolution, SearchBox::default())
}

pub fn grid_oracle_in(
    pi_type: PIType,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
    resolution: usize,
    search_box: SearchBox,
) -> Result<PIStrategy> {
    if resolution < 8 {
        return Err(Error::config(format!("grid resolution must be at least 8, got {resolution}")));
    }
    if !(0.0..=1.0).contains(&admission_prob) {
        return Err(Error::domain(format!(
            "admission probability must lie in [0,1], got {admission_prob}"
        )));
    }
    let obj = Objective::new(pi_type, admission_prob, econ, tech);
    let axis = |max: f64| -> Vec<f64> {
        (0..resolution).map(|i| max * i as f64 / (resolution - 1) as f64).collect()
    };
    let ks = axis(search_box.k_max);
    let ns = axis(search_box.n_max);

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0, 0.0);
    for &ka in &ks {
        let one_minus_i = 1.0 - model::automation_share_raw(ka, tech);
        for &kg in &ks {
            let mp = production::mean_success_raw(kg, econ, tech) * one_minus_i;
            let wage = contract::pc_wage_raw(ka + kg, admission_prob, econ, tech);
            let fixed = -model::capital_cost_raw(ka + kg, tech);
            for &n in &ns {
                let u = model::pi_value_raw(n * mp, pi_type, econ) - n * wage + fixed;
                if u > best.0 {
                    best = (u, ka, kg, n);
                }
            }
        }
    }
    Ok(obj.strategy_at(best.1, best.2, best.3, search_box))
}

/// Solve the PI's problem with default options.
pub fn solve_pi(
    pi_type: PIType,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<PIStrategy> {
    solve_pi_with(pi_type, admission_prob, econ, tech, SolveOptions::default())
}

/// Grid seed plus coordinate-wise FOC refinement. Refines from several of
/// the best lattice cells so a near-tied second basin cannot win the oracle
/// comparison against the returned point.
pub fn solve_pi_with(
    pi_type: PIType,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
    opts: SolveOptions,
) -> Result<PIStrategy> {
    if opts.seed_resolution < 8 {
        return Err(Error::config(format!(
            "seed resolution must be at least 8, got {}",
            opts.seed_resolution
        )));
    }
    if !(0.0..=1.0).contains(&admission_prob) {
        return Err(Error::domain(format!(
            "admission probability must lie in [0,1], got {admission_prob}"
        )));
    }
    let obj = Objective::new(pi_type, admission_prob, econ, tech);
    let sb = opts.search_box;
    let seeds = top_seeds(&obj, sb, opts.seed_resolution, 8);
    let cell_k = sb.k_max / (opts.seed_resolution - 1) as f64;
    let cell_n = sb.n_max / (opts.seed_resolution - 1) as f64;

    let mut best: Option<([f64; 3], bool)> = None;
    let mut best_u = f64::NEG_INFINITY;
    for seed in &seeds {
        let (x, converged) = refine(&obj, sb, *seed, [cell_k, cell_k, cell_n]);
        let u = obj.eval(x[0], x[1], x[2]);
        let better = u > best_u + 1e-12
            || ((u - best_u).abs() <= 1e-12
                && best.is_none_or(|(b, _)| (x[0], x[1], x[2]) < (b[0], b[1], b[2])));
        if better {
            best_u = u;
            best = Some((x, converged));
        }
    }
    let (x, converged) = best.expect("at least one seed");
    if !converged {
        return Err(Error::NonConvergence {
            message: format!("coordinate refinement did not settle within {MAX_CYCLES} cycles"),
            last: Box::new(obj.strategy_at(x[0], x[1], x[2], sb)),
        });
    }
    Ok(obj.strategy_at(x[0], x[1], x[2], sb))
}

/// Labor-demand response to an exogenous capital shift, computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaborDemandDerivative {
    /// Central finite difference of the re-solved head count as both capital
    /// coordinates shift together, wage frozen at the optimum.
    pub fd: f64,
    /// Implicit-function-theorem ratio −(∂F/∂K)/(∂F/∂n) along the same
    /// direction; undefined for the linear utility (∂F/∂n = 0).
    pub ift: Option<f64>,
}

/// ∂n*/∂K at the stage-1 optimum, where the capital shift moves k_a and k_g
/// together (the model's split of one capital stock) and the wage is held at
/// its optimum value, matching the FOC being differentiated.
pub fn labor_demand_derivative(
    pi_type: PIType,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<LaborDemandDerivative> {
    labor_demand_derivative_with(pi_type, admission_prob, econ, tech, SolveOptions::default())
}

pub fn labor_demand_derivative_with(
    pi_type: PIType,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
    opts: SolveOptions,
) -> Result<LaborDemandDerivative> {
    let s = solve_pi_with(pi_type, admission_prob, econ, tech, opts)?;
    let sb = opts.search_box;
    if s.n_ra <= BOUND_EPS {
        return Err(Error::precondition(
            "labor demand derivative needs an interior optimum; n* sits at the lower bound 0",
        ));
    }
    if s.n_ra >= sb.n_max - BOUND_EPS {
        return Err(Error::precondition(format!(
            "labor demand derivative needs an interior optimum; n* sits at the box bound {}",
            sb.n_max
        )));
    }
    let obj = Objective::new(pi_type, admission_prob, econ, tech);
    if obj.grad(s.k_a, s.k_g, s.n_ra)[2].abs() > FOC_TOL {
        return Err(Error::precondition("head-count FOC does not bind at the returned optimum"));
    }

    let w_bar = obj.wage(s.k_total());
    let h = 1e-3 * 1.0f64.max(s.k_total());
    let n_at = |t: f64| -> f64 {
        let (ka, kg) = (s.k_a + t, s.k_g + t);
        match pi_type {
            PIType::QualityMax => {
                // root of γ·MP/(1+n·MP) = w̄ in n, bisected on [0, n_max]
                let mp = production::marginal_product_raw(ka, kg, econ, tech);
                let f = |n: f64| econ.gamma * mp / (1.0 + n * mp) - w_bar;
                if f(0.0) <= 0.0 {
                    return 0.0;
                }
                if f(sb.n_max) >= 0.0 {
                    return sb.n_max;
                }
                let (mut a, mut b) = (0.0, sb.n_max);
                while b - a > 1e-13 {
                    let m = 0.5 * (a + b);
                    if f(m) > 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                0.5 * (a + b)
            }
            PIType::QuantityMax => {
                let slope =
                    econ.gamma * production::marginal_product_raw(ka, kg, econ, tech) - w_bar;
                if slope > DERIV_TOL {
                    sb.n_max
                } else if slope < -DERIV_TOL {
                    0.0
                } else {
                    s.n_ra
                }
            }
        }
    };
    let fd = (n_at(h) - n_at(-h)) / (2.0 * h);
    let ift = match pi_type {
        PIType::QualityMax => {
            let mp = production::marginal_product_raw(s.k_a, s.k_g, econ, tech);
            let mp_dir = production::marginal_product_dir_deriv(s.k_a, s.k_g, econ, tech);
            Some(mp_dir / (mp * mp))
        }
        PIType::QuantityMax => None,
    };
    Ok(LaborDemandDerivative { fd, ift })
}

// === objective internals ===

pub(crate) struct Objective<'a> {
    pi_type: PIType,
    admission_prob: f64,
    econ: &'a EconomyParams,
    tech: &'a TechParams,
}

impl<'a> Objective<'a> {
    pub(crate) fn new(
        pi_type: PIType,
        admission_prob: f64,
        econ: &'a EconomyParams,
        tech: &'a TechParams,
    ) -> Self {
        Objective { pi_type, admission_prob, econ, tech }
    }

    pub(crate) fn wage(&self, k_tot: f64) -> f64 {
        contract::pc_wage_raw(k_tot, self.admission_prob, self.econ, self.tech)
    }

    pub(crate) fn eval(&self, k_a: f64, k_g: f64, n: f64) -> f64 {
        let k_tot = k_a + k_g;
        let n_papers = n * production::marginal_product_raw(k_a, k_g, self.econ, self.tech);
        model::pi_value_raw(n_papers, self.pi_type, self.econ) - n * self.wage(k_tot)
            - model::capital_cost_raw(k_tot, self.tech)
    }

    pub(crate) fn grad(&self, k_a: f64, k_g: f64, n: f64) -> [f64; 3] {
        let k_tot = k_a + k_g;
        let one_minus_i = 1.0 - model::automation_share_raw(k_a, self.tech);
        let pibar = production::mean_success_raw(k_g, self.econ, self.tech);
        let mp = pibar * one_minus_i;
        let n_papers = n * mp;
        let v_prime = model::pi_value_deriv(n_papers, self.pi_type, self.econ);
        let w_prime = contract::pc_wage_deriv_raw(k_tot, self.admission_prob, self.econ, self.tech);
        let c_prime = self.tech.c_k * k_tot;
        let dn_dka = -n * pibar * model::automation_share_deriv(k_a, self.tech);
        let dn_dkg =
            n * production::mean_success_deriv(k_g, self.econ, self.tech) * one_minus_i;
        [
            v_prime * dn_dka - n * w_prime - c_prime,
            v_prime * dn_dkg - n * w_prime - c_prime,
            v_prime * mp - self.wage(k_tot),
        ]
    }

    fn strategy_at(&self, k_a: f64, k_g: f64, n: f64, sb: SearchBox) -> PIStrategy {
        let status = |v: f64, max: f64| {
            if v <= BOUND_EPS {
                CoordStatus::AtLower
            } else if v >= max - BOUND_EPS {
                CoordStatus::AtUpper
            } else {
                CoordStatus::Interior
            }
        };
        let grad = self.grad(k_a, k_g, n);
        let n_floor = n.floor().max(0.0);
        let n_ceil = n.ceil().min(sb.n_max.floor());
        let n_int = if self.eval(k_a, k_g, n_ceil) > self.eval(k_a, k_g, n_floor) {
            n_ceil
        } else {
            n_floor
        } as u32;
        let scale_unbounded = self.pi_type == PIType::QuantityMax
            && n >= sb.n_max - BOUND_EPS
            && grad[2] > 1e-12;
        PIStrategy {
            k_a,
            k_g,
            n_ra: n,
            n_ra_int: n_int,
            utility: self.eval(k_a, k_g, n),
            foc_residuals: grad,
            coord_status: [
                status(k_a, sb.k_max),
                status(k_g, sb.k_max),
                status(n, sb.n_max),
            ],
            scale_unbounded,
        }
    }
}

/// Best lattice cells, deduplicated so the refinement starts from distinct
/// basins rather than eight neighbors of the same peak.
fn top_seeds(obj: &Objective, sb: SearchBox, resolution: usize, count: usize) -> Vec<[f64; 3]> {
    let axis = |max: f64| -> Vec<f64> {
        (0..resolution).map(|i| max * i as f64 / (resolution - 1) as f64).collect()
    };
    let ks = axis(sb.k_max);
    let ns = axis(sb.n_max);
    let cell_k = sb.k_max / (resolution - 1) as f64;
    let cell_n = sb.n_max / (resolution - 1) as f64;

    let mut scored: Vec<(f64, [f64; 3])> = Vec::with_capacity(resolution * resolution);
    for &ka in &ks {
        for &kg in &ks {
            // head count maximized per capital cell; keeps the candidate list small
            let mut cell_best = (f64::NEG_INFINITY, 0.0);
            for &n in &ns {
                let u = obj.eval(ka, kg, n);
                if u > cell_best.0 {
                    cell_best = (u, n);
                }
            }
            scored.push((cell_best.0, [ka, kg, cell_best.1]));
        }
    }
    scored.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
    });

    let mut seeds: Vec<[f64; 3]> = Vec::with_capacity(count);
    for (_, cand) in scored {
        let close = seeds.iter().any(|s| {
            (s[0] - cand[0]).abs() <= 1.5 * cell_k
                && (s[1] - cand[1]).abs() <= 1.5 * cell_k
                && (s[2] - cand[2]).abs() <= 1.5 * cell_n
        });
        if !close {
            seeds.push(cand);
            if seeds.len() >= count {
                break;
            }
        }
    }
    seeds
}

/// Cyclic coordinate ascent; each coordinate is optimized by bisection on
/// its partial derivative inside a locally grown bracket.
fn refine(obj: &Objective, sb: SearchBox, start: [f64; 3], cells: [f64; 3]) -> ([f64; 3], bool) {
    let mut x = start;
    let maxes = [sb.k_max, sb.k_max, sb.n_max];
    for _ in 0..MAX_CYCLES {
        let mut moved = 0.0f64;
        for c in 0..3 {
            let new_v = line_opt(obj, &x, c, maxes[c], cells[c]);
            moved = moved.max((new_v - x[c]).abs());
            x[c] = new_v;
        }
        if moved < 1e-11 {
            return (x, true);
        }
    }
    (x, false)
}

fn line_opt(obj: &Objective, x: &[f64; 3], coord: usize, max: f64, cell: f64) -> f64 {
    let d = |v: f64| -> f64 {
        let mut y = *x;
        y[coord] = v;
        obj.grad(y[0], y[1], y[2])[coord]
    };

    // linear utility has no interior FOC in n: bang-bang on the slope sign
    if coord == 2 && obj.pi_type == PIType::QuantityMax {
        let slope = d(x[2]);
        return if slope > DERIV_TOL {
            max
        } else if slope < -DERIV_TOL {
            0.0
        } else {
            x[2]
        };
    }

    let mut a = (x[coord] - cell).max(0.0);
    let mut b = (x[coord] + cell).min(max);
    let mut step = cell.max(1e-3);
    while b < max && d(b) > 0.0 {
        a = b;
        step *= 2.0;
        b = (b + step).min(max);
    }
    let mut step = cell.max(1e-3);
    while a > 0.0 && d(a) < 0.0 {
        b = a;
        step *= 2.0;
        a = (a - step).max(0.0);
    }
    let da = d(a);
    let db = d(b);
    if da <= 0.0 && a <= 0.0 {
        return 0.0;
    }
    if db >= 0.0 && b >= max {
        return max;
    }
    // d(a) ≥ 0 ≥ d(b): bisect the stationary point
    while b - a > POS_TOL {
        let m = 0.5 * (a + b);
        let dm = d(m);
        if dm.abs() < DERIV_TOL {
            return m;
        }
        if dm > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    /// π̄ = 0.5 at all k_g, I = 0.2 at k_a = ln 1.5, wage pinned at 0.1,
    /// capital cost 0.05 at the pinned capital level.
    fn pinned_scenario() -> (EconomyParams, TechParams, f64) {
        let mut e = reference::economy();
        e.gamma = 1.0;
        e.theta_h = 1.0;
        e.theta_l = 1.0;
        e.w_floor = 0.0;
        let mut t = reference::tech();
        t.pi_0 = 0.5;
        t.alpha_g = 0.0;
        t.alpha_a = 1.0;
        t.tau = 0.6;
        t.alpha_l = 0.0;
        t.c_0 = 0.1; // wage = c_0/θ_H at P = 0
        let k_a = 1.5f64.ln();
        t.c_k = 0.1 / (k_a * k_a); // C(k_a) = 0.05
        (e, t, k_a)
    }

    #[test]
    fn pi_objective_examples() {
        let (e, t, k_a) = pinned_scenario();
        assert_eq!(
            pi_objective(0.0, 0.0, 0.0, PIType::QuantityMax, 0.0, &e, &t).unwrap(),
            0.0
        );
        // N = 2·0.5·0.8 = 0.8; value 0.8 − 0.2 − 0.05 = 0.55
        assert_relative_eq!(
            pi_objective(k_a, 0.0, 2.0, PIType::QuantityMax, 0.0, &e, &t).unwrap(),
            0.55,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            pi_objective(k_a, 0.0, 2.0, PIType::QualityMax, 0.0, &e, &t).unwrap(),
            1.8f64.ln() - 0.25,
            max_relative = 1e-12
        );
        assert!(pi_objective(-0.1, 0.0, 1.0, PIType::QualityMax, 0.0, &e, &t).is_err());
    }

    #[test]
    fn grid_oracle_degenerate_cases() {
        let mut e = reference::economy();
        let t = reference::tech();
        e.gamma = 0.0;
        let s = grid_oracle(PIType::QualityMax, 0.5, &e, &t, 16).unwrap();
        assert_eq!((s.k_a, s.k_g, s.n_ra), (0.0, 0.0, 0.0));

        // wage above the maximal marginal value: hire nobody
        let mut e = reference::economy();
        e.gamma = 0.1;
        let mut t = reference::tech();
        t.c_0 = 5.0;
        t.alpha_l = 0.0;
        let s = grid_oracle(PIType::QuantityMax, 0.0, &e, &t, 16).unwrap();
        assert_eq!(s.n_ra, 0.0);

        assert!(matches!(
            grid_oracle(PIType::QualityMax, 0.5, &e, &t, 7),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn solve_pi_useless_capital_stays_at_zero() {
        let mut e = reference::economy();
        e.gamma = 1.0;
        let mut t = reference::tech();
        t.alpha_a = 0.0;
        t.alpha_g = 0.0;
        t.alpha_l = 0.0;
        t.c_k = 50.0;
        let s = solve_pi(PIType::QualityMax, 0.1, &e, &t).unwrap();
        assert_eq!((s.k_a, s.k_g), (0.0, 0.0));
    }

    #[test]
    fn quantity_max_foc_identity_and_box_flag() {
        // knife edge: wage exactly γ·π̄, residual in n is zero everywhere
        let mut e = reference::economy();
        e.gamma = 1.0;
        e.theta_h = 1.0;
        e.theta_l = 1.0;
        let mut t = reference::tech();
        t.alpha_a = 0.0;
        t.alpha_g = 0.0;
        t.alpha_l = 0.0;
        t.pi_0 = 0.5;
        t.c_0 = 0.5;
        let s = solve_pi(PIType::QuantityMax, 0.0, &e, &t).unwrap();
        assert!(s.foc_residuals[2].abs() <= FOC_TOL);
        assert!(!s.scale_unbounded);

        // marginal value above the wage everywhere: pinned at the box, flagged
        t.c_0 = 0.2;
        let s = solve_pi(PIType::QuantityMax, 0.0, &e, &t).unwrap();
        assert_eq!(s.n_ra, SearchBox::default().n_max);
        assert_eq!(s.coord_status[2], CoordStatus::AtUpper);
        assert!(s.scale_unbounded);
    }

    /// Reference economy at a small pinned admission probability keeps the
    /// quality maximizer's head count interior.
    fn interior_quality_case() -> (EconomyParams, TechParams, f64) {
        let e = reference::economy();
        let mut t = reference::tech();
        t.alpha_g = 0.05;
        (e, t, 0.035)
    }

    #[test]
    fn quality_interior_optimum_satisfies_focs() {
        let (e, t, p) = interior_quality_case();
        let s = solve_pi(PIType::QualityMax, p, &e, &t).unwrap();
        assert_eq!(s.coord_status[2], CoordStatus::Interior, "n* not interior: {s:?}");
        assert!(s.foc_residuals[2].abs() <= FOC_TOL, "n-FOC residual {}", s.foc_residuals[2]);
        for c in 0..2 {
            if s.coord_status[c] == CoordStatus::Interior {
                assert!(s.foc_residuals[c].abs() <= FOC_TOL);
            }
        }
        // refined point dominates the oracle
        let oracle = grid_oracle(PIType::QualityMax, p, &e, &t, 48).unwrap();
        assert!(s.utility >= oracle.utility - 1e-6);
    }

    #[test]
    fn oracle_argmax_within_one_lattice_cell_of_solver() {
        let (e, t, p) = interior_quality_case();
        let res = 48usize;
        let cell = SearchBox::default().k_max / (res - 1) as f64;
        for ty in PIType::BOTH {
            let solved = solve_pi(ty, p, &e, &t).unwrap();
            let oracle = grid_oracle(ty, p, &e, &t, res).unwrap();
            assert!((solved.k_a - oracle.k_a).abs() <= cell + 1e-9);
            assert!((solved.k_g - oracle.k_g).abs() <= cell + 1e-9);
            assert!((solved.n_ra - oracle.n_ra).abs() <= cell + 1e-9);
        }
    }

    #[test]
    fn quality_hires_weakly_fewer_than_quantity() {
        let (e, t, p) = interior_quality_case();
        let q = solve_pi(PIType::QualityMax, p, &e, &t).unwrap();
        let n = solve_pi(PIType::QuantityMax, p, &e, &t).unwrap();
        assert!(q.n_ra <= n.n_ra + 1e-9);
        assert!(q.n_ra_int <= n.n_ra_int);
    }

    #[test]
    fn marginal_value_ordering() {
        let (e, t, _) = interior_quality_case();
        for i in 1..=30 {
            let n = i as f64 * 0.3;
            let mp = production::marginal_product(0.3, 1.0, &e, &t).unwrap();
            let papers = n * mp;
            assert!(papers > 0.0);
            let mv_q = model::pi_value_deriv(papers, PIType::QualityMax, &e) * mp;
            let mv_n = model::pi_value_deriv(papers, PIType::QuantityMax, &e) * mp;
            assert!(mv_q < mv_n);
        }
    }

    #[test]
    fn argmax_invariant_to_value_scaling() {
        let (e, t, p) = interior_quality_case();
        let base = solve_pi(PIType::QualityMax, p, &e, &t).unwrap();

        let scale = 1.0 / (1.0 - e.delta);
        let mut e2 = e.clone();
        let mut t2 = t.clone();
        e2.gamma *= scale;
        e2.v_phd *= scale;
        t2.c_0 *= scale;
        t2.c_k *= scale;
        let scaled = solve_pi(PIType::QualityMax, p, &e2, &t2).unwrap();

        assert_relative_eq!(base.k_a, scaled.k_a, epsilon = 1e-7);
        assert_relative_eq!(base.k_g, scaled.k_g, epsilon = 1e-7);
        assert_relative_eq!(base.n_ra, scaled.n_ra, epsilon = 1e-7);
        assert_relative_eq!(scaled.utility, scale * base.utility, max_relative = 1e-7);
    }

    #[test]
    fn labor_demand_regimes() {
        // automation dominant: shifting both capital coordinates up destroys
        // more task range than it augments
        let (e, t, p) = interior_quality_case();
        let d = labor_demand_derivative(PIType::QualityMax, p, &e, &t).unwrap();
        assert!(d.fd < -1e-6, "expected substitution, got fd={}", d.fd);

        // augmentation dominant
        let mut t2 = reference::tech();
        t2.alpha_a = 0.05;
        let d2 = labor_demand_derivative(PIType::QualityMax, p, &e, &t2).unwrap();
        assert!(d2.fd > 1e-6, "expected complementarity, got fd={}", d2.fd);

        // inert capital direction
        let mut e3 = reference::economy();
        e3.gamma = 2.0;
        let mut t3 = reference::tech();
        t3.alpha_a = 0.0;
        t3.alpha_g = 0.0;
        t3.alpha_l = 0.0;
        t3.c_0 = 0.4;
        let d3 = labor_demand_derivative(PIType::QualityMax, 0.0, &e3, &t3).unwrap();
        assert!(d3.fd.abs() < 1e-9);
        assert!(d3.ift.unwrap().abs() < 1e-12);
    }

    #[test]
    fn labor_demand_fd_matches_ift() {
        let (e, t, p) = interior_quality_case();
        let d = labor_demand_derivative(PIType::QualityMax, p, &e, &t).unwrap();
        let ift = d.ift.expect("concave utility has a defined IFT ratio");
        assert!(
            (d.fd - ift).abs() <= 1e-4 * 1.0f64.max(ift.abs()),
            "fd={} ift={}",
            d.fd,
            ift
        );
    }

    #[test]
    fn labor_demand_boundary_is_a_precondition_error() {
        // reference scenario at a generous admission probability pins the
        // quantity maximizer at the box
        let e = reference::economy();
        let t = reference::tech();
        let err = labor_demand_derivative(PIType::QuantityMax, 0.5, &e, &t).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "got {err:?}");
    }

    #[test]
    fn oracle_dominance_on_randomized_scenarios() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        for _ in 0..10 {
            let mut e = reference::economy();
            let mut t = reference::tech();
            let j = |rng: &mut rand_chacha::ChaCha8Rng| rng.gen_range(0.7..1.3);
            e.gamma *= j(&mut rng);
            e.v_phd *= j(&mut rng);
            t.c_0 *= j(&mut rng);
            t.c_k *= j(&mut rng);
            t.alpha_a *= j(&mut rng);
            t.alpha_g *= j(&mut rng);
            t.alpha_l *= j(&mut rng);
            let p = rng.gen_range(0.0..0.2);
            for ty in PIType::BOTH {
                let s = solve_pi(ty, p, &e, &t).unwrap();
                let oracle = grid_oracle(ty, p, &e, &t, 24).unwrap();
                assert!(
                    s.utility >= oracle.utility - 1e-6,
                    "oracle beat solver: {} vs {} ({ty:?})",
                    oracle.utility,
                    s.utility
                );
            }
        }
    }
}
