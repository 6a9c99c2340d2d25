//! Stage-3 admissions market clearing under fixed capacity.
//!
//! The market admits Good-signal holders with probability P = min(1, S/M):
//! the capacity constraint binds whenever demand exceeds the slot measure,
//! and the congestion derivative −S/M² is what a marginal signal costs
//! everyone else.

use crate::model::EconomyParams;
use crate::optimizer::PIStrategy;
use crate::signal::SignalModel;
use crate::{Error, Result};

/// Floor on the aggregate signal measure so the clearing formula stays
/// callable when nobody signals.
pub const M_GOOD_EPS: f64 = 1e-9;

/// Cleared admissions market.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MarketState {
    pub m_good: f64,
    pub p_admit: f64,
    /// ∂P/∂M: −S/M² while the capacity constraint binds, 0 once everyone
    /// is admitted.
    pub congestion_derivative: f64,
}

/// Clear the market at a given Good-signal measure.
pub fn clear_market(m_good: f64, econ: &EconomyParams) -> Result<MarketState> {
    if !(m_good > 0.0) {
        return Err(Error::domain(format!(
            "good-signal measure must be positive, got {m_good}; an empty pool means everyone \
             is admitted and must not be cleared"
        )));
    }
    let raw = econ.slots / m_good;
    let (p_admit, congestion_derivative) = if raw < 1.0 {
        (raw, -econ.slots / (m_good * m_good))
    } else {
        (1.0, 0.0)
    };
    Ok(MarketState { m_good, p_admit, congestion_derivative })
}

/// Aggregate measure of Good signals over the unit mass of PIs:
/// M = μ·n(λ_Q)·g_Q + (1−μ)·n(λ_N)·g_N, clamped below at [`M_GOOD_EPS`].
///
/// Head counts enter as the integer hires; `good_signal_prob` is the chance
/// one hired RA ends the period with a Good signal.
pub fn aggregate_good_signals(
    quality: (&PIStrategy, f64),
    quantity: (&PIStrategy, f64),
    econ: &EconomyParams,
) -> Result<f64> {
    for (_, g) in [&quality, &quantity] {
        if !(0.0..=1.0).contains(g) {
            return Err(Error::domain(format!("good-signal probability must lie in [0,1], got {g}")));
        }
    }
    let m = econ.mu * quality.0.n_ra_int as f64 * quality.1
        + (1.0 - econ.mu) * quantity.0.n_ra_int as f64 * quantity.1;
    Ok(m.max(M_GOOD_EPS))
}

/// Default per-RA Good-signal probability: only high types clear the
/// posterior threshold, and only when novel output comes in high, so the
/// chance is p·P(y_N = high | θ_H, e = 1).
pub fn default_good_signal_prob(model: &SignalModel, econ: &EconomyParams) -> f64 {
    econ.p * model.a_h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PIType;
    use crate::optimizer::grid_oracle;
    use crate::reference;
    use approx::assert_relative_eq;

    fn strategy_with_n(n: u32) -> PIStrategy {
        let e = reference::economy();
        let t = reference::tech();
        let mut s = grid_oracle(PIType::QualityMax, 0.5, &e, &t, 8).unwrap();
        s.n_ra_int = n;
        s.n_ra = n as f64;
        s
    }

    #[test]
    fn clear_market_examples() {
        let mut e = reference::economy();
        e.slots = 0.1;
        let st = clear_market(0.4, &e).unwrap();
        assert_relative_eq!(st.p_admit, 0.25, max_relative = 1e-12);
        assert_relative_eq!(st.congestion_derivative, -0.625, max_relative = 1e-12);

        let st = clear_market(0.05, &e).unwrap();
        assert_eq!(st.p_admit, 1.0);
        assert_eq!(st.congestion_derivative, 0.0);

        assert!(clear_market(0.0, &e).is_err());
        assert!(clear_market(-1.0, &e).is_err());
    }

    #[test]
    fn market_clears_exactly() {
        let mut e = reference::economy();
        for (s, m) in [(0.3, 0.9), (0.25, 0.1), (0.7, 0.7), (0.01, 1.0)] {
            e.slots = s;
            let st = clear_market(m, &e).unwrap();
            let admitted = st.p_admit * m;
            let expected = s.min(m);
            assert!(
                (admitted - expected).abs() <= 4.0 * f64::EPSILON * expected.max(1.0),
                "clearing identity violated: {admitted} vs {expected}"
            );
        }
    }

    #[test]
    fn congestion_derivative_matches_finite_difference() {
        let e = reference::economy();
        let h = 1e-6;
        for m in [0.4, 0.6, 1.5, 3.0] {
            let st = clear_market(m, &e).unwrap();
            let fd = (clear_market(m + h, &e).unwrap().p_admit
                - clear_market(m - h, &e).unwrap().p_admit)
                / (2.0 * h);
            assert_relative_eq!(st.congestion_derivative, fd, max_relative = 1e-8, epsilon = 1e-8);
        }
    }

    #[test]
    fn clearing_is_homogeneous() {
        let mut e = reference::economy();
        e.slots = 0.2;
        let base = clear_market(0.5, &e).unwrap().p_admit;
        let mut e2 = reference::economy();
        e2.slots = 0.2 * 1.7;
        // scale above 1 on slots only stays valid while slots ≤ 1
        let scaled = clear_market(0.5 * 1.7, &e2).unwrap().p_admit;
        assert_relative_eq!(base, scaled, max_relative = 1e-12);
    }

    #[test]
    fn aggregate_examples() {
        let mut e = reference::economy();
        e.mu = 0.5;
        let q = strategy_with_n(1);
        let n = strategy_with_n(2);
        let m = aggregate_good_signals((&q, 0.5), (&n, 0.5), &e).unwrap();
        assert_relative_eq!(m, 0.75, max_relative = 1e-12);

        // nobody signals: clamp keeps the market clearable, nobody congests
        let m = aggregate_good_signals((&q, 0.0), (&n, 0.0), &e).unwrap();
        assert_eq!(m, M_GOOD_EPS);
        assert_eq!(clear_market(m, &e).unwrap().p_admit, 1.0);

        // single-type population
        e.mu = 1.0;
        let m = aggregate_good_signals((&q, 0.7), (&n, 0.9), &e).unwrap();
        assert_relative_eq!(m, 0.7, max_relative = 1e-12);

        assert!(aggregate_good_signals((&q, 1.2), (&n, 0.5), &e).is_err());
    }

    #[test]
    fn default_signal_prob_is_prior_times_novel_high() {
        let e = reference::economy();
        let model = reference::signal();
        assert_relative_eq!(
            default_good_signal_prob(&model, &e),
            0.4,
            max_relative = 1e-12
        );
    }
}
