//! Task-based output aggregate.
//!
//! Expected output per RA is the mean task success probability over the
//! non-automated range, so N = n_RA · π̄(k_g) · (1 − I(k_a)) and the marginal
//! product of an RA is π̄·(1−I), independent of head count (the technology is
//! linear in labor). RA count is treated as a continuous quantity here; the
//! integer restriction lives in the optimizer.

use crate::model::{self, EconomyParams, Effort, TechParams};
use crate::{Error, Result};

/// One evaluated point of the production technology.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductionPoint {
    pub n_ra: f64,
    pub k_a: f64,
    pub k_g: f64,
    pub expected_papers: f64,
    pub mp_ra: f64,
}

/// Mean high-effort success probability over RA types:
/// π̄(k_g) = p·π(1,θ_H,k_g) + (1−p)·π(1,θ_L,k_g).
pub fn mean_success(k_g: f64, econ: &EconomyParams, tech: &TechParams) -> Result<f64> {
    let high = model::success_prob(Effort::High, econ.theta_h, k_g, tech)?;
    let low = model::success_prob(Effort::High, econ.theta_l, k_g, tech)?;
    Ok(econ.p * high + (1.0 - econ.p) * low)
}

#[inline]
pub(crate) fn mean_success_raw(k_g: f64, econ: &EconomyParams, tech: &TechParams) -> f64 {
    econ.theta_bar() * model::success_scale_raw(k_g, tech)
}

#[inline]
pub(crate) fn mean_success_deriv(k_g: f64, econ: &EconomyParams, tech: &TechParams) -> f64 {
    econ.theta_bar() * model::success_scale_deriv(k_g, tech)
}

/// Expected papers N = n · π̄(k_g) · (1 − I(k_a)).
pub fn expected_output(
    n_ra: f64,
    k_a: f64,
    k_g: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<f64> {
    if !(n_ra >= 0.0) {
        return Err(Error::domain(format!("RA count must be nonnegative, got {n_ra}")));
    }
    Ok(n_ra * mean_success(k_g, econ, tech)? * (1.0 - model::automation_share(k_a, tech)?))
}

/// Marginal product of an RA: MP = π̄(k_g)·(1 − I(k_a)).
pub fn marginal_product(
    k_a: f64,
    k_g: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<f64> {
    Ok(mean_success(k_g, econ, tech)? * (1.0 - model::automation_share(k_a, tech)?))
}

#[inline]
pub(crate) fn marginal_product_raw(
    k_a: f64,
    k_g: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> f64 {
    mean_success_raw(k_g, econ, tech) * (1.0 - model::automation_share_raw(k_a, tech))
}

/// Directional derivative of MP along (dk_a, dk_g) = (1, 1); the sum of the
/// decomposition terms.
#[inline]
pub(crate) fn marginal_product_dir_deriv(
    k_a: f64,
    k_g: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> f64 {
    let aug = mean_success_deriv(k_g, econ, tech) * (1.0 - model::automation_share_raw(k_a, tech));
    let disp = -mean_success_raw(k_g, econ, tech) * model::automation_share_deriv(k_a, tech);
    aug + disp
}

/// Split of ∂MP/∂K into its two channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpDecomposition {
    /// (∂π̄/∂k_g)·(1−I) ≥ 0 — productivity gain on remaining tasks.
    pub augmentation: f64,
    /// −π̄·(∂I/∂k_a) ≤ 0 — loss of task range to the machine.
    pub displacement: f64,
}

impl MpDecomposition {
    pub fn total(&self) -> f64 {
        self.augmentation + self.displacement
    }
}

/// Analytic decomposition of the capital effect on the RA marginal product.
/// The two terms sum to the directional derivative of MP along (1,1).
pub fn mp_decomposition(
    k_a: f64,
    k_g: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<MpDecomposition> {
    if !(k_a >= 0.0 && k_g >= 0.0) {
        return Err(Error::domain("capital inputs must be nonnegative".to_string()));
    }
    let augmentation =
        mean_success_deriv(k_g, econ, tech) * (1.0 - model::automation_share_raw(k_a, tech));
    let displacement =
        -mean_success_raw(k_g, econ, tech) * model::automation_share_deriv(k_a, tech);
    Ok(MpDecomposition { augmentation, displacement })
}

/// Evaluate the full production point at (n, k_a, k_g).
pub fn production_point(
    n_ra: f64,
    k_a: f64,
    k_g: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<ProductionPoint> {
    let expected_papers = expected_output(n_ra, k_a, k_g, econ, tech)?;
    let mp_ra = marginal_product(k_a, k_g, econ, tech)?;
    Ok(ProductionPoint { n_ra, k_a, k_g, expected_papers, mp_ra })
}
