//! Stage-2 relational contract: the RA's incentive window and the
//! participation-constraint wage.
//!
//! A separating configuration needs the admission premium
//! β_RA·[P(Adm|e=1) − P(Adm|e=0)]·V to land inside [c(1,θ_H,K), c(1,θ_L,K)].
//! The participation constraint binds for the high-ability RA who actually
//! exerts effort; its unfloored wage can go negative when the admission
//! premium is large ("hope labor"), in which case the floored wage plus the
//! reported slack make the rent visible.

use crate::model::{self, EconomyParams, Effort, TechParams};
use crate::{Error, Result};

/// Contract snapshot at a given capital level and admission prospect.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractTerms {
    pub wage: f64,
    /// β_RA·[P(Adm|e=1) − P(Adm|e=0)]·V.
    pub admission_premium: f64,
    /// premium ≥ c(1,θ_H,K): the high type is willing to work.
    pub ic_high_ok: bool,
    /// premium ≤ c(1,θ_L,K): the low type is not willing to mimic.
    pub ic_low_ok: bool,
    /// wage − unfloored wage ≥ 0; positive when the floor binds.
    pub pc_slack: f64,
}

impl ContractTerms {
    pub fn separating(&self) -> bool {
        self.ic_high_ok && self.ic_low_ok
    }
}

/// The premium interval that separates types: (c(1,θ_H,K), c(1,θ_L,K)).
/// The lower end is strictly below the upper end for every capital level.
pub fn ic_window(k_ai: f64, econ: &EconomyParams, tech: &TechParams) -> Result<(f64, f64)> {
    let hi_type_cost = model::effort_cost(Effort::High, econ.theta_h, k_ai, tech)?;
    let lo_type_cost = model::effort_cost(Effort::High, econ.theta_l, k_ai, tech)?;
    Ok((hi_type_cost, lo_type_cost))
}

/// Width of the separating window:
/// c_0·(1/θ_L − 1/θ_H)/(1 + α_L·k_ai), strictly shrinking as leveling works.
pub fn separation_width(k_ai: f64, econ: &EconomyParams, tech: &TechParams) -> Result<f64> {
    let (lo, hi) = ic_window(k_ai, econ, tech)?;
    Ok(hi - lo)
}

/// Participation-constraint wage.
///
/// Returns (wage, pc_slack) where the unfloored wage is
/// c(1,θ_H,K) − β_RA·P·V and the returned wage is floored at `w_floor`.
pub fn pc_wage(
    k_ai: f64,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&admission_prob) {
        return Err(Error::domain(format!(
            "admission probability must lie in [0,1], got {admission_prob}"
        )));
    }
    let cost = model::effort_cost(Effort::High, econ.theta_h, k_ai, tech)?;
    let raw = cost - econ.beta_ra * admission_prob * econ.v_phd;
    let wage = raw.max(econ.w_floor);
    Ok((wage, wage - raw))
}

#[inline]
pub(crate) fn pc_wage_raw(
    k_ai: f64,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> f64 {
    let raw = model::effort_cost_raw(econ.theta_h, k_ai, tech)
        - econ.beta_ra * admission_prob * econ.v_phd;
    raw.max(econ.w_floor)
}

/// Derivative of the floored wage in capital (zero where the floor binds).
#[inline]
pub(crate) fn pc_wage_deriv_raw(
    k_ai: f64,
    admission_prob: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> f64 {
    let raw = model::effort_cost_raw(econ.theta_h, k_ai, tech)
        - econ.beta_ra * admission_prob * econ.v_phd;
    if raw > econ.w_floor {
        model::effort_cost_deriv(econ.theta_h, k_ai, tech)
    } else {
        0.0
    }
}

/// Effort choice of an RA of ability θ facing a given admission premium.
/// Indifference resolves to high effort.
pub fn effort_best_response(
    theta: f64,
    k_ai: f64,
    admission_premium: f64,
    _econ: &EconomyParams,
    tech: &TechParams,
) -> Result<Effort> {
    if !(admission_premium >= 0.0) {
        return Err(Error::domain("admission premium must be nonnegative".to_string()));
    }
    let cost = model::effort_cost(Effort::High, theta, k_ai, tech)?;
    Ok(if admission_premium >= cost { Effort::High } else { Effort::Low })
}

/// Assemble the full contract snapshot given admission probabilities under
/// high and low effort.
pub fn contract_terms(
    k_ai: f64,
    p_adm_high_effort: f64,
    p_adm_low_effort: f64,
    econ: &EconomyParams,
    tech: &TechParams,
) -> Result<ContractTerms> {
    for p in [p_adm_high_effort, p_adm_low_effort] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("admission probability must lie in [0,1], got {p}")));
        }
    }
    let premium = econ.beta_ra * (p_adm_high_effort - p_adm_low_effort).max(0.0) * econ.v_phd;
    let (lo, hi) = ic_window(k_ai, econ, tech)?;
    let (wage, pc_slack) = pc_wage(k_ai, p_adm_high_effort, econ, tech)?;
    Ok(ContractTerms {
        wage,
        admission_premium: premium,
        ic_high_ok: premium >= lo,
        ic_low_ok: premium <= hi,
        pc_slack,
    })
}
