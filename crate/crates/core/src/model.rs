//! Parameters and concrete functional forms.
//!
//! Every sign condition the model rests on (skill-biased augmentation,
//! leveling that favors the low type, single crossing of effort costs,
//! convex capital costs) holds globally for the forms below, not just on a
//! tested range.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Population, preference, and market constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomyParams {
    /// Publication value scale (γ ≥ 0; zero makes research worthless).
    pub gamma: f64,
    /// PI discount factor, strictly inside (0,1).
    pub delta: f64,
    /// RA discount factor, strictly inside (0,1).
    pub beta_ra: f64,
    /// Fraction of quality-maximizing PIs, strictly inside (0,1).
    pub mu: f64,
    /// Prior probability that an RA is high ability, strictly inside (0,1).
    pub p: f64,
    /// Net present value of admission (V > 0).
    pub v_phd: f64,
    /// Measure of program slots S ∈ (0,1].
    pub slots: f64,
    /// High RA ability, 0 < θ_L < θ_H ≤ 1.
    pub theta_h: f64,
    /// Low RA ability.
    pub theta_l: f64,
    /// Wage lower bound (stipends cannot go negative).
    pub w_floor: f64,
}

impl EconomyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::config("gamma must be nonnegative"));
        }
        for (name, v) in [
            ("delta", self.delta),
            ("beta_ra", self.beta_ra),
            ("mu", self.mu),
            ("p", self.p),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::config(format!("{name} must lie strictly in (0,1)")));
            }
        }
        if !(self.v_phd > 0.0) {
            return Err(Error::config("v_phd must be positive"));
        }
        if !(self.slots > 0.0 && self.slots <= 1.0) {
            return Err(Error::config("slots must lie in (0,1]"));
        }
        if !(0.0 < self.theta_l && self.theta_l < self.theta_h && self.theta_h <= 1.0) {
            return Err(Error::config("ability levels must satisfy 0 < theta_l < theta_h <= 1"));
        }
        if !(self.w_floor >= 0.0) {
            return Err(Error::config("w_floor must be nonnegative"));
        }
        Ok(())
    }

    /// Population mean ability p·θ_H + (1−p)·θ_L.
    pub fn theta_bar(&self) -> f64 {
        self.p * self.theta_h + (1.0 - self.p) * self.theta_l
    }
}

/// AI technology efficiencies and functional-form constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechParams {
    /// Automation efficiency α_A ≥ 0 (displacement channel).
    pub alpha_a: f64,
    /// Augmentation efficiency α_G ≥ 0 (skill-biased channel).
    pub alpha_g: f64,
    /// Leveling efficiency α_L ≥ 0 (effort-cost compression).
    pub alpha_l: f64,
    /// Effort-laundering strength κ ∈ [0,1].
    pub kappa: f64,
    /// Routine-task share boundary τ ∈ (0,1).
    pub tau: f64,
    /// Baseline success scale π_0 ∈ (0,1).
    pub pi_0: f64,
    /// Low-effort success discount ρ ∈ [0,1).
    pub rho: f64,
    /// Effort cost scale c_0 > 0.
    pub c_0: f64,
    /// Capital cost curvature c_k > 0.
    pub c_k: f64,
}

impl TechParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha_a", self.alpha_a),
            ("alpha_g", self.alpha_g),
            ("alpha_l", self.alpha_l),
        ] {
            if !(v >= 0.0) {
                return Err(Error::config(format!("{name} must be nonnegative")));
            }
        }
        if !(self.kappa >= 0.0 && self.kappa <= 1.0) {
            return Err(Error::config("kappa must lie in [0,1]"));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::config("tau must lie strictly in (0,1)"));
        }
        if !(self.pi_0 > 0.0 && self.pi_0 < 1.0) {
            return Err(Error::config("pi_0 must lie strictly in (0,1)"));
        }
        if !(self.rho >= 0.0 && self.rho < 1.0) {
            return Err(Error::config("rho must lie in [0,1)"));
        }
        if !(self.c_0 > 0.0) {
            return Err(Error::config("c_0 must be positive"));
        }
        if !(self.c_k > 0.0) {
            return Err(Error::config("c_k must be positive"));
        }
        Ok(())
    }
}

/// PI objective type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PIType {
    /// Strictly concave publication value γ·ln(1+N); favors depth.
    QualityMax,
    /// Linear publication value γ·N; favors throughput.
    QuantityMax,
}

impl PIType {
    pub const BOTH: [PIType; 2] = [PIType::QualityMax, PIType::QuantityMax];

    pub fn label(self) -> &'static str {
        match self {
            PIType::QualityMax => "quality_max",
            PIType::QuantityMax => "quantity_max",
        }
    }
}

/// RA effort level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effort {
    Low,
    High,
}

// === functional forms ===

/// Share of the routine-task range performed autonomously by AI:
/// I(k) = τ·(1 − exp(−α_A·k)) ∈ [0, τ).
pub fn automation_share(k_a: f64, tech: &TechParams) -> Result<f64> {
    if !(k_a >= 0.0) {
        return Err(Error::domain(format!("automation capital must be nonnegative, got {k_a}")));
    }
    Ok(automation_share_raw(k_a, tech))
}

#[inline]
pub(crate) fn automation_share_raw(k_a: f64, tech: &TechParams) -> f64 {
    tech.tau * (1.0 - (-tech.alpha_a * k_a).exp())
}

#[inline]
pub(crate) fn automation_share_deriv(k_a: f64, tech: &TechParams) -> f64 {
    tech.tau * tech.alpha_a * (-tech.alpha_a * k_a).exp()
}

/// Task success probability π(e,θ,k_g).
///
/// High effort: θ·(π_0 + (1−π_0)·(1 − exp(−α_G·k_g))); low effort is the
/// same scaled by ρ. The cross-partial ∂²π/∂θ∂k_g = (1−π_0)·α_G·e^{−α_G k_g}
/// is strictly positive whenever α_G > 0, so augmentation is skill biased.
pub fn success_prob(effort: Effort, theta: f64, k_g: f64, tech: &TechParams) -> Result<f64> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::domain(format!("ability must lie in (0,1], got {theta}")));
    }
    if !(k_g >= 0.0) {
        return Err(Error::domain(format!("augmentation capital must be nonnegative, got {k_g}")));
    }
    let high = theta * success_scale_raw(k_g, tech);
    Ok(match effort {
        Effort::High => high,
        Effort::Low => tech.rho * high,
    })
}

/// Ability-free factor of the high-effort success probability.
#[inline]
pub(crate) fn success_scale_raw(k_g: f64, tech: &TechParams) -> f64 {
    tech.pi_0 + (1.0 - tech.pi_0) * (1.0 - (-tech.alpha_g * k_g).exp())
}

#[inline]
pub(crate) fn success_scale_deriv(k_g: f64, tech: &TechParams) -> f64 {
    (1.0 - tech.pi_0) * tech.alpha_g * (-tech.alpha_g * k_g).exp()
}

/// Cost of effort. Low effort is free; high effort costs
/// c_0 / (θ·(1 + α_L·k_ai)), so c(1,θ_L,·) > c(1,θ_H,·) for every capital
/// level (single crossing) and the leveling channel cuts the low type's
/// cost faster.
pub fn effort_cost(effort: Effort, theta: f64, k_ai: f64, tech: &TechParams) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::domain(format!("ability must be positive, got {theta}")));
    }
    if !(k_ai >= 0.0) {
        return Err(Error::domain(format!("AI capital must be nonnegative, got {k_ai}")));
    }
    Ok(match effort {
        Effort::Low => 0.0,
        Effort::High => effort_cost_raw(theta, k_ai, tech),
    })
}

#[inline]
pub(crate) fn effort_cost_raw(theta: f64, k_ai: f64, tech: &TechParams) -> f64 {
    tech.c_0 / (theta * (1.0 + tech.alpha_l * k_ai))
}

#[inline]
pub(crate) fn effort_cost_deriv(theta: f64, k_ai: f64, tech: &TechParams) -> f64 {
    let d = 1.0 + tech.alpha_l * k_ai;
    -tech.c_0 * tech.alpha_l / (theta * d * d)
}

/// Convex capital cost (c_k/2)·k².
pub fn capital_cost(k_total: f64, tech: &TechParams) -> Result<f64> {
    if !(k_total >= 0.0) {
        return Err(Error::domain(format!("capital must be nonnegative, got {k_total}")));
    }
    Ok(capital_cost_raw(k_total, tech))
}

#[inline]
pub(crate) fn capital_cost_raw(k_total: f64, tech: &TechParams) -> f64 {
    0.5 * tech.c_k * k_total * k_total
}

/// Publication value V_λ(N): γ·N for a quantity maximizer, γ·ln(1+N) for a
/// quality maximizer.
pub fn pi_value(n_papers: f64, pi_type: PIType, econ: &EconomyParams) -> Result<f64> {
    if !(n_papers >= 0.0) {
        return Err(Error::domain(format!("paper count must be nonnegative, got {n_papers}")));
    }
    Ok(pi_value_raw(n_papers, pi_type, econ))
}

#[inline]
pub(crate) fn pi_value_raw(n_papers: f64, pi_type: PIType, econ: &EconomyParams) -> f64 {
    match pi_type {
        PIType::QuantityMax => econ.gamma * n_papers,
        PIType::QualityMax => econ.gamma * n_papers.ln_1p(),
    }
}

/// Marginal publication value V′_λ(N).
#[inline]
pub(crate) fn pi_value_deriv(n_papers: f64, pi_type: PIType, econ: &EconomyParams) -> f64 {
    match pi_type {
        PIType::QuantityMax => econ.gamma,
        PIType::QualityMax => econ.gamma / (1.0 + n_papers),
    }
}
