//! Stage-3 escalation subgame.
//!
//! After a symmetric productivity shock every PI picks Escalate or Status
//! Quo. A PI's payoff is their RA's unconditional admission probability
//! (own Good-signal chance times the conditional admission rate at the
//! aggregate signal measure) minus the escalation cost χ. Escalating buys a
//! better signal draw but congests the tournament for everyone; with χ > 0
//! the all-Escalate Nash outcome hands every PI exactly χ less than the
//! cooperative status quo, because the admitted mass is conserved at the
//! slot measure.

use serde::{Deserialize, Serialize};

use crate::contract;
use crate::model::{EconomyParams, Effort, TechParams};
use crate::{model, Error, Result};

/// Scenario-level description of the escalation game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmsRaceConfig {
    /// Good-signal probability under Status Quo.
    pub g_s: f64,
    /// Good-signal probability under Escalate, above `g_s`.
    pub g_e: f64,
    /// Escalation cost borne by the PI.
    pub chi: f64,
    /// AI capital level implied by escalating; feeds the wage rows of the
    /// regime comparison (the status quo is the pre-shock zero-capital lab).
    pub k_escalate: f64,
}

/// Population strategy labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EscalationChoice {
    StatusQuo,
    Escalate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dominance {
    Escalate,
    StatusQuo,
    None,
}

/// The one-shot escalation game evaluated at the population corners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscalationGame {
    pub g_s: f64,
    pub g_e: f64,
    pub chi: f64,
    /// Own payoff indexed [own strategy][population α ∈ {0,1}], with
    /// StatusQuo = row 0 and Escalate = row 1.
    pub payoff_matrix: [[f64; 2]; 2],
    pub dominant: Dominance,
    /// All-Escalate is strictly worse for PIs than all-StatusQuo.
    pub pareto_ranked: bool,
}

impl EscalationGame {
    pub fn payoff(&self, own: EscalationChoice, alpha_one: bool) -> f64 {
        let row = match own {
            EscalationChoice::StatusQuo => 0,
            EscalationChoice::Escalate => 1,
        };
        self.payoff_matrix[row][usize::from(alpha_one)]
    }

    /// Aggregate Good-signal measure at escalation share α.
    pub fn m_good(&self, alpha: f64) -> f64 {
        alpha * self.g_e + (1.0 - alpha) * self.g_s
    }

    /// Conditional admission probability at escalation share α.
    pub fn conditional_admission(&self, alpha: f64, econ: &EconomyParams) -> f64 {
        (econ.slots / self.m_good(alpha)).min(1.0)
    }
}

/// Build the payoff matrix on the population corners α ∈ {0, 1}.
pub fn build_game(g_s: f64, g_e: f64, chi: f64, econ: &EconomyParams) -> Result<EscalationGame> {
    if !(0.0 < g_s && g_s < g_e && g_e < 1.0) {
        return Err(Error::config(format!(
            "signal probabilities must satisfy 0 < g_s < g_e < 1, got g_s={g_s}, g_e={g_e}"
        )));
    }
    if !(chi >= 0.0) {
        return Err(Error::config("escalation cost must be nonnegative"));
    }
    let p_cond = |alpha: f64| (econ.slots / (alpha * g_e + (1.0 - alpha) * g_s)).min(1.0);
    let u = |own_g: f64, alpha: f64, cost: f64| own_g * p_cond(alpha) - cost;
    let payoff_matrix = [
        [u(g_s, 0.0, 0.0), u(g_s, 1.0, 0.0)],
        [u(g_e, 0.0, chi), u(g_e, 1.0, chi)],
    ];
    let escalate_dominates =
        payoff_matrix[1][0] > payoff_matrix[0][0] && payoff_matrix[1][1] > payoff_matrix[0][1];
    let status_quo_dominates =
        payoff_matrix[0][0] > payoff_matrix[1][0] && payoff_matrix[0][1] > payoff_matrix[1][1];
    let dominant = if escalate_dominates {
        Dominance::Escalate
    } else if status_quo_dominates {
        Dominance::StatusQuo
    } else {
        Dominance::None
    };
    // Nash (all escalate) vs cooperative (all status quo), PI side
    let pareto_ranked = payoff_matrix[1][1] < payoff_matrix[0][0];
    Ok(EscalationGame { g_s, g_e, chi, payoff_matrix, dominant, pareto_ranked })
}

/// Structural variant: tie the signal qualities to the production model.
/// A lab holding capital k yields a Good signal with probability
/// p·π(1, θ_H, k) — the chance its RA is the high type and clears the
/// novel-output bar.
pub fn game_from_tech(
    econ: &EconomyParams,
    tech: &TechParams,
    k_base: f64,
    k_escalate: f64,
    chi: f64,
) -> Result<EscalationGame> {
    let g = |k: f64| -> Result<f64> {
        Ok(econ.p * model::success_prob(Effort::High, econ.theta_h, k, tech)?)
    };
    build_game(g(k_base)?, g(k_escalate)?, chi, econ)
}

/// Escalation gain before cost, minimized over an α grid:
/// min_α (g_e − g_s)·min(1, S/M(α)). Escalation is strictly dominant with
/// cost χ iff χ stays below this margin.
pub fn dominance_margin(game: &EscalationGame, econ: &EconomyParams, samples: usize) -> f64 {
    let mut margin = f64::INFINITY;
    for i in 0..samples {
        let alpha = i as f64 / (samples - 1) as f64;
        let gap = (game.g_e - game.g_s) * game.conditional_admission(alpha, econ);
        margin = margin.min(gap);
    }
    margin
}

/// One row of the Nash-vs-cooperative comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeRow {
    pub variable: String,
    pub coop_value: f64,
    pub nash_value: f64,
    /// Whether the computed movement matches the expected direction.
    pub expected_sign_ok: bool,
    /// Rows whose expected direction is stated only conditionally.
    pub conditional: bool,
    pub note: String,
}

/// Compare the cooperative outcome (all Status Quo, pre-shock capital) with
/// the Nash outcome (all Escalate at `k_ai_escalate`).
///
/// The wage and RA-welfare rows report both channels that move them — the
/// admission premium falls with the conditional admission rate while the
/// leveling channel cuts the effort cost — and are marked conditional: the
/// RA's participation constraint pins net welfare to the outside option
/// whenever the wage floor is slack, so only the direction of the wage and
/// of the floored-out rent is meaningful.
pub fn equilibrium_comparison(
    game: &EscalationGame,
    econ: &EconomyParams,
    tech: &TechParams,
    k_ai_escalate: f64,
) -> Result<Vec<RegimeRow>> {
    if !(k_ai_escalate >= 0.0) {
        return Err(Error::domain("escalation capital must be nonnegative".to_string()));
    }
    let m_coop = game.m_good(0.0);
    let m_nash = game.m_good(1.0);
    let p_coop = game.conditional_admission(0.0, econ);
    let p_nash = game.conditional_admission(1.0, econ);
    let pi_coop = game.payoff(EscalationChoice::StatusQuo, false);
    let pi_nash = game.payoff(EscalationChoice::Escalate, true);
    let (w_coop, slack_coop) = contract::pc_wage(0.0, p_coop, econ, tech)?;
    let (w_nash, slack_nash) = contract::pc_wage(k_ai_escalate, p_nash, econ, tech)?;

    let premium_drop = econ.beta_ra * econ.v_phd * (p_coop - p_nash);
    let cost_drop = model::effort_cost(Effort::High, econ.theta_h, 0.0, tech)?
        - model::effort_cost(Effort::High, econ.theta_h, k_ai_escalate, tech)?;

    let admitted_coop = p_coop * m_coop;
    let admitted_nash = p_nash * m_nash;

    Ok(vec![
        RegimeRow {
            variable: "m_good".into(),
            coop_value: m_coop,
            nash_value: m_nash,
            expected_sign_ok: m_nash > m_coop,
            conditional: false,
            note: "expected to rise".into(),
        },
        RegimeRow {
            variable: "p_admit_conditional".into(),
            coop_value: p_coop,
            nash_value: p_nash,
            expected_sign_ok: p_nash < p_coop,
            conditional: false,
            note: format!(
                "expected to fall; admitted mass conserved: {admitted_coop:.12} vs {admitted_nash:.12}"
            ),
        },
        RegimeRow {
            variable: "pi_payoff".into(),
            coop_value: pi_coop,
            nash_value: pi_nash,
            expected_sign_ok: if game.chi > 0.0 { pi_nash < pi_coop } else { pi_nash <= pi_coop },
            conditional: false,
            note: if game.chi > 0.0 {
                format!("expected to fall by the escalation cost {}", game.chi)
            } else {
                "boundary: costless escalation dissipates nothing".into()
            },
        },
        RegimeRow {
            variable: "ra_wage".into(),
            coop_value: w_coop,
            nash_value: w_nash,
            expected_sign_ok: w_nash <= w_coop + 1e-12,
            conditional: true,
            note: format!(
                "expected weakly down, conditional on the cost channel outweighing the premium \
                 loss; premium moved by {:.6}, effort cost by -{:.6}",
                -premium_drop, cost_drop
            ),
        },
        RegimeRow {
            variable: "ra_net_welfare".into(),
            coop_value: slack_coop,
            nash_value: slack_nash,
            expected_sign_ok: slack_nash <= slack_coop + 1e-12,
            conditional: true,
            note: "participation constraint binds at zero net welfare unless the wage floor \
                   bites; reported value is the floored-wage rent"
                .into(),
        },
    ])
}
