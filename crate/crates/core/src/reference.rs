//! Shipped reference parameterization.
//!
//! Values are chosen so that the stage-1 optima of interest sit inside the
//! search box and every capacity cap is slack; they are working defaults for
//! the verdict suite and the example scenarios, not calibrated estimates.

use crate::arms_race::ArmsRaceConfig;
use crate::model::{EconomyParams, TechParams};
use crate::signal::SignalModel;

pub fn economy() -> EconomyParams {
    EconomyParams {
        gamma: 2.0,
        delta: 0.9,
        beta_ra: 0.9,
        mu: 0.5,
        p: 0.5,
        v_phd: 4.0,
        slots: 0.3,
        theta_h: 1.0,
        theta_l: 0.5,
        w_floor: 0.0,
    }
}

pub fn tech() -> TechParams {
    TechParams {
        alpha_a: 1.0,
        alpha_g: 1.0,
        alpha_l: 1.0,
        kappa: 0.0,
        tau: 0.6,
        pi_0: 0.4,
        rho: 0.2,
        c_0: 1.0,
        c_k: 0.5,
    }
}

pub fn signal() -> SignalModel {
    SignalModel::new(0.9, 0.3, 0.8, 0.3, 0.0, 0.6).expect("reference signal model is valid")
}

pub fn arms_race() -> ArmsRaceConfig {
    ArmsRaceConfig {
        g_s: 0.4,
        g_e: 0.8,
        chi: 0.05,
        k_escalate: 1.0,
    }
}
