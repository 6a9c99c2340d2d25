//! Scenario file ingestion and validation.

// negated guards double as NaN rejection
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::Path;

use serde::{Deserialize, Serialize};

use hopelab_core::arms_race::ArmsRaceConfig;
use hopelab_core::model::{EconomyParams, TechParams};
use hopelab_core::signal::SignalModel;
use hopelab_core::statics::SweepSpec;

pub const SPEC_VERSION: u32 = 1;

/// Versioned scenario file. The seed is recorded for provenance only; the
/// model is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub spec_version: u32,
    pub economy: EconomyParams,
    pub tech: TechParams,
    pub signal: SignalModel,
    #[serde(default)]
    pub arms_race: Option<ArmsRaceConfig>,
    #[serde(default)]
    pub sweeps: Vec<SweepSpec>,
    #[serde(default)]
    pub seed: i64,
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read scenario {}: {e}", path.display()))?;
        let scenario: ScenarioFile = serde_json::from_str(&raw)
            .map_err(|e| format!("scenario {} does not parse: {e}", path.display()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.spec_version != SPEC_VERSION {
            return Err(format!(
                "unsupported spec_version {} (expected {SPEC_VERSION})",
                self.spec_version
            ));
        }
        self.economy.validate().map_err(|e| format!("economy block: {e}"))?;
        self.tech.validate().map_err(|e| format!("tech block: {e}"))?;
        self.signal.validate().map_err(|e| format!("signal block: {e}"))?;
        if self.tech.kappa != self.signal.kappa {
            return Err(format!(
                "kappa mismatch: tech block has {}, signal block has {}; the laundering \
                 strength is one knob",
                self.tech.kappa, self.signal.kappa
            ));
        }
        if let Some(arms) = &self.arms_race {
            if !(0.0 < arms.g_s && arms.g_s < arms.g_e && arms.g_e < 1.0) {
                return Err(format!(
                    "arms_race block: need 0 < g_s < g_e < 1, got g_s={}, g_e={}",
                    arms.g_s, arms.g_e
                ));
            }
            if !(arms.chi >= 0.0) {
                return Err("arms_race block: chi must be nonnegative".to_string());
            }
            if !(arms.k_escalate >= 0.0) {
                return Err("arms_race block: k_escalate must be nonnegative".to_string());
            }
        }
        Ok(())
    }

    /// The escalation game parameters, falling back to the structural tie
    /// (status quo at zero capital, escalation at unit capital) when the
    /// scenario gives no overrides.
    pub fn arms_race_config(&self) -> Result<ArmsRaceConfig, String> {
        match &self.arms_race {
            Some(cfg) => Ok(cfg.clone()),
            None => {
                let k_escalate = 1.0;
                let game = hopelab_core::arms_race::game_from_tech(
                    &self.economy,
                    &self.tech,
                    0.0,
                    k_escalate,
                    0.05,
                )
                .map_err(|e| format!("structural arms-race defaults failed: {e}"))?;
                Ok(ArmsRaceConfig { g_s: game.g_s, g_e: game.g_e, chi: game.chi, k_escalate })
            }
        }
    }

    /// Normalized copy with defaults resolved, for `--dump-config`.
    pub fn normalized(&self) -> Result<ScenarioFile, String> {
        let mut out = self.clone();
        out.arms_race = Some(self.arms_race_config()?);
        Ok(out)
    }
}
