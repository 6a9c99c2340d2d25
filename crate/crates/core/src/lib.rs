//! Numerical equilibrium laboratory for a three-stage game between research
//! lab principals (PIs), short-lived research assistants (RAs), and a
//! capacity-constrained admissions market.
//!
//! The crate is organized around the stages of the game:
//!
//! - [`model`] — parameters and the concrete functional forms (automation,
//!   augmentation, leveling, effort costs, publication value).
//! - [`production`] — task-based output aggregate and the
//!   augmentation/displacement decomposition of the RA marginal product.
//! - [`contract`] — RA incentive-compatibility window and the
//!   participation-constraint wage ("hope labor" pricing).
//! - [`optimizer`] — each PI type's choice of capital and head count, with a
//!   brute-force grid oracle and FOC-based refinement.
//! - [`tournament`] — admissions market clearing under fixed capacity.
//! - [`signal`] — effort-laundering signal model, Bayesian posteriors, and
//!   the principal's threshold recommendation rule.
//! - [`arms_race`] — the escalation subgame (payoff matrix, dominance,
//!   Nash-vs-cooperative welfare comparison).
//! - [`equilibrium`] — market fixed point plus supermodularity diagnostics
//!   (increasing differences, extremal iteration).
//! - [`statics`] — parameter sweeps, threshold location, and the
//!   machine-checkable verdict suite.

// validations use `!(x > 0.0)`-style guards on purpose: the negated form
// also rejects NaN inputs
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arms_race;
pub mod contract;
pub mod equilibrium;
mod error;
pub mod model;
pub mod optimizer;
pub mod production;
pub mod reference;
pub mod signal;
pub mod statics;
pub mod tournament;

pub use error::{Error, Result};
