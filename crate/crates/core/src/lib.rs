//! Egalitarian social evaluation under ambiguity, and the two-stage
//! Ellsberg plans that challenge it.
//!
//! - [`prospects`]: credal prospects and the Hurwicz family of criteria.
//! - [`social`]: the egalitarian social value of multi-person options and
//!   the eight blindness-treatment options with their twelve comparisons.
//! - [`ellsberg`]: win probabilities, dominance and Monte Carlo for the
//!   four two-draw plans.
//! - [`sequential`]: the two-stage decision tree, naive, sophisticated and
//!   global-planner agents, and rationality-violation detection.
//! - [`scenario`], [`report`], [`commands`]: scenario files, report
//!   rendering and the command implementations behind the `peu` binary.

pub mod commands;
pub mod ellsberg;
pub mod error;
pub mod prospects;
pub mod report;
pub mod scenario;
pub mod sequential;
pub mod social;
pub mod sweep;

pub use error::{Error, Result};
pub use prospects::{ChanceInfo, CredalSet, OutcomeProfile, Pessimism, Prospect};
pub use social::{PeuParams, SocialOption};
