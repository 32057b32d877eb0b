//! Core model for a firm that learns its production technique.
//!
//! Production is a linear map: a nonnegative matching matrix turns supplied
//! skill quantities into task outputs, and a per-task value vector turns
//! outputs into income. The firm plans a task vector each period, observes
//! the gap between expected and actual profit, and recalibrates both the
//! matrix and the value vector by delta-rule steps until the gap closes.
//!
//! Modules:
//!
//! - [`production`]: domain types and the pure accounting operations.
//! - [`iteration`]: losses, per-period parameter updates, and the
//!   convergence loop.
//! - [`trainer`]: batch fitting of matrix and value vector from sample sets.
//! - [`efficiency`]: matching-granularity and cycle-duration dominance
//!   checks with brute-force trial drivers.
//! - [`scenario`]: seeded synthetic scenarios with reproducible shocks.
//! - [`rng`]: the counter-based deterministic generator behind it all.
//!
//! The crate is `no_std`-compatible (with `alloc`); all float math goes
//! through `libm` so results are identical with and without `std`.

#![cfg_attr(not(feature = "std"), no_std)]
// validation guards use `!(v >= 0.0)` so NaN fails the check too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod efficiency;
pub mod error;
pub mod iteration;
pub mod production;
pub mod rng;
pub mod scenario;
pub mod trainer;

pub use error::{Error, Result};
pub use iteration::{
    ConvergenceTrace, FirmState, LearningConfig, MatrixSignMode, PeriodRecord, ValueUpdateMode,
};
pub use production::{
    CostModel, MatchingMatrix, ProfitGapVector, SkillVector, TaskOutputVector, TaskValueVector,
    TaskVector,
};
pub use scenario::{PricePath, Scenario, ScenarioSpec};
pub use trainer::{MatchingTrainingSet, TrainingReport, ValueTrainingSet};
