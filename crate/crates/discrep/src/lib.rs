//! Command-line harness around `discrep-core`: configuration, parallel
//! sweeps, CSV/JSON reports and the verification suite.

// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod memo;
pub mod output;
pub mod tolerances;
pub mod verify;

pub use error::{HarnessError, Result};
