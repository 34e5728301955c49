//! Experiment harness for `kronreg`: seeded benchmark suites, trimmed-MSE
//! aggregation and CSV output.

pub mod aggregate;
pub mod config;
pub mod error;
pub mod output;
pub mod record;
pub mod runner;

pub use aggregate::{aggregate, Aggregate};
pub use config::{Model, Suite, SuiteConfig};
pub use error::{HarnessError, Result};
pub use output::{summarize, write_outputs, SummaryRow};
pub use record::RunRecord;
pub use runner::{run_repetition, run_suite, CellParams};
