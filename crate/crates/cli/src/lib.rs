//! Command-line front end: the JSON document format, single-point reports,
//! batch scans and the proposition verifier.

pub mod commands;
pub mod document;
pub mod scan;

pub use commands::{CliError, Outcome, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};
pub use document::{AnyRep, DocError};
pub use scan::{ScanConfig, ScanRow, VerifyConfig, VerifyReport};
