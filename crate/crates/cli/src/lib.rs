//! Command-line front end for exact semigroup hierarchy analyses.

pub mod commands;
pub mod error;
pub mod input;
pub mod render;
pub mod report;

pub use commands::Settings;
pub use error::CliError;
pub use input::SystemSpec;
pub use report::Report;

/// Serializes a report in the machine-readable form.
pub fn to_machine(report: &Report) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports always serialize");
    text.push('\n');
    text
}

pub fn from_machine(text: &str) -> Result<Report, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}
