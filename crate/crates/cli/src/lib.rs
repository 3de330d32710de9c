//! Command-line front end: body documents, fixtures and reports.

pub mod app;
pub mod document;
pub mod error;
pub mod report;

pub use app::{execute, Cli, REPORT_SCHEMA};
pub use document::{parse_body_file, parse_document, BodyDocument};
pub use error::CliError;
