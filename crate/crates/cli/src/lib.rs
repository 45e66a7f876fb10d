//! Command-line front end: input files, task dispatch and reports.

pub mod input;
pub mod report;
pub mod task;

use nashforge_core::Error;

pub use input::{parse_variety_file, parse_variety_str, VarietyInput};
pub use report::{emit_report, verdict_from_evidence, Format, Report};
pub use task::{run_task, TaskKind, TaskOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnsupportedScope(_) => EXIT_UNSUPPORTED,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Parse { .. } | Error::FieldMismatch(_) | Error::InvalidInput(_) | Error::PointNotOnVariety(_) => {
            EXIT_INPUT
        }
    }
}

/// One-line remediation advice printed after an error.
pub fn hint(e: &Error) -> Option<&'static str> {
    match e {
        Error::Budget { .. } => Some("raise the step budget with --budget or NASHFORGE_BUDGET"),
        Error::UnsupportedScope(_) => Some("this input lies outside what the task can decide; no verdict was guessed"),
        Error::PointNotOnVariety(_) => Some("give a point on the variety with `point = ...` in [variety]"),
        Error::FieldMismatch(_) => Some("coefficients must make sense in the declared characteristic"),
        _ => None,
    }
}
