//! Job files, reports and certificate checking for the `evolia` tool.

pub mod emit;
pub mod error;
pub mod job;
pub mod report;
pub mod run;
pub mod verify;

pub use emit::{emit, Format};
pub use error::CliError;
pub use job::{Analysis, JobOptions, JobSpec, Mode, PowerKind};
pub use report::{AnalysisEntry, Report, Verdict};
pub use run::run_job;
pub use verify::{verify_certificate, verify_report, Verification};
