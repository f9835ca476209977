use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use evolia_cli::{emit, run_job, verify_report, Analysis, CliError, Format, JobSpec, Report};

#[derive(Parser)]
#[command(
    name = "evolia",
    version,
    about = "Nil and nilpotency analyses of evolution algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses listed in a job file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
        /// Scan elements on all cores.
        #[arg(long)]
        parallel: bool,
        /// Largest number of elements the nil scan may enumerate.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Re-check every certificate in a machine report against its job.
    Verify { report: PathBuf, job: PathBuf },
    /// Compute the element power requested in a job file.
    Power {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: OutputFormat,
    },
}

fn load_job(path: &Path) -> Result<JobSpec, CliError> {
    JobSpec::from_path(path)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn format_of(f: OutputFormat) -> Format {
    match f {
        OutputFormat::Human => Format::Human,
        OutputFormat::Machine => Format::Machine,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            file,
            format,
            parallel,
            cap,
        } => {
            let mut job = match load_job(&file) {
                Ok(j) => j,
                Err(e) => return fail(&e),
            };
            job.options.parallel |= parallel;
            if let Some(cap) = cap {
                job.options.cap = cap;
            }
            let report = run_job(&job);
            print!("{}", emit(&report, format_of(format)));
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Power { file, format } => {
            let mut job = match load_job(&file) {
                Ok(j) => j,
                Err(e) => return fail(&e),
            };
            job.analyses = vec![Analysis::ElementPower];
            let report = run_job(&job);
            print!("{}", emit(&report, format_of(format)));
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Verify { report, job } => match verify(&report, &job) {
            Ok(code) => code,
            Err(e) => match e.downcast_ref::<CliError>() {
                Some(ce) => fail(ce),
                None => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            },
        },
    }
}

/// Exit 0 when every certificate re-verifies, 1 otherwise.
fn verify(report_path: &Path, job_path: &Path) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(report_path).with_context(|| format!("reading {}", report_path.display()))?;
    let report = Report::parse(&text)?;
    let job = load_job(job_path)?;
    let outcome = verify_report(&report, &job)?;
    if outcome.is_valid() {
        println!("certificate: VALID ({} analyses re-checked)", report.results.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("certificate: INVALID");
        for f in &outcome.failures {
            println!("  {f}");
        }
        Ok(ExitCode::from(1))
    }
}
