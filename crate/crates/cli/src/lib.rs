//! Command-line front end: argument parsing, JSON input and output,
//! certificate bundles and exit codes.

pub mod bundle;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use bundle::{CertificateBundle, Check, FORMAT_VERSION};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code when a certificate check fails.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code for usage errors and unreadable input.
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping search node counts.
pub const BUDGET_ENV: &str = "POLYFORGE_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read {path}: {reason}")]
    Input { path: String, reason: String },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => EXIT_USAGE,
            CliError::Failed(_) => EXIT_CHECK_FAILED,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "polyforge",
    version,
    about = "Exact certificates for cubical tori, facet paths, Morse matchings, arrangements and projective constructions"
)]
pub struct Cli {
    /// Write the primary artifact here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for verification; 1 keeps runs sequential.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Seed for randomized search restarts.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search node budget; overrides POLYFORGE_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Non-revisiting facet paths.
    #[command(subcommand)]
    Hirsch(HirschCmd),
    /// Discrete Morse matchings and collapses.
    #[command(subcommand)]
    Morse(MorseCmd),
    /// Subspace arrangement complements.
    #[command(subcommand)]
    Arr(ArrCmd),
    /// Cross-bedding cubical tori.
    #[command(subcommand)]
    Cct(CctCmd),
    /// Projective incidence constructions.
    #[command(subcommand)]
    Proj(ProjCmd),
}

#[derive(Debug, Subcommand)]
pub enum HirschCmd {
    /// Combinatorial segment between two facets (index or comma-separated vertices).
    Segment {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Facet-ridge graph diameter against the Hirsch bound.
    Diameter {
        #[arg(long)]
        complex: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum MorseCmd {
    /// Search for a collapse to a point or onto a subcomplex.
    Collapse {
        #[arg(long)]
        complex: PathBuf,
        /// Subcomplex to collapse onto, or the subcomplex D for --out-j.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Collapse to a vertex of the target matching faces of the target
        /// outward only in this dimension.
        #[arg(long = "out-j")]
        out_j: Option<usize>,
    },
    /// Check that a matching is acyclic and report its critical faces.
    Validate {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        matching: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ArrCmd {
    /// Betti numbers of the complement.
    Betti {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        i: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CctCmd {
    /// Build the symmetric torus polytope of width n with its certificates.
    Generate(GenerateArgs),
    /// Re-check every predicate of a generated torus.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// The iteration chain with exact coordinates and λ values.
    Kappa {
        #[arg(long)]
        upto: usize,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum ProjCmd {
    /// Compile an integer polynomial into a von Staudt incidence program.
    Staudt {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        at: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Lawrence extension of a polytope-point configuration.
    Lawrence {
        #[arg(long)]
        config: PathBuf,
    },
    /// The 64-point configuration around the seed torus.
    KConfig {
        /// Replay the frame derivation from the base points.
        #[arg(long)]
        verify: bool,
    },
    /// Dimension and vertex count of the projectively unique extension.
    Pcctp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        counts: bool,
    },
}

/// Settings shared by all commands.
#[derive(Clone, Debug)]
pub struct Context {
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub seed: u64,
    pub budget: u64,
}

/// What a command produced: either a bundle or plain text.
pub enum Output {
    Bundle(CertificateBundle),
    Text(String),
}

fn budget_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| *x >= 0.0)
            .map(|x| Some(x as u64))
            .ok_or_else(|| CliError::Usage(format!("{BUDGET_ENV} must be a non-negative number"))),
        Err(_) => Ok(None),
    }
}

/// Parses `args` (including the program name), runs the command, writes its
/// output and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => emit(&cli, out, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let budget = match cli.budget {
        Some(b) => b,
        None => budget_from_env()?.unwrap_or(polyforge::morse::DEFAULT_BUDGET),
    };
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let ctx = Context { out: cli.out.clone(), jobs: cli.jobs, seed: cli.seed, budget };
    commands::dispatch(&cli.command, &ctx)
}

fn emit(cli: &Cli, out: Output, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (text, code) = match out {
        Output::Bundle(b) => {
            let code = if b.pass { EXIT_OK } else { EXIT_CHECK_FAILED };
            if !b.pass {
                for c in b.checks.iter().filter(|c| !c.pass) {
                    let _ = writeln!(stderr, "check failed: {}", c.name);
                }
            }
            (b.to_json() + "\n", code)
        }
        Output::Text(t) => (t, EXIT_OK),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    code
}
