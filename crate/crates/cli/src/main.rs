//! `ncforms`: command-line front end.
//!
//! Exit codes: 0 when every assertion passes, 1 on an assertion failure or
//! internal error, 2 on a usage error, 3 when a resource cap refuses the work.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use config::{CliError, RunConfig};
use report::{render_text, ReportDocument};

#[derive(Parser, Debug)]
#[command(name = "ncforms", version, about = "Exact differential calculi on the symmetric groups")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Rank of the symmetric group S_N.
    #[arg(long, global = true, default_value_t = 3)]
    pub n: usize,
    /// Conjugacy class as a cycle type, e.g. `2`, `2+2`, `3`.
    #[arg(long, global = true, default_value = "2")]
    pub class: String,
    /// Use the signed braiding (Fomin-Kirillov algebra E_N); 2-cycles only.
    #[arg(long, global = true)]
    pub signed: bool,
    /// Build by braided factorials instead of quadratic relations.
    #[arg(long, global = true)]
    pub woronowicz: bool,
    /// Highest degree to build; overrides the default degree cap.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Raise the default degree caps.
    #[arg(long, global = true)]
    pub heavy: bool,
    /// Emit a JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Directory for cached degrees; NCFORMS_CACHE takes precedence.
    #[arg(long, global = true)]
    pub cache_dir: Option<std::path::PathBuf>,
    /// Worker threads for the suite runner.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Sample count for randomized checks.
    #[arg(long, global = true, default_value_t = 40)]
    pub samples: usize,
    /// Refuse degrees whose estimated working set exceeds this, e.g. `512M`, `2G`, `0`.
    #[arg(long, global = true, value_parser = config::parse_size)]
    pub mem_limit: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Quadratic relations in degree 2.
    Relations,
    /// Dimensions by degree.
    Hilbert,
    /// De Rham cohomology of S_N in one degree.
    Cohomology {
        #[arg(long)]
        degree: usize,
    },
    /// Closed subsets of the class, by cardinality.
    Flat {
        /// Decompose each stratum module into irreducibles.
        #[arg(long)]
        decompose: bool,
    },
    /// The Killing form on the class.
    Killing,
    /// Determinant of the general invariant metric at sampled points.
    MetricDet,
    /// Braided Fourier transform.
    Fourier {
        #[arg(long)]
        e3: bool,
    },
    /// Hodge star.
    Hodge {
        #[arg(long)]
        s3: bool,
        /// Rescale so that the square is ±1 where a rational root exists.
        #[arg(long)]
        normalized: bool,
    },
    /// Braided partial derivative of an element.
    Derive {
        /// Class element in cycle notation, e.g. "(12)".
        #[arg(long)]
        a: String,
        /// Element expression, e.g. "[12][23] - [23][13]".
        #[arg(long)]
        element: String,
        /// Use the right derivative.
        #[arg(long)]
        bar: bool,
    },
    /// Compare E_N with Λ_N degree by degree.
    Fk,
    /// Run a bundled assertion suite.
    Check {
        #[arg(long)]
        suite: String,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code.clamp(0, 255) as u8);
        }
    };
    let start = Instant::now();
    let code = match run(&cli, &argv[1..]) {
        Ok((doc, text)) => {
            let mut out = std::io::stdout().lock();
            if cli.global.json {
                let _ = writeln!(out, "{}", doc.to_json());
            } else {
                let _ = write!(out, "{text}");
                eprintln!("elapsed {:.2?}", start.elapsed());
            }
            if doc.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code)
}

fn run(cli: &Cli, args: &[String]) -> Result<(ReportDocument, String), CliError> {
    let cfg = RunConfig::from_args(&cli.global)?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let outcome = commands::dispatch(&cli.command, &cfg)?;
    let text = render_text(&outcome);
    let doc = ReportDocument::new(args.to_vec(), cfg.echo(), outcome);
    Ok((doc, text))
}
