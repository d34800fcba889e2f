use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use schurmult::multiplier::{multiplier_estimate, DEFAULT_ITERS, DEFAULT_RESTARTS};
use schurmult::norms::{lorentz_norm, schatten_norm};
use schurmult::{ComplexMatrix, Exponent, PExponent};
use schurmult_cli::experiments::run_experiment;
use schurmult_cli::{format_significant, generate, parse_p, read_matrix, resolve_seed, CliError};

/// Schur multipliers of Schatten classes.
#[derive(Parser)]
#[command(name = "schurmult", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Matrix file: "rows cols" followed by row-major entries such as 1, -2.5, 0.5+1e-3i.
    file: Option<PathBuf>,
    /// Built-in matrix: flat-unitary:N, dft-identity:N, diag:FILE, direct-sum:N1,N2,..., ones:N[,M], identity:N.
    #[arg(long, value_name = "SPEC", conflicts_with = "file")]
    generate: Option<String>,
}

impl Input {
    fn load(&self, p: Option<PExponent>) -> Result<ComplexMatrix, CliError> {
        match (&self.file, &self.generate) {
            (Some(path), None) => read_matrix(path),
            (None, Some(spec)) => generate(spec, p),
            _ => Err(CliError::Usage("give a matrix file or --generate".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Schatten norm for -p, or Lorentz norm for --q and --r.
    Snorm {
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        p: Option<String>,
        #[arg(long, requires = "r")]
        q: Option<String>,
        #[arg(long, requires = "q")]
        r: Option<String>,
    },
    /// Lower and upper bounds on the multiplier norm, as JSON.
    Mult {
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        p: String,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_ITERS)]
        iters: usize,
        /// Defaults to $SCHURMULT_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Include every upper-bound candidate, not just the best.
        #[arg(long)]
        certificates: bool,
    },
    /// Run a scripted experiment and write <out>/<name>.csv and <out>/<name>.json.
    Experiment {
        /// tensor-separation, wp-separation, yq-sharpness, cb-check or doi-reduction.
        name: String,
        /// Parameters as key=value, e.g. p=1/2 q=2 sizes=2,4,8,16.
        params: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_exponent(s: &str) -> Result<Exponent, CliError> {
    s.parse().map_err(|e: schurmult::Error| CliError::Usage(e.to_string()))
}

/// Exit status for a failed run: 1 for numerical trouble, 2 for bad input.
fn error_code(e: &CliError) -> u8 {
    match e {
        CliError::Core(schurmult::Error::Numerical(_)) => 1,
        _ => 2,
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Snorm { input, p, q, r } => {
            let value = match (p, q, r) {
                (Some(p), None, None) => {
                    let m = input.load(parse_p(&p).ok())?;
                    schatten_norm(&m, parse_exponent(&p)?)?
                }
                (None, Some(q), Some(r)) => lorentz_norm(&input.load(None)?, parse_exponent(&q)?, parse_exponent(&r)?)?,
                _ => return Err(CliError::Usage("give either -p, or both --q and --r".into())),
            };
            emit(&format!("{}\n", format_significant(value, 12)))?;
            Ok(true)
        }
        Command::Mult { input, p, restarts, iters, seed, certificates } => {
            let p = parse_p(&p)?;
            let a = input.load(Some(p))?;
            let mut est = multiplier_estimate(&a, p, restarts, iters, resolve_seed(seed)?)?;
            if !certificates {
                est.candidates.clear();
            }
            emit(&(serde_json::to_string_pretty(&est).expect("estimate serializes") + "\n"))?;
            Ok(true)
        }
        Command::Experiment { name, params, seed, out } => {
            let report = run_experiment(&name, &params, resolve_seed(seed)?)?;
            match out {
                Some(dir) => report.write(&dir)?,
                None => emit(&report.to_csv()?)?,
            }
            for row in report.rows.iter().filter(|r| !r.pass) {
                eprintln!(
                    "FAIL {}: observed {} {} expected {} (tolerance {})",
                    row.check,
                    row.observed,
                    row.relation.symbol(),
                    row.expected,
                    row.tolerance
                );
            }
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
