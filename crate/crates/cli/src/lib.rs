//! Library side of the `schurmult` command: matrix generators, experiments
//! and their reports.

pub mod experiments;
pub mod report;

use std::fs;
use std::path::Path;

use schurmult::exponent::parse_real;
use schurmult::matrix::parse_complex;
use schurmult::multiplier::flat_unitary_multiplier;
use schurmult::ptensor::{dft_identity_decomposition, direct_sum_multiplier};
use schurmult::{ComplexMatrix, PExponent};

/// Environment variable overriding the default seed of `0`.
pub const SEED_ENV: &str = "SCHURMULT_SEED";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable input or malformed parameters; exit code 2.
    Usage(String),
    Io(String),
    Core(schurmult::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<schurmult::Error> for CliError {
    fn from(e: schurmult::Error) -> Self {
        CliError::Core(e)
    }
}

/// `--seed` if given, else `SCHURMULT_SEED`, else `0`.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} must be an unsigned integer, got '{v}'"))),
        Err(_) => Ok(0),
    }
}

/// `x` with `digits` significant digits, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can carry into a new leading digit; reformat from that value.
        let rounded: f64 = s.parse().unwrap_or(x);
        if rounded != 0.0 && rounded.abs().log10().floor() as i32 != exp {
            return format_significant(rounded, digits);
        }
        trim_fraction(&s)
    } else {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, e) = s.split_once('e').expect("scientific format");
        format!("{}e{e}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    ComplexMatrix::parse_text(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_count(s: &str, what: &str) -> Result<usize, CliError> {
    match s.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(CliError::Usage(format!("{what} must be a positive integer, got '{s}'"))),
    }
}

pub fn parse_counts(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    s.split(',').map(|t| parse_count(t, what)).collect()
}

/// Builds a matrix from `flat-unitary:N`, `dft-identity:n`, `diag:FILE`,
/// `direct-sum:n1,n2,…`, `ones:N[,M]` or `identity:N`.
///
/// `direct-sum` needs `p < 1`.
pub fn generate(spec: &str, p: Option<PExponent>) -> Result<ComplexMatrix, CliError> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("generator '{spec}' must look like kind:argument")))?;
    let m = match kind {
        "flat-unitary" => flat_unitary_multiplier(parse_count(arg, "flat-unitary size")?)?,
        "dft-identity" => dft_identity_decomposition(parse_count(arg, "dft-identity size")?)?.evaluate()?,
        "diag" => {
            let text = fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
            let mu = text
                .split_whitespace()
                .map(parse_complex)
                .collect::<schurmult::Result<Vec<_>>>()
                .map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
            if mu.is_empty() {
                return Err(CliError::Usage(format!("{arg}: no entries")));
            }
            ComplexMatrix::from_diagonal(&mu)?
        }
        "direct-sum" => {
            let p = p.ok_or_else(|| CliError::Usage("direct-sum generator needs -p".into()))?;
            direct_sum_multiplier(&parse_counts(arg, "block size")?, p)?
        }
        "ones" => {
            let dims = parse_counts(arg, "ones dimension")?;
            match dims[..] {
                [n] => ComplexMatrix::ones(n, n)?,
                [r, c] => ComplexMatrix::ones(r, c)?,
                _ => return Err(CliError::Usage("ones takes N or R,C".into())),
            }
        }
        "identity" => ComplexMatrix::identity(parse_count(arg, "identity size")?)?,
        _ => return Err(CliError::Usage(format!("unknown generator '{kind}'"))),
    };
    Ok(m)
}

pub fn parse_p(s: &str) -> Result<PExponent, CliError> {
    let v = parse_real(s).map_err(|e| CliError::Usage(e.to_string()))?;
    PExponent::new(v).map_err(|e| CliError::Usage(e.to_string()))
}
