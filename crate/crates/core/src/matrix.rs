//! Dense complex matrices and their text serialization.
//!
//! The text format is a header line `rows cols` followed by `rows × cols`
//! whitespace-separated entries in row-major order. Each entry is written as
//! `a`, `a+bi` or `a-bi`. Emission uses 17 significant digits so that every
//! `f64` survives a round trip unchanged.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{shape_err, Error, Result};

/// Finite dense complex matrix with at least one row and one column.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
}

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return shape_err(format!("matrix must be at least 1x1, got {rows}x{cols}"));
        }
        if entries.len() != rows * cols {
            return shape_err(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            ));
        }
        Self::from_dmatrix(DMatrix::from_row_iterator(rows, cols, entries))
    }

    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let entries = entries.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        Self::from_row_major(rows, cols, entries)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return shape_err("rows have different lengths");
        }
        Self::from_row_major(r, c, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return shape_err(format!("matrix must be at least 1x1, got {rows}x{cols}"));
        }
        Self::from_dmatrix(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_dmatrix(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return shape_err("matrix must be at least 1x1");
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix { data })
    }

    /// Wraps a matrix produced by finite arithmetic on valid matrices.
    pub(crate) fn wrap(data: DMatrix<Complex64>) -> Self {
        debug_assert!(data.nrows() > 0 && data.ncols() > 0);
        ComplexMatrix { data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |j, k| if j == k { ONE } else { ZERO })
    }

    /// The all-ones matrix, the identity element of the Schur product.
    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| ONE)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, |j, k| if j == k { diag[j] } else { ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let diag: Vec<Complex64> = diag.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    /// `1_{S×T}`: ones on the rectangle `S × T`, zeros elsewhere.
    pub fn block_of_ones(rows: usize, cols: usize, row_set: &[usize], col_set: &[usize]) -> Result<Self> {
        if row_set.iter().any(|&j| j >= rows) || col_set.iter().any(|&k| k >= cols) {
            return shape_err("index set exceeds matrix dimensions");
        }
        let mut m = Self::zeros(rows, cols)?;
        for &j in row_set {
            for &k in col_set {
                m.data[(j, k)] = ONE;
            }
        }
        Ok(m)
    }

    /// Rank-one matrix `x yᵗ` (plain transpose, no conjugation).
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Result<Self> {
        Self::from_fn(x.len(), y.len(), |j, k| x[j] * y[k])
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.data[(j, k)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn row(&self, j: usize) -> Vec<Complex64> {
        self.data.row(j).iter().copied().collect()
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        self.data.column(k).iter().copied().collect()
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        self.data.transpose().iter().copied().collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows().min(self.cols())).map(|j| self.data[(j, j)]).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows()).all(|j| (0..self.cols()).all(|k| j == k || self.data[(j, k)] == ZERO))
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.data.transpose())
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.data.adjoint())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::wrap(&self.data * c)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return shape_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            ));
        }
        Ok(Self::wrap(&self.data * &other.data))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::wrap(&self.data + &other.data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self::wrap(&self.data - &other.data))
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return shape_err(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            ));
        }
        Ok(())
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max_j Σ_k |a_jk|`, the operator norm on `ℓ^∞`.
    pub fn linf_operator_norm(&self) -> f64 {
        (0..self.rows())
            .map(|j| self.data.row(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn map(&self, f: impl FnMut(Complex64) -> Complex64) -> Result<Self> {
        Self::from_dmatrix(self.data.map(f))
    }

    /// Permutes rows and columns: entry `(j, k)` of the result is
    /// `self[(row_perm[j], col_perm[k])]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        if !is_permutation(row_perm, self.rows()) || !is_permutation(col_perm, self.cols()) {
            return Err(Error::InvalidInput("not a permutation".into()));
        }
        Self::from_fn(self.rows(), self.cols(), |j, k| self.data[(row_perm[j], col_perm[k])])
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut header = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what} in header")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what} in header")))
        };
        let rows = header("row count")?;
        let cols = header("column count")?;
        let entries = tokens.map(parse_complex).collect::<Result<Vec<_>>>()?;
        if entries.len() != rows * cols {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_row_major(rows, cols, entries)
            .map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows(), self.cols());
        for j in 0..self.rows() {
            let line: Vec<String> = (0..self.cols()).map(|k| format_complex(self.data[(j, k)])).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// Formats a complex number with 17 significant digits.
pub fn format_complex(z: Complex64) -> String {
    let mut s = format!("{:.16e}", z.re);
    if z.im != 0.0 || z.im.is_sign_negative() {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        let _ = write!(s, "{sign}{:.16e}i", z.im.abs());
    }
    s
}

/// Parses `a`, `a+bi`, `a-bi` or `bi`.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad complex entry '{token}'"));
    let t = token.trim();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // Split at the last sign that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().map_err(|_| bad())?,
    };
    if !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|j| self.data.row(j).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|row| row.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

/// Serde helpers for complex vectors written as `[[re, im], ...]`.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}
