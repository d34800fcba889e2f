//! Exponents for Schatten, Lorentz and sequence quasi-norms.
//!
//! [`Exponent`] is any value in `(0, ∞]`; [`PExponent`] is the Schatten index
//! `p ∈ (0, 2]` together with its two derived exponents
//! `p♯ = p/(1−p)` and `p♭ = 2p/(2−p)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent in `(0, ∞]`. The infinite case selects sup-type formulas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub const INF: Exponent = Exponent::Infinite;

    pub fn new(q: f64) -> Result<Self> {
        if q == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else if q.is_finite() && q > 0.0 {
            Ok(Exponent::Finite(q))
        } else {
            Err(Error::UnsupportedExponent(format!(
                "exponent must lie in (0, inf], got {q}"
            )))
        }
    }

    /// The exponent as an `f64`, with `f64::INFINITY` for the infinite case.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(q) => q,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/q`, which is `0` for `q = ∞`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(q) => 1.0 / q,
            Exponent::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(q) => Some(q),
            Exponent::Infinite => None,
        }
    }

    /// Multiplies a finite exponent by a positive factor; `∞` stays `∞`.
    pub fn scaled(self, factor: f64) -> Self {
        match self {
            Exponent::Finite(q) => Exponent::Finite(q * factor),
            Exponent::Infinite => Exponent::Infinite,
        }
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(q: f64) -> Result<Self> {
        Exponent::new(q)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
            other => {
                let q: f64 = parse_real(other)?;
                Exponent::new(q)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(q) => write!(f, "{q}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

/// Parses a real number, accepting simple fractions such as `2/3`.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad number '{s}'")))?;
        return Ok(num / den);
    }
    s.parse()
        .map_err(|_| Error::Parse(format!("bad number '{s}'")))
}

/// Schatten index `p ∈ (0, 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PExponent {
    p: f64,
}

impl PExponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 && p <= 2.0 {
            Ok(PExponent { p })
        } else {
            Err(Error::UnsupportedExponent(format!(
                "p must lie in (0, 2], got {p}"
            )))
        }
    }

    pub fn p(self) -> f64 {
        self.p
    }

    pub fn as_exponent(self) -> Exponent {
        Exponent::Finite(self.p)
    }

    /// `p♯ = p/(1−p)`, infinite at `p = 1`. Only meaningful for `p ≤ 1`.
    pub fn sharp(self) -> Exponent {
        if self.p >= 1.0 {
            Exponent::Infinite
        } else {
            Exponent::Finite(self.p / (1.0 - self.p))
        }
    }

    /// `p♭ = 2p/(2−p)`, infinite at `p = 2`.
    pub fn flat(self) -> Exponent {
        if self.p >= 2.0 {
            Exponent::Infinite
        } else {
            Exponent::Finite(2.0 * self.p / (2.0 - self.p))
        }
    }

    /// Tensor, multiplier and `𝒲_p` operations live on `p ≤ 1`.
    pub fn require_at_most_one(self) -> Result<Self> {
        if self.p <= 1.0 {
            Ok(self)
        } else {
            Err(Error::UnsupportedExponent(format!(
                "operation requires p <= 1, got {}",
                self.p
            )))
        }
    }

    pub fn require_below_one(self) -> Result<Self> {
        if self.p < 1.0 {
            Ok(self)
        } else {
            Err(Error::UnsupportedExponent(format!(
                "operation requires p < 1, got {}",
                self.p
            )))
        }
    }
}

impl TryFrom<f64> for PExponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        PExponent::new(p)
    }
}

impl From<PExponent> for f64 {
    fn from(p: PExponent) -> f64 {
        p.p
    }
}

impl FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PExponent::new(parse_real(s)?)
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_exponents() {
        let p = PExponent::new(0.5).unwrap();
        assert_eq!(p.sharp(), Exponent::Finite(1.0));
        assert_eq!(p.flat(), Exponent::Finite(2.0 / 3.0));
        let p = PExponent::new(2.0 / 3.0).unwrap();
        assert!((p.sharp().value() - 2.0).abs() < 1e-15);
        assert!((p.flat().value() - 1.0).abs() < 1e-15);
        assert_eq!(PExponent::new(1.0).unwrap().sharp(), Exponent::Infinite);
        assert_eq!(PExponent::new(2.0).unwrap().flat(), Exponent::Infinite);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(PExponent::new(0.0).is_err());
        assert!(PExponent::new(2.5).is_err());
        assert!(PExponent::new(f64::NAN).is_err());
        assert!(Exponent::new(-1.0).is_err());
        assert!(PExponent::new(1.5).unwrap().require_at_most_one().is_err());
        assert!(PExponent::new(1.0).unwrap().require_below_one().is_err());
    }

    #[test]
    fn parses_fractions_and_infinity() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinite);
        let p: PExponent = "2/3".parse().unwrap();
        assert!((p.p() - 2.0 / 3.0).abs() < 1e-16);
        assert!("abc".parse::<Exponent>().is_err());
    }
}
