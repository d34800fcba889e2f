pub mod doi;
pub mod error;
pub mod exponent;
pub mod matrix;
pub mod multiplier;
pub mod norms;
pub mod random;
pub mod ptensor;
pub mod schur;
pub mod wp;
pub mod yq;

pub use error::{Error, Result};
pub use exponent::{Exponent, PExponent};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
