//! Schur (Hadamard) products of scalar and block matrices.

use num_complex::Complex64;

use crate::error::{shape_err, Result};
use crate::matrix::ComplexMatrix;

/// Entrywise product `A ⋆ B`.
pub fn schur_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.same_shape(b)?;
    Ok(ComplexMatrix::wrap(a.as_dmatrix().component_mul(b.as_dmatrix())))
}

/// `diag(x) · A · diag(y)`, which equals `A ⋆ (x yᵗ)`.
pub fn schur_rank_one(a: &ComplexMatrix, x: &[Complex64], y: &[Complex64]) -> Result<ComplexMatrix> {
    if x.len() != a.rows() || y.len() != a.cols() {
        return shape_err("rank-one factor lengths do not match the matrix");
    }
    ComplexMatrix::from_fn(a.rows(), a.cols(), |j, k| x[j] * a.get(j, k) * y[k])
}

/// Matrix whose entries are square blocks of a common size.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    block_rows: usize,
    block_cols: usize,
    block_dim: usize,
    blocks: Vec<ComplexMatrix>,
}

impl BlockMatrix {
    /// `blocks` are listed in row-major order over the block grid.
    pub fn new(block_rows: usize, block_cols: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if block_rows == 0 || block_cols == 0 || blocks.len() != block_rows * block_cols {
            return shape_err(format!(
                "expected {} blocks for a {block_rows}x{block_cols} grid, got {}",
                block_rows * block_cols,
                blocks.len()
            ));
        }
        let d = blocks[0].rows();
        if blocks.iter().any(|b| b.shape() != (d, d)) {
            return shape_err("all blocks must be square of the same size");
        }
        Ok(BlockMatrix { block_rows, block_cols, block_dim: d, blocks })
    }

    /// Splits a flat matrix into `block_dim × block_dim` blocks.
    pub fn from_flat(m: &ComplexMatrix, block_dim: usize) -> Result<Self> {
        if block_dim == 0 || !m.rows().is_multiple_of(block_dim) || !m.cols().is_multiple_of(block_dim) {
            return shape_err("matrix dimensions are not multiples of the block size");
        }
        let (br, bc) = (m.rows() / block_dim, m.cols() / block_dim);
        let mut blocks = Vec::with_capacity(br * bc);
        for j in 0..br {
            for k in 0..bc {
                blocks.push(ComplexMatrix::from_fn(block_dim, block_dim, |a, b| {
                    m.get(j * block_dim + a, k * block_dim + b)
                })?);
            }
        }
        Self::new(br, bc, blocks)
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn block(&self, j: usize, k: usize) -> &ComplexMatrix {
        &self.blocks[j * self.block_cols + k]
    }

    pub fn flatten(&self) -> ComplexMatrix {
        let d = self.block_dim;
        let data = nalgebra::DMatrix::from_fn(self.block_rows * d, self.block_cols * d, |r, c| {
            self.block(r / d, c / d).get(r % d, c % d)
        });
        ComplexMatrix::wrap(data)
    }
}

/// `A ⋆ B` for a block matrix `B`: block `(j, k)` becomes `a_jk B_jk`.
pub fn block_schur_product(a: &ComplexMatrix, b: &BlockMatrix) -> Result<BlockMatrix> {
    if a.shape() != (b.block_rows, b.block_cols) {
        return shape_err(format!(
            "multiplier is {}x{} but block grid is {}x{}",
            a.rows(),
            a.cols(),
            b.block_rows,
            b.block_cols
        ));
    }
    let blocks = (0..b.block_rows)
        .flat_map(|j| (0..b.block_cols).map(move |k| (j, k)))
        .map(|(j, k)| b.block(j, k).scale(a.get(j, k)))
        .collect();
    BlockMatrix::new(b.block_rows, b.block_cols, blocks)
}

/// The inflation `A ⊗ 𝐈_d`, so that `(A ⋆ B).flatten() = inflate(A) ⋆ B.flatten()`.
pub fn inflate(a: &ComplexMatrix, block_dim: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_fn(a.rows() * block_dim, a.cols() * block_dim, |r, c| {
        a.get(r / block_dim, c / block_dim)
    })
}
