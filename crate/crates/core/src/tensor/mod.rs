//! Tensor storage, bilinear products and composite transition operators.

pub mod builtin;
mod dense;
pub mod io;
mod matrix;
mod operator;
mod sparse;
mod vector;

pub use dense::{DenseTensor3, StochasticityReport};
pub use matrix::{SparseMatrix, SquareMatrix};
pub use operator::{Operand, TransitionOperator};
pub use sparse::SparseTensor3;
pub use vector::{l1_distance, l1_norm, StochasticVector, CLOSURE_TOL, VALIDATION_TOL};

use crate::error::{check_dim, Error, Result};

/// Above this dimension operators refuse dense materialization.
pub const DENSE_GUARD: usize = 64;

/// A map `(x, y) -> Pxy` with `(Pxy)_i = sum_{j,k} P[i,j,k] x_j y_k`.
pub trait Bilinear: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes `Pxy` into `out`; all slices have length `dim()`.
    fn apply_into(&self, x: &[f64], y: &[f64], out: &mut [f64]);

    /// True when the operator is known to map simplex pairs into the simplex.
    fn is_stochastic(&self) -> bool;

    /// Dense copy, refused with [`Error::TooLarge`] above `limit`.
    fn densify(&self, limit: usize) -> Result<DenseTensor3>;

    fn apply(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        let mut out = vec![0.0; self.dim()];
        self.apply_into(x, y, &mut out);
        Ok(out)
    }
}

/// `Pxy` for simplex arguments. For stochastic operators the result is
/// asserted to lie in the simplex within [`CLOSURE_TOL`].
pub fn apply_bilinear<B: Bilinear + ?Sized>(
    p: &B,
    x: &StochasticVector,
    y: &StochasticVector,
) -> Result<Vec<f64>> {
    let out = p.apply(x.as_slice(), y.as_slice())?;
    if p.is_stochastic() {
        let sum: f64 = out.iter().sum();
        let min = out.iter().cloned().fold(f64::INFINITY, f64::min);
        if !((sum - 1.0).abs() <= CLOSURE_TOL) || min < -VALIDATION_TOL {
            return Err(Error::Invariant(format!(
                "stochastic operator left the simplex (sum {sum}, min {min:e})"
            )));
        }
    }
    Ok(out)
}
