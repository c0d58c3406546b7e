//! Ergodicity coefficients, convergence certificates and fixed-point solvers
//! for order-3 stochastic tensors.
//!
//! A cubical tensor `P` with `P[i,j,k] >= 0` and `sum_i P[i,j,k] = 1` for
//! every `(j,k)` is the transition law of a second-order Markov chain. Its
//! stationary distributions in the Li–Ng sense are the stochastic
//! Z-eigenvectors `x = Pxx`. This crate provides
//!
//! - [`tensor`]: dense and sparse tensor storage, bilinear products, special
//!   tensors (identities, rank-one teleportation) and composite operators;
//! - [`coefficients`]: closed-form 1-norm, Birkhoff and Li–Ng coefficients
//!   that certify uniqueness and convergence;
//! - [`solvers`]: higher-order power methods, vertex-reinforced walks,
//!   multilinear PageRank, shifted power method and the pair-chain oracle;
//! - [`graph`]: triangle-based random walks on undirected graphs.
//!
//! Indices are 0-based in the API and 1-based in every text format.

pub mod coefficients;
pub mod error;
pub mod graph;
pub mod rng;
pub mod solvers;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{
    Bilinear, DenseTensor3, Operand, SparseMatrix, SparseTensor3, SquareMatrix, StochasticVector,
    TransitionOperator,
};
