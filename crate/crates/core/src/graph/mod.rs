//! Triangle-based random walks on undirected graphs.
//!
//! The triangle tensor moves from the pair `(j, k)` to a uniformly chosen
//! node completing a triangle with it,
//!
//! ```text
//! T[i,j,k] = 1 / D(j,k)   if {i, j, k} is a triangle,
//! ```
//!
//! where `D(j,k)` counts the triangles through the edge `{j, k}`; pairs in
//! no triangle use the uniform column. Blending with the edge walk
//! `A[i,j] = 1 / d(j)` gives `P = b T + (1 - b) A` with `A[i,j,k] = A[i,j]`,
//! whose multilinear PageRank is unique whenever `a (1 + b) < 1`.

mod edges;
mod pagerank;
mod triangles;

pub use edges::{load_edge_list, Graph, IndexBase, LoadStats};
pub use pagerank::{classical_pagerank, triangle_mlpr, TriangleMlprReport};
pub use triangles::{
    operator_one_norm_diff, transition_matrix, triangle_tensor, TriangleTensorStats, TriangleWalk,
};

use crate::error::{Error, Result};
use crate::tensor::TransitionOperator;

/// `b T + (1 - b) A` for the graph `g`.
pub fn blend_operator(g: &Graph, beta: f64) -> Result<TransitionOperator> {
    TriangleWalk::new(g)?.blend(beta)
}

pub(crate) fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {v} outside [0, 1]")))
    }
}
