use serde::{Deserialize, Serialize};

use super::{check_unit, TriangleWalk};
use crate::error::{check_dim, Error, Result};
use crate::solvers::{mlpr_fixed_point, Certificate, SolveOptions, SolveReport};
use crate::tensor::{SparseMatrix, StochasticVector};

/// Classical PageRank `z = a A z + (1 - a) v` by power iteration. The
/// stopping rule matches the tensor solvers.
pub fn classical_pagerank(
    a: &SparseMatrix,
    alpha: f64,
    v: &StochasticVector,
    x0: &StochasticVector,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_dim(a.n(), v.len())?;
    check_dim(a.n(), x0.len())?;
    check_unit("alpha", alpha)?;
    let mut z = x0.clone();
    let mut buf = vec![0.0; a.n()];
    let mut history = Vec::new();
    let mut trajectory = Vec::new();
    if opts.keep_iterates {
        trajectory.push(z.clone());
    }
    for _ in 0..opts.maxit {
        a.apply_into(z.as_slice(), &mut buf);
        for (b, vi) in buf.iter_mut().zip(v.as_slice()) {
            *b = alpha * *b + (1.0 - alpha) * vi;
        }
        let next = StochasticVector::from_iterate(buf.clone())?;
        let r = next.l1_distance(&z);
        z = next;
        history.push(r);
        if opts.keep_iterates {
            trajectory.push(z.clone());
        }
        if r < opts.tol {
            break;
        }
    }
    let converged = history.last().is_some_and(|r| *r < opts.tol);
    let certified = alpha < 1.0;
    Ok(SolveReport {
        solution: z,
        auxiliary: None,
        iterations: history.len(),
        residual_history: history,
        certified_rate: certified.then_some(alpha),
        certificate: None,
        converged,
        unique: certified,
        trajectory,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleMlprReport {
    pub solve: SolveReport,
    /// Classical PageRank with the same `alpha` and `v`.
    pub pagerank: StochasticVector,
    pub pagerank_iterations: usize,
    pub x_minus_v: f64,
    pub x_minus_z: f64,
    /// `||T - A||_1`.
    pub norm_diff: f64,
    /// `a b / (1 - a) ||T - A||_1`, absent for `a = 1`.
    pub bound: Option<f64>,
    /// `a (1 + b)`.
    pub certificate_value: f64,
}

/// Upper bound on the distance from an iterate with last step `r` to the
/// fixed point of a contraction with rate `q`.
fn a_posteriori(q: f64, report: &SolveReport) -> f64 {
    let r = report.last_residual().unwrap_or(0.0);
    if q < 1.0 {
        q / (1.0 - q) * r
    } else {
        f64::INFINITY
    }
}

/// Triangle-based multilinear PageRank on `P = b T + (1 - b) A`, compared
/// with classical PageRank on `A`. For `a (1 + b) < 1` both solutions are
/// unique and
///
/// ```text
/// ||x - z||_1 <= a b / (1 - a) * ||T - A||_1,
/// ```
///
/// which is asserted up to the a-posteriori errors of the two solves.
pub fn triangle_mlpr(
    walk: &TriangleWalk,
    alpha: f64,
    beta: f64,
    v: &StochasticVector,
    x0: &StochasticVector,
    opts: &SolveOptions,
) -> Result<TriangleMlprReport> {
    check_unit("alpha", alpha)?;
    let op = walk.blend(beta)?;
    let mut solve = mlpr_fixed_point(&op, alpha, v, x0, &opts.without_certificate())?;
    let rate = alpha * (1.0 + beta);
    solve.attach(Some((Certificate::AlphaOnePlusBeta, rate)));
    let pr = classical_pagerank(&walk.matrix, alpha, v, x0, opts)?;
    let norm_diff = walk.one_norm_diff()?;
    let bound = (alpha < 1.0).then(|| alpha * beta / (1.0 - alpha) * norm_diff);
    let x_minus_z = solve.solution.l1_distance(&pr.solution);
    if let Some(b) = bound {
        if rate < 1.0 && solve.converged && pr.converged {
            let slack = a_posteriori(rate, &solve) + a_posteriori(alpha, &pr) + 1e-12;
            if x_minus_z > b + slack {
                return Err(Error::invariant(format!(
                    "||x - z||_1 = {x_minus_z} exceeds bound {b}"
                )));
            }
        }
    }
    Ok(TriangleMlprReport {
        x_minus_v: solve.solution.l1_distance(v),
        x_minus_z,
        norm_diff,
        bound,
        certificate_value: rate,
        pagerank: pr.solution,
        pagerank_iterations: pr.iterations,
        solve,
    })
}
