//! Sweep experiments `fig1` to `fig5`. Every function is deterministic in its
//! inputs; random samples and grid cells run in parallel with per-task
//! seeds `task_seed(seed, index)` and are returned in index order.
//!
//! Proven inequalities fail the run with an invariant error.
//! Observed relations are only counted.

use hots_core::coefficients::{delta_closed_form, sigma_vectors, tau, tau_h, theta};
use hots_core::graph::{triangle_mlpr, TriangleWalk};
use hots_core::rng::{rng_from_seed, task_seed};
use hots_core::solvers::{shift_curve, SolveOptions};
use hots_core::{DenseTensor3, Error, Result, StochasticVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::{float, opt_float, Row};

const INEQ_TOL: f64 = 1e-12;

fn violated(msg: String) -> Error {
    Error::Invariant(msg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig1Config {
    pub samples: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Fig1Config {
            samples: 10_000,
            n_min: 2,
            n_max: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig1Row {
    pub index: usize,
    pub n: usize,
    pub tau: f64,
    pub tau_h: f64,
    pub two_minus_2delta: f64,
}

impl Row for Fig1Row {
    fn header() -> &'static [&'static str] {
        &["index", "n", "T", "TH", "two_minus_2delta"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.index.to_string(),
            self.n.to_string(),
            float(self.tau),
            float(self.tau_h),
            float(self.two_minus_2delta),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig1Output {
    pub config: Fig1Config,
    pub rows: Vec<Fig1Row>,
    /// Samples with `T > T_H`; observed to be zero, not a theorem.
    pub tau_h_violations: usize,
}

/// Sample `i` of the random ensemble: `n` uniform in `n_min..=n_max`, then
/// a tensor with columns uniform on the simplex.
pub fn fig1_sample(cfg: &Fig1Config, index: usize) -> Result<DenseTensor3> {
    let mut rng = rng_from_seed(task_seed(cfg.seed, index as u64));
    let n = rng.random_range(cfg.n_min..=cfg.n_max);
    DenseTensor3::random_stochastic_with(n, &mut rng)
}

/// `T`, `T_H` and `2 - 2 delta` over random tensors; requires
/// `T <= 2 - 2 delta` on every row.
pub fn fig1_scatter(cfg: &Fig1Config) -> Result<Fig1Output> {
    if cfg.samples == 0 {
        return Err(Error::InvalidInput("fig1 needs at least one sample".into()));
    }
    if cfg.n_min < 2 || cfg.n_max < cfg.n_min {
        return Err(Error::InvalidInput(format!(
            "fig1 size range {}..={} is invalid",
            cfg.n_min, cfg.n_max
        )));
    }
    let rows: Vec<Fig1Row> = (0..cfg.samples)
        .into_par_iter()
        .map(|index| {
            let p = fig1_sample(cfg, index)?;
            let row = Fig1Row {
                index,
                n: p.n(),
                tau: tau(&p).value,
                tau_h: tau_h(&p)?.value,
                two_minus_2delta: 2.0 - 2.0 * delta_closed_form(&p)?.value,
            };
            if row.tau > row.two_minus_2delta + INEQ_TOL {
                return Err(violated(format!(
                    "sample {index}: T = {} exceeds 2 - 2 delta = {}",
                    row.tau, row.two_minus_2delta
                )));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let tau_h_violations = rows.iter().filter(|r| r.tau > r.tau_h + INEQ_TOL).count();
    Ok(Fig1Output {
        config: *cfg,
        rows,
        tau_h_violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig2Row {
    pub alpha: f64,
    pub two_alpha: f64,
    /// `T_H(P_a)` with `P_a = a P + (1 - a) V`.
    pub tau_h_alpha: f64,
    pub two_minus_2delta_alpha: f64,
    pub alpha_tau: f64,
    /// `a theta(P, s_k)` for the max, min and mid reference vectors.
    pub alpha_theta: [f64; 3],
}

impl Row for Fig2Row {
    fn header() -> &'static [&'static str] {
        &[
            "alpha",
            "two_alpha",
            "TH_alpha",
            "two_minus_2delta_alpha",
            "alpha_T",
            "alpha_theta1",
            "alpha_theta2",
            "alpha_theta3",
        ]
    }

    fn record(&self) -> Vec<String> {
        let mut r = vec![
            float(self.alpha),
            float(self.two_alpha),
            float(self.tau_h_alpha),
            float(self.two_minus_2delta_alpha),
            float(self.alpha_tau),
        ];
        r.extend(self.alpha_theta.iter().map(|v| float(*v)));
        r
    }
}

/// Uniqueness bounds for multilinear PageRank along `alphas`, with uniform
/// teleportation. Requires `a T(P) <= a theta(P, s_k)` and
/// `a T(P) <= 2a` on every row.
pub fn fig2_mlpr_sweep(p: &DenseTensor3, alphas: &[f64]) -> Result<Vec<Fig2Row>> {
    let n = p.n();
    let tele = DenseTensor3::rank_one(&StochasticVector::uniform(n));
    let t = tau(p).value;
    let sig = sigma_vectors(p);
    let thetas = sig
        .all()
        .map(|s| theta(p, s).map(|r| r.value))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    alphas
        .par_iter()
        .map(|&alpha| {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidInput(format!(
                    "alpha = {alpha} outside [0, 1]"
                )));
            }
            let pa = p
                .linear_combination(alpha, &tele, 1.0 - alpha)?
                .into_stochastic()?;
            let row = Fig2Row {
                alpha,
                two_alpha: 2.0 * alpha,
                tau_h_alpha: tau_h(&pa)?.value,
                two_minus_2delta_alpha: 2.0 - 2.0 * delta_closed_form(&pa)?.value,
                alpha_tau: alpha * t,
                alpha_theta: [alpha * thetas[0], alpha * thetas[1], alpha * thetas[2]],
            };
            if let Some(th) = row
                .alpha_theta
                .iter()
                .find(|th| row.alpha_tau > **th + INEQ_TOL)
            {
                return Err(violated(format!(
                    "alpha = {alpha}: alpha T = {} exceeds alpha theta = {th}",
                    row.alpha_tau
                )));
            }
            if row.alpha_tau > row.two_alpha + INEQ_TOL {
                return Err(violated(format!(
                    "alpha = {alpha}: alpha T exceeds 2 alpha"
                )));
            }
            Ok(row)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig3Row {
    pub alpha: f64,
    pub beta: f64,
    pub x_minus_v: Option<f64>,
    pub x_minus_z: Option<f64>,
    pub iterations: Option<usize>,
    pub pagerank_iterations: Option<usize>,
    pub converged: bool,
    /// `a (1 + b)`.
    pub certificate: f64,
    /// `a b / (1 - a) ||T - A||_1`.
    pub bound: Option<f64>,
    pub error: Option<String>,
    /// The cell failed a hard inequality.
    pub violation: bool,
}

impl Row for Fig3Row {
    fn header() -> &'static [&'static str] {
        &[
            "alpha",
            "beta",
            "x_minus_v",
            "x_minus_z",
            "iterations",
            "pagerank_iterations",
            "converged",
            "certificate",
            "bound",
            "error",
        ]
    }

    fn record(&self) -> Vec<String> {
        vec![
            float(self.alpha),
            float(self.beta),
            opt_float(self.x_minus_v),
            opt_float(self.x_minus_z),
            self.iterations.map(|i| i.to_string()).unwrap_or_default(),
            self.pagerank_iterations
                .map(|i| i.to_string())
                .unwrap_or_default(),
            self.converged.to_string(),
            float(self.certificate),
            opt_float(self.bound),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig3Output {
    pub n: usize,
    pub norm_diff: f64,
    pub rows: Vec<Fig3Row>,
    pub violations: usize,
}

/// Triangle PageRank over the `(alpha, beta)` grid, alpha-major. A failed
/// cell is recorded in its row and the sweep continues.
pub fn fig3_triangle_grid(
    walk: &TriangleWalk,
    alphas: &[f64],
    betas: &[f64],
    v: &StochasticVector,
    opts: &SolveOptions,
) -> Result<Fig3Output> {
    let cells: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<Fig3Row> = cells
        .par_iter()
        .map(|&(alpha, beta)| {
            let mut row = Fig3Row {
                alpha,
                beta,
                x_minus_v: None,
                x_minus_z: None,
                iterations: None,
                pagerank_iterations: None,
                converged: false,
                certificate: alpha * (1.0 + beta),
                bound: None,
                error: None,
                violation: false,
            };
            match triangle_mlpr(walk, alpha, beta, v, v, opts) {
                Ok(r) => {
                    row.x_minus_v = Some(r.x_minus_v);
                    row.x_minus_z = Some(r.x_minus_z);
                    row.iterations = Some(r.solve.iterations);
                    row.pagerank_iterations = Some(r.pagerank_iterations);
                    row.converged = r.solve.converged;
                    row.bound = r.bound;
                }
                Err(e) => {
                    row.violation = e.is_invariant_violation();
                    row.error = Some(e.to_string());
                }
            }
            row
        })
        .collect();
    let violations = rows.iter().filter(|r| r.violation).count();
    Ok(Fig3Output {
        n: walk.n(),
        norm_diff: walk.one_norm_diff()?,
        rows,
        violations,
    })
}

/// Pearson correlation; 1 for identical vectors, NaN if either is constant
/// and they differ.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    if a == b {
        return 1.0;
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Comparison {
    pub alpha: f64,
    pub beta: f64,
    pub correlation: f64,
    pub converged: bool,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Output {
    pub reference: (f64, f64),
    /// Node labels, one per entry of the vectors.
    pub nodes: Vec<usize>,
    pub x_ref: Vec<f64>,
    pub comparisons: Vec<Fig4Comparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Row {
    pub alpha: f64,
    pub beta: f64,
    pub node: usize,
    pub x_ref: f64,
    pub x_cmp: f64,
    pub correlation: f64,
}

impl Row for Fig4Row {
    fn header() -> &'static [&'static str] {
        &["alpha", "beta", "node", "x_ref", "x_cmp", "correlation"]
    }

    fn record(&self) -> Vec<String> {
        vec![
            float(self.alpha),
            float(self.beta),
            self.node.to_string(),
            float(self.x_ref),
            float(self.x_cmp),
            float(self.correlation),
        ]
    }
}

impl Fig4Output {
    pub fn rows(&self) -> Vec<Fig4Row> {
        self.comparisons
            .iter()
            .flat_map(|c| {
                self.nodes
                    .iter()
                    .enumerate()
                    .map(move |(i, &node)| Fig4Row {
                        alpha: c.alpha,
                        beta: c.beta,
                        node,
                        x_ref: self.x_ref[i],
                        x_cmp: c.x[i],
                        correlation: c.correlation,
                    })
            })
            .collect()
    }
}

/// Triangle PageRank at `reference` against each `(alpha, beta)` in
/// `comparisons`. With `beta = 0` the comparison vector is classical
/// PageRank.
pub fn fig4_solution_scatter(
    walk: &TriangleWalk,
    nodes: &[usize],
    reference: (f64, f64),
    comparisons: &[(f64, f64)],
    v: &StochasticVector,
    opts: &SolveOptions,
) -> Result<Fig4Output> {
    if nodes.len() != walk.n() {
        return Err(Error::DimensionMismatch {
            expected: walk.n(),
            found: nodes.len(),
        });
    }
    let solve = |(a, b): (f64, f64)| triangle_mlpr(walk, a, b, v, v, opts).map(|r| r.solve);
    let x_ref = solve(reference)?.solution.into_inner();
    let comparisons = comparisons
        .par_iter()
        .map(|&(alpha, beta)| {
            let r = solve((alpha, beta))?;
            let x = r.solution.into_inner();
            Ok(Fig4Comparison {
                alpha,
                beta,
                correlation: pearson(&x_ref, &x),
                converged: r.converged,
                x,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Fig4Output {
        reference,
        nodes: nodes.to_vec(),
        x_ref,
        comparisons,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig5Row {
    pub sigma: f64,
    pub tau: f64,
}

impl Row for Fig5Row {
    fn header() -> &'static [&'static str] {
        &["sigma", "T_sigma"]
    }

    fn record(&self) -> Vec<String> {
        vec![float(self.sigma), float(self.tau)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig5Output {
    pub left_weight: f64,
    pub rows: Vec<Fig5Row>,
    /// Grid minimizer.
    pub best: Fig5Row,
}

/// `T(P_s)` along `sigmas` for `P_s = s P + (1 - s) E`. Requires a strictly
/// increasing grid, convexity of the sampled curve (each value at most the
/// chord of its neighbours plus `1e-10`), and `T(P_0) = 1` when `0` is sampled.
pub fn fig5_shift_sweep(p: &DenseTensor3, sigmas: &[f64], left_weight: f64) -> Result<Fig5Output> {
    if sigmas.is_empty() {
        return Err(Error::InvalidInput("fig5 needs at least one sigma".into()));
    }
    if sigmas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(
            "sigma grid must be strictly increasing".into(),
        ));
    }
    let values: Vec<f64> = sigmas
        .par_chunks(16)
        .map(|c| shift_curve(p, left_weight, c))
        .collect::<Result<Vec<_>>>()?
        .concat();
    let rows: Vec<Fig5Row> = sigmas
        .iter()
        .zip(&values)
        .map(|(&sigma, &tau)| Fig5Row { sigma, tau })
        .collect();
    if let Some(r) = rows.iter().find(|r| r.sigma == 0.0) {
        if (r.tau - 1.0).abs() > INEQ_TOL {
            return Err(violated(format!("T(P_0) = {} differs from 1", r.tau)));
        }
    }
    for w in rows.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        let chord =
            ((c.sigma - b.sigma) * a.tau + (b.sigma - a.sigma) * c.tau) / (c.sigma - a.sigma);
        if b.tau > chord + 1e-10 {
            return Err(violated(format!(
                "shift curve not convex at sigma = {}: {} above chord {chord}",
                b.sigma, b.tau
            )));
        }
    }
    let best = rows
        .iter()
        .copied()
        .fold(rows[0], |b, r| if r.tau < b.tau { r } else { b });
    Ok(Fig5Output {
        left_weight,
        rows,
        best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hots_core::graph::Graph;
    use hots_core::tensor::builtin;

    #[test]
    fn fig1_is_deterministic() {
        let cfg = Fig1Config {
            samples: 40,
            seed: 3,
            ..Default::default()
        };
        let a = fig1_scatter(&cfg).unwrap();
        assert_eq!(a, fig1_scatter(&cfg).unwrap());
        assert_eq!(a.tau_h_violations, 0);
        assert!(a.rows.iter().all(|r| (2..=10).contains(&r.n)));
    }

    #[test]
    fn fig2_at_zero_is_teleportation() {
        let rows = fig2_mlpr_sweep(&builtin::p1(), &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(rows[0].two_alpha, 0.0);
        assert_eq!(rows[0].tau_h_alpha, 0.0);
        assert!(rows[0].two_minus_2delta_alpha.abs() < 1e-15);
        assert!((rows[2].alpha_tau - 2.0 * rows[1].alpha_tau).abs() < 1e-15);
    }

    #[test]
    fn fig3_edges_of_the_grid() {
        let g = Graph::erdos_renyi(30, 0.3, 2);
        let walk = TriangleWalk::new(&g).unwrap();
        let v = StochasticVector::uniform(30);
        let out =
            fig3_triangle_grid(&walk, &[0.0, 0.6], &[0.0, 0.6], &v, &Default::default()).unwrap();
        assert_eq!(out.violations, 0);
        assert_eq!(out.rows[0].x_minus_v, Some(0.0));
        let beta0 = &out.rows[2];
        assert!(beta0.x_minus_z.unwrap() <= 1e-7);
        assert!(out.rows[3].converged);
    }

    #[test]
    fn fig4_self_comparison_has_unit_correlation() {
        let g = Graph::erdos_renyi(25, 0.3, 4);
        let walk = TriangleWalk::new(&g).unwrap();
        let v = StochasticVector::uniform(25);
        let nodes: Vec<usize> = (1..=25).collect();
        let out = fig4_solution_scatter(
            &walk,
            &nodes,
            (0.6, 0.6),
            &[(0.6, 0.6), (0.7, 0.7)],
            &v,
            &Default::default(),
        )
        .unwrap();
        assert_eq!(out.comparisons[0].correlation, 1.0);
        assert!(out.comparisons[1].correlation > 0.5);
        assert_eq!(out.rows().len(), 50);
    }

    #[test]
    fn fig5_rank_one_is_linear() {
        let v = StochasticVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let sig: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let out = fig5_shift_sweep(&DenseTensor3::rank_one(&v), &sig, 0.5).unwrap();
        for r in &out.rows {
            assert!((r.tau - (1.0 - r.sigma)).abs() < 1e-14);
        }
        assert_eq!(out.best.sigma, 1.0);
    }
}
