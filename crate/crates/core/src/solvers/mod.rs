//! Fixed-point solvers for `x = Pxx` and related second-order processes.
//!
//! Every iteration keeps its iterates on the simplex: after each step the
//! mass is checked against [`CLOSURE_TOL`](crate::tensor::CLOSURE_TOL) and
//! renormalized, since the sum of `Pxx` squares any mass defect.
//!
//! Stopping uses `||x_{t+1} - x_t||_1 < tol`. When a coefficient below one
//! is available it is attached to the report as a certificate of uniqueness
//! and of the contraction rate.

mod certificate;
mod pagerank;
mod pair_chain;
mod perturbation;
mod power;
mod shifted;
mod spacey;
mod vrrw;

use serde::{Deserialize, Serialize};

pub use certificate::{convergence_certificate, CertificateEntry, CertificateSummary};
pub use pagerank::mlpr_fixed_point;
pub use pair_chain::{pair_chain_stationary, PairChainReport, PAIR_CHAIN_LIMIT};
pub use perturbation::{perturbation_bound, PerturbationReport};
pub use power::{alternate_pm, hopm};
pub use shifted::{optimal_shift, shift_curve, shifted_pm, shifted_tensor, ShiftOptimum};
pub use spacey::{simulate_spacey_mc, SpaceyMcResult, TensorRef};
pub use vrrw::{vrrw, ScheduleC};

use crate::coefficients::{tau, tau_h};
use crate::tensor::{Bilinear, StochasticVector, DENSE_GUARD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub maxit: usize,
    /// Record every iterate in [`SolveReport::trajectory`].
    pub keep_iterates: bool,
    /// Compute a coefficient certificate when the operator is small enough
    /// to densify.
    pub certify: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-8,
            maxit: 100_000,
            keep_iterates: false,
            certify: true,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_maxit(mut self, maxit: usize) -> Self {
        self.maxit = maxit;
        self
    }

    pub fn keeping_iterates(mut self) -> Self {
        self.keep_iterates = true;
        self
    }

    pub fn without_certificate(mut self) -> Self {
        self.certify = false;
        self
    }
}

/// Quantity whose value below one backs a convergence claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    #[serde(rename = "T")]
    Tau,
    #[serde(rename = "TH")]
    TauH,
    #[serde(rename = "TL+TR")]
    TauLeftPlusRight,
    #[serde(rename = "alpha*T")]
    AlphaTau,
    #[serde(rename = "alpha*(1+beta)")]
    AlphaOnePlusBeta,
    #[serde(rename = "T(P_sigma)")]
    ShiftedTau,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    #[serde(rename = "final")]
    pub solution: StochasticVector,
    /// Second sequence of two-sequence methods (`y_t` of the reinforced walk,
    /// `x_{t-1}` of the alternate method).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auxiliary: Option<StochasticVector>,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    pub certified_rate: Option<f64>,
    pub certificate: Option<Certificate>,
    pub converged: bool,
    /// The certificate guarantees a unique fixed point.
    pub unique: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trajectory: Vec<StochasticVector>,
}

/// Residuals below this are dominated by rounding and skipped in rate tests.
pub const RATE_FLOOR: f64 = 1e-13;

impl SolveReport {
    pub fn last_residual(&self) -> Option<f64> {
        self.residual_history.last().copied()
    }

    /// Largest ratio `r_{t+1} / r_t` over the last `window` consecutive
    /// residual pairs with `r_t` above [`RATE_FLOOR`].
    pub fn tail_ratio(&self, window: usize) -> Option<f64> {
        let ratios: Vec<f64> = self
            .residual_history
            .windows(2)
            .filter(|w| w[0] > RATE_FLOOR)
            .map(|w| w[1] / w[0])
            .collect();
        let start = ratios.len().saturating_sub(window);
        ratios[start..].iter().cloned().reduce(f64::max)
    }

    pub(crate) fn attach(&mut self, cert: Option<(Certificate, f64)>) {
        if let Some((c, r)) = cert {
            if r < 1.0 {
                self.certificate = Some(c);
                self.certified_rate = Some(r);
                self.unique = true;
            }
        }
    }
}

/// Iterate bookkeeping shared by the solvers.
pub(crate) struct Trace {
    tol: f64,
    keep: bool,
    residuals: Vec<f64>,
    trajectory: Vec<StochasticVector>,
}

impl Trace {
    pub(crate) fn new(opts: &SolveOptions, x0: &StochasticVector) -> Self {
        let mut trajectory = Vec::new();
        if opts.keep_iterates {
            trajectory.push(x0.clone());
        }
        Trace {
            tol: opts.tol,
            keep: opts.keep_iterates,
            residuals: Vec::new(),
            trajectory,
        }
    }

    /// Records one step; true when the stopping test is met.
    pub(crate) fn push(&mut self, residual: f64, x: &StochasticVector) -> bool {
        self.residuals.push(residual);
        if self.keep {
            self.trajectory.push(x.clone());
        }
        residual < self.tol
    }

    pub(crate) fn finish(
        self,
        solution: StochasticVector,
        auxiliary: Option<StochasticVector>,
    ) -> SolveReport {
        let converged = self.residuals.last().is_some_and(|r| *r < self.tol);
        SolveReport {
            solution,
            auxiliary,
            iterations: self.residuals.len(),
            residual_history: self.residuals,
            certified_rate: None,
            certificate: None,
            converged,
            unique: false,
            trajectory: self.trajectory,
        }
    }
}

/// `T(P)` if below one, otherwise `T_H(P)` if below one, for operators
/// small enough to densify.
pub(crate) fn quadratic_certificate<B: Bilinear + ?Sized>(p: &B) -> Option<(Certificate, f64)> {
    let d = p.densify(DENSE_GUARD).ok()?;
    let t = tau(&d).value;
    if t < 1.0 {
        return Some((Certificate::Tau, t));
    }
    let h = tau_h(&d).ok()?.value;
    (h < 1.0).then_some((Certificate::TauH, h))
}

pub(crate) fn step<B: Bilinear + ?Sized>(
    p: &B,
    x: &StochasticVector,
    y: &StochasticVector,
) -> crate::Result<StochasticVector> {
    let out = p.apply(x.as_slice(), y.as_slice())?;
    StochasticVector::from_iterate(out)
}
