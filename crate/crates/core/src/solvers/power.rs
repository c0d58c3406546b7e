use super::{quadratic_certificate, step, Certificate, SolveOptions, SolveReport, Trace};
use crate::coefficients::{tau_left, tau_right};
use crate::error::{check_dim, Error, Result};
use crate::tensor::{Bilinear, StochasticVector, DENSE_GUARD};

pub(crate) fn check_operator<B: Bilinear + ?Sized>(p: &B, x: &StochasticVector) -> Result<()> {
    check_dim(p.dim(), x.len())?;
    if !p.is_stochastic() {
        return Err(Error::invalid("solvers need a stochastic operator"));
    }
    Ok(())
}

/// Higher-order power method `x_{t+1} = P x_t x_t`.
pub fn hopm<B: Bilinear + ?Sized>(
    p: &B,
    x0: &StochasticVector,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_operator(p, x0)?;
    let mut trace = Trace::new(opts, x0);
    let mut x = x0.clone();
    for _ in 0..opts.maxit {
        let next = step(p, &x, &x)?;
        let r = next.l1_distance(&x);
        x = next;
        if trace.push(r, &x) {
            break;
        }
    }
    let mut report = trace.finish(x, None);
    if opts.certify {
        report.attach(quadratic_certificate(p));
    }
    Ok(report)
}

/// `T_L(P) + T_R(P)` for operators small enough to densify.
pub(crate) fn split_coefficient<B: Bilinear + ?Sized>(p: &B) -> Option<f64> {
    let d = p.densify(DENSE_GUARD).ok()?;
    Some(tau_left(&d).value + tau_right(&d).value)
}

/// Alternate power method `x_{t+1} = P x_t x_{t-1}`. The auxiliary vector
/// of the report is the second-to-last iterate.
pub fn alternate_pm<B: Bilinear + ?Sized>(
    p: &B,
    x0: &StochasticVector,
    x_minus1: &StochasticVector,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_operator(p, x0)?;
    check_dim(x0.len(), x_minus1.len())?;
    let mut trace = Trace::new(opts, x0);
    let mut prev = x_minus1.clone();
    let mut x = x0.clone();
    for _ in 0..opts.maxit {
        let next = step(p, &x, &prev)?;
        let r = next.l1_distance(&x);
        prev = std::mem::replace(&mut x, next);
        if trace.push(r, &x) {
            break;
        }
    }
    let mut report = trace.finish(x, Some(prev));
    if opts.certify {
        report.attach(split_coefficient(p).map(|s| (Certificate::TauLeftPlusRight, s)));
    }
    Ok(report)
}
