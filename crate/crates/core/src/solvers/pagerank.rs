use super::power::check_operator;
use super::{Certificate, SolveOptions, SolveReport, Trace};
use crate::coefficients::tau;
use crate::error::{check_dim, Error, Result};
use crate::tensor::{l1_distance, Bilinear, StochasticVector, DENSE_GUARD};

/// Multilinear PageRank `x = alpha Pxx + (1 - alpha) v` by the iteration
/// `x_{t+1} = alpha P x_t x_t + (1 - alpha) v`. Every iterate satisfies
/// `||x - v||_1 <= 2 alpha`, which is checked on the returned vector.
pub fn mlpr_fixed_point<B: Bilinear + ?Sized>(
    p: &B,
    alpha: f64,
    v: &StochasticVector,
    x0: &StochasticVector,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_operator(p, x0)?;
    check_dim(x0.len(), v.len())?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha = {alpha} outside [0, 1]")));
    }
    let mut trace = Trace::new(opts, x0);
    let mut x = x0.clone();
    let mut buf = vec![0.0; p.dim()];
    for _ in 0..opts.maxit {
        p.apply_into(x.as_slice(), x.as_slice(), &mut buf);
        // Only the quadratic part drifts; mixing afterwards keeps x = v exact at alpha = 0.
        let next = StochasticVector::from_iterate(buf.clone())?.mix(alpha, v);
        let r = next.l1_distance(&x);
        x = next;
        if trace.push(r, &x) {
            break;
        }
    }
    let dist = l1_distance(x.as_slice(), v.as_slice());
    if trace_is_started(opts) && dist > 2.0 * alpha + 1e-12 {
        return Err(Error::invariant(format!(
            "||x - v||_1 = {dist} exceeds 2 alpha = {}",
            2.0 * alpha
        )));
    }
    let mut report = trace.finish(x, None);
    if opts.certify {
        if let Ok(d) = p.densify(DENSE_GUARD) {
            report.attach(Some((Certificate::AlphaTau, alpha * tau(&d).value)));
        }
    }
    Ok(report)
}

/// With `maxit = 0` the returned vector is the start, which need not obey
/// the bound.
fn trace_is_started(opts: &SolveOptions) -> bool {
    opts.maxit > 0
}
