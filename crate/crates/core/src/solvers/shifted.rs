//! Shifted power method `x_{t+1} = sigma P x_t x_t + (1 - sigma) x_t`, the
//! power method for `P_sigma = sigma P + (1 - sigma) E` with
//! `E = w E^L + (1 - w) E^R`. Since `Exx = x` on the simplex, `P_sigma`
//! and `P` share their fixed points, and `sigma -> T(P_sigma)` is convex
//! with `T(P_0) = T(E) = 1`.

use serde::{Deserialize, Serialize};

use super::power::check_operator;
use super::{Certificate, SolveOptions, SolveReport, Trace};
use crate::coefficients::tau;
use crate::error::{Error, Result};
use crate::tensor::{l1_distance, Bilinear, DenseTensor3, StochasticVector, DENSE_GUARD};

/// Dense `sigma P + (1 - sigma) (w E^L + (1 - w) E^R)`.
pub fn shifted_tensor(p: &DenseTensor3, sigma: f64, left_weight: f64) -> Result<DenseTensor3> {
    if !(0.0..=1.0).contains(&sigma) || !(0.0..=1.0).contains(&left_weight) {
        return Err(Error::invalid(format!(
            "shift {sigma} and left weight {left_weight} must lie in [0, 1]"
        )));
    }
    let n = p.n();
    let e = DenseTensor3::left_identity(n)?.linear_combination(
        left_weight,
        &DenseTensor3::right_identity(n)?,
        1.0 - left_weight,
    )?;
    p.linear_combination(sigma, &e, 1.0 - sigma)
}

/// Runs the shifted iteration. The residual recorded at step `t` is the
/// fixed-point residual `||P x_t x_t - x_t||_1 = ||x_{t+1} - x_t||_1 / sigma`,
/// so that stopping bounds the residual of the unshifted problem.
pub fn shifted_pm<B: Bilinear + ?Sized>(
    p: &B,
    sigma: f64,
    left_weight: f64,
    x0: &StochasticVector,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    check_operator(p, x0)?;
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::invalid(format!(
            "shift sigma = {sigma} outside (0, 1]"
        )));
    }
    if !(0.0..=1.0).contains(&left_weight) {
        return Err(Error::invalid(format!(
            "left weight {left_weight} outside [0, 1]"
        )));
    }
    let mut trace = Trace::new(opts, x0);
    let mut x = x0.clone();
    let mut pxx = vec![0.0; p.dim()];
    for _ in 0..opts.maxit {
        p.apply_into(x.as_slice(), x.as_slice(), &mut pxx);
        let next: Vec<f64> = pxx
            .iter()
            .zip(x.as_slice())
            .map(|(a, b)| sigma * a + (1.0 - sigma) * b)
            .collect();
        let next = StochasticVector::from_iterate(next)?;
        let r = next.l1_distance(&x) / sigma;
        x = next;
        if trace.push(r, &x) {
            break;
        }
    }
    let mut report = trace.finish(x, None);
    if report.converged {
        let fin = p.apply(report.solution.as_slice(), report.solution.as_slice())?;
        let r = l1_distance(&fin, report.solution.as_slice());
        if r >= 10.0 * opts.tol {
            return Err(Error::invariant(format!(
                "shifted limit has residual {r:e} >= 10 tol"
            )));
        }
    }
    if opts.certify {
        if let Ok(d) = p.densify(DENSE_GUARD) {
            let t = tau(&shifted_tensor(&d, sigma, left_weight)?).value;
            report.attach(Some((Certificate::ShiftedTau, t)));
        }
    }
    Ok(report)
}

/// `T(P_sigma)` at each of `sigmas`.
pub fn shift_curve(p: &DenseTensor3, left_weight: f64, sigmas: &[f64]) -> Result<Vec<f64>> {
    sigmas
        .iter()
        .map(|&s| Ok(tau(&shifted_tensor(p, s, left_weight)?).value))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftOptimum {
    pub sigma: f64,
    pub value: f64,
    /// Grid scan `(sigma, T(P_sigma))` preceding the refinement.
    pub grid: Vec<(f64, f64)>,
}

/// Minimizes `sigma -> T(P_sigma)` over `[0, 1]`: a scan over `grid_points`
/// equispaced values, then golden-section search on the bracket around the
/// best grid point down to width `refine_tol`.
pub fn optimal_shift(
    p: &DenseTensor3,
    left_weight: f64,
    grid_points: usize,
    refine_tol: f64,
) -> Result<ShiftOptimum> {
    if grid_points < 3 {
        return Err(Error::invalid("optimal_shift needs at least 3 grid points"));
    }
    if p.n() > DENSE_GUARD {
        return Err(Error::TooLarge {
            what: "shift optimization",
            limit: DENSE_GUARD,
            n: p.n(),
        });
    }
    let f = |s: f64| -> Result<f64> { Ok(tau(&shifted_tensor(p, s, left_weight)?).value) };
    let h = 1.0 / (grid_points - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..grid_points)
        .map(|i| {
            let s = if i + 1 == grid_points {
                1.0
            } else {
                i as f64 * h
            };
            f(s).map(|v| (s, v))
        })
        .collect::<Result<_>>()?;
    if (grid[0].1 - 1.0).abs() > 1e-12 {
        return Err(Error::invariant(format!(
            "T(P_0) = {} differs from T(E) = 1",
            grid[0].1
        )));
    }
    let best = grid
        .iter()
        .enumerate()
        .fold(0, |b, (i, g)| if g.1 < grid[b].1 { i } else { b });
    let mut lo = grid[best.saturating_sub(1)].0;
    let mut hi = grid[(best + 1).min(grid_points - 1)].0;
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    while hi - lo > refine_tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = f(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = f(b)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid)?;
    let (sigma, value) = if fm < grid[best].1 {
        (mid, fm)
    } else {
        grid[best]
    };
    Ok(ShiftOptimum { sigma, value, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::hopm;
    use crate::tensor::{builtin, TransitionOperator};

    #[test]
    fn unit_shift_is_hopm() {
        let p = TransitionOperator::from(builtin::p2());
        let x0 = StochasticVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        let opts = SolveOptions::default().with_maxit(40).keeping_iterates();
        let a = shifted_pm(&p, 1.0, 0.5, &x0, &opts).unwrap();
        let b = hopm(&p, &x0, &opts).unwrap();
        assert_eq!(a.trajectory, b.trajectory);
        assert_eq!(a.residual_history, b.residual_history);
    }

    #[test]
    fn rank_one_optimum_is_full_step() {
        let v = StochasticVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let o = optimal_shift(&DenseTensor3::rank_one(&v), 0.5, 11, 1e-6).unwrap();
        assert_eq!(o.sigma, 1.0);
        assert!(o.value.abs() < 1e-15);
    }

    #[test]
    fn identity_curve_is_flat() {
        let e = DenseTensor3::left_identity(3)
            .unwrap()
            .linear_combination(0.5, &DenseTensor3::right_identity(3).unwrap(), 0.5)
            .unwrap();
        let c = shift_curve(&e, 0.5, &[0.0, 0.3, 0.7, 1.0]).unwrap();
        assert!(c.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }
}
