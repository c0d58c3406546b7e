//! Birkhoff contraction ratio of the bilinear map `(x, y) -> Pxy` in the
//! Hilbert projective metric
//!
//! ```text
//! d_H(x, y) = log( max_i x_i / y_i * max_i y_i / x_i ),
//! Delta(P)  = max P[i1,j1,k1] P[i2,j2,k2] / (P[i1,j2,k1] P[i2,j1,k2]),
//! kappa(P)  = tanh(log(Delta(P)) / 4),      T_H(P) = 2 kappa((P + P^S) / 2).
//! ```
//!
//! Ratios use `0/0 = 1` and `a/0 = inf` for `a > 0`. For fixed `(j1, j2)` the
//! maximum over `(i1,k1,i2,k2)` factors into `max f/g * max g/f` with
//! `f = P[:,j1,:]`, `g = P[:,j2,:]`, so `Delta` costs `O(n^4)`.

use super::{gt, reduce_lex, Coefficient, CoefficientReport};
use crate::error::{check_dim, Error, Result};
use crate::tensor::DenseTensor3;

fn check_nonnegative(p: &DenseTensor3) -> Result<()> {
    if let Some(v) = p.as_slice().iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::invalid(format!(
            "Birkhoff coefficients need nonnegative entries, found {v}"
        )));
    }
    Ok(())
}

/// Largest factor of the column pair `(j1, j2)` with its `(i1,k1,i2,k2)`.
fn pair_factor(p: &DenseTensor3, j1: usize, j2: usize) -> (f64, [usize; 4]) {
    let n = p.n();
    let mut f_only = None;
    let mut g_any = None;
    let (mut r1, mut u1) = (0.0, (0, 0));
    let (mut r2, mut u2) = (0.0, (0, 0));
    for i in 0..n {
        for k in 0..n {
            let f = p.column(j1, k)[i];
            let g = p.column(j2, k)[i];
            if g > 0.0 && g_any.is_none() {
                g_any = Some((i, k));
            }
            if f > 0.0 && g == 0.0 && f_only.is_none() {
                f_only = Some((i, k));
            }
            if f > 0.0 && g > 0.0 {
                if f / g > r1 {
                    r1 = f / g;
                    u1 = (i, k);
                }
                if g / f > r2 {
                    r2 = g / f;
                    u2 = (i, k);
                }
            }
        }
    }
    if let (Some(a), Some(b)) = (f_only, g_any) {
        return (f64::INFINITY, [a.0, a.1, b.0, b.1]);
    }
    if r1 > 0.0 {
        (r1 * r2, [u1.0, u1.1, u2.0, u2.1])
    } else {
        (1.0, [0, 0, 0, 0])
    }
}

/// `Delta(P)` and its witness `(i1, j1, k1, i2, j2, k2)`; may be infinite.
pub fn birkhoff_delta(p: &DenseTensor3) -> Result<(f64, [usize; 6])> {
    check_nonnegative(p)?;
    let n = p.n();
    let (v, w) = reduce_lex(n, gt, |j1| {
        let mut best = (1.0, [0usize; 6]);
        for j2 in (0..n).filter(|&j2| j2 != j1) {
            let (f, [i1, k1, i2, k2]) = pair_factor(p, j1, j2);
            if f > best.0 {
                best = (f, [i1, j1, k1, i2, j2, k2]);
            }
        }
        best
    });
    Ok((v, w))
}

pub fn kappa(p: &DenseTensor3) -> Result<CoefficientReport> {
    let (d, w) = birkhoff_delta(p)?;
    let value = (0.25 * d.ln()).tanh();
    Ok(CoefficientReport::new(
        Coefficient::Kappa,
        value,
        w.to_vec(),
        "O(n^4)",
    ))
}

/// `T_H(P) = 2 kappa(Q)` with `Q = (P + P^S) / 2`; the witness refers to `Q`.
pub fn tau_h(p: &DenseTensor3) -> Result<CoefficientReport> {
    let mut r = kappa(&p.symmetrize())?;
    r.name = Coefficient::TauH;
    r.value *= 2.0;
    Ok(r)
}

/// Hilbert projective distance of two positive vectors.
pub fn hilbert_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    if x.is_empty() {
        return Err(Error::invalid("Hilbert distance of empty vectors"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid(
            "Hilbert distance needs strictly positive vectors",
        ));
    }
    let a = x.iter().zip(y).map(|(a, b)| a / b).fold(0.0, f64::max);
    let b = x.iter().zip(y).map(|(a, b)| b / a).fold(0.0, f64::max);
    Ok((a * b).ln().max(0.0))
}
