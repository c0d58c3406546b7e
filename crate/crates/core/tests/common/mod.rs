//! Naive reference implementations used as oracles. Each one follows its
//! defining formula literally, with no factoring or incremental updates.
#![allow(dead_code)]

use hots_core::{DenseTensor3, SquareMatrix};

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn col(p: &DenseTensor3, j: usize, k: usize) -> Vec<f64> {
    (0..p.n()).map(|i| p.get(i, j, k)).collect()
}

pub fn tau1_overlap(m: &SquareMatrix) -> f64 {
    let n = m.n();
    let mut best = f64::INFINITY;
    for j in 0..n {
        for k in 0..n {
            let s: f64 = (0..n).map(|i| m.get(i, j).min(m.get(i, k))).sum();
            best = best.min(s);
        }
    }
    1.0 - best
}

pub fn tau1_abs(m: &SquareMatrix) -> f64 {
    let n = m.n();
    let mut best: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let s: f64 = (0..n).map(|i| (m.get(i, j) - m.get(i, k)).abs()).sum();
            best = best.max(0.5 * s);
        }
    }
    best
}

/// `1 - min_{j,k1,k2} sum_i min(P[i,j,k1], P[i,j,k2])`.
pub fn tau_left_overlap(p: &DenseTensor3) -> f64 {
    let n = p.n();
    let mut best = f64::INFINITY;
    for j in 0..n {
        for k1 in 0..n {
            for k2 in 0..n {
                let s: f64 = (0..n).map(|i| p.get(i, j, k1).min(p.get(i, j, k2))).sum();
                best = best.min(s);
            }
        }
    }
    1.0 - best
}

/// `T_L` as the largest matrix coefficient over the slices `M_k[i,j] = P[i,k,j]`.
pub fn tau_left_slices(p: &DenseTensor3) -> f64 {
    let n = p.n();
    (0..n)
        .map(|j| tau1_abs(&SquareMatrix::from_fn(n, |i, k| p.get(i, j, k))))
        .fold(0.0, f64::max)
}

pub fn tau_quadratic(p: &DenseTensor3) -> f64 {
    let n = p.n();
    let mut best: f64 = 0.0;
    for j in 0..n {
        for k1 in 0..n {
            for k2 in 0..n {
                let s: f64 = (0..n)
                    .map(|i| {
                        (p.get(i, j, k1) - p.get(i, j, k2) + p.get(i, k1, j) - p.get(i, k2, j))
                            .abs()
                    })
                    .sum();
                best = best.max(0.5 * s);
            }
        }
    }
    best
}

fn ratio(num: f64, den: f64) -> f64 {
    match (num > 0.0, den > 0.0) {
        (false, false) => 1.0,
        (true, false) => f64::INFINITY,
        _ => num / den,
    }
}

/// Six-index scan of the Birkhoff cross ratio.
pub fn birkhoff_delta(p: &DenseTensor3) -> f64 {
    let n = p.n();
    let mut best: f64 = 1.0;
    for i1 in 0..n {
        for j1 in 0..n {
            for k1 in 0..n {
                for i2 in 0..n {
                    for j2 in 0..n {
                        for k2 in 0..n {
                            let r = ratio(
                                p.get(i1, j1, k1) * p.get(i2, j2, k2),
                                p.get(i1, j2, k1) * p.get(i2, j1, k2),
                            );
                            best = best.max(r);
                        }
                    }
                }
            }
        }
    }
    best
}

pub fn tau_h(p: &DenseTensor3) -> f64 {
    2.0 * (0.25 * birkhoff_delta(&p.symmetrize()).ln()).tanh()
}

fn mass(p: &DenseTensor3, mask: u32, inside: bool, j: usize, k: usize) -> f64 {
    (0..p.n())
        .filter(|i| ((mask >> i) & 1 == 1) == inside)
        .map(|i| p.get(i, j, k))
        .sum()
}

/// Subset minimum over all `2^n` subsets.
pub fn delta_subsets(p: &DenseTensor3) -> f64 {
    let n = p.n();
    let mut best = f64::INFINITY;
    for mask in 0..(1u32 << n) {
        let mut a = f64::INFINITY;
        let mut b = f64::INFINITY;
        for j in 0..n {
            for k in 0..n {
                a = a.min(mass(p, mask, false, j, k));
                b = b.min(mass(p, mask, true, j, k));
            }
        }
        best = best.min(a + b);
    }
    best
}

/// `1 - 1/2 max || P[:,j1,k1] - P[:,j2,k2] ||_1`.
pub fn delta_pairs(p: &DenseTensor3) -> f64 {
    let n = p.n();
    let mut best: f64 = 0.0;
    for j1 in 0..n {
        for k1 in 0..n {
            for j2 in 0..n {
                for k2 in 0..n {
                    best = best.max(l1(&col(p, j1, k1), &col(p, j2, k2)));
                }
            }
        }
    }
    1.0 - 0.5 * best
}

/// Li–Ng gamma over proper nonempty subsets.
pub fn gamma(p: &DenseTensor3) -> f64 {
    let n = p.n();
    let mut best = f64::INFINITY;
    for mask in 1..(1u32 << n) - 1 {
        let isin = |x: usize| (mask >> x) & 1 == 1;
        let mut first = f64::INFINITY;
        for k in 0..n {
            let x = (0..n)
                .filter(|&j| isin(j))
                .map(|j| mass(p, mask, false, j, k));
            let y = (0..n)
                .filter(|&j| !isin(j))
                .map(|j| mass(p, mask, true, j, k));
            first = first.min(x.fold(f64::INFINITY, f64::min) + y.fold(f64::INFINITY, f64::min));
        }
        let mut second = f64::INFINITY;
        for j in 0..n {
            let x = (0..n)
                .filter(|&k| isin(k))
                .map(|k| mass(p, mask, false, j, k));
            let y = (0..n)
                .filter(|&k| !isin(k))
                .map(|k| mass(p, mask, true, j, k));
            second = second.min(x.fold(f64::INFINITY, f64::min) + y.fold(f64::INFINITY, f64::min));
        }
        best = best.min(first + second);
    }
    best
}

pub fn theta(p: &DenseTensor3, s: &[f64]) -> f64 {
    let n = p.n();
    let mut best = f64::NEG_INFINITY;
    for j in 0..n {
        for k1 in 0..n {
            for k2 in 0..n {
                let v: f64 = (0..n)
                    .map(|i| (p.get(i, j, k1) - s[i]).abs() + (p.get(i, k2, j) - s[i]).abs())
                    .sum();
                best = best.max(v);
            }
        }
    }
    best
}

/// `(Pxy)_i = sum_{j,k} P[i,j,k] x_j y_k`.
pub fn pxy(p: &DenseTensor3, x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = p.n();
    (0..n)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += p.get(i, j, k) * x[j] * y[k];
                }
            }
            s
        })
        .collect()
}
