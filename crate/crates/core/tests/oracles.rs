//! Library routines against the literal formulas in `common`, plus frozen
//! values of the built-in tensors computed by those formulas.

mod common;

use approx::assert_abs_diff_eq;
use hots_core::coefficients::{
    birkhoff_delta, delta_bruteforce, delta_closed_form, gamma, hilbert_distance, sigma_vectors,
    tau, tau1, tau1_overlap, tau_h, tau_left, tau_left_overlap, tau_left_subsets, tau_right, theta,
    theta_bruteforce,
};
use hots_core::rng::{random_simplex, rng_from_seed, task_seed};
use hots_core::tensor::{builtin, Bilinear};
use hots_core::{DenseTensor3, SquareMatrix, StochasticVector};
use rand::Rng;

fn sample(seed: u64, lo: usize, hi: usize) -> DenseTensor3 {
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(lo..=hi);
    DenseTensor3::random_stochastic_with(n, &mut rng).unwrap()
}

/// Random tensor with roughly a third of the entries zeroed before
/// normalization.
fn sparse_sample(seed: u64, n: usize) -> DenseTensor3 {
    let mut rng = rng_from_seed(seed);
    let mut raw = DenseTensor3::from_fn(n, |_, _, _| {
        if rng.random_bool(0.35) {
            0.0
        } else {
            rng.random::<f64>()
        }
    })
    .unwrap();
    for j in 0..n {
        for k in 0..n {
            let s: f64 = raw.column(j, k).iter().sum();
            for i in 0..n {
                let v = if s == 0.0 {
                    1.0 / n as f64
                } else {
                    raw.get(i, j, k) / s
                };
                raw.set(i, j, k, v);
            }
        }
    }
    raw.into_stochastic().unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn one_norm_coefficients_match_literal_formulas() {
    for s in 0..300 {
        let p = if s % 3 == 0 {
            sparse_sample(task_seed(1, s), 2 + (s as usize % 6))
        } else {
            sample(task_seed(2, s), 2, 7)
        };
        let tl = tau_left(&p).value;
        assert!(close(tl, common::tau_left_overlap(&p), 1e-13));
        assert!(close(tl, common::tau_left_slices(&p), 1e-13));
        assert!(close(tl, tau_left_overlap(&p), 1e-13));
        assert!(close(tl, tau_left_subsets(&p).unwrap(), 1e-13));
        let tr = tau_right(&p).value;
        assert!(close(tr, common::tau_left_overlap(&p.s_transpose()), 1e-13));
        let t = tau(&p).value;
        assert!(close(t, common::tau_quadratic(&p), 1e-13));
        assert!(close(
            t,
            2.0 * common::tau_left_overlap(&p.symmetrize()),
            1e-13
        ));
    }
}

#[test]
fn matrix_coefficient_formulas_agree() {
    let mut rng = rng_from_seed(77);
    for _ in 0..200 {
        let n = rng.random_range(1..=9);
        let cols: Vec<StochasticVector> = (0..n).map(|_| random_simplex(n, &mut rng)).collect();
        let m = SquareMatrix::from_fn(n, |i, j| cols[j].as_slice()[i]);
        let a = tau1(&m);
        assert!(close(a, common::tau1_abs(&m), 1e-14));
        assert!(close(a, common::tau1_overlap(&m), 1e-14));
        assert!(close(a, tau1_overlap(&m), 1e-14));
    }
}

#[test]
fn birkhoff_ratio_matches_six_index_scan() {
    for s in 0..80 {
        let p = if s % 2 == 0 {
            sample(task_seed(3, s), 2, 5)
        } else {
            sparse_sample(task_seed(4, s), 2 + (s as usize % 4))
        };
        let (d, w) = birkhoff_delta(&p).unwrap();
        let oracle = common::birkhoff_delta(&p);
        if oracle.is_infinite() {
            assert!(d.is_infinite());
        } else {
            assert!((d - oracle).abs() <= 1e-10 * oracle, "{d} vs {oracle}");
            // Witness reproduces the value.
            let [i1, j1, k1, i2, j2, k2] = w;
            let r = p.get(i1, j1, k1) * p.get(i2, j2, k2) / (p.get(i1, j2, k1) * p.get(i2, j1, k2));
            assert!((r - d).abs() <= 1e-10 * d || d == 1.0);
        }
        let th = tau_h(&p).unwrap().value;
        assert!(close(th, common::tau_h(&p), 1e-12));
    }
}

#[test]
fn hilbert_metric_contracts_by_tau_h() {
    let mut rng = rng_from_seed(5);
    for s in 0..100 {
        let p = sample(task_seed(6, s), 2, 6);
        let h = tau_h(&p).unwrap().value;
        let n = p.n();
        let x = random_simplex(n, &mut rng);
        let y = random_simplex(n, &mut rng);
        let px = p.apply(x.as_slice(), x.as_slice()).unwrap();
        let py = p.apply(y.as_slice(), y.as_slice()).unwrap();
        let lhs = hilbert_distance(&px, &py).unwrap();
        let rhs = h * hilbert_distance(x.as_slice(), y.as_slice()).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-10) + 1e-12, "{lhs} > {rhs}");
    }
    assert!(close(
        hilbert_distance(&[0.5, 0.5], &[0.25, 0.75]).unwrap(),
        3f64.ln(),
        1e-15
    ));
}

#[test]
fn li_ng_coefficients_match_subset_scans() {
    for s in 0..200 {
        let p = if s % 4 == 0 {
            sparse_sample(task_seed(7, s), 2 + (s as usize % 5))
        } else {
            sample(task_seed(8, s), 2, 7)
        };
        let d = delta_closed_form(&p).unwrap().value;
        assert!(close(d, common::delta_pairs(&p), 1e-13));
        assert!(close(d, common::delta_subsets(&p), 1e-13));
        assert!(close(d, delta_bruteforce(&p).unwrap().value, 1e-13));
        {
            let g = gamma(&p).unwrap().value;
            assert!(
                close(g, common::gamma(&p), 1e-13),
                "{g} vs {}",
                common::gamma(&p)
            );
        }
    }
}

#[test]
fn theta_matches_unfactored_scan() {
    let mut rng = rng_from_seed(9);
    for s in 0..150 {
        let p = sample(task_seed(10, s), 2, 7);
        let sig = sigma_vectors(&p);
        let free: Vec<f64> = (0..p.n()).map(|_| rng.random_range(-0.5..1.0)).collect();
        for v in sig.all().into_iter().chain([free.as_slice()]) {
            let t = theta(&p, v).unwrap().value;
            assert!(close(t, common::theta(&p, v), 1e-13));
            assert!(close(t, theta_bruteforce(&p, v).unwrap(), 1e-13));
        }
    }
}

#[test]
fn bilinear_product_matches_triple_sum() {
    let mut rng = rng_from_seed(11);
    for s in 0..50 {
        let p = sample(task_seed(12, s), 2, 9);
        let x = random_simplex(p.n(), &mut rng);
        let y = random_simplex(p.n(), &mut rng);
        let a = p.apply(x.as_slice(), y.as_slice()).unwrap();
        let b = common::pxy(&p, x.as_slice(), y.as_slice());
        assert!(common::l1(&a, &b) < 1e-14);
    }
}

/// Values computed with the literal formulas in `common` and frozen.
#[test]
fn builtin_values_are_frozen() {
    let rows = [
        // name, T, T_L, T_R, gamma, theta(max), theta(min), theta(mid)
        ("example61", 0.5, 0.5, 1.0, 1.0, 3.0, 2.0, 2.0),
        (
            "p1",
            1.5,
            2.0 / 3.0,
            1.0,
            7.0 / 6.0,
            8.0 / 3.0,
            2.0,
            7.0 / 3.0,
        ),
        ("p2", 1.5, 1.0, 2.0 / 3.0, 7.0 / 6.0, 2.0, 2.0, 2.0),
    ];
    for (name, t, tl, tr, g, th1, th2, th3) in rows {
        let p = builtin::by_name(name).unwrap();
        assert_abs_diff_eq!(tau(&p).value, t, epsilon = 1e-14);
        assert_abs_diff_eq!(tau_left(&p).value, tl, epsilon = 1e-14);
        assert_abs_diff_eq!(tau_right(&p).value, tr, epsilon = 1e-14);
        assert_eq!(tau_h(&p).unwrap().value, 2.0, "{name}");
        assert_eq!(delta_closed_form(&p).unwrap().value, 0.0, "{name}");
        assert_abs_diff_eq!(gamma(&p).unwrap().value, g, epsilon = 1e-14);
        let s = sigma_vectors(&p);
        for (v, want) in s.all().into_iter().zip([th1, th2, th3]) {
            assert_abs_diff_eq!(theta(&p, v).unwrap().value, want, epsilon = 1e-14);
        }
    }
}
