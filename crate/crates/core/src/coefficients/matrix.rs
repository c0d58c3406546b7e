use super::{Coefficient, CoefficientReport};
use crate::tensor::SquareMatrix;

/// `tau_1(M) = 1/2 max_{j,k} sum_i |M[i,j] - M[i,k]|`.
pub fn tau1(m: &SquareMatrix) -> f64 {
    tau1_report(m).value
}

pub fn tau1_report(m: &SquareMatrix) -> CoefficientReport {
    let n = m.n();
    let mut best = 0.0;
    let mut witness = vec![0, 0];
    for j in 0..n {
        for k in j + 1..n {
            let s: f64 = m
                .column(j)
                .iter()
                .zip(m.column(k))
                .map(|(a, b)| (a - b).abs())
                .sum();
            if 0.5 * s > best {
                best = 0.5 * s;
                witness = vec![j, k];
            }
        }
    }
    CoefficientReport::new(Coefficient::Tau1, best, witness, "O(n^3)")
}

/// `1 - min_{j,k} sum_i min(M[i,j], M[i,k])`, valid for column-stochastic `M`.
pub fn tau1_overlap(m: &SquareMatrix) -> f64 {
    let n = m.n();
    let mut overlap = f64::INFINITY;
    for j in 0..n {
        for k in j..n {
            let s: f64 = m
                .column(j)
                .iter()
                .zip(m.column(k))
                .map(|(a, b)| a.min(*b))
                .sum();
            overlap = overlap.min(s);
        }
    }
    1.0 - overlap
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_and_identity() {
        let r = SquareMatrix::from_fn(4, |i, _| [0.1, 0.2, 0.3, 0.4][i]);
        assert_eq!(tau1(&r), 0.0);
        assert_eq!(tau1(&SquareMatrix::identity(2)), 1.0);
        assert_eq!(tau1_overlap(&SquareMatrix::identity(2)), 1.0);
        let rep = tau1_report(&SquareMatrix::identity(3));
        assert_eq!(rep.witness, vec![0, 1]);
    }
}
