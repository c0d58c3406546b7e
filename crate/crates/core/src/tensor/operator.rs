use std::sync::Arc;

use super::dense::DenseTensor3;
use super::matrix::SparseMatrix;
use super::sparse::SparseTensor3;
use super::vector::{StochasticVector, VALIDATION_TOL};
use super::Bilinear;
use crate::error::{check_dim, Error, Result};

/// One stochastic building block of a [`TransitionOperator`].
#[derive(Debug, Clone)]
pub enum Operand {
    Dense(Arc<DenseTensor3>),
    Sparse(Arc<SparseTensor3>),
    /// Edge tensor `A[i,j,k] = A[i,j]` of a column-stochastic matrix.
    LeftMatrix(Arc<SparseMatrix>),
    /// Teleportation tensor `V[i,j,k] = v_i`.
    RankOne(StochasticVector),
    /// `E^L[i,j,k] = delta_ij`.
    LeftIdentity,
    /// `E^R[i,j,k] = delta_ik`.
    RightIdentity,
}

impl Operand {
    fn dim(&self) -> Option<usize> {
        match self {
            Operand::Dense(t) => Some(t.n()),
            Operand::Sparse(t) => Some(t.n()),
            Operand::LeftMatrix(a) => Some(a.n()),
            Operand::RankOne(v) => Some(v.len()),
            Operand::LeftIdentity | Operand::RightIdentity => None,
        }
    }

    fn apply_into(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        match self {
            Operand::Dense(t) => t.apply_into(x, y, out),
            Operand::Sparse(t) => t.apply_into(x, y, out),
            Operand::LeftMatrix(a) => {
                a.apply_into(x, out);
                let sy: f64 = y.iter().sum();
                out.iter_mut().for_each(|o| *o *= sy);
            }
            Operand::RankOne(v) => {
                let s = x.iter().sum::<f64>() * y.iter().sum::<f64>();
                for (o, vi) in out.iter_mut().zip(v.as_slice()) {
                    *o = s * vi;
                }
            }
            Operand::LeftIdentity => {
                let sy: f64 = y.iter().sum();
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = xi * sy;
                }
            }
            Operand::RightIdentity => {
                let sx: f64 = x.iter().sum();
                for (o, yi) in out.iter_mut().zip(y) {
                    *o = yi * sx;
                }
            }
        }
    }

    fn add_dense(&self, w: f64, n: usize, acc: &mut DenseTensor3, limit: usize) -> Result<()> {
        let add = |acc: &mut DenseTensor3, i, j, k, v: f64| {
            let cur = acc.get(i, j, k);
            acc.set(i, j, k, cur + w * v);
        };
        match self {
            Operand::Dense(t) => {
                for k in 0..n {
                    for j in 0..n {
                        for i in 0..n {
                            add(acc, i, j, k, t.get(i, j, k));
                        }
                    }
                }
            }
            Operand::Sparse(t) => {
                let d = t.densify(limit)?;
                return Operand::Dense(Arc::new(d)).add_dense(w, n, acc, limit);
            }
            Operand::LeftMatrix(a) => {
                let m = a.to_dense();
                for k in 0..n {
                    for j in 0..n {
                        for i in 0..n {
                            add(acc, i, j, k, m.get(i, j));
                        }
                    }
                }
            }
            Operand::RankOne(v) => {
                for k in 0..n {
                    for j in 0..n {
                        for i in 0..n {
                            add(acc, i, j, k, v.as_slice()[i]);
                        }
                    }
                }
            }
            Operand::LeftIdentity => {
                for k in 0..n {
                    for i in 0..n {
                        add(acc, i, i, k, 1.0);
                    }
                }
            }
            Operand::RightIdentity => {
                for j in 0..n {
                    for i in 0..n {
                        add(acc, i, j, i, 1.0);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Convex combination `sum_t w_t * operand_t` of stochastic tensors. Covers
/// the teleported tensor `aP + (1-a)V`, the shifted tensor `sP + (1-s)E`
/// and the blended graph tensor `bT + (1-b)A` without densifying anything.
#[derive(Debug, Clone)]
pub struct TransitionOperator {
    n: usize,
    terms: Vec<(f64, Operand)>,
}

impl TransitionOperator {
    pub fn new(n: usize, terms: Vec<(f64, Operand)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("operator dimension must be positive"));
        }
        if terms.is_empty() {
            return Err(Error::invalid("operator needs at least one term"));
        }
        let mut total = 0.0;
        for (w, op) in &terms {
            if !(0.0..=1.0).contains(w) {
                return Err(Error::invalid(format!("term weight {w} outside [0, 1]")));
            }
            if let Some(d) = op.dim() {
                check_dim(n, d)?;
            }
            if let Operand::Dense(t) = op {
                if !t.is_stochastic() {
                    return Err(Error::invalid(
                        "dense operands must be validated as stochastic",
                    ));
                }
            }
            total += w;
        }
        if (total - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::invalid(format!(
                "term weights sum to {total}, not 1"
            )));
        }
        Ok(TransitionOperator { n, terms })
    }

    pub fn from_dense(p: DenseTensor3) -> Result<Self> {
        let n = p.n();
        Self::new(n, vec![(1.0, Operand::Dense(Arc::new(p)))])
    }

    /// `E = w E^L + (1 - w) E^R`, which satisfies `Exx = x` on the simplex.
    pub fn identity(n: usize, left_weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&left_weight) {
            return Err(Error::invalid(format!(
                "left weight {left_weight} outside [0, 1]"
            )));
        }
        Self::new(
            n,
            vec![
                (left_weight, Operand::LeftIdentity),
                (1.0 - left_weight, Operand::RightIdentity),
            ],
        )
    }

    /// `w * self + (1 - w) * other`, flattening both term lists.
    pub fn mix(&self, w: f64, other: &TransitionOperator) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::invalid(format!("mixing weight {w} outside [0, 1]")));
        }
        check_dim(self.n, other.n)?;
        let terms = self
            .terms
            .iter()
            .map(|(a, op)| (w * a, op.clone()))
            .chain(
                other
                    .terms
                    .iter()
                    .map(|(b, op)| ((1.0 - w) * b, op.clone())),
            )
            .collect();
        Self::new(self.n, terms)
    }

    /// `alpha * self + (1 - alpha) V` with `V[i,j,k] = v_i`.
    pub fn teleported(&self, alpha: f64, v: &StochasticVector) -> Result<Self> {
        check_dim(self.n, v.len())?;
        let tele = Self::new(self.n, vec![(1.0, Operand::RankOne(v.clone()))])?;
        self.mix(alpha, &tele)
    }

    /// `sigma * self + (1 - sigma) E` with `E = w E^L + (1 - w) E^R`.
    pub fn shifted(&self, sigma: f64, left_weight: f64) -> Result<Self> {
        let e = Self::identity(self.n, left_weight)?;
        self.mix(sigma, &e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, Operand)] {
        &self.terms
    }
}

impl From<DenseTensor3> for TransitionOperator {
    /// Panics if `p` has not been validated as stochastic.
    fn from(p: DenseTensor3) -> Self {
        Self::from_dense(p).expect("dense tensor must be marked stochastic")
    }
}

impl Bilinear for TransitionOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let live: Vec<_> = self.terms.iter().filter(|(w, _)| *w != 0.0).collect();
        if let [(w, op)] = live.as_slice() {
            op.apply_into(x, y, out);
            if *w != 1.0 {
                out.iter_mut().for_each(|o| *o *= w);
            }
            return;
        }
        let mut buf = vec![0.0; self.n];
        for (w, op) in live {
            op.apply_into(x, y, &mut buf);
            for (o, b) in out.iter_mut().zip(&buf) {
                *o += w * b;
            }
        }
    }

    fn is_stochastic(&self) -> bool {
        true
    }

    fn densify(&self, limit: usize) -> Result<DenseTensor3> {
        if self.n > limit {
            return Err(Error::TooLarge {
                what: "dense materialization",
                limit,
                n: self.n,
            });
        }
        if let [(w, Operand::Dense(t))] = self.terms.as_slice() {
            if *w == 1.0 {
                return Ok((**t).clone());
            }
        }
        let mut acc = DenseTensor3::zeros(self.n)?;
        for (w, op) in &self.terms {
            if *w != 0.0 {
                op.add_dense(*w, self.n, &mut acc, limit)?;
            }
        }
        Ok(acc.mark_stochastic_unchecked())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_simplex, rng_from_seed};
    use crate::tensor::apply_bilinear;

    #[test]
    fn identity_acts_as_identity_on_simplex() {
        let mut rng = rng_from_seed(3);
        for &w in &[0.0, 0.5, 1.0, 0.3] {
            let e = TransitionOperator::identity(5, w).unwrap();
            for _ in 0..10 {
                let x = random_simplex(5, &mut rng);
                let exx = apply_bilinear(&e, &x, &x).unwrap();
                for (a, b) in exx.iter().zip(x.as_slice()) {
                    assert!((a - b).abs() < 1e-14);
                }
            }
        }
        assert!(TransitionOperator::identity(3, 1.5).is_err());
    }

    #[test]
    fn left_identity_returns_first_argument() {
        let e = TransitionOperator::identity(3, 1.0).unwrap();
        let v = StochasticVector::new(vec![0.2, 0.5, 0.3]).unwrap();
        let y = StochasticVector::new(vec![0.9, 0.05, 0.05]).unwrap();
        assert_eq!(apply_bilinear(&e, &v, &y).unwrap(), v.as_slice().to_vec());
    }

    #[test]
    fn rank_one_returns_teleportation_vector() {
        let v = StochasticVector::new(vec![0.1, 0.7, 0.2]).unwrap();
        let op = TransitionOperator::new(3, vec![(1.0, Operand::RankOne(v.clone()))]).unwrap();
        let mut rng = rng_from_seed(9);
        let x = random_simplex(3, &mut rng);
        let y = random_simplex(3, &mut rng);
        let out = apply_bilinear(&op, &x, &y).unwrap();
        for (a, b) in out.iter().zip(v.as_slice()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn densify_matches_apply() {
        let p = DenseTensor3::random_stochastic(4, 5).unwrap();
        let v = StochasticVector::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let op = TransitionOperator::from(p)
            .teleported(0.7, &v)
            .unwrap()
            .shifted(0.8, 0.25)
            .unwrap();
        let d = op.densify(64).unwrap();
        assert!(d.validate_stochastic(1e-12).unwrap().stochastic);
        let mut rng = rng_from_seed(1);
        let x = random_simplex(4, &mut rng);
        let y = random_simplex(4, &mut rng);
        let a = op.apply(x.as_slice(), y.as_slice()).unwrap();
        let b = d.apply(x.as_slice(), y.as_slice()).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-14);
        }
        assert!(op.densify(3).is_err());
    }

    #[test]
    fn weights_must_be_convex() {
        let r = TransitionOperator::new(
            2,
            vec![(0.5, Operand::LeftIdentity), (0.6, Operand::RightIdentity)],
        );
        assert!(r.is_err());
        let unchecked = DenseTensor3::zeros(2).unwrap();
        assert!(TransitionOperator::from_dense(unchecked).is_err());
    }
}
