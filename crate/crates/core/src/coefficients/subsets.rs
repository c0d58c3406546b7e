//! Gray-code walk over all subsets `I` of the row indices, maintaining
//! `sum_{i in I} P[i,j,k]` and `sum_{i not in I} P[i,j,k]` for every column.

use crate::error::{Error, Result};
use crate::tensor::DenseTensor3;

use super::li_ng::SUBSET_LIMIT;

/// Exact recomputation interval, bounding accumulated rounding.
const REFRESH: u64 = 64;

pub(crate) struct SubsetSums<'a> {
    p: &'a DenseTensor3,
    step: u64,
    mask: u64,
    inside: Vec<f64>,
    outside: Vec<f64>,
}

impl<'a> SubsetSums<'a> {
    /// Starts at `I = {}`.
    pub(crate) fn new(p: &'a DenseTensor3) -> Result<Self> {
        let n = p.n();
        if n > SUBSET_LIMIT {
            return Err(Error::TooLarge {
                what: "subset enumeration",
                limit: SUBSET_LIMIT,
                n,
            });
        }
        let mut s = SubsetSums {
            p,
            step: 0,
            mask: 0,
            inside: vec![0.0; n * n],
            outside: vec![0.0; n * n],
        };
        s.recompute();
        Ok(s)
    }

    fn recompute(&mut self) {
        let n = self.p.n();
        for k in 0..n {
            for j in 0..n {
                let (mut a, mut b) = (0.0, 0.0);
                for (i, v) in self.p.column(j, k).iter().enumerate() {
                    if self.mask >> i & 1 == 1 {
                        a += v;
                    } else {
                        b += v;
                    }
                }
                self.inside[j + n * k] = a;
                self.outside[j + n * k] = b;
            }
        }
    }

    pub(crate) fn mask(&self) -> u64 {
        self.mask
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    /// `sum_{i in I} P[i,j,k]` at `j + n*k`.
    pub(crate) fn inside(&self) -> &[f64] {
        &self.inside
    }

    pub(crate) fn outside(&self) -> &[f64] {
        &self.outside
    }

    /// Moves to the next subset; false once all `2^n` have been visited.
    pub(crate) fn advance(&mut self) -> bool {
        let n = self.p.n();
        self.step += 1;
        if self.step >= 1u64 << n {
            return false;
        }
        let bit = self.step.trailing_zeros() as usize;
        self.mask ^= 1 << bit;
        if self.step.is_multiple_of(REFRESH) {
            self.recompute();
            return true;
        }
        let sign = if self.contains(bit) { 1.0 } else { -1.0 };
        for k in 0..n {
            for j in 0..n {
                let v = sign * self.p.get(bit, j, k);
                self.inside[j + n * k] += v;
                self.outside[j + n * k] -= v;
            }
        }
        true
    }
}

/// Members of a subset mask, ascending.
pub(crate) fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}
