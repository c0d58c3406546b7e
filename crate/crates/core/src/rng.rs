//! Seed derivation and simplex sampling shared by experiments and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::tensor::StochasticVector;

pub type TaskRng = ChaCha8Rng;

/// Mixes a master seed with a task index (splitmix64 finalizer), so that
/// independent tasks get decorrelated streams regardless of scheduling.
pub fn task_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> TaskRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample from the probability simplex (normalized exponentials).
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StochasticVector {
    let mut v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= total);
    StochasticVector::normalized(v).expect("exponential samples are positive")
}
