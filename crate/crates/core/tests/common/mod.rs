#![allow(dead_code)]

use hibtdf::groups::GroupSuite;
use rand::RngCore;

pub fn random_vector<S: GroupSuite, R: RngCore>(s: &S, width: usize, rng: &mut R) -> Vec<S::Scalar> {
    (0..width).map(|_| s.random_scalar(rng)).collect()
}

/// A uniformly random vector orthogonal to `y`, which must have a nonzero last coordinate.
pub fn orthogonal<S: GroupSuite, R: RngCore>(s: &S, y: &[S::Scalar], rng: &mut R) -> Vec<S::Scalar> {
    let mu = y.len();
    let mut x = random_vector(s, mu - 1, rng);
    let partial = s.inner_product(&x, &y[..mu - 1]);
    let last = s.scalar_mul(&s.scalar_neg(&partial), &s.scalar_inv(&y[mu - 1]).unwrap());
    x.push(last);
    x
}

/// Attribute levels with nonzero last coordinates.
pub fn attributes<S: GroupSuite, R: RngCore>(
    s: &S,
    levels: usize,
    width: usize,
    rng: &mut R,
) -> Vec<Vec<S::Scalar>> {
    (0..levels)
        .map(|_| {
            let mut y = random_vector(s, width - 1, rng);
            y.push(s.random_nonzero_scalar(rng));
            y
        })
        .collect()
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha20Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
