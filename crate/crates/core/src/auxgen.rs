//! Auxiliary inputs for [`crate::hibtdf::hf_mkg`].
//!
//! An identity is lossy under `y` when `⟨y_{i₁}, id_{i₁}⟩ = 0` on each of its levels and
//! injective otherwise. Three generators are provided: the all-injective vector, the
//! selective vector that is lossy exactly on the prefixes of a target identity (`μ = 2`),
//! and the randomized adaptive sampler.
//!
//! The adaptive sampler draws, per level, `y' ∈ [0, 2q)`, `ξ ∈ [0, μ)` and a tail
//! `y[2..μ] ∈ [0, 2q)^{μ−1}`, then sets `y[1] = y' − 2ξq mod p`.

use num_bigint::BigUint;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::groups::GroupSuite;
use crate::hibtdf::{AuxVector, HierId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Lossy,
    Injective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport<S: GroupSuite> {
    pub products: Vec<S::Scalar>,
    pub verdict: Verdict,
}

impl<S: GroupSuite> PartitionReport<S> {
    pub fn is_lossy(&self) -> bool {
        self.verdict == Verdict::Lossy
    }
}

/// `y⁽⁰⁾ = [(1,0,…,0) | … | (1,0,…,0)]`.
pub fn aux_injective<S: GroupSuite>(suite: &S, depth: usize, width: usize) -> AuxVector<S> {
    let level: Vec<S::Scalar> = (0..width)
        .map(|i| {
            if i == 0 {
                suite.scalar_one()
            } else {
                suite.scalar_zero()
            }
        })
        .collect();
    AuxVector::new(vec![level; depth])
}

/// `y_{i₁} = (−x*_{i₁}, 1)` on the levels of `id* = ((1,x*₁), …)`, `(1, 0)` below them.
pub fn aux_selective<S: GroupSuite>(
    suite: &S,
    id_star: &HierId<S>,
    depth: usize,
    width: usize,
) -> Result<AuxVector<S>> {
    if width != 2 {
        return Err(Error::Parameter(format!(
            "the selective auxiliary input is defined for μ = 2 only, got μ = {width}"
        )));
    }
    if id_star.level() == 0 || id_star.level() > depth {
        return Err(Error::Depth {
            requested: id_star.level(),
            max: depth,
        });
    }
    let mut levels = Vec::with_capacity(depth);
    for l in &id_star.levels {
        if l.len() != 2 {
            return Err(Error::dim("identity level", 2, l.len()));
        }
        if l[0] != suite.scalar_one() {
            return Err(Error::Identity(
                "the first coordinate of every level must be 1".into(),
            ));
        }
        levels.push(vec![suite.scalar_neg(&l[1]), suite.scalar_one()]);
    }
    levels.resize(depth, vec![suite.scalar_one(), suite.scalar_zero()]);
    Ok(AuxVector::new(levels))
}

/// The integers drawn by the adaptive sampler for one level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdaptiveDraw {
    pub y_prime: u64,
    pub xi: u64,
    pub tail: Vec<u64>,
}

fn check_adaptive<S: GroupSuite>(suite: &S, width: usize, q: u64) -> Result<()> {
    if q == 0 || width == 0 {
        return Err(Error::Parameter("q and μ must be at least 1".into()));
    }
    let needed = BigUint::from(2u32) * BigUint::from(q) * BigUint::from(width);
    if needed > suite.order() {
        return Err(Error::Parameter(format!(
            "q = {q} exceeds p/(2μ) for μ = {width}"
        )));
    }
    Ok(())
}

pub fn sample_adaptive_draw<R: RngCore + ?Sized>(width: usize, q: u64, rng: &mut R) -> AdaptiveDraw {
    let y_prime = rng.gen_range(0..2 * q);
    let xi = rng.gen_range(0..width as u64);
    let tail = (1..width).map(|_| rng.gen_range(0..2 * q)).collect();
    AdaptiveDraw { y_prime, xi, tail }
}

/// Every draw of one level, each with probability `1/(2q · μ · (2q)^{μ−1})`.
pub fn enumerate_adaptive_draws(width: usize, q: u64) -> Vec<AdaptiveDraw> {
    let mut out = Vec::new();
    let tails = (2 * q).pow(width as u32 - 1);
    for y_prime in 0..2 * q {
        for xi in 0..width as u64 {
            for t in 0..tails {
                let mut rest = t;
                let tail = (1..width)
                    .map(|_| {
                        let d = rest % (2 * q);
                        rest /= 2 * q;
                        d
                    })
                    .collect();
                out.push(AdaptiveDraw { y_prime, xi, tail });
            }
        }
    }
    out
}

/// The level vector `(y' − 2ξq, y[2], …, y[μ]) mod p` of a draw.
pub fn adaptive_level<S: GroupSuite>(suite: &S, q: u64, draw: &AdaptiveDraw) -> Vec<S::Scalar> {
    let shift = suite.scalar_mul(
        &suite.scalar_from_u64(2 * q),
        &suite.scalar_from_u64(draw.xi),
    );
    let first = suite.scalar_sub(&suite.scalar_from_u64(draw.y_prime), &shift);
    std::iter::once(first)
        .chain(draw.tail.iter().map(|&t| suite.scalar_from_u64(t)))
        .collect()
}

/// Samples `y⁽¹⁾` for an adversary making at most `q ≤ p/(2μ)` key queries.
pub fn aux_adaptive<S: GroupSuite, R: RngCore + ?Sized>(
    suite: &S,
    depth: usize,
    width: usize,
    q: u64,
    rng: &mut R,
) -> Result<AuxVector<S>> {
    check_adaptive(suite, width, q)?;
    Ok(AuxVector::new(
        (0..depth)
            .map(|_| adaptive_level(suite, q, &sample_adaptive_draw(width, q, rng)))
            .collect(),
    ))
}

/// Per-level inner products `⟨y_{i₁}, id_{i₁}⟩` and the resulting verdict.
pub fn partition<S: GroupSuite>(
    suite: &S,
    aux: &AuxVector<S>,
    id: &HierId<S>,
) -> Result<PartitionReport<S>> {
    if id.level() > aux.levels.len() {
        return Err(Error::Depth {
            requested: id.level(),
            max: aux.levels.len(),
        });
    }
    let mut products = Vec::with_capacity(id.level());
    for (y, x) in aux.levels.iter().zip(&id.levels) {
        if y.len() != x.len() {
            return Err(Error::dim("identity level", y.len(), x.len()));
        }
        products.push(suite.inner_product(y, x));
    }
    let verdict = if products.iter().all(|p| suite.scalar_is_zero(p)) {
        Verdict::Lossy
    } else {
        Verdict::Injective
    };
    Ok(PartitionReport { products, verdict })
}
