//! CPA-secure hierarchical IBE from the trapdoor function and a pairwise-independent hash.
//!
//! `Enc(m) = (Eval(id, x), h(x) ⊕ m)` for a fresh uniform `x ∈ {0,1}^n`. On a lossy identity
//! `Eval(id, x)` leaves at least `ω = n − log₂ p` bits of entropy in `x`, so `h(x)` is close
//! to uniform as long as `l ≤ ω − 2·lg(1/ε)`.
//!
//! The hash family is `h(x) = A·x ⊕ b` over GF(2) with a uniform `l × n` matrix `A` and a
//! uniform offset `b`.

use std::collections::HashMap;

use rand::{Rng, RngCore};

use crate::auxgen::aux_injective;
use crate::error::{Error, Result};
use crate::groups::{CryptoRngCore, GroupSuite};
use crate::hibtdf::{
    bits_from_u64, hf_eval, hf_inv, hf_mkg, AuxVector, HfMasterPublicKey, HfMasterSecretKey,
    HfOutput, HfParams, HfSecretKey, HierId,
};

/// Default `lg(1/ε)` in the message-length bound.
pub const DEFAULT_EPS_LOG2: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseHash {
    /// `A`, one row of `n` bits per output bit.
    pub rows: Vec<Vec<bool>>,
    pub offset: Vec<bool>,
}

impl PairwiseHash {
    pub fn sample<R: RngCore + ?Sized>(l: usize, n: usize, rng: &mut R) -> Self {
        PairwiseHash {
            rows: (0..l).map(|_| (0..n).map(|_| rng.gen()).collect()).collect(),
            offset: (0..l).map(|_| rng.gen()).collect(),
        }
    }

    pub fn output_len(&self) -> usize {
        self.rows.len()
    }

    pub fn input_len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn apply(&self, x: &[bool]) -> Vec<bool> {
        self.rows
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| row.iter().zip(x).fold(*b, |acc, (a, xi)| acc ^ (*a & *xi)))
            .collect()
    }
}

/// The largest `l` allowed by `l ≤ n − log₂ p − 2·lg(1/ε)`, if any.
pub fn max_message_len<S: GroupSuite>(params: &HfParams<S>, eps_log2: f64) -> Option<usize> {
    let bound = params.omega() - 2.0 * eps_log2;
    (bound >= 1.0).then(|| bound.floor() as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HibePublicKey<S: GroupSuite> {
    pub hf: HfMasterPublicKey<S>,
    pub hash: PairwiseHash,
}

impl<S: GroupSuite> HibePublicKey<S> {
    pub fn message_len(&self) -> usize {
        self.hash.output_len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HibeCiphertext<S: GroupSuite> {
    pub c1: HfOutput<S>,
    pub c2: Vec<bool>,
}

/// `mpk = (mpk', h)` with `mpk'` generated under the injective auxiliary input.
pub fn hibe_mkgen<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HfParams<S>,
    l: usize,
    eps_log2: f64,
    rng: &mut R,
) -> Result<(HibePublicKey<S>, HfMasterSecretKey<S>)> {
    let aux = aux_injective(&params.suite, params.depth, params.width);
    hibe_mkgen_with_aux(params, l, eps_log2, &aux, rng)
}

/// Like [`hibe_mkgen`] but over an arbitrary auxiliary input, e.g. a lossy one.
pub fn hibe_mkgen_with_aux<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HfParams<S>,
    l: usize,
    eps_log2: f64,
    aux: &AuxVector<S>,
    rng: &mut R,
) -> Result<(HibePublicKey<S>, HfMasterSecretKey<S>)> {
    if l == 0 {
        return Err(Error::Parameter("message length must be at least 1".into()));
    }
    let bound = params.omega() - 2.0 * eps_log2;
    if l as f64 > bound {
        return Err(Error::Parameter(format!(
            "message length {l} exceeds n − log₂ p − 2·lg(1/ε) = {bound:.3}"
        )));
    }
    let (hf, msk) = hf_mkg(params, aux, rng)?;
    let hash = PairwiseHash::sample(l, params.n, rng);
    Ok((HibePublicKey { hf, hash }, msk))
}

fn check_message(l: usize, m: &[bool]) -> Result<()> {
    if m.len() != l {
        return Err(Error::dim("message", l, m.len()));
    }
    Ok(())
}

fn xor(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn hibe_enc<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HfParams<S>,
    mpk: &HibePublicKey<S>,
    m: &[bool],
    id: &HierId<S>,
    rng: &mut R,
) -> Result<HibeCiphertext<S>> {
    check_message(mpk.message_len(), m)?;
    let x: Vec<bool> = (0..params.n).map(|_| rng.gen()).collect();
    let c1 = hf_eval(params, &mpk.hf, id, &x)?;
    Ok(HibeCiphertext {
        c1,
        c2: xor(&mpk.hash.apply(&x), m),
    })
}

pub fn hibe_dec<S: GroupSuite>(
    params: &HfParams<S>,
    mpk: &HibePublicKey<S>,
    sk: &HfSecretKey<S>,
    ct: &HibeCiphertext<S>,
    id: &HierId<S>,
) -> Result<Vec<bool>> {
    check_message(mpk.message_len(), &ct.c2)?;
    let x = hf_inv(params, &mpk.hf, id, sk, &ct.c1)?;
    Ok(xor(&ct.c2, &mpk.hash.apply(&x)))
}

/// Groups the inputs `x ∈ {0,1}^n` by their first ciphertext component `Eval(id, x)`:
/// entry `x` is the class index of `x`. `n ≤ 24`.
pub fn output_classes<S: GroupSuite>(
    params: &HfParams<S>,
    mpk: &HfMasterPublicKey<S>,
    id: &HierId<S>,
) -> Result<Vec<usize>> {
    if params.n > 24 {
        return Err(Error::Parameter("too many inputs to enumerate".into()));
    }
    let s = &params.suite;
    let mut index: HashMap<Vec<Vec<u8>>, usize> = HashMap::new();
    let mut classes = Vec::with_capacity(1 << params.n);
    for v in 0..1u64 << params.n {
        let out = hf_eval(params, mpk, id, &bits_from_u64(v, params.n))?;
        let key: Vec<Vec<u8>> = out.elements().map(|e| s.encode_g1(e)).collect();
        let next = index.len();
        classes.push(*index.entry(key).or_insert(next));
    }
    Ok(classes)
}

/// Exact `SD((c₁, c₂), (c₁, U_l))` for uniform `x` and message `0^l`, given the input
/// classes from [`output_classes`].
pub fn smoothing_distance(classes: &[usize], hash: &PairwiseHash) -> f64 {
    let n = hash.input_len();
    let l = hash.output_len();
    let outputs = 1usize << l;
    let class_count = classes.iter().copied().max().map_or(0, |m| m + 1);
    let mut joint = vec![0u64; class_count * outputs];
    let mut marginal = vec![0u64; class_count];
    for (v, &c) in classes.iter().enumerate() {
        let y = hash.apply(&bits_from_u64(v as u64, n));
        let yi = y.iter().enumerate().fold(0, |acc, (i, b)| acc | (usize::from(*b) << i));
        joint[c * outputs + yi] += 1;
        marginal[c] += 1;
    }
    let total = classes.len() as f64;
    let mut sd = 0.0;
    for c in 0..class_count {
        let uniform = marginal[c] as f64 / total / outputs as f64;
        for y in 0..outputs {
            sd += (joint[c * outputs + y] as f64 / total - uniform).abs();
        }
    }
    sd / 2.0
}
