//! Deterministic hierarchical IBE: encryption is the trapdoor function evaluated on the
//! message itself, decryption is its inversion.
//!
//! Security needs high min-entropy messages. [`BlockSource`] provides two message
//! distributions of known min-entropy, and [`priv1_experiment`] runs the single-challenge
//! indistinguishability game against a scripted adversary.

use rand::{Rng, RngCore};

use crate::auxgen::aux_injective;
use crate::error::{Error, Result};
use crate::groups::{CryptoRngCore, GroupSuite};
use crate::hibtdf::{
    hf_eval, hf_inv, hf_mkg, HfMasterPublicKey, HfOutput, HfParams, HfSecretKey, HierId, Mode,
};
use crate::lossylab::{KeyOracle, QueryEvent};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetCiphertext<S: GroupSuite> {
    pub c: HfOutput<S>,
}

pub fn det_enc<S: GroupSuite>(
    params: &HfParams<S>,
    mpk: &HfMasterPublicKey<S>,
    m: &[bool],
    id: &HierId<S>,
) -> Result<DetCiphertext<S>> {
    Ok(DetCiphertext {
        c: hf_eval(params, mpk, id, m)?,
    })
}

pub fn det_dec<S: GroupSuite>(
    params: &HfParams<S>,
    mpk: &HfMasterPublicKey<S>,
    sk: &HfSecretKey<S>,
    ct: &DetCiphertext<S>,
    id: &HierId<S>,
) -> Result<Vec<bool>> {
    hf_inv(params, mpk, id, sk, &ct.c)
}

/// A `(t, n)`-source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSource {
    /// Uniform on `{0,1}^n`; min-entropy `n`.
    Uniform { n: usize },
    /// Uniform on `offset + span(basis)`; min-entropy `|basis|` for independent vectors.
    AffineSubspace {
        offset: Vec<bool>,
        basis: Vec<Vec<bool>>,
    },
}

/// Rank of a set of GF(2) vectors.
pub fn gf2_rank(vectors: &[Vec<bool>]) -> usize {
    let mut rows: Vec<Vec<bool>> = vectors.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let (a, b) = if r < rank {
                    let (lo, hi) = rows.split_at_mut(rank);
                    (&mut lo[r], &hi[0])
                } else {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&mut hi[0], &lo[rank])
                };
                a.iter_mut().zip(b).for_each(|(x, y)| *x ^= *y);
            }
        }
        rank += 1;
    }
    rank
}

impl BlockSource {
    pub fn uniform(n: usize) -> Self {
        BlockSource::Uniform { n }
    }

    /// A random affine subspace of dimension `t` in `{0,1}^n`.
    pub fn random_affine<R: RngCore + ?Sized>(n: usize, t: usize, rng: &mut R) -> Result<Self> {
        if t > n {
            return Err(Error::Parameter(format!(
                "min-entropy {t} exceeds the length {n}"
            )));
        }
        let mut basis: Vec<Vec<bool>> = Vec::with_capacity(t);
        while basis.len() < t {
            let v: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            basis.push(v);
            if gf2_rank(&basis) < basis.len() {
                basis.pop();
            }
        }
        Ok(BlockSource::AffineSubspace {
            offset: (0..n).map(|_| rng.gen()).collect(),
            basis,
        })
    }

    pub fn len(&self) -> usize {
        match self {
            BlockSource::Uniform { n } => *n,
            BlockSource::AffineSubspace { offset, .. } => offset.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Exact `H_∞`, computed from the support size.
    pub fn min_entropy(&self) -> usize {
        match self {
            BlockSource::Uniform { n } => *n,
            BlockSource::AffineSubspace { basis, .. } => gf2_rank(basis),
        }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        match self {
            BlockSource::Uniform { n } => (0..*n).map(|_| rng.gen()).collect(),
            BlockSource::AffineSubspace { offset, basis } => {
                let mut out = offset.clone();
                for b in basis {
                    if rng.gen::<bool>() {
                        out.iter_mut().zip(b).for_each(|(x, y)| *x ^= *y);
                    }
                }
                out
            }
        }
    }
}

/// Minimal source min-entropy `t ≥ n − ω + 2·lg(1/ε)`.
pub fn min_entropy_bound(n: usize, omega: f64, eps_log2: f64) -> f64 {
    n as f64 - omega + 2.0 * eps_log2
}

/// A scripted adversary for the single-challenge game.
pub trait Priv1Adversary<S: GroupSuite> {
    /// Step 0: `id†`.
    fn choose_target(&mut self, params: &HfParams<S>) -> HierId<S>;

    /// Steps 2–3: key queries, then `id*`.
    fn query(
        &mut self,
        params: &HfParams<S>,
        mpk: &HfMasterPublicKey<S>,
        oracle: &mut KeyOracle<S>,
    ) -> Result<HierId<S>>;

    /// Step 5: the guess `b'` on the challenge ciphertext.
    fn guess(&mut self, challenge: &DetCiphertext<S>) -> bool;
}

#[derive(Debug, Clone)]
pub struct Priv1Transcript<S: GroupSuite> {
    pub id_dagger: HierId<S>,
    pub id_star: HierId<S>,
    pub queried: Vec<HierId<S>>,
    pub revealed: Vec<HierId<S>>,
    pub log: Vec<QueryEvent<S>>,
    pub challenge: DetCiphertext<S>,
    pub output: bool,
}

/// `Guess(M)`: runs the game with messages drawn from `source`.
pub fn priv1_experiment<S: GroupSuite, A: Priv1Adversary<S>, R: CryptoRngCore + ?Sized>(
    params: &HfParams<S>,
    source: &BlockSource,
    adversary: &mut A,
    rng: &mut R,
) -> Result<Priv1Transcript<S>> {
    if source.len() != params.n {
        return Err(Error::dim("message source", params.n, source.len()));
    }
    // step 0
    let id_dagger = adversary.choose_target(params);
    params.check_identity(&id_dagger)?;

    // step 1
    let aux = aux_injective(&params.suite, params.depth, params.width);
    let (mpk, msk) = hf_mkg(params, &aux, rng)?;
    let mut seed = [0u8; 32];
    rng.fill_bytes(&mut seed);
    let selective = params.mode == Mode::Selective;
    let mut oracle = KeyOracle::new(
        params,
        &mpk,
        msk,
        seed,
        selective.then(|| id_dagger.clone()),
        u64::MAX,
    );

    // steps 2–3
    let id_star = adversary.query(params, &mpk, &mut oracle)?;
    params.check_identity(&id_star)?;
    let (queried, revealed, log) = oracle.into_parts();
    if selective && id_star != id_dagger {
        return Err(Error::InvalidAdversary(
            "selective challenge differs from the announced identity".into(),
        ));
    }
    if !selective && revealed.iter().any(|id| id.is_prefix_of(&id_star)) {
        return Err(Error::InvalidAdversary(
            "a revealed identity is a prefix of the challenge".into(),
        ));
    }

    // step 4
    let m = source.sample(rng);
    let challenge = det_enc(params, &mpk, &m, &id_star)?;

    // step 5
    let output = adversary.guess(&challenge);
    Ok(Priv1Transcript {
        id_dagger,
        id_star,
        queried,
        revealed,
        log,
        challenge,
        output,
    })
}
