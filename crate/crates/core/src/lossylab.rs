//! The REAL/LOSSY experiment, the artificial-abort pre-output stage, the closed-form bounds
//! on the non-abort probability, and brute-force verifiers for all of them.
//!
//! Only the statistical conditions are measured here. Whether REAL and LOSSY are
//! computationally indistinguishable is an assumption about the groups and cannot be tested.
//!
//! Bounds are exact rationals. The estimator's sample count uses the constant
//! [`SAMPLE_CONSTANT`] in place of the hidden big-O factor.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::auxgen::{
    adaptive_level, aux_adaptive, aux_injective, aux_selective, enumerate_adaptive_draws,
    partition, sample_adaptive_draw,
};
use crate::error::{Error, Result};
use crate::groups::{CryptoRngCore, GroupSuite};
use crate::hibtdf::{
    bits_from_u64, hf_del, hf_eval, hf_kg, hf_mkg, AuxVector, HfMasterPublicKey,
    HfMasterSecretKey, HfParams, HfSecretKey, HierId, Mode,
};

/// Constant `c` in the sample count `⌈c·ζ⁻²·ln(ζ⁻¹)·η_low⁻¹·ln(η_low⁻¹)⌉`.
pub const SAMPLE_CONSTANT: u64 = 8;

fn rational(num: u64, den: &BigInt) -> BigRational {
    BigRational::new(BigInt::from(num), den.clone())
}

fn base_power(q: u64, width: usize, depth: usize) -> BigInt {
    BigInt::from(2u64 * q * width as u64).pow(depth as u32)
}

/// `η_low = 1 / (2·(2qμ)^d)`.
pub fn eta_lower_bound(q: u64, width: usize, depth: usize) -> BigRational {
    rational(1, &(BigInt::from(2) * base_power(q, width, depth)))
}

/// `δ = 13 / (32·(2qμ)^d)` against adaptive adversaries.
pub fn delta_bound(q: u64, width: usize, depth: usize) -> BigRational {
    rational(13, &(BigInt::from(32) * base_power(q, width, depth)))
}

/// `δ = 1` against selective adversaries.
pub fn delta_bound_selective() -> BigRational {
    BigRational::one()
}

pub fn delta_for_mode(mode: Mode, q: u64, width: usize, depth: usize) -> BigRational {
    match mode {
        Mode::Selective => delta_bound_selective(),
        Mode::Adaptive => delta_bound(q, width, depth),
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `⌈c·ζ⁻²·ln(ζ⁻¹)·η_low⁻¹·ln(η_low⁻¹)⌉`.
pub fn sample_count(zeta: f64, eta_low: &BigRational) -> Result<u64> {
    if !(zeta > 0.0 && zeta < 1.0) {
        return Err(Error::Parameter(format!("ζ = {zeta} is outside (0, 1)")));
    }
    let inv_eta = to_f64(&eta_low.recip());
    let count = SAMPLE_CONSTANT as f64 * zeta.powi(-2) * (1.0 / zeta).ln() * inv_eta * inv_eta.ln();
    Ok(count.ceil().max(1.0) as u64)
}

/// The event `E(IS, id*)`: every revealed identity is injective and the challenge is lossy.
pub fn event_holds<S: GroupSuite>(
    suite: &S,
    aux: &AuxVector<S>,
    revealed: &[HierId<S>],
    id_star: &HierId<S>,
) -> Result<bool> {
    if !partition(suite, aux, id_star)?.is_lossy() {
        return Ok(false);
    }
    for id in revealed {
        if partition(suite, aux, id)?.is_lossy() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbortEstimate {
    pub hits: u64,
    pub samples: u64,
    pub eta_low: BigRational,
    pub constant: u64,
}

impl AbortEstimate {
    /// `η'` as an exact fraction of samples.
    pub fn eta_prime(&self) -> BigRational {
        BigRational::new(BigInt::from(self.hits), BigInt::from(self.samples.max(1)))
    }

    /// An estimate with a forced value of `η'`, for exercising the pre-output stage.
    pub fn forced(eta_prime: &BigRational, eta_low: BigRational) -> AbortEstimate {
        // represent η' = a/b as a hits/samples pair
        let hits = eta_prime.numer().to_u64().expect("small numerator");
        let samples = eta_prime.denom().to_u64().expect("small denominator");
        AbortEstimate {
            hits,
            samples,
            eta_low,
            constant: SAMPLE_CONSTANT,
        }
    }
}

/// Samples `count` adaptive auxiliary vectors and counts how many satisfy `E(IS, id*)`.
/// Work is split into fixed chunks with their own seeds, so the result only depends on `rng`.
pub fn count_event_hits<S: GroupSuite, R: RngCore + ?Sized>(
    suite: &S,
    depth: usize,
    width: usize,
    q: u64,
    revealed: &[HierId<S>],
    id_star: &HierId<S>,
    count: u64,
    rng: &mut R,
) -> Result<u64> {
    const CHUNK: u64 = 4096;
    let chunks = count.div_ceil(CHUNK);
    let seeds: Vec<u64> = (0..chunks).map(|_| rng.next_u64()).collect();
    let per_chunk: Result<Vec<u64>> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, seed)| {
            let mut crng = ChaCha20Rng::seed_from_u64(*seed);
            let todo = CHUNK.min(count - i as u64 * CHUNK);
            let mut hits = 0;
            for _ in 0..todo {
                let aux = AuxVector::new(
                    (0..depth)
                        .map(|_| adaptive_level(suite, q, &sample_adaptive_draw(width, q, &mut crng)))
                        .collect(),
                );
                if event_holds(suite, &aux, revealed, id_star)? {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .collect();
    Ok(per_chunk?.into_iter().sum())
}

/// Estimates `η(IS, id*)` with the sample count prescribed for `ζ`.
pub fn estimate_eta<S: GroupSuite, R: RngCore + ?Sized>(
    suite: &S,
    depth: usize,
    width: usize,
    q: u64,
    revealed: &[HierId<S>],
    id_star: &HierId<S>,
    zeta: f64,
    rng: &mut R,
) -> Result<AbortEstimate> {
    let eta_low = eta_lower_bound(q, width, depth);
    let samples = sample_count(zeta, &eta_low)?;
    let hits = count_event_hits(suite, depth, width, q, revealed, id_star, samples, rng)?;
    Ok(AbortEstimate {
        hits,
        samples,
        eta_low,
        constant: SAMPLE_CONSTANT,
    })
}

/// `η(IS, id*)` by enumerating every draw of the adaptive sampler.
/// The space has `((2q)^μ·μ)^d` points, so this is for tiny parameters only.
pub fn exact_eta<S: GroupSuite>(
    suite: &S,
    depth: usize,
    width: usize,
    q: u64,
    revealed: &[HierId<S>],
    id_star: &HierId<S>,
) -> Result<BigRational> {
    let draws = enumerate_adaptive_draws(width, q);
    let levels: Vec<Vec<S::Scalar>> = draws.iter().map(|d| adaptive_level(suite, q, d)).collect();
    let total = (levels.len() as u64).pow(depth as u32);
    let mut hits = 0u64;
    for mut idx in 0..total {
        let aux = AuxVector::new(
            (0..depth)
                .map(|_| {
                    let l = levels[(idx % levels.len() as u64) as usize].clone();
                    idx /= levels.len() as u64;
                    l
                })
                .collect(),
        );
        if event_holds(suite, &aux, revealed, id_star)? {
            hits += 1;
        }
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Pre-output stage: `1` if `η' ≤ η_low`, else `1` with probability `η_low/η'`.
pub fn preoutput_stage<R: RngCore + ?Sized>(estimate: &AbortEstimate, rng: &mut R) -> bool {
    let eta_prime = estimate.eta_prime();
    if eta_prime <= estimate.eta_low {
        return true;
    }
    let keep = to_f64(&(&estimate.eta_low / &eta_prime));
    rng.gen::<f64>() < keep
}

/// The selective pre-output stage always outputs 1.
pub fn preoutput_stage_selective() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaReport {
    pub q: u64,
    pub width: usize,
    pub depth: usize,
    pub trials: u64,
    pub hits: u64,
    pub eta_low: BigRational,
    /// `sqrt(η_low(1 − η_low)/trials)`.
    pub sigma: f64,
    pub exact: Option<BigRational>,
    /// Set when the challenge extends a revealed identity, forcing `η = 0`.
    pub degenerate: bool,
}

impl EtaReport {
    pub fn empirical(&self) -> f64 {
        self.hits as f64 / self.trials.max(1) as f64
    }

    pub fn holds(&self) -> bool {
        self.empirical() >= to_f64(&self.eta_low) - 3.0 * self.sigma
    }
}

/// Largest enumeration attempted by [`verify_lemma2`] for the exact value.
const ENUMERATION_LIMIT: u64 = 1 << 20;

/// Checks `η(IS, id*) ≥ η_low` by sampling, and by enumeration when the space is small.
pub fn verify_lemma2<S: GroupSuite, R: RngCore + ?Sized>(
    suite: &S,
    q: u64,
    width: usize,
    depth: usize,
    revealed: &[HierId<S>],
    id_star: &HierId<S>,
    trials: u64,
    rng: &mut R,
) -> Result<EtaReport> {
    let eta_low = eta_lower_bound(q, width, depth);
    let degenerate = revealed.iter().any(|id| id.is_prefix_of(id_star));
    let hits = count_event_hits(suite, depth, width, q, revealed, id_star, trials, rng)?;
    let space = ((2 * q).checked_pow(width as u32))
        .and_then(|x| x.checked_mul(width as u64))
        .and_then(|x| x.checked_pow(depth as u32));
    let exact = match space {
        Some(sz) if sz <= ENUMERATION_LIMIT => {
            Some(exact_eta(suite, depth, width, q, revealed, id_star)?)
        }
        _ => None,
    };
    let p = to_f64(&eta_low);
    Ok(EtaReport {
        q,
        width,
        depth,
        trials,
        hits,
        sigma: (p * (1.0 - p) / trials.max(1) as f64).sqrt(),
        eta_low,
        exact,
        degenerate,
    })
}

/// Exhaustive image of `X ↦ Eval(id, X)` over `{0,1}^n`; `n ≤ 24`.
pub fn image_size<S: GroupSuite>(
    params: &HfParams<S>,
    mpk: &HfMasterPublicKey<S>,
    id: &HierId<S>,
) -> Result<usize> {
    if params.n > 24 {
        return Err(Error::Parameter(format!(
            "enumerating 2^{} inputs is not supported",
            params.n
        )));
    }
    let s = &params.suite;
    let outputs: Result<Vec<Vec<u8>>> = (0..1u64 << params.n)
        .into_par_iter()
        .map(|v| {
            let out = hf_eval(params, mpk, id, &bits_from_u64(v, params.n))?;
            Ok(out.elements().flat_map(|e| {
                let b = s.encode_g1(e);
                (b.len() as u32).to_be_bytes().into_iter().chain(b)
            }).collect())
        })
        .collect();
    Ok(outputs?.into_iter().collect::<HashSet<_>>().len())
}

/// `λ = n − log₂ |image|`.
pub fn lossiness(n: usize, image: usize) -> f64 {
    n as f64 - (image as f64).log2()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryEvent<S: GroupSuite> {
    CreateKey(HierId<S>),
    CreateDelegatedKey { parent: HierId<S>, child: HierId<S> },
    RevealKey { id: HierId<S>, revealed: bool },
}

/// Key oracle handed to the adversary in step 2. It holds `msk_β` and records QS and IS.
pub struct KeyOracle<S: GroupSuite> {
    params: HfParams<S>,
    mpk: HfMasterPublicKey<S>,
    msk: HfMasterSecretKey<S>,
    rng: ChaCha20Rng,
    target: Option<HierId<S>>,
    q: u64,
    keys: Vec<(HierId<S>, HfSecretKey<S>)>,
    revealed: Vec<HierId<S>>,
    log: Vec<QueryEvent<S>>,
}

impl<S: GroupSuite> KeyOracle<S> {
    /// `target` is `id†` for selective adversaries, whose reveals may not be its prefixes.
    pub(crate) fn new(
        params: &HfParams<S>,
        mpk: &HfMasterPublicKey<S>,
        msk: HfMasterSecretKey<S>,
        seed: [u8; 32],
        target: Option<HierId<S>>,
        q: u64,
    ) -> Self {
        KeyOracle {
            params: params.clone(),
            mpk: mpk.clone(),
            msk,
            rng: ChaCha20Rng::from_seed(seed),
            target,
            q,
            keys: Vec::new(),
            revealed: Vec::new(),
            log: Vec::new(),
        }
    }

    pub(crate) fn into_parts(self) -> (Vec<HierId<S>>, Vec<HierId<S>>, Vec<QueryEvent<S>>) {
        (
            self.keys.into_iter().map(|(id, _)| id).collect(),
            self.revealed,
            self.log,
        )
    }

    fn lookup(&self, id: &HierId<S>) -> Option<&HfSecretKey<S>> {
        self.keys.iter().find(|(k, _)| k == id).map(|(_, sk)| sk)
    }

    fn store(&mut self, id: HierId<S>, sk: HfSecretKey<S>) {
        match self.keys.iter_mut().find(|(k, _)| *k == id) {
            Some(slot) => slot.1 = sk,
            None => self.keys.push((id, sk)),
        }
    }

    /// Create-key: `QS ← QS ∪ {id}`.
    pub fn create_key(&mut self, id: &HierId<S>) -> Result<()> {
        let sk = hf_kg(&self.params, &self.msk, id, &mut self.rng)?;
        self.store(id.clone(), sk);
        self.log.push(QueryEvent::CreateKey(id.clone()));
        Ok(())
    }

    /// Create-delegated-key: `id` must already be in QS.
    pub fn create_delegated_key(&mut self, id: &HierId<S>, next: &[S::Scalar]) -> Result<()> {
        let sk = self
            .lookup(id)
            .cloned()
            .ok_or_else(|| Error::InvalidAdversary("delegation from an identity not in QS".into()))?;
        let child_sk = hf_del(&self.params, &self.mpk, id, &sk, next, &mut self.rng)?;
        let child = child_sk.id.clone();
        self.store(child.clone(), child_sk);
        self.log.push(QueryEvent::CreateDelegatedKey {
            parent: id.clone(),
            child,
        });
        Ok(())
    }

    /// Reveal-key: `None` (⊥) when `id ∉ QS`, otherwise the key, with `IS ← IS ∪ {id}`.
    pub fn reveal_key(&mut self, id: &HierId<S>) -> Result<Option<HfSecretKey<S>>> {
        if let Some(t) = &self.target {
            if id.is_prefix_of(t) {
                return Err(Error::InvalidAdversary(
                    "selective adversary revealed a prefix of its target".into(),
                ));
            }
        }
        let key = self.lookup(id).cloned();
        if key.is_some() && !self.revealed.contains(id) {
            if self.params.mode == Mode::Adaptive && self.revealed.len() as u64 >= self.q {
                return Err(Error::InvalidAdversary(format!(
                    "more than q = {} Reveal-key queries",
                    self.q
                )));
            }
            self.revealed.push(id.clone());
        }
        self.log.push(QueryEvent::RevealKey {
            id: id.clone(),
            revealed: key.is_some(),
        });
        Ok(key)
    }

    pub fn queried(&self) -> impl Iterator<Item = &HierId<S>> {
        self.keys.iter().map(|(id, _)| id)
    }

    pub fn revealed(&self) -> &[HierId<S>] {
        &self.revealed
    }
}

/// A deterministic scripted adversary.
pub trait Adversary<S: GroupSuite> {
    /// Step 0: the identity `id†` (the challenge identity in selective mode).
    fn choose_target(&mut self, params: &HfParams<S>) -> HierId<S>;

    /// Steps 2–3: queries against the oracle, then `(id*, d_A)`.
    fn run(
        &mut self,
        params: &HfParams<S>,
        mpk: &HfMasterPublicKey<S>,
        oracle: &mut KeyOracle<S>,
    ) -> Result<(HierId<S>, bool)>;
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Maximal number of Reveal-key queries (adaptive mode).
    pub q: u64,
    /// `ζ` passed to the pre-output stage.
    pub zeta: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentTranscript<S: GroupSuite> {
    pub beta: bool,
    pub mode: Mode,
    pub log: Vec<QueryEvent<S>>,
    pub queried: Vec<HierId<S>>,
    pub revealed: Vec<HierId<S>>,
    pub id_dagger: HierId<S>,
    pub id_star: HierId<S>,
    pub aux: AuxVector<S>,
    pub mpk_lossy: HfMasterPublicKey<S>,
    pub d_a: bool,
    pub d1: bool,
    pub d2: bool,
    pub d_not_abort: bool,
    pub d_exp: bool,
    pub estimate: Option<AbortEstimate>,
}

/// Runs REAL (`beta = false`) or LOSSY (`beta = true`).
pub fn run_experiment<S: GroupSuite, A: Adversary<S>, R: CryptoRngCore + ?Sized>(
    beta: bool,
    adversary: &mut A,
    params: &HfParams<S>,
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<ExperimentTranscript<S>> {
    let s = &params.suite;
    // step 0
    let id_dagger = adversary.choose_target(params);
    params.check_identity(&id_dagger)?;

    // step 1
    let aux = match params.mode {
        Mode::Selective => aux_selective(s, &id_dagger, params.depth, params.width)?,
        Mode::Adaptive => aux_adaptive(s, params.depth, params.width, config.q, rng)?,
    };
    let (mpk0, msk0) = hf_mkg(params, &aux_injective(s, params.depth, params.width), rng)?;
    let (mpk1, msk1) = hf_mkg(params, &aux, rng)?;
    let (mpk, msk) = if beta { (mpk1.clone(), msk1) } else { (mpk0, msk0) };
    let mut seed = [0u8; 32];
    rng.fill_bytes(&mut seed);
    let mut oracle = KeyOracle::new(
        params,
        &mpk,
        msk,
        seed,
        (params.mode == Mode::Selective).then(|| id_dagger.clone()),
        config.q,
    );

    // steps 2–3
    let (id_star, d_a) = adversary.run(params, &mpk, &mut oracle)?;
    params.check_identity(&id_star)?;
    let (queried, revealed, log) = oracle.into_parts();
    match params.mode {
        Mode::Selective if id_star != id_dagger => {
            return Err(Error::InvalidAdversary(
                "selective challenge differs from the announced identity".into(),
            ));
        }
        Mode::Adaptive if revealed.iter().any(|id| id.is_prefix_of(&id_star)) => {
            return Err(Error::InvalidAdversary(
                "a revealed identity is a prefix of the challenge".into(),
            ));
        }
        _ => {}
    }
    let d1 = event_holds(s, &aux, &revealed, &id_star)?;

    // step 4
    let (d2, estimate) = match params.mode {
        Mode::Selective => (preoutput_stage_selective(), None),
        Mode::Adaptive => {
            let est = estimate_eta(
                s,
                params.depth,
                params.width,
                config.q,
                &revealed,
                &id_star,
                config.zeta,
                rng,
            )?;
            (preoutput_stage(&est, rng), Some(est))
        }
    };

    // step 5
    let d_not_abort = d1 && d2;
    Ok(ExperimentTranscript {
        beta,
        mode: params.mode,
        log,
        queried,
        revealed,
        id_dagger,
        id_star,
        aux,
        mpk_lossy: mpk1,
        d_a,
        d1,
        d2,
        d_not_abort,
        d_exp: d_a && d_not_abort,
        estimate,
    })
}
