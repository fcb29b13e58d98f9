//! Hierarchical inner-product predicate encryption over prime-order asymmetric pairings.
//!
//! A key for predicate vectors `(X_1, …, X_ℓ)` opens a ciphertext for attribute vectors
//! `(Y_1, …, Y_κ)` iff `ℓ ≤ κ` and `⟨X_i, Y_i⟩ = 0` for every `i ≤ ℓ`. Keys carry a
//! delegation component that lets their holder derive keys for any one-level extension of
//! the predicate.
//!
//! Decryption evaluates `ℓ + 2` pairings regardless of the vector width `μ`: the ciphertext
//! components of each level are first folded into a single element with the predicate
//! vector, then paired once.
//!
//! The predicate-only variant drops the payload (`C₀` and `ĝ^α`); decryption becomes a test
//! of whether the pairing product equals `1_{G_T}`. The trapdoor function in
//! [`crate::hibtdf`] is built from n parallel predicate-only instances.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::groups::{CryptoRngCore, GroupSuite};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Full,
    PredicateOnly,
}

/// Hierarchy depth `d` and per-level vector width `μ` over a group suite.
#[derive(Debug, Clone)]
pub struct HpeParams<S: GroupSuite> {
    pub suite: S,
    pub depth: usize,
    pub width: usize,
}

impl<S: GroupSuite> HpeParams<S> {
    pub fn new(suite: S, depth: usize, width: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Parameter("hierarchy depth must be at least 1".into()));
        }
        if width == 0 {
            return Err(Error::Parameter("vector width must be at least 1".into()));
        }
        Ok(HpeParams {
            suite,
            depth,
            width,
        })
    }
}

/// `(v, w, e(g, v̂)^α, {h_{i1,i2}})`; `h[i1][i2]` holds level `i1 + 1`, slot `i2 ∈ [0, μ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterPublicKey<S: GroupSuite> {
    pub v: S::G1,
    pub w: S::G1,
    pub payload_base: Option<S::Gt>,
    pub h: Vec<Vec<S::G1>>,
}

impl<S: GroupSuite> MasterPublicKey<S> {
    pub fn variant(&self) -> Variant {
        if self.payload_base.is_some() {
            Variant::Full
        } else {
            Variant::PredicateOnly
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterSecretKey<S: GroupSuite> {
    pub g_hat: S::G2,
    pub g_hat_alpha: Option<S::G2>,
    pub v_hat: S::G2,
    pub w_hat: S::G2,
    pub h_hat: Vec<Vec<S::G2>>,
}

/// `SK_D = (D, D_w, {D_{i1}})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecryptionKey<S: GroupSuite> {
    pub d: S::G2,
    pub d_w: S::G2,
    pub d_levels: Vec<S::G2>,
}

/// Delegation material for one deeper level `j`: `K_{j,k}`, `L_j`, `L_{j,k,i1}`, `L_{w,j,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelegationLevel<S: GroupSuite> {
    /// `K_{j,k}` for `k ∈ [1, μ]`.
    pub k: Vec<S::G2>,
    /// `L_j`.
    pub l: S::G2,
    /// `L_{j,k,i1}` indexed `[k][i1]`, `i1 ∈ [1, ℓ]`.
    pub l_levels: Vec<Vec<S::G2>>,
    /// `L_{w,j,k}`.
    pub l_w: Vec<S::G2>,
}

/// The group elements of a key, without the predicate they were issued for.
/// `delegation[t]` serves level `ℓ + 1 + t`, so it is empty at `ℓ = d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyComponents<S: GroupSuite> {
    pub decryption: DecryptionKey<S>,
    pub delegation: Vec<DelegationLevel<S>>,
}

impl<S: GroupSuite> KeyComponents<S> {
    pub fn level(&self) -> usize {
        self.decryption.d_levels.len()
    }

    /// Checks that the index sets match level `ℓ`, depth `d` and width `μ` exactly.
    pub fn check_shape(&self, depth: usize, width: usize) -> Result<()> {
        let level = self.level();
        if level > depth {
            return Err(Error::Depth {
                requested: level,
                max: depth,
            });
        }
        if self.delegation.len() != depth - level {
            return Err(Error::Structure(format!(
                "level-{level} key at depth {depth} must have {} delegation levels, found {}",
                depth - level,
                self.delegation.len()
            )));
        }
        for dl in &self.delegation {
            if dl.k.len() != width || dl.l_w.len() != width || dl.l_levels.len() != width {
                return Err(Error::Structure(
                    "delegation component width differs from μ".into(),
                ));
            }
            if dl.l_levels.iter().any(|row| row.len() != level) {
                return Err(Error::Structure(
                    "delegation component row length differs from the key level".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey<S: GroupSuite> {
    pub predicate: Vec<Vec<S::Scalar>>,
    pub components: KeyComponents<S>,
}

impl<S: GroupSuite> SecretKey<S> {
    pub fn level(&self) -> usize {
        self.predicate.len()
    }
}

/// `C = (C₀, C_v, C_w, {C_{i1,i2}})`, `c[i1][i2]` for `i1 ∈ [1, κ]`, `i2 ∈ [1, μ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext<S: GroupSuite> {
    pub c0: Option<S::Gt>,
    pub c_v: S::G1,
    pub c_w: S::G1,
    pub c: Vec<Vec<S::G1>>,
}

impl<S: GroupSuite> Ciphertext<S> {
    pub fn depth(&self) -> usize {
        self.c.len()
    }
}

/// Messages `m ∈ [0, 2^k)` encoded as `e(g, ĝ)^m`, decoded by table lookup.
#[derive(Debug, Clone)]
pub struct PlaintextSpace<S: GroupSuite> {
    suite: S,
    bits: u32,
    base: S::Gt,
    table: HashMap<u64, Vec<u32>>,
}

impl<S: GroupSuite> PlaintextSpace<S> {
    pub const MAX_BITS: u32 = 16;

    pub fn new(suite: &S, bits: u32) -> Result<Self> {
        if bits > Self::MAX_BITS {
            return Err(Error::Parameter(format!(
                "plaintext space of 2^{bits} elements exceeds 2^{}",
                Self::MAX_BITS
            )));
        }
        let base = suite.pairing(&suite.g1_generator(), &suite.g2_generator());
        let mut table: HashMap<u64, Vec<u32>> = HashMap::new();
        let mut acc = suite.gt_identity();
        for m in 0..(1u32 << bits) {
            table.entry(fingerprint(suite, &acc)).or_default().push(m);
            acc = suite.gt_mul(&acc, &base);
        }
        Ok(PlaintextSpace {
            suite: suite.clone(),
            bits,
            base,
            table,
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn size(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn encode(&self, m: u32) -> Result<S::Gt> {
        if u64::from(m) >= self.size() {
            return Err(Error::Encoding(format!(
                "message {m} is outside the plaintext space [0, 2^{})",
                self.bits
            )));
        }
        Ok(self
            .suite
            .gt_exp(&self.base, &self.suite.scalar_from_u64(u64::from(m))))
    }

    /// `Some(m)` iff the element lies in the plaintext subspace.
    pub fn decode(&self, element: &S::Gt) -> Option<u32> {
        let candidates = self.table.get(&fingerprint(&self.suite, element))?;
        candidates.iter().copied().find(|&m| {
            self.suite
                .gt_exp(&self.base, &self.suite.scalar_from_u64(u64::from(m)))
                == *element
        })
    }
}

fn fingerprint<S: GroupSuite>(suite: &S, x: &S::Gt) -> u64 {
    let mut h = DefaultHasher::new();
    suite.encode_gt(x).hash(&mut h);
    h.finish()
}

/// Generates a master key pair. `α, α_v, α_w, α_{i1,i2}` are drawn from `Z_p^*`.
pub fn setup<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HpeParams<S>,
    variant: Variant,
    rng: &mut R,
) -> (MasterPublicKey<S>, MasterSecretKey<S>) {
    let s = &params.suite;
    let g = s.g1_generator();
    let g_hat = s.g2_generator();
    let alpha = s.random_nonzero_scalar(rng);
    let alpha_v = s.random_nonzero_scalar(rng);
    let alpha_w = s.random_nonzero_scalar(rng);
    let mut h = Vec::with_capacity(params.depth);
    let mut h_hat = Vec::with_capacity(params.depth);
    for _ in 0..params.depth {
        let mut row = Vec::with_capacity(params.width + 1);
        let mut row_hat = Vec::with_capacity(params.width + 1);
        for _ in 0..=params.width {
            let a = s.random_nonzero_scalar(rng);
            row.push(s.g1_exp(&g, &a));
            row_hat.push(s.g2_exp(&g_hat, &a));
        }
        h.push(row);
        h_hat.push(row_hat);
    }
    let v = s.g1_exp(&g, &alpha_v);
    let v_hat = s.g2_exp(&g_hat, &alpha_v);
    let (payload_base, g_hat_alpha) = match variant {
        Variant::Full => (
            Some(s.gt_exp(&s.pairing(&g, &v_hat), &alpha)),
            Some(s.g2_exp(&g_hat, &alpha)),
        ),
        Variant::PredicateOnly => (None, None),
    };
    let mpk = MasterPublicKey {
        v,
        w: s.g1_exp(&g, &alpha_w),
        payload_base,
        h,
    };
    let msk = MasterSecretKey {
        g_hat: g_hat.clone(),
        g_hat_alpha,
        v_hat,
        w_hat: s.g2_exp(&g_hat, &alpha_w),
        h_hat,
    };
    (mpk, msk)
}

fn check_vectors<S: GroupSuite>(
    vectors: &[Vec<S::Scalar>],
    width: usize,
    what: &'static str,
) -> Result<()> {
    for v in vectors {
        if v.len() != width {
            return Err(Error::dim(what, width, v.len()));
        }
    }
    Ok(())
}

/// `∏_{i2} ĥ_{i1,i2}^{x_{i1,i2}}` for each predicate level.
fn folded_bases<S: GroupSuite>(
    s: &S,
    h_hat: &[Vec<S::G2>],
    predicate: &[Vec<S::Scalar>],
) -> Vec<S::G2> {
    predicate
        .iter()
        .zip(h_hat)
        .map(|(x, row)| s.g2_multi_exp(row[1..].iter().zip(x)))
        .collect()
}

/// Key generation for a predicate of level `1 ≤ ℓ ≤ d`.
pub fn keygen<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HpeParams<S>,
    msk: &MasterSecretKey<S>,
    predicate: &[Vec<S::Scalar>],
    rng: &mut R,
) -> Result<SecretKey<S>> {
    if predicate.is_empty() {
        return Err(Error::Parameter(
            "keys need a predicate of at least one level".into(),
        ));
    }
    if predicate.len() > params.depth {
        return Err(Error::Depth {
            requested: predicate.len(),
            max: params.depth,
        });
    }
    check_vectors::<S>(predicate, params.width, "predicate vector")?;
    if msk.h_hat.len() != params.depth {
        return Err(Error::dim("master secret key levels", params.depth, msk.h_hat.len()));
    }
    let components = keygen_components(&params.suite, params.depth, msk, predicate, rng);
    Ok(SecretKey {
        predicate: predicate.to_vec(),
        components,
    })
}

/// Key generation without argument validation; callers have checked shapes.
pub(crate) fn keygen_components<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    s: &S,
    depth: usize,
    msk: &MasterSecretKey<S>,
    predicate: &[Vec<S::Scalar>],
    rng: &mut R,
) -> KeyComponents<S> {
    let level = predicate.len();
    let width = msk.h_hat[0].len() - 1;
    let folded = folded_bases(s, &msk.h_hat, predicate);

    let r_w = s.random_nonzero_scalar(rng);
    let r: Vec<S::Scalar> = (0..level).map(|_| s.random_nonzero_scalar(rng)).collect();
    let mut d = s.g2_mul(
        &s.g2_multi_exp(folded.iter().zip(&r)),
        &s.g2_exp(&msk.w_hat, &r_w),
    );
    if let Some(ga) = &msk.g_hat_alpha {
        d = s.g2_mul(ga, &d);
    }
    let decryption = DecryptionKey {
        d,
        d_w: s.g2_exp(&msk.v_hat, &r_w),
        d_levels: r.iter().map(|ri| s.g2_exp(&msk.v_hat, ri)).collect(),
    };

    let delegation = (level..depth)
        .map(|j| {
            let s_j = s.random_nonzero_scalar(rng);
            let mut k = Vec::with_capacity(width);
            let mut l_levels = Vec::with_capacity(width);
            let mut l_w = Vec::with_capacity(width);
            for kk in 0..width {
                let s_jk: Vec<S::Scalar> =
                    (0..level).map(|_| s.random_nonzero_scalar(rng)).collect();
                let s_wjk = s.random_nonzero_scalar(rng);
                let kjk = s.g2_mul(
                    &s.g2_mul(
                        &s.g2_multi_exp(folded.iter().zip(&s_jk)),
                        &s.g2_exp(&msk.h_hat[j][kk + 1], &s_j),
                    ),
                    &s.g2_exp(&msk.w_hat, &s_wjk),
                );
                k.push(kjk);
                l_levels.push(s_jk.iter().map(|e| s.g2_exp(&msk.v_hat, e)).collect());
                l_w.push(s.g2_exp(&msk.v_hat, &s_wjk));
            }
            DelegationLevel {
                k,
                l: s.g2_exp(&msk.v_hat, &s_j),
                l_levels,
                l_w,
            }
        })
        .collect();

    KeyComponents {
        decryption,
        delegation,
    }
}

/// Derives a key for `(X_1, …, X_ℓ, X_{ℓ+1})` from a key for `(X_1, …, X_ℓ)`.
pub fn delegate<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HpeParams<S>,
    _mpk: &MasterPublicKey<S>,
    sk: &SecretKey<S>,
    next: &[S::Scalar],
    rng: &mut R,
) -> Result<SecretKey<S>> {
    if sk.level() >= params.depth {
        return Err(Error::DepthExhausted(params.depth));
    }
    if next.len() != params.width {
        return Err(Error::dim("predicate vector", params.width, next.len()));
    }
    if sk.components.level() != sk.level() {
        return Err(Error::Structure(
            "key components do not match the predicate level".into(),
        ));
    }
    sk.components.check_shape(params.depth, params.width)?;
    let components = delegate_components(&params.suite, &sk.components, next, rng);
    let mut predicate = sk.predicate.clone();
    predicate.push(next.to_vec());
    Ok(SecretKey {
        predicate,
        components,
    })
}

/// The five delegation steps on raw key components; shapes are assumed valid and
/// `components.level() < d`.
pub(crate) fn delegate_components<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    s: &S,
    components: &KeyComponents<S>,
    next: &[S::Scalar],
    rng: &mut R,
) -> KeyComponents<S> {
    let level = components.level();
    let width = next.len();

    // 1. SK_DL^z
    let z = s.random_nonzero_scalar(rng);
    let hat: Vec<DelegationLevel<S>> = components
        .delegation
        .iter()
        .map(|dl| DelegationLevel {
            k: dl.k.iter().map(|x| s.g2_exp(x, &z)).collect(),
            l: s.g2_exp(&dl.l, &z),
            l_levels: dl
                .l_levels
                .iter()
                .map(|row| row.iter().map(|x| s.g2_exp(x, &z)).collect())
                .collect(),
            l_w: dl.l_w.iter().map(|x| s.g2_exp(x, &z)).collect(),
        })
        .collect();

    // 2. partial decryption key from the level-(ℓ+1) slice
    let first = &hat[0];
    let k_next = s.g2_multi_exp(first.k.iter().zip(next));
    // partial[i1] = L_{ℓ+1,i1} for i1 ≤ ℓ, then L_{ℓ+1,ℓ+1} = L̂_{ℓ+1}
    let mut partial: Vec<S::G2> = (0..level)
        .map(|i1| s.g2_multi_exp(first.l_levels.iter().map(|row| &row[i1]).zip(next)))
        .collect();
    partial.push(first.l.clone());
    let l_w_next = s.g2_multi_exp(first.l_w.iter().zip(next));

    // 3. per-(j,k) re-randomized copies of the partial key
    struct Rerandomized<G> {
        k: G,
        l_w: G,
        l_levels: Vec<G>,
    }
    let rerand: Vec<Vec<Rerandomized<S::G2>>> = hat[1..]
        .iter()
        .map(|_| {
            (0..width)
                .map(|_| {
                    let tau = s.random_nonzero_scalar(rng);
                    Rerandomized {
                        k: s.g2_exp(&k_next, &tau),
                        l_w: s.g2_exp(&l_w_next, &tau),
                        l_levels: partial.iter().map(|x| s.g2_exp(x, &tau)).collect(),
                    }
                })
                .collect()
        })
        .collect();

    // 4. decryption component
    let dec = &components.decryption;
    let mut d_levels: Vec<S::G2> = dec
        .d_levels
        .iter()
        .zip(&partial)
        .map(|(d_i, l_i)| s.g2_mul(d_i, l_i))
        .collect();
    d_levels.push(partial[level].clone());
    let decryption = DecryptionKey {
        d: s.g2_mul(&dec.d, &k_next),
        d_w: s.g2_mul(&dec.d_w, &l_w_next),
        d_levels,
    };

    // 5. delegation component for levels ℓ+2..d; L̂_{j,k,ℓ+1} is the identity
    let identity = s.g2_identity();
    let delegation = hat[1..]
        .iter()
        .zip(&rerand)
        .map(|(dl, rr)| DelegationLevel {
            k: dl.k.iter().zip(rr).map(|(x, r)| s.g2_mul(x, &r.k)).collect(),
            l: dl.l.clone(),
            l_levels: dl
                .l_levels
                .iter()
                .zip(rr)
                .map(|(row, r)| {
                    row.iter()
                        .chain(std::iter::once(&identity))
                        .zip(&r.l_levels)
                        .map(|(x, y)| s.g2_mul(x, y))
                        .collect()
                })
                .collect(),
            l_w: dl.l_w.iter().zip(rr).map(|(x, r)| s.g2_mul(x, &r.l_w)).collect(),
        })
        .collect();

    KeyComponents {
        decryption,
        delegation,
    }
}

fn encrypt_inner<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HpeParams<S>,
    mpk: &MasterPublicKey<S>,
    attributes: &[Vec<S::Scalar>],
    message: Option<&S::Gt>,
    rng: &mut R,
) -> Result<Ciphertext<S>> {
    if attributes.is_empty() || attributes.len() > params.depth {
        return Err(Error::Depth {
            requested: attributes.len(),
            max: params.depth,
        });
    }
    check_vectors::<S>(attributes, params.width, "attribute vector")?;
    let s = &params.suite;
    let exp = s.random_nonzero_scalar(rng);
    let c = attributes
        .iter()
        .zip(&mpk.h)
        .map(|(y, h)| {
            y.iter()
                .zip(&h[1..])
                .map(|(y_i, h_i)| s.g1_exp(&s.g1_mul(&s.g1_exp(&h[0], y_i), h_i), &exp))
                .collect()
        })
        .collect();
    let c0 = match (message, &mpk.payload_base) {
        (Some(m), Some(base)) => Some(s.gt_mul(m, &s.gt_exp(base, &exp))),
        (Some(_), None) => return Err(Error::Variant("full")),
        (None, _) => None,
    };
    Ok(Ciphertext {
        c0,
        c_v: s.g1_exp(&mpk.v, &exp),
        c_w: s.g1_exp(&mpk.w, &exp),
        c,
    })
}

/// Full-variant encryption of message `m ∈ [0, 2^k)` under attributes `(Y_1, …, Y_κ)`.
pub fn encrypt<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HpeParams<S>,
    mpk: &MasterPublicKey<S>,
    attributes: &[Vec<S::Scalar>],
    space: &PlaintextSpace<S>,
    m: u32,
    rng: &mut R,
) -> Result<Ciphertext<S>> {
    if mpk.payload_base.is_none() {
        return Err(Error::Variant("full"));
    }
    let element = space.encode(m)?;
    encrypt_inner(params, mpk, attributes, Some(&element), rng)
}

/// Full-variant encryption of an arbitrary `G_T` element.
pub fn encrypt_element<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HpeParams<S>,
    mpk: &MasterPublicKey<S>,
    attributes: &[Vec<S::Scalar>],
    message: &S::Gt,
    rng: &mut R,
) -> Result<Ciphertext<S>> {
    encrypt_inner(params, mpk, attributes, Some(message), rng)
}

/// Predicate-only encryption: no `C₀` component.
pub fn encrypt_predicate<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HpeParams<S>,
    mpk: &MasterPublicKey<S>,
    attributes: &[Vec<S::Scalar>],
    rng: &mut R,
) -> Result<Ciphertext<S>> {
    encrypt_inner(params, mpk, attributes, None, rng)
}

/// `e(C_v, D)^{-1} · e(C_w, D_w) · ∏ e(C_{i1}, D_{i1})` on already folded level components.
/// Evaluates exactly `ℓ + 2` pairings.
pub fn pairing_product<S: GroupSuite>(
    s: &S,
    c_v: &S::G1,
    c_w: &S::G1,
    folded: &[S::G1],
    key: &DecryptionKey<S>,
) -> S::Gt {
    let head = s.gt_mul(&s.gt_inv(&s.pairing(c_v, &key.d)), &s.pairing(c_w, &key.d_w));
    folded
        .iter()
        .zip(&key.d_levels)
        .fold(head, |acc, (c, d)| s.gt_mul(&acc, &s.pairing(c, d)))
}

fn check_key_and_ciphertext<S: GroupSuite>(
    params: &HpeParams<S>,
    sk: &SecretKey<S>,
    ct: &Ciphertext<S>,
) -> Result<()> {
    check_vectors::<S>(&sk.predicate, params.width, "predicate vector")?;
    if sk.components.level() != sk.level() {
        return Err(Error::Structure(
            "key components do not match the predicate level".into(),
        ));
    }
    if ct.depth() > params.depth {
        return Err(Error::Depth {
            requested: ct.depth(),
            max: params.depth,
        });
    }
    for row in &ct.c {
        if row.len() != params.width {
            return Err(Error::dim("ciphertext level", params.width, row.len()));
        }
    }
    Ok(())
}

/// `C_{i1} = ∏_{i2} C_{i1,i2}^{x_{i1,i2}}` for each key level.
fn fold_ciphertext<S: GroupSuite>(s: &S, sk: &SecretKey<S>, ct: &Ciphertext<S>) -> Vec<S::G1> {
    sk.predicate
        .iter()
        .zip(&ct.c)
        .map(|(x, row)| s.g1_multi_exp(row.iter().zip(x)))
        .collect()
}

/// Returns `Ok(Some(m))` when the key's predicate holds, `Ok(None)` (⊥) otherwise.
pub fn decrypt<S: GroupSuite>(
    params: &HpeParams<S>,
    _mpk: &MasterPublicKey<S>,
    sk: &SecretKey<S>,
    ct: &Ciphertext<S>,
    space: &PlaintextSpace<S>,
) -> Result<Option<u32>> {
    check_key_and_ciphertext(params, sk, ct)?;
    let c0 = ct.c0.as_ref().ok_or(Error::Variant("full"))?;
    if sk.level() > ct.depth() {
        return Ok(None);
    }
    let s = &params.suite;
    let folded = fold_ciphertext(s, sk, ct);
    let masked = pairing_product(s, &ct.c_v, &ct.c_w, &folded, &sk.components.decryption);
    Ok(space.decode(&s.gt_mul(c0, &masked)))
}

/// Predicate-only decryption: true iff the pairing product is `1_{G_T}`.
pub fn predicate_test<S: GroupSuite>(
    params: &HpeParams<S>,
    _mpk: &MasterPublicKey<S>,
    sk: &SecretKey<S>,
    ct: &Ciphertext<S>,
) -> Result<bool> {
    check_key_and_ciphertext(params, sk, ct)?;
    if sk.level() == 0 {
        // the empty predicate holds for every attribute list
        return Ok(true);
    }
    if sk.level() > ct.depth() {
        return Ok(false);
    }
    let s = &params.suite;
    let folded = fold_ciphertext(s, sk, ct);
    let product = pairing_product(s, &ct.c_v, &ct.c_w, &folded, &sk.components.decryption);
    Ok(s.gt_is_identity(&product))
}

/// `f_{(X_1..X_ℓ)}(Y_1..Y_κ)`: `ℓ ≤ κ` and every level's inner product vanishes.
pub fn predicate_holds<S: GroupSuite>(
    s: &S,
    predicate: &[Vec<S::Scalar>],
    attributes: &[Vec<S::Scalar>],
) -> bool {
    predicate.len() <= attributes.len()
        && predicate
            .iter()
            .zip(attributes)
            .all(|(x, y)| s.scalar_is_zero(&s.inner_product(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{TransparentSuite, Zp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(11)
    }

    fn zp(v: &[u64]) -> Vec<Zp> {
        v.iter().map(|&x| Zp(x)).collect()
    }

    #[test]
    fn setup_index_sets() {
        let params = HpeParams::new(TransparentSuite::new(11).unwrap(), 1, 2).unwrap();
        let (mpk, msk) = setup(&params, Variant::Full, &mut rng());
        assert_eq!(mpk.h.len(), 1);
        assert_eq!(mpk.h[0].len(), 3);
        assert!(mpk.payload_base.is_some() && msk.g_hat_alpha.is_some());

        let params = HpeParams::new(TransparentSuite::new(11).unwrap(), 3, 4).unwrap();
        let (mpk, msk) = setup(&params, Variant::PredicateOnly, &mut rng());
        assert!(mpk.payload_base.is_none());
        assert!(msk.g_hat_alpha.is_none());
        assert_eq!(mpk.variant(), Variant::PredicateOnly);
    }

    #[test]
    fn setup_dlog_consistency_at_p11() {
        let s = TransparentSuite::new(11).unwrap();
        let params = HpeParams::new(s.clone(), 2, 2).unwrap();
        let (mpk, msk) = setup(&params, Variant::Full, &mut rng());
        let mut checked = 0;
        for (row, row_hat) in mpk.h.iter().zip(&msk.h_hat) {
            for (h, hh) in row.iter().zip(row_hat) {
                assert_eq!(s.dlog_g1(h), s.dlog_g2(hh));
                assert_ne!(s.dlog_g1(h), 0);
                checked += 1;
            }
        }
        assert_eq!(checked, 6);
        assert_eq!(s.dlog_g1(&mpk.v), s.dlog_g2(&msk.v_hat));
        assert_eq!(s.dlog_g1(&mpk.w), s.dlog_g2(&msk.w_hat));
        // e(g, v̂)^α = α·α_v in the exponent
        let alpha = s.dlog_g2(msk.g_hat_alpha.as_ref().unwrap());
        let expected = alpha * s.dlog_g2(&msk.v_hat) % 11;
        assert_eq!(s.dlog_gt(mpk.payload_base.as_ref().unwrap()), expected);
    }

    #[test]
    fn keygen_shapes() {
        let params = HpeParams::new(TransparentSuite::new(1009).unwrap(), 2, 2).unwrap();
        let (_, msk) = setup(&params, Variant::Full, &mut rng());
        let sk = keygen(&params, &msk, &[zp(&[1, 2])], &mut rng()).unwrap();
        let dl = &sk.components.delegation;
        assert_eq!(dl.len(), 1);
        assert_eq!(dl[0].k.len(), 2);
        assert_eq!(dl[0].l_w.len(), 2);
        assert_eq!(dl[0].l_levels, vec![vec![dl[0].l_levels[0][0]], vec![dl[0].l_levels[1][0]]]);
        sk.components.check_shape(2, 2).unwrap();

        let full = keygen(&params, &msk, &[zp(&[1, 2]), zp(&[3, 4])], &mut rng()).unwrap();
        assert!(full.components.delegation.is_empty());
        assert_eq!(full.components.decryption.d_levels.len(), 2);
    }

    #[test]
    fn keygen_rejects_bad_levels() {
        let params = HpeParams::new(TransparentSuite::new(1009).unwrap(), 1, 2).unwrap();
        let (_, msk) = setup(&params, Variant::Full, &mut rng());
        assert!(matches!(
            keygen(&params, &msk, &[zp(&[1, 2]), zp(&[1, 2])], &mut rng()),
            Err(Error::Depth { requested: 2, max: 1 })
        ));
        assert!(matches!(keygen(&params, &msk, &[], &mut rng()), Err(Error::Parameter(_))));
        assert!(matches!(
            keygen(&params, &msk, &[zp(&[1])], &mut rng()),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn delegation_exhausts_at_depth() {
        let params = HpeParams::new(TransparentSuite::new(1009).unwrap(), 2, 2).unwrap();
        let (mpk, msk) = setup(&params, Variant::Full, &mut rng());
        let sk = keygen(&params, &msk, &[zp(&[1, 2])], &mut rng()).unwrap();
        let child = delegate(&params, &mpk, &sk, &zp(&[5, 6]), &mut rng()).unwrap();
        assert_eq!(child.level(), 2);
        assert!(child.components.delegation.is_empty());
        assert!(matches!(
            delegate(&params, &mpk, &child, &zp(&[1, 1]), &mut rng()),
            Err(Error::DepthExhausted(2))
        ));
    }

    #[test]
    fn ciphertext_shape_and_variants() {
        let params = HpeParams::new(TransparentSuite::new(1009).unwrap(), 2, 2).unwrap();
        let (mpk, _) = setup(&params, Variant::PredicateOnly, &mut rng());
        let ct = encrypt_predicate(&params, &mpk, &[zp(&[3, 4])], &mut rng()).unwrap();
        assert!(ct.c0.is_none());
        assert_eq!(ct.c.len(), 1);
        assert_eq!(ct.c[0].len(), 2);
        let space = PlaintextSpace::new(&params.suite, 4).unwrap();
        assert!(matches!(
            encrypt(&params, &mpk, &[zp(&[3, 4])], &space, 1, &mut rng()),
            Err(Error::Variant("full"))
        ));
    }

    #[test]
    fn plaintext_space_membership() {
        let s = TransparentSuite::new(1_000_003).unwrap();
        let space = PlaintextSpace::new(&s, 8).unwrap();
        for m in [0u32, 1, 17, 255] {
            assert_eq!(space.decode(&space.encode(m).unwrap()), Some(m));
        }
        assert!(matches!(space.encode(256), Err(Error::Encoding(_))));
        assert_eq!(space.decode(&s.gt_from_dlog(256)), None);
        assert!(PlaintextSpace::new(&s, 17).is_err());
    }

    #[test]
    fn decrypt_beyond_ciphertext_depth_is_bottom() {
        let params = HpeParams::new(TransparentSuite::new(1009).unwrap(), 2, 2).unwrap();
        let (mpk, msk) = setup(&params, Variant::Full, &mut rng());
        let space = PlaintextSpace::new(&params.suite, 4).unwrap();
        let sk = keygen(&params, &msk, &[zp(&[1, 0]), zp(&[0, 1])], &mut rng()).unwrap();
        let ct = encrypt(&params, &mpk, &[zp(&[0, 1])], &space, 3, &mut rng()).unwrap();
        assert_eq!(decrypt(&params, &mpk, &sk, &ct, &space).unwrap(), None);
    }

    #[test]
    fn empty_key_passes_predicate_test() {
        let params = HpeParams::new(TransparentSuite::new(1009).unwrap(), 2, 2).unwrap();
        let (mpk, _) = setup(&params, Variant::PredicateOnly, &mut rng());
        let s = &params.suite;
        let empty = SecretKey {
            predicate: vec![],
            components: KeyComponents {
                decryption: DecryptionKey {
                    d: s.g2_identity(),
                    d_w: s.g2_identity(),
                    d_levels: vec![],
                },
                delegation: vec![],
            },
        };
        let ct = encrypt_predicate(&params, &mpk, &[zp(&[3, 4])], &mut rng()).unwrap();
        assert!(predicate_test(&params, &mpk, &empty, &ct).unwrap());
    }

    #[test]
    fn arity_mismatch_is_structural() {
        let params = HpeParams::new(TransparentSuite::new(1009).unwrap(), 2, 2).unwrap();
        let (mpk, msk) = setup(&params, Variant::PredicateOnly, &mut rng());
        let sk = keygen(&params, &msk, &[zp(&[1, 0])], &mut rng()).unwrap();
        let mut ct = encrypt_predicate(&params, &mpk, &[zp(&[0, 1])], &mut rng()).unwrap();
        ct.c[0].pop();
        assert!(matches!(
            predicate_test(&params, &mpk, &sk, &ct),
            Err(Error::Dimension { .. })
        ));
    }
}
