//! Hierarchical identity-based trapdoor function over an `n × n` matrix of predicate-only
//! HPE ciphertexts.
//!
//! Each input coordinate `l₁ ∈ [1, n]` owns an independent predicate-only HPE key pair
//! (`w[l₁]`, `h[·,·,l₁]`, sharing `v`). Row `l₂` of the matrix is encrypted under a single
//! exponent `s[l₂]`, and only the diagonal cells carry the auxiliary vector `y`. Evaluating
//! on `X ∈ {0,1}^n` multiplies the rows selected by `X` and folds each level with the
//! identity; coordinate `l₁` of the result then encrypts `x_{l₁}·⟨y_{i₁}, id_{i₁}⟩` in the
//! exponent, which a key for `id` tests against `1_{G_T}`.
//!
//! With `y` from [`crate::auxgen::aux_injective`] every identity is injective. When
//! `⟨y_{i₁}, id_{i₁}⟩ = 0` on every level the output depends on `X` only through `⟨s, X⟩`,
//! so the image has at most `p` elements.
//!
//! Inversion of a lossy identity returns whatever bits the pairing test produces; it never
//! errors. A single bit can also fail on an injective identity when the key randomness
//! annihilates the perturbation exponent, which happens with probability at most `1/p`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{CryptoRngCore, GroupSuite, TransparentSuite};
use crate::hpe::{self, HpeParams, KeyComponents};

/// Identity alphabet. Both require the leading coordinate of every level to be 1;
/// adaptive mode also restricts the remaining coordinates to `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Selective,
    Adaptive,
}

impl Mode {
    pub fn as_u8(self) -> u8 {
        match self {
            Mode::Selective => 0,
            Mode::Adaptive => 1,
        }
    }

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(Mode::Selective),
            1 => Some(Mode::Adaptive),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Selective => "selective",
            Mode::Adaptive => "adaptive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfParams<S: GroupSuite> {
    pub suite: S,
    pub depth: usize,
    pub n: usize,
    pub width: usize,
    pub mode: Mode,
}

pub fn hf_setup<S: GroupSuite>(
    suite: S,
    depth: usize,
    n: usize,
    width: usize,
    mode: Mode,
) -> Result<HfParams<S>> {
    if depth == 0 {
        return Err(Error::Parameter("hierarchy depth must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::Parameter("input length must be at least 1".into()));
    }
    if width < 2 {
        return Err(Error::Parameter(
            "identity levels need μ ≥ 2: a leading 1 plus at least one payload coordinate".into(),
        ));
    }
    Ok(HfParams {
        suite,
        depth,
        n,
        width,
        mode,
    })
}

impl<S: GroupSuite> HfParams<S> {
    pub fn hpe(&self) -> HpeParams<S> {
        HpeParams {
            suite: self.suite.clone(),
            depth: self.depth,
            width: self.width,
        }
    }

    /// `log₂ |InpSp|`.
    pub fn input_bits(&self) -> usize {
        self.n
    }

    /// Dimension `d·μ` of the auxiliary-input space.
    pub fn aux_dimension(&self) -> usize {
        self.depth * self.width
    }

    /// Lossiness `ω = n − log₂ p` guaranteed on lossy identities.
    pub fn omega(&self) -> f64 {
        self.n as f64 - self.suite.log2_order()
    }

    pub fn check_level(&self, level: &[S::Scalar]) -> Result<()> {
        let s = &self.suite;
        if level.len() != self.width {
            return Err(Error::dim("identity level", self.width, level.len()));
        }
        if level[0] != s.scalar_one() {
            return Err(Error::Identity(
                "the first coordinate of every level must be 1".into(),
            ));
        }
        if self.mode == Mode::Adaptive
            && level[1..]
                .iter()
                .any(|x| *x != s.scalar_zero() && *x != s.scalar_one())
        {
            return Err(Error::Identity(
                "adaptive mode only admits binary identity coordinates".into(),
            ));
        }
        Ok(())
    }

    pub fn check_identity(&self, id: &HierId<S>) -> Result<()> {
        if id.level() == 0 {
            return Err(Error::Identity("identities have at least one level".into()));
        }
        if id.level() > self.depth {
            return Err(Error::Depth {
                requested: id.level(),
                max: self.depth,
            });
        }
        id.levels.iter().try_for_each(|l| self.check_level(l))
    }
}

/// `(id₁, …, id_ℓ)` with each `id_{i₁} ∈ Z_p^μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierId<S: GroupSuite> {
    pub levels: Vec<Vec<S::Scalar>>,
}

impl<S: GroupSuite> HierId<S> {
    pub fn new(levels: Vec<Vec<S::Scalar>>) -> Self {
        HierId { levels }
    }

    /// Builds an identity from small integer coordinates.
    pub fn from_u64(suite: &S, levels: &[Vec<u64>]) -> Self {
        HierId {
            levels: levels
                .iter()
                .map(|l| l.iter().map(|&x| suite.scalar_from_u64(x)).collect())
                .collect(),
        }
    }

    pub fn level(&self) -> usize {
        self.levels.len()
    }

    /// `self ≤ other`: every level of `self` equals the corresponding level of `other`.
    pub fn is_prefix_of(&self, other: &HierId<S>) -> bool {
        self.level() <= other.level() && self.levels.iter().zip(&other.levels).all(|(a, b)| a == b)
    }

    pub fn prefix(&self, len: usize) -> HierId<S> {
        HierId {
            levels: self.levels[..len.min(self.level())].to_vec(),
        }
    }

    pub fn child(&self, level: Vec<S::Scalar>) -> HierId<S> {
        let mut levels = self.levels.clone();
        levels.push(level);
        HierId { levels }
    }
}

/// `y = [y₁ | … | y_d]`, one `μ`-vector per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxVector<S: GroupSuite> {
    pub levels: Vec<Vec<S::Scalar>>,
}

impl<S: GroupSuite> AuxVector<S> {
    pub fn new(levels: Vec<Vec<S::Scalar>>) -> Self {
        AuxVector { levels }
    }

    pub fn check(&self, depth: usize, width: usize) -> Result<()> {
        let total: usize = self.levels.iter().map(Vec::len).sum();
        if self.levels.len() != depth || self.levels.iter().any(|l| l.len() != width) {
            return Err(Error::dim("auxiliary input", depth * width, total));
        }
        Ok(())
    }
}

/// `PP_core` plus the ciphertext matrix. Vectors are indexed from 0:
/// `h[l₁][i₁][i₂]`, `j[l₂]`, `c_w[l₂][l₁]`, `c[l₂][l₁][i₁][i₂ − 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfMasterPublicKey<S: GroupSuite> {
    pub v: S::G1,
    pub w: Vec<S::G1>,
    pub h: Vec<Vec<Vec<S::G1>>>,
    pub j: Vec<S::G1>,
    pub c_w: Vec<Vec<S::G1>>,
    pub c: Vec<Vec<Vec<Vec<S::G1>>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfMasterSecretKey<S: GroupSuite> {
    pub v_hat: S::G2,
    pub w_hat: Vec<S::G2>,
    pub h_hat: Vec<Vec<Vec<S::G2>>>,
}

impl<S: GroupSuite> HfMasterPublicKey<S> {
    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// The predicate-only HPE public key of coordinate `l₁`.
    pub fn coordinate(&self, l1: usize) -> hpe::MasterPublicKey<S> {
        hpe::MasterPublicKey {
            v: self.v.clone(),
            w: self.w[l1].clone(),
            payload_base: None,
            h: self.h[l1].clone(),
        }
    }

    pub fn check_shape(&self, params: &HfParams<S>) -> Result<()> {
        let n = params.n;
        let (d, mu) = (params.depth, params.width);
        let ok = self.w.len() == n
            && self.h.len() == n
            && self.h.iter().all(|hl| hl.len() == d && hl.iter().all(|r| r.len() == mu + 1))
            && self.j.len() == n
            && self.c_w.len() == n
            && self.c_w.iter().all(|r| r.len() == n)
            && self.c.len() == n
            && self.c.iter().all(|row| {
                row.len() == n
                    && row
                        .iter()
                        .all(|cell| cell.len() == d && cell.iter().all(|l| l.len() == mu))
            });
        if ok {
            Ok(())
        } else {
            Err(Error::Structure(format!(
                "master public key does not match n={n}, d={d}, μ={mu}"
            )))
        }
    }
}

impl<S: GroupSuite> HfMasterSecretKey<S> {
    /// The predicate-only HPE master secret key of coordinate `l₁`.
    pub fn coordinate(&self, suite: &S, l1: usize) -> hpe::MasterSecretKey<S> {
        hpe::MasterSecretKey {
            g_hat: suite.g2_generator(),
            g_hat_alpha: None,
            v_hat: self.v_hat.clone(),
            w_hat: self.w_hat[l1].clone(),
            h_hat: self.h_hat[l1].clone(),
        }
    }
}

impl HfMasterPublicKey<TransparentSuite> {
    /// Recovers the row exponents `s[l₂] = log J[l₂] / log v`.
    pub fn row_exponents(&self, suite: &TransparentSuite) -> Vec<u64> {
        let v_inv = suite
            .scalar_inv(&crate::groups::Zp(suite.dlog_g1(&self.v)))
            .expect("v is never the identity");
        self.j
            .iter()
            .map(|j| suite.scalar_mul(&crate::groups::Zp(suite.dlog_g1(j)), &v_inv).0)
            .collect()
    }
}

/// One predicate-only HPE key per input coordinate, all for the same identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfSecretKey<S: GroupSuite> {
    pub id: HierId<S>,
    pub coords: Vec<KeyComponents<S>>,
}

impl<S: GroupSuite> HfSecretKey<S> {
    pub fn level(&self) -> usize {
        self.id.level()
    }

    /// Coordinate `l₁` as a standalone HPE key.
    pub fn coordinate(&self, l1: usize) -> hpe::SecretKey<S> {
        hpe::SecretKey {
            predicate: self.id.levels.clone(),
            components: self.coords[l1].clone(),
        }
    }
}

/// `(C_{id,v}, {CT_{id,w}[l₁]}, {CT_id[i₁,l₁]})`, with `ct[i₁][l₁]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfOutput<S: GroupSuite> {
    pub c_v: S::G1,
    pub ct_w: Vec<S::G1>,
    pub ct: Vec<Vec<S::G1>>,
}

impl<S: GroupSuite> HfOutput<S> {
    /// `n + 1 + n·ℓ`.
    pub fn component_count(&self) -> usize {
        1 + self.ct_w.len() + self.ct.iter().map(Vec::len).sum::<usize>()
    }

    pub fn elements(&self) -> impl Iterator<Item = &S::G1> {
        std::iter::once(&self.c_v)
            .chain(&self.ct_w)
            .chain(self.ct.iter().flatten())
    }
}

pub fn hf_mkg<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HfParams<S>,
    aux: &AuxVector<S>,
    rng: &mut R,
) -> Result<(HfMasterPublicKey<S>, HfMasterSecretKey<S>)> {
    aux.check(params.depth, params.width)?;
    let s = &params.suite;
    let (n, d, mu) = (params.n, params.depth, params.width);
    let g = s.g1_generator();
    let g_hat = s.g2_generator();

    // all randomness is drawn up front in a fixed order so that the parallel part is
    // a pure function of it
    let alpha_v = s.random_nonzero_scalar(rng);
    let alpha_w: Vec<S::Scalar> = (0..n).map(|_| s.random_nonzero_scalar(rng)).collect();
    let alpha_h: Vec<Vec<Vec<S::Scalar>>> = (0..n)
        .map(|_| {
            (0..d)
                .map(|_| (0..=mu).map(|_| s.random_nonzero_scalar(rng)).collect())
                .collect()
        })
        .collect();
    let rows: Vec<S::Scalar> = (0..n).map(|_| s.random_nonzero_scalar(rng)).collect();

    let v = s.g1_exp(&g, &alpha_v);
    let w: Vec<S::G1> = alpha_w.par_iter().map(|a| s.g1_exp(&g, a)).collect();
    let w_hat: Vec<S::G2> = alpha_w.par_iter().map(|a| s.g2_exp(&g_hat, a)).collect();
    let h: Vec<Vec<Vec<S::G1>>> = alpha_h
        .par_iter()
        .map(|al| {
            al.iter()
                .map(|row| row.iter().map(|a| s.g1_exp(&g, a)).collect())
                .collect()
        })
        .collect();
    let h_hat: Vec<Vec<Vec<S::G2>>> = alpha_h
        .par_iter()
        .map(|al| {
            al.iter()
                .map(|row| row.iter().map(|a| s.g2_exp(&g_hat, a)).collect())
                .collect()
        })
        .collect();

    let matrix: Vec<(S::G1, Vec<S::G1>, Vec<Vec<Vec<S::G1>>>)> = rows
        .par_iter()
        .enumerate()
        .map(|(l2, s_row)| {
            let j = s.g1_exp(&v, s_row);
            let c_w = w.iter().map(|wl| s.g1_exp(wl, s_row)).collect();
            let c = (0..n)
                .map(|l1| {
                    (0..d)
                        .map(|i1| {
                            let hl = &h[l1][i1];
                            (1..=mu)
                                .map(|i2| {
                                    if l2 == l1 {
                                        let base = s.g1_mul(&s.g1_exp(&hl[0], &aux.levels[i1][i2 - 1]), &hl[i2]);
                                        s.g1_exp(&base, s_row)
                                    } else {
                                        s.g1_exp(&hl[i2], s_row)
                                    }
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            (j, c_w, c)
        })
        .collect();

    let mut j = Vec::with_capacity(n);
    let mut c_w = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for (jr, cwr, cr) in matrix {
        j.push(jr);
        c_w.push(cwr);
        c.push(cr);
    }
    let v_hat = s.g2_exp(&g_hat, &alpha_v);
    Ok((
        HfMasterPublicKey { v, w, h, j, c_w, c },
        HfMasterSecretKey {
            v_hat,
            w_hat,
            h_hat,
        },
    ))
}

/// One seed per coordinate, drawn sequentially, so parallel key generation is reproducible.
fn coordinate_seeds<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Vec<[u8; 32]> {
    (0..n)
        .map(|_| {
            let mut seed = [0u8; 32];
            rng.fill_bytes(&mut seed);
            seed
        })
        .collect()
}

pub fn hf_kg<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HfParams<S>,
    msk: &HfMasterSecretKey<S>,
    id: &HierId<S>,
    rng: &mut R,
) -> Result<HfSecretKey<S>> {
    params.check_identity(id)?;
    if msk.w_hat.len() != params.n || msk.h_hat.len() != params.n {
        return Err(Error::dim("master secret key coordinates", params.n, msk.w_hat.len()));
    }
    let s = &params.suite;
    let seeds = coordinate_seeds(params.n, rng);
    let coords = seeds
        .par_iter()
        .enumerate()
        .map(|(l1, seed)| {
            let mut crng = ChaCha20Rng::from_seed(*seed);
            let cmsk = msk.coordinate(s, l1);
            hpe::keygen_components(s, params.depth, &cmsk, &id.levels, &mut crng)
        })
        .collect();
    Ok(HfSecretKey {
        id: id.clone(),
        coords,
    })
}

pub fn hf_del<S: GroupSuite, R: CryptoRngCore + ?Sized>(
    params: &HfParams<S>,
    _mpk: &HfMasterPublicKey<S>,
    id: &HierId<S>,
    sk: &HfSecretKey<S>,
    next: &[S::Scalar],
    rng: &mut R,
) -> Result<HfSecretKey<S>> {
    if sk.id != *id {
        return Err(Error::Identity("the key was issued for a different identity".into()));
    }
    if id.level() >= params.depth {
        return Err(Error::DepthExhausted(params.depth));
    }
    let child = id.child(next.to_vec());
    params.check_identity(&child)?;
    if sk.coords.len() != params.n {
        return Err(Error::dim("key coordinates", params.n, sk.coords.len()));
    }
    for c in &sk.coords {
        c.check_shape(params.depth, params.width)?;
        if c.level() != id.level() {
            return Err(Error::Structure(
                "coordinate key level differs from the identity level".into(),
            ));
        }
    }
    let s = &params.suite;
    let seeds = coordinate_seeds(params.n, rng);
    let coords = seeds
        .par_iter()
        .zip(&sk.coords)
        .map(|(seed, c)| {
            let mut crng = ChaCha20Rng::from_seed(*seed);
            hpe::delegate_components(s, c, next, &mut crng)
        })
        .collect();
    Ok(HfSecretKey { id: child, coords })
}

fn check_input<S: GroupSuite>(params: &HfParams<S>, x: &[bool]) -> Result<()> {
    if x.len() != params.n {
        return Err(Error::dim("input", params.n, x.len()));
    }
    Ok(())
}

/// Row-wise product `∏_{l₂: x_{l₂}=1} C[l₂, l₁, i₁, i₂]` for all `i₁ < levels`, `i₂`.
fn selected_cells<S: GroupSuite>(
    s: &S,
    mpk: &HfMasterPublicKey<S>,
    x: &[bool],
    l1: usize,
    levels: usize,
) -> Vec<Vec<S::G1>> {
    (0..levels)
        .map(|i1| {
            let width = mpk.c[0][l1][i1].len();
            (0..width)
                .map(|i2| {
                    s.g1_product(
                        x.iter()
                            .zip(&mpk.c)
                            .filter(|(bit, _)| **bit)
                            .map(|(_, row)| &row[l1][i1][i2]),
                    )
                })
                .collect()
        })
        .collect()
}

fn selected_product<'a, S: GroupSuite>(
    s: &S,
    x: &[bool],
    items: impl Iterator<Item = &'a S::G1>,
) -> S::G1 {
    s.g1_product(x.iter().zip(items).filter(|(b, _)| **b).map(|(_, g)| g))
}

/// Evaluates the function on `X ∈ {0,1}^n` under identity `id`. Deterministic.
pub fn hf_eval<S: GroupSuite>(
    params: &HfParams<S>,
    mpk: &HfMasterPublicKey<S>,
    id: &HierId<S>,
    x: &[bool],
) -> Result<HfOutput<S>> {
    params.check_identity(id)?;
    check_input(params, x)?;
    mpk.check_shape(params)?;
    let s = &params.suite;
    let c_v = selected_product(s, x, mpk.j.iter());
    let per_coord: Vec<(S::G1, Vec<S::G1>)> = (0..params.n)
        .into_par_iter()
        .map(|l1| {
            let ct_w = selected_product(s, x, mpk.c_w.iter().map(|row| &row[l1]));
            let cells = selected_cells(s, mpk, x, l1, id.level());
            let ct = cells
                .iter()
                .zip(&id.levels)
                .map(|(row, idl)| s.g1_multi_exp(row.iter().zip(idl)))
                .collect();
            (ct_w, ct)
        })
        .collect();
    let mut ct_w = Vec::with_capacity(params.n);
    let mut ct = vec![Vec::with_capacity(params.n); id.level()];
    for (w, levels) in per_coord {
        ct_w.push(w);
        for (i1, c) in levels.into_iter().enumerate() {
            ct[i1].push(c);
        }
    }
    Ok(HfOutput { c_v, ct_w, ct })
}

/// Coordinate `l₁` of the evaluation as an unfolded HPE ciphertext for attributes at all
/// `d` levels, before the identity is applied.
pub fn coordinate_ciphertext<S: GroupSuite>(
    params: &HfParams<S>,
    mpk: &HfMasterPublicKey<S>,
    x: &[bool],
    l1: usize,
) -> Result<hpe::Ciphertext<S>> {
    check_input(params, x)?;
    mpk.check_shape(params)?;
    let s = &params.suite;
    Ok(hpe::Ciphertext {
        c0: None,
        c_v: selected_product(s, x, mpk.j.iter()),
        c_w: selected_product(s, x, mpk.c_w.iter().map(|row| &row[l1])),
        c: selected_cells(s, mpk, x, l1, params.depth),
    })
}

/// Recovers `X`: bit `l₁` is 0 iff coordinate `l₁`'s pairing product is `1_{G_T}`.
pub fn hf_inv<S: GroupSuite>(
    params: &HfParams<S>,
    _mpk: &HfMasterPublicKey<S>,
    id: &HierId<S>,
    sk: &HfSecretKey<S>,
    out: &HfOutput<S>,
) -> Result<Vec<bool>> {
    if sk.id != *id {
        return Err(Error::Identity("the key was issued for a different identity".into()));
    }
    let n = params.n;
    let level = id.level();
    if sk.coords.len() != n || sk.coords.iter().any(|c| c.level() != level) {
        return Err(Error::Structure("key shape does not match the identity".into()));
    }
    if out.ct_w.len() != n || out.ct.len() != level || out.ct.iter().any(|r| r.len() != n) {
        return Err(Error::Structure(format!(
            "output has {} components, expected {} for n={n}, ℓ={level}",
            out.component_count(),
            n + 1 + n * level
        )));
    }
    let s = &params.suite;
    Ok((0..n)
        .into_par_iter()
        .map(|l1| {
            let folded: Vec<S::G1> = out.ct.iter().map(|row| row[l1].clone()).collect();
            let product =
                hpe::pairing_product(s, &out.c_v, &out.ct_w[l1], &folded, &sk.coords[l1].decryption);
            !s.gt_is_identity(&product)
        })
        .collect())
}

/// The `n` low bits of `v`, least significant first.
pub fn bits_from_u64(v: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| i < 64 && (v >> i) & 1 == 1).collect()
}

pub fn bits_to_u64(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .filter(|(i, b)| **b && *i < 64)
        .fold(0, |acc, (i, _)| acc | (1 << i))
}
