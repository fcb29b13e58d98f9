//! Prime-order asymmetric bilinear groups `(G, Ĝ, G_T, e)`.
//!
//! Every scheme in this crate is generic over [`GroupSuite`]. Two backends implement it:
//!
//! * [`Bls12Suite`]: the BLS12-381 Type-3 pairing (group order ≈ 2^254.9). This is the only
//!   backend with any security.
//! * [`TransparentSuite`]: every element is stored as its discrete logarithm in the clear and
//!   the pairing is multiplication mod `p`. It is structurally exact and has zero security;
//!   it exists so that image sizes, exponent identities and lossiness can be checked by brute
//!   force at small `p`.
//!
//! All operations go through the suite value so that the transparent backend can carry its
//! runtime modulus. Suites are cheap to clone and clones share one pairing counter, which
//! tests use to count pairing evaluations.

mod bls;
mod transparent;

use std::fmt::Debug;

use num_bigint::BigUint;
use rand::{CryptoRng, RngCore};

use crate::error::Result;

pub use bls::Bls12Suite;
pub use transparent::{Dlog, TransparentSuite, Zp};

/// Which backend a suite, key or file belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendTag {
    Secure,
    Transparent,
}

impl BackendTag {
    pub fn as_u8(self) -> u8 {
        match self {
            BackendTag::Secure => 0,
            BackendTag::Transparent => 1,
        }
    }

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(BackendTag::Secure),
            1 => Some(BackendTag::Transparent),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BackendTag::Secure => "secure",
            BackendTag::Transparent => "transparent",
        }
    }
}

/// Marker bound for randomness sources used by key generation and encryption.
pub trait CryptoRngCore: RngCore + CryptoRng {}
impl<R: RngCore + CryptoRng + ?Sized> CryptoRngCore for R {}

/// An asymmetric bilinear group suite of prime order `p`.
pub trait GroupSuite: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Scalar: Clone + PartialEq + Eq + Debug + Send + Sync;
    type G1: Clone + PartialEq + Eq + Debug + Send + Sync;
    type G2: Clone + PartialEq + Eq + Debug + Send + Sync;
    type Gt: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn backend(&self) -> BackendTag;

    /// The group order `p`.
    fn order(&self) -> BigUint;

    /// `log2(p)` as a float, used only for reporting lossiness and parameter bounds.
    fn log2_order(&self) -> f64 {
        let p = self.order();
        let bits = p.bits();
        if bits <= 52 {
            let v: u64 = p.try_into().unwrap_or(u64::MAX);
            (v as f64).log2()
        } else {
            // top 53 bits are enough for a double
            let shift = bits - 53;
            let top: u64 = (&p >> shift).try_into().unwrap_or(u64::MAX);
            (top as f64).log2() + shift as f64
        }
    }

    /// Modulus of a transparent suite; `None` for the secure backend.
    fn transparent_modulus(&self) -> Option<u64> {
        None
    }

    // ---- scalars ----
    fn scalar_zero(&self) -> Self::Scalar;
    fn scalar_one(&self) -> Self::Scalar;
    fn scalar_from_u64(&self, v: u64) -> Self::Scalar;
    fn scalar_from_i64(&self, v: i64) -> Self::Scalar {
        if v >= 0 {
            self.scalar_from_u64(v as u64)
        } else {
            self.scalar_neg(&self.scalar_from_u64(v.unsigned_abs()))
        }
    }
    fn scalar_from_biguint(&self, v: &BigUint) -> Self::Scalar;
    fn scalar_to_biguint(&self, s: &Self::Scalar) -> BigUint;
    fn scalar_add(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn scalar_sub(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn scalar_mul(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    fn scalar_neg(&self, a: &Self::Scalar) -> Self::Scalar;
    fn scalar_inv(&self, a: &Self::Scalar) -> Option<Self::Scalar>;
    fn scalar_is_zero(&self, a: &Self::Scalar) -> bool {
        *a == self.scalar_zero()
    }
    fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Self::Scalar;
    /// Uniform on `[1, p)`.
    fn random_nonzero_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Self::Scalar;

    // ---- G ----
    fn g1_generator(&self) -> Self::G1;
    fn g1_identity(&self) -> Self::G1;
    fn g1_mul(&self, a: &Self::G1, b: &Self::G1) -> Self::G1;
    fn g1_exp(&self, a: &Self::G1, s: &Self::Scalar) -> Self::G1;
    fn g1_inv(&self, a: &Self::G1) -> Self::G1;

    // ---- Ĝ ----
    fn g2_generator(&self) -> Self::G2;
    fn g2_identity(&self) -> Self::G2;
    fn g2_mul(&self, a: &Self::G2, b: &Self::G2) -> Self::G2;
    fn g2_exp(&self, a: &Self::G2, s: &Self::Scalar) -> Self::G2;
    fn g2_inv(&self, a: &Self::G2) -> Self::G2;

    // ---- G_T ----
    fn gt_identity(&self) -> Self::Gt;
    fn gt_mul(&self, a: &Self::Gt, b: &Self::Gt) -> Self::Gt;
    fn gt_exp(&self, a: &Self::Gt, s: &Self::Scalar) -> Self::Gt;
    fn gt_inv(&self, a: &Self::Gt) -> Self::Gt;

    /// `e: G × Ĝ → G_T`. Increments the suite's pairing counter.
    fn pairing(&self, a: &Self::G1, b: &Self::G2) -> Self::Gt;

    /// Number of pairings evaluated through this suite (shared by all clones).
    fn pairing_count(&self) -> u64;
    fn reset_pairing_count(&self);

    // ---- encodings ----
    fn encode_scalar(&self, s: &Self::Scalar) -> Vec<u8>;
    fn decode_scalar(&self, bytes: &[u8]) -> Result<Self::Scalar>;
    fn encode_g1(&self, a: &Self::G1) -> Vec<u8>;
    fn decode_g1(&self, bytes: &[u8]) -> Result<Self::G1>;
    fn encode_g2(&self, a: &Self::G2) -> Vec<u8>;
    fn decode_g2(&self, bytes: &[u8]) -> Result<Self::G2>;
    fn encode_gt(&self, a: &Self::Gt) -> Vec<u8>;
    fn decode_gt(&self, bytes: &[u8]) -> Result<Self::Gt>;

    /// Suite-membership checks. The secure backend has a single suite, so these only
    /// matter for transparent elements built under a different modulus.
    fn check_g1(&self, _a: &Self::G1) -> Result<()> {
        Ok(())
    }
    fn check_g2(&self, _a: &Self::G2) -> Result<()> {
        Ok(())
    }
    fn check_gt(&self, _a: &Self::Gt) -> Result<()> {
        Ok(())
    }

    // ---- derived helpers ----

    fn g1_is_identity(&self, a: &Self::G1) -> bool {
        *a == self.g1_identity()
    }

    fn gt_is_identity(&self, a: &Self::Gt) -> bool {
        *a == self.gt_identity()
    }

    /// `∏ bases[i]^{exps[i]}` in G.
    fn g1_multi_exp<'a, I>(&self, terms: I) -> Self::G1
    where
        I: IntoIterator<Item = (&'a Self::G1, &'a Self::Scalar)>,
        Self::G1: 'a,
        Self::Scalar: 'a,
    {
        terms.into_iter().fold(self.g1_identity(), |acc, (b, e)| {
            self.g1_mul(&acc, &self.g1_exp(b, e))
        })
    }

    /// `∏ bases[i]^{exps[i]}` in Ĝ.
    fn g2_multi_exp<'a, I>(&self, terms: I) -> Self::G2
    where
        I: IntoIterator<Item = (&'a Self::G2, &'a Self::Scalar)>,
        Self::G2: 'a,
        Self::Scalar: 'a,
    {
        terms.into_iter().fold(self.g2_identity(), |acc, (b, e)| {
            self.g2_mul(&acc, &self.g2_exp(b, e))
        })
    }

    fn g1_product<'a, I>(&self, items: I) -> Self::G1
    where
        I: IntoIterator<Item = &'a Self::G1>,
        Self::G1: 'a,
    {
        items
            .into_iter()
            .fold(self.g1_identity(), |acc, x| self.g1_mul(&acc, x))
    }

    /// `⟨a, b⟩` over Z_p.
    fn inner_product(&self, a: &[Self::Scalar], b: &[Self::Scalar]) -> Self::Scalar {
        a.iter().zip(b).fold(self.scalar_zero(), |acc, (x, y)| {
            self.scalar_add(&acc, &self.scalar_mul(x, y))
        })
    }

    /// Reduce an arbitrary byte string (big-endian) into Z_p.
    fn scalar_from_bytes_mod_order(&self, bytes: &[u8]) -> Self::Scalar {
        let v = BigUint::from_bytes_be(bytes) % self.order();
        self.scalar_from_biguint(&v)
    }
}
