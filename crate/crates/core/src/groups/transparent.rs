//! Exponent-in-the-clear group suite. Insecure by construction.

use std::fmt;
use std::marker::PhantomData;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, RngCore};

use super::{BackendTag, GroupSuite};
use crate::error::{Error, Result};

/// Scalar of a transparent suite, canonical in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zp(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct G1Kind;
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct G2Kind;
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GtKind;

/// A group element represented by its discrete log base the group's generator.
/// The modulus travels with the element so that mixing suites is detectable.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dlog<K> {
    value: u64,
    modulus: u64,
    _kind: PhantomData<K>,
}

impl<K> Dlog<K> {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl<K> fmt::Debug for Dlog<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dlog({} mod {})", self.value, self.modulus)
    }
}

/// `G = Ĝ = G_T = Z_p` under addition, with `e(a, b) = a·b mod p`.
#[derive(Clone)]
pub struct TransparentSuite {
    p: u64,
    pairings: Arc<AtomicU64>,
}

impl fmt::Debug for TransparentSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransparentSuite").field("p", &self.p).finish()
    }
}

/// Suites are equal when they share a modulus; the pairing counter is ignored.
impl PartialEq for TransparentSuite {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}
impl Eq for TransparentSuite {}

impl TransparentSuite {
    /// Largest supported modulus; products are computed in `u128`.
    pub const MAX_MODULUS: u64 = (1 << 63) - 1;

    pub fn new(p: u64) -> Result<Self> {
        if p < 3 {
            return Err(Error::Modulus(format!("{p} is below the minimum of 3")));
        }
        if p > Self::MAX_MODULUS {
            return Err(Error::Modulus(format!("{p} exceeds 2^63 - 1")));
        }
        if !is_prime_u64(p) {
            return Err(Error::Modulus(format!("{p} is not prime")));
        }
        Ok(TransparentSuite {
            p,
            pairings: Arc::new(AtomicU64::new(0)),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn elem<K>(&self, value: u64) -> Dlog<K> {
        Dlog {
            value: value % self.p,
            modulus: self.p,
            _kind: PhantomData,
        }
    }

    fn same<K>(&self, a: &Dlog<K>) {
        assert_eq!(
            a.modulus, self.p,
            "suite mismatch: element mod {} used in suite mod {}",
            a.modulus, self.p
        );
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn g1_from_dlog(&self, v: u64) -> Dlog<G1Kind> {
        self.elem(v)
    }
    pub fn g2_from_dlog(&self, v: u64) -> Dlog<G2Kind> {
        self.elem(v)
    }
    pub fn gt_from_dlog(&self, v: u64) -> Dlog<GtKind> {
        self.elem(v)
    }

    pub fn dlog_g1(&self, a: &Dlog<G1Kind>) -> u64 {
        self.same(a);
        a.value
    }
    pub fn dlog_g2(&self, a: &Dlog<G2Kind>) -> u64 {
        self.same(a);
        a.value
    }
    pub fn dlog_gt(&self, a: &Dlog<GtKind>) -> u64 {
        self.same(a);
        a.value
    }

    fn encode_u64(v: u64) -> Vec<u8> {
        let bytes = v.to_be_bytes();
        let first = bytes.iter().position(|&b| b != 0).unwrap_or(8);
        bytes[first..].to_vec()
    }

    fn decode_u64(&self, bytes: &[u8]) -> Result<u64> {
        if bytes.len() > 8 {
            return Err(Error::Encoding(format!(
                "transparent element of {} bytes is too long",
                bytes.len()
            )));
        }
        if bytes.first() == Some(&0) {
            return Err(Error::Encoding(
                "non-minimal transparent encoding (leading zero byte)".into(),
            ));
        }
        let v = bytes.iter().fold(0u64, |acc, &b| (acc << 8) | b as u64);
        if v >= self.p {
            return Err(Error::Encoding(format!("{v} is not reduced mod {}", self.p)));
        }
        Ok(v)
    }

    fn check<K>(&self, a: &Dlog<K>) -> Result<()> {
        if a.modulus == self.p {
            Ok(())
        } else {
            Err(Error::SuiteMismatch)
        }
    }
}

impl GroupSuite for TransparentSuite {
    type Scalar = Zp;
    type G1 = Dlog<G1Kind>;
    type G2 = Dlog<G2Kind>;
    type Gt = Dlog<GtKind>;

    fn backend(&self) -> BackendTag {
        BackendTag::Transparent
    }

    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }

    fn transparent_modulus(&self) -> Option<u64> {
        Some(self.p)
    }

    fn scalar_zero(&self) -> Zp {
        Zp(0)
    }
    fn scalar_one(&self) -> Zp {
        Zp(1)
    }
    fn scalar_from_u64(&self, v: u64) -> Zp {
        Zp(v % self.p)
    }
    fn scalar_from_biguint(&self, v: &BigUint) -> Zp {
        let r: u64 = (v % self.p).try_into().expect("reduced value fits in u64");
        Zp(r)
    }
    fn scalar_to_biguint(&self, s: &Zp) -> BigUint {
        BigUint::from(s.0)
    }
    fn scalar_add(&self, a: &Zp, b: &Zp) -> Zp {
        Zp(self.add(a.0, b.0))
    }
    fn scalar_sub(&self, a: &Zp, b: &Zp) -> Zp {
        Zp(self.add(a.0, self.neg(b.0)))
    }
    fn scalar_mul(&self, a: &Zp, b: &Zp) -> Zp {
        Zp(self.mulm(a.0, b.0))
    }
    fn scalar_neg(&self, a: &Zp) -> Zp {
        Zp(self.neg(a.0))
    }
    fn scalar_inv(&self, a: &Zp) -> Option<Zp> {
        if a.0 == 0 {
            return None;
        }
        // Fermat: a^{p-2}
        let mut base = a.0;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulm(acc, base);
            }
            base = self.mulm(base, base);
            e >>= 1;
        }
        Some(Zp(acc))
    }
    fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Zp {
        Zp(rng.gen_range(0..self.p))
    }
    fn random_nonzero_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Zp {
        Zp(rng.gen_range(1..self.p))
    }

    fn g1_generator(&self) -> Self::G1 {
        self.elem(1)
    }
    fn g1_identity(&self) -> Self::G1 {
        self.elem(0)
    }
    fn g1_mul(&self, a: &Self::G1, b: &Self::G1) -> Self::G1 {
        self.same(a);
        self.same(b);
        self.elem(self.add(a.value, b.value))
    }
    fn g1_exp(&self, a: &Self::G1, s: &Zp) -> Self::G1 {
        self.same(a);
        self.elem(self.mulm(a.value, s.0))
    }
    fn g1_inv(&self, a: &Self::G1) -> Self::G1 {
        self.same(a);
        self.elem(self.neg(a.value))
    }

    fn g2_generator(&self) -> Self::G2 {
        self.elem(1)
    }
    fn g2_identity(&self) -> Self::G2 {
        self.elem(0)
    }
    fn g2_mul(&self, a: &Self::G2, b: &Self::G2) -> Self::G2 {
        self.same(a);
        self.same(b);
        self.elem(self.add(a.value, b.value))
    }
    fn g2_exp(&self, a: &Self::G2, s: &Zp) -> Self::G2 {
        self.same(a);
        self.elem(self.mulm(a.value, s.0))
    }
    fn g2_inv(&self, a: &Self::G2) -> Self::G2 {
        self.same(a);
        self.elem(self.neg(a.value))
    }

    fn gt_identity(&self) -> Self::Gt {
        self.elem(0)
    }
    fn gt_mul(&self, a: &Self::Gt, b: &Self::Gt) -> Self::Gt {
        self.same(a);
        self.same(b);
        self.elem(self.add(a.value, b.value))
    }
    fn gt_exp(&self, a: &Self::Gt, s: &Zp) -> Self::Gt {
        self.same(a);
        self.elem(self.mulm(a.value, s.0))
    }
    fn gt_inv(&self, a: &Self::Gt) -> Self::Gt {
        self.same(a);
        self.elem(self.neg(a.value))
    }

    fn pairing(&self, a: &Self::G1, b: &Self::G2) -> Self::Gt {
        self.same(a);
        self.same(b);
        self.pairings.fetch_add(1, Ordering::Relaxed);
        self.elem(self.mulm(a.value, b.value))
    }

    fn pairing_count(&self) -> u64 {
        self.pairings.load(Ordering::Relaxed)
    }

    fn reset_pairing_count(&self) {
        self.pairings.store(0, Ordering::Relaxed);
    }

    fn encode_scalar(&self, s: &Zp) -> Vec<u8> {
        Self::encode_u64(s.0)
    }
    fn decode_scalar(&self, bytes: &[u8]) -> Result<Zp> {
        self.decode_u64(bytes).map(Zp)
    }
    fn encode_g1(&self, a: &Self::G1) -> Vec<u8> {
        self.same(a);
        Self::encode_u64(a.value)
    }
    fn decode_g1(&self, bytes: &[u8]) -> Result<Self::G1> {
        self.decode_u64(bytes).map(|v| self.elem(v))
    }
    fn encode_g2(&self, a: &Self::G2) -> Vec<u8> {
        self.same(a);
        Self::encode_u64(a.value)
    }
    fn decode_g2(&self, bytes: &[u8]) -> Result<Self::G2> {
        self.decode_u64(bytes).map(|v| self.elem(v))
    }
    fn encode_gt(&self, a: &Self::Gt) -> Vec<u8> {
        self.same(a);
        Self::encode_u64(a.value)
    }
    fn decode_gt(&self, bytes: &[u8]) -> Result<Self::Gt> {
        self.decode_u64(bytes).map(|v| self.elem(v))
    }

    fn check_g1(&self, a: &Self::G1) -> Result<()> {
        self.check(a)
    }
    fn check_g2(&self, a: &Self::G2) -> Result<()> {
        self.check(a)
    }
    fn check_gt(&self, a: &Self::Gt) -> Result<()> {
        self.check(a)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn rejects_composite_and_tiny_moduli() {
        assert!(matches!(TransparentSuite::new(10), Err(Error::Modulus(_))));
        assert!(matches!(TransparentSuite::new(2), Err(Error::Modulus(_))));
        assert!(matches!(TransparentSuite::new(1 << 63), Err(Error::Modulus(_))));
        assert!(TransparentSuite::new(11).is_ok());
        assert!(TransparentSuite::new((1 << 61) - 1).is_ok());
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..5000 {
            assert_eq!(is_prime_u64(n), trial(n), "n = {n}");
        }
        // strong pseudoprime to several small bases
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn pairing_at_p11() {
        let s = TransparentSuite::new(11).unwrap();
        let a = s.g1_exp(&s.g1_generator(), &Zp(3));
        let b = s.g2_exp(&s.g2_generator(), &Zp(4));
        assert_eq!(s.dlog_gt(&s.pairing(&a, &b)), 1);
    }

    #[test]
    fn bilinearity_exhaustive_small_primes() {
        for p in [3u64, 5, 7, 11, 13] {
            let s = TransparentSuite::new(p).unwrap();
            let base = s.pairing(&s.g1_generator(), &s.g2_generator());
            assert_ne!(base, s.gt_identity());
            for a in 0..p {
                for b in 0..p {
                    let lhs = s.pairing(
                        &s.g1_exp(&s.g1_generator(), &Zp(a)),
                        &s.g2_exp(&s.g2_generator(), &Zp(b)),
                    );
                    // oracle: integer product reduced independently
                    assert_eq!(s.dlog_gt(&lhs), (a * b) % p);
                    assert_eq!(lhs, s.gt_exp(&base, &Zp(a * b % p)));
                }
            }
        }
    }

    #[test]
    fn nonzero_scalars_are_uniform_chi_square() {
        let s = TransparentSuite::new(11).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2024);
        let draws = 10_000;
        let mut counts = [0u32; 11];
        for _ in 0..draws {
            let z = s.random_nonzero_scalar(&mut rng);
            assert_ne!(z.0, 0);
            counts[z.0 as usize] += 1;
        }
        assert_eq!(counts[0], 0);
        let expected = draws as f64 / 10.0;
        let chi2: f64 = counts[1..]
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 9 degrees of freedom; 27.88 is the 0.999 quantile
        assert!(chi2 < 27.88, "chi2 = {chi2}");
    }

    #[test]
    fn encodings_are_minimal_big_endian() {
        let s = TransparentSuite::new((1 << 61) - 1).unwrap();
        assert_eq!(s.encode_g1(&s.g1_from_dlog(0)), Vec::<u8>::new());
        assert_eq!(s.encode_g1(&s.g1_from_dlog(0x0102)), vec![1, 2]);
        assert!(s.decode_g1(&[0, 1]).is_err());
        assert!(s.decode_g1(&[0xff; 8]).is_err());
        let x = s.g2_from_dlog(123_456_789);
        assert_eq!(s.decode_g2(&s.encode_g2(&x)).unwrap(), x);
    }

    #[test]
    fn mixing_suites_is_detected() {
        let a = TransparentSuite::new(11).unwrap();
        let b = TransparentSuite::new(13).unwrap();
        let x = a.g1_generator();
        assert_eq!(b.check_g1(&x), Err(Error::SuiteMismatch));
        assert!(a.check_g1(&x).is_ok());
        let r = std::panic::catch_unwind(|| b.g1_mul(&x, &b.g1_generator()));
        assert!(r.is_err());
    }
}
