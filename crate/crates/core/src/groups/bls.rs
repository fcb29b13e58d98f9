//! BLS12-381 backend: an asymmetric (Type-3) pairing with a 255-bit prime group order.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use ark_bls12_381::{g2::Config as G2Config, Bls12_381, Fr, G1Projective, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::scalar_mul::glv::GLVConfig;
use ark_ec::PrimeGroup;
use ark_ff::{Field, One, PrimeField, UniformRand, Zero};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use num_bigint::BigUint;
use rand::RngCore;

use super::{BackendTag, GroupSuite};
use crate::error::{Error, Result};

#[derive(Clone, Default)]
pub struct Bls12Suite {
    pairings: Arc<AtomicU64>,
}

impl fmt::Debug for Bls12Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Bls12Suite")
    }
}

impl PartialEq for Bls12Suite {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}
impl Eq for Bls12Suite {}

impl Bls12Suite {
    pub fn new() -> Self {
        Self::default()
    }
}

fn ser<T: CanonicalSerialize>(x: &T) -> Vec<u8> {
    let mut out = Vec::with_capacity(x.compressed_size());
    x.serialize_compressed(&mut out)
        .expect("serializing into a Vec cannot fail");
    out
}

fn de<T: CanonicalDeserialize + CanonicalSerialize>(bytes: &[u8], what: &str) -> Result<T> {
    let mut reader = bytes;
    let v = T::deserialize_compressed(&mut reader)
        .map_err(|e| Error::Encoding(format!("bad {what} encoding: {e}")))?;
    if !reader.is_empty() {
        return Err(Error::Encoding(format!("trailing bytes after {what}")));
    }
    Ok(v)
}

type Gt = PairingOutput<Bls12_381>;

impl GroupSuite for Bls12Suite {
    type Scalar = Fr;
    type G1 = G1Projective;
    type G2 = G2Projective;
    type Gt = Gt;

    fn backend(&self) -> BackendTag {
        BackendTag::Secure
    }

    fn order(&self) -> BigUint {
        Fr::MODULUS.into()
    }

    fn scalar_zero(&self) -> Fr {
        Fr::zero()
    }
    fn scalar_one(&self) -> Fr {
        Fr::one()
    }
    fn scalar_from_u64(&self, v: u64) -> Fr {
        Fr::from(v)
    }
    fn scalar_from_biguint(&self, v: &BigUint) -> Fr {
        Fr::from(v.clone())
    }
    fn scalar_to_biguint(&self, s: &Fr) -> BigUint {
        (*s).into()
    }
    fn scalar_add(&self, a: &Fr, b: &Fr) -> Fr {
        *a + b
    }
    fn scalar_sub(&self, a: &Fr, b: &Fr) -> Fr {
        *a - b
    }
    fn scalar_mul(&self, a: &Fr, b: &Fr) -> Fr {
        *a * b
    }
    fn scalar_neg(&self, a: &Fr) -> Fr {
        -*a
    }
    fn scalar_inv(&self, a: &Fr) -> Option<Fr> {
        a.inverse()
    }
    fn random_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Fr {
        Fr::rand(rng)
    }
    fn random_nonzero_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Fr {
        loop {
            let s = Fr::rand(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    fn g1_generator(&self) -> G1Projective {
        G1Projective::generator()
    }
    fn g1_identity(&self) -> G1Projective {
        G1Projective::zero()
    }
    fn g1_mul(&self, a: &G1Projective, b: &G1Projective) -> G1Projective {
        *a + b
    }
    fn g1_exp(&self, a: &G1Projective, s: &Fr) -> G1Projective {
        *a * s
    }
    fn g1_inv(&self, a: &G1Projective) -> G1Projective {
        -*a
    }

    fn g2_generator(&self) -> G2Projective {
        G2Projective::generator()
    }
    fn g2_identity(&self) -> G2Projective {
        G2Projective::zero()
    }
    fn g2_mul(&self, a: &G2Projective, b: &G2Projective) -> G2Projective {
        *a + b
    }
    fn g2_exp(&self, a: &G2Projective, s: &Fr) -> G2Projective {
        // the curve crate only routes G1 through the endomorphism
        G2Config::glv_mul_projective(*a, *s)
    }
    fn g2_inv(&self, a: &G2Projective) -> G2Projective {
        -*a
    }

    fn gt_identity(&self) -> Gt {
        Gt::zero()
    }
    fn gt_mul(&self, a: &Gt, b: &Gt) -> Gt {
        *a + b
    }
    fn gt_exp(&self, a: &Gt, s: &Fr) -> Gt {
        *a * s
    }
    fn gt_inv(&self, a: &Gt) -> Gt {
        -*a
    }

    fn pairing(&self, a: &G1Projective, b: &G2Projective) -> Gt {
        self.pairings.fetch_add(1, Ordering::Relaxed);
        Bls12_381::pairing(*a, *b)
    }

    fn pairing_count(&self) -> u64 {
        self.pairings.load(Ordering::Relaxed)
    }

    fn reset_pairing_count(&self) {
        self.pairings.store(0, Ordering::Relaxed);
    }

    fn encode_scalar(&self, s: &Fr) -> Vec<u8> {
        ser(s)
    }
    fn decode_scalar(&self, bytes: &[u8]) -> Result<Fr> {
        de(bytes, "scalar")
    }
    fn encode_g1(&self, a: &G1Projective) -> Vec<u8> {
        ser(a)
    }
    fn decode_g1(&self, bytes: &[u8]) -> Result<G1Projective> {
        de(bytes, "G1 point")
    }
    fn encode_g2(&self, a: &G2Projective) -> Vec<u8> {
        ser(a)
    }
    fn decode_g2(&self, bytes: &[u8]) -> Result<G2Projective> {
        de(bytes, "G2 point")
    }
    fn encode_gt(&self, a: &Gt) -> Vec<u8> {
        ser(a)
    }
    fn decode_gt(&self, bytes: &[u8]) -> Result<Gt> {
        de(bytes, "GT element")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    // r = 0x73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001, the published
    // BLS12-381 subgroup order.
    #[test]
    fn order_is_the_published_subgroup_order() {
        let s = Bls12Suite::new();
        let r = BigUint::parse_bytes(
            b"73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001",
            16,
        )
        .unwrap();
        assert_eq!(s.order(), r);
        assert!(s.order() >= BigUint::from(1u8) << 250);
    }

    #[test]
    fn g2_endomorphism_matches_double_and_add() {
        let s = Bls12Suite::new();
        let mut rng = ChaCha20Rng::seed_from_u64(98);
        let p = G2Projective::rand(&mut rng);
        for e in [Fr::zero(), Fr::one(), -Fr::one()]
            .into_iter()
            .chain((0..50).map(|_| Fr::rand(&mut rng)))
        {
            assert_eq!(s.g2_exp(&p, &e), p.mul_bigint(e.into_bigint()));
        }
    }

    #[test]
    fn bilinearity_spot_checks() {
        let s = Bls12Suite::new();
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        let base = s.pairing(&s.g1_generator(), &s.g2_generator());
        for _ in 0..100 {
            let a = s.random_scalar(&mut rng);
            let b = s.random_scalar(&mut rng);
            let lhs = s.pairing(
                &s.g1_exp(&s.g1_generator(), &a),
                &s.g2_exp(&s.g2_generator(), &b),
            );
            assert_eq!(lhs, s.gt_exp(&base, &(a * b)));
        }
        assert_eq!(s.pairing_count(), 101);
    }

    #[test]
    fn compressed_encodings_roundtrip() {
        let s = Bls12Suite::new();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let x = s.g1_exp(&s.g1_generator(), &s.random_scalar(&mut rng));
        let y = s.g2_exp(&s.g2_generator(), &s.random_scalar(&mut rng));
        let t = s.pairing(&x, &y);
        let ex = s.encode_g1(&x);
        assert_eq!(ex.len(), 48);
        assert_eq!(s.encode_g2(&y).len(), 96);
        assert_eq!(s.decode_g1(&ex).unwrap(), x);
        assert_eq!(s.decode_g2(&s.encode_g2(&y)).unwrap(), y);
        assert_eq!(s.decode_gt(&s.encode_gt(&t)).unwrap(), t);
        let z = s.random_scalar(&mut rng);
        assert_eq!(s.decode_scalar(&s.encode_scalar(&z)).unwrap(), z);
        assert!(s.decode_g1(&ex[..47]).is_err());
    }

    #[test]
    fn biguint_conversions() {
        let s = Bls12Suite::new();
        let v = BigUint::from(123_456_789u64);
        assert_eq!(s.scalar_to_biguint(&s.scalar_from_biguint(&v)), v);
        let wrapped = s.order() + 5u32;
        assert_eq!(s.scalar_from_biguint(&wrapped), s.scalar_from_u64(5));
        assert_eq!(s.scalar_from_i64(-1), -Fr::one());
    }
}
