mod common;

use std::collections::HashSet;

use common::rng;
use hibtdf::auxgen::{aux_injective, aux_selective};
use hibtdf::groups::{Bls12Suite, GroupSuite, TransparentSuite, Zp};
use hibtdf::hibtdf::{
    bits_from_u64, bits_to_u64, hf_del, hf_eval, hf_inv, hf_kg, hf_mkg, hf_setup, HierId, Mode,
};
use hibtdf::lossylab::image_size;
use hibtdf::Error;
use proptest::prelude::*;

#[test]
fn injective_keys_are_injective_at_p11() {
    let s = TransparentSuite::new(11).unwrap();
    let p = hf_setup(s.clone(), 2, 8, 2, Mode::Selective).unwrap();
    let (mpk, _) = hf_mkg(&p, &aux_injective(&s, 2, 2), &mut rng(1)).unwrap();
    for a in 0..11 {
        assert_eq!(image_size(&p, &mpk, &HierId::from_u64(&s, &[vec![1, a]])).unwrap(), 256);
    }
    for (a, b) in [(0, 0), (3, 4), (10, 2)] {
        let id = HierId::from_u64(&s, &[vec![1, a], vec![1, b]]);
        assert_eq!(image_size(&p, &mpk, &id).unwrap(), 256);
    }
}

#[test]
fn inversion_recovers_every_input_at_p11() {
    let s = TransparentSuite::new(11).unwrap();
    let p = hf_setup(s.clone(), 1, 8, 2, Mode::Selective).unwrap();
    let mut rng = rng(2);
    let (mpk, msk) = hf_mkg(&p, &aux_injective(&s, 1, 2), &mut rng).unwrap();
    let id = HierId::from_u64(&s, &[vec![1, 6]]);
    let sk = hf_kg(&p, &msk, &id, &mut rng).unwrap();
    for v in 0..256 {
        let x = bits_from_u64(v, 8);
        let out = hf_eval(&p, &mpk, &id, &x).unwrap();
        assert_eq!(bits_to_u64(&hf_inv(&p, &mpk, &id, &sk, &out).unwrap()), v);
    }
}

#[test]
fn secure_roundtrip_with_delegation() {
    let s = Bls12Suite::new();
    let p = hf_setup(s.clone(), 2, 6, 2, Mode::Selective).unwrap();
    let mut rng = rng(3);
    let (mpk, msk) = hf_mkg(&p, &aux_injective(&s, 2, 2), &mut rng).unwrap();
    let parent = HierId::new(vec![vec![s.scalar_one(), s.random_scalar(&mut rng)]]);
    let next = vec![s.scalar_one(), s.random_scalar(&mut rng)];
    let child = parent.child(next.clone());
    let sk = hf_kg(&p, &msk, &parent, &mut rng).unwrap();
    let dsk = hf_del(&p, &mpk, &parent, &sk, &next, &mut rng).unwrap();
    assert_eq!(dsk.id, child);
    for x in [0b101101u64, 0, 0b111111] {
        let bits = bits_from_u64(x, 6);
        let out = hf_eval(&p, &mpk, &child, &bits).unwrap();
        assert_eq!(hf_inv(&p, &mpk, &child, &dsk, &out).unwrap(), bits);
        let out = hf_eval(&p, &mpk, &parent, &bits).unwrap();
        assert_eq!(hf_inv(&p, &mpk, &parent, &sk, &out).unwrap(), bits);
    }
}

#[test]
fn lossy_outputs_depend_on_the_row_sum_only() {
    let s = TransparentSuite::new(11).unwrap();
    let p = hf_setup(s.clone(), 2, 8, 2, Mode::Selective).unwrap();
    let star = HierId::from_u64(&s, &[vec![1, 3], vec![1, 4]]);
    let (mpk, _) = hf_mkg(&p, &aux_selective(&s, &star, 2, 2).unwrap(), &mut rng(4)).unwrap();
    let rows = mpk.row_exponents(&s);
    let sum = |v: u64| (0..8).filter(|i| v >> i & 1 == 1).map(|i| rows[i]).sum::<u64>() % 11;
    let mut by_sum = std::collections::HashMap::new();
    for v in 0..256u64 {
        let out = hf_eval(&p, &mpk, &star, &bits_from_u64(v, 8)).unwrap();
        let enc: Vec<Vec<u8>> = out.elements().map(|e| s.encode_g1(e)).collect();
        let prev = by_sum.entry(sum(v)).or_insert_with(|| enc.clone());
        assert_eq!(*prev, enc, "inputs with equal ⟨s, x⟩ must collide");
    }
    let distinct: HashSet<_> = by_sum.values().collect();
    assert_eq!(distinct.len(), by_sum.len());
    assert!(by_sum.len() <= 11);
}

#[test]
fn identity_checks() {
    let s = TransparentSuite::new(11).unwrap();
    let p = hf_setup(s.clone(), 2, 4, 3, Mode::Adaptive).unwrap();
    let ok = HierId::from_u64(&s, &[vec![1, 0, 1]]);
    assert!(p.check_identity(&ok).is_ok());
    let non_binary = HierId::from_u64(&s, &[vec![1, 2, 0]]);
    assert!(matches!(p.check_identity(&non_binary), Err(Error::Identity(_))));
    let no_lead = HierId::from_u64(&s, &[vec![0, 1, 1]]);
    assert!(matches!(p.check_identity(&no_lead), Err(Error::Identity(_))));
    let deep = HierId::from_u64(&s, &vec![vec![1, 0, 0]; 3]);
    assert!(matches!(p.check_identity(&deep), Err(Error::Depth { .. })));
    assert!(matches!(hf_setup(s, 1, 4, 1, Mode::Selective), Err(Error::Parameter(_))));
}

#[test]
fn delegation_respects_depth_and_parent() {
    let s = TransparentSuite::new(1009).unwrap();
    let p = hf_setup(s.clone(), 1, 3, 2, Mode::Selective).unwrap();
    let mut rng = rng(5);
    let (mpk, msk) = hf_mkg(&p, &aux_injective(&s, 1, 2), &mut rng).unwrap();
    let id = HierId::from_u64(&s, &[vec![1, 2]]);
    let sk = hf_kg(&p, &msk, &id, &mut rng).unwrap();
    assert!(matches!(
        hf_del(&p, &mpk, &id, &sk, &[Zp(1), Zp(1)], &mut rng),
        Err(Error::DepthExhausted(1))
    ));
    let other = HierId::from_u64(&s, &[vec![1, 3]]);
    assert!(hf_del(&p, &mpk, &other, &sk, &[Zp(1), Zp(1)], &mut rng).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inversion_undoes_evaluation(seed in any::<u64>(), x in 0u64..1 << 12, a in 0u64..1000, b in 0u64..1000) {
        let s = TransparentSuite::new(1_000_003).unwrap();
        let p = hf_setup(s.clone(), 2, 12, 2, Mode::Selective).unwrap();
        let mut rng = rng(seed);
        let (mpk, msk) = hf_mkg(&p, &aux_injective(&s, 2, 2), &mut rng).unwrap();
        let id = HierId::from_u64(&s, &[vec![1, a], vec![1, b]]);
        let sk = hf_kg(&p, &msk, &id, &mut rng).unwrap();
        let bits = bits_from_u64(x, 12);
        let out = hf_eval(&p, &mpk, &id, &bits).unwrap();
        prop_assert_eq!(out.component_count(), 1 + 12 + 2 * 12);
        prop_assert_eq!(hf_inv(&p, &mpk, &id, &sk, &out).unwrap(), bits);
    }

    #[test]
    fn evaluation_is_deterministic(seed in any::<u64>(), x in 0u64..256) {
        let s = TransparentSuite::new(10_007).unwrap();
        let p = hf_setup(s.clone(), 1, 8, 2, Mode::Selective).unwrap();
        let (mpk, _) = hf_mkg(&p, &aux_injective(&s, 1, 2), &mut rng(seed)).unwrap();
        let id = HierId::from_u64(&s, &[vec![1, 5]]);
        let bits = bits_from_u64(x, 8);
        prop_assert_eq!(hf_eval(&p, &mpk, &id, &bits).unwrap(), hf_eval(&p, &mpk, &id, &bits).unwrap());
    }
}
