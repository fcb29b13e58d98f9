mod common;

use common::rng;
use hibtdf::auxgen::aux_selective;
use hibtdf::groups::{GroupSuite, TransparentSuite};
use hibtdf::hibe::{
    hibe_dec, hibe_enc, hibe_mkgen, hibe_mkgen_with_aux, output_classes, smoothing_distance,
    PairwiseHash,
};
use hibtdf::hibtdf::{bits_from_u64, hf_kg, hf_setup, HierId, Mode};
use hibtdf::Error;
use rand::Rng;

#[test]
fn hash_family_is_pairwise_independent() {
    // every (A, b) with A ∈ {0,1}^{2×3}, b ∈ {0,1}^2
    let (l, n) = (2usize, 3usize);
    let hashes: Vec<PairwiseHash> = (0..1u32 << (l * n + l))
        .map(|code| {
            let bit = |i: usize| code >> i & 1 == 1;
            PairwiseHash {
                rows: (0..l).map(|r| (0..n).map(|c| bit(r * n + c)).collect()).collect(),
                offset: (0..l).map(|r| bit(l * n + r)).collect(),
            }
        })
        .collect();
    let index = |y: &[bool]| y.iter().enumerate().fold(0, |a, (i, b)| a | (usize::from(*b) << i));
    for x in 0..8u64 {
        for x2 in 0..8u64 {
            if x == x2 {
                continue;
            }
            let mut counts = [0u32; 16];
            for h in &hashes {
                let a = index(&h.apply(&bits_from_u64(x, n)));
                let b = index(&h.apply(&bits_from_u64(x2, n)));
                counts[a * 4 + b] += 1;
            }
            assert!(counts.iter().all(|&c| c == 16), "x = {x}, x' = {x2}: {counts:?}");
        }
    }
}

#[test]
fn decryption_inverts_encryption() {
    let s = TransparentSuite::new(11).unwrap();
    let p = hf_setup(s.clone(), 1, 8, 2, Mode::Selective).unwrap();
    let mut rng = rng(1);
    let (mpk, msk) = hibe_mkgen(&p, 2, 1.0, &mut rng).unwrap();
    for a in 0..11 {
        let id = HierId::from_u64(&s, &[vec![1, a]]);
        let sk = hf_kg(&p, &msk, &id, &mut rng).unwrap();
        for _ in 0..4 {
            let m = vec![rng.gen(), rng.gen()];
            let ct = hibe_enc(&p, &mpk, &m, &id, &mut rng).unwrap();
            assert_eq!(hibe_dec(&p, &mpk, &sk, &ct, &id).unwrap(), m);
        }
    }

    // a large modulus leaves room for the hash only when n exceeds log₂ p
    let s = TransparentSuite::new(1_000_003).unwrap();
    let p = hf_setup(s.clone(), 2, 24, 2, Mode::Selective).unwrap();
    let (mpk, msk) = hibe_mkgen(&p, 2, 1.0, &mut rng).unwrap();
    let parent = HierId::from_u64(&s, &[vec![1, 77]]);
    let id = parent.child(vec![s.scalar_one(), s.scalar_from_u64(5)]);
    let psk = hf_kg(&p, &msk, &parent, &mut rng).unwrap();
    let sk = hibtdf::hibtdf::hf_del(&p, &mpk.hf, &parent, &psk, &id.levels[1], &mut rng).unwrap();
    let m = vec![true, false];
    let ct = hibe_enc(&p, &mpk, &m, &id, &mut rng).unwrap();
    assert_eq!(hibe_dec(&p, &mpk, &sk, &ct, &id).unwrap(), m);
}

#[test]
fn lossy_identity_hides_the_message() {
    let s = TransparentSuite::new(11).unwrap();
    let p = hf_setup(s.clone(), 2, 8, 2, Mode::Selective).unwrap();
    let star = HierId::from_u64(&s, &[vec![1, 3], vec![1, 4]]);
    let aux = aux_selective(&s, &star, 2, 2).unwrap();
    let mut rng = rng(2);
    let (mpk, _) = hibe_mkgen_with_aux(&p, 2, 1.0, &aux, &mut rng).unwrap();
    let classes = output_classes(&p, &mpk.hf, &star).unwrap();
    assert!(classes.iter().max().unwrap() + 1 <= 11);
    let bound = 2.0 * (4.0 * 11.0 / 256.0f64).sqrt();
    for _ in 0..50 {
        let h = PairwiseHash::sample(2, 8, &mut rng);
        assert!(smoothing_distance(&classes, &h) <= bound);
    }
    // an injective identity leaks everything
    let other = HierId::from_u64(&s, &[vec![1, 5]]);
    let classes = output_classes(&p, &mpk.hf, &other).unwrap();
    assert!((smoothing_distance(&classes, &mpk.hash) - 0.75).abs() < 1e-12);
}

#[test]
fn message_length_is_enforced() {
    let s = TransparentSuite::new(11).unwrap();
    let p = hf_setup(s.clone(), 1, 8, 2, Mode::Selective).unwrap();
    let mut rng = rng(3);
    assert!(matches!(hibe_mkgen(&p, 3, 1.0, &mut rng), Err(Error::Parameter(_))));
    let (mpk, msk) = hibe_mkgen(&p, 1, 1.0, &mut rng).unwrap();
    let id = HierId::from_u64(&s, &[vec![1, 1]]);
    assert!(matches!(
        hibe_enc(&p, &mpk, &[true, true], &id, &mut rng),
        Err(Error::Dimension { .. })
    ));
    let sk = hf_kg(&p, &msk, &id, &mut rng).unwrap();
    let mut ct = hibe_enc(&p, &mpk, &[true], &id, &mut rng).unwrap();
    ct.c2.push(false);
    assert!(hibe_dec(&p, &mpk, &sk, &ct, &id).is_err());
}
