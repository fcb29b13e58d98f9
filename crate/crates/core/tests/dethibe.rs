mod common;

use common::rng;
use hibtdf::auxgen::{aux_injective, aux_selective};
use hibtdf::dethibe::{
    det_dec, det_enc, min_entropy_bound, priv1_experiment, BlockSource, DetCiphertext,
    Priv1Adversary,
};
use hibtdf::groups::{GroupSuite, TransparentSuite};
use hibtdf::hibtdf::{bits_from_u64, hf_kg, hf_mkg, hf_setup, HfMasterPublicKey, HfParams, HierId, Mode};
use hibtdf::lossylab::KeyOracle;
use hibtdf::{Error, Result};

type S = TransparentSuite;

#[test]
fn encryption_is_deterministic_and_invertible() {
    let s = S::new(1009).unwrap();
    let p = hf_setup(s.clone(), 2, 10, 2, Mode::Selective).unwrap();
    let mut rng = rng(1);
    let (mpk, msk) = hf_mkg(&p, &aux_injective(&s, 2, 2), &mut rng).unwrap();
    let id = HierId::from_u64(&s, &[vec![1, 4], vec![1, 8]]);
    let sk = hf_kg(&p, &msk, &id, &mut rng).unwrap();
    for v in [0u64, 1, 513, 1023] {
        let m = bits_from_u64(v, 10);
        let a = det_enc(&p, &mpk, &m, &id).unwrap();
        let b = det_enc(&p, &mpk, &m, &id).unwrap();
        let enc = |c: &DetCiphertext<S>| c.c.elements().map(|e| s.encode_g1(e)).collect::<Vec<_>>();
        assert_eq!(enc(&a), enc(&b));
        assert_eq!(det_dec(&p, &mpk, &sk, &a, &id).unwrap(), m);
    }
}

#[test]
fn lossy_ciphertexts_collide_on_equal_row_sums() {
    let s = S::new(11).unwrap();
    let p = hf_setup(s.clone(), 1, 8, 2, Mode::Selective).unwrap();
    let star = HierId::from_u64(&s, &[vec![1, 7]]);
    let (mpk, _) = hf_mkg(&p, &aux_selective(&s, &star, 1, 2).unwrap(), &mut rng(2)).unwrap();
    let rows = mpk.row_exponents(&s);
    let dot = |v: u64| (0..8).filter(|i| v >> i & 1 == 1).map(|i| rows[i]).sum::<u64>() % 11;
    let mut pairs = 0;
    for x in 0..256u64 {
        for x2 in x + 1..256 {
            let same = det_enc(&p, &mpk, &bits_from_u64(x, 8), &star).unwrap()
                == det_enc(&p, &mpk, &bits_from_u64(x2, 8), &star).unwrap();
            assert_eq!(same, dot(x) == dot(x2));
            pairs += usize::from(same);
        }
    }
    assert!(pairs > 0);
}

#[test]
fn sources_and_bounds() {
    let mut rng = rng(3);
    let src = BlockSource::random_affine(12, 7, &mut rng).unwrap();
    assert_eq!(src.len(), 12);
    assert_eq!(src.min_entropy(), 7);
    assert!((min_entropy_bound(8, 8.0 - 11f64.log2(), 1.0) - 5.459).abs() < 1e-3);
}

/// Queries a sibling key and guesses the low bit of the first output element.
struct Sibling {
    target: HierId<S>,
    sibling: HierId<S>,
}

impl Priv1Adversary<S> for Sibling {
    fn choose_target(&mut self, _: &HfParams<S>) -> HierId<S> {
        self.target.clone()
    }

    fn query(&mut self, _: &HfParams<S>, _: &HfMasterPublicKey<S>, oracle: &mut KeyOracle<S>) -> Result<HierId<S>> {
        oracle.create_key(&self.sibling)?;
        oracle.reveal_key(&self.sibling)?;
        Ok(self.target.clone())
    }

    fn guess(&mut self, challenge: &DetCiphertext<S>) -> bool {
        challenge.c.c_v.value() & 1 == 1
    }
}

#[test]
fn priv1_game_runs_and_polices_the_challenge() {
    let s = S::new(1009).unwrap();
    let p = hf_setup(s.clone(), 1, 8, 2, Mode::Selective).unwrap();
    let mut adv = Sibling {
        target: HierId::from_u64(&s, &[vec![1, 2]]),
        sibling: HierId::from_u64(&s, &[vec![1, 3]]),
    };
    let src = BlockSource::uniform(8);
    let t = priv1_experiment(&p, &src, &mut adv, &mut rng(4)).unwrap();
    assert_eq!(t.revealed, vec![HierId::from_u64(&s, &[vec![1, 3]])]);
    assert_eq!(t.id_star, t.id_dagger);

    let mut cheat = Sibling {
        target: HierId::from_u64(&s, &[vec![1, 2]]),
        sibling: HierId::from_u64(&s, &[vec![1, 2]]),
    };
    assert!(matches!(
        priv1_experiment(&p, &src, &mut cheat, &mut rng(5)),
        Err(Error::InvalidAdversary(_))
    ));
    assert!(priv1_experiment(&p, &BlockSource::uniform(7), &mut adv, &mut rng(6)).is_err());
}
