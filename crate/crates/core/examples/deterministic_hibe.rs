// Deterministic encryption: equal messages give byte-identical ciphertexts, so messages
// must come from a high-entropy source.

use hibtdf::auxgen::aux_injective;
use hibtdf::dethibe::{det_dec, det_enc, BlockSource};
use hibtdf::groups::{Bls12Suite, GroupSuite};
use hibtdf::hibtdf::{hf_kg, hf_mkg, hf_setup, HierId, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> hibtdf::Result<()> {
    let s = Bls12Suite::new();
    let params = hf_setup(s.clone(), 1, 12, 2, Mode::Selective)?;
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let (mpk, msk) = hf_mkg(&params, &aux_injective(&s, 1, 2), &mut rng)?;
    let id = HierId::new(vec![vec![s.scalar_one(), s.scalar_from_u64(99)]]);
    let sk = hf_kg(&params, &msk, &id, &mut rng)?;

    let source = BlockSource::random_affine(12, 9, &mut rng)?;
    println!("source min-entropy: {} of 12 bits", source.min_entropy());
    let m = source.sample(&mut rng);
    let a = det_enc(&params, &mpk, &m, &id)?;
    let b = det_enc(&params, &mpk, &m, &id)?;
    println!("repeat encryption identical: {}", a == b);
    assert_eq!(det_dec(&params, &mpk, &sk, &a, &id)?, m);
    Ok(())
}

#[allow(dead_code)]
fn main() -> hibtdf::Result<()> {
    run_example()
}
