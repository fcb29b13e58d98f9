// Hierarchical inner-product encryption on BLS12-381: encrypt to attribute vectors,
// decrypt with a delegated key, and watch a non-matching key fail.

use hibtdf::groups::{Bls12Suite, GroupSuite};
use hibtdf::hpe::{decrypt, delegate, encrypt, keygen, setup, HpeParams, PlaintextSpace, Variant};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> hibtdf::Result<()> {
    let s = Bls12Suite::new();
    let params = HpeParams::new(s.clone(), 2, 3)?;
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let (mpk, msk) = setup(&params, Variant::Full, &mut rng);
    let space = PlaintextSpace::new(&s, 8)?;

    let z = |v: i64| s.scalar_from_i64(v);
    // attributes per level; a predicate level matches when its inner product is zero
    let attrs = vec![vec![z(1), z(2), z(3)], vec![z(4), z(0), z(1)]];
    let level1 = vec![z(-2), z(1), z(0)];
    let level2 = vec![z(1), z(5), z(-4)];

    let ct = encrypt(&params, &mpk, &attrs, &space, 200, &mut rng)?;
    let parent = keygen(&params, &msk, &[level1], &mut rng)?;
    let child = delegate(&params, &mpk, &parent, &level2, &mut rng)?;
    println!("parent key decrypts to {:?}", decrypt(&params, &mpk, &parent, &ct, &space)?);
    s.reset_pairing_count();
    println!("child key decrypts to {:?}", decrypt(&params, &mpk, &child, &ct, &space)?);
    println!("pairings used: {}", s.pairing_count());

    let wrong = keygen(&params, &msk, &[vec![z(1), z(1), z(1)]], &mut rng)?;
    println!("non-matching key gives {:?}", decrypt(&params, &mpk, &wrong, &ct, &space)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> hibtdf::Result<()> {
    run_example()
}
