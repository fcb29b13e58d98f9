// Evaluate the trapdoor function under a two-level identity and invert it with a
// delegated key.

use hibtdf::auxgen::aux_injective;
use hibtdf::groups::{Bls12Suite, GroupSuite};
use hibtdf::hibtdf::{bits_from_u64, bits_to_u64, hf_del, hf_eval, hf_inv, hf_kg, hf_mkg, hf_setup, HierId, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> hibtdf::Result<()> {
    let s = Bls12Suite::new();
    let params = hf_setup(s.clone(), 2, 8, 2, Mode::Selective)?;
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let (mpk, msk) = hf_mkg(&params, &aux_injective(&s, 2, 2), &mut rng)?;

    let org = HierId::new(vec![vec![s.scalar_one(), s.scalar_from_u64(42)]]);
    let next = vec![s.scalar_one(), s.scalar_from_u64(7)];
    let user = org.child(next.clone());
    let org_key = hf_kg(&params, &msk, &org, &mut rng)?;
    let user_key = hf_del(&params, &mpk, &org, &org_key, &next, &mut rng)?;

    let x = bits_from_u64(0b1100_1010, 8);
    let y = hf_eval(&params, &mpk, &user, &x)?;
    println!("output has {} group elements", y.component_count());
    let back = hf_inv(&params, &mpk, &user, &user_key, &y)?;
    println!("inverted {:#010b} -> {:#010b}", bits_to_u64(&x), bits_to_u64(&back));
    assert_eq!(back, x);
    Ok(())
}

#[allow(dead_code)]
fn main() -> hibtdf::Result<()> {
    run_example()
}
