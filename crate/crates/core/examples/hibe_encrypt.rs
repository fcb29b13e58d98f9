// Randomized hierarchical IBE: a hash of the function input masks the message.
// The transparent backend keeps n small enough to run instantly; with the secure
// backend n has to exceed log₂ p ≈ 255 by the message length plus 2·lg(1/ε).

use hibtdf::groups::TransparentSuite;
use hibtdf::hibe::{hibe_dec, hibe_enc, hibe_mkgen, max_message_len};
use hibtdf::hibtdf::{hf_kg, hf_setup, HierId, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> hibtdf::Result<()> {
    let s = TransparentSuite::new(1_000_003)?;
    let params = hf_setup(s.clone(), 2, 32, 2, Mode::Selective)?;
    let eps_log2 = 2.0;
    let l = max_message_len(&params, eps_log2).unwrap_or(0);
    println!("n = 32, log₂ p ≈ 19.93: messages up to {l} bits");
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let (mpk, msk) = hibe_mkgen(&params, l, eps_log2, &mut rng)?;
    let id = HierId::from_u64(&s, &[vec![1, 2024], vec![1, 12]]);
    let sk = hf_kg(&params, &msk, &id, &mut rng)?;
    let m: Vec<bool> = (0..l).map(|i| i % 3 == 0).collect();
    let ct = hibe_enc(&params, &mpk, &m, &id, &mut rng)?;
    assert_eq!(hibe_dec(&params, &mpk, &sk, &ct, &id)?, m);
    println!("recovered {l}-bit message");
    Ok(())
}

#[allow(dead_code)]
fn main() -> hibtdf::Result<()> {
    run_example()
}
