// The artificial abort: estimate η for one revealed sibling, then run the pre-output
// stage with the estimate.

use hibtdf::groups::TransparentSuite;
use hibtdf::hibtdf::HierId;
use hibtdf::lossylab::{estimate_eta, exact_eta, preoutput_stage, sample_count, to_f64};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> hibtdf::Result<()> {
    let s = TransparentSuite::new(1_000_003)?;
    let star = HierId::from_u64(&s, &[vec![1, 0]]);
    let revealed = [HierId::from_u64(&s, &[vec![1, 1]])];
    let (d, mu, q, zeta) = (1, 2, 2, 0.25);
    let mut rng = ChaCha20Rng::seed_from_u64(17);

    let est = estimate_eta(&s, d, mu, q, &revealed, &star, zeta, &mut rng)?;
    println!("samples for ζ = {zeta}: {}", sample_count(zeta, &est.eta_low)?);
    println!(
        "η' = {} ≈ {:.4}, exact η = {}, η_low = {}",
        est.eta_prime(),
        to_f64(&est.eta_prime()),
        exact_eta(&s, d, mu, q, &revealed, &star)?,
        est.eta_low
    );
    let kept = (0..1000).filter(|_| preoutput_stage(&est, &mut rng)).count();
    println!("pre-output stage kept {kept} of 1000 runs");
    Ok(())
}

#[allow(dead_code)]
fn main() -> hibtdf::Result<()> {
    run_example()
}
