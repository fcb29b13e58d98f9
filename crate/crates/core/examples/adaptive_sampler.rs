// Draw adaptive auxiliary inputs and see which identities come out lossy.

use hibtdf::auxgen::{aux_adaptive, partition};
use hibtdf::groups::TransparentSuite;
use hibtdf::hibtdf::HierId;
use hibtdf::lossylab::eta_lower_bound;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> hibtdf::Result<()> {
    let s = TransparentSuite::new(1_000_003)?;
    let (d, mu, q) = (1, 3, 1);
    let mut rng = ChaCha20Rng::seed_from_u64(23);
    let ids: Vec<HierId<TransparentSuite>> = (0..4u64)
        .map(|t| HierId::from_u64(&s, &[vec![1, t & 1, t >> 1]]))
        .collect();
    let mut lossy = vec![0u32; ids.len()];
    let draws = 2000;
    for _ in 0..draws {
        let aux = aux_adaptive(&s, d, mu, q, &mut rng)?;
        for (count, id) in lossy.iter_mut().zip(&ids) {
            if partition(&s, &aux, id)?.is_lossy() {
                *count += 1;
            }
        }
    }
    for (id, count) in ids.iter().zip(&lossy) {
        println!("{:?}: lossy in {count}/{draws} draws", id.levels[0]);
    }
    println!("η_low(q = {q}, μ = {mu}, d = {d}) = {}", eta_lower_bound(q, mu, d));
    Ok(())
}

#[allow(dead_code)]
fn main() -> hibtdf::Result<()> {
    run_example()
}
