// Count the image of the function over all 256 inputs on the transparent backend with
// p = 11. Prefixes of the target are lossy; everything else is injective.

use hibtdf::auxgen::{aux_selective, partition};
use hibtdf::groups::TransparentSuite;
use hibtdf::hibtdf::{hf_mkg, hf_setup, HierId, Mode};
use hibtdf::lossylab::{image_size, lossiness};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> hibtdf::Result<()> {
    let s = TransparentSuite::new(11)?;
    let params = hf_setup(s.clone(), 2, 8, 2, Mode::Selective)?;
    let star = HierId::from_u64(&s, &[vec![1, 3], vec![1, 4]]);
    let aux = aux_selective(&s, &star, 2, 2)?;
    let (mpk, _) = hf_mkg(&params, &aux, &mut ChaCha20Rng::seed_from_u64(3))?;
    println!("ω = {:.3}", params.omega());
    for levels in [vec![vec![1, 3]], vec![vec![1, 3], vec![1, 4]], vec![vec![1, 5]], vec![vec![1, 3], vec![1, 9]]] {
        let id = HierId::from_u64(&s, &levels);
        let image = image_size(&params, &mpk, &id)?;
        println!(
            "{levels:?}: {:?}, image {image}, λ = {:.3}",
            partition(&s, &aux, &id)?.verdict,
            lossiness(8, image)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> hibtdf::Result<()> {
    run_example()
}
