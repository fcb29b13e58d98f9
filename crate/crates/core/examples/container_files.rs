// Write keys and outputs to disk in the container format and read them back.

use hibtdf::auxgen::aux_injective;
use hibtdf::container::{
    mpk_from_container, mpk_to_container, output_from_container, output_to_container,
    sk_from_container, sk_to_container, Container, Kind,
};
use hibtdf::groups::{Bls12Suite, GroupSuite};
use hibtdf::hibtdf::{hf_eval, hf_inv, hf_kg, hf_mkg, hf_setup, HierId, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn run_example() -> hibtdf::Result<()> {
    let s = Bls12Suite::new();
    let params = hf_setup(s.clone(), 1, 4, 2, Mode::Selective)?;
    let mut rng = ChaCha20Rng::seed_from_u64(29);
    let (mpk, msk) = hf_mkg(&params, &aux_injective(&s, 1, 2), &mut rng)?;
    let id = HierId::new(vec![vec![s.scalar_one(), s.scalar_from_u64(3)]]);
    let sk = hf_kg(&params, &msk, &id, &mut rng)?;
    let y = hf_eval(&params, &mpk, &id, &[true, false, false, true])?;

    let dir = std::env::temp_dir().join(format!("hibtdf-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| hibtdf::Error::Container(e.to_string()))?;
    let io = |e: std::io::Error| hibtdf::Error::Container(e.to_string());
    for (name, c) in [
        ("mpk.bin", mpk_to_container(&params, &mpk, None)),
        ("sk.bin", sk_to_container(&params, &sk)),
        ("out.bin", output_to_container(&params, &y)),
    ] {
        let bytes = c.encode();
        println!("{name}: {} bytes, {} elements", bytes.len(), c.elements.len());
        std::fs::write(dir.join(name), bytes).map_err(io)?;
    }

    let load = |name: &str, kind| -> hibtdf::Result<Container> {
        Container::decode_kind(&std::fs::read(dir.join(name)).map_err(io)?, kind)
    };
    let (mpk2, _) = mpk_from_container(&params, &load("mpk.bin", Kind::Mpk)?)?;
    let sk2 = sk_from_container(&params, &load("sk.bin", Kind::Sk)?)?;
    let y2 = output_from_container(&params, &load("out.bin", Kind::HfOutput)?)?;
    println!("inverted from files: {:?}", hf_inv(&params, &mpk2, &id, &sk2, &y2)?);
    println!("reading the key as an mpk: {:?}", load("sk.bin", Kind::Mpk).err());
    std::fs::remove_dir_all(&dir).map_err(io)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> hibtdf::Result<()> {
    run_example()
}
