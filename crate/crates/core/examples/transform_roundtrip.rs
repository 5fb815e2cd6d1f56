//! Analysis, synthesis and JSON round trip of coefficients for a random
//! step function on the Cantor example.

use mimwave::config::SystemSpec;
use mimwave::stepfunc::{distance, normalize, Atom};
use mimwave::symbolic::enumerate_words;
use mimwave::transform::{analyze, synthesize, CoefficientVector};
use mimwave::wavelets::one_sided_basis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> mimwave::Result<()> {
    let spec = SystemSpec::cantor3();
    let mu = &spec.model;
    let words = enumerate_words(mu.incidence(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let raw: Vec<(Atom, f64)> = (0..6)
        .map(|_| {
            let w = words[rng.gen_range(0..words.len())].clone();
            (Atom::new(rng.gen_range(-1..=1), w), rng.gen_range(-1.0..1.0))
        })
        .collect();
    let f = normalize(raw, mu)?;

    let basis = one_sided_basis(mu, 1, 1)?;
    let c = analyze(&f, &basis, mu)?;
    let json = serde_json::to_string(&c).map_err(|e| mimwave::Error::Input(e.to_string()))?;
    let back: CoefficientVector = serde_json::from_str(&json).map_err(|e| mimwave::Error::Input(e.to_string()))?;
    let g = synthesize(&back, &basis, mu)?;
    println!("{} coefficients, {} bytes of JSON", c.entries.len(), json.len());
    println!("|f - synth(analyze(f))| = {:.2e}", distance(&f, &g, mu)?);
    println!("energy {:.12} vs |f|^2 {:.12}", c.energy(), mimwave::stepfunc::inner_product(&f, &f, mu)?);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
