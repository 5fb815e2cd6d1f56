//! The two-sided Markov basis: dilates `U^n T^m ψ`, co-dilates
//! `(U*)^n T^m ψ`, and the fathers killed by `U`. Also lists the
//! translates on which `U^n` acts nontrivially.

use mimwave::measure::MeasureModel;
use mimwave::transform::gram;
use mimwave::wavelets::{d_set, two_sided_basis_markov, Descriptor};

pub fn run_example() -> mimwave::Result<()> {
    let mu = MeasureModel::golden_mean();
    let basis = two_sided_basis_markov(&mu, 1, 3)?;
    let (mut pos, mut neg, mut fat) = (0, 0, 0);
    for b in &basis {
        match b.descriptor {
            Descriptor::MotherPos { .. } => pos += 1,
            Descriptor::MotherNeg { .. } => neg += 1,
            _ => fat += 1,
        }
    }
    println!("{} elements: {pos} dilates, {neg} co-dilates, {fat} fathers", basis.len());
    println!("Gram deviation {:.2e}", gram(&basis, &mu)?.max_deviation);
    for n in 1..=3 {
        for k in 0..mu.n_symbols() {
            println!("D({n}, {k}) on -4..=4: {:?}", d_set(&mu, n, k, -4..=4)?);
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
