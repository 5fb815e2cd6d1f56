//! A truncated one-sided basis: fathers at scale 0 plus mothers on every
//! admissible word up to a given length. Works for non-Markov tables too.

use mimwave::measure::{MeasureModel, TableMeasure};
use mimwave::stepfunc::{normalize, Atom};
use mimwave::symbolic::Word;
use mimwave::transform::{analyze, gram, residual};
use mimwave::wavelets::one_sided_basis;

pub fn run_example() -> mimwave::Result<()> {
    let gm = MeasureModel::golden_mean();
    let a = gm.incidence().clone();
    let table = TableMeasure::from_leaf_weights(&a, 4, {
        let mut k = 0u32;
        move |_| {
            k += 1;
            1.0 + 0.1 * f64::from(k % 5)
        }
    })?;
    let mu = MeasureModel::table(a.clone(), table)?;
    println!("table validates cleanly: {}", mu.validate().is_empty());

    let basis = one_sided_basis(&mu, 2, 1)?;
    println!("{} elements, Gram deviation {:.2e}", basis.len(), gram(&basis, &mu)?.max_deviation);

    let f = normalize(
        vec![
            (Atom::new(0, Word::parse(&a, "010")?), 1.0),
            (Atom::new(-1, Word::parse(&a, "1")?), -2.0),
            (Atom::new(1, Word::parse(&a, "00")?), 0.5),
        ],
        &mu,
    )?;
    let c = analyze(&f, &basis, &mu)?;
    let big: Vec<_> = c.entries.iter().filter(|e| e.value.abs() > 1e-12).collect();
    println!("{} nonzero coefficients, residual {:.2e}", big.len(), residual(&f, &basis, &mu)?);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
