//! Deciding whether a cylinder table comes from a Markov measure, and
//! recovering `(p, Π)` when it does.

use mimwave::measure::{markov_consistency, MarkovVerdict, MeasureModel, TableMeasure};
use mimwave::symbolic::Word;

pub fn run_example() -> mimwave::Result<()> {
    let mu = MeasureModel::golden_mean();
    let a = mu.incidence().clone();
    let table = TableMeasure::generate(&mu, 4)?;
    match markov_consistency(&a, &table)? {
        MarkovVerdict::Markov(m) => println!("depth-4 table is Markov: p = {:?}, Pi = {:?}", m.p, m.pi),
        MarkovVerdict::NotMarkov(w) => println!("unexpected witness {w:?}"),
    }

    let mut bent = TableMeasure::generate(&mu, 3)?;
    let delta = 1e-3;
    for (word, sign) in [("001", 1.0), ("000", -1.0)] {
        let w = Word::parse(&a, word)?;
        let v = bent.get(&w).unwrap_or(0.0);
        bent.set(w, v + sign * delta)?;
    }
    let model = MeasureModel::table(a.clone(), bent.clone())?;
    println!("perturbed table violations: {}", model.validate().len());
    match markov_consistency(&a, &bent)? {
        MarkovVerdict::Markov(_) => println!("perturbation went unnoticed"),
        MarkovVerdict::NotMarkov(w) => println!(
            "not Markov: k = {}, omega = {}, j = {}, nu[k omega j] = {:.6} vs {:.6}",
            w.k, w.omega, w.j, w.lhs, w.rhs
        ),
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
