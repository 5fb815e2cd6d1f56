//! The golden-mean Markov measure, its father functions and its single
//! mother wavelet.

use mimwave::measure::MeasureModel;
use mimwave::stepfunc::{father, inner_product};
use mimwave::wavelets::markov_mothers;

pub fn run_example() -> mimwave::Result<()> {
    let mu = MeasureModel::golden_mean();
    for j in 0..mu.n_symbols() {
        let phi = father(&mu, j)?;
        println!("phi_{j} = {}", render(&phi));
    }
    for block in markov_mothers(&mu)? {
        println!("block {} on successors {:?}", block.symbol, block.support);
        for row in block.matrix.rows() {
            println!("  M row {row:?}");
        }
        for psi in &block.mothers {
            let n2 = inner_product(&psi.func, &psi.func, &mu)?;
            let mean = inner_product(&psi.func, &father(&mu, block.symbol)?, &mu)?;
            println!("  psi^({},{}) = {}  |psi|^2 = {n2:.3e}  <psi,phi> = {mean:.1e}", psi.word, psi.index, render(&psi.func));
        }
    }
    Ok(())
}

fn render(f: &mimwave::stepfunc::StepFunction) -> String {
    f.iter()
        .map(|(a, c)| format!("{c:+.10}*1{a}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
