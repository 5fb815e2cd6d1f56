//! Point evaluation of `U^(n) f` on the golden-mean limit set, compared
//! against the step-function calculus.

use mimwave::config::SystemSpec;
use mimwave::operators::{apply_scaling, pointwise_scaling};
use mimwave::stepfunc::{evaluate, father};
use mimwave::GOLDEN_MEAN;

pub fn run_example() -> mimwave::Result<()> {
    let spec = SystemSpec::golden_mean();
    let geom = spec.geometry()?;
    let mu = &spec.model;
    let b = GOLDEN_MEAN;
    let id = |x: f64| x;
    println!("x, U(id)(x), closed form");
    for i in 0..8 {
        let x = (i as f64 + 0.5) / 8.0;
        let got = pointwise_scaling(geom, mu, 1, &id, x)?;
        let w = if x < 1.0 / (b * b) {
            b.sqrt()
        } else if x < 1.0 / b {
            1.0
        } else {
            b
        };
        println!("{x:.4}, {got:.10}, {:.10}", w * b * x);
    }

    let phi0 = father(mu, 0)?;
    let u2 = apply_scaling(2, &phi0, mu)?;
    let phi_fn = |x: f64| evaluate(&phi0, x, geom);
    let mut e: f64 = 0.0;
    for i in 0..64 {
        let x = (i as f64 + 0.5) / 64.0;
        e = e.max((pointwise_scaling(geom, mu, 2, &phi_fn, x)? - evaluate(&u2, x, geom)).abs());
    }
    println!("U^(2) phi_0: pointwise vs symbolic, max gap {e:.1e}");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
