//! Translation and scaling on step functions: `TU = UT^N`, `UU* = id`,
//! the failure of `U*U = id` for a non-full incidence matrix, and the
//! agreement of `U^(n)` with iterated `U`.

use mimwave::measure::MeasureModel;
use mimwave::operators::{apply_t, apply_u, apply_u_adjoint, letter_atoms, power_equivalence};
use mimwave::stepfunc::{distance, father};

pub fn run_example() -> mimwave::Result<()> {
    let mu = MeasureModel::golden_mean();
    let n = mu.n_symbols() as i64;
    let phi0 = father(&mu, 0)?;
    let phi1 = father(&mu, 1)?;

    let lhs = apply_t(&apply_u(&phi0, &mu)?, 1);
    let rhs = apply_u(&apply_t(&phi0, n), &mu)?;
    println!("|TU phi_0 - UT^N phi_0| = {:.2e}", distance(&lhs, &rhs, &mu)?);

    let back = apply_u(&apply_u_adjoint(&phi1, &mu)?, &mu)?;
    println!("|UU* phi_1 - phi_1| = {:.2e}", distance(&back, &phi1, &mu)?);

    // [1] cannot follow [1], so U kills T^3 phi_1 and U*U loses it.
    let f = apply_t(&phi1, 3);
    let round = apply_u_adjoint(&apply_u(&f, &mu)?, &mu)?;
    println!("U T^3 phi_1 is zero: {}", apply_u(&f, &mu)?.is_zero());
    println!("|U*U T^3 phi_1 - T^3 phi_1| = {:.3}", distance(&round, &f, &mu)?);

    let atoms = letter_atoms(mu.incidence(), 3);
    for s in [-3, -2, 2, 3] {
        let r = power_equivalence(&mu, s, &atoms)?;
        println!("U^({s}) vs iterated: max discrepancy {:.2e} over {} atoms", r.max_discrepancy, r.samples);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
