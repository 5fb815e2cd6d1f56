mod common;

use common::{random_markov, random_step, random_table, TOL};
use mimwave::measure::MeasureModel;
use mimwave::operators::apply_power;
use mimwave::stepfunc::{father, inner_product, StepFunction};
use mimwave::symbolic::IncidenceMatrix;
use mimwave::transform::{analyze, gram, residual};
use mimwave::wavelets::{markov_mothers, one_sided_basis, word_mothers, BasisElement, Descriptor};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn projected_energy(f: &StepFunction, span: &[StepFunction], mu: &MeasureModel) -> f64 {
    span.iter().map(|b| inner_product(f, b, mu).unwrap().powi(2)).sum()
}

fn three_symbol(seed: u64) -> MeasureModel {
    let a = IncidenceMatrix::new(&[vec![1, 1, 0], vec![1, 1, 1], vec![0, 1, 1]]).unwrap();
    random_markov(&mut ChaCha8Rng::seed_from_u64(seed), &a)
}

#[test]
fn markov_blocks_match_word_construction() {
    for mu in [MeasureModel::golden_mean(), three_symbol(4)] {
        for block in markov_mothers(&mu).unwrap() {
            let w = mimwave::symbolic::Word::letter(mu.incidence(), block.symbol).unwrap();
            let (_, general) = word_mothers(&mu, &w).unwrap();
            assert_eq!(general.len(), block.mothers.len());
            let span: Vec<StepFunction> = general.iter().map(|m| m.func.clone()).collect();
            for psi in &block.mothers {
                let e = projected_energy(&psi.func, &span, &mu);
                assert!((e - 1.0).abs() < TOL, "{e}");
            }
        }
    }
}

fn word_level(basis: &[BasisElement], len: usize) -> Vec<StepFunction> {
    basis
        .iter()
        .filter(|b| matches!(&b.descriptor, Descriptor::WordMother { word, .. } if word.len() == len))
        .map(|b| b.func.clone())
        .collect()
}

#[test]
fn dilated_mothers_span_the_word_levels() {
    for mu in [MeasureModel::golden_mean(), three_symbol(9)] {
        let n_sym = mu.n_symbols() as i64;
        let bound = 1;
        let basis = one_sided_basis(&mu, 2, bound).unwrap();
        let mothers: Vec<StepFunction> = markov_mothers(&mu)
            .unwrap()
            .into_iter()
            .flat_map(|b| b.mothers.into_iter().map(|m| m.func))
            .collect();
        for n in 1..=2i32 {
            let reach = (bound + 1) * n_sym.pow(n as u32);
            let dilates: Vec<StepFunction> = (-reach..=reach)
                .flat_map(|m| mothers.iter().map(move |psi| psi.translated(m)))
                .map(|f| apply_power(n, &f, &mu).unwrap())
                .filter(|g| !g.is_zero())
                .filter(|g| g.translate_range().is_some_and(|(lo, hi)| lo >= -bound && hi <= bound))
                .collect();
            let level = word_level(&basis, n as usize + 1);
            assert_eq!(dilates.len(), level.len());
            for g in &dilates {
                assert!((projected_energy(g, &level, &mu) - 1.0).abs() < TOL);
            }
            for w in &level {
                assert!((projected_energy(w, &dilates, &mu) - 1.0).abs() < TOL);
            }
        }
    }
}

#[test]
fn coarse_spaces_are_nested() {
    for mu in [MeasureModel::golden_mean(), three_symbol(2)] {
        let n_sym = mu.n_symbols();
        for n in 0..=2i32 {
            let fine: Vec<StepFunction> = (-12..=12)
                .flat_map(|m| (0..n_sym).map(move |j| (m, j)))
                .map(|(m, j)| apply_power(-n, &father(&mu, j).unwrap().translated(m), &mu).unwrap())
                .collect();
            for j in 0..n_sym {
                for m in -1..=1 {
                    let coarse = apply_power(-(n + 1), &father(&mu, j).unwrap().translated(m), &mu).unwrap();
                    let e = projected_energy(&coarse, &fine, &mu);
                    assert!((e - 1.0).abs() < TOL, "n={n} j={j} m={m}: {e}");
                }
            }
        }
    }
}

#[test]
fn parseval_on_complete_truncations() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let a = IncidenceMatrix::new(&[vec![1, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
    for mu in [MeasureModel::golden_mean(), random_markov(&mut rng, &a), random_table(&mut rng, &a, 4)] {
        let basis = one_sided_basis(&mu, 2, 1).unwrap();
        assert!(gram(&basis, &mu).unwrap().max_deviation < TOL);
        for _ in 0..5 {
            let f = random_step(&mut rng, &mu, 3, 1, 8);
            let c = analyze(&f, &basis, &mu).unwrap();
            let nf = inner_product(&f, &f, &mu).unwrap();
            assert!((c.energy() - nf).abs() < TOL * nf.max(1.0));
            assert!(residual(&f, &basis, &mu).unwrap() < TOL);
        }
    }
}

#[test]
fn coarse_truncation_leaves_a_residual() {
    let mu = MeasureModel::golden_mean();
    let basis = one_sided_basis(&mu, 0, 1).unwrap();
    let f = random_step(&mut ChaCha8Rng::seed_from_u64(5), &mu, 3, 1, 10);
    let nf = inner_product(&f, &f, &mu).unwrap();
    let c = analyze(&f, &basis, &mu).unwrap();
    let r = residual(&f, &basis, &mu).unwrap();
    assert!(c.energy() <= nf + TOL);
    assert!((r * r + c.energy() - nf).abs() < 1e-9);
}
