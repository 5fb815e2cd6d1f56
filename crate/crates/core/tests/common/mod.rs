#![allow(dead_code)]

use mimwave::measure::{MarkovMeasure, MeasureModel, TableMeasure};
use mimwave::operators::{apply_scaling, apply_t, apply_u, apply_u_adjoint};
use mimwave::stepfunc::{distance, father, inner_product, normalize, Atom, StepFunction};
use mimwave::symbolic::{block_size, enumerate_words, IncidenceMatrix, Word};
use rand::Rng;

pub const TOL: f64 = 1e-10;

/// Random incidence matrix with no dead rows or columns.
pub fn random_incidence(rng: &mut impl Rng, n: usize) -> IncidenceMatrix {
    loop {
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_bool(0.7) as u8).collect())
            .collect();
        if let Ok(a) = IncidenceMatrix::new(&rows) {
            return a;
        }
    }
}

/// Random Markov measure respecting the zero pattern of `a`.
pub fn random_markov(rng: &mut impl Rng, a: &IncidenceMatrix) -> MeasureModel {
    let n = a.size();
    let raw_p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = raw_p.iter().sum();
    let p = raw_p.iter().map(|x| x / total).collect();
    let pi = (0..n)
        .map(|i| {
            let row: Vec<f64> = (0..n)
                .map(|j| if a.allows(i, j) { rng.gen_range(0.2..1.0) } else { 0.0 })
                .collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|x| x / s).collect()
        })
        .collect();
    MeasureModel::markov(a.clone(), MarkovMeasure::new(p, pi)).unwrap()
}

/// Random additive table that is generically not Markov.
pub fn random_table(rng: &mut impl Rng, a: &IncidenceMatrix, depth: usize) -> MeasureModel {
    let t = TableMeasure::from_leaf_weights(a, depth, |_| rng.gen_range(0.2..1.0)).unwrap();
    MeasureModel::table(a.clone(), t).unwrap()
}

/// The golden-mean table to depth 3 with `ν[001] += δ`, `ν[000] -= δ`.
pub fn perturbed_golden(delta: f64) -> MeasureModel {
    let mu = MeasureModel::golden_mean();
    let a = mu.incidence().clone();
    let mut t = TableMeasure::generate(&mu, 3).unwrap();
    let w001 = Word::parse(&a, "001").unwrap();
    let w000 = Word::parse(&a, "000").unwrap();
    t.set(w001.clone(), t.get(&w001).unwrap() + delta).unwrap();
    t.set(w000.clone(), t.get(&w000).unwrap() - delta).unwrap();
    MeasureModel::table(a, t).unwrap()
}

pub fn atoms_up_to(a: &IncidenceMatrix, depth: usize, bound: i64) -> Vec<Atom> {
    let words: Vec<Word> = (1..=depth).flat_map(|d| enumerate_words(a, d)).collect();
    (-bound..=bound)
        .flat_map(|m| words.iter().map(move |w| Atom::new(m, w.clone())))
        .collect()
}

pub fn random_step(rng: &mut impl Rng, mu: &MeasureModel, depth: usize, bound: i64, terms: usize) -> StepFunction {
    let atoms = atoms_up_to(mu.incidence(), depth, bound);
    let raw: Vec<(Atom, f64)> = (0..terms)
        .map(|_| (atoms[rng.gen_range(0..atoms.len())].clone(), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(raw, mu).unwrap()
}

pub fn unit(a: &Atom) -> StepFunction {
    StepFunction::atom(a.clone(), 1.0)
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub error: f64,
}

/// Operator identities for `mu` on atoms of depth ≤ 3, `|k| ≤ 4`, `|n| ≤ 3`.
/// Every entry's `error` must be ≤ [`TOL`]. The `U*U` item reports, for
/// non-full `A`, the distance from the expected witness gap instead.
pub fn identity_suite(mu: &MeasureModel) -> Vec<Check> {
    let a = mu.incidence();
    let n_sym = a.size();
    let atoms = atoms_up_to(a, 3, 4);
    let fathers: Vec<StepFunction> = (0..n_sym).map(|j| father(mu, j).unwrap()).collect();
    let nu = |s: &[usize]| mu.cylinder_measure(&Word::new(a, s.to_vec()).unwrap()).unwrap();
    let mut out = Vec::new();
    let mut worst = |name, e: f64| out.push(Check { name, error: e });

    // TU = U T^N on atoms
    let mut e: f64 = 0.0;
    for at in &atoms {
        let f = unit(at);
        let lhs = apply_t(&apply_u(&f, mu).unwrap(), 1);
        let rhs = apply_u(&apply_t(&f, n_sym as i64), mu).unwrap();
        e = e.max(distance(&lhs, &rhs, mu).unwrap());
    }
    worst("TU = UT^N", e);

    // φ_i = U Σ_j √π_ij T^i φ_j  and the U^(1) form with ν ratios
    let mut e: f64 = 0.0;
    for i in 0..n_sym {
        let parts: Vec<(f64, StepFunction)> = a
            .successors(i)
            .map(|j| ((nu(&[i, j]) / nu(&[i])).sqrt(), fathers[j].translated(i as i64)))
            .collect();
        let inner = StepFunction::linear_combination(parts.iter().map(|(c, f)| (*c, f)), mu).unwrap();
        e = e.max(distance(&apply_u(&inner, mu).unwrap(), &fathers[i], mu).unwrap());
        let via_scaling = apply_scaling(1, &inner, mu).unwrap();
        e = e.max(distance(&via_scaling, &fathers[i], mu).unwrap());
    }
    worst("phi_i = U sum_j sqrt(pi_ij) T^i phi_j", e);

    // ⟨T^kφ_i, T^lφ_j⟩ = δ
    let mut e: f64 = 0.0;
    let translates: Vec<(i64, usize, StepFunction)> = (-4..=4)
        .flat_map(|k| (0..n_sym).map(move |i| (k, i)))
        .map(|(k, i)| (k, i, fathers[i].translated(k)))
        .collect();
    for (k, i, f) in &translates {
        for (l, j, g) in &translates {
            let want = if (k, i) == (l, j) { 1.0 } else { 0.0 };
            e = e.max((inner_product(f, g, mu).unwrap() - want).abs());
        }
    }
    worst("<T^k phi_i, T^l phi_j> = delta", e);

    // UU* = id
    let mut e: f64 = 0.0;
    for at in &atoms {
        let f = unit(at);
        let g = apply_u(&apply_u_adjoint(&f, mu).unwrap(), mu).unwrap();
        e = e.max(distance(&f, &g, mu).unwrap());
    }
    worst("UU* = id", e);

    // U^(n) relations, n = 1..3
    let mut e1: f64 = 0.0;
    let mut e2: f64 = 0.0;
    let mut e4: f64 = 0.0;
    let mut e5: f64 = 0.0;
    let mut e6: f64 = 0.0;
    for n in 1..=3i32 {
        let big = block_size(n_sym, n as usize);
        for at in &atoms {
            let f = unit(at);
            let lhs = apply_t(&apply_scaling(n, &f, mu).unwrap(), 1);
            let rhs = apply_scaling(n, &apply_t(&f, big), mu).unwrap();
            e1 = e1.max(distance(&lhs, &rhs, mu).unwrap());
            let back = apply_scaling(n, &apply_scaling(-n, &f, mu).unwrap(), mu).unwrap();
            e5 = e5.max(distance(&back, &f, mu).unwrap());
        }
        for phi in &fathers {
            let lhs = apply_scaling(-n, &apply_t(phi, 1), mu).unwrap();
            let rhs = apply_t(&apply_scaling(-n, phi, mu).unwrap(), big);
            e2 = e2.max(distance(&lhs, &rhs, mu).unwrap());
        }
        for (_, _, f) in &translates {
            let up = apply_scaling(n, f, mu).unwrap();
            if !up.is_zero() {
                let back = apply_scaling(-n, &up, mu).unwrap();
                e6 = e6.max(distance(&back, f, mu).unwrap());
            }
        }
        for s in [n, -n] {
            let imgs: Vec<StepFunction> = translates
                .iter()
                .map(|(_, _, f)| apply_scaling(s, f, mu).unwrap())
                .filter(|g| !g.is_zero())
                .collect();
            for (x, f) in imgs.iter().enumerate() {
                for (y, g) in imgs.iter().enumerate() {
                    let want = if x == y { 1.0 } else { 0.0 };
                    e4 = e4.max((inner_product(f, g, mu).unwrap() - want).abs());
                }
            }
        }
    }
    worst("T U^(n) = U^(n) T^(N^n)", e1);
    worst("U^(-n) T phi_j = T^(N^n) U^(-n) phi_j", e2);
    worst("<U^(n) T^k phi_i, U^(n) T^l phi_j> = delta", e4);
    worst("U^(n) U^(-n) = id", e5);
    worst("U^(-n) U^(n) T^k phi_j = T^k phi_j", e6);
    out
}

/// Largest `‖U*U f − f‖` over depth-≤3 atoms with `|k| ≤ 4`, and the atom
/// attaining it.
pub fn adjoint_defect(mu: &MeasureModel) -> (f64, Option<Atom>) {
    let mut best = (0.0, None);
    for at in atoms_up_to(mu.incidence(), 3, 4) {
        let f = unit(&at);
        let g = apply_u_adjoint(&apply_u(&f, mu).unwrap(), mu).unwrap();
        let d = distance(&f, &g, mu).unwrap();
        if d > best.0 {
            best = (d, Some(at));
        }
    }
    best
}
