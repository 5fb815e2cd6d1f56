//! Low-pass and high-pass filter matrices of a Markov measure, the operators
//! `S_H`, `S_{G_k}` on vectors of Laurent polynomials, and a checker for
//! their isometry and orthogonality relations.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{MarkovMeasure, MeasureModel};
use crate::operators::apply_u;
use crate::stepfunc::{father, StepFunction};
use crate::symbolic::IncidenceMatrix;
use crate::wavelets::{markov_mothers, OrthoMatrix};

/// Finitely supported `Σ_r c_r z^r`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(power: i64, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(power, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let mut p = Self::zero();
        for (r, c) in terms {
            p.add_term(r, c);
        }
        p
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, power: i64) -> Complex64 {
        self.coeffs.get(&power).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, power: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let e = self.coeffs.entry(power).or_default();
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&power);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&r, &c) in &other.coeffs {
            out.add_term(r, c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(&r, &c)| (r, s * c)))
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&r, &a) in &self.coeffs {
            for (&s, &b) in &other.coeffs {
                out.add_term(r + s, a * b);
            }
        }
        out
    }

    /// `p(z^n)`.
    pub fn dilate(&self, n: usize) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(&r, &c)| (r * n as i64, c)))
    }

    /// `(1/n) Σ_{w^n = z} p(w)`: keeps powers divisible by `n` and divides them.
    pub fn decimate(&self, n: usize) -> LaurentPoly {
        let n = n as i64;
        LaurentPoly::from_terms(
            self.coeffs
                .iter()
                .filter(|(&r, _)| r.rem_euclid(n) == 0)
                .map(|(&r, &c)| (r / n, c)),
        )
    }

    /// `conj(p(z))` on the unit circle: `Σ conj(c_r) z^{-r}`.
    pub fn conj_circle(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(&r, &c)| (-r, c.conj())))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().map(|(&r, &c)| c * z.powi(r as i32)).sum()
    }

    /// Largest `|r|` with nonzero coefficient.
    pub fn max_abs_power(&self) -> i64 {
        self.coeffs.keys().map(|r| r.abs()).max().unwrap_or(0)
    }
}

/// `N`-component (or `q − 1`-component) vector of Laurent polynomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentVector {
    pub comps: Vec<LaurentPoly>,
}

impl LaurentVector {
    pub fn zeros(n: usize) -> Self {
        LaurentVector { comps: vec![LaurentPoly::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Random coefficients, real and imaginary parts uniform in `[-1, 1]`,
    /// on powers `-degree..=degree`.
    pub fn random(rng: &mut impl Rng, n: usize, degree: i64) -> Self {
        let comps = (0..n)
            .map(|_| {
                LaurentPoly::from_terms((-degree..=degree).map(|r| {
                    (r, Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
                }))
            })
            .collect();
        LaurentVector { comps }
    }

    pub fn add(&self, other: &LaurentVector) -> LaurentVector {
        LaurentVector {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentVector) -> LaurentVector {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> LaurentVector {
        LaurentVector { comps: self.comps.iter().map(|p| p.scale(s)).collect() }
    }

    /// `Σ_k Σ_r a_{k,r} conj(b_{k,r})`, the `L²(T)^n` pairing.
    pub fn inner(&self, other: &LaurentVector) -> Complex64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| {
                a.coeffs
                    .iter()
                    .map(|(r, &c)| c * b.coeff(*r).conj())
                    .sum::<Complex64>()
            })
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    /// Largest coefficient modulus.
    pub fn sup(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|p| p.coeffs.values())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_power(&self) -> i64 {
        self.comps.iter().map(|p| p.max_abs_power()).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterKind {
    Lowpass,
    Highpass(usize),
}

/// Prefactor convention for `S_H` and its adjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `S_H f = Hᵗ(z) f(z^N)`, `S_H* g = (1/N) Σ_{w^N=z} H̄(w) g(w)`.
    Amended,
    /// `S_H f = √N Hᵗ(z) f(z^N)`, `S_H* g = (1/√N) Σ_{w^N=z} H̄(w) g(w)`.
    Paper,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amended" => Ok(Convention::Amended),
            "paper" => Ok(Convention::Paper),
            other => Err(Error::Input(format!("unknown convention {other:?}"))),
        }
    }
}

/// Rows × `N` matrix of Laurent polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterMatrix {
    pub kind: FilterKind,
    pub rows: Vec<Vec<LaurentPoly>>,
    pub n_symbols: usize,
}

impl FilterMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Multiplier applied by `S` (and its reciprocal times `1/N` by `S*`).
    fn prefactor(&self, conv: Convention) -> f64 {
        match (self.kind, conv) {
            (FilterKind::Lowpass, Convention::Paper) => (self.n_symbols as f64).sqrt(),
            _ => 1.0,
        }
    }
}

/// `H(z)`: row `k`, column `l` holds `√π_kl z^k`.
pub fn build_lowpass(m: &MarkovMeasure) -> FilterMatrix {
    let n = m.p.len();
    let rows = (0..n)
        .map(|k| {
            (0..n)
                .map(|l| LaurentPoly::monomial(k as i64, Complex64::new(m.pi[k][l].sqrt(), 0.0)))
                .collect()
        })
        .collect();
    FilterMatrix { kind: FilterKind::Lowpass, rows, n_symbols: n }
}

/// `G_k(z)`: row `j ≥ 1` of `M_k`, column `l` holds `A_kl c_l^{k,j} z^k`.
pub fn build_highpass(k: usize, mk: &OrthoMatrix, a: &IncidenceMatrix) -> Result<FilterMatrix> {
    let support: Vec<usize> = a.successors(k).collect();
    if support.len() != mk.size() {
        return Err(Error::Input(format!(
            "block matrix has size {}, symbol {k} has {} successors",
            mk.size(),
            support.len()
        )));
    }
    let n = a.size();
    let rows = (1..mk.size())
        .map(|j| {
            let mut row = vec![LaurentPoly::zero(); n];
            for (pos, &l) in support.iter().enumerate() {
                row[l] = LaurentPoly::monomial(k as i64, Complex64::new(mk.row(j)[pos], 0.0));
            }
            row
        })
        .collect();
    Ok(FilterMatrix { kind: FilterKind::Highpass(k), rows, n_symbols: n })
}

/// `S f (z) = c · Fᵗ(z) f(z^N)`; `f` has one component per filter row.
pub fn apply_s(filter: &FilterMatrix, f: &LaurentVector, conv: Convention) -> Result<LaurentVector> {
    if f.len() != filter.n_rows() {
        return Err(Error::Input(format!(
            "filter has {} rows, vector has {} components",
            filter.n_rows(),
            f.len()
        )));
    }
    let n = filter.n_symbols;
    let c = Complex64::new(filter.prefactor(conv), 0.0);
    let dilated: Vec<LaurentPoly> = f.comps.iter().map(|p| p.dilate(n)).collect();
    let comps = (0..n)
        .map(|l| {
            filter
                .rows
                .iter()
                .zip(&dilated)
                .fold(LaurentPoly::zero(), |acc, (row, fk)| acc.add(&row[l].mul(fk)))
                .scale(c)
        })
        .collect();
    Ok(LaurentVector { comps })
}

/// `S* g (z) = (c/N) Σ_{w^N=z} F̄(w) g(w)`, computed by exact decimation.
pub fn apply_s_adjoint(filter: &FilterMatrix, g: &LaurentVector, conv: Convention) -> Result<LaurentVector> {
    let n = filter.n_symbols;
    if g.len() != n {
        return Err(Error::Input(format!("expected {n} components, got {}", g.len())));
    }
    let c = Complex64::new(filter.prefactor(conv), 0.0);
    let comps = filter
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&g.comps)
                .fold(LaurentPoly::zero(), |acc, (h, gl)| acc.add(&h.conj_circle().mul(gl)))
                .decimate(n)
                .scale(c)
        })
        .collect();
    Ok(LaurentVector { comps })
}

/// `Σ_l Σ_r Re(c_r) T^r φ_l` for one filter row: the argument of `U` in
/// `φ = U H(T) φ` and `ψ_k = U G_k(T) φ`.
pub fn row_on_fathers(row: &[LaurentPoly], mu: &MeasureModel) -> Result<StepFunction> {
    let mut parts = Vec::new();
    for (l, p) in row.iter().enumerate() {
        for (&r, c) in p.coeffs() {
            if c.im.abs() > 1e-14 {
                return Err(Error::Input("filter entry has a complex coefficient".into()));
            }
            parts.push((c.re, father(mu, l)?.translated(r)));
        }
    }
    StepFunction::linear_combination(parts.iter().map(|(c, f)| (*c, f)), mu)
}

/// `U F(T) φ`, one step function per filter row.
pub fn synthesize_from_filter(filter: &FilterMatrix, mu: &MeasureModel) -> Result<Vec<StepFunction>> {
    filter
        .rows
        .iter()
        .map(|row| apply_u(&row_on_fathers(row, mu)?, mu))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResult {
    pub name: String,
    pub max_error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub convention: Convention,
    pub degree: i64,
    pub trials: usize,
    pub seed: u64,
    pub relations: Vec<RelationResult>,
    /// Least-squares `c` in `S_H* S_H f ≈ c f`.
    pub lowpass_factor: f64,
    pub adjointness_error: f64,
    /// Largest `‖(S_H S_H* + Σ_k S_{G_k} S_{G_k}* − I) f‖ / ‖f‖` seen.
    pub completeness_defect: f64,
    /// Disagreement between the coefficient algebra and direct evaluation
    /// at 64 points of the unit circle.
    pub sampled_crosscheck: f64,
    pub tolerance: f64,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed)
    }

    pub fn max_error(&self) -> f64 {
        self.relations.iter().map(|r| r.max_error).fold(0.0, f64::max)
    }
}

pub const RELATION_TOL: f64 = 1e-10;

struct Tracker {
    name: String,
    worst: f64,
}

/// Evaluates the four orthogonality relations on `trials` random vectors of the given
/// degree, plus adjointness, the completeness defect and a sampled
/// cross-check.
pub fn relation_check(
    mu: &MeasureModel,
    degree: i64,
    trials: usize,
    conv: Convention,
    seed: u64,
) -> Result<RelationReport> {
    let m = mu.as_markov().ok_or(Error::NotMarkov)?;
    let a = mu.incidence();
    let n = a.size();
    let h = build_lowpass(m);
    let gs: Vec<FilterMatrix> = markov_mothers(mu)?
        .iter()
        .map(|b| build_highpass(b.symbol, &b.matrix, a))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|g| g.n_rows() > 0)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r1 = Tracker { name: "S_H* S_H = I".into(), worst: 0.0 };
    let mut r2 = Tracker { name: "S_Gk* S_Gk = I".into(), worst: 0.0 };
    let mut r3 = Tracker { name: "S_H* S_Gk = 0 and S_Gk* S_H = 0".into(), worst: 0.0 };
    let mut r4 = Tracker { name: "S_Gi* S_Gj = 0 (i != j)".into(), worst: 0.0 };
    let mut adjointness: f64 = 0.0;
    let mut completeness: f64 = 0.0;
    let mut factor_num = 0.0;
    let mut factor_den = 0.0;
    let mut sampled: f64 = 0.0;
    for _ in 0..trials {
        let f = LaurentVector::random(&mut rng, n, degree);
        let g = LaurentVector::random(&mut rng, n, degree * n as i64 + n as i64);
        let shf = apply_s(&h, &f, conv)?;
        let back = apply_s_adjoint(&h, &shf, conv)?;
        r1.worst = r1.worst.max(back.sub(&f).sup());
        let inner = back.inner(&f);
        factor_num += inner.re;
        factor_den += f.inner(&f).re;
        adjointness = adjointness.max((shf.inner(&g) - f.inner(&apply_s_adjoint(&h, &g, conv)?)).norm());
        sampled = sampled.max(sampled_error(&h, &f, &g, conv)?);

        let mut proj = apply_s(&h, &apply_s_adjoint(&h, &g, conv)?, conv)?;
        for (i, gi) in gs.iter().enumerate() {
            let fi = LaurentVector::random(&mut rng, gi.n_rows(), degree);
            let sgf = apply_s(gi, &fi, conv)?;
            r2.worst = r2.worst.max(apply_s_adjoint(gi, &sgf, conv)?.sub(&fi).sup());
            r3.worst = r3.worst.max(apply_s_adjoint(&h, &sgf, conv)?.sup());
            r3.worst = r3.worst.max(apply_s_adjoint(gi, &shf, conv)?.sup());
            for (j, gj) in gs.iter().enumerate() {
                if i != j {
                    r4.worst = r4.worst.max(apply_s_adjoint(gj, &sgf, conv)?.sup());
                }
            }
            adjointness = adjointness
                .max((sgf.inner(&g) - fi.inner(&apply_s_adjoint(gi, &g, conv)?)).norm());
            sampled = sampled.max(sampled_error(gi, &fi, &g, conv)?);
            proj = proj.add(&apply_s(gi, &apply_s_adjoint(gi, &g, conv)?, conv)?);
        }
        completeness = completeness.max(proj.sub(&g).norm() / g.norm());
    }
    let relations = [r1, r2, r3, r4]
        .into_iter()
        .map(|t| RelationResult {
            passed: t.worst <= RELATION_TOL,
            name: t.name,
            max_error: t.worst,
        })
        .collect();
    Ok(RelationReport {
        convention: conv,
        degree,
        trials,
        seed,
        relations,
        lowpass_factor: if factor_den > 0.0 { factor_num / factor_den } else { 0.0 },
        adjointness_error: adjointness,
        completeness_defect: completeness,
        sampled_crosscheck: sampled,
        tolerance: RELATION_TOL,
    })
}

/// Compares `S f` and `S* g` against direct evaluation of the defining
/// formulas (including the explicit sum over `N`-th roots) at 64 points.
fn sampled_error(
    filter: &FilterMatrix,
    f: &LaurentVector,
    g: &LaurentVector,
    conv: Convention,
) -> Result<f64> {
    let n = filter.n_symbols;
    let c = filter.prefactor(conv);
    let sf = apply_s(filter, f, conv)?;
    let sg = apply_s_adjoint(filter, g, conv)?;
    let mut worst: f64 = 0.0;
    for t in 0..64 {
        let z = Complex64::from_polar(1.0, 2.0 * PI * (t as f64 + 0.5) / 64.0);
        let zn = z.powi(n as i32);
        for l in 0..n {
            let direct: Complex64 = filter
                .rows
                .iter()
                .zip(&f.comps)
                .map(|(row, fk)| row[l].eval(z) * fk.eval(zn))
                .sum::<Complex64>()
                * c;
            worst = worst.max((direct - sf.comps[l].eval(z)).norm());
        }
        let roots: Vec<Complex64> = (0..n)
            .map(|r| Complex64::from_polar(1.0, (z.arg() + 2.0 * PI * r as f64) / n as f64))
            .collect();
        for (k, row) in filter.rows.iter().enumerate() {
            let direct: Complex64 = roots
                .iter()
                .map(|&w| {
                    row.iter()
                        .zip(&g.comps)
                        .map(|(h, gl)| h.eval(w).conj() * gl.eval(w))
                        .sum::<Complex64>()
                })
                .sum::<Complex64>()
                * (c / n as f64);
            worst = worst.max((direct - sg.comps[k].eval(z)).norm());
        }
    }
    Ok(worst)
}
