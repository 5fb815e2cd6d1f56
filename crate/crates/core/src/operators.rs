//! Translation `T`, the scaling family `U^(n)` (`n ∈ Z`) acting on atoms in
//! closed form, and affine branch geometry for point evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MeasureModel;
use crate::stepfunc::{distance, normalize, Atom, StepFunction};
use crate::symbolic::{block_size, decompose_translate, word_offset, IncidenceMatrix, Word};

/// `T^k f = f(· − k)`.
pub fn apply_t(f: &StepFunction, k: i64) -> StepFunction {
    f.translated(k)
}

/// Image of one atom under `U^(n)`: a finite list of weighted atoms,
/// possibly empty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScalingResult {
    pub terms: Vec<(Atom, f64)>,
}

impl ScalingResult {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `U^(n)` applied to `1_[σ](· − m)`.
pub fn apply_scaling_atom(n: i32, atom: &Atom, mu: &MeasureModel) -> Result<ScalingResult> {
    let a = mu.incidence();
    let big_n = a.size();
    let sigma = &atom.word;
    let m = atom.translate;
    let nu = |w: &Word| mu.cylinder_measure(w);
    let mut terms = Vec::new();
    if n == 0 {
        terms.push((atom.clone(), 1.0));
    } else if n > 0 {
        let s = n as usize;
        let Some(dec) = decompose_translate(m, s, a) else {
            return Ok(ScalingResult::default());
        };
        let Some(word) = dec.word.concat(a, sigma) else {
            return Ok(ScalingResult::default());
        };
        mu.check_depth(word.len())?;
        let head = Word::from_vec_unchecked(vec![sigma.first()]);
        let joined = dec.word.extend(a, sigma.first()).expect("junction checked");
        let c = (nu(&head)? / nu(&joined)?).sqrt();
        terms.push((Atom::new(dec.block, word), c));
    } else {
        let s = n.unsigned_abs() as usize;
        let shift = block_size(big_n, s) * m;
        if sigma.len() > s {
            let omega = sigma.prefix(s);
            let rest = sigma.suffix_from(s);
            let rest_head = Word::from_vec_unchecked(vec![rest.first()]);
            let joined = sigma.prefix(s + 1);
            let c = (nu(&joined)? / nu(&rest_head)?).sqrt();
            terms.push((Atom::new(word_offset(&omega, big_n) + shift, rest), c));
        } else {
            mu.check_depth(s + 1)?;
            for omega in sigma.extensions(a, s) {
                let offset = word_offset(&omega, big_n) + shift;
                for j in a.successors(omega.last()) {
                    let joined = omega.extend(a, j).expect("successor");
                    let letter = Word::from_vec_unchecked(vec![j]);
                    let c = (nu(&joined)? / nu(&letter)?).sqrt();
                    terms.push((Atom::new(offset, letter), c));
                }
            }
        }
    }
    Ok(ScalingResult { terms })
}

/// `U^(n) f`, extended linearly and normalized.
pub fn apply_scaling(n: i32, f: &StepFunction, mu: &MeasureModel) -> Result<StepFunction> {
    let mut raw = Vec::new();
    for (atom, c) in f.iter() {
        for (image, w) in apply_scaling_atom(n, atom, mu)?.terms {
            raw.push((image, c * w));
        }
    }
    normalize(raw, mu)
}

/// `U = U^(1)`.
pub fn apply_u(f: &StepFunction, mu: &MeasureModel) -> Result<StepFunction> {
    apply_scaling(1, f, mu)
}

/// `U* = U^(-1)`.
pub fn apply_u_adjoint(f: &StepFunction, mu: &MeasureModel) -> Result<StepFunction> {
    apply_scaling(-1, f, mu)
}

/// `n`-fold application of `U^(±1)`; `n` may be negative.
pub fn apply_power(n: i32, f: &StepFunction, mu: &MeasureModel) -> Result<StepFunction> {
    let step = n.signum();
    let mut g = f.clone();
    for _ in 0..n.unsigned_abs() {
        g = apply_scaling(step, &g, mu)?;
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerEquivalenceReport {
    pub scale: i32,
    pub samples: usize,
    pub max_discrepancy: f64,
    pub worst: Option<Atom>,
}

/// Compares `U^(n)` with the `n`-fold product of `U^(±1)` on each sample,
/// reporting the largest `L²` difference.
pub fn power_equivalence(
    mu: &MeasureModel,
    n: i32,
    atoms: &[Atom],
) -> Result<PowerEquivalenceReport> {
    let mut report = PowerEquivalenceReport {
        scale: n,
        samples: atoms.len(),
        max_discrepancy: 0.0,
        worst: None,
    };
    for atom in atoms {
        let f = StepFunction::atom(atom.clone(), 1.0);
        let direct = apply_scaling(n, &f, mu)?;
        let iterated = apply_power(n, &f, mu)?;
        let d = distance(&direct, &iterated, mu)?;
        if d > report.max_discrepancy {
            report.max_discrepancy = d;
            report.worst = Some(atom.clone());
        }
    }
    Ok(report)
}

/// Every depth-1 atom with translate in `-bound..=bound`.
pub fn letter_atoms(a: &IncidenceMatrix, bound: i64) -> Vec<Atom> {
    (-bound..=bound)
        .flat_map(|m| (0..a.size()).map(move |j| Atom::new(m, Word::from_vec_unchecked(vec![j]))))
        .collect()
}

/// One affine inverse branch `τ_i(x) = a·x + b` with Markov domain `B_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    #[serde(rename = "a")]
    pub slope: f64,
    #[serde(rename = "b")]
    pub intercept: f64,
    #[serde(rename = "B")]
    pub domain: [f64; 2],
}

impl Branch {
    pub fn apply(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn invert(&self, y: f64) -> f64 {
        (y - self.intercept) / self.slope
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AffineBranchGeometry {
    branches: Vec<Branch>,
}

/// Slack for the geometric compatibility checks.
pub const GEOMETRY_TOL: f64 = 1e-9;

impl AffineBranchGeometry {
    pub fn new(branches: Vec<Branch>) -> Self {
        AffineBranchGeometry { branches }
    }

    /// `τ_0(x) = x/β`, `τ_1(x) = (x+1)/β` on `B_0 = [0, β−1)`, `B_1 = [β−1, 1)`.
    pub fn golden_mean() -> Self {
        let beta = crate::GOLDEN_MEAN;
        AffineBranchGeometry::new(vec![
            Branch { slope: 1.0 / beta, intercept: 0.0, domain: [0.0, beta - 1.0] },
            Branch { slope: 1.0 / beta, intercept: 1.0 / beta, domain: [beta - 1.0, 1.0] },
        ])
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Checks slopes in `(0,1)`, domains inside `[0,1]` with disjoint
    /// interiors, and `τ_i(hull ⋃_{A_ij=1} B_j) ⊆ B_i`.
    pub fn validate(&self, a: &IncidenceMatrix) -> Vec<String> {
        let mut out = Vec::new();
        if self.branches.len() != a.size() {
            out.push(format!(
                "geometry has {} branches, expected {}",
                self.branches.len(),
                a.size()
            ));
            return out;
        }
        for (i, br) in self.branches.iter().enumerate() {
            let [lo, hi] = br.domain;
            if !(br.slope > 0.0 && br.slope < 1.0) {
                out.push(format!("branch {i}: slope {} outside (0,1)", br.slope));
            }
            if !(lo >= -GEOMETRY_TOL && hi <= 1.0 + GEOMETRY_TOL && lo < hi) {
                out.push(format!("branch {i}: domain [{lo}, {hi}] not a subinterval of [0,1]"));
            }
            let succ: Vec<usize> = a.successors(i).collect();
            let s_lo = succ.iter().map(|&j| self.branches[j].domain[0]).fold(f64::INFINITY, f64::min);
            let s_hi = succ.iter().map(|&j| self.branches[j].domain[1]).fold(f64::NEG_INFINITY, f64::max);
            let (img_lo, img_hi) = (br.apply(s_lo), br.apply(s_hi));
            if img_lo < lo - GEOMETRY_TOL || img_hi > hi + GEOMETRY_TOL {
                out.push(format!(
                    "branch {i}: image [{img_lo}, {img_hi}] of its successors leaves B_{i} = [{lo}, {hi}]"
                ));
            }
            for (j, other) in self.branches.iter().enumerate().skip(i + 1) {
                let overlap = hi.min(other.domain[1]) - lo.max(other.domain[0]);
                if overlap > GEOMETRY_TOL {
                    out.push(format!("domains {i} and {j} overlap by {overlap}"));
                }
            }
        }
        out
    }

    pub fn tau(&self, i: usize, x: f64) -> f64 {
        self.branches[i].apply(x)
    }

    pub fn tau_inv(&self, i: usize, y: f64) -> f64 {
        self.branches[i].invert(y)
    }

    /// `τ_ω = τ_{ω_0} ∘ … ∘ τ_{ω_{n-1}}`.
    pub fn tau_word(&self, w: &Word, x: f64) -> f64 {
        w.symbols().iter().rev().fold(x, |acc, &s| self.tau(s, acc))
    }

    pub fn tau_word_inv(&self, w: &Word, y: f64) -> f64 {
        w.symbols().iter().fold(y, |acc, &s| self.tau_inv(s, acc))
    }

    /// Half-open interval `[lo, hi)` occupied by the atom: `τ_{σ'}(B_{σ_last}) + m`
    /// where `σ'` drops the last symbol.
    pub fn cylinder_interval(&self, atom: &Atom) -> (f64, f64) {
        let w = &atom.word;
        let [lo, hi] = self.branches[w.last()].domain;
        let (lo, hi) = if w.len() == 1 {
            (lo, hi)
        } else {
            let head = w.prefix(w.len() - 1);
            (self.tau_word(&head, lo), self.tau_word(&head, hi))
        };
        let m = atom.translate as f64;
        (lo + m, hi + m)
    }
}

/// Point value of `U^(n) f` at `x` from the defining sum: locates the
/// cylinder `[ωj]` (with `|ω| = n`) containing `x − ⌊x⌋` and returns
/// `√(ν[j]/ν[ωj]) · f(τ_ω^{-1}(x − k) + c(ω) + N^n k)`, or 0 off the limit set.
pub fn pointwise_scaling(
    geom: &AffineBranchGeometry,
    mu: &MeasureModel,
    n: usize,
    f: &dyn Fn(f64) -> f64,
    x: f64,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::Input("pointwise scaling needs n >= 1".into()));
    }
    mu.check_depth(n + 1)?;
    let a = mu.incidence();
    let k = x.floor();
    let y = x - k;
    let inside = |w: &Word| {
        let (lo, hi) = geom.cylinder_interval(&Atom::new(0, w.clone()));
        lo <= y && y < hi
    };
    let Some(mut word) = (0..a.size())
        .map(|i| Word::from_vec_unchecked(vec![i]))
        .find(|w| inside(w))
    else {
        return Ok(0.0);
    };
    for _ in 0..n {
        let Some(next) = a
            .successors(word.last())
            .filter_map(|j| word.extend(a, j))
            .find(|w| inside(w))
        else {
            return Ok(0.0);
        };
        word = next;
    }
    let omega = word.prefix(n);
    let j = Word::from_vec_unchecked(vec![word.last()]);
    let weight = (mu.cylinder_measure(&j)? / mu.cylinder_measure(&word)?).sqrt();
    let arg = geom.tau_word_inv(&omega, y)
        + word_offset(&omega, a.size()) as f64
        + block_size(a.size(), n) as f64 * k;
    Ok(weight * f(arg))
}
