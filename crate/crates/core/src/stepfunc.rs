//! Finite linear combinations of translated cylinder indicators
//! `1_[σ](· − m)` and their exact inner products under `ν_Z`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MeasureModel;
use crate::operators::AffineBranchGeometry;
use crate::symbolic::{is_admissible, Word};

/// Coefficients with magnitude below this are dropped by [`normalize`].
pub const ZERO_TOL: f64 = 1e-14;

/// `1_[word](· − translate)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub translate: i64,
    pub word: Word,
}

impl Atom {
    pub fn new(translate: i64, word: Word) -> Self {
        Atom { translate, word }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]{:+}", self.word, self.translate)
    }
}

/// A step function in canonical form: at each translate every word has the
/// same length, and no coefficient is (numerically) zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepFunction {
    terms: BTreeMap<Atom, f64>,
}

impl StepFunction {
    pub fn zero() -> Self {
        StepFunction::default()
    }

    /// A single atom with coefficient `coeff`; canonical by construction.
    pub fn atom(atom: Atom, coeff: f64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff.abs() >= ZERO_TOL {
            terms.insert(atom, coeff);
        }
        StepFunction { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Atom, f64> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, f64)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, atom: &Atom) -> f64 {
        self.terms.get(atom).copied().unwrap_or(0.0)
    }

    /// Longest word length present (0 for the zero function).
    pub fn max_depth(&self) -> usize {
        self.terms.keys().map(|a| a.word.len()).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let raw = self.terms.iter().map(|(a, &v)| (a.clone(), c * v));
        StepFunction {
            terms: raw.filter(|(_, v)| v.abs() >= ZERO_TOL).collect(),
        }
    }

    /// `T^k f`: shifts every translate by `k`. Canonical form is preserved.
    pub fn translated(&self, k: i64) -> Self {
        StepFunction {
            terms: self
                .terms
                .iter()
                .map(|(a, &v)| (Atom::new(a.translate + k, a.word.clone()), v))
                .collect(),
        }
    }

    pub fn add(&self, other: &StepFunction, mu: &MeasureModel) -> Result<Self> {
        normalize(self.raw().into_iter().chain(other.raw()), mu)
    }

    pub fn sub(&self, other: &StepFunction, mu: &MeasureModel) -> Result<Self> {
        normalize(
            self.raw().into_iter().chain(other.scaled(-1.0).raw()),
            mu,
        )
    }

    /// `Σ c_i f_i`.
    pub fn linear_combination<'a>(
        items: impl IntoIterator<Item = (f64, &'a StepFunction)>,
        mu: &MeasureModel,
    ) -> Result<Self> {
        let raw: Vec<(Atom, f64)> = items
            .into_iter()
            .flat_map(|(c, f)| f.iter().map(move |(a, v)| (a.clone(), c * v)))
            .collect();
        normalize(raw, mu)
    }

    pub fn raw(&self) -> Vec<(Atom, f64)> {
        self.terms.iter().map(|(a, &v)| (a.clone(), v)).collect()
    }

    /// Smallest and largest translate carrying mass, if any.
    pub fn translate_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().next()?.translate;
        let hi = self.terms.keys().next_back()?.translate;
        Some((lo, hi))
    }
}

fn check_word(w: &Word, mu: &MeasureModel) -> Result<()> {
    if is_admissible(mu.incidence(), w.symbols())? {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "word {w} is not admissible for this system"
        )))
    }
}

/// Refines every atom to the longest word length present at its translate,
/// merges equal atoms and drops coefficients below [`ZERO_TOL`].
pub fn normalize(
    raw: impl IntoIterator<Item = (Atom, f64)>,
    mu: &MeasureModel,
) -> Result<StepFunction> {
    let raw: Vec<(Atom, f64)> = raw.into_iter().collect();
    let mut depth: BTreeMap<i64, usize> = BTreeMap::new();
    for (atom, _) in &raw {
        check_word(&atom.word, mu)?;
        let d = depth.entry(atom.translate).or_insert(0);
        *d = (*d).max(atom.word.len());
    }
    for &d in depth.values() {
        mu.check_depth(d)?;
    }
    let a = mu.incidence();
    let mut terms: BTreeMap<Atom, f64> = BTreeMap::new();
    for (atom, coeff) in raw {
        let target = depth[&atom.translate];
        if atom.word.len() == target {
            *terms.entry(atom).or_insert(0.0) += coeff;
        } else {
            for w in atom.word.extensions(a, target) {
                *terms.entry(Atom::new(atom.translate, w)).or_insert(0.0) += coeff;
            }
        }
    }
    terms.retain(|_, v| v.abs() >= ZERO_TOL);
    Ok(StepFunction { terms })
}

/// `⟨f, g⟩` in `L²(ν_Z)`: atoms at different translates are orthogonal, and
/// `ν([σ] ∩ [σ'])` is the mass of the longer word when one is a prefix of
/// the other, zero otherwise.
pub fn inner_product(f: &StepFunction, g: &StepFunction, mu: &MeasureModel) -> Result<f64> {
    for atom in f.terms.keys().chain(g.terms.keys()) {
        check_word(&atom.word, mu)?;
    }
    let mut total = 0.0;
    for (af, &cf) in &f.terms {
        let lo = Atom::new(af.translate, Word::from_vec_unchecked(vec![0]));
        for (ag, &cg) in g.terms.range(lo..) {
            if ag.translate != af.translate {
                break;
            }
            let longer = if af.word.is_prefix_of(&ag.word) {
                &ag.word
            } else if ag.word.is_prefix_of(&af.word) {
                &af.word
            } else {
                continue;
            };
            total += cf * cg * mu.cylinder_measure(longer)?;
        }
    }
    Ok(total)
}

pub fn norm(f: &StepFunction, mu: &MeasureModel) -> Result<f64> {
    Ok(inner_product(f, f, mu)?.max(0.0).sqrt())
}

/// `‖f − g‖`.
pub fn distance(f: &StepFunction, g: &StepFunction, mu: &MeasureModel) -> Result<f64> {
    norm(&f.sub(g, mu)?, mu)
}

/// Father wavelet `φ_j = ν([j])^{-1/2} 1_[j]`.
pub fn father(mu: &MeasureModel, j: usize) -> Result<StepFunction> {
    let w = Word::letter(mu.incidence(), j)?;
    let c = mu.cylinder_measure(&w)?.powf(-0.5);
    Ok(StepFunction::atom(Atom::new(0, w), c))
}

/// Point value of `f` under affine branch geometry; cylinder intervals are
/// half-open.
pub fn evaluate(f: &StepFunction, x: f64, geom: &AffineBranchGeometry) -> f64 {
    f.iter()
        .filter(|(a, _)| {
            let (lo, hi) = geom.cylinder_interval(a);
            lo <= x && x < hi
        })
        .map(|(_, c)| c)
        .sum()
}
