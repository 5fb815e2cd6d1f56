//! Cylinder measures: Markov measures given by `(p, Π)` and finite tables of
//! cylinder masses, with validation and a detector that decides whether a
//! table is Markovian.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbolic::{enumerate_words, IncidenceMatrix, Word};

/// Absolute tolerance on row sums of `Π` and on `Σ p_i`.
pub const STOCHASTIC_TOL: f64 = 1e-12;
/// Relative tolerance on table additivity and total mass.
pub const ADDITIVITY_TOL: f64 = 1e-10;
/// Relative tolerance of the Markov ratio identity.
pub const CONSISTENCY_TOL: f64 = 1e-9;

/// `ν([ω]) = p_{ω_0} ∏ π_{ω_i ω_{i+1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovMeasure {
    pub p: Vec<f64>,
    #[serde(rename = "Pi")]
    pub pi: Vec<Vec<f64>>,
}

impl MarkovMeasure {
    pub fn new(p: Vec<f64>, pi: Vec<Vec<f64>>) -> Self {
        MarkovMeasure { p, pi }
    }

    /// The invariant measure of the golden-mean β-transformation:
    /// `p = (β/√5, (β−1)/√5)`, `Π = [[β−1, 2−β], [1, 0]]`.
    pub fn golden_mean() -> Self {
        let beta = crate::GOLDEN_MEAN;
        let s5 = 5f64.sqrt();
        MarkovMeasure {
            p: vec![beta / s5, (beta - 1.0) / s5],
            pi: vec![vec![beta - 1.0, 2.0 - beta], vec![1.0, 0.0]],
        }
    }

    /// Uniform Bernoulli measure on the full shift over `n` symbols.
    pub fn uniform(n: usize) -> Self {
        let x = 1.0 / n as f64;
        MarkovMeasure {
            p: vec![x; n],
            pi: vec![vec![x; n]; n],
        }
    }

    pub fn mass(&self, w: &Word) -> f64 {
        let s = w.symbols();
        s.windows(2)
            .fold(self.p[s[0]], |acc, pair| acc * self.pi[pair[0]][pair[1]])
    }
}

/// Cylinder masses for every admissible word up to `depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMeasure {
    depth: usize,
    values: BTreeMap<Word, f64>,
}

impl TableMeasure {
    pub fn new(depth: usize, values: BTreeMap<Word, f64>) -> Result<Self> {
        if depth < 2 {
            return Err(Error::Input(format!("table depth must be at least 2, got {depth}")));
        }
        if let Some(w) = values.keys().find(|w| w.len() > depth) {
            return Err(Error::Input(format!(
                "table word {w} is longer than the declared depth {depth}"
            )));
        }
        Ok(TableMeasure { depth, values })
    }

    /// Tabulates `model` on every admissible word of length `<= depth`.
    pub fn generate(model: &MeasureModel, depth: usize) -> Result<Self> {
        let a = model.incidence();
        let mut values = BTreeMap::new();
        for len in 1..=depth {
            for w in enumerate_words(a, len) {
                let v = model.cylinder_measure(&w)?;
                values.insert(w, v);
            }
        }
        TableMeasure::new(depth, values)
    }

    /// Builds an additive table from arbitrary positive leaf weights on the
    /// words of length `depth`, aggregating upward and normalising to mass 1.
    pub fn from_leaf_weights(
        a: &IncidenceMatrix,
        depth: usize,
        mut weight: impl FnMut(&Word) -> f64,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        let leaves = enumerate_words(a, depth);
        let total: f64 = leaves.iter().map(|w| {
            let v = weight(w);
            values.insert(w.clone(), v);
            v
        }).sum();
        for v in values.values_mut() {
            *v /= total;
        }
        for len in (1..depth).rev() {
            for w in enumerate_words(a, len) {
                let v: f64 = a
                    .successors(w.last())
                    .filter_map(|j| w.extend(a, j))
                    .map(|c| values[&c])
                    .sum();
                values.insert(w, v);
            }
        }
        TableMeasure::new(depth, values)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &BTreeMap<Word, f64> {
        &self.values
    }

    pub fn get(&self, w: &Word) -> Option<f64> {
        self.values.get(w).copied()
    }

    /// Overwrites one entry; additivity is the caller's problem.
    pub fn set(&mut self, w: Word, value: f64) -> Result<()> {
        if w.len() > self.depth {
            return Err(Error::DepthExceeded {
                requested: w.len(),
                depth: self.depth,
            });
        }
        self.values.insert(w, value);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    Markov(MarkovMeasure),
    Table(TableMeasure),
}

/// A cylinder measure together with the incidence matrix it lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureModel {
    incidence: IncidenceMatrix,
    measure: Measure,
}

impl MeasureModel {
    /// Structural checks only (shapes, table keys); numeric invariants are
    /// reported by [`MeasureModel::validate`].
    pub fn new(incidence: IncidenceMatrix, measure: Measure) -> Result<Self> {
        let n = incidence.size();
        match &measure {
            Measure::Markov(m) => {
                if m.p.len() != n {
                    return Err(Error::Input(format!("p has length {}, expected {n}", m.p.len())));
                }
                if m.pi.len() != n || m.pi.iter().any(|r| r.len() != n) {
                    return Err(Error::Input(format!("Pi must be {n}x{n}")));
                }
            }
            Measure::Table(t) => {
                for w in t.values.keys() {
                    Word::new(&incidence, w.symbols().to_vec())?;
                }
            }
        }
        Ok(MeasureModel { incidence, measure })
    }

    pub fn markov(incidence: IncidenceMatrix, m: MarkovMeasure) -> Result<Self> {
        Self::new(incidence, Measure::Markov(m))
    }

    pub fn table(incidence: IncidenceMatrix, t: TableMeasure) -> Result<Self> {
        Self::new(incidence, Measure::Table(t))
    }

    pub fn golden_mean() -> Self {
        Self::markov(IncidenceMatrix::golden_mean(), MarkovMeasure::golden_mean())
            .expect("golden-mean instance is well formed")
    }

    pub fn incidence(&self) -> &IncidenceMatrix {
        &self.incidence
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn n_symbols(&self) -> usize {
        self.incidence.size()
    }

    pub fn as_markov(&self) -> Option<&MarkovMeasure> {
        match &self.measure {
            Measure::Markov(m) => Some(m),
            Measure::Table(_) => None,
        }
    }

    pub fn as_table(&self) -> Option<&TableMeasure> {
        match &self.measure {
            Measure::Table(t) => Some(t),
            Measure::Markov(_) => None,
        }
    }

    /// Maximum word length the measure can evaluate; `None` for Markov.
    pub fn depth_limit(&self) -> Option<usize> {
        self.as_table().map(|t| t.depth)
    }

    pub fn check_depth(&self, len: usize) -> Result<()> {
        match self.depth_limit() {
            Some(depth) if len > depth => Err(Error::DepthExceeded {
                requested: len,
                depth,
            }),
            _ => Ok(()),
        }
    }

    /// `ν([ω])`.
    pub fn cylinder_measure(&self, w: &Word) -> Result<f64> {
        match &self.measure {
            Measure::Markov(m) => Ok(m.mass(w)),
            Measure::Table(t) => {
                self.check_depth(w.len())?;
                t.get(w).ok_or_else(|| Error::MissingCylinder(w.to_string()))
            }
        }
    }

    /// Every violated invariant, each with a location and residual.
    pub fn validate(&self) -> Vec<Violation> {
        match &self.measure {
            Measure::Markov(m) => validate_markov(&self.incidence, m),
            Measure::Table(t) => validate_table(&self.incidence, t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Probability,
    Positivity,
    Stochasticity,
    ZeroPattern,
    Additivity,
    MissingValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
    pub residual: f64,
}

fn violation(kind: ViolationKind, location: impl Into<String>, residual: f64) -> Violation {
    Violation {
        kind,
        location: location.into(),
        residual,
    }
}

fn validate_markov(a: &IncidenceMatrix, m: &MarkovMeasure) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, &pi) in m.p.iter().enumerate() {
        if !(pi > 0.0) {
            out.push(violation(ViolationKind::Positivity, format!("p[{i}]"), pi));
        }
    }
    let total: f64 = m.p.iter().sum();
    if (total - 1.0).abs() > STOCHASTIC_TOL {
        out.push(violation(ViolationKind::Probability, "p", (total - 1.0).abs()));
    }
    for (j, row) in m.pi.iter().enumerate() {
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > STOCHASTIC_TOL {
            out.push(violation(ViolationKind::Stochasticity, format!("Pi[{j}]"), (s - 1.0).abs()));
        }
        for (k, &x) in row.iter().enumerate() {
            let misplaced = if a.allows(j, k) { !(x > 0.0) } else { x != 0.0 };
            if misplaced {
                out.push(violation(ViolationKind::ZeroPattern, format!("Pi[{j}][{k}]"), x));
            } else if x < 0.0 {
                out.push(violation(ViolationKind::Positivity, format!("Pi[{j}][{k}]"), x));
            }
        }
    }
    out
}

fn validate_table(a: &IncidenceMatrix, t: &TableMeasure) -> Vec<Violation> {
    let mut out = Vec::new();
    for len in 1..=t.depth {
        for w in enumerate_words(a, len) {
            match t.get(&w) {
                None => out.push(violation(ViolationKind::MissingValue, w.to_string(), f64::NAN)),
                Some(v) if !(v > 0.0) => {
                    out.push(violation(ViolationKind::Positivity, w.to_string(), v))
                }
                Some(_) => {}
            }
        }
    }
    let total: f64 = (0..a.size())
        .filter_map(|i| t.get(&Word::from_vec_unchecked(vec![i])))
        .sum();
    if (total - 1.0).abs() > ADDITIVITY_TOL {
        out.push(violation(ViolationKind::Probability, "total", (total - 1.0).abs()));
    }
    for len in 1..t.depth {
        for w in enumerate_words(a, len) {
            let Some(parent) = t.get(&w) else { continue };
            let children: Option<f64> = a
                .successors(w.last())
                .filter_map(|j| w.extend(a, j))
                .map(|c| t.get(&c))
                .sum();
            let Some(children) = children else { continue };
            let residual = parent - children;
            if residual.abs() > ADDITIVITY_TOL * parent.abs().max(children.abs()) {
                out.push(violation(ViolationKind::Additivity, w.to_string(), residual.abs()));
            }
        }
    }
    out
}

/// An offending triple `(k, ω, j)` of the Markov ratio identity
/// `ν[kωj] = κ_{k,ω_0} ν[ωj]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkovWitness {
    pub k: usize,
    pub omega: Word,
    pub j: usize,
    /// `ν[kωj]`
    pub lhs: f64,
    /// `κ_{k,ω_0} ν[ωj]`
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MarkovVerdict {
    Markov(MarkovMeasure),
    NotMarkov(MarkovWitness),
}

/// All offending triples, ordered by word length and then lexicographically.
pub fn markov_violations(a: &IncidenceMatrix, t: &TableMeasure) -> Result<Vec<MarkovWitness>> {
    if t.depth() < 3 {
        return Err(Error::InsufficientData(format!(
            "Markov detection needs depth >= 3, table has depth {}",
            t.depth()
        )));
    }
    let get = |w: &Word| t.get(w).ok_or_else(|| Error::MissingCylinder(w.to_string()));
    // κ_{k,i} = ν[ki] / ν[i], read off the depth-2 data.
    let n = a.size();
    let mut kappa = vec![vec![0.0; n]; n];
    for k in 0..n {
        for i in a.successors(k) {
            let ki = Word::from_vec_unchecked(vec![k, i]);
            let single = Word::from_vec_unchecked(vec![i]);
            kappa[k][i] = get(&ki)? / get(&single)?;
        }
    }
    let mut out = Vec::new();
    for len in 3..=t.depth() {
        for w in enumerate_words(a, len) {
            let tail = w.suffix_from(1);
            let lhs = get(&w)?;
            let rhs = kappa[w.first()][tail.first()] * get(&tail)?;
            if (lhs - rhs).abs() > CONSISTENCY_TOL * lhs.abs().max(rhs.abs()) {
                out.push(MarkovWitness {
                    k: w.first(),
                    omega: Word::from_vec_unchecked(tail.symbols()[..tail.len() - 1].to_vec()),
                    j: w.last(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(out)
}

/// Decides whether a table is Markovian. On success returns
/// `p_i = ν[i]`, `π_ki = ν[ki]/ν[k]`; otherwise the first offending triple.
pub fn markov_consistency(a: &IncidenceMatrix, t: &TableMeasure) -> Result<MarkovVerdict> {
    if let Some(first) = markov_violations(a, t)?.into_iter().next() {
        return Ok(MarkovVerdict::NotMarkov(first));
    }
    let n = a.size();
    let get = |v: Vec<usize>| {
        let w = Word::from_vec_unchecked(v);
        t.get(&w).ok_or_else(|| Error::MissingCylinder(w.to_string()))
    };
    let p = (0..n).map(|i| get(vec![i])).collect::<Result<Vec<_>>>()?;
    let mut pi = vec![vec![0.0; n]; n];
    for k in 0..n {
        for i in a.successors(k) {
            pi[k][i] = get(vec![k, i])? / p[k];
        }
    }
    Ok(MarkovVerdict::Markov(MarkovMeasure { p, pi }))
}
