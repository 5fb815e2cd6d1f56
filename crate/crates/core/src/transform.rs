//! Analysis and synthesis against an enumerated basis, Gram matrices and
//! projection residuals.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MeasureModel;
use crate::stepfunc::{inner_product, norm, StepFunction};
use crate::wavelets::{BasisElement, Descriptor};

/// Gram deviation under which a basis counts as orthonormal for the
/// Pythagorean residual.
pub const GRAM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub descriptor: Descriptor,
    pub value: f64,
}

/// Expansion coefficients in basis order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoefficientVector {
    pub entries: Vec<Coefficient>,
}

impl CoefficientVector {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|c| c.value).collect()
    }

    pub fn energy(&self) -> f64 {
        self.entries.iter().map(|c| c.value * c.value).sum()
    }
}

/// `⟨f, b⟩` for every basis element.
pub fn analyze(f: &StepFunction, basis: &[BasisElement], mu: &MeasureModel) -> Result<CoefficientVector> {
    let entries = basis
        .iter()
        .map(|b| {
            Ok(Coefficient {
                descriptor: b.descriptor.clone(),
                value: inner_product(f, &b.func, mu)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoefficientVector { entries })
}

/// `Σ c_b b`.
pub fn synthesize(c: &CoefficientVector, basis: &[BasisElement], mu: &MeasureModel) -> Result<StepFunction> {
    if c.entries.len() != basis.len() {
        return Err(Error::Input(format!(
            "{} coefficients for a basis of {} elements",
            c.entries.len(),
            basis.len()
        )));
    }
    for (i, (e, b)) in c.entries.iter().zip(basis).enumerate() {
        if e.descriptor != b.descriptor {
            return Err(Error::Input(format!("coefficient {i} does not match basis element {i}")));
        }
    }
    StepFunction::linear_combination(c.entries.iter().zip(basis).map(|(e, b)| (e.value, &b.func)), mu)
}

/// Orthogonal projection of `f` onto the span of an orthonormal basis.
pub fn project(f: &StepFunction, basis: &[BasisElement], mu: &MeasureModel) -> Result<StepFunction> {
    synthesize(&analyze(f, basis, mu)?, basis, mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub matrix: Vec<Vec<f64>>,
    pub max_deviation: f64,
}

pub fn gram(basis: &[BasisElement], mu: &MeasureModel) -> Result<GramReport> {
    let n = basis.len();
    let mut matrix = vec![vec![0.0; n]; n];
    let mut max_deviation: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let g = inner_product(&basis[i].func, &basis[j].func, mu)?;
            matrix[i][j] = g;
            matrix[j][i] = g;
            let want = if i == j { 1.0 } else { 0.0 };
            max_deviation = max_deviation.max((g - want).abs());
        }
    }
    Ok(GramReport { matrix, max_deviation })
}

/// Below this fraction of `‖f‖²` the Pythagorean difference is dominated by
/// rounding, and the residual is recomputed by explicit subtraction.
pub const PYTHAGOREAN_FLOOR: f64 = 1e-8;

/// `‖f − P f‖`. Uses `√(‖f‖² − Σ c_b²)` when the basis passes the Gram
/// check and the difference is well above rounding level, explicit
/// subtraction otherwise.
pub fn residual(f: &StepFunction, basis: &[BasisElement], mu: &MeasureModel) -> Result<f64> {
    support_gaps(f, basis);
    let c = analyze(f, basis, mu)?;
    if gram(basis, mu)?.max_deviation <= GRAM_TOL {
        let nf = inner_product(f, f, mu)?;
        let r2 = nf - c.energy();
        if r2 > PYTHAGOREAN_FLOOR * nf {
            return Ok(r2.sqrt());
        }
    }
    norm(&f.sub(&synthesize(&c, basis, mu)?, mu)?, mu)
}

/// Translates carrying part of `f` that no basis element touches. Logs a
/// warning when nonempty.
pub fn support_gaps(f: &StepFunction, basis: &[BasisElement]) -> Vec<i64> {
    let covered: BTreeSet<i64> = basis
        .iter()
        .flat_map(|b| b.func.terms().keys().map(|a| a.translate))
        .collect();
    let gaps: Vec<i64> = f
        .terms()
        .keys()
        .map(|a| a.translate)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|t| !covered.contains(t))
        .collect();
    if !gaps.is_empty() {
        log::warn!("basis misses the support of f at translates {gaps:?}");
    }
    gaps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepfunc::{father, Atom};
    use crate::symbolic::Word;
    use crate::wavelets::{markov_mothers, one_sided_basis};

    fn gm() -> MeasureModel {
        MeasureModel::golden_mean()
    }

    fn phi0_psi(mu: &MeasureModel) -> Vec<BasisElement> {
        let psi = markov_mothers(mu).unwrap()[0].mothers[0].func.clone();
        vec![
            BasisElement {
                descriptor: Descriptor::Father { symbol: 0, translate: 0, adjoint_power: 0 },
                func: father(mu, 0).unwrap(),
            },
            BasisElement {
                descriptor: Descriptor::MotherPos { scale: 0, symbol: 0, index: 1, translate: 0 },
                func: psi,
            },
        ]
    }

    fn ind(s: &str) -> StepFunction {
        let w = Word::parse(gm().incidence(), s).unwrap();
        StepFunction::atom(Atom::new(0, w), 1.0)
    }

    #[test]
    fn analyze_indicator() {
        let mu = gm();
        let c = analyze(&ind("00"), &phi0_psi(&mu), &mu).unwrap().values();
        assert!((c[0] - 0.5257311121191336).abs() < 1e-9);
        assert!((c[1] - 0.41330423812239925).abs() < 1e-9);
        assert!((c[0] * c[0] + c[1] * c[1] - 0.4472135954999579).abs() < 1e-12);
    }

    #[test]
    fn round_trip_in_v1() {
        let mu = gm();
        let basis = one_sided_basis(&mu, 0, 1).unwrap();
        let f = ind("00");
        let g = synthesize(&analyze(&f, &basis, &mu).unwrap(), &basis, &mu).unwrap();
        assert!(crate::stepfunc::distance(&f, &g, &mu).unwrap() < 1e-12);
        assert!(residual(&f, &basis, &mu).unwrap() < 1e-10);
    }

    #[test]
    fn mismatched_synthesis() {
        let mu = gm();
        let basis = phi0_psi(&mu);
        let c = analyze(&ind("00"), &basis[..1], &mu).unwrap();
        assert!(synthesize(&c, &basis, &mu).is_err());
    }

    #[test]
    fn gaps_are_reported() {
        let mu = gm();
        let f = ind("0").translated(5);
        assert_eq!(support_gaps(&f, &phi0_psi(&mu)), vec![5]);
    }

    #[test]
    fn fathers_gram_is_identity() {
        let mu = gm();
        let basis = one_sided_basis(&mu, 0, 2).unwrap();
        let fathers: Vec<_> = basis
            .into_iter()
            .filter(|b| matches!(b.descriptor, Descriptor::Father { .. }))
            .collect();
        assert!(gram(&fathers, &mu).unwrap().max_deviation < 1e-15);
    }
}
