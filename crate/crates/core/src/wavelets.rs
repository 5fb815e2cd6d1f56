//! Mother wavelets from Gram–Schmidt completion, and enumeration of the
//! one-sided and two-sided orthonormal bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::MeasureModel;
use crate::operators::{apply_power, apply_scaling};
use crate::stepfunc::{father, normalize, Atom, StepFunction};
use crate::symbolic::{enumerate_words, Word};

/// Given rows must be orthonormal to this tolerance.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Gram–Schmidt candidates with a smaller residual are skipped.
pub const SEED_SKIP_TOL: f64 = 1e-8;

/// Real orthogonal `q × q` matrix whose leading rows were prescribed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthoMatrix {
    rows: Vec<Vec<f64>>,
}

impl OrthoMatrix {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    /// `max |M Mᵗ − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let q = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..q {
            for j in 0..q {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(&self.rows[i], &self.rows[j]) - want).abs());
            }
        }
        worst
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extends orthonormal `first_rows` to an orthogonal `q × q` matrix. Seeds
/// are `e_0, e_1, …` in order; each new row has its first nonzero entry
/// positive.
pub fn complete_orthonormal(first_rows: &[Vec<f64>], q: usize) -> Result<OrthoMatrix> {
    if first_rows.len() > q {
        return Err(Error::Input(format!(
            "{} rows given for a {q}x{q} matrix",
            first_rows.len()
        )));
    }
    for (i, r) in first_rows.iter().enumerate() {
        if r.len() != q {
            return Err(Error::Input(format!("row {i} has length {}, expected {q}", r.len())));
        }
        for (j, s) in first_rows.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            if (dot(r, s) - want).abs() > ORTHONORMAL_TOL {
                return Err(Error::Input(format!("given rows {i} and {j} are not orthonormal")));
            }
        }
    }
    let mut rows = first_rows.to_vec();
    for seed in 0..q {
        if rows.len() == q {
            break;
        }
        let mut v = vec![0.0; q];
        v[seed] = 1.0;
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for r in &rows {
                let c = dot(&v, r);
                v.iter_mut().zip(r).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = dot(&v, &v).sqrt();
        if n < SEED_SKIP_TOL {
            continue;
        }
        let lead = v.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        let s = lead.signum() / n;
        rows.push(v.into_iter().map(|x| x * s).collect());
    }
    Ok(OrthoMatrix { rows })
}

/// A mother wavelet `ψ^{ω,l}` at translate 0: `word` is `ω`, `index` is `l ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MotherWavelet {
    pub word: Word,
    pub index: usize,
    pub func: StepFunction,
}

/// Gram–Schmidt block of a Markov measure for the symbol `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovBlock {
    pub symbol: usize,
    /// `Q^k = {j : A_kj = 1}`, ascending.
    pub support: Vec<usize>,
    pub matrix: OrthoMatrix,
    pub mothers: Vec<MotherWavelet>,
}

/// Per-symbol blocks `M_k` with first row `(√π_kj)_{j∈Q^k}` and mothers
/// `ψ^{k,l} = Σ_j c_j^{k,l} (p_k π_kj)^{-1/2} 1_[kj]`.
pub fn markov_mothers(mu: &MeasureModel) -> Result<Vec<MarkovBlock>> {
    let m = mu.as_markov().ok_or(Error::NotMarkov)?;
    let a = mu.incidence();
    let mut out = Vec::with_capacity(a.size());
    for k in 0..a.size() {
        let support: Vec<usize> = a.successors(k).collect();
        let first: Vec<f64> = support.iter().map(|&j| m.pi[k][j].sqrt()).collect();
        let matrix = complete_orthonormal(&[first], support.len())?;
        let mothers = (1..matrix.size())
            .map(|l| {
                let raw = support.iter().zip(matrix.row(l)).map(|(&j, &c)| {
                    let w = Word::from_vec_unchecked(vec![k, j]);
                    (Atom::new(0, w), c / (m.p[k] * m.pi[k][j]).sqrt())
                });
                Ok(MotherWavelet {
                    word: Word::from_vec_unchecked(vec![k]),
                    index: l,
                    func: normalize(raw, mu)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(MarkovBlock { symbol: k, support, matrix, mothers });
    }
    Ok(out)
}

/// Matrix `M_ω` with first row `(√(ν[ωj]/ν[ω]))_j` and mothers
/// `ψ^{ω,l} = Σ_j c_j^{ω,l} ν[ωj]^{-1/2} 1_[ωj]`.
pub fn word_mothers(mu: &MeasureModel, omega: &Word) -> Result<(OrthoMatrix, Vec<MotherWavelet>)> {
    let a = mu.incidence();
    mu.check_depth(omega.len() + 1)?;
    let children: Vec<Word> = a
        .successors(omega.last())
        .filter_map(|j| omega.extend(a, j))
        .collect();
    let parent = mu.cylinder_measure(omega)?;
    let masses = children
        .iter()
        .map(|w| mu.cylinder_measure(w))
        .collect::<Result<Vec<_>>>()?;
    let first: Vec<f64> = masses.iter().map(|v| (v / parent).sqrt()).collect();
    let matrix = complete_orthonormal(&[first], children.len())?;
    let mothers = (1..matrix.size())
        .map(|l| {
            let raw = children
                .iter()
                .zip(&masses)
                .zip(matrix.row(l))
                .map(|((w, v), &c)| (Atom::new(0, w.clone()), c / v.sqrt()));
            Ok(MotherWavelet {
                word: omega.clone(),
                index: l,
                func: normalize(raw, mu)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((matrix, mothers))
}

/// What a basis element is, independently of its realization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Descriptor {
    /// `(U*)^adjoint_power T^translate φ_symbol`.
    Father {
        symbol: usize,
        translate: i64,
        adjoint_power: u32,
    },
    /// `T^translate ψ^{word,index}`.
    WordMother {
        word: Word,
        index: usize,
        translate: i64,
    },
    /// `U^scale T^translate ψ^{symbol,index}`.
    MotherPos {
        scale: u32,
        symbol: usize,
        index: usize,
        translate: i64,
    },
    /// `(U*)^scale T^translate ψ^{symbol,index}`.
    MotherNeg {
        scale: u32,
        symbol: usize,
        index: usize,
        translate: i64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    pub descriptor: Descriptor,
    pub func: StepFunction,
}

fn block_mother<'a>(blocks: &'a [MarkovBlock], symbol: usize, index: usize) -> Result<&'a MotherWavelet> {
    blocks
        .get(symbol)
        .and_then(|b| b.mothers.get(index.wrapping_sub(1)))
        .ok_or_else(|| Error::Input(format!("no mother wavelet ψ^{{{symbol},{index}}}")))
}

/// Rebuilds the function a descriptor names.
pub fn realize(d: &Descriptor, mu: &MeasureModel) -> Result<StepFunction> {
    match d {
        Descriptor::Father { symbol, translate, adjoint_power } => {
            let f = father(mu, *symbol)?.translated(*translate);
            apply_power(-(*adjoint_power as i32), &f, mu)
        }
        Descriptor::WordMother { word, index, translate } => {
            let w = Word::new(mu.incidence(), word.symbols().to_vec())?;
            let (_, mothers) = word_mothers(mu, &w)?;
            let m = mothers
                .get(index.wrapping_sub(1))
                .ok_or_else(|| Error::Input(format!("no mother wavelet ψ^{{{w},{index}}}")))?;
            Ok(m.func.translated(*translate))
        }
        Descriptor::MotherPos { scale, symbol, index, translate } => {
            let blocks = markov_mothers(mu)?;
            let f = block_mother(&blocks, *symbol, *index)?.func.translated(*translate);
            apply_power(*scale as i32, &f, mu)
        }
        Descriptor::MotherNeg { scale, symbol, index, translate } => {
            let blocks = markov_mothers(mu)?;
            let f = block_mother(&blocks, *symbol, *index)?.func.translated(*translate);
            apply_power(-(*scale as i32), &f, mu)
        }
    }
}

/// Fathers `T^l φ_j` followed by `T^l ψ^{ω,k}` for `1 ≤ |ω| ≤ n_max + 1`,
/// all with `|l| ≤ bound`. Ordered by scale, then translate, then word.
pub fn one_sided_basis(mu: &MeasureModel, n_max: usize, bound: i64) -> Result<Vec<BasisElement>> {
    let a = mu.incidence();
    let mut out = Vec::new();
    for l in -bound..=bound {
        for j in 0..a.size() {
            out.push(BasisElement {
                descriptor: Descriptor::Father { symbol: j, translate: l, adjoint_power: 0 },
                func: father(mu, j)?.translated(l),
            });
        }
    }
    for s in 1..=n_max + 1 {
        let mut per_word = Vec::new();
        for omega in enumerate_words(a, s) {
            let (_, mothers) = word_mothers(mu, &omega)?;
            per_word.extend(mothers);
        }
        for l in -bound..=bound {
            for m in &per_word {
                out.push(BasisElement {
                    descriptor: Descriptor::WordMother {
                        word: m.word.clone(),
                        index: m.index,
                        translate: l,
                    },
                    func: m.func.translated(l),
                });
            }
        }
    }
    Ok(out)
}

/// Truncation of the two-sided Markov basis:
/// `U^n T^m ψ^{k,l}` for `0 ≤ n ≤ n_max` (nonzero images only),
/// `(U*)^n T^m ψ^{k,l}` for `1 ≤ n ≤ n_max + 1`, and
/// `(U*)^{n−1} T^m φ_j` for `1 ≤ n ≤ n_max + 1` whenever `U T^m φ_j = 0`;
/// always `|m| ≤ m_max`.
pub fn two_sided_basis_markov(
    mu: &MeasureModel,
    n_max: usize,
    m_max: i64,
) -> Result<Vec<BasisElement>> {
    let blocks = markov_mothers(mu)?;
    let mothers: Vec<&MotherWavelet> = blocks.iter().flat_map(|b| &b.mothers).collect();
    let mut out = Vec::new();
    for n in 0..=n_max as u32 {
        for m in -m_max..=m_max {
            for psi in &mothers {
                let f = apply_power(n as i32, &psi.func.translated(m), mu)?;
                if f.is_zero() {
                    continue;
                }
                out.push(BasisElement {
                    descriptor: Descriptor::MotherPos {
                        scale: n,
                        symbol: psi.word.first(),
                        index: psi.index,
                        translate: m,
                    },
                    func: f,
                });
            }
        }
    }
    let mut orphans = Vec::new();
    for m in -m_max..=m_max {
        for j in 0..mu.n_symbols() {
            let phi = father(mu, j)?.translated(m);
            if apply_scaling(1, &phi, mu)?.is_zero() {
                orphans.push((j, m, phi));
            }
        }
    }
    for n in 1..=n_max as u32 + 1 {
        for m in -m_max..=m_max {
            for psi in &mothers {
                out.push(BasisElement {
                    descriptor: Descriptor::MotherNeg {
                        scale: n,
                        symbol: psi.word.first(),
                        index: psi.index,
                        translate: m,
                    },
                    func: apply_power(-(n as i32), &psi.func.translated(m), mu)?,
                });
            }
        }
        for (j, m, phi) in &orphans {
            out.push(BasisElement {
                descriptor: Descriptor::Father {
                    symbol: *j,
                    translate: *m,
                    adjoint_power: n - 1,
                },
                func: apply_power(1 - n as i32, phi, mu)?,
            });
        }
    }
    Ok(out)
}

/// Translates `m` in `range` with `U^n T^m φ_k ≠ 0`. Every `ψ^{k,l}` lives
/// on `[k·]`, so this is also the set where `U^n T^m ψ^{k,l} ≠ 0`.
pub fn d_set(
    mu: &MeasureModel,
    n: u32,
    k: usize,
    range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<i64>> {
    let phi = father(mu, k)?;
    let mut out = Vec::new();
    for m in range {
        if !apply_power(n as i32, &phi.translated(m), mu)?.is_zero() {
            out.push(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MarkovMeasure;
    use crate::stepfunc::inner_product;
    use crate::symbolic::IncidenceMatrix;
    use crate::GOLDEN_MEAN as BETA;

    #[test]
    fn golden_completion() {
        let m = complete_orthonormal(&[vec![(BETA - 1.0).sqrt(), (2.0 - BETA).sqrt()]], 2).unwrap();
        assert!((m.row(1)[0] - (2.0 - BETA).sqrt()).abs() < 1e-12);
        assert!((m.row(1)[1] + (BETA - 1.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn standard_row_completes_to_identity() {
        let m = complete_orthonormal(&[vec![1.0, 0.0, 0.0]], 3).unwrap();
        assert_eq!(m.rows(), &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
    }

    #[test]
    fn non_orthonormal_rows_are_rejected() {
        assert!(complete_orthonormal(&[vec![1.0, 1.0]], 2).is_err());
    }

    #[test]
    fn golden_mother() {
        let mu = MeasureModel::golden_mean();
        let blocks = markov_mothers(&mu).unwrap();
        assert_eq!(blocks[0].mothers.len(), 1);
        assert!(blocks[1].mothers.is_empty());
        let psi = &blocks[0].mothers[0].func;
        let a = mu.incidence();
        let c00 = psi.coefficient(&Atom::new(0, Word::parse(a, "00").unwrap()));
        let c01 = psi.coefficient(&Atom::new(0, Word::parse(a, "01").unwrap()));
        assert!((c00 - (5f64.sqrt() * (2.0 - BETA)).sqrt()).abs() < 1e-12);
        assert!((c01 + 5f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn haar_type_mothers() {
        let a = IncidenceMatrix::full(2).unwrap();
        let mu = MeasureModel::markov(a, MarkovMeasure::uniform(2)).unwrap();
        for b in markov_mothers(&mu).unwrap() {
            assert_eq!(b.mothers.len(), 1);
            let cs: Vec<f64> = b.mothers[0].func.iter().map(|(_, c)| c).collect();
            assert!((cs[0] - 2f64.sqrt()).abs() < 1e-12 && (cs[1] + 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn word_mothers_match_blocks() {
        let mu = MeasureModel::golden_mean();
        let (_, ws) = word_mothers(&mu, &Word::parse(mu.incidence(), "0").unwrap()).unwrap();
        let blocks = markov_mothers(&mu).unwrap();
        assert!(crate::stepfunc::distance(&ws[0].func, &blocks[0].mothers[0].func, &mu).unwrap() < 1e-14);
    }

    #[test]
    fn deeper_word_mother() {
        let mu = MeasureModel::golden_mean();
        let w = Word::parse(mu.incidence(), "10").unwrap();
        let (_, ws) = word_mothers(&mu, &w).unwrap();
        assert_eq!(ws.len(), 1);
        let psi = &ws[0].func;
        assert!((inner_product(psi, psi, &mu).unwrap() - 1.0).abs() < 1e-12);
        let ind = StepFunction::atom(Atom::new(0, w), 1.0);
        assert!(inner_product(psi, &ind, &mu).unwrap().abs() < 1e-12);
        let (_, none) = word_mothers(&mu, &Word::parse(mu.incidence(), "01").unwrap()).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn one_sided_counts() {
        let mu = MeasureModel::golden_mean();
        assert_eq!(one_sided_basis(&mu, 0, 0).unwrap().len(), 3);
        assert_eq!(one_sided_basis(&mu, 1, 0).unwrap().len(), 5);
    }

    #[test]
    fn d_sets() {
        let mu = MeasureModel::golden_mean();
        let d = d_set(&mu, 2, 0, 0..=7).unwrap();
        assert_eq!(d, vec![0, 1, 2, 4, 5, 6]);
        let d = d_set(&mu, 1, 1, -4..=4).unwrap();
        assert_eq!(d, vec![-4, -2, 0, 2, 4]);
    }

    #[test]
    fn realize_matches_enumeration() {
        let mu = MeasureModel::golden_mean();
        for b in two_sided_basis_markov(&mu, 1, 2).unwrap() {
            assert_eq!(realize(&b.descriptor, &mu).unwrap(), b.func);
        }
    }
}
