//! JSON system specifications: alphabet, incidence matrix, measure and
//! optional affine geometry.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{MarkovMeasure, Measure, MeasureModel, TableMeasure};
use crate::operators::{AffineBranchGeometry, Branch};
use crate::symbolic::{IncidenceMatrix, Word};

/// Bundled β-transformation instance.
pub const GOLDEN_JSON: &str = include_str!("../fixtures/golden.json");
/// Bundled three-symbol linear Cantor instance.
pub const CANTOR3_JSON: &str = include_str!("../fixtures/cantor3.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<u8>>,
    measure: MeasureFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<Vec<Branch>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MeasureFile {
    Markov {
        p: Vec<f64>,
        #[serde(rename = "Pi")]
        pi: Vec<Vec<f64>>,
    },
    Table {
        depth: usize,
        values: BTreeMap<String, f64>,
    },
}

/// A loaded system: measure model plus optional geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub model: MeasureModel,
    pub geometry: Option<AffineBranchGeometry>,
}

impl SystemSpec {
    pub fn new(model: MeasureModel, geometry: Option<AffineBranchGeometry>) -> Self {
        SystemSpec { model, geometry }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let a = IncidenceMatrix::new(&file.a).map_err(|e| Error::Config(format!("A: {e}")))?;
        if a.size() != file.n {
            return Err(Error::Config(format!(
                "N is {} but A is {}x{}",
                file.n,
                a.size(),
                a.size()
            )));
        }
        let measure = match file.measure {
            MeasureFile::Markov { p, pi } => Measure::Markov(MarkovMeasure::new(p, pi)),
            MeasureFile::Table { depth, values } => {
                let mut map = BTreeMap::new();
                for (k, v) in values {
                    let w = Word::parse(&a, &k)
                        .map_err(|e| Error::Config(format!("measure.values[{k:?}]: {e}")))?;
                    map.insert(w, v);
                }
                Measure::Table(
                    TableMeasure::new(depth, map).map_err(|e| Error::Config(format!("measure: {e}")))?,
                )
            }
        };
        let model = MeasureModel::new(a, measure).map_err(|e| Error::Config(format!("measure: {e}")))?;
        let geometry = match file.geometry {
            None => None,
            Some(branches) => {
                let g = AffineBranchGeometry::new(branches);
                let problems = g.validate(model.incidence());
                if !problems.is_empty() {
                    return Err(Error::Config(format!("geometry: {}", problems.join("; "))));
                }
                Some(g)
            }
        };
        Ok(SystemSpec { model, geometry })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn golden_mean() -> Self {
        Self::from_json(GOLDEN_JSON).expect("bundled fixture is valid")
    }

    pub fn cantor3() -> Self {
        Self::from_json(CANTOR3_JSON).expect("bundled fixture is valid")
    }

    pub fn geometry(&self) -> Result<&AffineBranchGeometry> {
        self.geometry
            .as_ref()
            .ok_or_else(|| Error::Config("the system has no geometry section".into()))
    }

    pub fn to_json(&self) -> String {
        let measure = match self.model.measure() {
            Measure::Markov(m) => MeasureFile::Markov { p: m.p.clone(), pi: m.pi.clone() },
            Measure::Table(t) => MeasureFile::Table {
                depth: t.depth(),
                values: t.values().iter().map(|(w, &v)| (w.to_string(), v)).collect(),
            },
        };
        let file = SpecFile {
            n: self.model.n_symbols(),
            a: self.model.incidence().rows(),
            measure,
            geometry: self.geometry.as_ref().map(|g| g.branches().to_vec()),
        };
        serde_json::to_string_pretty(&file).expect("spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load_and_validate() {
        for spec in [SystemSpec::golden_mean(), SystemSpec::cantor3()] {
            assert!(spec.model.validate().is_empty());
            assert!(spec.geometry.is_some());
        }
    }

    #[test]
    fn golden_fixture_matches_constructor() {
        let spec = SystemSpec::golden_mean();
        let mu = MeasureModel::golden_mean();
        let (a, b) = (spec.model.as_markov().unwrap(), mu.as_markov().unwrap());
        for i in 0..2 {
            assert!((a.p[i] - b.p[i]).abs() < 1e-15);
            for j in 0..2 {
                assert!((a.pi[i][j] - b.pi[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn table_form_round_trips() {
        let mu = MeasureModel::golden_mean();
        let t = TableMeasure::generate(&mu, 3).unwrap();
        let spec = SystemSpec::new(MeasureModel::table(mu.incidence().clone(), t).unwrap(), None);
        let back = SystemSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(SystemSpec::from_json("{"), Err(Error::Config(_))));
        let bad = r#"{"N": 3, "A": [[1,1],[1,0]], "measure": {"p": [0.5,0.5], "Pi": [[0.5,0.5],[1,0]]}}"#;
        assert!(matches!(SystemSpec::from_json(bad), Err(Error::Config(_))));
        let bad = r#"{"N": 2, "A": [[1,1],[1,0]], "measure": {"depth": 2, "values": {"11": 0.5}}}"#;
        assert!(matches!(SystemSpec::from_json(bad), Err(Error::Config(_))));
    }
}
