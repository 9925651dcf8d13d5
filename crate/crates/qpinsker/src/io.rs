//! JSON document formats for operators, distributions, ensembles, and key
//! ensembles, plus kind auto-detection for the CLI.
//!
//! Operator documents carry `dim` and a row-major `matrix` whose entries are
//! `[re, im]` pairs. Ensembles carry `probs` plus `states` (an array of
//! operator documents) and optionally `key_bits`. Distributions carry either
//! `probs` or a row-major `joint` matrix. Parsers reject NaN/Inf.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, CMatrix};
use crate::qkd::KeyEnsemble;
use crate::states::{DensityOperator, Ensemble, JointDist, ProbDist};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorDoc {
    pub dim: usize,
    /// Row-major rows of `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleDoc {
    pub probs: Vec<f64>,
    pub states: Vec<OperatorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key_bits: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbsDoc {
    pub probs: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointDoc {
    /// Row-major matrix, rows indexed by x.
    pub joint: Vec<Vec<f64>>,
}

impl OperatorDoc {
    pub fn from_state(s: &DensityOperator) -> Self {
        let dim = s.dim();
        let matrix = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let z = s.matrix()[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        OperatorDoc { dim, matrix }
    }

    pub fn to_state(&self, tol: &Tolerances) -> Result<DensityOperator> {
        if self.matrix.len() != self.dim {
            return Err(Error::Parse(format!(
                "matrix has {} rows but dim = {}",
                self.matrix.len(),
                self.dim
            )));
        }
        for row in &self.matrix {
            if row.len() != self.dim {
                return Err(Error::Parse(format!(
                    "matrix row has {} entries but dim = {}",
                    row.len(),
                    self.dim
                )));
            }
            for &[re, im] in row {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
        }
        let m = CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.matrix[i][j];
            C64::new(re, im)
        });
        DensityOperator::new(m, tol)
    }
}

impl EnsembleDoc {
    pub fn from_ensemble(e: &Ensemble, key_bits: Option<u32>) -> Self {
        EnsembleDoc {
            probs: e.priors().as_slice().to_vec(),
            states: e.states().iter().map(OperatorDoc::from_state).collect(),
            key_bits,
        }
    }

    pub fn to_ensemble(&self, tol: &Tolerances) -> Result<Ensemble> {
        let priors = ProbDist::new(self.probs.clone(), tol)?;
        let states = self
            .states
            .iter()
            .map(|doc| doc.to_state(tol))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(priors, states)
    }

    pub fn to_key_ensemble(&self, tol: &Tolerances) -> Result<KeyEnsemble> {
        let e = self.to_ensemble(tol)?;
        if let Some(bits) = self.key_bits {
            if (1usize << bits) != e.len() {
                return Err(Error::Parse(format!(
                    "key_bits = {} implies {} states, document has {}",
                    bits,
                    1usize << bits,
                    e.len()
                )));
            }
        }
        let priors = e.priors().clone();
        let mut ke = KeyEnsemble::new(e.states().to_vec(), Some(priors))?;
        if let Some(bits) = self.key_bits {
            if ke.has_uniform_priors() {
                ke = KeyEnsemble::from_key_bits(bits, e.states().to_vec())?;
            }
        }
        Ok(ke)
    }
}

/// One parsed input document of any supported kind.
#[derive(Debug, Clone)]
pub enum ParsedInput {
    Operator(DensityOperator),
    Ensemble { ensemble: Ensemble, key_bits: Option<u32> },
    Probs(ProbDist),
    Joint(JointDist),
}

impl ParsedInput {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedInput::Operator(_) => "operator",
            ParsedInput::Ensemble { .. } => "ensemble",
            ParsedInput::Probs(_) => "probs",
            ParsedInput::Joint(_) => "joint",
        }
    }
}

fn check_finite_slice(xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Parses a document, detecting its kind from the fields present.
pub fn parse_document(text: &str, tol: &Tolerances) -> Result<ParsedInput> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("top-level value must be an object".into()))?;

    if obj.contains_key("states") {
        let doc: EnsembleDoc =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        check_finite_slice(&doc.probs)?;
        let ensemble = doc.to_ensemble(tol)?;
        return Ok(ParsedInput::Ensemble {
            ensemble,
            key_bits: doc.key_bits,
        });
    }
    if obj.contains_key("matrix") {
        let doc: OperatorDoc =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(ParsedInput::Operator(doc.to_state(tol)?));
    }
    if obj.contains_key("joint") {
        let doc: JointDoc =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        for row in &doc.joint {
            check_finite_slice(row)?;
        }
        return Ok(ParsedInput::Joint(JointDist::from_rows(&doc.joint, tol)?));
    }
    if obj.contains_key("probs") {
        let doc: ProbsDoc =
            serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        check_finite_slice(&doc.probs)?;
        return Ok(ParsedInput::Probs(ProbDist::new(doc.probs, tol)?));
    }
    Err(Error::Parse(
        "document has none of the recognized fields: matrix, states, probs, joint".into(),
    ))
}

/// Reads and parses a document from disk.
pub fn read_document(path: &std::path::Path, tol: &Tolerances) -> Result<ParsedInput> {
    let text = std::fs::read_to_string(path)?;
    parse_document(&text, tol)
}

/// Serializes an instance for failure reports, so a failing suite instance
/// can be re-run in isolation.
pub fn ensemble_to_json(e: &Ensemble) -> String {
    serde_json::to_string(&EnsembleDoc::from_ensemble(e, None)).expect("serialization")
}

pub fn operator_to_json(s: &DensityOperator) -> String {
    serde_json::to_string(&OperatorDoc::from_state(s)).expect("serialization")
}

pub fn probs_to_json(p: &ProbDist) -> String {
    serde_json::to_string(&ProbsDoc {
        probs: p.as_slice().to_vec(),
    })
    .expect("serialization")
}

pub fn joint_to_json(j: &JointDist) -> String {
    let rows: Vec<Vec<f64>> = (0..j.nx())
        .map(|x| (0..j.ny()).map(|y| j.get(x, y)).collect())
        .collect();
    serde_json::to_string(&JointDoc { joint: rows }).expect("serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::maximally_mixed;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn operator_round_trip() {
        let rho = maximally_mixed(2);
        let json = operator_to_json(&rho);
        match parse_document(&json, &tol()).unwrap() {
            ParsedInput::Operator(parsed) => {
                assert!(crate::linalg::max_entry_diff(parsed.matrix(), rho.matrix()) < 1e-15);
            }
            other => panic!("wrong kind {}", other.kind()),
        }
    }

    #[test]
    fn ensemble_round_trip_with_key_bits() {
        let e = Ensemble::uniform(vec![maximally_mixed(2), maximally_mixed(2)]).unwrap();
        let doc = EnsembleDoc::from_ensemble(&e, Some(1));
        let json = serde_json::to_string(&doc).unwrap();
        match parse_document(&json, &tol()).unwrap() {
            ParsedInput::Ensemble { ensemble, key_bits } => {
                assert_eq!(ensemble.len(), 2);
                assert_eq!(key_bits, Some(1));
            }
            other => panic!("wrong kind {}", other.kind()),
        }
        let ke = doc.to_key_ensemble(&tol()).unwrap();
        assert_eq!(ke.key_bits(), Some(1));
    }

    #[test]
    fn distribution_documents() {
        match parse_document(r#"{"probs": [0.25, 0.75]}"#, &tol()).unwrap() {
            ParsedInput::Probs(p) => assert_eq!(p.len(), 2),
            other => panic!("wrong kind {}", other.kind()),
        }
        match parse_document(r#"{"joint": [[0.4, 0.1], [0.1, 0.4]]}"#, &tol()).unwrap() {
            ParsedInput::Joint(j) => assert_eq!((j.nx(), j.ny()), (2, 2)),
            other => panic!("wrong kind {}", other.kind()),
        }
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_document("not json", &tol()).is_err());
        assert!(parse_document(r#"{"something": 1}"#, &tol()).is_err());
        // JSON has no NaN/Inf literals; serde_json rejects them at parse time
        assert!(parse_document(r#"{"probs": [NaN, 0.5]}"#, &tol()).is_err());
        // a probs vector that does not normalize is a validation error
        assert!(matches!(
            parse_document(r#"{"probs": [0.5, 0.6]}"#, &tol()),
            Err(Error::NotNormalized(_))
        ));
        // huge literals overflow to Inf and must be rejected, not absorbed
        assert!(matches!(
            parse_document(r#"{"probs": [1e999, 0.5]}"#, &tol()),
            Err(Error::NonFinite) | Err(Error::Parse(_))
        ));
    }

    #[test]
    fn wrong_dim_is_a_parse_error() {
        let json = r#"{"dim": 3, "matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}"#;
        assert!(matches!(
            parse_document(json, &tol()),
            Err(Error::Parse(_))
        ));
    }
}
