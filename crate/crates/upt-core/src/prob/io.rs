//! JSON document forms for joint pmfs and mechanisms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::channel::Channel;
use crate::prob::joint::{joint_from, JointPmf};
use crate::prob::mechanism::{Mechanism, ObservationModel};
use crate::prob::pmf::Pmf;

/// On-disk joint-pmf document. Either the dense table form
/// `{"p_xy": [[...]]}` or the factored form
/// `{"p_x": [...], "p_y_given_x": [[...]]}`, both row-major in `x`,
/// with optional symbol labels.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JointDoc {
    Table {
        #[serde(skip_serializing_if = "Option::is_none")]
        x_labels: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        y_labels: Option<Vec<String>>,
        p_xy: Vec<Vec<f64>>,
    },
    Factored {
        #[serde(skip_serializing_if = "Option::is_none")]
        x_labels: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        y_labels: Option<Vec<String>>,
        p_x: Vec<f64>,
        p_y_given_x: Vec<Vec<f64>>,
    },
}

pub fn joint_from_json(text: &str) -> Result<JointPmf> {
    joint_from_json_with(text, crate::tol::TOL_PMF)
}

/// Parses a joint document validating at the given pmf tolerance. The
/// dense-table form pre-checks row masses at `tau_pmf` before the
/// standard validation; the factored form validates each pmf at it.
pub fn joint_from_json_with(text: &str, tau_pmf: f64) -> Result<JointPmf> {
    let doc: JointDoc = serde_json::from_str(text)?;
    match doc {
        JointDoc::Table {
            x_labels,
            y_labels,
            p_xy,
        } => {
            let total: f64 = p_xy.iter().flatten().sum();
            if (total - 1.0).abs() > tau_pmf {
                return Err(Error::SumNotOne { sum: total });
            }
            Ok(JointPmf::validate(p_xy)?.with_labels(x_labels, y_labels))
        }
        JointDoc::Factored {
            x_labels,
            y_labels,
            p_x,
            p_y_given_x,
        } => {
            let px = Pmf::validate_with(&p_x, tau_pmf)?;
            let rows = p_y_given_x
                .iter()
                .map(|r| Pmf::validate_with(r, tau_pmf))
                .collect::<Result<Vec<_>>>()?;
            let ch = Channel::from_pmf_rows(rows)?;
            Ok(joint_from(&px, &ch)?.with_labels(x_labels, y_labels))
        }
    }
}

pub fn joint_to_json(j: &JointPmf) -> String {
    let doc = JointDoc::Table {
        x_labels: j.x_labels().map(|l| l.to_vec()),
        y_labels: j.y_labels().map(|l| l.to_vec()),
        p_xy: j.table().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("joint doc serializes")
}

#[derive(Debug, Serialize, Deserialize)]
struct MechanismDoc {
    model: String,
    u_labels: Vec<String>,
    kernel: BTreeMap<String, Vec<f64>>,
}

/// Serializes a mechanism. Full-observation kernels are keyed as
/// `"(x,y)"` with keys restricted to the support pairs given; public
/// kernels are keyed by `"y"` over the whole alphabet.
pub fn mechanism_to_json(m: &Mechanism, supp: &[(usize, usize)], ny: usize) -> String {
    let mut kernel = BTreeMap::new();
    match m.model {
        ObservationModel::FullObservation => {
            for &(x, y) in supp {
                kernel.insert(
                    format!("({x},{y})"),
                    m.kernel.row(x * ny + y).probs().to_vec(),
                );
            }
        }
        ObservationModel::PublicObservation => {
            for y in 0..m.kernel.n_inputs() {
                kernel.insert(format!("{y}"), m.kernel.row(y).probs().to_vec());
            }
        }
    }
    let doc = MechanismDoc {
        model: match m.model {
            ObservationModel::FullObservation => "full".into(),
            ObservationModel::PublicObservation => "public".into(),
        },
        u_labels: m.u_labels.clone(),
        kernel,
    };
    serde_json::to_string_pretty(&doc).expect("mechanism doc serializes")
}

fn parse_pair_key(key: &str) -> Result<(usize, usize)> {
    let stripped = key
        .strip_prefix('(')
        .and_then(|k| k.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidInput(format!("bad kernel key {key:?}")))?;
    let (a, b) = stripped
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("bad kernel key {key:?}")))?;
    let x = a
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::InvalidInput(format!("bad kernel key {key:?}")))?;
    let y = b
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::InvalidInput(format!("bad kernel key {key:?}")))?;
    Ok((x, y))
}

/// Reloads a mechanism for a source with alphabet sizes `nx`, `ny`.
/// Full-model rows absent from the document (outside the support) are
/// restored to the canonical point mass on the first `u`.
pub fn mechanism_from_json(text: &str, nx: usize, ny: usize) -> Result<Mechanism> {
    let doc: MechanismDoc = serde_json::from_str(text)?;
    let nu = doc.u_labels.len();
    if nu == 0 {
        return Err(Error::EmptyInput);
    }
    let canonical = || {
        let mut row = vec![0.0; nu];
        row[0] = 1.0;
        row
    };
    let (model, rows) = match doc.model.as_str() {
        "full" => {
            let mut rows = vec![canonical(); nx * ny];
            for (key, row) in &doc.kernel {
                let (x, y) = parse_pair_key(key)?;
                if x >= nx || y >= ny {
                    return Err(Error::InvalidInput(format!(
                        "kernel key ({x},{y}) outside {nx}x{ny} alphabet"
                    )));
                }
                rows[x * ny + y] = row.clone();
            }
            (ObservationModel::FullObservation, rows)
        }
        "public" => {
            let mut rows = vec![canonical(); ny];
            for (key, row) in &doc.kernel {
                let y = key
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad kernel key {key:?}")))?;
                if y >= ny {
                    return Err(Error::InvalidInput(format!(
                        "kernel key {y} outside alphabet of size {ny}"
                    )));
                }
                rows[y] = row.clone();
            }
            (ObservationModel::PublicObservation, rows)
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown mechanism model {other:?}"
            )))
        }
    };
    let kernel = Channel::from_rows(rows)?;
    Ok(Mechanism {
        model,
        kernel,
        u_labels: doc.u_labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::prob::mechanism::evaluate_mechanism;
    use approx::assert_abs_diff_eq;

    #[test]
    fn joint_doc_forms_agree() {
        let table = r#"{"p_xy": [[0.15, 0.2, 0.0625, 0.05], [0.35, 0.05, 0.0625, 0.075]]}"#;
        let factored = r#"{
            "p_x": [0.4625, 0.5375],
            "p_y_given_x": [
                [0.32432432432432434, 0.43243243243243246, 0.13513513513513514, 0.10810810810810811],
                [0.6511627906976745, 0.09302325581395349, 0.11627906976744186, 0.13953488372093023]
            ]
        }"#;
        let a = joint_from_json(table).unwrap();
        let b = joint_from_json(factored).unwrap();
        for x in 0..2 {
            for y in 0..4 {
                assert_abs_diff_eq!(a.prob(x, y), b.prob(x, y), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn joint_doc_round_trips() {
        let j = fixtures::numerical_8x8();
        let back = joint_from_json(&joint_to_json(&j)).unwrap();
        assert_eq!(j.table(), back.table());
    }

    #[test]
    fn mechanism_round_trip_preserves_evaluation() {
        let j = fixtures::example3_joint();
        let m = Mechanism::identity_public(j.ny());
        let text = mechanism_to_json(&m, &j.support(), j.ny());
        let back = mechanism_from_json(&text, j.nx(), j.ny()).unwrap();
        let e1 = evaluate_mechanism(&j, &m).unwrap();
        let e2 = evaluate_mechanism(&j, &back).unwrap();
        assert_abs_diff_eq!(e1.leakage_bits, e2.leakage_bits, epsilon = 1e-12);
        assert_abs_diff_eq!(e1.utility_bits, e2.utility_bits, epsilon = 1e-12);
    }

    #[test]
    fn rejects_unknown_model() {
        let text = r#"{"model": "sideways", "u_labels": ["u1"], "kernel": {}}"#;
        assert!(mechanism_from_json(text, 2, 2).is_err());
    }
}
