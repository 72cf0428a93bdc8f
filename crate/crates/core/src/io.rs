//! JSON documents for automata and measures.
//!
//! Automaton:
//! ```json
//! {"coefficients": {"0": [[0,1],[1,0]], "1": [[1,0],[0,0]]}, "group": "2,2"}
//! ```
//! Measure:
//! ```json
//! {"type": "bernoulli", "weights": [0.95, 0.05]}
//! {"type": "markov", "transition": [[0.9,0.1],[0.3,0.7]], "stationary": [0.75,0.25]}
//! ```
//! Measures may carry an optional `group`; otherwise the automaton's group is used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ca::AbelianCA;
use crate::error::{Error, Result};
use crate::group::{Endomorphism, GroupSpec};
use crate::spectral::{MeasureKind, MeasureSpec};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaDoc {
    coefficients: BTreeMap<i64, Vec<Vec<i64>>>,
    group: String,
}

pub fn ca_to_json(f: &AbelianCA) -> String {
    let doc = CaDoc {
        coefficients: f
            .coefficients()
            .iter()
            .map(|(&i, h)| {
                let rows = h
                    .rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|x| x as i64).collect())
                    .collect();
                (i, rows)
            })
            .collect(),
        group: f.spec().to_string(),
    };
    serde_json::to_string(&doc).expect("automaton serializes")
}

pub fn ca_from_json(text: &str) -> Result<AbelianCA> {
    let doc: CaDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("automaton JSON: {e}")))?;
    let spec = GroupSpec::parse(&doc.group)?;
    let coefficients = doc
        .coefficients
        .iter()
        .map(|(&i, rows)| Ok((i, Endomorphism::new(&spec, rows)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    AbelianCA::new(&spec, coefficients)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum MeasureDoc {
    Bernoulli {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<String>,
        weights: Vec<f64>,
    },
    Markov {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stationary: Option<Vec<f64>>,
        transition: Vec<Vec<f64>>,
    },
}

pub fn measure_to_json(mu: &MeasureSpec) -> String {
    let group = Some(mu.spec().to_string());
    let doc = match mu.kind() {
        MeasureKind::Bernoulli { weights } => MeasureDoc::Bernoulli {
            group,
            weights: weights.clone(),
        },
        MeasureKind::Markov {
            transition,
            stationary,
        } => MeasureDoc::Markov {
            group,
            stationary: Some(stationary.clone()),
            transition: transition.clone(),
        },
    };
    serde_json::to_string(&doc).expect("measure serializes")
}

/// Parses a measure; `default_group` applies when the document names none.
/// A missing Markov `stationary` vector is solved for.
pub fn measure_from_json(text: &str, default_group: Option<&GroupSpec>) -> Result<MeasureSpec> {
    let doc: MeasureDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("measure JSON: {e}")))?;
    let resolve = |group: &Option<String>| -> Result<GroupSpec> {
        match (group, default_group) {
            (Some(g), Some(d)) => {
                let spec = GroupSpec::parse(g)?;
                if &spec != d {
                    return Err(Error::SpecMismatch {
                        expected: d.to_string(),
                        found: spec.to_string(),
                    });
                }
                Ok(spec)
            }
            (Some(g), None) => GroupSpec::parse(g),
            (None, Some(d)) => Ok(d.clone()),
            (None, None) => Err(Error::Parse("measure names no group".into())),
        }
    };
    match doc {
        MeasureDoc::Bernoulli { group, weights } => MeasureSpec::bernoulli(&resolve(&group)?, weights),
        MeasureDoc::Markov {
            group,
            stationary,
            transition,
        } => {
            let spec = resolve(&group)?;
            match stationary {
                Some(pi) => MeasureSpec::markov(&spec, transition, pi),
                None => MeasureSpec::markov_stationary(&spec, transition),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;

    #[test]
    fn ca_round_trip_is_bit_exact() {
        for name in ["add2", "F2", "H2", "sec4_dual", "IGn:3:2", "improperZ4"] {
            let f = builtin(name).unwrap();
            let text = ca_to_json(&f);
            let back = ca_from_json(&text).unwrap();
            assert_eq!(back, f);
            assert_eq!(ca_to_json(&back), text);
        }
    }

    #[test]
    fn ca_json_layout() {
        let text = ca_to_json(&builtin("F2").unwrap());
        assert_eq!(
            text,
            r#"{"coefficients":{"0":[[0,1],[1,0]],"1":[[1,0],[0,0]]},"group":"2,2"}"#
        );
        let neg = ca_to_json(&builtin("H2").unwrap());
        assert!(neg.starts_with(r#"{"coefficients":{"-1":"#));
    }

    #[test]
    fn ca_json_errors() {
        assert!(matches!(ca_from_json("{"), Err(Error::Parse(_))));
        assert!(ca_from_json(r#"{"coefficients":{"0":[[1]]},"group":"2,2"}"#).is_err());
        assert!(ca_from_json(r#"{"coefficients":{"0":[[1,0],[1,1]]},"group":"2,4"}"#).is_err());
        assert!(matches!(
            ca_from_json(r#"{"coefficients":{},"group":"2","extra":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn measure_round_trip() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let mu = measure_from_json(r#"{"type":"bernoulli","weights":[0.95,0.05]}"#, Some(&z2)).unwrap();
        let text = measure_to_json(&mu);
        assert_eq!(measure_from_json(&text, None).unwrap(), mu);
        let m = measure_from_json(
            r#"{"type":"markov","transition":[[0.9,0.1],[0.3,0.7]]}"#,
            Some(&z2),
        )
        .unwrap();
        assert!(!m.is_bernoulli());
        assert!(measure_from_json(r#"{"type":"bernoulli","weights":[1.0]}"#, None).is_err());
        let v = GroupSpec::parse("2,2").unwrap();
        assert!(matches!(
            measure_from_json(r#"{"type":"bernoulli","group":"2","weights":[0.5,0.5]}"#, Some(&v)),
            Err(Error::SpecMismatch { .. })
        ));
    }
}
