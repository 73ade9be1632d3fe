//! Hypergraph files: JSON with 1-based vertex indices.
//!
//! ```json
//! { "n": 3, "labels": ["a", "b", "c"],
//!   "hyperedges": [ { "in": [1], "out": [2] }, { "in": [2, 3], "out": [] } ] }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, OrientedHypergraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub hyperedges: Vec<HyperedgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperedgeRecord {
    #[serde(rename = "in", default)]
    pub inputs: Vec<usize>,
    #[serde(rename = "out", default)]
    pub outputs: Vec<usize>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

impl HypergraphFile {
    pub fn from_hypergraph(g: &OrientedHypergraph) -> Self {
        let one = |v: &[usize]| v.iter().map(|&i| i + 1).collect();
        HypergraphFile {
            n: g.n(),
            labels: g.labels().map(<[String]>::to_vec),
            hyperedges: g
                .hyperedges()
                .iter()
                .map(|e| HyperedgeRecord {
                    inputs: one(&e.inputs),
                    outputs: one(&e.outputs),
                })
                .collect(),
        }
    }

    pub fn to_hypergraph(&self) -> Result<OrientedHypergraph> {
        let mut edges = Vec::with_capacity(self.hyperedges.len());
        for (h, rec) in self.hyperedges.iter().enumerate() {
            let zero = |v: &[usize], field: &str| -> Result<Vec<usize>> {
                v.iter()
                    .enumerate()
                    .map(|(k, &i)| {
                        if i == 0 || i > self.n {
                            Err(parse_err(
                                format!("hyperedges[{h}].{field}[{k}]"),
                                format!("vertex {i} outside 1..={}", self.n),
                            ))
                        } else {
                            Ok(i - 1)
                        }
                    })
                    .collect()
            };
            let (inputs, outputs) = (zero(&rec.inputs, "in")?, zero(&rec.outputs, "out")?);
            for (field, v) in [("in", &inputs), ("out", &outputs)] {
                let mut s = v.clone();
                s.sort_unstable();
                if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
                    return Err(parse_err(
                        format!("hyperedges[{h}].{field}"),
                        format!("vertex {} listed twice", w[0] + 1),
                    ));
                }
            }
            edges.push(Hyperedge::new(inputs, outputs));
        }
        let g = OrientedHypergraph::from_hyperedges(self.n, edges).map_err(|e| match e {
            Error::Overlap { hyperedge, vertex } => parse_err(
                format!("hyperedges[{hyperedge}]"),
                format!("vertex {} is both in and out", vertex + 1),
            ),
            Error::EmptyHyperedge { hyperedge } => {
                parse_err(format!("hyperedges[{hyperedge}]"), "empty hyperedge")
            }
            Error::IsolatedVertex { vertex } => {
                parse_err("hyperedges", format!("vertex {} lies in no hyperedge", vertex + 1))
            }
            other => parse_err("hyperedges", other.to_string()),
        })?;
        match &self.labels {
            Some(labels) => g
                .with_labels(labels.clone())
                .map_err(|e| parse_err("labels", e.to_string())),
            None => Ok(g),
        }
    }
}

/// Parses a hypergraph document. Syntax errors carry `line:column`.
pub fn parse_hypergraph(text: &str) -> Result<OrientedHypergraph> {
    let file: HypergraphFile = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    file.to_hypergraph()
}

pub fn read_hypergraph(path: &Path) -> Result<OrientedHypergraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_hypergraph(&text)
}

pub fn to_json(g: &OrientedHypergraph) -> String {
    serde_json::to_string_pretty(&HypergraphFile::from_hypergraph(g)).expect("plain data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"n": 3, "labels": ["a","b","c"],
            "hyperedges": [{"in":[1],"out":[2]},{"in":[2],"out":[3]},{"in":[3],"out":[1]}]}"#;
        let g = parse_hypergraph(text).unwrap();
        assert_eq!(g.hyperedges()[0].inputs, vec![0]);
        assert_eq!(parse_hypergraph(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn located_errors() {
        let overlap = r#"{"n": 2, "hyperedges": [{"in":[1,2],"out":[2]}]}"#;
        match parse_hypergraph(overlap) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "hyperedges[0]"),
            other => panic!("{other:?}"),
        }
        let range = r#"{"n": 2, "hyperedges": [{"in":[1],"out":[3]}]}"#;
        match parse_hypergraph(range) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "hyperedges[0].out[0]"),
            other => panic!("{other:?}"),
        }
        let syntax = "{\"n\": 2,\n \"hyperedges\": [}";
        match parse_hypergraph(syntax) {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line 2")),
            other => panic!("{other:?}"),
        }
    }
}
