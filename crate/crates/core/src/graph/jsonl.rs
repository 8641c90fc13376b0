//! JSON-lines graph records:
//! `{"id": "g1", "n": 4, "edges": [[0, 1], [1, 2]], "features": [[1.0], [0.5]]}`.
//! `id` and `features` are optional; `features[i]` belongs to `edges[i]`.

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Largest node count a record may declare.
pub const MAX_RECORD_NODES: usize = 1 << 20;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<Vec<Vec<f64>>>,
}

impl GraphRecord {
    pub fn from_graph(id: Option<String>, g: &Graph) -> Self {
        let edges: Vec<[usize; 2]> = g.edges().map(|(u, v)| [u, v]).collect();
        let features = g.features().map(|f| {
            edges
                .iter()
                .map(|&[u, v]| f.get(u, v).expect("every edge has features").to_vec())
                .collect()
        });
        GraphRecord {
            id,
            n: g.node_count(),
            edges,
            features,
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        if self.n > MAX_RECORD_NODES {
            return Err(Error::InvalidGraph(format!(
                "{} nodes exceeds the record limit of {MAX_RECORD_NODES}",
                self.n
            )));
        }
        let edges = self.edges.iter().map(|&[u, v]| (u, v));
        match &self.features {
            None => Graph::new(self.n, edges),
            Some(f) => {
                if f.len() != self.edges.len() {
                    return Err(Error::InvalidGraph(format!(
                        "{} feature vectors for {} edges",
                        f.len(),
                        self.edges.len()
                    )));
                }
                Graph::with_features(self.n, edges.zip(f.iter().cloned()))
            }
        }
    }
}

/// Parses one record.
pub fn parse_graph_record(line: &str) -> Result<(Option<String>, Graph)> {
    let rec: GraphRecord = serde_json::from_str(line).map_err(|e| Error::GraphRecord {
        line: 1,
        reason: e.to_string(),
    })?;
    let g = rec.to_graph()?;
    Ok((rec.id, g))
}

/// Parses a JSON-lines file, skipping blank lines.
pub fn parse_graph_jsonl(text: &str) -> Result<Vec<(Option<String>, Graph)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed = parse_graph_record(line).map_err(|e| Error::GraphRecord {
            line: idx + 1,
            reason: match e {
                Error::GraphRecord { reason, .. } => reason,
                other => other.to_string(),
            },
        })?;
        out.push(parsed);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oversized_records_are_rejected() {
        let line = format!("{{\"n\": {}, \"edges\": []}}", MAX_RECORD_NODES + 1);
        assert!(parse_graph_record(&line).is_err());
    }

    #[test]
    fn record_round_trip() {
        let g =
            Graph::with_features(3, [((0, 1), vec![1.0, 2.0]), ((1, 2), vec![0.5, 0.0])]).unwrap();
        let rec = GraphRecord::from_graph(Some("a".into()), &g);
        let line = serde_json::to_string(&rec).unwrap();
        let (id, back) = parse_graph_record(&line).unwrap();
        assert_eq!(id.as_deref(), Some("a"));
        assert_eq!(back, g);
    }

    #[test]
    fn bad_records() {
        assert!(parse_graph_record("{\"n\":2,\"edges\":[[0,2]]}").is_err());
        assert!(parse_graph_record("{\"n\":2,\"edges\":[[0,1]],\"features\":[]}").is_err());
        assert!(parse_graph_record("{\"n\":2,\"edges\":[],\"extra\":1}").is_err());
        let err = parse_graph_jsonl("{\"n\":1,\"edges\":[]}\n\nnope\n").unwrap_err();
        assert!(matches!(err, Error::GraphRecord { line: 3, .. }));
    }
}
