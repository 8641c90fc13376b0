//! Simple undirected graphs with a fixed node order.
//!
//! Nodes are the indices `0..n`. The storage order is the node order used by
//! every matrix built from a graph, so relabeling a graph is exactly a
//! simultaneous row/column permutation of those matrices.

mod generators;
mod graph6;
mod jsonl;
mod permutation;

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};

pub use generators::{builtin_graph, generate_csl, BUILTIN_NAMES, CSL_SKIPS};
pub use graph6::{emit_graph6, parse_graph6, parse_graph6_file};
pub use jsonl::{parse_graph_jsonl, parse_graph_record, GraphRecord, MAX_RECORD_NODES};
pub use permutation::NodePermutation;

/// Normalized undirected edge, always `(min, max)`.
pub type Edge = (usize, usize);

#[inline]
pub(crate) fn edge_key(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    features: Option<EdgeFeatures>,
}

/// One real feature vector per undirected edge, all of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFeatures {
    dim: usize,
    values: BTreeMap<Edge, Vec<f64>>,
}

impl EdgeFeatures {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, u: usize, v: usize) -> Option<&[f64]> {
        self.values.get(&edge_key(u, v)).map(Vec::as_slice)
    }
}

impl Graph {
    /// Builds a simple graph. Rejects self-loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "a graph needs at least one node".into(),
            ));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{u}, {v}}} has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            if adjacency[u].contains(&v) {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{u}, {v}}}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            adjacency,
            features: None,
        })
    }

    /// Builds a graph whose edges each carry a feature vector of the same
    /// dimension.
    pub fn with_features(
        n: usize,
        edges: impl IntoIterator<Item = (Edge, Vec<f64>)>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        let mut dim = None;
        let mut plain = Vec::new();
        for ((u, v), feat) in edges {
            match dim {
                None => dim = Some(feat.len()),
                Some(m) if m != feat.len() => {
                    return Err(Error::FeatureDimension {
                        expected: m,
                        found: feat.len(),
                    })
                }
                Some(_) => {}
            }
            plain.push((u, v));
            values.insert(edge_key(u, v), feat);
        }
        let mut g = Graph::new(n, plain)?;
        g.features = Some(EdgeFeatures {
            dim: dim.unwrap_or(0),
            values,
        });
        Ok(g)
    }

    /// Erdős–Rényi G(n, p).
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n.max(1), edges).expect("generated edges are simple")
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn features(&self) -> Option<&EdgeFeatures> {
        self.features.as_ref()
    }

    pub fn feature_dim(&self) -> Option<usize> {
        self.features.as_ref().map(EdgeFeatures::dim)
    }

    /// Fraction of ordered node pairs joined by an edge.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (2 * self.edge_count()) as f64 / (self.n * self.n) as f64
    }

    /// Relabels node `i` as `p(i)`. Edge features travel with their edges.
    pub fn permute(&self, p: &NodePermutation) -> Result<Graph> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        match &self.features {
            None => Graph::new(self.n, self.edges().map(|(u, v)| (p.apply(u), p.apply(v)))),
            Some(f) => {
                let mut g = Graph::with_features(
                    self.n,
                    self.edges()
                        .map(|(u, v)| ((p.apply(u), p.apply(v)), f.values[&(u, v)].clone())),
                )?;
                if let Some(out) = g.features.as_mut() {
                    out.dim = f.dim;
                }
                Ok(g)
            }
        }
    }

    /// Node sets of the connected components, each sorted, ordered by their
    /// smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &w in &self.adjacency[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Relabeled copy of `g`; see [`Graph::permute`].
pub fn permute_graph(g: &Graph, p: &NodePermutation) -> Result<Graph> {
    g.permute(p)
}
