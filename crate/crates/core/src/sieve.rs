//! Sieves: per-node BFS level arcs pointing back toward the node, and the
//! path-count matrices of the elements they generate.
//!
//! For a node `v`, level `k` holds the arcs `w -> u` with `w` at distance `k`
//! and `u` at distance `k - 1`. Arcs within one level never compose, so the
//! matrix of a level is just the sum of its arc matrices, and
//! `Image(v, k) = T_k ∘ Image(v, k - 1)` with `Image(v, 0) = 0`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::algebra::{FeatureVec, Matrix, One, Scalar, SparseMatrix};
use crate::error::{Error, Result};
use crate::graph::{edge_key, Edge, Graph};
use crate::modg::{bullet, bullet_fold, SMultElement};

/// A sieve depth. `Stable` is the level at which the node's sieve stops
/// growing (written `-1` on the command line).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(into = "i64", try_from = "i64")]
pub enum Level {
    At(usize),
    Stable,
}

impl From<Level> for i64 {
    fn from(l: Level) -> i64 {
        match l {
            Level::At(k) => k as i64,
            Level::Stable => -1,
        }
    }
}

impl TryFrom<i64> for Level {
    type Error = Error;

    fn try_from(x: i64) -> Result<Level> {
        match x {
            -1 => Ok(Level::Stable),
            k if k >= 0 => Ok(Level::At(k as usize)),
            k => Err(Error::Config(format!(
                "level {k} is neither -1 nor non-negative"
            ))),
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Level> {
        let x: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("'{s}' is not a level")))?;
        Level::try_from(x)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", i64::from(*self))
    }
}

/// BFS decomposition around one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveLevels {
    node: usize,
    /// `rings[k]` is `N_k(v)`, sorted; `rings[0] = [v]`.
    rings: Vec<Vec<usize>>,
    /// `arcs[k - 1]` is `M_k(v)` as `(w, u)` pairs, sorted.
    arcs: Vec<Vec<(usize, usize)>>,
}

impl SieveLevels {
    pub fn node(&self) -> usize {
        self.node
    }

    /// First `k` with `M_{k+1}` empty.
    pub fn k0(&self) -> usize {
        self.arcs.len()
    }

    /// `N_k(v)`; empty beyond the last ring.
    pub fn ring(&self, k: usize) -> &[usize] {
        self.rings.get(k).map_or(&[], Vec::as_slice)
    }

    /// `M_k(v)` for `k >= 1`; empty for `k = 0` and beyond `k0`.
    pub fn arcs(&self, k: usize) -> &[(usize, usize)] {
        if k == 0 {
            return &[];
        }
        self.arcs.get(k - 1).map_or(&[], Vec::as_slice)
    }

    /// Clamps a requested level to `0..=k0`.
    pub fn resolve(&self, level: Level) -> usize {
        match level {
            Level::Stable => self.k0(),
            Level::At(k) => k.min(self.k0()),
        }
    }
}

pub fn build_levels(g: &Graph, v: usize) -> SieveLevels {
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    dist[v] = 0;
    let mut rings = vec![vec![v]];
    let mut arcs = Vec::new();
    loop {
        let prev = rings.last().expect("nonempty");
        let k = rings.len();
        let mut next = Vec::new();
        for &u in prev {
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = k;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        let mut level: Vec<(usize, usize)> = next
            .iter()
            .flat_map(|&w| {
                g.neighbors(w)
                    .iter()
                    .filter(|&&u| dist[u] == k - 1)
                    .map(move |&u| (w, u))
            })
            .collect();
        level.sort_unstable();
        arcs.push(level);
        rings.push(next);
    }
    SieveLevels {
        node: v,
        rings,
        arcs,
    }
}

/// Weight placed on each arc of a level matrix.
#[derive(Debug, Clone)]
pub enum ArcWeights<T: Scalar> {
    Uniform(T),
    PerEdge {
        shape: T::Shape,
        values: BTreeMap<Edge, T>,
    },
}

impl<T: Scalar> ArcWeights<T> {
    pub fn shape(&self) -> T::Shape {
        match self {
            ArcWeights::Uniform(x) => x.shape(),
            ArcWeights::PerEdge { shape, .. } => *shape,
        }
    }

    pub fn weight(&self, u: usize, v: usize) -> Result<T> {
        match self {
            ArcWeights::Uniform(x) => Ok(x.clone()),
            ArcWeights::PerEdge { values, .. } => values
                .get(&edge_key(u, v))
                .cloned()
                .ok_or_else(|| Error::Invariant(format!("no weight for edge {{{u}, {v}}}"))),
        }
    }
}

impl<T: One> ArcWeights<T> {
    pub fn unit() -> Self {
        ArcWeights::Uniform(T::one())
    }
}

impl ArcWeights<FeatureVec> {
    /// Edge features scaled by `gamma`; both directions of an edge share the
    /// same vector.
    pub fn from_features(g: &Graph, gamma: f64) -> Result<Self> {
        let feats = g.features().ok_or_else(|| {
            Error::Config("featured mode needs a graph with edge features".into())
        })?;
        let values = g
            .edges()
            .map(|(u, v)| {
                let f = feats.get(u, v).expect("every edge has a feature vector");
                ((u, v), FeatureVec(f.to_vec()).scaled(gamma))
            })
            .collect();
        Ok(ArcWeights::PerEdge {
            shape: feats.dim(),
            values,
        })
    }
}

/// Matrix of one level: entry `(w, u)` carries the weight of arc `w -> u`.
/// Fails if two arcs of the set compose.
pub fn tr_level<T: Scalar>(
    n: usize,
    arcs: &[(usize, usize)],
    weights: &ArcWeights<T>,
) -> Result<SparseMatrix<T>> {
    let heads: Vec<usize> = arcs.iter().map(|&(_, u)| u).collect();
    if let Some(&(w, u)) = arcs.iter().find(|(w, _)| heads.contains(w)) {
        return Err(Error::Invariant(format!(
            "arc {w}->{u} composes with another arc of the same level"
        )));
    }
    let mut triplets = Vec::with_capacity(arcs.len());
    for &(w, u) in arcs {
        triplets.push((w, u, weights.weight(w, u)?));
    }
    SparseMatrix::from_triplets(n, weights.shape(), triplets)
}

/// How the level recurrence multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Sparse when fewer than 10% of ordered node pairs are edges.
    #[default]
    Auto,
    Dense,
    Sparse,
}

impl Backend {
    fn use_sparse(self, g: &Graph) -> bool {
        match self {
            Backend::Auto => g.density() < 0.10,
            Backend::Dense => false,
            Backend::Sparse => true,
        }
    }
}

/// An image (or co-image) matrix together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageMatrix<T: Scalar> {
    pub node: usize,
    pub level: Level,
    /// The level actually used after clamping to `k0`.
    pub resolved: usize,
    pub matrix: Matrix<T>,
}

struct NodeImages<T: Scalar> {
    levels: SieveLevels,
    /// `images[k] = Image(v, k)` for every `k` computed so far.
    images: Vec<Arc<Matrix<T>>>,
}

/// Lazily computed `Image(v, k)` for every node of one graph under one
/// weighting. Computing level `k` keeps every lower level. Safe to share
/// between threads; each node is locked independently.
pub struct ImageCache<'g, T: Scalar> {
    graph: &'g Graph,
    weights: ArcWeights<T>,
    sparse: bool,
    nodes: Vec<Mutex<Option<NodeImages<T>>>>,
}

impl<'g, T: Scalar> ImageCache<'g, T> {
    pub fn new(graph: &'g Graph, weights: ArcWeights<T>, backend: Backend) -> Self {
        ImageCache {
            graph,
            weights,
            sparse: backend.use_sparse(graph),
            nodes: (0..graph.node_count()).map(|_| Mutex::new(None)).collect(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn is_sparse(&self) -> bool {
        self.sparse
    }

    fn with_node<R>(&self, v: usize, f: impl FnOnce(&mut NodeImages<T>) -> Result<R>) -> Result<R> {
        let slot = self.nodes.get(v).ok_or(Error::SizeMismatch {
            expected: self.nodes.len(),
            found: v + 1,
        })?;
        let mut guard = slot.lock().expect("image cache lock poisoned");
        let entry = guard.get_or_insert_with(|| {
            let zero = Arc::new(Matrix::zeros(self.graph.node_count(), self.weights.shape()));
            NodeImages {
                levels: build_levels(self.graph, v),
                images: vec![zero],
            }
        });
        f(entry)
    }

    pub fn levels(&self, v: usize) -> Result<SieveLevels> {
        self.with_node(v, |e| Ok(e.levels.clone()))
    }

    /// `Image(v, level)`, clamped to the node's `k0`. Returns the resolved level too.
    pub fn image(&self, v: usize, level: Level) -> Result<(usize, Arc<Matrix<T>>)> {
        let n = self.graph.node_count();
        self.with_node(v, |e| {
            let k = e.levels.resolve(level);
            while e.images.len() <= k {
                let j = e.images.len();
                let step = tr_level(n, e.levels.arcs(j), &self.weights)?;
                let prev = e.images.last().expect("level 0 is always present");
                let next = if self.sparse {
                    step.circ_dense(prev)?
                } else {
                    step.to_dense().circ(prev)?
                };
                e.images.push(Arc::new(next));
            }
            Ok((k, Arc::clone(&e.images[k])))
        })
    }

    /// `CoImage(v, level)`, the transpose of the image.
    pub fn coimage(&self, v: usize, level: Level) -> Result<(usize, Matrix<T>)> {
        let (k, m) = self.image(v, level)?;
        Ok((k, m.transpose()))
    }

    /// Fills the cache for every node up to `level`, in parallel.
    pub fn precompute(&self, level: Level) -> Result<()> {
        (0..self.graph.node_count())
            .into_par_iter()
            .try_for_each(|v| self.image(v, level).map(|_| ()))
    }
}

/// Single-shot `Image(v, level)`.
pub fn image<T: Scalar>(
    g: &Graph,
    v: usize,
    level: Level,
    weights: &ArcWeights<T>,
) -> Result<ImageMatrix<T>> {
    let cache = ImageCache::new(g, weights.clone(), Backend::Auto);
    let (resolved, m) = cache.image(v, level)?;
    Ok(ImageMatrix {
        node: v,
        level,
        resolved,
        matrix: Arc::unwrap_or_clone(m),
    })
}

/// Single-shot `CoImage(v, level)`.
pub fn coimage<T: Scalar>(
    g: &Graph,
    v: usize,
    level: Level,
    weights: &ArcWeights<T>,
) -> Result<ImageMatrix<T>> {
    let im = image(g, v, level, weights)?;
    Ok(ImageMatrix {
        matrix: im.matrix.transpose(),
        ..im
    })
}

/// Symbolic `Sieve(v, k) = D_k • ... • D_1`, each `D_i` the product of the
/// single arcs of `M_i(v)`.
pub fn sieve_element(g: &Graph, v: usize, level: Level) -> Result<SMultElement> {
    let levels = build_levels(g, v);
    let k = levels.resolve(level);
    let n = g.node_count();
    let mut acc = SMultElement::identity(n);
    for i in (1..=k).rev() {
        acc = bullet(&acc, &level_element(n, levels.arcs(i).iter().copied())?)?;
    }
    Ok(acc)
}

/// Symbolic `CoSieve(v, l) = D_1^op • ... • D_l^op`.
pub fn cosieve_element(g: &Graph, v: usize, level: Level) -> Result<SMultElement> {
    let levels = build_levels(g, v);
    let k = levels.resolve(level);
    let n = g.node_count();
    let mut acc = SMultElement::identity(n);
    for i in 1..=k {
        let reversed = levels.arcs(i).iter().map(|&(w, u)| (u, w));
        acc = bullet(&acc, &level_element(n, reversed)?)?;
    }
    Ok(acc)
}

fn level_element(n: usize, arcs: impl Iterator<Item = (usize, usize)>) -> Result<SMultElement> {
    let parts: Vec<SMultElement> = arcs.map(|(w, u)| SMultElement::arc(n, w, u)).collect();
    bullet_fold(n, &parts)
}

/// Two-hop cover summed into one matrix: for every node `k` and neighbour
/// `j`, add `T_j ∘ E_{j→k}`, where `T_j` is the sink of `j` (column `j` of
/// the adjacency matrix) and `E_{j→k}` the single arc `j -> k`.
pub fn two_hop_transform(g: &Graph) -> Matrix<BigInt> {
    let n = g.node_count();
    let mut total: Matrix<BigInt> = Matrix::zeros(n, ());
    let one = BigInt::from(1);
    for k in 0..n {
        for &j in g.neighbors(k) {
            let sink = SparseMatrix::from_triplets(
                n,
                (),
                g.neighbors(j).iter().map(|&w| (w, j, one.clone())),
            )
            .expect("neighbours are in range");
            let arc = SparseMatrix::from_triplets(n, (), [(j, k, one.clone())])
                .expect("nodes are in range");
            let term = sink.circ(&arc).expect("same dimension");
            for (r, c, x) in term.triplets() {
                total.get_mut(*r, *c).add_assign(x);
            }
        }
    }
    total
}
