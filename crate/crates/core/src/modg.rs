//! The symbolic monoid of directed subgraphs.
//!
//! Elements carry their arcs and an explicit set of allowed paths, so path
//! counts can be read off by enumeration. This is the reference the matrix
//! recurrences in [`crate::sieve`] are checked against; it is exponential and
//! meant for small graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Matrix, Scalar};
use crate::error::{Error, Result};
use crate::graph::{edge_key, Graph};

/// Default bound on the number of allowed paths an element may hold.
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

pub type ArcId = u64;

static NEXT_ARC_ID: AtomicU64 = AtomicU64::new(0);

fn fresh_id() -> ArcId {
    NEXT_ARC_ID.fetch_add(1, Ordering::Relaxed)
}

/// A directed tree inside a host graph. Arcs are identified by their index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedSubgraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl DirectedSubgraph {
    /// Validates that every arc lies on a host edge, no edge is used twice,
    /// and the underlying edges form a tree.
    pub fn new(host: &Graph, arcs: Vec<(usize, usize)>) -> Result<Self> {
        let bad = |msg: String| Error::InvalidSubgraph(msg);
        let mut used = BTreeSet::new();
        let mut nodes = BTreeSet::new();
        for &(u, v) in &arcs {
            if !host.has_edge(u, v) {
                return Err(bad(format!("{u}->{v} is not an edge of the host")));
            }
            if !used.insert(edge_key(u, v)) {
                return Err(bad(format!("edge {{{u}, {v}}} is used twice")));
            }
            nodes.insert(u);
            nodes.insert(v);
        }
        if !arcs.is_empty() {
            if arcs.len() + 1 != nodes.len() {
                return Err(bad("underlying edges contain a cycle".into()));
            }
            // Union-find style connectivity over the touched nodes.
            let mut parent: BTreeMap<usize, usize> = nodes.iter().map(|&x| (x, x)).collect();
            fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
                let mut r = x;
                while p[&r] != r {
                    r = p[&r];
                }
                p.insert(x, r);
                r
            }
            for &(u, v) in &arcs {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    return Err(bad("underlying edges contain a cycle".into()));
                }
                parent.insert(a, b);
            }
        }
        Ok(DirectedSubgraph {
            n: host.node_count(),
            arcs,
        })
    }

    pub fn empty(host: &Graph) -> Self {
        DirectedSubgraph {
            n: host.node_count(),
            arcs: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// `u ≤_D v`: a direction-respecting path leads from `u` to `v`.
    pub fn reaches(&self, u: usize, v: usize) -> bool {
        let mut stack = vec![u];
        let mut seen = BTreeSet::new();
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.arcs {
                if a == x && seen.insert(b) {
                    if b == v {
                        return true;
                    }
                    stack.push(b);
                }
            }
        }
        false
    }

    /// Random directed tree with up to `max_arcs` arcs grown from a random
    /// node of `host`; each arc gets a random direction.
    pub fn random<R: Rng + ?Sized>(host: &Graph, max_arcs: usize, rng: &mut R) -> Self {
        let n = host.node_count();
        let root = rng.gen_range(0..n);
        let mut in_tree = vec![false; n];
        in_tree[root] = true;
        let mut arcs = Vec::new();
        let target = rng.gen_range(0..=max_arcs);
        while arcs.len() < target {
            let mut frontier: Vec<(usize, usize)> = (0..n)
                .filter(|&u| in_tree[u])
                .flat_map(|u| host.neighbors(u).iter().map(move |&w| (u, w)))
                .filter(|&(_, w)| !in_tree[w])
                .collect();
            if frontier.is_empty() {
                break;
            }
            frontier.sort_unstable();
            let &(u, w) = frontier.choose(rng).expect("nonempty");
            in_tree[w] = true;
            arcs.push(if rng.gen_bool(0.5) { (u, w) } else { (w, u) });
        }
        DirectedSubgraph { n, arcs }
    }
}

/// A path given by the identifiers of the arcs it traverses, head to tail.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedPath {
    from: usize,
    to: usize,
    arcs: Vec<ArcId>,
}

impl DirectedPath {
    pub fn from(&self) -> usize {
        self.from
    }

    pub fn to(&self) -> usize {
        self.to
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    fn then(&self, next: &DirectedPath) -> DirectedPath {
        debug_assert_eq!(self.to, next.from);
        let mut arcs = self.arcs.clone();
        arcs.extend_from_slice(&next.arcs);
        DirectedPath {
            from: self.from,
            to: next.to,
            arcs,
        }
    }
}

/// All direction-respecting paths of `d`; arc identifiers are indices into
/// `d.arcs()`.
pub fn paths_of(d: &DirectedSubgraph) -> BTreeSet<DirectedPath> {
    let mut out_arcs: HashMap<usize, Vec<usize>> = HashMap::new();
    for (idx, &(u, _)) in d.arcs.iter().enumerate() {
        out_arcs.entry(u).or_default().push(idx);
    }
    let mut paths = BTreeSet::new();
    for (idx, &(u, v)) in d.arcs.iter().enumerate() {
        let mut stack = vec![DirectedPath {
            from: u,
            to: v,
            arcs: vec![idx as ArcId],
        }];
        while let Some(p) = stack.pop() {
            if let Some(next) = out_arcs.get(&p.to) {
                for &e in next {
                    let mut q = p.clone();
                    q.arcs.push(e as ArcId);
                    q.to = d.arcs[e].1;
                    stack.push(q);
                }
            }
            paths.insert(p);
        }
    }
    paths
}

/// 0/1 reachability matrix of `d`.
pub fn rep(d: &DirectedSubgraph) -> Matrix<BigInt> {
    let mut m = Matrix::zeros(d.n, ());
    for p in paths_of(d) {
        m.set(p.from, p.to, BigInt::one());
    }
    m
}

/// Orders the arcs of `d` so that folding `•` over the single-arc elements
/// rebuilds `d` with exactly its own paths.
///
/// Arcs are peeled off in reverse: each step removes the lowest-indexed arc
/// entering a node that has no outgoing arc left, so that arc can only end a
/// path when it is appended.
pub fn edge_factorization(d: &DirectedSubgraph) -> Vec<(usize, usize)> {
    let mut remaining: Vec<(usize, usize)> = d.arcs.clone();
    let mut removed = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let pos = remaining
            .iter()
            .position(|&(_, v)| !remaining.iter().any(|&(a, _)| a == v))
            .expect("a finite acyclic arc set has a sink");
        removed.push(remaining.remove(pos));
    }
    removed.reverse();
    removed
}

/// An element `(M, S)`: arcs with unique identifiers and a set of allowed
/// paths over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SMultElement {
    n: usize,
    arcs: BTreeMap<ArcId, (usize, usize)>,
    paths: BTreeSet<DirectedPath>,
}

impl SMultElement {
    /// The monoid identity: no arcs, no paths.
    pub fn identity(n: usize) -> Self {
        SMultElement {
            n,
            arcs: BTreeMap::new(),
            paths: BTreeSet::new(),
        }
    }

    /// A single arc `u -> v` with its one path.
    pub fn arc(n: usize, u: usize, v: usize) -> Self {
        let id = fresh_id();
        SMultElement {
            n,
            arcs: BTreeMap::from([(id, (u, v))]),
            paths: BTreeSet::from([DirectedPath {
                from: u,
                to: v,
                arcs: vec![id],
            }]),
        }
    }

    /// Embeds `d` as `(d, Paths(d))` with fresh arc identifiers.
    pub fn from_subgraph(d: &DirectedSubgraph) -> Self {
        let ids: Vec<ArcId> = d.arcs.iter().map(|_| fresh_id()).collect();
        SMultElement {
            n: d.n,
            arcs: ids.iter().copied().zip(d.arcs.iter().copied()).collect(),
            paths: paths_of(d)
                .into_iter()
                .map(|p| DirectedPath {
                    arcs: p.arcs.iter().map(|&i| ids[i as usize]).collect(),
                    ..p
                })
                .collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &BTreeMap<ArcId, (usize, usize)> {
        &self.arcs
    }

    pub fn allowed_paths(&self) -> &BTreeSet<DirectedPath> {
        &self.paths
    }

    /// Checks that every allowed path is a head-to-tail chain of this
    /// element's arcs with no repeated identifier.
    pub fn validate(&self) -> Result<()> {
        for p in &self.paths {
            let mut at = p.from;
            let mut seen = BTreeSet::new();
            for id in &p.arcs {
                let &(u, v) = self
                    .arcs
                    .get(id)
                    .ok_or_else(|| Error::Invariant(format!("path uses unknown arc {id}")))?;
                if u != at || !seen.insert(*id) {
                    return Err(Error::Invariant(format!(
                        "path {:?} is not a chain",
                        p.arcs
                    )));
                }
                at = v;
            }
            if at != p.to || p.arcs.is_empty() {
                return Err(Error::Invariant(format!(
                    "path {:?} has wrong endpoints",
                    p.arcs
                )));
            }
        }
        Ok(())
    }

    /// The multiset of node sequences of allowed paths, which ignores arc
    /// identifiers.
    pub fn path_shapes(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut out = BTreeMap::new();
        for p in &self.paths {
            let mut nodes = vec![p.from];
            nodes.extend(p.arcs.iter().map(|id| self.arcs[id].1));
            *out.entry(nodes).or_insert(0) += 1;
        }
        out
    }

    fn renamed(&self, taken: &BTreeMap<ArcId, (usize, usize)>) -> SMultElement {
        let rename: HashMap<ArcId, ArcId> = self
            .arcs
            .keys()
            .map(|&id| {
                (
                    id,
                    if taken.contains_key(&id) {
                        fresh_id()
                    } else {
                        id
                    },
                )
            })
            .collect();
        SMultElement {
            n: self.n,
            arcs: self.arcs.iter().map(|(id, e)| (rename[id], *e)).collect(),
            paths: self
                .paths
                .iter()
                .map(|p| DirectedPath {
                    arcs: p.arcs.iter().map(|id| rename[id]).collect(),
                    ..p.clone()
                })
                .collect(),
        }
    }
}

/// `a • b` with the default path cap.
pub fn bullet(a: &SMultElement, b: &SMultElement) -> Result<SMultElement> {
    bullet_with_cap(a, b, DEFAULT_PATH_CAP)
}

/// `(M, S) • (N, T) = (M ⊕ N, S ∪ T ∪ {s·t : head(s) = tail(t)})`.
///
/// Arc identifiers of `b` that collide with `a` are replaced by fresh ones so
/// that `⊕` stays a disjoint union.
pub fn bullet_with_cap(a: &SMultElement, b: &SMultElement, cap: usize) -> Result<SMultElement> {
    if a.n != b.n {
        return Err(Error::SizeMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    let b = if b.arcs.keys().any(|id| a.arcs.contains_key(id)) {
        b.renamed(&a.arcs)
    } else {
        b.clone()
    };
    let mut by_tail: HashMap<usize, Vec<&DirectedPath>> = HashMap::new();
    for t in &b.paths {
        by_tail.entry(t.from).or_default().push(t);
    }
    let composed: usize = a
        .paths
        .iter()
        .map(|s| by_tail.get(&s.to).map_or(0, Vec::len))
        .sum();
    if a.paths.len() + b.paths.len() + composed > cap {
        return Err(Error::PathCapExceeded { cap });
    }
    let mut paths = a.paths.clone();
    paths.extend(b.paths.iter().cloned());
    for s in &a.paths {
        if let Some(ts) = by_tail.get(&s.to) {
            paths.extend(ts.iter().map(|t| s.then(t)));
        }
    }
    let mut arcs = a.arcs.clone();
    arcs.extend(b.arcs.iter().map(|(k, v)| (*k, *v)));
    Ok(SMultElement {
        n: a.n,
        arcs,
        paths,
    })
}

/// Left fold of `•`; the empty list gives the identity.
pub fn bullet_fold<'a>(
    n: usize,
    items: impl IntoIterator<Item = &'a SMultElement>,
) -> Result<SMultElement> {
    items
        .into_iter()
        .try_fold(SMultElement::identity(n), |acc, x| bullet(&acc, x))
}

/// Path-count matrix: entry `(i, j)` is the number of allowed paths `i -> j`.
pub fn tr_count(e: &SMultElement) -> Matrix<BigInt> {
    let mut m: Matrix<BigInt> = Matrix::zeros(e.n, ());
    for p in &e.paths {
        m.get_mut(p.from, p.to).add_assign(&BigInt::one());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(n: usize) -> Graph {
        Graph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn star(m: usize) -> Graph {
        Graph::new(m + 1, (1..=m).map(|i| (i, 0))).unwrap()
    }

    #[test]
    fn subgraph_validation() {
        let k3 = builtin_graph("k3").unwrap();
        assert!(DirectedSubgraph::new(&k3, vec![(0, 1), (1, 2), (2, 0)]).is_err());
        assert!(DirectedSubgraph::new(&k3, vec![(0, 1), (1, 0)]).is_err());
        let p4 = line(4);
        assert!(
            DirectedSubgraph::new(&p4, vec![(0, 1), (2, 3)]).is_err(),
            "disconnected"
        );
        assert!(
            DirectedSubgraph::new(&p4, vec![(0, 2)]).is_err(),
            "not a host edge"
        );
        assert!(DirectedSubgraph::new(&p4, vec![(1, 0), (1, 2), (3, 2)]).is_ok());
    }

    #[test]
    fn path_enumeration() {
        let p3 = line(3);
        let single = DirectedSubgraph::new(&p3, vec![(0, 1)]).unwrap();
        assert_eq!(paths_of(&single).len(), 1);
        let chain = DirectedSubgraph::new(&p3, vec![(0, 1), (1, 2)]).unwrap();
        let ends: Vec<_> = paths_of(&chain)
            .iter()
            .map(|p| (p.from(), p.to()))
            .collect();
        assert_eq!(ends.len(), 3);
        assert!(ends.contains(&(0, 2)));
        let s = star(5);
        let sink = DirectedSubgraph::new(&s, (1..=5).map(|i| (i, 0)).collect()).unwrap();
        assert_eq!(paths_of(&sink).len(), 5);
    }

    #[test]
    fn rep_of_chain_is_transitive_closure() {
        let p3 = line(3);
        assert!(rep(&DirectedSubgraph::empty(&p3)).is_zero());
        let chain = DirectedSubgraph::new(&p3, vec![(0, 1), (1, 2)]).unwrap();
        let m = rep(&chain);
        let ones: Vec<_> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| !m.get(i, j).is_zero())
            .collect();
        assert_eq!(ones, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn bullet_is_order_sensitive() {
        let d = SMultElement::arc(3, 0, 1);
        let e = SMultElement::arc(3, 1, 2);
        let de = bullet(&d, &e).unwrap();
        let ed = bullet(&e, &d).unwrap();
        assert_eq!(de.allowed_paths().len(), 3);
        assert_eq!(ed.allowed_paths().len(), 2);
        assert!(de
            .allowed_paths()
            .iter()
            .any(|p| p.from() == 0 && p.to() == 2));
        assert!(!ed
            .allowed_paths()
            .iter()
            .any(|p| p.from() == 0 && p.to() == 2));
        de.validate().unwrap();
    }

    #[test]
    fn identity_element() {
        let x = SMultElement::arc(3, 0, 1);
        let id = SMultElement::identity(3);
        assert_eq!(bullet(&x, &id).unwrap(), x);
        assert_eq!(bullet(&id, &x).unwrap(), x);
    }

    #[test]
    fn non_composable_operands_commute() {
        let a = SMultElement::arc(4, 1, 0);
        let b = SMultElement::arc(4, 2, 0);
        assert_eq!(bullet(&a, &b).unwrap(), bullet(&b, &a).unwrap());
    }

    #[test]
    fn self_bullet_gets_fresh_ids() {
        let x = SMultElement::arc(2, 0, 1);
        let y = SMultElement::arc(2, 1, 0);
        let xy = bullet(&x, &y).unwrap();
        let twice = bullet(&xy, &xy).unwrap();
        assert_eq!(twice.arcs().len(), 4);
        twice.validate().unwrap();
        assert_eq!(
            tr_count(&twice),
            tr_count(&xy).circ(&tr_count(&xy)).unwrap()
        );
    }

    #[test]
    fn cap_is_enforced() {
        let a = SMultElement::arc(2, 0, 1);
        let b = SMultElement::arc(2, 1, 0);
        assert!(matches!(
            bullet_with_cap(&a, &b, 2),
            Err(Error::PathCapExceeded { cap: 2 })
        ));
        assert!(bullet_with_cap(&a, &b, 3).is_ok());
    }

    #[test]
    fn factorization_examples() {
        let p3 = line(3);
        let chain = DirectedSubgraph::new(&p3, vec![(1, 2), (0, 1)]).unwrap();
        assert_eq!(edge_factorization(&chain), vec![(0, 1), (1, 2)]);
        let one = DirectedSubgraph::new(&p3, vec![(2, 1)]).unwrap();
        assert_eq!(edge_factorization(&one), vec![(2, 1)]);
        // Any order of a sink star rebuilds the same path shapes.
        let s = star(4);
        let arcs: Vec<_> = (1..=4).map(|i| (i, 0)).collect();
        let forward = bullet_fold(
            5,
            &arcs
                .iter()
                .map(|&(u, v)| SMultElement::arc(5, u, v))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let backward = bullet_fold(
            5,
            &arcs
                .iter()
                .rev()
                .map(|&(u, v)| SMultElement::arc(5, u, v))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(forward.path_shapes(), backward.path_shapes());
        let sink = DirectedSubgraph::new(&s, arcs).unwrap();
        assert_eq!(tr_count(&forward), rep(&sink));
    }

    #[test]
    fn factorization_rebuilds_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let host = Graph::random(8, 0.5, &mut rng);
            let d = DirectedSubgraph::random(&host, 7, &mut rng);
            let parts: Vec<_> = edge_factorization(&d)
                .into_iter()
                .map(|(u, v)| SMultElement::arc(8, u, v))
                .collect();
            let rebuilt = bullet_fold(8, &parts).unwrap();
            assert_eq!(
                rebuilt.path_shapes(),
                SMultElement::from_subgraph(&d).path_shapes()
            );
        }
    }
}
