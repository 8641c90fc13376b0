//! 1-WL colour refinement.
//!
//! Colours start from node degrees. Each round a node's signature is its
//! colour together with the sorted multiset of its neighbours' colours, and
//! the new colour is the signature's rank among the distinct signatures of
//! that round. Ranks depend only on the signature multiset, so comparing the
//! per-round signature histograms of two graphs is a sound, collision-free
//! isomorphism test up to 1-WL power.

use std::collections::BTreeMap;

use crate::graph::Graph;

/// A node signature: own colour, then sorted neighbour colours.
pub type Signature = (u32, Vec<u32>);

/// Sorted `(signature, multiplicity)` pairs for one round.
pub type RoundHistogram = Vec<(Signature, usize)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WlColoring {
    /// Stable colour of each node.
    pub colors: Vec<u32>,
    /// Sorted `(colour, count)` pairs of the stable colouring.
    pub histogram: Vec<(u32, usize)>,
    /// Refinement rounds run, including the one that confirmed stability.
    pub rounds: usize,
    history: Vec<RoundHistogram>,
}

/// Canonical 1-WL invariant: the degree histogram followed by every round's
/// signature histogram up to stability.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WlHash {
    pub degrees: Vec<(usize, usize)>,
    pub rounds: Vec<RoundHistogram>,
}

impl WlColoring {
    pub fn refine(g: &Graph) -> Self {
        let n = g.node_count();
        let mut degree_rank: BTreeMap<usize, u32> = BTreeMap::new();
        for v in 0..n {
            degree_rank.insert(g.degree(v), 0);
        }
        for (rank, slot) in degree_rank.values_mut().enumerate() {
            *slot = rank as u32;
        }
        let mut colors: Vec<u32> = (0..n).map(|v| degree_rank[&g.degree(v)]).collect();
        let mut classes = degree_rank.len();
        let mut history = Vec::new();
        loop {
            let signatures: Vec<Signature> = (0..n)
                .map(|v| {
                    let mut nb: Vec<u32> = g.neighbors(v).iter().map(|&u| colors[u]).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let mut counts: BTreeMap<&Signature, usize> = BTreeMap::new();
            for s in &signatures {
                *counts.entry(s).or_default() += 1;
            }
            let rank: BTreeMap<&Signature, u32> = counts
                .keys()
                .enumerate()
                .map(|(i, &s)| (s, i as u32))
                .collect();
            let next: Vec<u32> = signatures.iter().map(|s| rank[s]).collect();
            history.push(counts.iter().map(|(&s, &c)| (s.clone(), c)).collect());
            let next_classes = counts.len();
            colors = next;
            if next_classes == classes {
                break;
            }
            classes = next_classes;
        }
        let mut hist: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &colors {
            *hist.entry(c).or_default() += 1;
        }
        WlColoring {
            colors,
            histogram: hist.into_iter().collect(),
            rounds: history.len(),
            history,
        }
    }

    pub fn class_count(&self) -> usize {
        self.histogram.len()
    }
}

pub fn wl_hash(g: &Graph) -> WlHash {
    let coloring = WlColoring::refine(g);
    let mut degrees: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..g.node_count() {
        *degrees.entry(g.degree(v)).or_default() += 1;
    }
    WlHash {
        degrees: degrees.into_iter().collect(),
        rounds: coloring.history,
    }
}

/// True when 1-WL tells `a` and `b` apart.
pub fn wl_distinguish(a: &Graph, b: &Graph) -> bool {
    a.node_count() != b.node_count() || wl_hash(a) != wl_hash(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_graph, NodePermutation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b(name: &str) -> Graph {
        builtin_graph(name).unwrap()
    }

    #[test]
    fn fixture_verdicts() {
        assert!(wl_distinguish(&b("k3"), &b("p3")));
        assert!(!wl_distinguish(&b("example6_G"), &b("example6_H")));
        assert!(!wl_distinguish(&b("c6"), &b("two_triangles")));
        assert!(!wl_distinguish(&b("shrikhande"), &b("rook4x4")));
        assert!(!wl_distinguish(&b("k3"), &b("k3")));
    }

    #[test]
    fn path_refines_to_distance_from_end() {
        let p5 = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let c = WlColoring::refine(&p5);
        assert_eq!(c.class_count(), 3);
        assert_eq!(c.colors[0], c.colors[4]);
        assert_eq!(c.colors[1], c.colors[3]);
        assert_ne!(c.colors[0], c.colors[2]);
    }

    #[test]
    fn invariance_and_round_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = 1 + (rand::Rng::gen_range(&mut rng, 0..12usize));
            let g = Graph::random(n, 0.35, &mut rng);
            let p = NodePermutation::random(n, &mut rng);
            let h = g.permute(&p).unwrap();
            assert_eq!(wl_hash(&g), wl_hash(&h));
            let c = WlColoring::refine(&g);
            assert!(c.rounds <= n.max(1));
            let hc = WlColoring::refine(&h);
            for v in 0..n {
                assert_eq!(c.colors[v], hc.colors[p.apply(v)]);
            }
        }
    }

    #[test]
    fn refinement_only_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = Graph::random(10, 0.3, &mut rng);
            let c = WlColoring::refine(&g);
            for u in 0..10 {
                for v in 0..10 {
                    if c.colors[u] == c.colors[v] {
                        assert_eq!(g.degree(u), g.degree(v));
                    }
                }
            }
        }
    }
}
