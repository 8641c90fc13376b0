use super::Graph;
use crate::error::{Error, Result};

/// Skip lengths of the standard 41-node circular skip link benchmark.
pub const CSL_SKIPS: [usize; 10] = [2, 3, 4, 5, 6, 9, 11, 12, 13, 16];

pub const BUILTIN_NAMES: [&str; 8] = [
    "example6_G",
    "example6_H",
    "shrikhande",
    "rook4x4",
    "k3",
    "p3",
    "c6",
    "two_triangles",
];

/// Cycle `0..n` plus the chords `{i, i+s mod n}`.
pub fn generate_csl(n: usize, skip: usize) -> Result<Graph> {
    let reject = |reason: &str| Error::CslParameters {
        n,
        skip,
        reason: reason.into(),
    };
    if n < 5 {
        return Err(reject("need at least 5 nodes"));
    }
    if skip.is_multiple_of(n) {
        return Err(reject("skip edges would be self-loops"));
    }
    if skip % n == 1 || skip % n == n - 1 {
        return Err(reject("skip edges coincide with ring edges"));
    }
    if (2 * skip).is_multiple_of(n) {
        return Err(reject("skip edges would repeat (2s = 0 mod n)"));
    }
    let skip = skip % n;
    let ring = (0..n).map(|i| (i, (i + 1) % n));
    let chords = (0..n).map(|i| (i, (i + skip) % n));
    Graph::new(n, ring.chain(chords))
}

fn one_indexed(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges.iter().map(|&(u, v)| (u - 1, v - 1))).expect("fixture is simple")
}

/// Named fixture graphs.
///
/// * `example6_G`: the 2x3 grid `1-2-3 / 4-5-6` with rungs `1-4, 2-5, 3-6`
///   (0-indexed here).
/// * `example6_H`: triangles `{1,2,5}` and `{3,4,6}` joined by the bridge `2-3`.
/// * `shrikhande`: Cayley graph of Z4 x Z4 with connection set
///   `{±(1,0), ±(0,1), ±(1,1)}`; node `(a, b)` is `4a + b`.
/// * `rook4x4`: rook's graph on a 4x4 board; node `(r, c)` is `4r + c`.
/// * `k3`, `p3`, `c6`, `two_triangles`: small sanity fixtures.
pub fn builtin_graph(name: &str) -> Result<Graph> {
    let g = match name {
        "example6_G" => one_indexed(6, &[(1, 2), (1, 4), (2, 3), (2, 5), (3, 6), (4, 5), (5, 6)]),
        "example6_H" => one_indexed(6, &[(1, 2), (1, 5), (2, 5), (3, 4), (3, 6), (4, 6), (2, 3)]),
        "shrikhande" => {
            let idx = |a: usize, b: usize| 4 * (a % 4) + b % 4;
            let mut edges = Vec::new();
            for a in 0..4 {
                for b in 0..4 {
                    for (da, db) in [(1, 0), (0, 1), (1, 1)] {
                        edges.push((idx(a, b), idx(a + da, b + db)));
                    }
                }
            }
            Graph::new(16, edges)?
        }
        "rook4x4" => {
            let mut edges = Vec::new();
            for u in 0..16 {
                for v in u + 1..16 {
                    if u / 4 == v / 4 || u % 4 == v % 4 {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(16, edges)?
        }
        "k3" => Graph::new(3, [(0, 1), (0, 2), (1, 2)])?,
        "p3" => Graph::new(3, [(0, 1), (1, 2)])?,
        "c6" => Graph::new(6, (0..6).map(|i| (i, (i + 1) % 6)))?,
        "two_triangles" => Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])?,
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(g: &Graph) -> Vec<usize> {
        let mut d: Vec<usize> = (0..g.node_count()).map(|v| g.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Checks (n, k, lambda, mu) by counting common neighbours of every pair.
    fn srg_parameters(g: &Graph) -> Option<(usize, usize, usize, usize)> {
        let n = g.node_count();
        let k = g.degree(0);
        let (mut lambda, mut mu) = (None, None);
        for u in 0..n {
            if g.degree(u) != k {
                return None;
            }
            for v in u + 1..n {
                let common = (0..n)
                    .filter(|&w| g.has_edge(u, w) && g.has_edge(v, w))
                    .count();
                let slot = if g.has_edge(u, v) {
                    &mut lambda
                } else {
                    &mut mu
                };
                match *slot {
                    None => *slot = Some(common),
                    Some(c) if c != common => return None,
                    Some(_) => {}
                }
            }
        }
        Some((n, k, lambda?, mu?))
    }

    #[test]
    fn csl_is_four_regular() {
        for s in CSL_SKIPS {
            let g = generate_csl(41, s).unwrap();
            assert_eq!(g.edge_count(), 82);
            assert!((0..41).all(|v| g.degree(v) == 4), "skip {s}");
        }
    }

    #[test]
    fn csl_small_instance() {
        let g = generate_csl(8, 3).unwrap();
        let mut expected: Vec<_> = (0..8)
            .map(|i| crate::graph::edge_key(i, (i + 1) % 8))
            .collect();
        expected.extend((0..8).map(|i| crate::graph::edge_key(i, (i + 3) % 8)));
        expected.sort_unstable();
        assert_eq!(g.edges().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn csl_skip_two_on_eight_nodes() {
        // The chords of C8 with skip 2: {0,2},{1,3},...,{6,0},{7,1}.
        let g = generate_csl(8, 2).unwrap();
        for i in 0..8 {
            assert!(g.has_edge(i, (i + 1) % 8));
            assert!(g.has_edge(i, (i + 2) % 8));
        }
        assert_eq!(g.edge_count(), 16);
    }

    #[test]
    fn csl_rotation_is_an_automorphism() {
        let g = generate_csl(13, 5).unwrap();
        let rot =
            crate::graph::NodePermutation::new((0..13).map(|i| (i + 1) % 13).collect()).unwrap();
        assert_eq!(g.permute(&rot).unwrap(), g);
    }

    #[test]
    fn csl_rejects_degenerate_skips() {
        assert!(generate_csl(8, 1).is_err());
        assert!(generate_csl(8, 7).is_err());
        assert!(generate_csl(8, 4).is_err());
        assert!(generate_csl(8, 0).is_err());
        assert!(generate_csl(4, 2).is_err());
    }

    #[test]
    fn example6_pair_shape() {
        for name in ["example6_G", "example6_H"] {
            let g = builtin_graph(name).unwrap();
            assert_eq!(g.edge_count(), 7);
            assert_eq!(degrees(&g), vec![2, 2, 2, 2, 3, 3]);
        }
    }

    #[test]
    fn strongly_regular_fixtures() {
        for name in ["shrikhande", "rook4x4"] {
            let g = builtin_graph(name).unwrap();
            assert_eq!(g.edge_count(), 48, "{name}");
            assert_eq!(srg_parameters(&g), Some((16, 6, 2, 2)), "{name}");
        }
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(
            builtin_graph("petersen"),
            Err(Error::UnknownBuiltin(_))
        ));
        for name in BUILTIN_NAMES {
            builtin_graph(name).unwrap();
        }
    }
}
