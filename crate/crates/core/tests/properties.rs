use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sieveforge::algebra::{dump_matrix, parse_matrix_dump, Matrix, PathMatrix, SparseMatrix};
use sieveforge::graph::{
    builtin_graph, emit_graph6, parse_graph6, Graph, GraphRecord, NodePermutation, BUILTIN_NAMES,
};
use sieveforge::harness::{embed_stats, exact_determinant, SRG_STATS};
use sieveforge::sieve::{Backend, Level};
use sieveforge::snn::{snn, snn_with_backend, SnnConfig};
use sieveforge::wl::wl_distinguish;

fn int_matrix(max_n: usize) -> impl Strategy<Value = Matrix<BigInt>> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-4i64..=4, n * n)
            .prop_map(move |xs| Matrix::from_fn(n, (), |i, j| BigInt::from(xs[i * n + j])))
    })
}

fn pair(max_n: usize) -> impl Strategy<Value = (Matrix<BigInt>, Matrix<BigInt>)> {
    (1..=max_n).prop_flat_map(|n| {
        let cell = prop::collection::vec(-4i64..=4, n * n);
        (cell.clone(), cell).prop_map(move |(a, b)| {
            (
                Matrix::from_fn(n, (), |i, j| BigInt::from(a[i * n + j])),
                Matrix::from_fn(n, (), |i, j| BigInt::from(b[i * n + j])),
            )
        })
    })
}

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), 0.05f64..0.9)
        .prop_map(|(n, seed, p)| Graph::random(n, p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn level() -> impl Strategy<Value = Level> {
    prop_oneof![Just(Level::Stable), (0usize..4).prop_map(Level::At)]
}

/// Determinant by the permutation expansion.
fn leibniz(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i64;
    loop {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let term: i64 = (0..n).map(|i| m[i][perm[i]]).product();
        total += if inversions % 2 == 0 { term } else { -term };
        // Next permutation in lexicographic order.
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| perm[i] < perm[i + 1])
        else {
            return total;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circ_is_a_monoid((a, b) in pair(5), c_seed in any::<u64>()) {
        let n = a.n();
        let mut rng = ChaCha8Rng::seed_from_u64(c_seed);
        let c = Matrix::from_fn(n, (), |_, _| BigInt::from(rand::Rng::gen_range(&mut rng, -3i64..=3)));
        let zero = Matrix::zeros(n, ());
        prop_assert_eq!(a.circ(&zero).unwrap(), a.clone());
        prop_assert_eq!(zero.circ(&a).unwrap(), a.clone());
        prop_assert_eq!(a.circ(&b).unwrap().circ(&c).unwrap(), a.circ(&b.circ(&c).unwrap()).unwrap());
        prop_assert_eq!(a.circ(&b).unwrap().transpose(), b.transpose().circ(&a.transpose()).unwrap());
    }

    #[test]
    fn sparse_circ_matches_dense((a, b) in pair(6)) {
        let sa = SparseMatrix::from_dense(&a);
        let sb = SparseMatrix::from_dense(&b);
        prop_assert_eq!(sa.circ(&sb).unwrap().to_dense(), a.circ(&b).unwrap());
        prop_assert_eq!(sa.circ_dense(&b).unwrap(), a.circ(&b).unwrap());
    }

    #[test]
    fn determinant_matches_permutation_expansion(m in int_matrix(5)) {
        let plain: Vec<Vec<i64>> = m.rows().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
        let det = exact_determinant(&PathMatrix::BigInt(m)).unwrap();
        prop_assert_eq!(det, BigRational::from_integer(leibniz(&plain).into()));
    }

    #[test]
    fn rational_determinant_scales(m in int_matrix(4), d in 1i64..7) {
        let n = m.n();
        let q = m.map((), |x| BigRational::new(x.clone(), d.into()));
        let int_det = exact_determinant(&PathMatrix::BigInt(m)).unwrap();
        let expected = int_det / BigRational::from_integer(BigInt::from(d).pow(n as u32));
        prop_assert_eq!(exact_determinant(&PathMatrix::Rational(q)).unwrap(), expected);
    }

    #[test]
    fn matrix_dump_roundtrip(m in int_matrix(5), d in 1i64..9) {
        let q = m.map((), |x| BigRational::new(x.clone(), d.into()));
        let f = m.map((), |x| f64::from(i32::try_from(x).unwrap()) / 8.0);
        for pm in [PathMatrix::BigInt(m), PathMatrix::Rational(q), PathMatrix::Float(f)] {
            prop_assert_eq!(parse_matrix_dump(&dump_matrix(&pm)).unwrap(), pm);
        }
    }

    #[test]
    fn graph6_roundtrip(g in graph(70)) {
        let text = emit_graph6(&g);
        prop_assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn jsonl_record_roundtrip(g in graph(20)) {
        let rec = GraphRecord::from_graph(Some("x".into()), &g);
        let line = serde_json::to_string(&rec).unwrap();
        let back: GraphRecord = serde_json::from_str(&line).unwrap();
        prop_assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn alpha_transpose_law(g in graph(10), l in level(), k in level()) {
        let lk = snn(&g, &SnnConfig::alpha(l, k)).unwrap().matrix;
        let kl = snn(&g, &SnnConfig::alpha(k, l)).unwrap().matrix;
        prop_assert_eq!(lk.transpose(), kl);
        prop_assert!(snn(&g, &SnnConfig::alpha(l, l)).unwrap().matrix.is_symmetric());
    }

    #[test]
    fn backends_agree(g in graph(14), levels in prop::collection::vec(level(), 1..4)) {
        let cfg = SnnConfig::beta(levels);
        let dense = snn_with_backend(&g, &cfg, Backend::Dense).unwrap();
        let sparse = snn_with_backend(&g, &cfg, Backend::Sparse).unwrap();
        prop_assert_eq!(dense, sparse);
    }

    #[test]
    fn float_and_exact_kinds_agree(g in graph(8), l in level(), k in level()) {
        let cfg = SnnConfig::alpha(l, k).normalized();
        let exact = snn(&g, &cfg).unwrap().matrix;
        let float = snn(&g, &cfg.clone().with_kind(sieveforge::ScalarKind::Float)).unwrap().matrix;
        let (PathMatrix::Rational(q), PathMatrix::Float(f)) = (exact, float) else {
            return Err(TestCaseError::fail("unexpected kinds"));
        };
        for (x, y) in q.entries().iter().zip(f.entries()) {
            let x = num_traits::ToPrimitive::to_f64(x).unwrap();
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn embeddings_survive_relabelling(g in graph(10), seed in any::<u64>(), levels in prop::collection::vec(level(), 1..4)) {
        let p = NodePermutation::random(g.node_count(), &mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.permute(&p).unwrap();
        let cfg = SnnConfig::beta(levels);
        let stats = sieveforge::harness::Stat::ALL;
        let eg = embed_stats(&snn(&g, &cfg).unwrap().matrix, &stats).unwrap();
        let eh = embed_stats(&snn(&h, &cfg).unwrap().matrix, &stats).unwrap();
        prop_assert_eq!(eg, eh);
    }
}

#[test]
fn wl_separations_are_kept_on_fixtures() {
    let cfg = SnnConfig::beta(vec![Level::Stable; 3]);
    let fixtures: Vec<Graph> = BUILTIN_NAMES
        .iter()
        .map(|n| builtin_graph(n).unwrap())
        .collect();
    for (i, a) in fixtures.iter().enumerate() {
        for b in &fixtures[i + 1..] {
            if a.node_count() != b.node_count() || !wl_distinguish(a, b) {
                continue;
            }
            let ea = embed_stats(&snn(a, &cfg).unwrap().matrix, &SRG_STATS).unwrap();
            let eb = embed_stats(&snn(b, &cfg).unwrap().matrix, &SRG_STATS).unwrap();
            assert_ne!(ea, eb, "{} vs {}", emit_graph6(a), emit_graph6(b));
        }
    }
}
