//! Self-check suite: golden matrices plus randomized algebraic identities.
//! Each check reports a name, a verdict and a short detail line.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{circ_expansion, circ_fold, parse_matrix_dump, Matrix, PathMatrix};
use crate::error::{Error, Result};
use crate::graph::{builtin_graph, Graph, NodePermutation};
use crate::modg::{bullet, tr_count, DirectedSubgraph, SMultElement};
use crate::sieve::{image, sieve_element, ArcWeights, Level};
use crate::snn::{snn, SnnConfig};

pub const CIRC_X: &str = include_str!("../fixtures/circ_x.txt");
pub const CIRC_Y: &str = include_str!("../fixtures/circ_y.txt");
pub const CIRC_XY: &str = include_str!("../fixtures/circ_xy.txt");
pub const CIRC_YX: &str = include_str!("../fixtures/circ_yx.txt");
pub const ALPHA11_G: &str = include_str!("../fixtures/alpha11_g.txt");
pub const ALPHA11_H: &str = include_str!("../fixtures/alpha11_h.txt");
pub const ALPHA12_G: &str = include_str!("../fixtures/alpha12_g.txt");
pub const ALPHA12_H: &str = include_str!("../fixtures/alpha12_h.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Parses one of the bundled integer fixtures.
pub fn fixture(text: &str) -> Result<Matrix<BigInt>> {
    match parse_matrix_dump(text)? {
        PathMatrix::BigInt(m) => Ok(m),
        other => Err(Error::Invariant(format!(
            "fixture has kind {}",
            other.kind()
        ))),
    }
}

fn outcome(
    name: &'static str,
    f: impl FnOnce() -> Result<std::result::Result<String, String>>,
) -> CheckResult {
    match f() {
        Ok(Ok(detail)) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Ok(Err(detail)) => CheckResult {
            name,
            passed: false,
            detail,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn random_int_matrix<R: Rng + ?Sized>(n: usize, range: i64, rng: &mut R) -> Matrix<BigInt> {
    Matrix::from_fn(n, (), |_, _| BigInt::from(rng.gen_range(-range..=range)))
}

fn golden_circ() -> Result<std::result::Result<String, String>> {
    let (x, y) = (fixture(CIRC_X)?, fixture(CIRC_Y)?);
    if x.circ(&y)? != fixture(CIRC_XY)? {
        return Ok(Err("X ∘ Y differs from the golden matrix".into()));
    }
    if y.circ(&x)? != fixture(CIRC_YX)? {
        return Ok(Err("Y ∘ X differs from the golden matrix".into()));
    }
    Ok(Ok("X ∘ Y and Y ∘ X match".into()))
}

fn golden_example6() -> Result<std::result::Result<String, String>> {
    let g = builtin_graph("example6_G")?;
    let h = builtin_graph("example6_H")?;
    let cases = [
        ("X", &g, 1, ALPHA11_G),
        ("Y", &h, 1, ALPHA11_H),
        ("Z", &g, 2, ALPHA12_G),
        ("W", &h, 2, ALPHA12_H),
    ];
    for (name, graph, k, text) in cases {
        let out = snn(graph, &SnnConfig::alpha(Level::At(1), Level::At(k)))?;
        if out.matrix != PathMatrix::BigInt(fixture(text)?) {
            return Ok(Err(format!("matrix {name} differs from the golden matrix")));
        }
    }
    Ok(Ok("X, Y, Z and W match".into()))
}

fn expansion(rng: &mut ChaCha8Rng, trials: usize) -> Result<std::result::Result<String, String>> {
    for t in 0..trials {
        for k in 1..=4 {
            let ms: Vec<_> = (0..k).map(|_| random_int_matrix(5, 3, rng)).collect();
            if circ_expansion(&ms)? != circ_fold(&ms)? {
                return Ok(Err(format!(
                    "trial {t}, {k} factors: expansion differs from fold"
                )));
            }
        }
    }
    Ok(Ok(format!("{trials} tuples for each k in 1..=4")))
}

/// Two or three random directed trees on a random host, composed with `•`.
pub fn random_composite(rng: &mut ChaCha8Rng) -> Result<(Vec<SMultElement>, usize)> {
    let n = rng.gen_range(2..=8);
    let host = Graph::random(n, 0.5, rng);
    let parts = rng.gen_range(2..=3);
    let elems = (0..parts)
        .map(|_| SMultElement::from_subgraph(&DirectedSubgraph::random(&host, 4, rng)))
        .collect();
    Ok((elems, n))
}

fn homomorphism(
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<std::result::Result<String, String>> {
    for t in 0..trials {
        let (elems, _) = random_composite(rng)?;
        let mut acc = elems[0].clone();
        let mut expected = tr_count(&acc);
        for e in &elems[1..] {
            acc = bullet(&acc, e)?;
            expected = expected.circ(&tr_count(e))?;
        }
        if tr_count(&acc) != expected {
            return Ok(Err(format!(
                "trial {t}: path counts of the composite differ"
            )));
        }
    }
    Ok(Ok(format!("{trials} composites")))
}

fn change_of_order(
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<std::result::Result<String, String>> {
    for t in 0..trials {
        let n = rng.gen_range(1..=7);
        let a = random_int_matrix(n, 4, rng);
        let b = random_int_matrix(n, 4, rng);
        let p = NodePermutation::random(n, rng);
        let f = |m: &Matrix<BigInt>| m.change_of_order(&p);
        let ok = f(&a.circ(&b)?)? == f(&a)?.circ(&f(&b)?)?
            && f(&a.mul(&b)?)? == f(&a)?.mul(&f(&b)?)?
            && f(&a.hadamard(&b)?)? == f(&a)?.hadamard(&f(&b)?)?;
        if !ok {
            return Ok(Err(format!("trial {t}: relabelling does not commute")));
        }
    }
    Ok(Ok(format!(
        "{trials} cases for ∘, products and Hadamard products"
    )))
}

fn sieve_oracle(
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<std::result::Result<String, String>> {
    let w = ArcWeights::<BigInt>::unit();
    for t in 0..trials {
        let n = rng.gen_range(1..=7);
        let g = Graph::random(n, 0.4, rng);
        for v in 0..n {
            for k in 0..=3 {
                let fast = image(&g, v, Level::At(k), &w)?.matrix;
                if fast != tr_count(&sieve_element(&g, v, Level::At(k))?) {
                    return Ok(Err(format!("trial {t}: node {v}, level {k}")));
                }
            }
        }
    }
    Ok(Ok(format!("{trials} graphs, every node, levels 0..=3")))
}

fn mpnn_reduction(
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> Result<std::result::Result<String, String>> {
    for t in 0..trials {
        let n = rng.gen_range(1..=30);
        let g = Graph::random(n, rng.gen_range(0.05..0.6), rng);
        let adj = Matrix::from_fn(n, (), |i, j| BigInt::from(g.has_edge(i, j) as u8));
        for (l, k) in [(0, 1), (1, 0)] {
            let out = snn(&g, &SnnConfig::alpha(Level::At(l), Level::At(k)))?;
            if out.matrix != PathMatrix::BigInt(adj.clone()) {
                return Ok(Err(format!(
                    "trial {t}: levels ({l}, {k}) differ from adjacency"
                )));
            }
        }
    }
    Ok(Ok(format!("{trials} graphs")))
}

/// Runs every check with randomness drawn from `seed`.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        outcome("golden circ products", golden_circ),
        outcome("golden alpha matrices", golden_example6),
        outcome("circ expansion identity", || expansion(&mut rng, 100)),
        outcome("path-count homomorphism", || homomorphism(&mut rng, 1000)),
        outcome("change of order", || change_of_order(&mut rng, 200)),
        outcome("sieve images", || sieve_oracle(&mut rng, 30)),
        outcome("adjacency reduction", || mpnn_reduction(&mut rng, 100)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        for text in [
            CIRC_X, CIRC_Y, CIRC_XY, CIRC_YX, ALPHA11_G, ALPHA11_H, ALPHA12_G, ALPHA12_H,
        ] {
            assert_eq!(fixture(text).unwrap().n(), 6);
        }
    }

    #[test]
    fn suite_passes() {
        for r in run_all(1) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }
}
