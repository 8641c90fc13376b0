//! Graph embeddings from transform outputs, exact determinants, and the
//! discrimination experiments built on them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, PathMatrix};
use crate::error::{Error, Result, ScalarKind};
use crate::graph::{
    emit_graph6, generate_csl, parse_graph6_file, Graph, NodePermutation, CSL_SKIPS,
};
use crate::sieve::Level;
use crate::snn::{snn, SnnConfig};
use crate::wl::{wl_hash, WlHash};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stat {
    Sum,
    Mean,
    Var,
    DiagMean,
    DiagVar,
    Det,
}

impl Stat {
    pub const ALL: [Stat; 6] = [
        Stat::Sum,
        Stat::Mean,
        Stat::Var,
        Stat::DiagMean,
        Stat::DiagVar,
        Stat::Det,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stat::Sum => "sum",
            Stat::Mean => "mean",
            Stat::Var => "var",
            Stat::DiagMean => "diag_mean",
            Stat::DiagVar => "diag_var",
            Stat::Det => "det",
        }
    }

    /// Parses a comma-separated list such as `mean,var`.
    pub fn parse_list(s: &str) -> Result<Vec<Stat>> {
        let stats: Vec<Stat> = s
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<_>>()?;
        if stats.is_empty() {
            return Err(Error::Empty("statistics"));
        }
        Ok(stats)
    }
}

impl FromStr for Stat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stat::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown statistic '{s}'")))
    }
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Statistics of one output matrix, in the order they were requested.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub stats: Vec<Stat>,
    pub values: Vec<BigRational>,
}

impl Embedding {
    pub fn get(&self, stat: Stat) -> Option<&BigRational> {
        self.stats
            .iter()
            .position(|&s| s == stat)
            .map(|i| &self.values[i])
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(BigRational::to_string).collect()
    }
}

fn exact_entries(m: &PathMatrix, op: &'static str) -> Result<Matrix<BigRational>> {
    match m {
        PathMatrix::BigInt(m) => Ok(m.map((), |x| BigRational::from_integer(x.clone()))),
        PathMatrix::Rational(m) => Ok(m.clone()),
        PathMatrix::Float(m) => {
            let mut out = Matrix::zeros(m.n(), ());
            for i in 0..m.n() {
                for j in 0..m.n() {
                    let x = *m.get(i, j);
                    let q = BigRational::from_float(x).ok_or_else(|| {
                        Error::Invariant(format!("non-finite entry {x} at ({i}, {j})"))
                    })?;
                    out.set(i, j, q);
                }
            }
            Ok(out)
        }
        PathMatrix::FeatureVec(_) => Err(Error::UnsupportedKind {
            op,
            kind: ScalarKind::FeatureVec,
        }),
    }
}

fn mean_var(xs: impl Iterator<Item = BigRational> + Clone) -> (BigRational, BigRational) {
    let mut count = 0u64;
    let mut sum = BigRational::default();
    let mut squares = BigRational::default();
    for x in xs {
        count += 1;
        squares += &x * &x;
        sum += x;
    }
    if count == 0 {
        return (BigRational::default(), BigRational::default());
    }
    let c = BigRational::from_integer(BigInt::from(count));
    let mean = &sum / &c;
    let var = &squares / &c - &mean * &mean;
    (mean, var)
}

/// Exact statistics of `m`. Means and variances are population statistics
/// over all `n²` entries, or over the `n` diagonal entries for the `diag_`
/// variants. Float matrices are converted entry by entry to the rational
/// they exactly represent; `det` rejects them.
pub fn embed_stats(m: &PathMatrix, stats: &[Stat]) -> Result<Embedding> {
    if stats.contains(&Stat::Det) && matches!(m, PathMatrix::Float(_)) {
        return Err(Error::UnsupportedKind {
            op: "det",
            kind: ScalarKind::Float,
        });
    }
    let q = exact_entries(m, "statistics")?;
    let n = q.n();
    let all = || q.entries().iter().cloned();
    let diag = || (0..n).map(|i| q.get(i, i).clone());
    let values = stats
        .iter()
        .map(|s| match s {
            Stat::Sum => Ok(all().sum()),
            Stat::Mean => Ok(mean_var(all()).0),
            Stat::Var => Ok(mean_var(all()).1),
            Stat::DiagMean => Ok(mean_var(diag()).0),
            Stat::DiagVar => Ok(mean_var(diag()).1),
            Stat::Det => exact_determinant(m),
        })
        .collect::<Result<_>>()?;
    Ok(Embedding {
        stats: stats.to_vec(),
        values,
    })
}

/// Fraction-free Bareiss elimination on an integer matrix.
pub fn bareiss_determinant(m: &Matrix<BigInt>) -> BigInt {
    let n = m.n();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.rows().map(<[BigInt]>::to_vec).collect();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if num_traits::Zero::is_zero(&a[k][k]) {
            match (k + 1..n).find(|&r| !num_traits::Zero::is_zero(&a[r][k])) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::default(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exact determinant of an integer or rational matrix. Rational rows are
/// scaled to integers by the lcm of their denominators first.
pub fn exact_determinant(m: &PathMatrix) -> Result<BigRational> {
    match m {
        PathMatrix::BigInt(m) => Ok(BigRational::from_integer(bareiss_determinant(m))),
        PathMatrix::Rational(m) => {
            let n = m.n();
            let mut scale = BigInt::from(1);
            let mut rows = Vec::with_capacity(n);
            for row in m.rows() {
                let l = row.iter().fold(BigInt::from(1), |acc, x| {
                    num_integer::Integer::lcm(&acc, x.denom())
                });
                rows.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
                scale *= l;
            }
            let ints = Matrix::from_rows((), rows)?;
            Ok(BigRational::new(bareiss_determinant(&ints), scale))
        }
        other => Err(Error::UnsupportedKind {
            op: "det",
            kind: other.kind(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub distinguished: usize,
    pub total: usize,
    pub wl_distinguished: usize,
    /// Pairs of graphs with identical labelled edge sets.
    pub duplicates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEmbedding {
    pub id: String,
    pub embedding: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationReport {
    pub config: SnnConfig,
    pub statistics: Vec<Stat>,
    pub seed: u64,
    pub graphs: Vec<GraphEmbedding>,
    /// Embedding-equality classes in order of first appearance.
    pub classes: Vec<Vec<String>>,
    pub pairs: PairCounts,
    /// Undistinguished share of the non-duplicate pairs, as an exact fraction.
    pub failure_rate: String,
    pub elapsed_ms: u64,
}

impl DiscriminationReport {
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn undistinguished(&self) -> usize {
        self.pairs.total - self.pairs.distinguished
    }

    /// Pretty JSON. With `timing` off, `elapsed_ms` is written as 0 so equal
    /// inputs give byte-identical reports.
    pub fn to_json(&self, timing: bool) -> Result<String> {
        let mut r = self.clone();
        if !timing {
            r.elapsed_ms = 0;
        }
        Ok(serde_json::to_string_pretty(&r)? + "\n")
    }

    /// `id,stat1,stat2,...` table of the embeddings.
    pub fn embeddings_csv(&self) -> String {
        let mut out = String::from("id");
        for s in &self.statistics {
            out.push(',');
            out.push_str(s.name());
        }
        out.push('\n');
        for g in &self.graphs {
            out.push_str(&g.id);
            for v in &g.embedding {
                out.push(',');
                out.push_str(v);
            }
            out.push('\n');
        }
        out
    }
}

/// Embeds every graph and compares all pairs, with 1-WL verdicts alongside.
pub fn discriminate(
    graphs: &[(String, Graph)],
    cfg: &SnnConfig,
    stats: &[Stat],
    seed: u64,
) -> Result<DiscriminationReport> {
    if graphs.is_empty() {
        return Err(Error::Empty("graph list"));
    }
    if stats.is_empty() {
        return Err(Error::Empty("statistics"));
    }
    cfg.validate()?;
    let start = Instant::now();
    let computed: Vec<(Embedding, WlHash, String)> = graphs
        .par_iter()
        .map(|(_, g)| {
            let out = snn(g, cfg)?;
            Ok((embed_stats(&out.matrix, stats)?, wl_hash(g), emit_graph6(g)))
        })
        .collect::<Result<_>>()?;

    let mut class_of: BTreeMap<&Embedding, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<String>> = Vec::new();
    for ((id, _), (emb, _, _)) in graphs.iter().zip(&computed) {
        let next = classes.len();
        let c = *class_of.entry(emb).or_insert(next);
        if c == next {
            classes.push(Vec::new());
        }
        classes[c].push(id.clone());
    }

    let mut pairs = PairCounts {
        distinguished: 0,
        total: 0,
        wl_distinguished: 0,
        duplicates: 0,
    };
    let mut failures = 0usize;
    for i in 0..computed.len() {
        for j in i + 1..computed.len() {
            let (a, b) = (&computed[i], &computed[j]);
            let sizes_differ = graphs[i].1.node_count() != graphs[j].1.node_count();
            pairs.total += 1;
            let duplicate = a.2 == b.2;
            if duplicate {
                pairs.duplicates += 1;
            }
            if a.0 != b.0 || sizes_differ {
                pairs.distinguished += 1;
            } else if !duplicate {
                failures += 1;
            }
            if sizes_differ || a.1 != b.1 {
                pairs.wl_distinguished += 1;
            }
        }
    }
    let comparable = pairs.total - pairs.duplicates;
    let failure_rate = if comparable == 0 {
        BigRational::default()
    } else {
        BigRational::new(failures.into(), comparable.into())
    };

    Ok(DiscriminationReport {
        config: cfg.clone(),
        statistics: stats.to_vec(),
        seed,
        graphs: graphs
            .iter()
            .zip(&computed)
            .map(|((id, _), (emb, _, _))| GraphEmbedding {
                id: id.clone(),
                embedding: emb.to_strings(),
            })
            .collect(),
        classes,
        pairs,
        failure_rate: failure_rate.to_string(),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

pub const CSL_NODES: usize = 41;
pub const CSL_RELABELINGS: usize = 15;

/// The 150 CSL graphs: every skip class, each under 15 relabelings drawn
/// from a ChaCha8 stream seeded with `seed`. Ids look like `csl-s5-07`.
pub fn csl_dataset(seed: u64) -> Result<Vec<(String, Graph)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(CSL_SKIPS.len() * CSL_RELABELINGS);
    for &skip in &CSL_SKIPS {
        let base = generate_csl(CSL_NODES, skip)?;
        for r in 0..CSL_RELABELINGS {
            let p = NodePermutation::random(CSL_NODES, &mut rng);
            out.push((format!("csl-s{skip}-{r:02}"), base.permute(&p)?));
        }
    }
    Ok(out)
}

pub fn csl_config() -> SnnConfig {
    SnnConfig::beta(vec![Level::Stable])
}

pub fn run_csl(seed: u64) -> Result<DiscriminationReport> {
    discriminate(&csl_dataset(seed)?, &csl_config(), &[Stat::Sum], seed)
}

pub const SRG_STATS: [Stat; 4] = [Stat::Mean, Stat::Var, Stat::DiagMean, Stat::DiagVar];

pub fn srg_config() -> SnnConfig {
    SnnConfig::beta(vec![Level::Stable; 3])
}

/// All-pairs comparison of one strongly regular family.
pub fn run_srg(graphs: &[(String, Graph)], seed: u64) -> Result<DiscriminationReport> {
    discriminate(graphs, &srg_config(), &SRG_STATS, seed)
}

/// [`run_srg`] on the graphs of a graph6 file, named `<stem>-<index>`.
pub fn run_srg_file(path: &std::path::Path, seed: u64) -> Result<DiscriminationReport> {
    let text = std::fs::read_to_string(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
    let graphs: Vec<(String, Graph)> = parse_graph6_file(&text)?
        .into_iter()
        .enumerate()
        .map(|(i, g)| (format!("{stem}-{i}"), g))
        .collect();
    run_srg(&graphs, seed)
}
