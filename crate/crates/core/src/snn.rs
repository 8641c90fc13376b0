//! Sieve transforms of a whole graph.
//!
//! * α with levels `(l, k)`: entry `(i, j)` counts the allowed paths `i -> j`
//!   of `CoSieve(v_i, l) • Sieve(v_j, k)`, optionally divided by the row sum
//!   of the co-image and the column sum of the image.
//! * β with levels `(l_1, ..., l_t)`: `Su_1 ∘ ... ∘ Su_t`, where `Su_i` sums
//!   co-images over all nodes for odd `i` and images for even `i`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One as _, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{circ_fold, FeatureVec, GuardedDiv, Matrix, PathMatrix, Scalar};
use crate::error::{Error, Result, ScalarKind};
use crate::graph::{emit_graph6, Graph};
use crate::sieve::{ArcWeights, Backend, ImageCache, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Alpha,
    Beta,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Variant::Alpha),
            "beta" => Ok(Variant::Beta),
            other => Err(Error::Config(format!("unknown variant '{other}'"))),
        }
    }
}

/// Path-length damping factor in `(0, 1]`, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Gamma(BigRational);

impl Gamma {
    pub fn one() -> Self {
        Gamma(BigRational::one())
    }

    pub fn new(value: BigRational) -> Result<Self> {
        if !value.is_positive() || value > BigRational::one() {
            return Err(Error::Config(format!("gamma {value} is outside (0, 1]")));
        }
        Ok(Gamma(value))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromStr for Gamma {
    type Err = Error;

    /// Accepts `p/q`, integers, and plain decimals such as `0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("'{s}' is not a rational number"));
        let int = |t: &str| -> Result<BigInt> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        let value = if let Some((p, q)) = s.split_once('/') {
            let q = int(q)?;
            if num_traits::Zero::is_zero(&q) {
                return Err(bad());
            }
            BigRational::new(int(p)?, q)
        } else if let Some((whole, frac)) = s.split_once('.') {
            let digits = format!("{}{frac}", if whole.is_empty() { "0" } else { whole });
            BigRational::new(int(&digits)?, BigInt::from(10u32).pow(frac.len() as u32))
        } else {
            BigRational::from_integer(int(s)?)
        };
        Gamma::new(value)
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<Gamma> for String {
    fn from(g: Gamma) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for Gamma {
    type Error = Error;

    fn try_from(s: String) -> Result<Gamma> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnnConfig {
    pub variant: Variant,
    /// `(l, k)` for α, `(l_1, ..., l_t)` for β.
    pub levels: Vec<Level>,
    /// Divide α entries by the co-image row sum times the image column sum.
    pub normalize: bool,
    pub gamma: Gamma,
    pub featured: bool,
    pub scalar_kind: ScalarKind,
}

impl SnnConfig {
    /// Unnormalized α over exact integers.
    pub fn alpha(l: Level, k: Level) -> Self {
        SnnConfig {
            variant: Variant::Alpha,
            levels: vec![l, k],
            normalize: false,
            gamma: Gamma::one(),
            featured: false,
            scalar_kind: ScalarKind::BigInt,
        }
    }

    /// β over exact integers.
    pub fn beta(levels: Vec<Level>) -> Self {
        SnnConfig {
            variant: Variant::Beta,
            levels,
            normalize: false,
            gamma: Gamma::one(),
            featured: false,
            scalar_kind: ScalarKind::BigInt,
        }
    }

    /// Normalized α; switches integer configs to rationals.
    pub fn normalized(mut self) -> Self {
        self.normalize = true;
        if self.scalar_kind == ScalarKind::BigInt {
            self.scalar_kind = ScalarKind::Rational;
        }
        self
    }

    pub fn with_gamma(mut self, gamma: Gamma) -> Self {
        if !gamma.is_one() && self.scalar_kind == ScalarKind::BigInt {
            self.scalar_kind = ScalarKind::Rational;
        }
        self.gamma = gamma;
        self
    }

    pub fn featured(mut self) -> Self {
        self.featured = true;
        self.scalar_kind = ScalarKind::FeatureVec;
        self
    }

    pub fn with_kind(mut self, kind: ScalarKind) -> Self {
        self.scalar_kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        match self.variant {
            Variant::Alpha if self.levels.len() != 2 => {
                return bad("alpha takes exactly two levels (l, k)")
            }
            Variant::Beta if self.levels.is_empty() => return bad("beta needs at least one level"),
            _ => {}
        }
        if self.normalize && self.variant == Variant::Beta {
            return bad("normalization applies to the alpha variant only");
        }
        if self.normalize && self.scalar_kind == ScalarKind::BigInt {
            return bad("normalization needs a rational, float or featurevec scalar kind");
        }
        if self.featured != (self.scalar_kind == ScalarKind::FeatureVec) {
            return bad("featured mode and the featurevec scalar kind go together");
        }
        if !self.gamma.is_one() && self.scalar_kind == ScalarKind::BigInt {
            return bad("gamma < 1 needs a rational, float or featurevec scalar kind");
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let levels: Vec<String> = self.levels.iter().map(Level::to_string).collect();
        let name = match (self.variant, self.normalize) {
            (Variant::Alpha, false) => "SNN_o(alpha",
            (Variant::Alpha, true) => "SNN(alpha",
            (Variant::Beta, _) => "SNN(beta",
        };
        format!("{name},({}))", levels.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnnOutput {
    pub matrix: PathMatrix,
    pub config: SnnConfig,
    pub graph_hash: String,
}

/// SHA-256 of the graph6 encoding plus the feature table, hex encoded.
pub fn graph_hash(g: &Graph) -> String {
    let mut h = Sha256::new();
    h.update(emit_graph6(g).as_bytes());
    if let Some(f) = g.features() {
        h.update((f.dim() as u64).to_le_bytes());
        for (u, v) in g.edges() {
            for x in f.get(u, v).unwrap_or(&[]) {
                h.update(x.to_bits().to_le_bytes());
            }
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// α over an image cache, without normalization.
pub fn alpha_matrix<T: Scalar>(cache: &ImageCache<'_, T>, l: Level, k: Level) -> Result<Matrix<T>> {
    let (senders, receivers) = alpha_columns(cache, l, k)?;
    let n = senders.len();
    let shape = cache_shape(cache)?;
    let mut out = Matrix::zeros(n, shape);
    out_rows(&mut out, |i, j| {
        alpha_entry(&senders[i], &receivers[j], i, j)
    });
    Ok(out)
}

/// α with each entry divided by `rowsum(CoImage(v_i, l), i) * colsum(Image(v_j, k), j)`;
/// entries with a zero divisor are zero.
pub fn alpha_matrix_normalized<T: GuardedDiv>(
    cache: &ImageCache<'_, T>,
    l: Level,
    k: Level,
) -> Result<Matrix<T>> {
    let (senders, receivers) = alpha_columns(cache, l, k)?;
    let n = senders.len();
    let shape = cache_shape(cache)?;
    let sums = |cols: &[Vec<T>]| -> Vec<T> {
        cols.iter()
            .map(|c| c.iter().fold(T::zero(shape), |acc, x| acc.add(x)))
            .collect()
    };
    let (row_sums, col_sums) = (sums(&senders), sums(&receivers));
    let mut out = Matrix::zeros(n, shape);
    out_rows(&mut out, |i, j| {
        let paths = alpha_entry(&senders[i], &receivers[j], i, j);
        paths.guarded_div(&row_sums[i].mul(&col_sums[j]))
    });
    Ok(out)
}

fn cache_shape<T: Scalar>(cache: &ImageCache<'_, T>) -> Result<T::Shape> {
    Ok(cache.image(0, Level::At(0))?.1.shape())
}

fn out_rows<T: Scalar>(out: &mut Matrix<T>, f: impl Fn(usize, usize) -> T + Sync) {
    let n = out.n();
    let rows: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| f(i, j)).collect())
        .collect();
    for (i, row) in rows.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            out.set(i, j, x);
        }
    }
}

type Columns<T> = Vec<Vec<T>>;

/// Column `v` of `Image(v, level)` for every node: the only column of the
/// (co-)image that an α entry reads.
fn alpha_columns<T: Scalar>(
    cache: &ImageCache<'_, T>,
    l: Level,
    k: Level,
) -> Result<(Columns<T>, Columns<T>)> {
    let n = cache.graph().node_count();
    let column = |level: Level| -> Result<Vec<Vec<T>>> {
        (0..n)
            .into_par_iter()
            .map(|v| {
                let (_, m) = cache.image(v, level)?;
                Ok((0..n).map(|r| m.get(r, v).clone()).collect())
            })
            .collect()
    };
    Ok((column(l)?, column(k)?))
}

/// `(CoImage(v_i, l) ∘ Image(v_j, k))[i][j]`, written with
/// `CoImage(v_i, l)[i][m] = sender[m]` and `Image(v_j, k)[m][j] = receiver[m]`.
fn alpha_entry<T: Scalar>(sender: &[T], receiver: &[T], i: usize, j: usize) -> T {
    let mut acc = sender[j].add(&receiver[i]);
    for (a, b) in sender.iter().zip(receiver) {
        if !a.is_zero() && !b.is_zero() {
            acc.mul_add_assign(a, b);
        }
    }
    acc
}

/// β over an image cache.
pub fn beta_matrix<T: Scalar>(cache: &ImageCache<'_, T>, levels: &[Level]) -> Result<Matrix<T>> {
    if levels.is_empty() {
        return Err(Error::Empty("beta levels"));
    }
    let n = cache.graph().node_count();
    let shape = cache_shape(cache)?;
    let mut sums = Vec::with_capacity(levels.len());
    for (idx, &level) in levels.iter().enumerate() {
        cache.precompute(level)?;
        let mut su = Matrix::zeros(n, shape);
        for v in 0..n {
            let (_, m) = cache.image(v, level)?;
            su.add_assign_unchecked(&m);
        }
        // Odd positions (1-based) sum co-images, i.e. the transposed images.
        sums.push(if idx % 2 == 0 { su.transpose() } else { su });
    }
    circ_fold(&sums)
}

fn weights_for(g: &Graph, cfg: &SnnConfig) -> Result<Weights> {
    Ok(match cfg.scalar_kind {
        ScalarKind::BigInt => Weights::BigInt(ArcWeights::unit()),
        ScalarKind::Rational => Weights::Rational(ArcWeights::Uniform(cfg.gamma.value().clone())),
        ScalarKind::Float => Weights::Float(ArcWeights::Uniform(cfg.gamma.to_f64())),
        ScalarKind::FeatureVec => {
            let w = ArcWeights::from_features(g, cfg.gamma.to_f64())?;
            if w.shape() == 0 {
                return Err(Error::Config(
                    "featured mode needs feature dimension >= 1".into(),
                ));
            }
            Weights::FeatureVec(w)
        }
    })
}

enum Weights {
    BigInt(ArcWeights<BigInt>),
    Rational(ArcWeights<BigRational>),
    Float(ArcWeights<f64>),
    FeatureVec(ArcWeights<FeatureVec>),
}

fn run_plain<T: Scalar>(
    g: &Graph,
    cfg: &SnnConfig,
    w: ArcWeights<T>,
    backend: Backend,
) -> Result<Matrix<T>> {
    let cache = ImageCache::new(g, w, backend);
    match cfg.variant {
        Variant::Alpha => alpha_matrix(&cache, cfg.levels[0], cfg.levels[1]),
        Variant::Beta => beta_matrix(&cache, &cfg.levels),
    }
}

fn run_div<T: GuardedDiv>(
    g: &Graph,
    cfg: &SnnConfig,
    w: ArcWeights<T>,
    backend: Backend,
) -> Result<Matrix<T>> {
    if !cfg.normalize {
        return run_plain(g, cfg, w, backend);
    }
    let cache = ImageCache::new(g, w, backend);
    alpha_matrix_normalized(&cache, cfg.levels[0], cfg.levels[1])
}

/// Runs the configured transform on `g`.
pub fn snn(g: &Graph, cfg: &SnnConfig) -> Result<SnnOutput> {
    snn_with_backend(g, cfg, Backend::Auto)
}

pub fn snn_with_backend(g: &Graph, cfg: &SnnConfig, backend: Backend) -> Result<SnnOutput> {
    cfg.validate()?;
    let matrix = match weights_for(g, cfg)? {
        Weights::BigInt(w) => PathMatrix::BigInt(run_plain(g, cfg, w, backend)?),
        Weights::Rational(w) => PathMatrix::Rational(run_div(g, cfg, w, backend)?),
        Weights::Float(w) => PathMatrix::Float(run_div(g, cfg, w, backend)?),
        Weights::FeatureVec(w) => PathMatrix::FeatureVec(run_div(g, cfg, w, backend)?),
    };
    Ok(SnnOutput {
        matrix,
        config: cfg.clone(),
        graph_hash: graph_hash(g),
    })
}

/// α with explicit options; the scalar kind follows from them (integers
/// unless normalizing, damping or featured).
pub fn snn_alpha(
    g: &Graph,
    l: Level,
    k: Level,
    normalize: bool,
    gamma: Gamma,
    featured: bool,
) -> Result<SnnOutput> {
    let mut cfg = SnnConfig::alpha(l, k).with_gamma(gamma);
    if normalize {
        cfg = cfg.normalized();
    }
    if featured {
        cfg = cfg.featured();
    }
    snn(g, &cfg)
}

/// β with explicit options; see [`snn_alpha`] for the scalar kind.
pub fn snn_beta(g: &Graph, levels: Vec<Level>, gamma: Gamma, featured: bool) -> Result<SnnOutput> {
    let mut cfg = SnnConfig::beta(levels).with_gamma(gamma);
    if featured {
        cfg = cfg.featured();
    }
    snn(g, &cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExportFormat {
    #[default]
    JsonLines,
    Csv,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" | "json" => Ok(ExportFormat::JsonLines),
            "csv" => Ok(ExportFormat::Csv),
            other => Err(Error::Config(format!("unknown export format '{other}'"))),
        }
    }
}

#[derive(Debug, Serialize)]
struct ExportRecord<'a> {
    id: &'a str,
    n: usize,
    kind: ScalarKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    entries: Vec<serde_json::Value>,
}

fn json_entries(m: &PathMatrix) -> Vec<serde_json::Value> {
    use serde_json::Value;
    match m {
        PathMatrix::BigInt(m) => m
            .entries()
            .iter()
            .map(|x| Value::String(x.to_string()))
            .collect(),
        PathMatrix::Rational(m) => m
            .entries()
            .iter()
            .map(|x| Value::String(x.to_string()))
            .collect(),
        PathMatrix::Float(m) => m.entries().iter().map(|&x| Value::from(x)).collect(),
        PathMatrix::FeatureVec(m) => m
            .entries()
            .iter()
            .map(|v| Value::Array(v.0.iter().map(|&x| Value::from(x)).collect()))
            .collect(),
    }
}

/// One JSON object describing `m`.
pub fn export_json_record(id: &str, m: &PathMatrix) -> Result<String> {
    let rec = ExportRecord {
        id,
        n: m.n(),
        kind: m.kind(),
        m: m.feature_dim(),
        entries: json_entries(m),
    };
    Ok(serde_json::to_string(&rec)?)
}

/// `id,i,j,value` rows for the nonzero entries of a scalar matrix.
pub fn export_csv_rows(id: &str, m: &PathMatrix) -> Result<String> {
    fn rows<T: Scalar>(id: &str, m: &Matrix<T>, fmt: impl Fn(&T) -> String) -> String {
        let mut out = String::new();
        for i in 0..m.n() {
            for j in 0..m.n() {
                let x = m.get(i, j);
                if !x.is_zero() {
                    out.push_str(&format!("{id},{i},{j},{}\n", fmt(x)));
                }
            }
        }
        out
    }
    Ok(match m {
        PathMatrix::BigInt(m) => rows(id, m, BigInt::to_string),
        PathMatrix::Rational(m) => rows(id, m, BigRational::to_string),
        PathMatrix::Float(m) => rows(id, m, f64::to_string),
        PathMatrix::FeatureVec(_) => {
            return Err(Error::UnsupportedKind {
                op: "csv export",
                kind: ScalarKind::FeatureVec,
            })
        }
    })
}

/// Replaces every graph by its transform and writes one record per graph,
/// in input order. Returns the number of records written.
pub fn transform_dataset<W: Write>(
    graphs: &[(String, Graph)],
    cfg: &SnnConfig,
    format: ExportFormat,
    sink: &mut W,
) -> Result<usize> {
    cfg.validate()?;
    if format == ExportFormat::Csv && cfg.scalar_kind == ScalarKind::FeatureVec {
        return Err(Error::UnsupportedKind {
            op: "csv export",
            kind: ScalarKind::FeatureVec,
        });
    }
    if cfg.featured {
        let mut dims = graphs.iter().map(|(_, g)| g.feature_dim());
        if let Some(first) = dims.next() {
            let expected = first.ok_or_else(|| {
                Error::Config("graph without edge features in featured mode".into())
            })?;
            for d in dims {
                let found = d.ok_or_else(|| {
                    Error::Config("graph without edge features in featured mode".into())
                })?;
                if found != expected {
                    return Err(Error::FeatureDimension { expected, found });
                }
            }
        }
    }
    let outputs: Vec<SnnOutput> = graphs
        .par_iter()
        .map(|(_, g)| snn(g, cfg))
        .collect::<Result<_>>()?;
    if format == ExportFormat::Csv {
        writeln!(sink, "id,i,j,value")?;
    }
    for ((id, _), out) in graphs.iter().zip(&outputs) {
        match format {
            ExportFormat::JsonLines => writeln!(sink, "{}", export_json_record(id, &out.matrix)?)?,
            ExportFormat::Csv => sink.write_all(export_csv_rows(id, &out.matrix)?.as_bytes())?,
        }
    }
    Ok(outputs.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin_graph;
    use crate::sieve::coimage;

    fn ints(rows: &[[i64; 3]]) -> Matrix<BigInt> {
        Matrix::from_rows(
            (),
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn as_int(out: &SnnOutput) -> &Matrix<BigInt> {
        match &out.matrix {
            PathMatrix::BigInt(m) => m,
            other => panic!("expected bigint, got {}", other.kind()),
        }
    }

    #[test]
    fn alpha_entry_matches_full_circ() {
        let g = builtin_graph("example6_G").unwrap();
        let w = ArcWeights::<BigInt>::unit();
        let cache = ImageCache::new(&g, w.clone(), Backend::Dense);
        let fast = alpha_matrix(&cache, Level::At(1), Level::At(2)).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let co = coimage(&g, i, Level::At(1), &w).unwrap().matrix;
                let im = crate::sieve::image(&g, j, Level::At(2), &w).unwrap().matrix;
                assert_eq!(fast.get(i, j), co.circ(&im).unwrap().get(i, j));
            }
        }
    }

    #[test]
    fn normalized_triangle() {
        let k3 = builtin_graph("k3").unwrap();
        let out = snn_alpha(&k3, Level::At(1), Level::At(1), true, Gamma::one(), false).unwrap();
        let PathMatrix::Rational(m) = out.matrix else {
            panic!("rational expected")
        };
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), &if i == j { r(2, 4) } else { r(3, 4) });
            }
        }
    }

    #[test]
    fn normalization_zero_guard() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let out = snn_alpha(&g, Level::At(1), Level::At(1), true, Gamma::one(), false).unwrap();
        let PathMatrix::Rational(m) = out.matrix else {
            panic!()
        };
        for j in 0..3 {
            assert!(Scalar::is_zero(m.get(2, j)));
            assert!(Scalar::is_zero(m.get(j, 2)));
        }
    }

    #[test]
    fn beta_on_triangle() {
        let k3 = builtin_graph("k3").unwrap();
        let adj = ints(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        let one = snn_beta(&k3, vec![Level::Stable], Gamma::one(), false).unwrap();
        assert_eq!(as_int(&one), &adj);
        let two = snn_beta(&k3, vec![Level::Stable, Level::Stable], Gamma::one(), false).unwrap();
        assert_eq!(as_int(&two), &ints(&[[2, 3, 3], [3, 2, 3], [3, 3, 2]]));
        let zero = snn_beta(&k3, vec![Level::At(0)], Gamma::one(), false).unwrap();
        assert!(zero.matrix.is_zero());
        let empty = Graph::new(4, []).unwrap();
        let out = snn_beta(
            &empty,
            vec![Level::Stable, Level::At(2)],
            Gamma::one(),
            false,
        )
        .unwrap();
        assert!(out.matrix.is_zero());
    }

    #[test]
    fn config_validation() {
        let bad = SnnConfig::alpha(Level::At(1), Level::At(1)).with_kind(ScalarKind::BigInt);
        let mut norm = bad.clone();
        norm.normalize = true;
        assert!(norm.validate().is_err());
        assert!(SnnConfig::beta(vec![]).validate().is_err());
        let mut three = SnnConfig::alpha(Level::At(1), Level::At(1));
        three.levels.push(Level::At(2));
        assert!(three.validate().is_err());
        let mut damped = SnnConfig::alpha(Level::At(1), Level::At(1));
        damped.gamma = "0.5".parse().unwrap();
        assert!(damped.validate().is_err());
        assert!(SnnConfig::alpha(Level::At(1), Level::At(1))
            .featured()
            .validate()
            .is_ok());
        let g = builtin_graph("k3").unwrap();
        assert!(snn(&g, &SnnConfig::alpha(Level::At(1), Level::At(1)).featured()).is_err());
    }

    #[test]
    fn gamma_parsing() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!("0.5".parse::<Gamma>().unwrap().value(), &half);
        assert_eq!("1/2".parse::<Gamma>().unwrap().value(), &half);
        assert!("1".parse::<Gamma>().unwrap().is_one());
        for bad in ["0", "1.5", "3/2", "-1/2", "x", "1/0", ""] {
            assert!(bad.parse::<Gamma>().is_err(), "{bad}");
        }
    }

    #[test]
    fn damping_scales_by_path_length() {
        let p3 = builtin_graph("p3").unwrap();
        let g: Gamma = "1/2".parse().unwrap();
        let out = snn_beta(&p3, vec![Level::Stable], g, false).unwrap();
        let PathMatrix::Rational(m) = out.matrix else {
            panic!()
        };
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        // Co-images of node 0 contribute 0->1 (1/2) and 0->1->2 (1/4).
        assert_eq!(m.get(0, 2), &r(1, 4));
        assert_eq!(m.get(0, 1), &r(1, 2));
    }

    #[test]
    fn featured_transform() {
        let g = Graph::with_features(
            3,
            [
                ((0, 1), vec![1.0, 2.0, 0.0, 1.0]),
                ((1, 2), vec![3.0, 1.0, 1.0, 1.0]),
            ],
        )
        .unwrap();
        let out = snn_alpha(&g, Level::At(0), Level::At(1), false, Gamma::one(), true).unwrap();
        let PathMatrix::FeatureVec(m) = &out.matrix else {
            panic!()
        };
        assert_eq!(m.shape(), 4);
        assert_eq!(m.get(0, 1), &FeatureVec(vec![1.0, 2.0, 0.0, 1.0]));
        assert_eq!(m.get(2, 1), &FeatureVec(vec![3.0, 1.0, 1.0, 1.0]));
        assert!(m.get(0, 2).0.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn export_formats() {
        let k3 = builtin_graph("k3").unwrap();
        let cfg = SnnConfig::alpha(Level::At(0), Level::At(1));
        let mut buf = Vec::new();
        let count = transform_dataset(
            &[("k3".into(), k3.clone())],
            &cfg,
            ExportFormat::JsonLines,
            &mut buf,
        )
        .unwrap();
        assert_eq!(count, 1);
        let line = String::from_utf8(buf).unwrap();
        let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["kind"], "bigint");
        assert!(v.get("m").is_none());
        assert_eq!(v["entries"].as_array().unwrap().len(), 9);
        assert_eq!(v["entries"][1], "1");

        let mut buf = Vec::new();
        transform_dataset(&[("k3".into(), k3)], &cfg, ExportFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.contains("k3,0,1,1\n"));
    }

    #[test]
    fn featured_export_checks_dimensions() {
        let a = Graph::with_features(2, [((0, 1), vec![1.0, 2.0])]).unwrap();
        let b = Graph::with_features(2, [((0, 1), vec![1.0])]).unwrap();
        let cfg = SnnConfig::alpha(Level::At(1), Level::At(1)).featured();
        let mut sink = Vec::new();
        let err = transform_dataset(
            &[("a".into(), a.clone()), ("b".into(), b)],
            &cfg,
            ExportFormat::JsonLines,
            &mut sink,
        );
        assert!(matches!(err, Err(Error::FeatureDimension { .. })));
        transform_dataset(&[("a".into(), a)], &cfg, ExportFormat::JsonLines, &mut sink).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&sink).unwrap();
        assert_eq!(v["m"], 2);
        assert_eq!(v["entries"][0].as_array().unwrap().len(), 2);
    }
}
