use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid CSL parameters n={n}, s={skip}: {reason}")]
    CslParameters {
        n: usize,
        skip: usize,
        reason: String,
    },

    #[error("unknown builtin graph '{0}'")]
    UnknownBuiltin(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("scalar kind mismatch: {left} vs {right}")]
    KindMismatch { left: ScalarKind, right: ScalarKind },

    #[error("operation '{op}' is not supported for scalar kind {kind}")]
    UnsupportedKind { op: &'static str, kind: ScalarKind },

    #[error("feature dimension mismatch: expected {expected}, found {found}")]
    FeatureDimension { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid directed subgraph: {0}")]
    InvalidSubgraph(String),

    #[error("allowed path set would exceed the cap of {cap} paths")]
    PathCapExceeded { cap: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("matrix dump parse error on line {line}: {reason}")]
    MatrixDump { line: usize, reason: String },

    #[error("graph record parse error on line {line}: {reason}")]
    GraphRecord { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Discriminant of the entries stored in a [`crate::algebra::PathMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    BigInt,
    Rational,
    Float,
    FeatureVec,
}

impl ScalarKind {
    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::BigInt => "bigint",
            ScalarKind::Rational => "rational",
            ScalarKind::Float => "float",
            ScalarKind::FeatureVec => "featurevec",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, ScalarKind::BigInt | ScalarKind::Rational)
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ScalarKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bigint" => Ok(ScalarKind::BigInt),
            "rational" => Ok(ScalarKind::Rational),
            "float" => Ok(ScalarKind::Float),
            "featurevec" => Ok(ScalarKind::FeatureVec),
            other => Err(Error::Config(format!("unknown scalar kind '{other}'"))),
        }
    }
}
