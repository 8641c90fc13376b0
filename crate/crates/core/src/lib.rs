//! Path-counting graph algebra and the sieve graph transform.
//!
//! * [`graph`]: simple graphs, graph6 I/O, CSL and fixture generators.
//! * [`algebra`]: the matrix monoid `A ∘ B = A + B + AB` over exact and
//!   approximate entry kinds.
//! * [`modg`]: the symbolic monoid of directed subgraphs with explicit path
//!   sets, used as ground truth for the matrix shortcuts.
//! * [`sieve`]: per-node BFS level arcs and their image matrices.
//! * [`snn`]: the α and β sieve transforms and dataset export.
//! * [`wl`]: 1-WL colour refinement.
//! * [`harness`]: embeddings, exact determinants and discrimination runs.

pub mod algebra;
pub mod error;
pub mod graph;
pub mod harness;
pub mod modg;
pub mod sieve;
pub mod snn;
pub mod validate;
pub mod wl;

pub use error::{Error, Result, ScalarKind};
