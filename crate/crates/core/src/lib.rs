//! Extraction of statistically significant communities (ESSC).
//!
//! Communities are fixed points of a Benjamini–Hochberg update driven by
//! configuration-model p-values: a vertex joins a set `B` when its number of
//! edges into `B` is improbably large under a binomial reference law whose
//! success probability is the share of edge stubs attached to `B`. Vertices
//! that end up in no community form the background.
//!
//! The crate is split into:
//! - [`graph`]: undirected multigraphs and edge-list I/O,
//! - [`significance`]: block probabilities, binomial tails and the BH step,
//! - [`detect`]: the fixed-point search and the outer extraction loop,
//! - [`bench`]: null, planted and LFR-style benchmark generators,
//! - [`metrics`]: Jaccard, NMI variants, total variation and the Monte-Carlo
//!   configuration-model oracle,
//! - [`io`]: the community file format shared by detection output and
//!   benchmark ground truth.

pub mod bench;
pub mod detect;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod significance;

pub use error::{Error, Result};
pub use graph::{MultiGraph, MultiGraphBuilder, VertexSet};
