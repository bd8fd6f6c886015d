//! Benchmark toolkit for link prediction on synthetic graphs.
//!
//! Graphs are built from `M` disjoint deterministic structures (cliques,
//! square lattices, lattices with closed diagonals) plus `N_B` bridge nodes
//! wired at random to structure nodes. Because the deterministic part is
//! known exactly, the best achievable ROC-AUC has a closed form, and any
//! link predictor can be measured against that ceiling.
//!
//! Module map:
//!
//! - [`graphgen`]: structure link functions and the seeded generator.
//! - [`census`]: existing / possible / missing edge counts per pair class.
//! - [`analytic`]: ideal-algorithm and planted-SBM AUC with ROC breakpoints.
//! - [`split`]: observed/held-out partition and balanced negative sampling.
//! - [`predict`]: similarity indices, oracle scorers and score-file import.
//! - [`eval`]: tie-aware AUC, ROC curves and replicate aggregation.
//! - [`bench`]: presets, parameter sweeps and CSV output.
//! - [`cli`]: the `linkbench` command line.

pub mod analytic;
pub mod bench;
pub mod census;
pub mod cli;
pub mod error;
pub mod eval;
pub mod graphgen;
pub mod io;
pub mod predict;
pub mod seed;
pub mod split;

pub use error::{Error, Result};
pub use graphgen::{GraphSpec, NodePair, NodeRole, StructureKind, SyntheticGraph};
