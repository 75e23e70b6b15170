//! Sampling proper colourings of uniform hypergraphs.
//!
//! The crate is organised around the projected systematic scan: a Glauber-type
//! chain over bucket assignments `Y ∈ [s]^V` (where each colour is mapped to one
//! of `s = ⌈√q⌉` buckets) whose per-vertex updates are drawn by rejection
//! sampling on the components left after pruning satisfied hyperedges.
//!
//! Around the sampler sit the pieces needed to check it at desk scale:
//!
//! - [`oracle`]: exhaustive enumeration of proper colourings and exact
//!   conditional distributions.
//! - [`blocktree`]: the 2-block-tree generator, validity predicate, block
//!   dropping and the DFS encoding, with exhaustive checkers.
//! - [`coupling`]: a greedy maximal coupling of two scans and empirical
//!   mixing curves.
//! - [`workbench`]: instance generation, regime checks and batch runners.
//!
//! Parallel batch execution goes through [`par`], which falls back to a
//! sequential loop when the `parallel` feature is disabled.

pub mod blocktree;
pub mod config;
pub mod coupling;
pub mod hypergraph;
pub mod oracle;
pub mod par;
pub mod projection;
pub mod sampler;
pub mod stats;
pub mod workbench;

pub use config::{Colouring, ProjectedConfig};
pub use hypergraph::{Component, Hypergraph, HypergraphError, LineGraph};
pub use projection::{ProjectionError, ProjectionScheme};
pub use sampler::{Overrides, RunReport, SamplerParams};
