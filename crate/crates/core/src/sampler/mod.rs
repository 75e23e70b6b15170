//! The projected systematic scan and its sampling subroutine.
//!
//! [`run_scan`] keeps a bucket configuration `Y ∈ [s]^V` and sweeps the
//! vertices in label order. Each update asks the [`Sampler`] for a colour of
//! one vertex conditioned on the buckets of all others, then stores that
//! colour's bucket. A final call with `S = V` turns `Y` into a colouring.
//!
//! The subroutine prunes edges already satisfied by the conditioning buckets,
//! and rejection-samples each remaining component that meets `S`. Two guards
//! bound its work: a component edge cap and a per-component trial budget. When
//! either trips, the output is a uniform draw from `[q]^S` and the exit is
//! recorded in the [`RunReport`].

mod params;
mod scan;
mod subroutine;

use thiserror::Error;

use crate::projection::ProjectionError;

pub use params::{Overrides, SamplerParams};
pub use scan::{run_batch, run_scan, run_scan_with, RunReport};
pub use subroutine::{rejection_sample, Exit, SampleOutcome, Sampler};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("colour count q must be at least 1, got {0}")]
    InvalidQ(u32),
    #[error("instance has no vertices")]
    DegenerateInstance,
    #[error(transparent)]
    Projection(#[from] ProjectionError),
}
