use serde::{Deserialize, Serialize};

use crate::hypergraph::Hypergraph;
use crate::projection::ceil_sqrt;

use super::SamplerError;

/// Experiment-mode replacements for derived parameters.
///
/// Runs meant to follow the analysed algorithm leave every field `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overrides {
    /// Number of scan steps `T`.
    pub steps: Option<u64>,
    /// Rejection trials per component `R`. `u64::MAX` means unbounded.
    pub rejection_budget: Option<u64>,
    /// Component edge cap. `usize::MAX` disables the oversized-component exit.
    pub component_cap: Option<usize>,
    /// Projection image size `s`.
    pub image_size: Option<u32>,
}

impl Overrides {
    /// Both guard exits switched off: uncapped components, unbounded
    /// rejection. Every subroutine call then returns an exact conditional
    /// sample, provided one exists; on an infeasible conditional the
    /// rejection loop does not terminate.
    pub fn guards_disabled() -> Self {
        Self {
            component_cap: Some(usize::MAX),
            rejection_budget: Some(u64::MAX),
            ..Self::default()
        }
    }

    pub fn with_steps(mut self, steps: u64) -> Self {
        self.steps = Some(steps);
        self
    }

    pub fn with_component_cap(mut self, cap: usize) -> Self {
        self.component_cap = Some(cap);
        self
    }

    pub fn with_rejection_budget(mut self, budget: u64) -> Self {
        self.rejection_budget = Some(budget);
        self
    }

    pub fn with_image_size(mut self, s: u32) -> Self {
        self.image_size = Some(s);
        self
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// Parameters of one scan, derived from `(n, Δ, k, q, ε)`.
///
/// All logarithms are natural. With `Δ = 0` the instance has no edges; `η` is
/// then infinite, `R` collapses to `⌈10 ln(n/ζ)⌉`, and `Δ` is read as 1 inside
/// `T` and the component cap so both stay finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerParams {
    pub n: usize,
    pub max_degree: usize,
    pub k: usize,
    pub q: u32,
    pub epsilon: f64,
    /// `T = ⌈50 n ln(2nΔ/ε)⌉`.
    pub steps: u64,
    /// `ζ = ε / (4T)`.
    pub zeta: f64,
    /// `η = (1/Δ)(q/100)^((k-3)/2)`.
    pub eta: f64,
    /// `R = ⌈10 (nΔ/ζ)^(1/(1000η)) ln(n/ζ)⌉`, saturating at `u64::MAX`.
    pub rejection_budget: u64,
    /// `⌈4Δk³ ln(nΔ/ζ)⌉`; a component with strictly more edges trips the guard.
    pub component_cap: usize,
    /// Projection image size, `⌈√q⌉` unless overridden.
    pub image_size: u32,
    pub overrides: Overrides,
}

impl SamplerParams {
    pub fn derive(
        h: &Hypergraph,
        q: u32,
        epsilon: f64,
        overrides: Overrides,
    ) -> Result<Self, SamplerError> {
        Self::from_counts(h.n(), h.max_degree(), h.k(), q, epsilon, overrides)
    }

    pub fn from_counts(
        n: usize,
        max_degree: usize,
        k: usize,
        q: u32,
        epsilon: f64,
        overrides: Overrides,
    ) -> Result<Self, SamplerError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(SamplerError::InvalidEpsilon(epsilon));
        }
        if q < 1 {
            return Err(SamplerError::InvalidQ(q));
        }
        if n == 0 {
            return Err(SamplerError::DegenerateInstance);
        }
        let nf = n as f64;
        let delta = max_degree.max(1) as f64;

        let derived_steps = (50.0 * nf * (2.0 * nf * delta / epsilon).ln()).ceil() as u64;
        let steps = overrides.steps.unwrap_or(derived_steps);
        // ζ is pinned to the derived T: an overridden step count changes how
        // long the scan runs, not the per-call error target.
        let zeta = epsilon / (4.0 * derived_steps as f64);

        let eta = if max_degree == 0 {
            f64::INFINITY
        } else {
            (q as f64 / 100.0).powf((k as f64 - 3.0) / 2.0) / max_degree as f64
        };
        let base = nf * max_degree as f64 / zeta;
        let growth = if eta.is_infinite() {
            1.0
        } else {
            base.powf(1.0 / (1000.0 * eta))
        };
        let derived_budget = saturating_ceil_u64(10.0 * growth * (nf / zeta).ln());
        let derived_cap = (4.0 * delta * (k as f64).powi(3) * (nf * delta / zeta).ln()).ceil();
        let derived_cap = if derived_cap >= usize::MAX as f64 {
            usize::MAX
        } else {
            derived_cap as usize
        };

        let image_size = overrides.image_size.unwrap_or_else(|| ceil_sqrt(q));
        if image_size < 1 || image_size > q {
            return Err(SamplerError::Projection(
                crate::projection::ProjectionError::InvalidImageSize { q, s: image_size },
            ));
        }

        Ok(Self {
            n,
            max_degree,
            k,
            q,
            epsilon,
            steps,
            zeta,
            eta,
            rejection_budget: overrides.rejection_budget.unwrap_or(derived_budget),
            component_cap: overrides.component_cap.unwrap_or(derived_cap),
            image_size,
            overrides,
        })
    }
}

fn saturating_ceil_u64(x: f64) -> u64 {
    if x.is_nan() {
        u64::MAX
    } else {
        // `as` saturates at u64::MAX, including for +inf.
        x.ceil() as u64
    }
}
