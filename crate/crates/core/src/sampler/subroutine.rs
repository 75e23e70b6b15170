use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{Colouring, ProjectedConfig};
use crate::hypergraph::{Component, ComponentSearch, Hypergraph};
use crate::projection::ProjectionScheme;

use super::SamplerParams;

/// How a call to the subroutine produced its output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Exit {
    /// Assembled from per-component rejection samples.
    Exact,
    /// A pruned component exceeded the edge cap; output is uniform on `[q]^S`.
    OversizedComponent,
    /// Some component exhausted its rejection budget; output is uniform on
    /// `[q]^S`.
    RejectionFailed,
}

impl Exit {
    pub fn is_guard(self) -> bool {
        self != Exit::Exact
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    /// Colour of `S[i]` at position `i`.
    pub colours: Vec<u32>,
    pub exit: Exit,
}

/// Rejection sampling on one pruned component.
///
/// Each trial draws `X_v` uniformly from `Q_v = h^{-1}(Y_v)` for `v` in the
/// domain of `y` and from `[q]` otherwise, and accepts if no edge of the
/// component is monochromatic. Returns `None` after `budget` failed trials.
pub fn rejection_sample<R: Rng + ?Sized>(
    h: &Hypergraph,
    component: &Component,
    scheme: &ProjectionScheme,
    y: &ProjectedConfig,
    budget: u64,
    rng: &mut R,
) -> Option<Colouring> {
    let mut scratch = vec![0u32; h.n()];
    let mut lists = Vec::new();
    if rejection_into(h, component, scheme, y, budget, rng, &mut scratch, &mut lists) {
        let colours = component.vertices.iter().map(|&v| scratch[v]).collect();
        Some(Colouring::new(component.vertices.clone(), colours))
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn rejection_into<R: Rng + ?Sized>(
    h: &Hypergraph,
    component: &Component,
    scheme: &ProjectionScheme,
    y: &ProjectedConfig,
    budget: u64,
    rng: &mut R,
    scratch: &mut [u32],
    lists: &mut Vec<(usize, u32, u32)>,
) -> bool {
    lists.clear();
    for &v in &component.vertices {
        let range = match y.get(v) {
            Some(b) => scheme.interval_unchecked(b),
            None => 1..=scheme.q(),
        };
        lists.push((v, *range.start(), *range.end()));
    }
    let mut trial = 0u64;
    while trial < budget {
        trial += 1;
        for &(v, lo, hi) in lists.iter() {
            scratch[v] = if lo == hi {
                lo
            } else {
                rng.random_range(lo..=hi)
            };
        }
        if component.edges.iter().all(|&e| h.edge_proper(e, scratch)) {
            return true;
        }
    }
    false
}

/// The sampling subroutine with reusable buffers.
///
/// One `Sampler` serves a whole scan; it is cheap to build but not `Sync`, so
/// concurrent runs each own one.
pub struct Sampler<'a> {
    h: &'a Hypergraph,
    scheme: &'a ProjectionScheme,
    component_cap: usize,
    rejection_budget: u64,
    search: ComponentSearch,
    components: Vec<Component>,
    scratch: Vec<u32>,
    lists: Vec<(usize, u32, u32)>,
}

impl<'a> Sampler<'a> {
    pub fn new(h: &'a Hypergraph, scheme: &'a ProjectionScheme, params: &SamplerParams) -> Self {
        Self::with_limits(h, scheme, params.component_cap, params.rejection_budget)
    }

    pub fn with_limits(
        h: &'a Hypergraph,
        scheme: &'a ProjectionScheme,
        component_cap: usize,
        rejection_budget: u64,
    ) -> Self {
        Self {
            h,
            scheme,
            component_cap,
            rejection_budget,
            search: ComponentSearch::new(h),
            components: Vec::new(),
            scratch: vec![0; h.n()],
            lists: Vec::new(),
        }
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        self.h
    }

    pub fn scheme(&self) -> &ProjectionScheme {
        self.scheme
    }

    /// Draws `X_S` given `Y_Λ`, where `Λ` is the domain of `y`.
    pub fn sample<R: Rng + ?Sized>(
        &mut self,
        s: &[usize],
        y: &ProjectedConfig,
        rng: &mut R,
    ) -> SampleOutcome {
        let mut colours = Vec::with_capacity(s.len());
        let exit = self.sample_into(s, y, rng, &mut colours);
        SampleOutcome { colours, exit }
    }

    /// As [`Sampler::sample`], writing into `out` (cleared first).
    pub fn sample_into<R: Rng + ?Sized>(
        &mut self,
        s: &[usize],
        y: &ProjectedConfig,
        rng: &mut R,
        out: &mut Vec<u32>,
    ) -> Exit {
        out.clear();
        self.search.begin();
        let mut used = 0;
        for &v in s {
            if self.search.is_visited(v) {
                continue;
            }
            if used == self.components.len() {
                self.components.push(Component::default());
            }
            let within_cap = self.search.component(
                self.h,
                y,
                v,
                self.component_cap,
                &mut self.components[used],
            );
            used += 1;
            if !within_cap {
                self.uniform_fallback(s, rng, out);
                return Exit::OversizedComponent;
            }
        }

        for comp in &self.components[..used] {
            if !rejection_into(
                self.h,
                comp,
                self.scheme,
                y,
                self.rejection_budget,
                rng,
                &mut self.scratch,
                &mut self.lists,
            ) {
                self.uniform_fallback(s, rng, out);
                return Exit::RejectionFailed;
            }
        }
        out.extend(s.iter().map(|&v| self.scratch[v]));
        Exit::Exact
    }

    fn uniform_fallback<R: Rng + ?Sized>(&self, s: &[usize], rng: &mut R, out: &mut Vec<u32>) {
        out.clear();
        let q = self.scheme.q();
        out.extend(s.iter().map(|_| rng.random_range(1..=q)));
    }
}
