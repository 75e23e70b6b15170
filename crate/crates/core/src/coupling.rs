//! Coupled projected scans and empirical mixing curves.
//!
//! Two copies of the idealised projected scan run side by side on bucket
//! configurations. At each step both update the same vertex `v`, drawing the
//! new buckets from a maximal coupling of the exact conditional projected
//! marginals `ν_v` given the rest of each chain. The marginals come from the
//! exact oracle restricted to the pruned component of `v`, so this module is
//! meant for desk-scale instances only.

use std::collections::HashMap;
use std::io::{self, Write};
use std::sync::{Arc, RwLock};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ProjectedConfig;
use crate::hypergraph::Hypergraph;
use crate::oracle::{self, OracleError};
use crate::par::{self, Execution};
use crate::projection::ProjectionScheme;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn draw<R: Rng + ?Sized>(weights: &[f64], total: f64, rng: &mut R) -> usize {
    let mut u = rng.random::<f64>() * total;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        if u < w {
            return i;
        }
        u -= w;
        last = i;
    }
    last
}

/// Draws `(x, y)` with `x ~ p`, `y ~ r` and `Pr[x ≠ y] = d_TV(p, r)`.
///
/// With probability `Σ min(p_j, r_j)` both take a shared value drawn
/// proportionally to `min(p_j, r_j)`; otherwise `x` and `y` are drawn
/// independently from the normalised residuals `p − min` and `r − min`, whose
/// supports are disjoint. Identical inputs always give `x = y`.
///
/// Indices are 0-based positions into `p` and `r`.
pub fn maximal_coupling<R: Rng + ?Sized>(p: &[f64], r: &[f64], rng: &mut R) -> (usize, usize) {
    assert_eq!(p.len(), r.len(), "distributions over different supports");
    if p == r {
        let x = draw(p, p.iter().sum(), rng);
        return (x, x);
    }
    let overlap: Vec<f64> = p.iter().zip(r).map(|(a, b)| a.min(*b)).collect();
    let shared: f64 = overlap.iter().sum();
    if rng.random::<f64>() < shared {
        let x = draw(&overlap, shared, rng);
        return (x, x);
    }
    let rest_p: Vec<f64> = p.iter().zip(&overlap).map(|(a, m)| (a - m).max(0.0)).collect();
    let rest_r: Vec<f64> = r.iter().zip(&overlap).map(|(a, m)| (a - m).max(0.0)).collect();
    let x = draw(&rest_p, rest_p.iter().sum(), rng);
    let y = draw(&rest_r, rest_r.iter().sum(), rng);
    (x, y)
}

/// Vertex and the base-`s` code of the configuration with that vertex zeroed.
type CacheKey = (usize, u64);

/// Exact one-step kernels `ν_v^{Y_{V∖v}}` of the projected scan, memoised
/// by vertex and the configuration of the other vertices.
///
/// The cache is shared between threads.
pub struct ScanKernel<'a> {
    h: &'a Hypergraph,
    scheme: &'a ProjectionScheme,
    cache: RwLock<HashMap<CacheKey, Arc<[f64]>>>,
}

impl<'a> ScanKernel<'a> {
    /// Fails when `s^n` does not fit a `u64` configuration code.
    pub fn new(h: &'a Hypergraph, scheme: &'a ProjectionScheme) -> Result<Self, CouplingError> {
        if (scheme.s() as u128).checked_pow(h.n() as u32).is_none_or(|c| c > u64::MAX as u128) {
            return Err(CouplingError::InvalidInput(format!(
                "s^n = {}^{} is too large for the kernel cache",
                scheme.s(),
                h.n()
            )));
        }
        Ok(Self {
            h,
            scheme,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        self.h
    }

    pub fn scheme(&self) -> &ProjectionScheme {
        self.scheme
    }

    fn code(&self, v: usize, config: &[u32]) -> u64 {
        let s = self.scheme.s() as u64;
        config.iter().enumerate().rev().fold(0u64, |acc, (u, &b)| {
            let digit = if u == v { 0 } else { (b - 1) as u64 };
            acc * s + digit
        })
    }

    /// `ν_v` given the buckets of `config` outside `v`, as probabilities over
    /// buckets `1..=s` (index `j − 1`).
    pub fn law(&self, v: usize, config: &[u32]) -> Result<Arc<[f64]>, CouplingError> {
        let key = (v, self.code(v, config));
        if let Some(hit) = self.cache.read().expect("kernel cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let y = ProjectedConfig::full(config.to_vec());
        let mu = oracle::conditional_marginal_local(self.h, self.scheme, v, &y)?;
        let mut mass = vec![0u64; self.scheme.s() as usize];
        for (c, &count) in mu.support().iter().zip(mu.counts()) {
            mass[(self.scheme.bucket_of(*c) - 1) as usize] += count;
        }
        let total = mu.total() as f64;
        let law: Arc<[f64]> = mass.into_iter().map(|m| m as f64 / total).collect();
        self.cache
            .write()
            .expect("kernel cache poisoned")
            .insert(key, law.clone());
        Ok(law)
    }

    /// Number of memoised kernels.
    pub fn cached(&self) -> usize {
        self.cache.read().expect("kernel cache poisoned").len()
    }
}

/// Both chains at time `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupledState {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub t: u64,
}

impl CoupledState {
    pub fn new(x: Vec<u32>, y: Vec<u32>) -> Self {
        assert_eq!(x.len(), y.len(), "chains over different vertex sets");
        Self { x, y, t: 0 }
    }

    /// `{v : X(v) ≠ Y(v)}`, ascending.
    pub fn discrepancies(&self) -> Vec<usize> {
        (0..self.x.len()).filter(|&v| self.x[v] != self.y[v]).collect()
    }

    pub fn coalesced(&self) -> bool {
        self.x == self.y
    }

    /// The vertex updated by the next step.
    pub fn next_vertex(&self) -> usize {
        ((self.t + 1) % self.x.len() as u64) as usize
    }

    /// Advances both chains by one coupled step.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        kernel: &ScanKernel<'_>,
        rng: &mut R,
    ) -> Result<usize, CouplingError> {
        let v = self.next_vertex();
        let p = kernel.law(v, &self.x)?;
        let r = kernel.law(v, &self.y)?;
        let (a, b) = maximal_coupling(&p, &r, rng);
        self.x[v] = a as u32 + 1;
        self.y[v] = b as u32 + 1;
        self.t += 1;
        Ok(v)
    }
}

fn check_start(kernel: &ScanKernel<'_>, x0: &[u32], y0: &[u32]) -> Result<(), CouplingError> {
    let n = kernel.hypergraph().n();
    let s = kernel.scheme().s();
    for (name, c) in [("X0", x0), ("Y0", y0)] {
        if c.len() != n {
            return Err(CouplingError::InvalidInput(format!(
                "{name} has {} entries, expected {n}",
                c.len()
            )));
        }
        if let Some(b) = c.iter().find(|&&b| b < 1 || b > s) {
            return Err(CouplingError::InvalidInput(format!("{name} bucket {b} outside 1..={s}")));
        }
    }
    Ok(())
}

/// Discrepancy sets of a coupled run: entry `t` is `{v : X_t(v) ≠ Y_t(v)}`
/// for `t = 0..=T`, and `updated[t − 1]` the vertex touched by step `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupledTrace {
    pub discrepancies: Vec<Vec<usize>>,
    pub updated: Vec<usize>,
    pub final_state: CoupledState,
}

impl CoupledTrace {
    /// First `t` with an empty discrepancy set.
    pub fn coalescence_time(&self) -> Option<u64> {
        self.discrepancies
            .iter()
            .position(Vec::is_empty)
            .map(|t| t as u64)
    }
}

pub fn run_coupled_scan<R: Rng + ?Sized>(
    kernel: &ScanKernel<'_>,
    x0: Vec<u32>,
    y0: Vec<u32>,
    steps: u64,
    rng: &mut R,
) -> Result<CoupledTrace, CouplingError> {
    check_start(kernel, &x0, &y0)?;
    let mut state = CoupledState::new(x0, y0);
    let mut discrepancies = Vec::with_capacity(steps as usize + 1);
    let mut updated = Vec::with_capacity(steps as usize);
    discrepancies.push(state.discrepancies());
    for _ in 0..steps {
        updated.push(state.step(kernel, rng)?);
        discrepancies.push(state.discrepancies());
    }
    Ok(CoupledTrace {
        discrepancies,
        updated,
        final_state: state,
    })
}

/// Settings for [`mixing_curve`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub t_max: u64,
    /// Spacing of checkpoints; `0` means one sweep (`n` steps).
    pub every: u64,
    pub runs: usize,
    /// Random initial pairs on top of the constant pair `(1^V, s^V)`.
    pub random_pairs: usize,
    pub seed: u64,
}

impl CurveSpec {
    pub fn new(t_max: u64, runs: usize, seed: u64) -> Self {
        Self {
            t_max,
            every: 0,
            runs,
            random_pairs: 10,
            seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub t: u64,
    pub vertex: usize,
    /// Largest estimated `Pr[X_T(v) ≠ Y_T(v)]` over the initial pairs.
    pub discrepancy_rate: f64,
    /// Binomial standard error of that estimate.
    pub stderr: f64,
}

/// Per-vertex discrepancy estimates at checkpoints, maximised over initial
/// pairs. This is an estimate of the worst case, not a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixingCurve {
    pub checkpoints: Vec<u64>,
    pub pairs: Vec<(Vec<u32>, Vec<u32>)>,
    pub runs_per_pair: usize,
    pub rows: Vec<CurveRow>,
}

impl MixingCurve {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "T,vertex,discrepancy_rate,stderr")?;
        for r in &self.rows {
            writeln!(w, "{},{},{:.6},{:.6}", r.t, r.vertex, r.discrepancy_rate, r.stderr)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Rows at checkpoint `t`, by vertex.
    pub fn at(&self, t: u64) -> Vec<CurveRow> {
        self.rows.iter().copied().filter(|r| r.t == t).collect()
    }

    /// Largest increase between consecutive checkpoints at one vertex,
    /// measured in units of the combined standard error. Values at or below 2
    /// mean the curve is non-increasing within 2σ.
    pub fn worst_increase_sigmas(&self) -> f64 {
        let n = self.rows.iter().map(|r| r.vertex + 1).max().unwrap_or(0);
        let mut worst = f64::NEG_INFINITY;
        for pair in self.checkpoints.windows(2) {
            let (a, b) = (self.at(pair[0]), self.at(pair[1]));
            for v in 0..n {
                let rise = b[v].discrepancy_rate - a[v].discrepancy_rate;
                let sigma = (a[v].stderr.powi(2) + b[v].stderr.powi(2)).sqrt();
                let z = if rise <= 0.0 {
                    0.0
                } else if sigma == 0.0 {
                    f64::INFINITY
                } else {
                    rise / sigma
                };
                worst = worst.max(z);
            }
        }
        worst.max(0.0)
    }
}

/// Estimates per-vertex discrepancy curves from the constant pair
/// `(1^V, s^V)` and `spec.random_pairs` uniformly random pairs, with
/// `spec.runs` coupled runs each.
///
/// Pair `p`'s initial states use RNG stream `u64::MAX − p`; its run `i` uses
/// stream `(p << 32) | i`.
pub fn mixing_curve(
    kernel: &ScanKernel<'_>,
    spec: &CurveSpec,
    exec: Execution,
) -> Result<MixingCurve, CouplingError> {
    let n = kernel.hypergraph().n();
    let s = kernel.scheme().s();
    if spec.runs == 0 {
        return Err(CouplingError::InvalidInput("runs must be positive".into()));
    }
    let every = if spec.every == 0 { n as u64 } else { spec.every };
    let mut checkpoints: Vec<u64> = (0..=spec.t_max).step_by(every as usize).collect();
    if checkpoints.last() != Some(&spec.t_max) {
        checkpoints.push(spec.t_max);
    }

    let mut pairs = vec![(vec![1; n], vec![s; n])];
    for p in 0..spec.random_pairs {
        let mut rng = par::job_rng(spec.seed, u64::MAX - p as u64);
        let x = (0..n).map(|_| rng.random_range(1..=s)).collect();
        let y = (0..n).map(|_| rng.random_range(1..=s)).collect();
        pairs.push((x, y));
    }

    // counts[pair][checkpoint][vertex]
    let mut counts = Vec::with_capacity(pairs.len());
    for (p, (x0, y0)) in pairs.iter().enumerate() {
        check_start(kernel, x0, y0)?;
        let per_run = par::map_indexed(spec.runs, exec, |i| {
            let mut rng = par::job_rng(spec.seed, ((p as u64) << 32) | i as u64);
            let mut state = CoupledState::new(x0.clone(), y0.clone());
            let mut hits = vec![vec![false; n]; checkpoints.len()];
            let mut next = 0;
            loop {
                if checkpoints.get(next) == Some(&state.t) {
                    for (v, hit) in hits[next].iter_mut().enumerate() {
                        *hit = state.x[v] != state.y[v];
                    }
                    next += 1;
                }
                if next == checkpoints.len() {
                    return Ok::<_, CouplingError>(hits);
                }
                state.step(kernel, &mut rng)?;
            }
        });
        let mut tally = vec![vec![0u64; n]; checkpoints.len()];
        for run in per_run {
            for (row, hits) in tally.iter_mut().zip(run?) {
                for (c, hit) in row.iter_mut().zip(hits) {
                    *c += hit as u64;
                }
            }
        }
        counts.push(tally);
    }

    let runs = spec.runs as f64;
    let mut rows = Vec::new();
    for (ci, &t) in checkpoints.iter().enumerate() {
        for v in 0..n {
            let worst = counts.iter().map(|c| c[ci][v]).max().unwrap_or(0);
            let rate = worst as f64 / runs;
            rows.push(CurveRow {
                t,
                vertex: v,
                discrepancy_rate: rate,
                stderr: (rate * (1.0 - rate) / runs).sqrt(),
            });
        }
    }
    Ok(MixingCurve {
        checkpoints,
        pairs,
        runs_per_pair: spec.runs,
        rows,
    })
}
