//! Instance generation, regime checking, and the report types behind the
//! command-line tool.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocktree::{self, BlockTreeError, GeneratorCheck, Graph, InjectivityReport};
use crate::coupling::CouplingError;
use crate::hypergraph::{text, Hypergraph, HypergraphError};
use crate::oracle::{self, LocalUniformityReport, OracleError};
use crate::par::{self, Execution};
use crate::projection::ProjectionScheme;
use crate::sampler::{self, Overrides, RunReport, SamplerError, SamplerParams};

/// Retry limit for [`generate_instance`].
pub const MAX_RETRIES: usize = 10_000;

/// Relative slack below which a regime inequality is reported as marginal.
pub const REGIME_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorkbenchError {
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Format(#[from] text::FormatError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    BlockTree(#[from] BlockTreeError),
}

pub fn read_instance(path: &Path) -> Result<Hypergraph, WorkbenchError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| WorkbenchError::Io(format!("{}: {e}", path.display())))?;
    Ok(text::parse(&text)?)
}

pub fn read_graph(path: &Path) -> Result<Graph, WorkbenchError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| WorkbenchError::Io(format!("{}: {e}", path.display())))?;
    let (n, edges) = text::parse_graph(&text)?;
    Ok(Graph::new(n, &edges))
}

/// Random `k`-uniform instance request.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub k: usize,
    /// Degree ceiling `Δ`.
    pub max_degree: usize,
    /// Number of edges `m`.
    pub edges: usize,
    pub seed: u64,
    pub simple: bool,
}

/// Draws `m` distinct edges one at a time, each a uniform `k`-subset of the
/// vertices whose degree is still below `Δ`. Edges that repeat an existing
/// one, or share two vertices with one when simplicity is required, are
/// redrawn; a dead end restarts from scratch. Every redraw or restart counts
/// towards [`MAX_RETRIES`].
pub fn generate_instance(spec: &GenSpec) -> Result<Hypergraph, WorkbenchError> {
    let GenSpec {
        n,
        k,
        max_degree,
        edges: m,
        seed,
        simple,
    } = *spec;
    if k == 0 {
        return Err(WorkbenchError::InvalidInput("k must be at least 1".into()));
    }
    if m > 0 && k > n {
        return Err(WorkbenchError::Infeasible(format!("k = {k} exceeds n = {n}")));
    }
    if m * k > n * max_degree {
        return Err(WorkbenchError::Infeasible(format!(
            "m·k = {} exceeds n·Δ = {}",
            m * k,
            n * max_degree
        )));
    }

    let mut rng = par::job_rng(seed, 0);
    let mut retries = 0usize;
    let mut bump = |what: &str| {
        retries += 1;
        if retries > MAX_RETRIES {
            Err(WorkbenchError::Infeasible(format!(
                "gave up after {MAX_RETRIES} retries ({what})"
            )))
        } else {
            Ok(())
        }
    };

    'attempt: loop {
        let mut degree = vec![0usize; n];
        let mut chosen: Vec<Vec<usize>> = Vec::with_capacity(m);
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        while chosen.len() < m {
            let open: Vec<usize> = (0..n).filter(|&v| degree[v] < max_degree).collect();
            if open.len() < k {
                bump("ran out of vertices below the degree ceiling")?;
                continue 'attempt;
            }
            let mut edge: Vec<usize> = index::sample(&mut rng, open.len(), k)
                .into_iter()
                .map(|i| open[i])
                .collect();
            edge.sort_unstable();
            let clash = seen.contains(&edge)
                || (simple
                    && chosen.iter().any(|f| f.iter().filter(|v| edge.binary_search(v).is_ok()).count() >= 2));
            if clash {
                bump("edge rejected")?;
                continue;
            }
            for &v in &edge {
                degree[v] += 1;
            }
            seen.insert(edge.clone());
            chosen.push(edge);
        }
        let h = Hypergraph::validate(n, k, chosen)?;
        debug_assert!(!simple || h.is_simple());
        return Ok(h);
    }
}

/// `G(n, p)` random graph on RNG stream 0 of `seed`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = par::job_rng(seed, 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Within [`REGIME_SLACK`] of the boundary.
    Marginal,
}

/// One inequality `lhs ≥ rhs`. `rhs` is `None` when the threshold is
/// undefined (non-positive exponent denominator), which counts as a failure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub lhs: f64,
    pub rhs: Option<f64>,
    pub verdict: Verdict,
}

impl Condition {
    fn at_least(lhs: f64, rhs: Option<f64>) -> Self {
        let verdict = match rhs {
            Some(r) if r.is_finite() => {
                let diff = lhs - r;
                if diff.abs() <= REGIME_SLACK * r.abs().max(1.0) {
                    Verdict::Marginal
                } else if diff > 0.0 {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
            _ => Verdict::Fail,
        };
        Self {
            lhs,
            rhs: rhs.filter(|r| r.is_finite()),
            verdict,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// `base^exponent` when the exponent's denominator is positive.
fn power_threshold(scale: f64, base: f64, num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| scale * base.powf(num / den))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub n: usize,
    pub k: usize,
    pub max_degree: usize,
    pub q: u32,
    pub delta: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// `⌈4/δ⌉`.
    pub theta: usize,
    pub simple: bool,
    /// `k ≥ 20(1+δ)/δ`.
    pub k_condition: Condition,
    /// `q ≥ 100 (Δ/α)^{(2+δ)/(k − 4/δ − 4)}`.
    pub q_condition: Condition,
    /// `q ≥ 40 Δ^{2/(k−4)}`.
    pub aux_coupling: Condition,
    /// `q ≥ 100 Δ^{2/(k−3)}`.
    pub aux_uniformity: Condition,
    pub params: Option<SamplerParams>,
    /// Simple, and both main conditions hold.
    pub in_regime: bool,
}

/// Evaluates the sufficient conditions for the fast-sampling regime (with
/// `α = 1` for the headline version) and the two auxiliary conditions on `q`.
pub fn regime_check(
    h: &Hypergraph,
    q: u32,
    delta: f64,
    alpha: f64,
    epsilon: f64,
) -> Result<RegimeReport, WorkbenchError> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(WorkbenchError::InvalidInput(format!("delta must be positive, got {delta}")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(WorkbenchError::InvalidInput(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let k = h.k() as f64;
    let d = h.max_degree() as f64;
    let qf = q as f64;

    let k_condition = Condition::at_least(k, Some(20.0 * (1.0 + delta) / delta));
    let q_condition = Condition::at_least(
        qf,
        power_threshold(100.0, d / alpha, 2.0 + delta, k - 4.0 / delta - 4.0),
    );
    let aux_coupling = Condition::at_least(qf, power_threshold(40.0, d, 2.0, k - 4.0));
    let aux_uniformity = Condition::at_least(qf, power_threshold(100.0, d, 2.0, k - 3.0));
    let simple = h.is_simple();

    Ok(RegimeReport {
        n: h.n(),
        k: h.k(),
        max_degree: h.max_degree(),
        q,
        delta,
        alpha,
        epsilon,
        theta: (4.0 / delta).ceil() as usize,
        simple,
        k_condition,
        q_condition,
        aux_coupling,
        aux_uniformity,
        params: SamplerParams::derive(h, q, epsilon, Overrides::default()).ok(),
        in_regime: simple && k_condition.holds() && q_condition.holds(),
    })
}

/// Guard tallies and per-vertex colour counts over a batch of runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub runs: usize,
    pub q: u32,
    pub bad_com_total: u64,
    pub bad_rej_total: u64,
    /// Runs where at least one call left through a guard.
    pub runs_with_guard: usize,
    /// `colour_counts[v][c − 1]`.
    pub colour_counts: Vec<Vec<u64>>,
}

impl BatchSummary {
    pub fn from_reports(reports: &[RunReport], n: usize, q: u32) -> Self {
        let mut colour_counts = vec![vec![0u64; q as usize]; n];
        let (mut com, mut rej, mut guarded) = (0, 0, 0);
        for r in reports {
            com += r.bad_com_count;
            rej += r.bad_rej_count;
            guarded += (r.bad_com_count + r.bad_rej_count > 0) as usize;
            for (v, &c) in r.colouring.iter().enumerate() {
                colour_counts[v][(c - 1) as usize] += 1;
            }
        }
        Self {
            runs: reports.len(),
            q,
            bad_com_total: com,
            bad_rej_total: rej,
            runs_with_guard: guarded,
            colour_counts,
        }
    }

    /// Empirical `Pr[X_v = c]`, indexed `[v][c − 1]`.
    pub fn marginals(&self) -> Vec<Vec<f64>> {
        let runs = self.runs.max(1) as f64;
        self.colour_counts
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 / runs).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum UniformityStatus {
    Pass(LocalUniformityReport),
    Fail(LocalUniformityReport),
    Skipped { reason: String },
}

impl UniformityStatus {
    pub fn ok(&self) -> bool {
        !matches!(self, Self::Fail(_))
    }
}

/// Sampler output checked against exact marginals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub epsilon: f64,
    pub seed: u64,
    pub runs: usize,
    pub overrides: Overrides,
    /// Number of proper `q`-colourings.
    pub proper_colourings: u64,
    /// Per vertex, TV between empirical and exact colour marginals.
    pub tv_marginals: Vec<f64>,
    pub max_tv: f64,
    pub tolerance: f64,
    pub bad_com_total: u64,
    pub bad_rej_total: u64,
    pub local_uniformity: UniformityStatus,
    pub passed: bool,
}

/// Settings for [`verify`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySpec {
    pub q: u32,
    pub epsilon: f64,
    pub overrides: Overrides,
    pub runs: usize,
    pub seed: u64,
    /// Radius for the local-uniformity check; `None` uses `k`.
    pub radius: Option<f64>,
    pub tolerance: f64,
}

/// Runs `spec.runs` scans, compares per-vertex colour frequencies with the
/// exact marginals of the uniform proper colouring, and runs the
/// local-uniformity check on full lists.
pub fn verify(h: &Hypergraph, spec: &VerifySpec, exec: Execution) -> Result<VerifyReport, WorkbenchError> {
    let lists = oracle::full_lists(h.n(), spec.q);
    let (total, counts) = oracle::marginal_counts(h, &lists)?;
    if total == 0 {
        return Err(OracleError::EmptySupport.into());
    }
    let params = SamplerParams::derive(h, spec.q, spec.epsilon, spec.overrides)?;
    let scheme = ProjectionScheme::with_image_size(spec.q, params.image_size)
        .map_err(SamplerError::from)?;
    let reports = sampler::run_batch(h, &scheme, &params, spec.seed, spec.runs, exec);
    let summary = BatchSummary::from_reports(&reports, h.n(), spec.q);

    let empirical = summary.marginals();
    let tv_marginals: Vec<f64> = (0..h.n())
        .map(|v| {
            let exact: Vec<f64> = (1..=spec.q as usize)
                .map(|c| counts[v][c] as f64 / total as f64)
                .collect();
            oracle::tv_distance(&exact, &empirical[v])
        })
        .collect();
    let max_tv = tv_marginals.iter().copied().fold(0.0, f64::max);

    let r = spec.radius.unwrap_or(h.k() as f64);
    let local_uniformity = match oracle::local_uniformity_check(h, &lists, r) {
        Ok(rep) if rep.passed() => UniformityStatus::Pass(rep),
        Ok(rep) => UniformityStatus::Fail(rep),
        Err(e @ (OracleError::PreconditionUnmet { .. } | OracleError::InvalidRadius { .. })) => {
            UniformityStatus::Skipped {
                reason: e.to_string(),
            }
        }
        Err(e) => return Err(e.into()),
    };

    Ok(VerifyReport {
        n: h.n(),
        k: h.k(),
        q: spec.q,
        epsilon: spec.epsilon,
        seed: spec.seed,
        runs: spec.runs,
        overrides: spec.overrides,
        proper_colourings: total,
        passed: max_tv <= spec.tolerance && local_uniformity.ok(),
        tv_marginals,
        max_tv,
        tolerance: spec.tolerance,
        bad_com_total: summary.bad_com_total,
        bad_rej_total: summary.bad_rej_total,
        local_uniformity,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlocktreeCheck {
    Generate,
    Inject,
    Counts,
}

/// Connected-subgraph count through one vertex against `(ed)^{ℓ−1}/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub vertex: usize,
    pub size: usize,
    pub count: u64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "lowercase")]
pub enum BlocktreeReport {
    Generate {
        theta: usize,
        max_size: usize,
        runs: usize,
        ell_histogram: BTreeMap<usize, usize>,
        passed: bool,
        counterexamples: Vec<GeneratorCheck>,
    },
    Inject {
        theta: usize,
        max_ell: usize,
        trees: usize,
        passed: bool,
        reports: Vec<InjectivityReport>,
        counterexamples: Vec<InjectivityReport>,
    },
    Counts {
        max_size: usize,
        rows: usize,
        passed: bool,
        counterexamples: Vec<CountRow>,
    },
}

impl BlocktreeReport {
    pub fn passed(&self) -> bool {
        match self {
            Self::Generate { passed, .. } | Self::Inject { passed, .. } | Self::Counts { passed, .. } => {
                *passed
            }
        }
    }
}

/// Budget on enumerated 2-block-trees per `(vertex, ℓ)`.
pub const BLOCKTREE_BUDGET: usize = 2_000_000;

/// `size_limit` bounds `|C|` for `generate` and `ℓ` for `counts`;
/// `max_ell` bounds the tree sizes enumerated by `inject`.
pub fn blocktree_check(
    g: &Graph,
    check: BlocktreeCheck,
    theta: usize,
    size_limit: usize,
    max_ell: usize,
) -> Result<BlocktreeReport, WorkbenchError> {
    if theta == 0 {
        return Err(WorkbenchError::InvalidInput("theta must be at least 1".into()));
    }
    Ok(match check {
        BlocktreeCheck::Generate => {
            let sweep = blocktree::sweep_generator(g, theta, size_limit)?;
            BlocktreeReport::Generate {
                theta,
                max_size: size_limit,
                runs: sweep.runs,
                ell_histogram: sweep.ell_histogram,
                passed: sweep.failures.is_empty(),
                counterexamples: sweep.failures,
            }
        }
        BlocktreeCheck::Inject => {
            let mut reports = Vec::new();
            for v in 0..g.n() {
                for ell in 1..=max_ell {
                    reports.push(blocktree::check_injective(g, v, theta, ell, BLOCKTREE_BUDGET)?);
                }
            }
            let counterexamples: Vec<_> = reports.iter().filter(|r| !r.passed()).cloned().collect();
            BlocktreeReport::Inject {
                theta,
                max_ell,
                trees: reports.iter().map(|r| r.trees).sum(),
                passed: counterexamples.is_empty(),
                reports,
                counterexamples,
            }
        }
        BlocktreeCheck::Counts => {
            let d = g.max_degree();
            let mut rows = 0;
            let mut counterexamples = Vec::new();
            for v in 0..g.n() {
                for size in 2..=size_limit.min(g.n()) {
                    let count = blocktree::count_connected_subgraphs(g, v, size, u64::MAX)?;
                    let bound = blocktree::connected_subgraph_bound(d, size);
                    rows += 1;
                    if count as f64 > bound {
                        counterexamples.push(CountRow {
                            vertex: v,
                            size,
                            count,
                            bound,
                        });
                    }
                }
            }
            BlocktreeReport::Counts {
                max_size: size_limit,
                rows,
                passed: counterexamples.is_empty(),
                counterexamples,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, k: usize, d: usize, m: usize, seed: u64, simple: bool) -> GenSpec {
        GenSpec {
            n,
            k,
            max_degree: d,
            edges: m,
            seed,
            simple,
        }
    }

    #[test]
    fn degree_one_forces_disjoint_edges() {
        for seed in 0..20 {
            let h = generate_instance(&spec(9, 3, 1, 3, seed, false)).unwrap();
            assert_eq!(h.num_edges(), 3);
            assert_eq!(h.max_degree(), 1);
            let mut all: Vec<usize> = h.edges().concat();
            all.sort_unstable();
            assert_eq!(all, (0..9).collect::<Vec<_>>());
        }
    }

    #[test]
    fn zero_edges() {
        let h = generate_instance(&spec(5, 3, 2, 0, 1, true)).unwrap();
        assert_eq!(h.num_edges(), 0);
        assert_eq!(h.n(), 5);
    }

    #[test]
    fn generation_is_deterministic_and_honours_constraints() {
        let s = spec(12, 3, 3, 10, 42, true);
        let a = generate_instance(&s).unwrap();
        assert_eq!(a, generate_instance(&s).unwrap());
        assert!(a.is_simple());
        assert!(a.max_degree() <= 3);
        assert_eq!(a.num_edges(), 10);
    }

    #[test]
    fn infeasible_specs() {
        assert!(matches!(
            generate_instance(&spec(4, 3, 1, 2, 0, false)),
            Err(WorkbenchError::Infeasible(_))
        ));
        // only C(4,3) = 4 distinct edges exist, and simplicity allows one
        assert!(matches!(
            generate_instance(&spec(4, 3, 4, 2, 0, true)),
            Err(WorkbenchError::Infeasible(_))
        ));
    }

    fn edge_instance(k: usize, degree: usize) -> Hypergraph {
        // `degree` edges through vertex 0, otherwise disjoint
        let n = 1 + degree * (k - 1);
        let edges = (0..degree).map(|i| {
            let mut e = vec![0];
            e.extend((0..k - 1).map(|j| 1 + i * (k - 1) + j));
            e
        });
        Hypergraph::validate(n, k, edges).unwrap()
    }

    #[test]
    fn regime_boundary_example() {
        let h = edge_instance(40, 2);
        let threshold = 100.0 * 2f64.powf(3.0 / 32.0);
        let pass = regime_check(&h, 107, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(pass.q_condition.verdict, Verdict::Pass);
        assert!((pass.q_condition.rhs.unwrap() - threshold).abs() < 1e-12);
        // 20(1+1)/1 = 40 exactly
        assert_eq!(pass.k_condition.verdict, Verdict::Marginal);
        assert!(pass.in_regime);
        let fail = regime_check(&h, 106, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(fail.q_condition.verdict, Verdict::Fail);
        assert!(!fail.in_regime);
    }

    #[test]
    fn regime_theta_and_k_condition() {
        let h = edge_instance(10, 1);
        let r = regime_check(&h, 1000, 4.0, 1.0, 0.1).unwrap();
        assert_eq!(r.theta, 1);
        let r = regime_check(&h, 1000, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(r.k_condition.verdict, Verdict::Fail);
        assert_eq!(r.theta, 4);
    }

    #[test]
    fn regime_marginal_and_undefined() {
        // k = 40, δ = 1: k-threshold is exactly 40
        let h = edge_instance(40, 1);
        let r = regime_check(&h, 100, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(r.k_condition.verdict, Verdict::Marginal);
        assert!(r.k_condition.holds());
        // k = 4 leaves the auxiliary exponents undefined
        let r = regime_check(&edge_instance(4, 1), 100, 1.0, 1.0, 0.1).unwrap();
        assert_eq!(r.aux_coupling.verdict, Verdict::Fail);
        assert_eq!(r.aux_coupling.rhs, None);
        assert!(regime_check(&h, 100, 0.0, 1.0, 0.1).is_err());
        assert!(regime_check(&h, 100, 1.0, 1.5, 0.1).is_err());
    }

    #[test]
    fn random_graph_is_deterministic() {
        assert_eq!(random_graph(8, 0.4, 3), random_graph(8, 0.4, 3));
        assert_eq!(random_graph(6, 1.0, 0), Graph::complete(6));
    }

    #[test]
    fn blocktree_checks_pass_on_small_graphs() {
        let g = Graph::cycle(6);
        for check in [BlocktreeCheck::Generate, BlocktreeCheck::Inject, BlocktreeCheck::Counts] {
            let rep = blocktree_check(&g, check, 2, 6, 2).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn verify_small_instance() {
        let h = Hypergraph::validate(4, 3, [vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let spec = VerifySpec {
            q: 4,
            epsilon: 0.3,
            overrides: Overrides::guards_disabled(),
            runs: 4000,
            seed: 1,
            radius: None,
            tolerance: 0.05,
        };
        let rep = verify(&h, &spec, Execution::Parallel).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.bad_com_total + rep.bad_rej_total, 0);
    }
}
