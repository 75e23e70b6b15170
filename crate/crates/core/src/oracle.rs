//! Brute-force ground truth for small instances.
//!
//! Everything here enumerates list colourings exhaustively (backtracking in
//! lexicographic, vertex-major order, checking each edge once its largest
//! vertex is assigned) and keeps exact integer counts. Nothing in this module
//! calls into the sampler.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ProjectedConfig;
use crate::hypergraph::Hypergraph;
use crate::par::{self, Execution};
use crate::projection::ProjectionScheme;
use crate::stats::Histogram;

/// Default cap on the number of raw list assignments `∏|Q_v|`.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{assignments} list assignments exceed the enumeration budget {budget}")]
    BudgetExceeded { assignments: u128, budget: u128 },
    #[error("no proper colouring is consistent with the conditioning")]
    EmptySupport,
    #[error("local uniformity precondition fails: q0^k = {lhs} < e*q1*r*Delta = {rhs}")]
    PreconditionUnmet { lhs: f64, rhs: f64 },
    #[error("local uniformity needs r >= k >= 2 (r = {r}, k = {k})")]
    InvalidRadius { r: f64, k: usize },
    #[error("expected {expected} colour lists, got {got}")]
    ListCount { expected: usize, got: usize },
}

/// An exact distribution held as integer counts over a common denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactDistribution<K> {
    support: Vec<K>,
    counts: Vec<u64>,
    total: u64,
}

impl<K: Ord + Clone> ExactDistribution<K> {
    pub fn from_counts(counts: BTreeMap<K, u64>) -> Self {
        let counts: Vec<(K, u64)> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let total = counts.iter().map(|(_, c)| c).sum();
        let (support, counts) = counts.into_iter().unzip();
        Self {
            support,
            counts,
            total,
        }
    }

    /// Uniform over `support` (duplicates collapse).
    pub fn uniform(support: impl IntoIterator<Item = K>) -> Self {
        Self::from_counts(support.into_iter().map(|k| (k, 1)).collect())
    }

    /// Outcomes with positive probability, ascending.
    pub fn support(&self) -> &[K] {
        &self.support
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// The common denominator.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn count(&self, outcome: &K) -> u64 {
        self.support
            .binary_search(outcome)
            .map(|i| self.counts[i])
            .unwrap_or(0)
    }

    pub fn probability(&self, outcome: &K) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(outcome) as f64 / self.total as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        let total = self.total as f64;
        self.support
            .iter()
            .zip(&self.counts)
            .map(move |(k, &c)| (k, c as f64 / total))
    }

    /// Distribution of `f(X)`.
    pub fn map<J: Ord + Clone>(&self, f: impl Fn(&K) -> J) -> ExactDistribution<J> {
        let mut counts = BTreeMap::new();
        for (k, &c) in self.support.iter().zip(&self.counts) {
            *counts.entry(f(k)).or_insert(0) += c;
        }
        ExactDistribution::from_counts(counts)
    }

    /// Exact equality of the two distributions as rationals.
    pub fn same_law(&self, other: &Self) -> bool {
        self.support == other.support
            && self
                .counts
                .iter()
                .zip(&other.counts)
                .all(|(&a, &b)| a as u128 * other.total as u128 == b as u128 * self.total as u128)
    }

    pub fn tv(&self, other: &Self) -> f64 {
        let mut keys: Vec<&K> = self.support.iter().chain(&other.support).collect();
        keys.sort();
        keys.dedup();
        0.5 * keys
            .into_iter()
            .map(|k| (self.probability(k) - other.probability(k)).abs())
            .sum::<f64>()
    }

    /// Total variation distance to the empirical law of `hist`.
    pub fn tv_to_histogram(&self, hist: &Histogram<K>) -> f64 {
        let mut sum = 0.0;
        for (k, p) in self.iter() {
            sum += (p - hist.frequency(k)).abs();
        }
        for (k, _) in hist.iter() {
            if self.count(k) == 0 {
                sum += hist.frequency(k);
            }
        }
        0.5 * sum
    }
}

/// `½ Σ |p_i - r_i|` over a common indexed support.
pub fn tv_distance(p: &[f64], r: &[f64]) -> f64 {
    assert_eq!(p.len(), r.len(), "distributions on different supports");
    0.5 * p.iter().zip(r).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Colour lists `Q_v` for every vertex, each ascending.
pub type Lists = Vec<Vec<u32>>;

/// `[q]` for every vertex.
pub fn full_lists(n: usize, q: u32) -> Lists {
    vec![(1..=q).collect(); n]
}

/// `Q_v = h^{-1}(Y_v)` on the domain of `y`, `[q]` elsewhere.
pub fn conditional_lists(scheme: &ProjectionScheme, y: &ProjectedConfig) -> Lists {
    (0..y.len())
        .map(|v| match y.get(v) {
            Some(b) => scheme.interval(b).expect("bucket within scheme").collect(),
            None => (1..=scheme.q()).collect(),
        })
        .collect()
}

fn assignment_count(lists: &Lists) -> u128 {
    lists
        .iter()
        .fold(1u128, |acc, l| acc.saturating_mul(l.len() as u128))
}

struct Enumerator<'a> {
    h: &'a Hypergraph,
    lists: &'a Lists,
    /// Edges whose largest vertex is `v`, checked right after `v` is set.
    closing: Vec<Vec<usize>>,
}

impl<'a> Enumerator<'a> {
    fn new(h: &'a Hypergraph, lists: &'a Lists, budget: u128) -> Result<Self, OracleError> {
        if lists.len() != h.n() {
            return Err(OracleError::ListCount {
                expected: h.n(),
                got: lists.len(),
            });
        }
        let assignments = assignment_count(lists);
        if assignments > budget {
            return Err(OracleError::BudgetExceeded {
                assignments,
                budget,
            });
        }
        let mut closing = vec![Vec::new(); h.n()];
        for (e, edge) in h.edges().iter().enumerate() {
            closing[*edge.last().expect("k >= 1")].push(e);
        }
        Ok(Self { h, lists, closing })
    }

    fn descend<A>(&self, v: usize, x: &mut [u32], acc: &mut A, visit: &impl Fn(&mut A, &[u32])) {
        if v == x.len() {
            visit(acc, x);
            return;
        }
        for &c in &self.lists[v] {
            x[v] = c;
            if self.closing[v].iter().all(|&e| self.h.edge_proper(e, x)) {
                self.descend(v + 1, x, acc, visit);
            }
        }
    }

    /// Folds `visit` over all proper list colourings in lexicographic order,
    /// sharding on the colour of vertex 0.
    fn fold<A, I, V, M>(&self, exec: Execution, init: I, visit: V, merge: M) -> A
    where
        A: Send,
        I: Fn() -> A + Sync + Send,
        V: Fn(&mut A, &[u32]) + Sync + Send,
        M: Fn(A, A) -> A,
    {
        let n = self.h.n();
        if n == 0 {
            let mut acc = init();
            visit(&mut acc, &[]);
            return acc;
        }
        let shards = par::map_slice(&self.lists[0], exec, |&c| {
            let mut acc = init();
            let mut x = vec![0u32; n];
            x[0] = c;
            if self.closing[0].iter().all(|&e| self.h.edge_proper(e, &x)) {
                self.descend(1, &mut x, &mut acc, &visit);
            }
            acc
        });
        shards.into_iter().fold(init(), merge)
    }
}

/// Folds over every proper list colouring; the building block for the
/// functions below.
pub fn fold_proper<A, I, V, M>(
    h: &Hypergraph,
    lists: &Lists,
    budget: u128,
    exec: Execution,
    init: I,
    visit: V,
    merge: M,
) -> Result<A, OracleError>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &[u32]) + Sync + Send,
    M: Fn(A, A) -> A,
{
    Ok(Enumerator::new(h, lists, budget)?.fold(exec, init, visit, merge))
}

/// All proper list colourings, lexicographic.
pub fn enumerate_proper(h: &Hypergraph, lists: &Lists) -> Result<Vec<Vec<u32>>, OracleError> {
    fold_proper(
        h,
        lists,
        DEFAULT_BUDGET,
        Execution::Parallel,
        Vec::new,
        |acc: &mut Vec<Vec<u32>>, x| acc.push(x.to_vec()),
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )
}

/// Number of proper list colourings.
pub fn count_proper(h: &Hypergraph, lists: &Lists) -> Result<u64, OracleError> {
    fold_proper(
        h,
        lists,
        DEFAULT_BUDGET,
        Execution::Parallel,
        || 0u64,
        |acc, _| *acc += 1,
        |a, b| a + b,
    )
}

/// Law of `key(X)` for `X` uniform over proper list colourings.
pub fn law_of<K, F>(h: &Hypergraph, lists: &Lists, key: F) -> Result<ExactDistribution<K>, OracleError>
where
    K: Ord + Clone + Send,
    F: Fn(&[u32]) -> K + Sync + Send,
{
    let counts = fold_proper(
        h,
        lists,
        DEFAULT_BUDGET,
        Execution::Parallel,
        BTreeMap::new,
        |acc: &mut BTreeMap<K, u64>, x| *acc.entry(key(x)).or_insert(0) += 1,
        |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        },
    )?;
    Ok(ExactDistribution::from_counts(counts))
}

/// Per-vertex colour counts and the total number of proper list colourings.
pub fn marginal_counts(h: &Hypergraph, lists: &Lists) -> Result<(u64, Vec<Vec<u64>>), OracleError> {
    let width = lists.iter().flatten().copied().max().unwrap_or(0) as usize + 1;
    let n = h.n();
    fold_proper(
        h,
        lists,
        DEFAULT_BUDGET,
        Execution::Parallel,
        || (0u64, vec![vec![0u64; width]; n]),
        |(total, counts), x| {
            *total += 1;
            for (v, &c) in x.iter().enumerate() {
                counts[v][c as usize] += 1;
            }
        },
        |(ta, mut ca), (tb, cb)| {
            for (row_a, row_b) in ca.iter_mut().zip(cb) {
                for (a, b) in row_a.iter_mut().zip(row_b) {
                    *a += b;
                }
            }
            (ta + tb, ca)
        },
    )
}

/// Exact marginals `μ_v` over each vertex's list.
pub fn marginals(h: &Hypergraph, lists: &Lists) -> Result<Vec<ExactDistribution<u32>>, OracleError> {
    let (total, counts) = marginal_counts(h, lists)?;
    if total == 0 {
        return Err(OracleError::EmptySupport);
    }
    Ok(counts
        .into_iter()
        .map(|row| {
            ExactDistribution::from_counts(
                row.into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c > 0)
                    .map(|(c, n)| (c as u32, n))
                    .collect(),
            )
        })
        .collect())
}

/// `μ^{Y_Λ}_S`: the joint law of `X_S` for `X` uniform over proper
/// colourings with `h(X_Λ) = Y_Λ`, `Λ` being the domain of `y`.
pub fn conditional_distribution(
    h: &Hypergraph,
    scheme: &ProjectionScheme,
    y: &ProjectedConfig,
    s: &[usize],
) -> Result<ExactDistribution<Vec<u32>>, OracleError> {
    let lists = conditional_lists(scheme, y);
    let dist = law_of(h, &lists, |x| s.iter().map(|&v| x[v]).collect::<Vec<_>>())?;
    if dist.is_empty() {
        return Err(OracleError::EmptySupport);
    }
    Ok(dist)
}

/// `μ^{Y_{V∖v}}_v` by enumerating the whole instance. Any bucket `y` holds
/// for `v` itself is ignored.
pub fn conditional_marginal(
    h: &Hypergraph,
    scheme: &ProjectionScheme,
    v: usize,
    y: &ProjectedConfig,
) -> Result<ExactDistribution<u32>, OracleError> {
    let y = y.without(v);
    let joint = conditional_distribution(h, scheme, &y, &[v])?;
    Ok(joint.map(|x| x[0]))
}

/// `μ^{Y_{V∖v}}_v` by enumerating only the pruned component of `v`.
///
/// Agrees with [`conditional_marginal`] because the conditional law factorises
/// over pruned components; this route is what makes per-step kernels
/// affordable.
pub fn conditional_marginal_local(
    h: &Hypergraph,
    scheme: &ProjectionScheme,
    v: usize,
    y: &ProjectedConfig,
) -> Result<ExactDistribution<u32>, OracleError> {
    let y = y.without(v);
    let comp = h.pruned_component(&y, v, usize::MAX);
    let index: BTreeMap<usize, usize> = comp
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &u)| (u, i))
        .collect();
    let edges = comp
        .edges
        .iter()
        .map(|&e| h.edge(e).iter().map(|u| index[u]).collect::<Vec<_>>());
    let sub = Hypergraph::validate(comp.vertices.len(), h.k(), edges)
        .expect("relabelled component is a valid hypergraph");
    let sub_y = ProjectedConfig::from_options(comp.vertices.iter().map(|&u| y.get(u)).collect());
    let lists = conditional_lists(scheme, &sub_y);
    let pos = index[&v];
    let dist = law_of(&sub, &lists, |x| x[pos])?;
    if dist.is_empty() {
        return Err(OracleError::EmptySupport);
    }
    Ok(dist)
}

/// The projected distribution `ν` computed directly: for each bucket
/// configuration `τ`, the number of proper colourings with `h(X) = τ`.
pub fn projected_distribution(
    h: &Hypergraph,
    scheme: &ProjectionScheme,
) -> Result<ExactDistribution<Vec<u32>>, OracleError> {
    let n = h.n();
    let s = scheme.s();
    let configs = (s as u128).saturating_pow(n as u32);
    if configs > DEFAULT_BUDGET {
        return Err(OracleError::BudgetExceeded {
            assignments: configs,
            budget: DEFAULT_BUDGET,
        });
    }
    let mut counts = BTreeMap::new();
    let mut tau = vec![1u32; n];
    loop {
        let lists = conditional_lists(scheme, &ProjectedConfig::full(tau.clone()));
        let c = count_proper(h, &lists)?;
        if c > 0 {
            counts.insert(tau.clone(), c);
        }
        // odometer, last vertex fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(ExactDistribution::from_counts(counts));
            }
            i -= 1;
            if tau[i] < s {
                tau[i] += 1;
                break;
            }
            tau[i] = 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformityViolation {
    pub vertex: usize,
    pub colour: u32,
    pub probability: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalUniformityReport {
    pub q0: usize,
    pub q1: usize,
    pub r: f64,
    pub k: usize,
    pub max_degree: usize,
    /// Number of `(v, c)` pairs checked.
    pub checked: usize,
    /// Smallest and largest `|Q_v| μ_v(c)` seen.
    pub min_scaled: f64,
    pub max_scaled: f64,
    pub violations: Vec<UniformityViolation>,
}

impl LocalUniformityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `e^{-2/r}/|Q_v| ≤ μ_v(c) ≤ e^{2/r}/|Q_v|` for every vertex and
/// colour in its list, by exact enumeration.
///
/// Only meaningful when `r ≥ k ≥ 2` and `q0^k ≥ e·q1·r·Δ`; otherwise the
/// check is skipped with an error.
pub fn local_uniformity_check(
    h: &Hypergraph,
    lists: &Lists,
    r: f64,
) -> Result<LocalUniformityReport, OracleError> {
    let k = h.k();
    if !(k >= 2 && r >= k as f64) {
        return Err(OracleError::InvalidRadius { r, k });
    }
    let q0 = lists.iter().map(Vec::len).min().unwrap_or(0);
    let q1 = lists.iter().map(Vec::len).max().unwrap_or(0);
    let lhs = (q0 as f64).powi(k as i32);
    let rhs = std::f64::consts::E * q1 as f64 * r * h.max_degree() as f64;
    if lhs < rhs {
        return Err(OracleError::PreconditionUnmet { lhs, rhs });
    }
    let (total, counts) = marginal_counts(h, lists)?;
    if total == 0 {
        return Err(OracleError::EmptySupport);
    }
    let mut report = LocalUniformityReport {
        q0,
        q1,
        r,
        k,
        max_degree: h.max_degree(),
        checked: 0,
        min_scaled: f64::INFINITY,
        max_scaled: 0.0,
        violations: Vec::new(),
    };
    for (v, list) in lists.iter().enumerate() {
        let size = list.len() as f64;
        let lower = (-2.0 / r).exp() / size;
        let upper = (2.0 / r).exp() / size;
        for &c in list {
            let p = counts[v][c as usize] as f64 / total as f64;
            report.checked += 1;
            report.min_scaled = report.min_scaled.min(p * size);
            report.max_scaled = report.max_scaled.max(p * size);
            if p < lower || p > upper {
                report.violations.push(UniformityViolation {
                    vertex: v,
                    colour: c,
                    probability: p,
                    lower,
                    upper,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(n: usize, k: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::validate(n, k, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn enumerate_single_edge_two_colours() {
        let h = hg(3, 3, &[&[0, 1, 2]]);
        let all = enumerate_proper(&h, &full_lists(3, 2)).unwrap();
        assert_eq!(all.len(), 6);
        assert!(!all.contains(&vec![1, 1, 1]));
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted, "lexicographic order");
    }

    #[test]
    fn enumerate_edge_free() {
        let h = hg(2, 3, &[]);
        assert_eq!(enumerate_proper(&h, &full_lists(2, 3)).unwrap().len(), 9);
    }

    #[test]
    fn enumerate_forced_monochromatic() {
        let h = hg(3, 3, &[&[0, 1, 2]]);
        let lists = vec![vec![2], vec![2], vec![2]];
        assert!(enumerate_proper(&h, &lists).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let h = hg(10, 3, &[]);
        let err = fold_proper(
            &h,
            &full_lists(10, 10),
            1000,
            Execution::Sequential,
            || (),
            |_, _| {},
            |_, _| {},
        )
        .unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { .. }));
    }

    #[test]
    fn conditional_marginal_all_satisfied_is_uniform() {
        let h = hg(5, 3, &[&[0, 1, 2], &[2, 3, 4]]);
        let scheme = ProjectionScheme::build(4).unwrap();
        let y = ProjectedConfig::full(vec![1, 2, 1, 1, 2]);
        let m = conditional_marginal(&h, &scheme, 2, &y).unwrap();
        assert!(m.same_law(&ExactDistribution::uniform(1..=4)));
    }

    #[test]
    fn conditional_marginal_single_edge_q4() {
        // q = 4, s = 2: buckets {1,2}, {3,4}. Neighbours both in bucket 1.
        // Colourings (x0, x1, x2) with x1, x2 ∈ {1,2}: x0 ∈ {3,4} leaves all 4
        // neighbour pairs; x0 = c ∈ {1,2} forbids only (c, c): 3 each.
        // Counts 3, 3, 4, 4 over 14.
        let h = hg(3, 3, &[&[0, 1, 2]]);
        let scheme = ProjectionScheme::build(4).unwrap();
        let y = ProjectedConfig::from_pairs(3, &[(1, 1), (2, 1)]);
        let m = conditional_marginal(&h, &scheme, 0, &y).unwrap();
        assert_eq!(m.total(), 14);
        assert_eq!(m.counts(), &[3, 3, 4, 4]);
        let sum: f64 = m.iter().map(|(_, p)| p).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_marginal_empty_support() {
        // q = 3, s = 2: bucket 2 = {3}. Edge {2,3,4} is forced monochromatic.
        let h = hg(5, 3, &[&[0, 1, 2], &[2, 3, 4]]);
        let scheme = ProjectionScheme::build(3).unwrap();
        let y = ProjectedConfig::full(vec![1, 1, 2, 2, 2]);
        assert_eq!(
            conditional_marginal(&h, &scheme, 0, &y),
            Err(OracleError::EmptySupport)
        );
    }

    #[test]
    fn local_route_matches_global_route() {
        let h = hg(7, 3, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6], &[0, 3, 6]]);
        let scheme = ProjectionScheme::build(4).unwrap();
        for code in 0..(1u32 << 7) {
            let y = ProjectedConfig::full((0..7).map(|i| (code >> i & 1) + 1).collect());
            for v in 0..7 {
                let a = conditional_marginal(&h, &scheme, v, &y).unwrap();
                let b = conditional_marginal_local(&h, &scheme, v, &y).unwrap();
                assert!(a.same_law(&b), "code {code} v {v}");
            }
        }
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&[0.3, 0.7], &[0.3, 0.7]), 0.0);
        assert_eq!(tv_distance(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert_eq!(tv_distance(&[0.5, 0.5], &[1.0, 0.0]), 0.5);
        let p = ExactDistribution::uniform([1u32, 2]);
        let r = ExactDistribution::uniform([1u32]);
        assert_eq!(p.tv(&r), 0.5);
        let hist: Histogram<u32> = [1, 1, 3, 3].into_iter().collect();
        assert!((p.tv_to_histogram(&hist) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn local_uniformity_single_edge() {
        let h = hg(3, 3, &[&[0, 1, 2]]);
        let rep = local_uniformity_check(&h, &full_lists(3, 3), 3.0).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.checked, 9);
        assert!((rep.min_scaled - 1.0).abs() < 1e-12 && (rep.max_scaled - 1.0).abs() < 1e-12);
        assert_eq!(count_proper(&h, &full_lists(3, 3)).unwrap(), 24);
    }

    #[test]
    fn local_uniformity_edge_free() {
        let h = hg(3, 3, &[]);
        let lists = vec![vec![1, 2], vec![1, 2, 3], vec![4]];
        let rep = local_uniformity_check(&h, &lists, 3.0).unwrap();
        assert!(rep.passed());
        assert!((rep.min_scaled - 1.0).abs() < 1e-12);
    }

    #[test]
    fn local_uniformity_precondition() {
        let h = hg(3, 3, &[&[0, 1, 2]]);
        assert!(matches!(
            local_uniformity_check(&h, &full_lists(3, 2), 3.0),
            Err(OracleError::PreconditionUnmet { .. })
        ));
        assert!(matches!(
            local_uniformity_check(&h, &full_lists(3, 3), 2.0),
            Err(OracleError::InvalidRadius { .. })
        ));
    }

    #[test]
    fn sequential_and_parallel_folds_agree() {
        let h = hg(6, 3, &[&[0, 1, 2], &[2, 3, 4], &[1, 4, 5]]);
        let lists = full_lists(6, 3);
        let run = |exec| {
            fold_proper(
                &h,
                &lists,
                DEFAULT_BUDGET,
                exec,
                Vec::new,
                |a: &mut Vec<Vec<u32>>, x| a.push(x.to_vec()),
                |mut a, mut b| {
                    a.append(&mut b);
                    a
                },
            )
            .unwrap()
        };
        assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
    }
}
