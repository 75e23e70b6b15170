use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::ProjectedConfig;
use crate::hypergraph::Hypergraph;
use crate::par::{self, Execution};
use crate::projection::ProjectionScheme;

use super::{Exit, Overrides, Sampler, SamplerError, SamplerParams};

/// Outcome of one projected systematic scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    /// RNG stream within `seed` (0 for a standalone run, the job index in a
    /// batch).
    pub stream: u64,
    pub steps: u64,
    /// Final colouring `X ∈ [q]^V`, indexed by vertex.
    pub colouring: Vec<u32>,
    /// Bucket configuration `Y_T` handed to the final call.
    pub final_buckets: Vec<u32>,
    /// Calls (out of `T + 1`) that left through the oversized-component exit.
    pub bad_com_count: u64,
    /// Calls that left through the rejection-budget exit.
    pub bad_rej_count: u64,
    pub final_exit: Exit,
    /// Exit of each scan step, when tracing was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_exits: Option<Vec<Exit>>,
}

/// Runs the scan for `params.steps` steps, then samples the full colouring.
///
/// Step `t` (1-based) updates the vertex labelled `t mod n`: its bucket is
/// removed from `Y`, a colour is drawn from the subroutine with `S = {v}`, and
/// `Y_v` is reset to that colour's bucket.
pub fn run_scan_with<R: Rng + ?Sized>(
    h: &Hypergraph,
    scheme: &ProjectionScheme,
    params: &SamplerParams,
    rng: &mut R,
    trace: bool,
) -> RunReport {
    let n = h.n();
    let s = scheme.s();
    let mut sampler = Sampler::new(h, scheme, params);
    let mut y = ProjectedConfig::full((0..n).map(|_| rng.random_range(1..=s)).collect());

    let mut bad_com = 0u64;
    let mut bad_rej = 0u64;
    let mut step_exits = trace.then(|| Vec::with_capacity(params.steps as usize));
    let mut tally = |exit: Exit| match exit {
        Exit::OversizedComponent => bad_com += 1,
        Exit::RejectionFailed => bad_rej += 1,
        Exit::Exact => {}
    };

    let mut buf = Vec::with_capacity(n);
    for t in 1..=params.steps {
        let v = (t % n as u64) as usize;
        y.set(v, None);
        let exit = sampler.sample_into(&[v], &y, rng, &mut buf);
        y.set(v, Some(scheme.bucket_of(buf[0])));
        tally(exit);
        if let Some(trace) = step_exits.as_mut() {
            trace.push(exit);
        }
    }

    let everyone: Vec<usize> = (0..n).collect();
    let final_exit = sampler.sample_into(&everyone, &y, rng, &mut buf);
    tally(final_exit);
    if final_exit == Exit::Exact {
        debug_assert!(everyone
            .iter()
            .all(|&v| y.get(v) == Some(scheme.bucket_of(buf[v]))));
    }

    RunReport {
        seed: 0,
        stream: 0,
        steps: params.steps,
        colouring: buf,
        final_buckets: everyone.iter().map(|&v| y.get(v).unwrap()).collect(),
        bad_com_count: bad_com,
        bad_rej_count: bad_rej,
        final_exit,
        step_exits,
    }
}

/// A seeded scan on `h` with `q` colours: derives parameters, builds the
/// projection, and runs on RNG stream 0 of `seed`.
pub fn run_scan(
    h: &Hypergraph,
    q: u32,
    epsilon: f64,
    seed: u64,
    overrides: Overrides,
) -> Result<RunReport, SamplerError> {
    let params = SamplerParams::derive(h, q, epsilon, overrides)?;
    let scheme = ProjectionScheme::with_image_size(q, params.image_size)?;
    let mut rng = par::job_rng(seed, 0);
    let mut report = run_scan_with(h, &scheme, &params, &mut rng, false);
    report.seed = seed;
    Ok(report)
}

/// `runs` independent scans; run `i` uses stream `i` of `seed`.
pub fn run_batch(
    h: &Hypergraph,
    scheme: &ProjectionScheme,
    params: &SamplerParams,
    seed: u64,
    runs: usize,
    exec: Execution,
) -> Vec<RunReport> {
    par::map_indexed(runs, exec, |i| {
        let mut rng = par::job_rng(seed, i as u64);
        let mut report = run_scan_with(h, scheme, params, &mut rng, false);
        report.seed = seed;
        report.stream = i as u64;
        report
    })
}
