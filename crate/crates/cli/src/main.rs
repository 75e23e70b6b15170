//! Command-line front end for the hypergraph colouring sampler and its
//! checkers.
//!
//! Exit status: 0 when the command (or its check) passes, 2 when a check
//! fails, 1 on any error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypercolour::blocktree::Graph;
use hypercolour::coupling::{self, CurveSpec, ScanKernel};
use hypercolour::hypergraph::text;
use hypercolour::par::Execution;
use hypercolour::sampler::{self, RunReport};
use hypercolour::workbench::{self, BlocktreeCheck, BlocktreeReport, GenSpec, UniformityStatus, VerifySpec};
use hypercolour::{Hypergraph, Overrides, ProjectionScheme, SamplerParams};

#[derive(Parser, Debug)]
#[command(name = "hypercolour", version, about = "Sample and check proper colourings of uniform hypergraphs")]
struct Cli {
    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of the human-readable form.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random k-uniform instance.
    Gen(GenArgs),
    /// Run one projected scan and print the colouring and its report.
    Sample(SampleArgs),
    /// Compare sampler marginals with exact ones on a small instance.
    Verify(VerifyArgs),
    /// Exhaustive 2-block-tree checks on a graph.
    Blocktree(BlocktreeArgs),
    /// Discrepancy curves of coupled scans, as CSV.
    Coupling(CouplingArgs),
    /// Evaluate the sufficient conditions for the fast-sampling regime.
    Regime(RegimeArgs),
    /// Time a batch of scans sequentially and in parallel.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Degree ceiling.
    #[arg(long = "max-degree")]
    max_degree: usize,
    /// Number of edges.
    #[arg(long)]
    edges: usize,
    /// Reject edge pairs sharing two or more vertices.
    #[arg(long)]
    simple: bool,
}

#[derive(Args, Debug, Clone, Copy)]
struct OverrideArgs {
    /// Number of scan steps.
    #[arg(long = "override-T", value_name = "T")]
    steps: Option<u64>,
    /// Rejection trials per component.
    #[arg(long = "override-R", value_name = "R")]
    budget: Option<u64>,
    /// Component edge cap.
    #[arg(long = "override-cap", value_name = "CAP")]
    cap: Option<usize>,
    /// Projection image size.
    #[arg(long = "override-s", value_name = "S")]
    image: Option<u32>,
    /// Uncapped components and unbounded rejection.
    #[arg(long = "disable-guards")]
    disable_guards: bool,
}

impl OverrideArgs {
    fn overrides(self) -> Overrides {
        let mut o = if self.disable_guards {
            Overrides::guards_disabled()
        } else {
            Overrides::default()
        };
        o.steps = self.steps.or(o.steps);
        o.rejection_budget = self.budget.or(o.rejection_budget);
        o.component_cap = self.cap.or(o.component_cap);
        o.image_size = self.image.or(o.image_size);
        o
    }
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[command(flatten)]
    overrides: OverrideArgs,
    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    runs: usize,
    /// Largest per-vertex TV distance that still passes.
    #[arg(long, default_value_t = 0.015)]
    tolerance: f64,
    /// Radius for the local-uniformity check; defaults to k.
    #[arg(long)]
    radius: Option<f64>,
    #[command(flatten)]
    overrides: OverrideArgs,
}

#[derive(Args, Debug)]
struct BlocktreeArgs {
    /// Graph in `n m` / `u v` edge-list format.
    #[arg(long, required_unless_present = "instance", conflicts_with = "instance")]
    graph: Option<PathBuf>,
    /// Hypergraph instance; its line graph is checked.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    theta: usize,
    #[arg(long, value_enum)]
    check: CheckArg,
    /// Largest connected set (generate) or subgraph size (counts).
    #[arg(long = "max-size", default_value_t = 9)]
    max_size: usize,
    /// Largest number of blocks enumerated (inject).
    #[arg(long = "max-ell", default_value_t = 4)]
    max_ell: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckArg {
    Generate,
    Inject,
    Counts,
}

impl From<CheckArg> for BlocktreeCheck {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Generate => Self::Generate,
            CheckArg::Inject => Self::Inject,
            CheckArg::Counts => Self::Counts,
        }
    }
}

#[derive(Args, Debug)]
struct CouplingArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    q: u32,
    /// Last scan step recorded.
    #[arg(long = "T-max")]
    t_max: u64,
    /// Coupled runs per initial pair.
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    /// Checkpoint spacing; defaults to n.
    #[arg(long)]
    every: Option<u64>,
    /// Random initial pairs on top of the two constant configurations.
    #[arg(long = "random-pairs", default_value_t = 10)]
    random_pairs: usize,
    #[command(flatten)]
    overrides: ImageArg,
}

#[derive(Args, Debug, Clone, Copy)]
struct ImageArg {
    /// Projection image size.
    #[arg(long = "override-s", value_name = "S")]
    image: Option<u32>,
}

#[derive(Args, Debug)]
struct RegimeArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[command(flatten)]
    overrides: OverrideArgs,
}

enum Outcome {
    Pass,
    CheckFailed,
}

struct Output {
    body: String,
    outcome: Outcome,
}

impl Output {
    fn pass(body: String) -> Self {
        Self {
            body,
            outcome: Outcome::Pass,
        }
    }

    fn check(body: String, passed: bool) -> Self {
        Self {
            body,
            outcome: if passed { Outcome::Pass } else { Outcome::CheckFailed },
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli).and_then(|out| emit(cli.out.as_deref(), &out.body).map(|()| out.outcome)) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn load(path: &Path) -> Result<Hypergraph> {
    Ok(workbench::read_instance(path)?)
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::Sample(a) => sample(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Blocktree(a) => blocktree(cli, a),
        Command::Coupling(a) => coupling(cli, a),
        Command::Regime(a) => regime(cli, a),
        Command::Bench(a) => bench(cli, a),
    }
}

#[derive(Serialize)]
struct InstanceJson<'a> {
    n: usize,
    k: usize,
    max_degree: usize,
    simple: bool,
    edges: &'a [Vec<usize>],
}

fn gen(cli: &Cli, a: &GenArgs) -> Result<Output> {
    let h = workbench::generate_instance(&GenSpec {
        n: a.n,
        k: a.k,
        max_degree: a.max_degree,
        edges: a.edges,
        seed: cli.seed,
        simple: a.simple,
    })?;
    let body = if cli.json {
        to_json(&InstanceJson {
            n: h.n(),
            k: h.k(),
            max_degree: h.max_degree(),
            simple: h.is_simple(),
            edges: h.edges(),
        })?
    } else {
        text::write(&h)
    };
    Ok(Output::pass(body))
}

#[derive(Serialize)]
struct SampleJson<'a> {
    params: &'a SamplerParams,
    report: &'a RunReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_secs: Option<f64>,
}

fn colouring_line(colours: &[u32]) -> String {
    let mut s = String::new();
    for (i, c) in colours.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{c}");
    }
    s.push('\n');
    s
}

fn sample(cli: &Cli, a: &SampleArgs) -> Result<Output> {
    let h = load(&a.instance)?;
    let overrides = a.overrides.overrides();
    let params = SamplerParams::derive(&h, a.q, a.epsilon, overrides)?;
    let start = Instant::now();
    let report = sampler::run_scan(&h, a.q, a.epsilon, cli.seed, overrides)?;
    let wall_time_secs = a.timing.then(|| start.elapsed().as_secs_f64());
    let json = to_json(&SampleJson {
        params: &params,
        report: &report,
        wall_time_secs,
    })?;
    let body = if cli.json {
        json
    } else {
        colouring_line(&report.colouring) + &json
    };
    Ok(Output::pass(body))
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<Output> {
    let h = load(&a.instance)?;
    let spec = VerifySpec {
        q: a.q,
        epsilon: a.epsilon,
        overrides: a.overrides.overrides(),
        runs: a.runs,
        seed: cli.seed,
        radius: a.radius,
        tolerance: a.tolerance,
    };
    let rep = workbench::verify(&h, &spec, Execution::Parallel)?;
    let body = if cli.json {
        to_json(&rep)?
    } else {
        let lu = match &rep.local_uniformity {
            UniformityStatus::Pass(_) => "pass".to_string(),
            UniformityStatus::Fail(r) => format!("FAIL ({} violations)", r.violations.len()),
            UniformityStatus::Skipped { reason } => format!("skipped: {reason}"),
        };
        let mut s = String::new();
        writeln!(s, "verify: {}", if rep.passed { "PASS" } else { "FAIL" })?;
        writeln!(s, "proper colourings: {}", rep.proper_colourings)?;
        writeln!(s, "runs: {}", rep.runs)?;
        writeln!(s, "max marginal TV: {:.6} (tolerance {})", rep.max_tv, rep.tolerance)?;
        writeln!(s, "guard exits: com {} rej {}", rep.bad_com_total, rep.bad_rej_total)?;
        writeln!(s, "local uniformity: {lu}")?;
        s
    };
    Ok(Output::check(body, rep.passed))
}

fn blocktree(cli: &Cli, a: &BlocktreeArgs) -> Result<Output> {
    let g = match (&a.graph, &a.instance) {
        (Some(p), _) => workbench::read_graph(p)?,
        (None, Some(p)) => Graph::from_line_graph(&load(p)?.line_graph()),
        (None, None) => unreachable!("clap enforces one source"),
    };
    let rep = workbench::blocktree_check(&g, a.check.into(), a.theta, a.max_size, a.max_ell)?;
    let body = if cli.json {
        to_json(&rep)?
    } else {
        let verdict = if rep.passed() { "PASS" } else { "FAIL" };
        match &rep {
            BlocktreeReport::Generate {
                runs, counterexamples, ..
            } => format!(
                "generate: {verdict} ({runs} runs, {} counterexamples)\n",
                counterexamples.len()
            ),
            BlocktreeReport::Inject {
                trees, counterexamples, ..
            } => format!(
                "inject: {verdict} ({trees} trees, {} counterexamples)\n",
                counterexamples.len()
            ),
            BlocktreeReport::Counts {
                rows, counterexamples, ..
            } => format!(
                "counts: {verdict} ({rows} rows, {} counterexamples)\n",
                counterexamples.len()
            ),
        }
    };
    Ok(Output::check(body, rep.passed()))
}

fn coupling(cli: &Cli, a: &CouplingArgs) -> Result<Output> {
    let h = load(&a.instance)?;
    let scheme = match a.overrides.image {
        Some(s) => ProjectionScheme::with_image_size(a.q, s)?,
        None => ProjectionScheme::build(a.q)?,
    };
    let kernel = ScanKernel::new(&h, &scheme)?;
    let mut spec = CurveSpec::new(a.t_max, a.runs, cli.seed);
    spec.every = a.every.unwrap_or(0);
    spec.random_pairs = a.random_pairs;
    let curve = coupling::mixing_curve(&kernel, &spec, Execution::Parallel)?;
    let body = if cli.json { to_json(&curve)? } else { curve.to_csv() };
    Ok(Output::pass(body))
}

fn regime(cli: &Cli, a: &RegimeArgs) -> Result<Output> {
    let h = load(&a.instance)?;
    let rep = workbench::regime_check(&h, a.q, a.delta, a.alpha, a.epsilon)?;
    let body = if cli.json {
        to_json(&rep)?
    } else {
        let show = |c: &workbench::Condition| match c.rhs {
            Some(r) => format!("{:?}: {} >= {r:.6}", c.verdict, c.lhs),
            None => format!("{:?}: threshold undefined", c.verdict),
        };
        let mut s = String::new();
        writeln!(s, "in regime: {}", rep.in_regime)?;
        writeln!(s, "theta: {}", rep.theta)?;
        writeln!(s, "simple: {}", rep.simple)?;
        writeln!(s, "k condition: {}", show(&rep.k_condition))?;
        writeln!(s, "q condition: {}", show(&rep.q_condition))?;
        writeln!(s, "coupling condition: {}", show(&rep.aux_coupling))?;
        writeln!(s, "uniformity condition: {}", show(&rep.aux_uniformity))?;
        s
    };
    Ok(Output::check(body, rep.in_regime))
}

#[derive(Serialize)]
struct BenchJson {
    runs: usize,
    steps: u64,
    parallel_available: bool,
    sequential_secs: f64,
    parallel_secs: f64,
    speedup: f64,
    identical: bool,
}

fn bench(cli: &Cli, a: &BenchArgs) -> Result<Output> {
    let h = load(&a.instance)?;
    let params = SamplerParams::derive(&h, a.q, a.epsilon, a.overrides.overrides())?;
    let scheme = ProjectionScheme::with_image_size(a.q, params.image_size)?;
    let time = |exec| {
        let start = Instant::now();
        let reports = sampler::run_batch(&h, &scheme, &params, cli.seed, a.runs, exec);
        (start.elapsed().as_secs_f64(), reports)
    };
    let (sequential_secs, seq) = time(Execution::Sequential);
    let (parallel_secs, par) = time(Execution::Parallel);
    let rep = BenchJson {
        runs: a.runs,
        steps: params.steps,
        parallel_available: Execution::parallel_available(),
        sequential_secs,
        parallel_secs,
        speedup: sequential_secs / parallel_secs.max(f64::MIN_POSITIVE),
        identical: seq == par,
    };
    let body = if cli.json {
        to_json(&rep)?
    } else {
        format!(
            "{} runs of {} steps: sequential {:.3}s, parallel {:.3}s, speedup {:.2}x, outputs {}\n",
            rep.runs,
            rep.steps,
            rep.sequential_secs,
            rep.parallel_secs,
            rep.speedup,
            if rep.identical { "identical" } else { "DIFFER" }
        )
    };
    Ok(Output::check(body, rep.identical))
}
