mod common;

use hypercolour::coupling::{self, CoupledState, CurveSpec, ScanKernel};
use hypercolour::oracle;
use hypercolour::par::{self, Execution};
use hypercolour::sampler::Sampler;
use hypercolour::stats::chi_square;
use hypercolour::{ProjectedConfig, ProjectionScheme};

/// Each chain of the coupling updates with the exact kernel, whatever the
/// other chain is doing.
#[test]
fn each_chain_follows_its_own_kernel() {
    let h = common::hg(5, 3, &[&[0, 1, 2], &[2, 3, 4]]);
    let scheme = ProjectionScheme::build(4).unwrap();
    let kernel = ScanKernel::new(&h, &scheme).unwrap();
    let x0 = vec![1, 2, 1, 1, 2];
    let y0 = vec![1, 1, 2, 2, 2];
    // the first step updates vertex 1
    let p = kernel.law(1, &x0).unwrap();
    let r = kernel.law(1, &y0).unwrap();
    assert!(oracle::tv_distance(&p, &r) > 0.0);

    let mut rng = par::job_rng(21, 0);
    let (mut ox, mut oy) = (vec![0u64; 2], vec![0u64; 2]);
    let mut disagree = 0;
    let draws = 50_000;
    for _ in 0..draws {
        let mut state = CoupledState::new(x0.clone(), y0.clone());
        assert_eq!(state.step(&kernel, &mut rng).unwrap(), 1);
        ox[(state.x[1] - 1) as usize] += 1;
        oy[(state.y[1] - 1) as usize] += 1;
        disagree += (state.x[1] != state.y[1]) as u64;
    }
    assert!(chi_square(&ox, &p).p_value > 0.001);
    assert!(chi_square(&oy, &r).p_value > 0.001);
    let tv = oracle::tv_distance(&p, &r);
    let sigma = (tv * (1.0 - tv) / draws as f64).sqrt();
    assert!((disagree as f64 / draws as f64 - tv).abs() < 4.0 * sigma);
}

/// The kernel agrees with what the guard-free sampler does for one vertex.
#[test]
fn kernel_matches_sampler_buckets() {
    let h = common::hg(6, 3, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
    let scheme = ProjectionScheme::build(9).unwrap();
    let kernel = ScanKernel::new(&h, &scheme).unwrap();
    let config = vec![1, 2, 1, 1, 3, 3];
    let v = 0;
    let law = kernel.law(v, &config).unwrap();

    let y = ProjectedConfig::full(config).without(v);
    let mut sampler = Sampler::with_limits(&h, &scheme, usize::MAX, u64::MAX);
    let mut rng = par::job_rng(22, 0);
    let mut observed = vec![0u64; 3];
    for _ in 0..30_000 {
        let out = sampler.sample(&[v], &y, &mut rng);
        observed[(scheme.bucket_of(out.colours[0]) - 1) as usize] += 1;
    }
    let chi = chi_square(&observed, &law);
    assert!(chi.p_value > 0.001, "{chi:?} {law:?} {observed:?}");
}

#[test]
fn coalescence_is_absorbing() {
    let h = common::hg(6, 3, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
    let scheme = ProjectionScheme::build(4).unwrap();
    let kernel = ScanKernel::new(&h, &scheme).unwrap();
    for seed in 0..100 {
        let mut rng = par::job_rng(23, seed);
        let trace = coupling::run_coupled_scan(&kernel, vec![1; 6], vec![2; 6], 60, &mut rng).unwrap();
        if let Some(t) = trace.coalescence_time() {
            assert!(trace.discrepancies[t as usize..].iter().all(Vec::is_empty));
        }
        for (t, d) in trace.discrepancies.iter().enumerate().skip(1) {
            // only the updated vertex can change status
            let prev = &trace.discrepancies[t - 1];
            let u = trace.updated[t - 1];
            let strip = |s: &Vec<usize>| s.iter().copied().filter(|&w| w != u).collect::<Vec<_>>();
            assert_eq!(strip(d), strip(prev));
        }
    }
}

#[test]
fn mixing_curve_on_edge_free_instance_drops_to_zero_after_one_sweep() {
    let h = common::hg(4, 3, &[]);
    let scheme = ProjectionScheme::build(4).unwrap();
    let kernel = ScanKernel::new(&h, &scheme).unwrap();
    let curve = coupling::mixing_curve(&kernel, &CurveSpec::new(8, 200, 1), Execution::Parallel).unwrap();
    assert_eq!(curve.checkpoints, vec![0, 4, 8]);
    assert!(curve.at(0).iter().all(|r| r.discrepancy_rate == 1.0));
    assert!(curve.at(4).iter().all(|r| r.discrepancy_rate == 0.0));
    assert_eq!(curve.worst_increase_sigmas(), 0.0);
}
