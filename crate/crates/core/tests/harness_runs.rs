use netepi::graphs::SparseGraph;
use netepi::harness::{
    mean_ci, run_experiment, run_outbreak_vs_kappa, run_periodic_sweep, run_ratio_scenarios,
    ExperimentConfig, ExperimentKind, GraphSpec,
};
use netepi::rates::RateFunction;
use netepi::sim::{simulate_from_states, EpidemicParams, State};
use netepi::harness::trial_rng;

fn read_dir_sorted(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn sim_vs_ode_is_byte_reproducible() {
    let mut cfg = ExperimentConfig::preset(ExperimentKind::SimVsOde);
    cfg.graph = Some(GraphSpec::Er { n: 100, mean: 2.0 });
    cfg.trials = 30;
    cfg.seed = 99;
    let base = std::env::temp_dir().join(format!("netepi-repro-{}", std::process::id()));
    let (a, b) = (base.join("a"), base.join("b"));
    run_experiment(&cfg, &a).unwrap();
    cfg.threads = Some(3);
    netepi::harness::with_threads(Some(3), || run_experiment(&cfg, &b)).unwrap().unwrap();
    let (fa, fb) = (read_dir_sorted(&a), read_dir_sorted(&b));
    assert_eq!(fa.len(), 2);
    // metadata records the thread count, the CSV must not depend on it
    assert_eq!(fa[0], fb[0]);
    let text = String::from_utf8(fa[0].1.clone()).unwrap();
    assert!(text.starts_with("t,state,sim_mean,ci_lo,ci_hi,ode\n"));
    assert!(!text.contains('\r'));
    std::fs::remove_dir_all(&base).ok();
}

#[test]
fn outbreak_table_ordering() {
    let mut cfg = ExperimentConfig::preset(ExperimentKind::OutbreakVsKappa);
    cfg.trials = 20;
    cfg.ns = vec![100];
    cfg.kappas = vec![2, 3, 5];
    let rows = run_outbreak_vs_kappa(&cfg).unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!(r.outbreak_mean_field > r.outbreak_limit);
        assert!(r.sim_mean > 0.0 && r.sim_mean <= 1.0);
    }
}

#[test]
fn periodic_sweep_shapes() {
    let mut cfg = ExperimentConfig::preset(ExperimentKind::PeriodicSweep);
    cfg.omegas = vec![0.5, 10.0];
    cfg.deltas = vec![0.0, 0.5];
    cfg.amplitudes = vec![0.0, 0.3, 0.6, 0.9];
    let rows = run_periodic_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 16);
    // zero amplitude gives the constant-rate outbreak everywhere
    let flat: Vec<f64> = rows.iter().filter(|r| r.amplitude == 0.0).map(|r| r.outbreak).collect();
    assert!(flat.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-7));
    // short period: the rate averages out, so A barely matters; half a
    // period of phase shift starts the epidemic in the trough and A hurts
    let spread = |omega: f64| {
        let v: Vec<f64> = rows.iter().filter(|r| r.omega == omega).map(|r| r.outbreak).collect();
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    assert!(spread(0.5) < 0.05 && spread(10.0) > 0.2);
    let trough: Vec<f64> = rows
        .iter()
        .filter(|r| r.omega == 0.5 && r.delta == 0.5)
        .map(|r| r.outbreak)
        .collect();
    assert!(trough.windows(2).all(|w| w[1] < w[0]), "{trough:?}");
    // long period: the phase matters
    let at = |delta: f64| -> Vec<f64> {
        rows.iter().filter(|r| r.omega == 10.0 && r.delta == delta).map(|r| r.outbreak).collect()
    };
    let diff = at(0.0).iter().zip(at(0.5)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(diff > 0.01, "{diff}");
}

#[test]
fn ratio_scenarios_summary() {
    let cfg = ExperimentConfig::preset(ExperimentKind::RatioScenarios);
    let res = run_ratio_scenarios(&cfg).unwrap();
    let summary = res.summary_csv();
    assert!(summary.starts_with("scenario,F,s_final,r_hat\n"));
    assert_eq!(summary.lines().count(), 3);
    let [a, b] = [&res.scenarios[0], &res.scenarios[1]];
    assert_ne!(a.result.s_final, b.result.s_final);
    assert!(a.s_inf.windows(2).all(|w| w[1] <= w[0] + 1e-15));
}

#[test]
fn ci_covers_true_mean() {
    // 100 experiments of 200 isolated recoveries each; the mean is 1
    let g = SparseGraph::empty(1);
    let one = RateFunction::constant(1.0).unwrap();
    let p = EpidemicParams::sir(one.clone(), one, 0.01).unwrap();
    let mut covered = 0;
    for exp in 0..100u64 {
        let xs: Vec<f64> = (0..200u64)
            .map(|i| {
                let mut rng = trial_rng(exp, i);
                simulate_from_states(&g, &p, vec![State::I], 100.0, 100.0, &mut rng).unwrap().events()[0].time
            })
            .collect();
        let (m, h) = mean_ci(&xs);
        if (m - 1.0).abs() <= h {
            covered += 1;
        }
    }
    assert!(covered >= 90, "coverage {covered}/100");
}
