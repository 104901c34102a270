use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netepi::graphs::{erdos_renyi, SparseGraph};
use netepi::rates::RateFunction;
use netepi::sim::{simulate, simulate_from_states, EpidemicParams, State};

fn constant(v: f64) -> RateFunction {
    RateFunction::constant(v).unwrap()
}

#[test]
fn isolated_recovery_time_has_unit_mean() {
    let g = SparseGraph::empty(1);
    let p = EpidemicParams::sir(constant(1.0), constant(1.0), 0.01).unwrap();
    let n = 10_000;
    let total: f64 = (0..n)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tr = simulate_from_states(&g, &p, vec![State::I], 100.0, 100.0, &mut rng).unwrap();
            let ev = tr.events()[0];
            assert_eq!((ev.from, ev.to), (State::I, State::R));
            ev.time
        })
        .sum();
    let mean = total / n as f64;
    assert!((mean - 1.0).abs() < 0.03, "mean {mean}");
}

#[test]
fn time_varying_recovery_matches_integrated_hazard() {
    // rho ramps 0.5 -> 1.5 on [0, 2]; P(T > 1) = exp(-int_0^1 rho) = exp(-0.75)
    let g = SparseGraph::empty(1);
    let rho = RateFunction::ramp(0.5, 1.5, 0.0, 2.0).unwrap();
    let p = EpidemicParams::sir(constant(1.0), rho, 0.01).unwrap();
    let n = 20_000;
    let survived = (0..n)
        .filter(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tr = simulate_from_states(&g, &p, vec![State::I], 50.0, 50.0, &mut rng).unwrap();
            tr.events()[0].time > 1.0
        })
        .count();
    let frac = survived as f64 / n as f64;
    let want = (-0.75f64).exp();
    let sd = (want * (1.0 - want) / n as f64).sqrt();
    assert!((frac - want).abs() < 4.0 * sd, "{frac} vs {want}");
}

#[test]
fn no_edges_no_infections() {
    let g = SparseGraph::empty(200);
    let p = EpidemicParams::sir(constant(5.0), constant(1.0), 0.5).unwrap();
    let tr = simulate(&g, &p, 50.0, 1.0, 3).unwrap();
    let s0 = tr.grid_fractions()[0][0];
    assert!(tr.grid_fractions().iter().all(|f| f[0] == s0));
    assert!(tr.events().iter().all(|e| e.from == State::I));
    assert!((tr.final_outbreak().unwrap() - (1.0 - s0)).abs() < 1e-15);
}

#[test]
fn exact_replay_and_extinction() {
    let g = erdos_renyi(400, 3.0, 9).unwrap();
    let p = EpidemicParams::sir(constant(1.0), constant(1.0), 0.95).unwrap();
    let tr = simulate(&g, &p, 200.0, 1.0, 4).unwrap();
    let t_end = tr.extinction_time().expect("dies out well before t = 200");
    let f = tr.fractions_at(t_end).unwrap();
    assert_eq!((f[1], f[2]), (0.0, 0.0));
    assert!((tr.final_outbreak().unwrap() - f[3]).abs() < 1e-15);
    let f0 = tr.fractions_at(0.0).unwrap();
    assert!(f0.iter().all(|x| (x * 400.0 - (x * 400.0).round()).abs() < 1e-9));
    assert!(tr.fractions_at(201.0).is_err());
    let mut prev = f0;
    for k in 1..=100 {
        let cur = tr.fractions_at(k as f64 * 0.5).unwrap();
        assert!(cur[0] <= prev[0] && cur[3] >= prev[3]);
        prev = cur;
    }
}

#[test]
fn same_seed_same_trajectory() {
    let g = erdos_renyi(300, 2.0, 1).unwrap();
    let beta = RateFunction::sinusoidal(1.0, 0.5, 3.0, 0.0).unwrap();
    let p = EpidemicParams::seir(beta, constant(1.0), constant(2.0), 0.9, 0.05, 0.05).unwrap();
    let a = simulate(&g, &p, 20.0, 0.5, 77).unwrap();
    let b = simulate(&g, &p, 20.0, 0.5, 77).unwrap();
    assert_eq!(a.events(), b.events());
    let mut x = Vec::new();
    let mut y = Vec::new();
    a.write_events_csv(&mut x).unwrap();
    b.write_events_csv(&mut y).unwrap();
    assert_eq!(x, y);
}
