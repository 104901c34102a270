use netepi::dist::DegreeDistribution;
use netepi::harness::ratio_scenario_rates;
use netepi::ode::{sir_to_extinction, LimitOptions};
use netepi::outbreak::{
    effective_rate_of, mean_field_outbreak, regular_outbreak, seir_outbreak, solve_constant_ratio,
    solve_time_varying,
};
use netepi::rates::{ratio, RateFunction};

fn constant(v: f64) -> RateFunction {
    RateFunction::constant(v).unwrap()
}

#[test]
fn scenarios_share_ratio_but_not_outbreak() {
    let (beta_a, rho_a) = ratio_scenario_rates("A").unwrap();
    let (beta_b, rho_b) = ratio_scenario_rates("B").unwrap();
    for k in 0..=400 {
        let t = k as f64 * 0.05;
        let want = 1.5 + (std::f64::consts::PI * t).sin();
        assert!((ratio(&rho_a, &beta_a, t) - want).abs() < 1e-12);
        assert!((ratio(&rho_b, &beta_b, t) - want).abs() < 1e-12);
    }
    let theta = DegreeDistribution::point_mass(3);
    let opts = LimitOptions::default();
    let a = solve_time_varying(&theta, &beta_a, &rho_a, 0.9, &opts).unwrap();
    let b = solve_time_varying(&theta, &beta_b, &rho_b, 0.9, &opts).unwrap();
    assert!((a.s_final - b.s_final).abs() > 0.05, "{} vs {}", a.s_final, b.s_final);
}

#[test]
fn effective_rate_is_within_ratio_range() {
    let theta = DegreeDistribution::point_mass(3);
    let opts = LimitOptions::default();
    for name in ["A", "B"] {
        let (beta, rho) = ratio_scenario_rates(name).unwrap();
        let sol = sir_to_extinction(&theta, &beta, &rho, 0.9, &opts).unwrap();
        let r_hat = effective_rate_of(&sol);
        assert!((0.5..=2.5).contains(&r_hat), "{name}: {r_hat}");
    }
    let sol = sir_to_extinction(&theta, &constant(0.8), &constant(1.2), 0.9, &opts).unwrap();
    assert!((effective_rate_of(&sol) - 1.5).abs() < 1e-6);
}

#[test]
fn seir_outbreak_depends_on_lambda_when_beta_varies() {
    let theta = DegreeDistribution::point_mass(3);
    let opts = LimitOptions::default();
    let up = RateFunction::ramp(0.5, 1.5, 0.0, 10.0).unwrap();
    let down = RateFunction::ramp(1.5, 0.5, 0.0, 10.0).unwrap();
    for beta in [up, down] {
        let s = |l: f64| {
            seir_outbreak(&theta, &beta, &constant(1.0), &constant(l), 0.99, 0.01, 0.0, &opts)
                .unwrap()
                .s_final
        };
        assert!((s(0.5) - s(2.0)).abs() > 1e-3);
    }
}

#[test]
fn sigma_grid_ordering() {
    for kappa in 2..=8 {
        for r in [0.25, 0.5, 1.0, 2.0, 4.0] {
            for s0 in [0.5, 0.9, 0.95, 0.99] {
                let sigma = regular_outbreak(kappa, r, s0).unwrap();
                let hat = mean_field_outbreak(kappa, r, s0).unwrap();
                assert!(0.0 < hat && hat < sigma && sigma < s0);
            }
        }
    }
}

#[test]
fn constant_ratio_result_invariants() {
    let theta = DegreeDistribution::poisson(3.0).unwrap();
    for r in [0.25, 1.0, 4.0] {
        let res = solve_constant_ratio(&theta, r, 0.9).unwrap();
        assert!(res.pressure > 0.0);
        assert!(res.s_final > 0.0 && res.s_final < 0.9);
        assert!(res.outbreak > 0.1 && res.outbreak < 1.0);
        assert!(res.residual.abs() < 1e-12);
    }
}
