use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::{csv_floats, fmt_float, mean_ci, run_indexed, trial_rng, write_file, SummaryCurve};
use super::config::{ExperimentConfig, ExperimentKind};
use crate::dist::DegreeDistribution;
use crate::error::{Error, Result};
use crate::graphs::{configuration_model_with_rng, DegreeSource, ERASED_CM};
use crate::ode::{seir_to_extinction, solve_seir_limit, solve_sir_limit, sir_to_extinction};
use crate::outbreak::{
    effective_rate_of, mean_field_outbreak, outbreak_of_solution, regular_outbreak, solve_time_varying, OutbreakResult,
};
use crate::rates::RateFunction;
use crate::sim::{simulate_with_rng, time_grid, State};

/// Monte Carlo summary next to the limit curves on the same grid.
#[derive(Debug, Clone)]
pub struct SimVsOde {
    pub summary: SummaryCurve,
    /// Limit `(s, e, i, r)` at each grid time.
    pub ode: Vec<[f64; 4]>,
    pub states: Vec<State>,
}

impl SimVsOde {
    /// `sup_t |sim_mean - ode|` for one state.
    pub fn sup_deviation(&self, state: State) -> f64 {
        let c = state as usize;
        self.summary
            .mean
            .iter()
            .zip(&self.ode)
            .map(|(m, o)| (m[c] - o[c]).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,state,sim_mean,ci_lo,ci_hi,ode\n");
        for (j, &t) in self.summary.grid.iter().enumerate() {
            for &st in &self.states {
                let c = st as usize;
                let (m, h) = (self.summary.mean[j][c], self.summary.half_width[j][c]);
                writeln!(out, "{},{},{}", fmt_float(t), st, csv_floats(&[m, m - h, m + h, self.ode[j][c]])).unwrap();
            }
        }
        out
    }
}

/// Simulates `trials` independent graphs and epidemics and compares the
/// averaged fractions with the SIR (`alpha = 0`) or SEIR (`alpha = 1`) limit.
pub fn run_sim_vs_ode(cfg: &ExperimentConfig) -> Result<SimVsOde> {
    let spec = cfg.graph()?;
    let params = cfg.epidemic.params()?;
    let theta = spec.limit_degree()?;
    let ep = &cfg.epidemic;
    let (sol, states) = if ep.alpha == 0.0 {
        let sol = solve_sir_limit(&theta, &ep.beta, &ep.rho, ep.s0, cfg.t_max, cfg.rk_tol)?;
        (sol, vec![State::S, State::I, State::R])
    } else if ep.alpha == 1.0 {
        let sol = solve_seir_limit(
            &theta, &ep.beta, &ep.rho, &ep.lambda, ep.s0, ep.e0, ep.i0(), cfg.t_max, cfg.rk_tol,
        )?;
        (sol, vec![State::S, State::E, State::I, State::R])
    } else {
        return Err(Error::Config(format!(
            "sim_vs_ode has limit curves only for alpha 0 or 1, got {}",
            ep.alpha
        )));
    };
    let grid = time_grid(cfg.t_max, cfg.grid_step);
    let samples = run_indexed(cfg.trials, |i| {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let g = spec.sample(&mut rng)?;
        let tr = simulate_with_rng(&g, &params, cfg.t_max, cfg.grid_step, &mut rng)?;
        tr.check_invariants(&g, params.alpha())?;
        Ok(tr.grid_fractions().to_vec())
    })?;
    let ode = grid.iter().map(|&t| sol.fractions(t)).collect();
    Ok(SimVsOde {
        summary: SummaryCurve::from_samples(grid, &samples)?,
        ode,
        states,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaRow {
    pub n: usize,
    pub kappa: usize,
    pub sim_mean: f64,
    pub ci_half: f64,
    /// `1 - sigma_kappa`.
    pub outbreak_limit: f64,
    /// `1 - sigma_hat_kappa`.
    pub outbreak_mean_field: f64,
}

pub const KAPPA_CSV_HEADER: &str = "n,kappa,sim_mean,ci_lo,ci_hi,outbreak_ode,outbreak_mf";

impl KappaRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{}",
            self.n,
            self.kappa,
            csv_floats(&[
                self.sim_mean,
                self.sim_mean - self.ci_half,
                self.sim_mean + self.ci_half,
                self.outbreak_limit,
                self.outbreak_mean_field,
            ])
        )
    }
}

/// Outbreak sizes on random regular graphs for each `(n, kappa)`, run to
/// extinction, next to the limit and mean-field predictions.
pub fn run_outbreak_vs_kappa(cfg: &ExperimentConfig) -> Result<Vec<KappaRow>> {
    let ep = &cfg.epidemic;
    let r = ep
        .constant_ratio()
        .ok_or_else(|| Error::Config("outbreak_vs_kappa needs constant beta and rho".into()))?;
    if ep.alpha != 0.0 {
        return Err(Error::Config("outbreak_vs_kappa is a SIR experiment (alpha = 0)".into()));
    }
    let params = ep.params()?;
    let combos: Vec<(usize, usize)> = cfg
        .ns
        .iter()
        .flat_map(|&n| cfg.kappas.iter().map(move |&k| (n, k)))
        .collect();
    let m = cfg.trials;
    let outbreaks = run_indexed(combos.len() * m, |idx| {
        let (n, kappa) = combos[idx / m];
        let mut rng = trial_rng(cfg.seed, idx as u64);
        let law = DegreeDistribution::point_mass(kappa);
        let g = configuration_model_with_rng(n, DegreeSource::Iid(&law), &mut rng)?;
        let tr = simulate_with_rng(&g, &params, cfg.t_max, cfg.grid_step, &mut rng)?;
        tr.final_outbreak()
    })?;
    combos
        .iter()
        .zip(outbreaks.chunks(m))
        .map(|(&(n, kappa), xs)| {
            let (sim_mean, ci_half) = mean_ci(xs);
            Ok(KappaRow {
                n,
                kappa,
                sim_mean,
                ci_half,
                outbreak_limit: 1.0 - regular_outbreak(kappa, r, ep.s0)?,
                outbreak_mean_field: 1.0 - mean_field_outbreak(kappa, r, ep.s0)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicRow {
    pub omega: f64,
    pub delta: f64,
    pub amplitude: f64,
    pub outbreak: f64,
}

/// `beta_t = base (1 + A sin(2 pi (t + delta omega) / omega))`.
pub fn periodic_beta(base: f64, amplitude: f64, omega: f64, delta: f64) -> Result<RateFunction> {
    RateFunction::sinusoidal(base, base * amplitude, omega, delta)
}

/// Limit outbreak under a periodic infection rate over the
/// `(omega, delta, A)` grid.
pub fn run_periodic_sweep(cfg: &ExperimentConfig) -> Result<Vec<PeriodicRow>> {
    let theta = cfg.theta()?;
    let ep = &cfg.epidemic;
    let base = ep
        .beta
        .as_constant()
        .ok_or_else(|| Error::Config("periodic_sweep takes the base infection rate from a constant beta".into()))?;
    let points: Vec<(f64, f64, f64)> = cfg
        .omegas
        .iter()
        .flat_map(|&w| {
            cfg.deltas
                .iter()
                .flat_map(move |&d| cfg.amplitudes.iter().map(move |&a| (w, d, a)))
        })
        .collect();
    let opts = cfg.limit_options();
    run_indexed(points.len(), |i| {
        let (omega, delta, amplitude) = points[i];
        let beta = periodic_beta(base, amplitude, omega, delta)?;
        let res = solve_time_varying(&theta, &beta, &ep.rho, ep.s0, &opts)?;
        Ok(PeriodicRow {
            omega,
            delta,
            amplitude,
            outbreak: res.outbreak,
        })
    })
}

pub fn periodic_csv(rows: &[PeriodicRow]) -> String {
    let mut out = String::from("omega,delta,A,outbreak\n");
    for r in rows {
        writeln!(out, "{}", csv_floats(&[r.omega, r.delta, r.amplitude, r.outbreak])).unwrap();
    }
    out
}

/// The two rate pairs sharing `rho_t / beta_t = 1.5 + sin(pi t)`: `rho` ramps
/// up from 0.5 to 1.5 on `[0, 10]` ("A") or down from 1.5 to 0.5 ("B").
pub fn ratio_scenario_rates(name: &str) -> Result<(RateFunction, RateFunction)> {
    let rho = match name {
        "A" => RateFunction::ramp(0.5, 1.5, 0.0, 10.0)?,
        "B" => RateFunction::ramp(1.5, 0.5, 0.0, 10.0)?,
        _ => return Err(Error::Config(format!("unknown ratio scenario {name:?}"))),
    };
    let ratio = RateFunction::sinusoidal(1.5, 1.0, 2.0, 0.0)?;
    Ok((RateFunction::quotient(rho.clone(), ratio), rho))
}

#[derive(Debug, Clone)]
pub struct RatioScenario {
    pub name: &'static str,
    pub beta: RateFunction,
    pub rho: RateFunction,
    pub result: OutbreakResult,
    pub r_hat: f64,
    pub grid: Vec<f64>,
    pub s_inf: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RatioScenarios {
    pub scenarios: Vec<RatioScenario>,
}

impl RatioScenarios {
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("scenario,t,s_inf\n");
        for sc in &self.scenarios {
            for (&t, &s) in sc.grid.iter().zip(&sc.s_inf) {
                writeln!(out, "{},{}", sc.name, csv_floats(&[t, s])).unwrap();
            }
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("scenario,F,s_final,r_hat\n");
        for sc in &self.scenarios {
            let r = &sc.result;
            writeln!(out, "{},{}", sc.name, csv_floats(&[r.pressure, r.s_final, sc.r_hat])).unwrap();
        }
        out
    }
}

/// Limit `s_inf` curves, outbreak and effective ratio for both scenarios.
pub fn run_ratio_scenarios(cfg: &ExperimentConfig) -> Result<RatioScenarios> {
    let theta = cfg.theta()?;
    let s0 = cfg.epidemic.s0;
    let grid = time_grid(cfg.t_max, cfg.grid_step);
    let opts = cfg.limit_options();
    let scenarios = ["A", "B"]
        .into_iter()
        .map(|name| {
            let (beta, rho) = ratio_scenario_rates(name)?;
            let sol = sir_to_extinction(&theta, &beta, &rho, s0, &opts)?;
            Ok(RatioScenario {
                name,
                result: outbreak_of_solution(&sol),
                r_hat: effective_rate_of(&sol),
                s_inf: grid.iter().map(|&t| sol.s_inf(t)).collect(),
                grid: grid.clone(),
                beta,
                rho,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioScenarios { scenarios })
}

#[derive(Debug, Clone)]
pub struct LambdaPanel {
    pub lambdas: Vec<f64>,
    pub grid: Vec<f64>,
    /// `(s_bar, e_bar, i_bar)` per lambda, per grid time.
    pub curves: Vec<Vec<[f64; 3]>>,
    pub results: Vec<OutbreakResult>,
}

impl LambdaPanel {
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("lambda,t,s_bar,e_bar,i_bar\n");
        for (l, curve) in self.lambdas.iter().zip(&self.curves) {
            for (&t, v) in self.grid.iter().zip(curve) {
                writeln!(out, "{}", csv_floats(&[*l, t, v[0], v[1], v[2]])).unwrap();
            }
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("lambda,F,s_final,outbreak,residual\n");
        for (l, r) in self.lambdas.iter().zip(&self.results) {
            writeln!(out, "{}", csv_floats(&[*l, r.pressure, r.s_final, r.outbreak, r.residual])).unwrap();
        }
        out
    }
}

/// SEIR limit curves and outbreak for each incubation rate in `lambdas`.
pub fn run_seir_lambda_panel(cfg: &ExperimentConfig) -> Result<LambdaPanel> {
    let theta = cfg.theta()?;
    let ep = &cfg.epidemic;
    let grid = time_grid(cfg.t_max, cfg.grid_step);
    let opts = cfg.limit_options();
    let mut curves = Vec::new();
    let mut results = Vec::new();
    for &l in &cfg.lambdas {
        let lambda = RateFunction::constant(l)?;
        let sol = seir_to_extinction(&theta, &ep.beta, &ep.rho, &lambda, ep.s0, ep.e0, ep.i0(), &opts)?;
        curves.push(grid.iter().map(|&t| [sol.s_inf(t), sol.e_inf(t), sol.i_inf(t)]).collect());
        results.push(outbreak_of_solution(&sol));
    }
    Ok(LambdaPanel {
        lambdas: cfg.lambdas.clone(),
        grid,
        curves,
        results,
    })
}

/// JSON sidecar describing how an artifact was produced.
pub fn metadata_json(cfg: &ExperimentConfig) -> Result<String> {
    let meta = json!({
        "kind": cfg.kind.as_str(),
        "graph_variant": ERASED_CM,
        "reconstructed": cfg.reconstructed,
        "config": cfg,
    });
    Ok(serde_json::to_string_pretty(&meta)? + "\n")
}

/// Runs the configured experiment and writes its CSV files and metadata
/// into `out_dir`. Returns the written paths.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let name = cfg.kind.as_str();
    let files: Vec<(String, String)> = match cfg.kind {
        ExperimentKind::SimVsOde => vec![(format!("{name}.csv"), run_sim_vs_ode(cfg)?.to_csv())],
        ExperimentKind::OutbreakVsKappa => {
            let rows = run_outbreak_vs_kappa(cfg)?;
            let mut text = format!("{KAPPA_CSV_HEADER}\n");
            for r in &rows {
                text.push_str(&r.csv_row());
                text.push('\n');
            }
            vec![(format!("{name}.csv"), text)]
        }
        ExperimentKind::PeriodicSweep => vec![(format!("{name}.csv"), periodic_csv(&run_periodic_sweep(cfg)?))],
        ExperimentKind::RatioScenarios => {
            let res = run_ratio_scenarios(cfg)?;
            vec![
                (format!("{name}.csv"), res.curves_csv()),
                (format!("{name}_summary.csv"), res.summary_csv()),
            ]
        }
        ExperimentKind::SeirLambdaPanel => {
            let res = run_seir_lambda_panel(cfg)?;
            vec![
                (format!("{name}.csv"), res.curves_csv()),
                (format!("{name}_summary.csv"), res.summary_csv()),
            ]
        }
    };
    let mut written = Vec::new();
    for (file, text) in files.iter().chain(std::iter::once(&(format!("{name}.meta.json"), metadata_json(cfg)?))) {
        write_file(out_dir, file, text)?;
        written.push(out_dir.join(file));
    }
    Ok(written)
}
