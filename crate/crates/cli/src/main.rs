//! Command line front end for the netepi experiments.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netepi::dist::DegreeDistribution;
use netepi::harness::{
    fmt_float, metadata_json, ratio_scenario_rates, run_experiment, trial_rng, with_threads, write_file, ExperimentConfig,
    ExperimentKind,
};
use netepi::ode::{sir_to_extinction, solve_seir_limit, solve_sir_limit};
use netepi::outbreak::{
    effective_rate_of, mean_field_outbreak, outbreak_of_solution, regular_outbreak,
    seir_outbreak, solve_constant_ratio, solve_time_varying, OUTBREAK_CSV_HEADER,
};
use netepi::sim::simulate_with_rng;
use netepi::{Error, Result};

#[derive(Parser)]
#[command(name = "netepi", version, about = "SIR/SEIR epidemics on sparse random graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON config; its top-level keys override the subcommand's defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// One simulated trajectory on one sampled graph.
    Simulate,
    /// Limit ODE curves on the time grid.
    Ode,
    /// Limit final-size table.
    Outbreak,
    /// Regular-graph outbreak against the mean-field approximation.
    CompareMf,
    /// Outbreak under periodic infection rates.
    SweepPeriodic,
    /// Two rate pairs with the same ratio.
    RatioScenarios,
    /// Constant ratio reproducing a time-varying outbreak.
    EffectiveRate,
    /// Monte Carlo mean with confidence band against the ODE.
    SimVsOde,
    /// Simulated outbreak against the limit and mean field, by degree.
    OutbreakVsKappa,
    /// SEIR curves for several incubation rates.
    SeirLambdaPanel,
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Self::Simulate | Self::Ode | Self::SimVsOde => ExperimentKind::SimVsOde,
            Self::Outbreak | Self::CompareMf | Self::OutbreakVsKappa => ExperimentKind::OutbreakVsKappa,
            Self::SweepPeriodic => ExperimentKind::PeriodicSweep,
            Self::RatioScenarios | Self::EffectiveRate => ExperimentKind::RatioScenarios,
            Self::SeirLambdaPanel => ExperimentKind::SeirLambdaPanel,
        }
    }
}

fn load_config(kind: ExperimentKind, g: &Global) -> Result<ExperimentConfig> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let mut value: serde_json::Value = serde_json::from_str(&text)?;
            // the subcommand decides the kind
            if let Some(obj) = value.as_object_mut() {
                obj.entry("kind").or_insert_with(|| kind.as_str().into());
            }
            ExperimentConfig::from_json_with_preset(kind, &value.to_string())?
        }
        None => ExperimentConfig::preset(kind),
    };
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if g.threads.is_some() {
        cfg.threads = g.threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_with_meta(cfg: &ExperimentConfig, out: &Path, files: &[(&str, String)]) -> Result<()> {
    let stem = files[0].0.trim_end_matches(".csv");
    for (name, text) in files {
        write_file(out, name, text)?;
    }
    write_file(out, &format!("{stem}.meta.json"), &metadata_json(cfg)?)
}

fn simulate(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let mut rng = trial_rng(cfg.seed, 0);
    let g = cfg.graph()?.sample(&mut rng)?;
    let p = cfg.epidemic.params()?;
    let tr = simulate_with_rng(&g, &p, cfg.t_max, cfg.grid_step, &mut rng)?;
    let mut grid = Vec::new();
    tr.write_grid_csv(&mut grid)?;
    let mut events = Vec::new();
    tr.write_events_csv(&mut events)?;
    let utf8 = |b: Vec<u8>| String::from_utf8(b).expect("CSV writers emit ASCII");
    write_with_meta(cfg, out, &[("simulate.csv", utf8(grid)), ("simulate_events.csv", utf8(events))])
}

fn ode(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let theta = cfg.theta()?;
    let ep = &cfg.epidemic;
    let sol = if ep.alpha == 0.0 {
        solve_sir_limit(&theta, &ep.beta, &ep.rho, ep.s0, cfg.t_max, cfg.rk_tol)?
    } else if ep.alpha == 1.0 {
        solve_seir_limit(&theta, &ep.beta, &ep.rho, &ep.lambda, ep.s0, ep.e0, ep.i0(), cfg.t_max, cfg.rk_tol)?
    } else {
        return Err(Error::Config("limit ODEs exist for alpha = 0 or 1 only".into()));
    };
    let mut text = Vec::new();
    sol.write_csv(&mut text, Some(&sol.uniform_grid(cfg.grid_step)))?;
    write_with_meta(cfg, out, &[("ode.csv", String::from_utf8(text).expect("ASCII"))])
}

fn ratio_of(cfg: &ExperimentConfig) -> Result<f64> {
    cfg.epidemic
        .constant_ratio()
        .ok_or_else(|| Error::Config("this table needs constant beta and rho".into()))
}

fn kappas(cfg: &ExperimentConfig) -> Vec<usize> {
    if cfg.kappas.is_empty() {
        (2..=8).collect()
    } else {
        cfg.kappas.clone()
    }
}

fn outbreak(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let ep = &cfg.epidemic;
    let opts = cfg.limit_options();
    let mut text = format!("{OUTBREAK_CSV_HEADER}\n");
    let row = |theta: &DegreeDistribution| -> Result<_> {
        if ep.alpha == 1.0 {
            seir_outbreak(theta, &ep.beta, &ep.rho, &ep.lambda, ep.s0, ep.e0, ep.i0(), &opts)
        } else if ep.alpha != 0.0 {
            Err(Error::Config("limit final sizes exist for alpha = 0 or 1 only".into()))
        } else if let Some(r) = ep.constant_ratio() {
            solve_constant_ratio(theta, r, ep.s0)
        } else {
            solve_time_varying(theta, &ep.beta, &ep.rho, ep.s0, &opts)
        }
    };
    let r = ep.constant_ratio();
    if cfg.theta.is_some() || cfg.graph.is_some() {
        text.push_str(&row(&cfg.theta()?)?.csv_row(None, r, ep.s0));
        text.push('\n');
    } else {
        for k in kappas(cfg) {
            text.push_str(&row(&DegreeDistribution::point_mass(k))?.csv_row(Some(k), r, ep.s0));
            text.push('\n');
        }
    }
    write_with_meta(cfg, out, &[("outbreak.csv", text)])
}

fn compare_mf(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let r = ratio_of(cfg)?;
    let s0 = cfg.epidemic.s0;
    let mut text = String::from("kappa,r,s0,sigma,sigma_mf,outbreak,outbreak_mf\n");
    for k in kappas(cfg) {
        let sigma = regular_outbreak(k, r, s0)?;
        let hat = mean_field_outbreak(k, r, s0)?;
        text.push_str(&format!(
            "{k},{},{},{},{},{},{}\n",
            fmt_float(r),
            fmt_float(s0),
            fmt_float(sigma),
            fmt_float(hat),
            fmt_float(1.0 - sigma),
            fmt_float(1.0 - hat)
        ));
    }
    write_with_meta(cfg, out, &[("compare_mf.csv", text)])
}

/// With a config, the configured rates; otherwise both ratio scenarios.
fn effective_rate(cfg: &ExperimentConfig, from_config: bool, out: &Path) -> Result<()> {
    let theta = cfg.theta()?;
    let ep = &cfg.epidemic;
    let opts = cfg.limit_options();
    let cases = if from_config {
        vec![("config".to_string(), ep.beta.clone(), ep.rho.clone())]
    } else {
        ["A", "B"]
            .into_iter()
            .map(|s| ratio_scenario_rates(s).map(|(b, r)| (s.to_string(), b, r)))
            .collect::<Result<_>>()?
    };
    let mut text = String::from("label,F,s_final,r_hat,s_final_constant\n");
    for (label, beta, rho) in cases {
        let sol = sir_to_extinction(&theta, &beta, &rho, ep.s0, &opts)?;
        let res = outbreak_of_solution(&sol);
        let r_hat = effective_rate_of(&sol);
        let closed = solve_constant_ratio(&theta, r_hat, ep.s0)?;
        text.push_str(&format!(
            "{label},{},{},{},{}\n",
            fmt_float(res.pressure),
            fmt_float(res.s_final),
            fmt_float(r_hat),
            fmt_float(closed.s_final)
        ));
    }
    write_with_meta(cfg, out, &[("effective_rate.csv", text)])
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli.command.kind(), &cli.global)?;
    let out = cli.global.out.as_path();
    std::fs::create_dir_all(out)?;
    with_threads(cfg.threads, || match cli.command {
        Command::Simulate => simulate(&cfg, out),
        Command::Ode => ode(&cfg, out),
        Command::Outbreak => outbreak(&cfg, out),
        Command::CompareMf => compare_mf(&cfg, out),
        Command::EffectiveRate => effective_rate(&cfg, cli.global.config.is_some(), out),
        Command::SweepPeriodic
        | Command::RatioScenarios
        | Command::SimVsOde
        | Command::OutbreakVsKappa
        | Command::SeirLambdaPanel => run_experiment(&cfg, out).map(|_| ()),
    })?
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() || matches!(e, Error::Io(_)) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
