//! Monte Carlo experiment orchestration: configuration, per-trial seeding,
//! confidence-interval summaries and the CSV writers shared by the CLI.

mod config;
mod experiments;

pub use config::{EpidemicConfig, ExperimentConfig, ExperimentKind, GraphSpec};
pub use experiments::{
    run_outbreak_vs_kappa, run_periodic_sweep, run_ratio_scenarios, run_seir_lambda_panel,
    metadata_json, periodic_beta, periodic_csv, ratio_scenario_rates, run_experiment, run_sim_vs_ode,
    KappaRow, LambdaPanel, PeriodicRow, RatioScenario, RatioScenarios, SimVsOde, KAPPA_CSV_HEADER,
};

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros dropped,
/// scientific notation outside `[1e-4, 1e12)`.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs());
    }
    let decimals = (11 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Joins formatted floats with commas.
pub fn csv_floats(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_float(v)).collect::<Vec<_>>().join(",")
}

/// Independent generator for trial `index` of a run with master seed `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `trial(i)` for `i in 0..count` in parallel and returns the results
/// in index order. The first failure aborts the whole batch.
pub fn run_indexed<T, F>(count: usize, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    (0..count).into_par_iter().map(|i| trial(i)).collect()
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Config("threads must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Mean and 95% normal-approximation half-width of a sample.
pub fn mean_ci(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, 1.96 * var.sqrt() / m.sqrt())
}

/// Per-time mean and CI half-width of the `(s, e, i, r)` fractions over
/// independent trials.
#[derive(Debug, Clone)]
pub struct SummaryCurve {
    pub grid: Vec<f64>,
    pub mean: Vec<[f64; 4]>,
    pub half_width: Vec<[f64; 4]>,
    pub trials: usize,
}

impl SummaryCurve {
    /// `samples[trial][time]`; every trial must be sampled on `grid`.
    pub fn from_samples(grid: Vec<f64>, samples: &[Vec<[f64; 4]>]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("need at least one trial"));
        }
        if samples.iter().any(|s| s.len() != grid.len()) {
            return Err(Error::invalid("trial sampled on a different grid"));
        }
        let mut mean = Vec::with_capacity(grid.len());
        let mut half_width = Vec::with_capacity(grid.len());
        let mut column = vec![0.0; samples.len()];
        for j in 0..grid.len() {
            let mut m = [0.0; 4];
            let mut h = [0.0; 4];
            for c in 0..4 {
                for (x, s) in column.iter_mut().zip(samples) {
                    *x = s[j][c];
                }
                (m[c], h[c]) = mean_ci(&column);
            }
            mean.push(m);
            half_width.push(h);
        }
        Ok(Self {
            grid,
            mean,
            half_width,
            trials: samples.len(),
        })
    }
}

/// Writes `text` to `dir/name`, creating `dir` if needed.
pub fn write_file(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut f = std::fs::File::create(dir.join(name))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
