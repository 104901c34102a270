use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::DegreeDistribution;
use crate::error::{Error, Result};
use crate::graphs::{configuration_model_with_rng, erdos_renyi_with_rng, DegreeSource, SparseGraph};
use crate::ode::LimitOptions;
use crate::rates::RateFunction;
use crate::sim::EpidemicParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    SimVsOde,
    OutbreakVsKappa,
    PeriodicSweep,
    RatioScenarios,
    SeirLambdaPanel,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::SimVsOde => "sim_vs_ode",
            Self::OutbreakVsKappa => "outbreak_vs_kappa",
            Self::PeriodicSweep => "periodic_sweep",
            Self::RatioScenarios => "ratio_scenarios",
            Self::SeirLambdaPanel => "seir_lambda_panel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    /// Erdos-Renyi with edge probability `mean / n`.
    Er { n: usize, mean: f64 },
    /// Erased configuration model with i.i.d. degrees.
    Cm { n: usize, degree: DegreeDistribution },
}

impl GraphSpec {
    pub fn n(&self) -> usize {
        match self {
            Self::Er { n, .. } | Self::Cm { n, .. } => *n,
        }
    }

    /// Degree law of the local limit.
    pub fn limit_degree(&self) -> Result<DegreeDistribution> {
        match self {
            Self::Er { mean, .. } => DegreeDistribution::poisson(*mean),
            Self::Cm { degree, .. } => Ok(degree.clone()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SparseGraph> {
        match self {
            Self::Er { n, mean } => erdos_renyi_with_rng(*n, *mean, rng),
            Self::Cm { n, degree } => configuration_model_with_rng(*n, DegreeSource::Iid(degree), rng),
        }
    }
}

fn default_alpha() -> f64 {
    0.0
}

fn one() -> RateFunction {
    RateFunction::constant(1.0).expect("1 is a valid rate")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EpidemicConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub beta: RateFunction,
    #[serde(default = "one")]
    pub rho: RateFunction,
    #[serde(default = "one")]
    pub lambda: RateFunction,
    pub s0: f64,
    #[serde(default)]
    pub e0: f64,
    /// Defaults to `1 - s0 - e0`.
    #[serde(default)]
    pub i0: Option<f64>,
}

impl EpidemicConfig {
    pub fn sir(beta: f64, rho: f64, s0: f64) -> Result<Self> {
        Ok(Self {
            alpha: 0.0,
            beta: RateFunction::constant(beta)?,
            rho: RateFunction::constant(rho)?,
            lambda: one(),
            s0,
            e0: 0.0,
            i0: None,
        })
    }

    pub fn i0(&self) -> f64 {
        self.i0.unwrap_or(1.0 - self.s0 - self.e0)
    }

    pub fn params(&self) -> Result<EpidemicParams> {
        EpidemicParams::new(
            self.alpha,
            self.beta.clone(),
            self.rho.clone(),
            self.lambda.clone(),
            self.s0,
            self.e0,
            self.i0(),
        )
    }

    /// `rho / beta` when both rates are constant.
    pub fn constant_ratio(&self) -> Option<f64> {
        Some(self.rho.as_constant()? / self.beta.as_constant()?)
    }
}

/// Everything one experiment needs. Unused fields are ignored by kinds
/// that do not need them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub graph: Option<GraphSpec>,
    pub epidemic: EpidemicConfig,
    /// Monte Carlo trials per data point.
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub t_max: f64,
    pub grid_step: f64,
    #[serde(default)]
    pub threads: Option<usize>,
    /// Degree law for the ODE-only experiments.
    #[serde(default)]
    pub theta: Option<DegreeDistribution>,
    #[serde(default)]
    pub kappas: Vec<usize>,
    #[serde(default)]
    pub ns: Vec<usize>,
    #[serde(default)]
    pub amplitudes: Vec<f64>,
    #[serde(default)]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub omegas: Vec<f64>,
    #[serde(default)]
    pub lambdas: Vec<f64>,
    #[serde(default = "default_rk_tol")]
    pub rk_tol: f64,
    #[serde(default = "default_extinction_eps")]
    pub extinction_eps: f64,
    /// Values chosen by default rather than taken from a known setup,
    /// keyed by config field. Copied into the output metadata.
    #[serde(default)]
    pub reconstructed: BTreeMap<String, String>,
}

fn default_trials() -> usize {
    500
}
fn default_rk_tol() -> f64 {
    crate::ode::DEFAULT_RK_TOL
}
fn default_extinction_eps() -> f64 {
    crate::ode::DEFAULT_EXTINCTION_EPS
}

impl ExperimentConfig {
    /// Default setup for each experiment kind.
    pub fn preset(kind: ExperimentKind) -> Self {
        let sir = |beta: f64, s0: f64| EpidemicConfig::sir(beta, 1.0, s0).expect("valid preset");
        let mut reconstructed = BTreeMap::new();
        let base = |epidemic: EpidemicConfig| Self {
            kind,
            graph: None,
            epidemic,
            trials: default_trials(),
            seed: 0,
            t_max: 10.0,
            grid_step: 0.1,
            threads: None,
            theta: None,
            kappas: Vec::new(),
            ns: Vec::new(),
            amplitudes: Vec::new(),
            deltas: Vec::new(),
            omegas: Vec::new(),
            lambdas: Vec::new(),
            rk_tol: default_rk_tol(),
            extinction_eps: default_extinction_eps(),
            reconstructed: BTreeMap::new(),
        };
        let mut cfg = match kind {
            ExperimentKind::SimVsOde => {
                reconstructed.insert("epidemic".into(), "rho=1 and s0=0.9 are assumed defaults".into());
                let mut c = base(sir(1.0, 0.9));
                c.graph = Some(GraphSpec::Er { n: 250, mean: 2.0 });
                c
            }
            ExperimentKind::OutbreakVsKappa => {
                let mut c = base(sir(0.5, 0.95));
                c.trials = 100;
                c.t_max = 500.0;
                c.grid_step = 500.0;
                c.kappas = (2..=8).collect();
                c.ns = vec![50, 150, 400];
                c
            }
            ExperimentKind::PeriodicSweep => {
                reconstructed.insert("epidemic".into(), "s0=0.9 is an assumed default".into());
                let mut c = base(sir(1.0, 0.9));
                c.theta = Some(DegreeDistribution::point_mass(3));
                c.amplitudes = (0..=19).map(|k| k as f64 * 0.05).collect();
                c.deltas = vec![0.0, 0.25, 0.5, 0.75];
                c.omegas = vec![0.5, 1.0, 5.0, 10.0];
                c
            }
            ExperimentKind::RatioScenarios => {
                reconstructed.insert("epidemic".into(), "s0=0.9 is an assumed default".into());
                let mut c = base(sir(1.0, 0.9));
                c.theta = Some(DegreeDistribution::point_mass(3));
                c.t_max = 20.0;
                c
            }
            ExperimentKind::SeirLambdaPanel => {
                let mut e = sir(0.5, 0.99);
                e.alpha = 1.0;
                e.e0 = 0.01;
                e.i0 = Some(0.0);
                let mut c = base(e);
                c.theta = Some(DegreeDistribution::point_mass(3));
                c.t_max = 50.0;
                c.lambdas = vec![0.5, 1.0, 2.0];
                c
            }
        };
        cfg.reconstructed = reconstructed;
        cfg
    }

    /// Parses a JSON object and lays its top-level keys over the preset for
    /// `kind`. A `kind` key in the JSON, if present, must agree.
    pub fn from_json_with_preset(kind: ExperimentKind, text: &str) -> Result<Self> {
        let user: serde_json::Value = serde_json::from_str(text)?;
        let serde_json::Value::Object(user) = user else {
            return Err(Error::Config("config must be a JSON object".into()));
        };
        let mut merged = serde_json::to_value(Self::preset(kind))?;
        let obj = merged.as_object_mut().expect("config serializes to an object");
        let mut reconstructed = Self::preset(kind).reconstructed;
        for (k, v) in user {
            reconstructed.remove(&k);
            obj.insert(k, v);
        }
        obj.insert("reconstructed".into(), serde_json::to_value(reconstructed)?);
        let cfg: Self = serde_json::from_value(merged)?;
        if cfg.kind != kind {
            return Err(Error::Config(format!(
                "config is for {}, not {}",
                cfg.kind.as_str(),
                kind.as_str()
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be positive, got {}", self.t_max)));
        }
        if !(self.grid_step > 0.0) {
            return Err(Error::Config(format!("grid_step must be positive, got {}", self.grid_step)));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        self.epidemic.params()?;
        Ok(())
    }

    pub fn limit_options(&self) -> LimitOptions {
        LimitOptions {
            rk_tol: self.rk_tol,
            extinction_eps: self.extinction_eps,
            ..LimitOptions::default()
        }
    }

    pub fn graph(&self) -> Result<&GraphSpec> {
        self.graph
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{} needs a graph", self.kind.as_str())))
    }

    /// `theta`, falling back to the graph's limit law.
    pub fn theta(&self) -> Result<DegreeDistribution> {
        match (&self.theta, &self.graph) {
            (Some(t), _) => Ok(t.clone()),
            (None, Some(g)) => g.limit_degree(),
            (None, None) => Err(Error::Config("need theta or a graph".into())),
        }
    }
}
