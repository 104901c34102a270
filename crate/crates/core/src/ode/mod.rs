//! Limit ODE systems for the fractions of susceptible, exposed and infected
//! individuals on a locally tree-like graph with degree law `theta`.
//!
//! The SIR system tracks, for a neighbor of a still-susceptible vertex, the
//! probabilities `f_S`, `f_I` of being susceptible or infected, together with
//! the cumulative infection pressure `F_I = int beta f_I`. The SEIR system
//! does the same with `g_S, g_E, g_I, G_I`. Both are closed through the ratio
//! `Phi` of the size-biased degree law.
//!
//! Root marginals (`s_inf`, `i_inf`, ...) are carried along as extra state
//! components, each the linear ODE whose solution is the corresponding
//! integral formula.

pub mod rk;

use std::io::Write;

use crate::dist::DegreeDistribution;
use crate::error::{Error, Result};
use crate::harness::fmt_float;
use crate::rates::RateFunction;
use rk::{integrate, DenseSolution, RkOptions};

pub const DEFAULT_RK_TOL: f64 = 1e-9;
pub const DEFAULT_EXTINCTION_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitOptions {
    /// Absolute and relative local error tolerance.
    pub rk_tol: f64,
    /// Integration to "infinity" stops once the infected (and exposed)
    /// neighbor probability falls below this.
    pub extinction_eps: f64,
    /// Give up if extinction has not happened by this time.
    pub max_horizon: f64,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self {
            rk_tol: DEFAULT_RK_TOL,
            extinction_eps: DEFAULT_EXTINCTION_EPS,
            max_horizon: 1e4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitModel {
    Sir,
    Seir,
}

// SIR state layout
const F_S: usize = 0;
const F_I: usize = 1;
const CAP_F: usize = 2;
const I_INF: usize = 3;
/// `int e^{-F_I} rho f_I`
const SIR_REM: usize = 4;
const SIR_RHO: usize = 5;

// SEIR state layout
const G_S: usize = 0;
const G_E: usize = 1;
const G_I: usize = 2;
const CAP_G: usize = 3;
const E_BAR: usize = 4;
const I_BAR: usize = 5;
const SEIR_REM: usize = 6;
const SEIR_RHO: usize = 7;
const SEIR_LAMBDA: usize = 8;

/// A solved limit system, evaluable at any time in `[0, horizon]`.
#[derive(Debug, Clone)]
pub struct LimitSolution {
    model: LimitModel,
    theta: DegreeDistribution,
    theta_hat: DegreeDistribution,
    beta: RateFunction,
    rho: RateFunction,
    lambda: Option<RateFunction>,
    s0: f64,
    e0: f64,
    i0: f64,
    dense: DenseSolution,
    rk_tol: f64,
}

/// `Phi` with a one-entry cache; RK stages often repeat the argument.
struct PhiCache<'a> {
    law: &'a DegreeDistribution,
    last: Option<(f64, f64)>,
}

impl<'a> PhiCache<'a> {
    fn new(law: &'a DegreeDistribution) -> Self {
        Self { law, last: None }
    }

    fn get(&mut self, z: f64) -> f64 {
        let z = z.max(0.0);
        match self.last {
            Some((x, v)) if x == z => v,
            _ => {
                let v = self.law.phi(z);
                self.last = Some((z, v));
                v
            }
        }
    }
}

fn check_tol(rk_tol: f64) -> Result<()> {
    if rk_tol > 0.0 && rk_tol < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("rk_tol must lie in (0, 1), got {rk_tol}")))
    }
}

fn check_horizon(t_max: f64) -> Result<()> {
    if t_max >= 0.0 && t_max.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("t_max must be finite and >= 0, got {t_max}")))
    }
}

fn rk_options(rk_tol: f64) -> RkOptions {
    RkOptions {
        h_max: 0.5,
        ..RkOptions::with_tol(rk_tol)
    }
}

fn integrate_sir(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    s0: f64,
    t_end: f64,
    rk_tol: f64,
    stop_eps: Option<f64>,
) -> Result<LimitSolution> {
    if !(s0 > 0.0 && s0 < 1.0) {
        return Err(Error::invalid(format!("s0 must lie in (0, 1), got {s0}")));
    }
    check_tol(rk_tol)?;
    let theta_hat = theta.size_biased()?;
    let i0 = 1.0 - s0;
    let mut phi = PhiCache::new(&theta_hat);
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let b = beta.evaluate(t);
        let r = rho.evaluate(t);
        let (fs, fi, cap) = (y[F_S], y[F_I], y[CAP_F].max(0.0));
        let ph = phi.get(cap);
        dy[F_S] = fs * fi * b * (1.0 - ph);
        dy[F_I] = fs * fi * b * ph - fi * (r + b - b * fi);
        dy[CAP_F] = b * fi;
        dy[I_INF] = s0 * theta.laplace_derivative_unchecked(-cap) * b * fi - r * y[I_INF];
        dy[SIR_REM] = (-cap).exp() * r * fi;
        dy[SIR_RHO] = r;
    };
    let y0 = [s0, i0, 0.0, i0, 0.0, 0.0];
    let dense = integrate(rhs, 0.0, &y0, t_end, &rk_options(rk_tol), |_, y| {
        stop_eps.is_some_and(|eps| y[F_I] < eps)
    })?;
    Ok(LimitSolution {
        model: LimitModel::Sir,
        theta: theta.clone(),
        theta_hat,
        beta: beta.clone(),
        rho: rho.clone(),
        lambda: None,
        s0,
        e0: 0.0,
        i0,
        dense,
        rk_tol,
    })
}

#[allow(clippy::too_many_arguments)]
fn integrate_seir(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    lambda: &RateFunction,
    (s0, e0, i0): (f64, f64, f64),
    t_end: f64,
    rk_tol: f64,
    stop_eps: Option<f64>,
) -> Result<LimitSolution> {
    if !(s0 > 0.0 && s0 < 1.0) {
        return Err(Error::invalid(format!("s0 must lie in (0, 1), got {s0}")));
    }
    if e0 < 0.0 || i0 < 0.0 || (s0 + e0 + i0 - 1.0).abs() > 1e-12 {
        return Err(Error::invalid("need e0, i0 >= 0 and s0 + e0 + i0 = 1"));
    }
    check_tol(rk_tol)?;
    let theta_hat = theta.size_biased()?;
    let mut phi = PhiCache::new(&theta_hat);
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let b = beta.evaluate(t);
        let r = rho.evaluate(t);
        let l = lambda.evaluate(t);
        let (gs, ge, gi, cap) = (y[G_S], y[G_E], y[G_I], y[CAP_G].max(0.0));
        let ph = phi.get(cap);
        dy[G_S] = b * gs * gi * (1.0 - ph);
        dy[G_E] = b * gs * gi * ph - ge * (l - b * gi);
        dy[G_I] = l * ge - gi * (r + b - b * gi);
        dy[CAP_G] = b * gi;
        dy[E_BAR] = s0 * theta.laplace_derivative_unchecked(-cap) * b * gi - l * y[E_BAR];
        dy[I_BAR] = l * y[E_BAR] - r * y[I_BAR];
        dy[SEIR_REM] = (-cap).exp() * r * gi;
        dy[SEIR_RHO] = r;
        dy[SEIR_LAMBDA] = l;
    };
    let y0 = [s0, e0, i0, 0.0, e0, i0, 0.0, 0.0, 0.0];
    let dense = integrate(rhs, 0.0, &y0, t_end, &rk_options(rk_tol), |_, y| {
        stop_eps.is_some_and(|eps| y[G_E] + y[G_I] < eps)
    })?;
    Ok(LimitSolution {
        model: LimitModel::Seir,
        theta: theta.clone(),
        theta_hat,
        beta: beta.clone(),
        rho: rho.clone(),
        lambda: Some(lambda.clone()),
        s0,
        e0,
        i0,
        dense,
        rk_tol,
    })
}

/// Integrate the SIR limit system on `[0, t_max]`.
pub fn solve_sir_limit(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    s0: f64,
    t_max: f64,
    rk_tol: f64,
) -> Result<LimitSolution> {
    check_horizon(t_max)?;
    integrate_sir(theta, beta, rho, s0, t_max, rk_tol, None)
}

/// Integrate the SEIR limit system on `[0, t_max]`.
#[allow(clippy::too_many_arguments)]
pub fn solve_seir_limit(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    lambda: &RateFunction,
    s0: f64,
    e0: f64,
    i0: f64,
    t_max: f64,
    rk_tol: f64,
) -> Result<LimitSolution> {
    check_horizon(t_max)?;
    integrate_seir(theta, beta, rho, lambda, (s0, e0, i0), t_max, rk_tol, None)
}

/// SIR system integrated until `f_I < extinction_eps`.
pub fn sir_to_extinction(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    s0: f64,
    opts: &LimitOptions,
) -> Result<LimitSolution> {
    let sol = integrate_sir(
        theta,
        beta,
        rho,
        s0,
        opts.max_horizon,
        opts.rk_tol,
        Some(opts.extinction_eps),
    )?;
    if sol.dense.y_end()[F_I] >= opts.extinction_eps {
        return Err(Error::NoExtinction {
            horizon: opts.max_horizon,
        });
    }
    Ok(sol)
}

/// SEIR system integrated until `g_E + g_I < extinction_eps`.
#[allow(clippy::too_many_arguments)]
pub fn seir_to_extinction(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    lambda: &RateFunction,
    s0: f64,
    e0: f64,
    i0: f64,
    opts: &LimitOptions,
) -> Result<LimitSolution> {
    let sol = integrate_seir(
        theta,
        beta,
        rho,
        lambda,
        (s0, e0, i0),
        opts.max_horizon,
        opts.rk_tol,
        Some(opts.extinction_eps),
    )?;
    let y = sol.dense.y_end();
    if y[G_E] + y[G_I] >= opts.extinction_eps {
        return Err(Error::NoExtinction {
            horizon: opts.max_horizon,
        });
    }
    Ok(sol)
}

impl LimitSolution {
    pub fn model(&self) -> LimitModel {
        self.model
    }
    pub fn theta(&self) -> &DegreeDistribution {
        &self.theta
    }
    pub fn theta_hat(&self) -> &DegreeDistribution {
        &self.theta_hat
    }
    pub fn beta(&self) -> &RateFunction {
        &self.beta
    }
    pub fn rho(&self) -> &RateFunction {
        &self.rho
    }
    pub fn lambda(&self) -> Option<&RateFunction> {
        self.lambda.as_ref()
    }
    pub fn initial(&self) -> (f64, f64, f64) {
        (self.s0, self.e0, self.i0)
    }
    pub fn rk_tol(&self) -> f64 {
        self.rk_tol
    }

    /// Last solved time.
    pub fn horizon(&self) -> f64 {
        self.dense.t_end()
    }

    /// Accepted integrator steps, from 0 to the horizon.
    pub fn grid(&self) -> Vec<f64> {
        self.dense.knots()
    }

    /// Uniform grid `0, step, ...` covering the horizon.
    pub fn uniform_grid(&self, step: f64) -> Vec<f64> {
        crate::sim::time_grid(self.horizon(), step)
    }

    fn comp(&self, t: f64, i: usize) -> f64 {
        self.dense.eval_component(t, i)
    }

    /// `f_S` (SIR) or `g_S` (SEIR).
    pub fn neighbor_s(&self, t: f64) -> f64 {
        self.comp(t, 0)
    }

    /// `g_E`; zero for SIR.
    pub fn neighbor_e(&self, t: f64) -> f64 {
        match self.model {
            LimitModel::Sir => 0.0,
            LimitModel::Seir => self.comp(t, G_E),
        }
    }

    /// `f_I` (SIR) or `g_I` (SEIR).
    pub fn neighbor_i(&self, t: f64) -> f64 {
        match self.model {
            LimitModel::Sir => self.comp(t, F_I),
            LimitModel::Seir => self.comp(t, G_I),
        }
    }

    /// Cumulative infection pressure `F_I(t)` or `G_I(t)`.
    pub fn pressure(&self, t: f64) -> f64 {
        match self.model {
            LimitModel::Sir => self.comp(t, CAP_F),
            LimitModel::Seir => self.comp(t, CAP_G),
        }
    }

    /// Limit fraction of susceptible individuals, `s0 M_theta(-pressure)`.
    pub fn s_inf(&self, t: f64) -> f64 {
        self.s0 * self.theta.laplace_unchecked(-self.pressure(t).max(0.0))
    }

    pub fn e_inf(&self, t: f64) -> f64 {
        match self.model {
            LimitModel::Sir => 0.0,
            LimitModel::Seir => self.comp(t, E_BAR),
        }
    }

    pub fn i_inf(&self, t: f64) -> f64 {
        match self.model {
            LimitModel::Sir => self.comp(t, I_INF),
            LimitModel::Seir => self.comp(t, I_BAR),
        }
    }

    /// `(s, e, i, r)` limit fractions at `t`.
    pub fn fractions(&self, t: f64) -> [f64; 4] {
        let (s, e, i) = (self.s_inf(t), self.e_inf(t), self.i_inf(t));
        [s, e, i, 1.0 - s - e - i]
    }

    /// `int_0^t e^{-pressure} rho * (f_I or g_I)`.
    pub fn removal_integral(&self, t: f64) -> f64 {
        match self.model {
            LimitModel::Sir => self.comp(t, SIR_REM),
            LimitModel::Seir => self.comp(t, SEIR_REM),
        }
    }

    /// `int_0^t rho`.
    pub fn rho_integral(&self, t: f64) -> f64 {
        match self.model {
            LimitModel::Sir => self.comp(t, SIR_RHO),
            LimitModel::Seir => self.comp(t, SEIR_RHO),
        }
    }

    /// `int_0^t lambda`; zero for SIR.
    pub fn lambda_integral(&self, t: f64) -> f64 {
        match self.model {
            LimitModel::Sir => 0.0,
            LimitModel::Seir => self.comp(t, SEIR_LAMBDA),
        }
    }

    pub fn csv_header(&self) -> &'static str {
        match self.model {
            LimitModel::Sir => "t,f_S,f_I,F_I,s_inf,i_inf",
            LimitModel::Seir => "t,g_S,g_E,g_I,G_I,s_bar,e_bar,i_bar",
        }
    }

    /// One CSV row of values at `t` (without the line ending).
    pub fn csv_row(&self, t: f64) -> String {
        let vals: Vec<f64> = match self.model {
            LimitModel::Sir => vec![
                t,
                self.neighbor_s(t),
                self.neighbor_i(t),
                self.pressure(t),
                self.s_inf(t),
                self.i_inf(t),
            ],
            LimitModel::Seir => vec![
                t,
                self.neighbor_s(t),
                self.neighbor_e(t),
                self.neighbor_i(t),
                self.pressure(t),
                self.s_inf(t),
                self.e_inf(t),
                self.i_inf(t),
            ],
        };
        vals.into_iter().map(fmt_float).collect::<Vec<_>>().join(",")
    }

    /// Writes the solution at the given times, or at the integrator's own
    /// steps when `grid` is `None`.
    pub fn write_csv<W: Write>(&self, mut out: W, grid: Option<&[f64]>) -> std::io::Result<()> {
        writeln!(out, "{}", self.csv_header())?;
        let own;
        let times = match grid {
            Some(g) => g,
            None => {
                own = self.grid();
                &own
            }
        };
        for &t in times {
            writeln!(out, "{}", self.csv_row(t))?;
        }
        Ok(())
    }
}

/// Conditional root marginals of the SIR limit, per root degree `k`.
#[derive(Debug, Clone)]
pub struct SirMarginals {
    pub ks: Vec<usize>,
    pub grid: Vec<f64>,
    /// `P_{S,S;k}` per `k`, per grid time.
    pub p_ss: Vec<Vec<f64>>,
    /// `P_{S,I;k}` per `k`, per grid time.
    pub p_si: Vec<Vec<f64>>,
    /// `P_{I,I}` per grid time.
    pub p_ii: Vec<f64>,
}

/// Per-degree marginals `P_{S,S;k} = e^{-k F_I}`, `P_{I,I} = e^{-int rho}`,
/// and `P_{S,I;k}` from its linear ODE driven by the solved `f_I`, sampled on
/// the solution grid.
pub fn sir_marginals(sol: &LimitSolution, ks: &[usize]) -> Result<SirMarginals> {
    if sol.model != LimitModel::Sir {
        return Err(Error::invalid("sir_marginals needs a SIR solution"));
    }
    let grid = sol.grid();
    let forcing = |t: f64, y: &[f64], dy: &mut [f64]| {
        let b = sol.beta.evaluate(t);
        let r = sol.rho.evaluate(t);
        let fi = sol.neighbor_i(t);
        let cap = sol.pressure(t);
        for (j, &k) in ks.iter().enumerate() {
            let k = k as f64;
            dy[j] = b * k * fi * (-k * cap).exp() - r * y[j];
        }
    };
    let y0 = vec![0.0; ks.len()];
    let opts = rk_options(sol.rk_tol);
    let psi = integrate(forcing, 0.0, &y0, sol.horizon(), &opts, |_, _| false)?;
    Ok(SirMarginals {
        ks: ks.to_vec(),
        p_ss: ks
            .iter()
            .map(|&k| grid.iter().map(|&t| (-(k as f64) * sol.pressure(t)).exp()).collect())
            .collect(),
        p_si: (0..ks.len())
            .map(|j| grid.iter().map(|&t| psi.eval_component(t, j)).collect())
            .collect(),
        p_ii: grid.iter().map(|&t| (-sol.rho_integral(t)).exp()).collect(),
        grid,
    })
}

/// Conditional root marginals of the SEIR limit.
#[derive(Debug, Clone)]
pub struct SeirMarginals {
    pub ks: Vec<usize>,
    pub grid: Vec<f64>,
    pub q_ss: Vec<Vec<f64>>,
    pub q_se: Vec<Vec<f64>>,
    pub q_si: Vec<Vec<f64>>,
    pub q_ee: Vec<f64>,
    pub q_ei: Vec<f64>,
    pub q_ii: Vec<f64>,
}

/// Integrates the linear per-degree system for the SEIR root marginals with
/// the solved `g_I` as forcing.
pub fn seir_marginals(sol: &LimitSolution, ks: &[usize]) -> Result<SeirMarginals> {
    let Some(lambda) = sol.lambda.as_ref().filter(|_| sol.model == LimitModel::Seir) else {
        return Err(Error::invalid("seir_marginals needs a SEIR solution"));
    };
    let m = ks.len();
    // layout: Q_SS;k, Q_SE;k, Q_SI;k for each k, then Q_EE, Q_EI, Q_II
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let b = sol.beta.evaluate(t);
        let r = sol.rho.evaluate(t);
        let l = lambda.evaluate(t);
        let gi = sol.neighbor_i(t);
        for (j, &k) in ks.iter().enumerate() {
            let infect = b * k as f64 * gi * y[j];
            dy[j] = -infect;
            dy[m + j] = infect - l * y[m + j];
            dy[2 * m + j] = l * y[m + j] - r * y[2 * m + j];
        }
        dy[3 * m] = -l * y[3 * m];
        dy[3 * m + 1] = l * y[3 * m] - r * y[3 * m + 1];
        dy[3 * m + 2] = -r * y[3 * m + 2];
    };
    let mut y0 = vec![0.0; 3 * m + 3];
    y0[..m].fill(1.0);
    y0[3 * m] = 1.0;
    y0[3 * m + 2] = 1.0;
    let opts = rk_options(sol.rk_tol);
    let q = integrate(rhs, 0.0, &y0, sol.horizon(), &opts, |_, _| false)?;
    let grid = sol.grid();
    let series = |i: usize| grid.iter().map(|&t| q.eval_component(t, i)).collect::<Vec<_>>();
    Ok(SeirMarginals {
        ks: ks.to_vec(),
        q_ss: (0..m).map(series).collect(),
        q_se: (0..m).map(|j| series(m + j)).collect(),
        q_si: (0..m).map(|j| series(2 * m + j)).collect(),
        q_ee: series(3 * m),
        q_ei: series(3 * m + 1),
        q_ii: series(3 * m + 2),
        grid,
    })
}

/// Closed-form `P_{S,S}(t)` on the infinite line (2-regular tree) with
/// constant infection rate `b` and recovery rate `r`.
pub fn line_graph_pss(t: f64, s0: f64, b: f64, r: f64) -> f64 {
    let i0 = 1.0 - s0;
    let q = r / b;
    (((i0 * (-t * (b * i0 + r)).exp()) + q) / (i0 + q)).powi(2)
}

/// `lim_{t -> inf} s0 P_{S,S}(t)` on the line.
pub fn line_graph_final_s(s0: f64, b: f64, r: f64) -> f64 {
    s0 * (1.0 / (1.0 + (1.0 - s0) * b / r)).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64) -> RateFunction {
        RateFunction::constant(v).unwrap()
    }

    #[test]
    fn two_regular_keeps_f_s_constant() {
        let theta = DegreeDistribution::point_mass(2);
        let sol = solve_sir_limit(&theta, &constant(1.0), &constant(1.0), 0.9, 20.0, 1e-10).unwrap();
        for t in [0.0, 1.0, 5.0, 20.0] {
            assert!((sol.neighbor_s(t) - 0.9).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_horizon_is_initial_condition() {
        let theta = DegreeDistribution::poisson(2.0).unwrap();
        let sol = solve_sir_limit(&theta, &constant(1.0), &constant(1.0), 0.8, 0.0, 1e-9).unwrap();
        assert_eq!(sol.neighbor_s(0.0), 0.8);
        assert!((sol.neighbor_i(0.0) - 0.2).abs() < 1e-15);
        assert_eq!(sol.pressure(0.0), 0.0);
        assert_eq!(sol.grid(), vec![0.0]);
    }

    #[test]
    fn long_horizon_dies_out() {
        let theta = DegreeDistribution::point_mass(3);
        let sol = solve_sir_limit(&theta, &constant(1.0), &constant(0.5), 0.99, 50.0, 1e-9).unwrap();
        assert!(sol.neighbor_i(50.0) < 1e-6);
        assert!(sol.pressure(50.0).is_finite() && sol.pressure(50.0) > 0.0);
    }

    #[test]
    fn seir_initial_values() {
        let theta = DegreeDistribution::point_mass(3);
        let sol = solve_seir_limit(
            &theta,
            &constant(1.0),
            &constant(1.0),
            &constant(2.0),
            0.9,
            0.06,
            0.04,
            10.0,
            1e-9,
        )
        .unwrap();
        assert_eq!(sol.neighbor_s(0.0), 0.9);
        assert_eq!(sol.neighbor_e(0.0), 0.06);
        assert_eq!(sol.neighbor_i(0.0), 0.04);
        assert_eq!(sol.pressure(0.0), 0.0);
    }

    #[test]
    fn line_graph_formula() {
        assert!((line_graph_pss(0.0, 0.7, 0.3, 2.0) - 1.0).abs() < 1e-15);
        assert!((line_graph_pss(1e6, 0.9, 1.0, 1.0) - 1.0 / 1.21).abs() < 1e-12);
        assert!((line_graph_final_s(0.9, 1.0, 1.0) - 0.743801652892562).abs() < 1e-12);
    }

    #[test]
    fn csv_headers() {
        let theta = DegreeDistribution::point_mass(3);
        let sol = solve_sir_limit(&theta, &constant(1.0), &constant(1.0), 0.9, 1.0, 1e-8).unwrap();
        let mut buf = Vec::new();
        sol.write_csv(&mut buf, Some(&[0.0, 0.5])).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,f_S,f_I,F_I,s_inf,i_inf");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,0.9,0.1,0,0.9,0.1"));
    }

    #[test]
    fn wrong_model_for_marginals() {
        let theta = DegreeDistribution::point_mass(3);
        let sol = solve_sir_limit(&theta, &constant(1.0), &constant(1.0), 0.9, 1.0, 1e-8).unwrap();
        assert!(seir_marginals(&sol, &[3]).is_err());
        assert!(sir_marginals(&sol, &[3]).is_ok());
    }
}
