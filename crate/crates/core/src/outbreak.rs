//! Final outbreak sizes: roots of `Psi_r`, the time-varying consistency
//! residual, the effective constant ratio, closed forms on regular graphs and
//! the mean-field comparator.

use serde::{Deserialize, Serialize};

use crate::dist::DegreeDistribution;
use crate::error::{Error, Result};
use crate::harness::fmt_float;
use crate::ode::{seir_to_extinction, sir_to_extinction, LimitOptions, LimitSolution};
use crate::rates::RateFunction;

pub const OUTBREAK_CSV_HEADER: &str = "kappa,r,s0,method,F,s_final,outbreak,residual";

const BISECT_WIDTH: f64 = 1e-13;
const NEWTON_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutbreakMethod {
    ConstantRatioRoot,
    OdeHorizon,
}

impl OutbreakMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ConstantRatioRoot => "constant_ratio_root",
            Self::OdeHorizon => "ode_horizon",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutbreakResult {
    /// Total infection pressure `int_0^inf beta f_I`.
    #[serde(rename = "F")]
    pub pressure: f64,
    pub s_final: f64,
    pub outbreak: f64,
    pub method: OutbreakMethod,
    /// Value of the defining equation at `pressure`.
    pub residual: f64,
}

impl OutbreakResult {
    fn new(theta: &DegreeDistribution, s0: f64, pressure: f64, method: OutbreakMethod, residual: f64) -> Self {
        let s_final = s0 * theta.laplace_unchecked(-pressure);
        Self {
            pressure,
            s_final,
            outbreak: 1.0 - s_final,
            method,
            residual,
        }
    }

    /// Row matching [`OUTBREAK_CSV_HEADER`]; missing `kappa` or `r` are left
    /// empty.
    pub fn csv_row(&self, kappa: Option<usize>, r: Option<f64>, s0: f64) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            kappa.map(|k| k.to_string()).unwrap_or_default(),
            r.map(fmt_float).unwrap_or_default(),
            fmt_float(s0),
            self.method.as_str(),
            fmt_float(self.pressure),
            fmt_float(self.s_final),
            fmt_float(self.outbreak),
            fmt_float(self.residual),
        )
    }
}

fn check_ratio(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("ratio r must be finite and > 0, got {r}")))
    }
}

fn check_s0(s0: f64) -> Result<()> {
    if s0 > 0.0 && s0 < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("s0 must lie in (0, 1), got {s0}")))
    }
}

fn check_kappa(kappa: usize) -> Result<()> {
    if kappa >= 2 {
        Ok(())
    } else {
        Err(Error::invalid(format!("kappa must be >= 2, got {kappa}")))
    }
}

/// `Psi_r(z) = z + log M_theta_hat(-z) - log(1 + r(1 - e^z)) + log s0`, with
/// `+inf` once the logarithm's argument is no longer positive.
pub fn psi_r(z: f64, r: f64, s0: f64, theta_hat: &DegreeDistribution) -> f64 {
    let arg = 1.0 - r * z.exp_m1();
    if arg <= 0.0 {
        return f64::INFINITY;
    }
    z + theta_hat.log_laplace_neg(z) - arg.ln() + s0.ln()
}

/// `d/dz Psi_r(z) = 1 - Phi(z) + r e^z / (1 + r(1 - e^z))`.
pub fn psi_r_derivative(z: f64, r: f64, theta_hat: &DegreeDistribution) -> f64 {
    let arg = 1.0 - r * z.exp_m1();
    if arg <= 0.0 {
        return f64::INFINITY;
    }
    1.0 - theta_hat.phi(z) + r * z.exp() / arg
}

/// Upper end of the domain of `Psi_r`: `log(1 + 1/r)`.
pub fn psi_r_domain_end(r: f64) -> f64 {
    (1.0 / r).ln_1p()
}

/// Bisection for a sign change of `f` on `[lo, hi]`, with `f(lo) < 0 < f(hi)`
/// or the reverse. With `geometric` the midpoint is taken in log space, which
/// keeps relative accuracy for roots near zero (requires `lo > 0`).
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, geometric: bool) -> Result<f64> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo}, {f_hi}"
        )));
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..2000 {
        let mid = if geometric { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
        let width = if geometric { hi / lo - 1.0 } else { hi - lo };
        if width < BISECT_WIDTH {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A few Newton steps, kept only while they stay in `[lo, hi]` and reduce
/// `|f|`.
fn polish(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, mut x: f64, lo: f64, hi: f64) -> f64 {
    let mut fx = f(x);
    for _ in 0..NEWTON_STEPS {
        let d = df(x);
        if !(d.is_finite() && d != 0.0) || fx == 0.0 {
            break;
        }
        let next = x - fx / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        let f_next = f(next);
        if !(f_next.abs() < fx.abs()) {
            break;
        }
        x = next;
        fx = f_next;
    }
    x
}

/// Outbreak for constant rates with `rho / beta = r`: the unique positive
/// root of `Psi_r`.
pub fn solve_constant_ratio(theta: &DegreeDistribution, r: f64, s0: f64) -> Result<OutbreakResult> {
    check_ratio(r)?;
    check_s0(s0)?;
    let theta_hat = theta.size_biased()?;
    let psi = |z: f64| psi_r(z, r, s0, &theta_hat);
    let end = psi_r_domain_end(r);
    let eps = 1e-12 * end;
    let mut lo = eps;
    if psi(lo) >= 0.0 {
        lo = 0.0;
    }
    // Move inward until the upper end is finite.
    let mut back = eps;
    let mut hi = end - back;
    while !psi(hi).is_finite() && back < 0.5 * end {
        back *= 2.0;
        hi = end - back;
    }
    let z = bisect(psi, lo, hi, false)?;
    let z = polish(psi, |z| psi_r_derivative(z, r, &theta_hat), z, lo, hi);
    Ok(OutbreakResult::new(
        theta,
        s0,
        z,
        OutbreakMethod::ConstantRatioRoot,
        psi(z),
    ))
}

/// `F + log M_theta_hat(-F) - log(1 - e^F A) + log s0` for the removal
/// integral `A`.
fn time_varying_residual(theta_hat: &DegreeDistribution, s0: f64, pressure: f64, removal: f64) -> f64 {
    let arg = 1.0 - pressure.exp() * removal;
    if arg <= 0.0 {
        return f64::INFINITY;
    }
    pressure + theta_hat.log_laplace_neg(pressure) - arg.ln() + s0.ln()
}

/// Outbreak read off a limit solution run to extinction, with the residual
/// of the fixed-point identity.
pub fn outbreak_of_solution(sol: &LimitSolution) -> OutbreakResult {
    let t = sol.horizon();
    let pressure = sol.pressure(t);
    let residual = time_varying_residual(sol.theta_hat(), sol.initial().0, pressure, sol.removal_integral(t));
    OutbreakResult::new(sol.theta(), sol.initial().0, pressure, OutbreakMethod::OdeHorizon, residual)
}

/// Outbreak for general rates, read off the SIR limit at extinction. The
/// residual of the fixed-point identity is reported, not solved.
pub fn solve_time_varying(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    s0: f64,
    opts: &LimitOptions,
) -> Result<OutbreakResult> {
    let sol = sir_to_extinction(theta, beta, rho, s0, opts)?;
    Ok(outbreak_of_solution(&sol))
}

/// Effective ratio `r_hat = A / (1 - e^{-F})` of an already solved SIR limit
/// run to extinction.
pub fn effective_rate_of(sol: &LimitSolution) -> f64 {
    let t = sol.horizon();
    sol.removal_integral(t) / -(-sol.pressure(t)).exp_m1()
}

/// The constant ratio whose outbreak matches the one under `(beta, rho)`.
pub fn effective_rate(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    s0: f64,
    opts: &LimitOptions,
) -> Result<f64> {
    let sol = sir_to_extinction(theta, beta, rho, s0, opts)?;
    Ok(effective_rate_of(&sol))
}

/// SEIR outbreak at extinction of the SEIR limit; the residual uses `g_I` in
/// place of `f_I`.
#[allow(clippy::too_many_arguments)]
pub fn seir_outbreak(
    theta: &DegreeDistribution,
    beta: &RateFunction,
    rho: &RateFunction,
    lambda: &RateFunction,
    s0: f64,
    e0: f64,
    i0: f64,
    opts: &LimitOptions,
) -> Result<OutbreakResult> {
    let sol = seir_to_extinction(theta, beta, rho, lambda, s0, e0, i0, opts)?;
    Ok(outbreak_of_solution(&sol))
}

/// Final susceptible fraction `sigma_kappa` on the random `kappa`-regular
/// graph with ratio `r`.
///
/// For `kappa = 2` this is `s0 r^2 / (r + 1 - s0)^2`. For larger `kappa` it is
/// the root in `(0, s0)` of
/// `phi(z) = z^{(k-2)/k} s0^{2/k} - (1 + r) + r z^{-1/k} s0^{1/k}`, which is
/// decreasing up to its only critical point.
pub fn regular_outbreak(kappa: usize, r: f64, s0: f64) -> Result<f64> {
    check_kappa(kappa)?;
    check_ratio(r)?;
    check_s0(s0)?;
    if kappa == 2 {
        return Ok(s0 * (r / (r + 1.0 - s0)).powi(2));
    }
    let k = kappa as f64;
    let phi = |z: f64| (z.powf((k - 2.0) / k) * s0.powf(2.0 / k) - (1.0 + r)) + r * (s0 / z).powf(1.0 / k);
    let dphi = |z: f64| {
        (k - 2.0) / k * (s0 / z).powf(2.0 / k) - r / k * (s0 / z).powf(1.0 / k) / z
    };
    let z_crit = (r * s0.powf(-1.0 / k) / (k - 2.0)).powf(k / (k - 1.0));
    let hi = z_crit.min(s0);
    let lo = f64::MIN_POSITIVE;
    let z = bisect(phi, lo, hi, true)?;
    Ok(polish(phi, dphi, z, lo, hi))
}

/// Mean-field final susceptible fraction: the root in `(0, s0)` of
/// `s0 e^{kappa (z - 1) / r} - z`.
pub fn mean_field_outbreak(kappa: usize, r: f64, s0: f64) -> Result<f64> {
    check_kappa(kappa)?;
    check_ratio(r)?;
    check_s0(s0)?;
    let c = kappa as f64 / r;
    let f = |z: f64| s0 * (c * (z - 1.0)).exp() - z;
    let df = |z: f64| s0 * c * (c * (z - 1.0)).exp() - 1.0;
    // f(z) >= s0 e^{-c} - z, so anything below s0 e^{-c} is on the positive side.
    let lo = (0.5 * s0 * (-c).exp()).max(f64::MIN_POSITIVE);
    let z = bisect(f, lo, s0, true)?;
    Ok(polish(f, df, z, lo, s0))
}

/// `s0 e^{kappa (z - 1) / r} - z`, exposed for residual checks.
pub fn mean_field_residual(kappa: usize, r: f64, s0: f64, z: f64) -> f64 {
    s0 * (kappa as f64 / r * (z - 1.0)).exp() - z
}
