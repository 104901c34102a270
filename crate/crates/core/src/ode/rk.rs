//! Dormand–Prince 5(4) with step-size control and continuous output.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense output weights (Hairer, Nørsett & Wanner)
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy)]
pub struct RkOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest step before the integration is declared failed.
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl RkOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            ..Self::default()
        }
    }
}

impl Default for RkOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-9,
            h_min: 1e-14,
            h_max: 1.0,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone)]
struct Step {
    t: f64,
    h: f64,
    /// Interpolation coefficients, `5 * dim` values.
    coeffs: Vec<f64>,
}

/// A solution on `[t_start, t_end]` that can be evaluated at any time.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    dim: usize,
    t_start: f64,
    y_start: Vec<f64>,
    steps: Vec<Step>,
    t_end: f64,
    y_end: Vec<f64>,
}

impl DenseSolution {
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn t_start(&self) -> f64 {
        self.t_start
    }
    pub fn t_end(&self) -> f64 {
        self.t_end
    }
    pub fn y_end(&self) -> &[f64] {
        &self.y_end
    }

    /// Accepted step boundaries, including both endpoints.
    pub fn knots(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.steps.iter().map(|s| s.t).collect();
        out.push(self.t_end);
        out
    }

    /// Component `i` at time `t`, clamped to the solved interval.
    pub fn eval_component(&self, t: f64, i: usize) -> f64 {
        if self.steps.is_empty() || t <= self.t_start {
            return self.y_start[i];
        }
        if t >= self.t_end {
            return self.y_end[i];
        }
        let k = self.steps.partition_point(|s| s.t <= t).max(1) - 1;
        let s = &self.steps[k];
        let theta = (t - s.t) / s.h;
        let theta1 = 1.0 - theta;
        let c = &s.coeffs[5 * i..5 * i + 5];
        c[0] + theta * (c[1] + theta1 * (c[2] + theta * (c[3] + theta1 * c[4])))
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        (0..self.dim).map(|i| self.eval_component(t, i)).collect()
    }
}

fn err_norm(err: &[f64], y0: &[f64], y1: &[f64], opts: &RkOptions) -> f64 {
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let sc = opts.atol + opts.rtol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (sum / err.len() as f64).sqrt()
}

/// Integrate `y' = f(t, y)` from `t0` to `t_end`. After every accepted step
/// `stop(t, y)` is consulted; returning `true` ends the integration there.
pub fn integrate<F, S>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: &RkOptions,
    mut stop: S,
) -> Result<DenseSolution>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    S: FnMut(f64, &[f64]) -> bool,
{
    let dim = y0.len();
    let mut sol = DenseSolution {
        dim,
        t_start: t0,
        y_start: y0.to_vec(),
        steps: Vec::new(),
        t_end: t0,
        y_end: y0.to_vec(),
    };
    if t_end <= t0 {
        return Ok(sol);
    }

    let mut k = vec![vec![0.0; dim]; 7];
    let mut tmp = vec![0.0; dim];
    let mut y1 = vec![0.0; dim];
    let mut err = vec![0.0; dim];
    let mut y = y0.to_vec();
    let mut t = t0;
    f(t, &y, &mut k[0]);

    // initial step from the scale of y and y'
    let scale = |v: &[f64], y: &[f64]| {
        (v.iter()
            .zip(y)
            .map(|(a, b)| (a / (opts.atol + opts.rtol * b.abs())).powi(2))
            .sum::<f64>()
            / dim as f64)
            .sqrt()
    };
    let d0 = scale(&y, &y);
    let d1 = scale(&k[0], &y);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(opts.h_max).min(t_end - t0);

    let mut steps = 0usize;
    let mut reject_streak = 0usize;
    while t < t_end {
        if steps >= opts.max_steps {
            return Err(Error::Integration {
                last_time: t,
                reason: "step limit exceeded".into(),
            });
        }
        steps += 1;
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let stage = |k: &[Vec<f64>], coef: &[(usize, f64)], tmp: &mut [f64]| {
            for i in 0..dim {
                tmp[i] = y[i] + h * coef.iter().map(|(j, a)| a * k[*j][i]).sum::<f64>();
            }
        };
        stage(&k, &[(0, A21)], &mut tmp);
        f(t + C2 * h, &tmp, &mut k[1]);
        stage(&k, &[(0, A31), (1, A32)], &mut tmp);
        f(t + C3 * h, &tmp, &mut k[2]);
        stage(&k, &[(0, A41), (1, A42), (2, A43)], &mut tmp);
        f(t + C4 * h, &tmp, &mut k[3]);
        stage(&k, &[(0, A51), (1, A52), (2, A53), (3, A54)], &mut tmp);
        f(t + C5 * h, &tmp, &mut k[4]);
        stage(&k, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &mut tmp);
        f(t + h, &tmp, &mut k[5]);
        for i in 0..dim {
            y1[i] = y[i]
                + h * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
        }
        f(t + h, &y1, &mut k[6]);
        for i in 0..dim {
            err[i] = h
                * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
        }
        let en = err_norm(&err, &y, &y1, opts);
        let finite = en.is_finite() && y1.iter().all(|v| v.is_finite());

        if finite && en <= 1.0 {
            let mut coeffs = vec![0.0; 5 * dim];
            for i in 0..dim {
                let ydiff = y1[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                coeffs[5 * i] = y[i];
                coeffs[5 * i + 1] = ydiff;
                coeffs[5 * i + 2] = bspl;
                coeffs[5 * i + 3] = ydiff - h * k[6][i] - bspl;
                coeffs[5 * i + 4] = h
                    * (D1 * k[0][i] + D3 * k[2][i] + D4 * k[3][i] + D5 * k[4][i] + D6 * k[5][i] + D7 * k[6][i]);
            }
            sol.steps.push(Step { t, h, coeffs });
            t = if last { t_end } else { t + h };
            std::mem::swap(&mut y, &mut y1);
            k.swap(0, 6);
            reject_streak = 0;
            let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(opts.h_max);
            if stop(t, &y) {
                break;
            }
        } else {
            reject_streak += 1;
            let fac = if finite { (0.9 * en.powf(-0.2)).clamp(0.1, 0.9) } else { 0.25 };
            h *= fac;
            if h < opts.h_min || reject_streak > 100 {
                return Err(Error::Integration {
                    last_time: t,
                    reason: format!("step size underflow (h = {h:e})"),
                });
            }
        }
    }
    sol.t_end = t;
    sol.y_end = y;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let opts = RkOptions::with_tol(1e-10);
        let sol = integrate(|_, y, dy| dy[0] = -y[0], 0.0, &[1.0], 5.0, &opts, |_, _| false).unwrap();
        assert!((sol.y_end()[0] - (-5.0f64).exp()).abs() < 1e-9);
        for t in [0.0, 0.37, 1.5, 4.99] {
            assert!((sol.eval_component(t, 0) - (-t).exp()).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let opts = RkOptions::with_tol(1e-11);
        let sol = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[0.0, 1.0],
            10.0,
            &opts,
            |_, _| false,
        )
        .unwrap();
        for t in [0.5, 3.3, 7.1, 10.0] {
            assert!((sol.eval_component(t, 0) - t.sin()).abs() < 1e-8);
            assert!((sol.eval_component(t, 1) - t.cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn stop_condition_and_empty_interval() {
        let opts = RkOptions::default();
        let sol = integrate(|_, _, dy| dy[0] = 1.0, 0.0, &[0.0], 100.0, &opts, |_, y| y[0] > 2.0).unwrap();
        assert!(sol.t_end() > 2.0 && sol.t_end() < 100.0);
        let empty = integrate(|_, _, dy| dy[0] = 1.0, 0.0, &[3.0], 0.0, &opts, |_, _| false).unwrap();
        assert_eq!(empty.eval(0.0), vec![3.0]);
        assert_eq!(empty.knots(), vec![0.0]);
    }

    #[test]
    fn blow_up_reports_failure() {
        let opts = RkOptions::default();
        let res = integrate(|_, y, dy| dy[0] = y[0] * y[0], 0.0, &[1.0], 2.0, &opts, |_, _| false);
        match res {
            Err(Error::Integration { last_time, .. }) => assert!(last_time < 1.0 && last_time > 0.9),
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
