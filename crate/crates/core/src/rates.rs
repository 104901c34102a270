//! Time-varying transition rates.
//!
//! All kinds are continuous in `t` and bounded away from zero and infinity on
//! `[0, inf)`. Constructors reject parameterizations that would break either
//! property. Interval bounds are exact for every built-in kind and are what
//! the simulator uses to thin a dominating Poisson process.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RateSpec", into = "RateSpec")]
pub struct RateFunction(Kind);

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Constant(f64),
    /// Linear between `(t0, from)` and `(t1, to)`, constant outside.
    Ramp { from: f64, to: f64, t0: f64, t1: f64 },
    /// `base + amplitude * sin((t + phase * period) * 2 pi / period)`.
    Sin { base: f64, amplitude: f64, period: f64, phase: f64 },
    /// Linear interpolation between knots, constant before the first and
    /// after the last one.
    PiecewiseLinear(Vec<(f64, f64)>),
    Quotient(Box<RateFunction>, Box<RateFunction>),
}

/// Config-file representation of a rate function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RateSpec {
    Constant {
        value: f64,
    },
    Ramp {
        from: f64,
        to: f64,
        t0: f64,
        t1: f64,
    },
    Sin {
        base: f64,
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
    Pwl {
        knots: Vec<(f64, f64)>,
    },
    Quotient {
        num: Box<RateSpec>,
        den: Box<RateSpec>,
    },
}

impl TryFrom<RateSpec> for RateFunction {
    type Error = Error;

    fn try_from(spec: RateSpec) -> Result<Self> {
        match spec {
            RateSpec::Constant { value } => RateFunction::constant(value),
            RateSpec::Ramp { from, to, t0, t1 } => RateFunction::ramp(from, to, t0, t1),
            RateSpec::Sin {
                base,
                amplitude,
                period,
                phase,
            } => RateFunction::sinusoidal(base, amplitude, period, phase),
            RateSpec::Pwl { knots } => RateFunction::piecewise_linear(knots),
            RateSpec::Quotient { num, den } => Ok(RateFunction::quotient(
                RateFunction::try_from(*num)?,
                RateFunction::try_from(*den)?,
            )),
        }
    }
}

impl From<RateFunction> for RateSpec {
    fn from(r: RateFunction) -> Self {
        match r.0 {
            Kind::Constant(value) => RateSpec::Constant { value },
            Kind::Ramp { from, to, t0, t1 } => RateSpec::Ramp { from, to, t0, t1 },
            Kind::Sin {
                base,
                amplitude,
                period,
                phase,
            } => RateSpec::Sin {
                base,
                amplitude,
                period,
                phase,
            },
            Kind::PiecewiseLinear(knots) => RateSpec::Pwl { knots },
            Kind::Quotient(n, d) => RateSpec::Quotient {
                num: Box::new((*n).into()),
                den: Box::new((*d).into()),
            },
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RateFunction {
    pub fn constant(value: f64) -> Result<Self> {
        positive("rate", value)?;
        Ok(Self(Kind::Constant(value)))
    }

    pub fn ramp(from: f64, to: f64, t0: f64, t1: f64) -> Result<Self> {
        positive("ramp start value", from)?;
        positive("ramp end value", to)?;
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return Err(Error::invalid(format!("ramp needs t0 < t1, got [{t0}, {t1}]")));
        }
        Ok(Self(Kind::Ramp { from, to, t0, t1 }))
    }

    pub fn sinusoidal(base: f64, amplitude: f64, period: f64, phase: f64) -> Result<Self> {
        positive("sinusoid base", base)?;
        positive("sinusoid period", period)?;
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::invalid(format!("amplitude must be >= 0, got {amplitude}")));
        }
        if amplitude >= base {
            return Err(Error::invalid(format!(
                "amplitude {amplitude} >= base {base} would let the rate reach zero"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::invalid("sinusoid phase must be finite"));
        }
        Ok(Self(Kind::Sin {
            base,
            amplitude,
            period,
            phase,
        }))
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::invalid("piecewise-linear rate needs at least one knot"));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::invalid("knot times must be strictly increasing"));
            }
        }
        for &(t, v) in &knots {
            if !t.is_finite() {
                return Err(Error::invalid("knot times must be finite"));
            }
            positive("knot value", v)?;
        }
        Ok(Self(Kind::PiecewiseLinear(knots)))
    }

    /// Pointwise ratio `num(t) / den(t)`.
    pub fn quotient(num: RateFunction, den: RateFunction) -> Self {
        Self(Kind::Quotient(Box::new(num), Box::new(den)))
    }

    /// `Some(v)` when the rate is the constant `v`.
    pub fn as_constant(&self) -> Option<f64> {
        match self.0 {
            Kind::Constant(v) => Some(v),
            _ => None,
        }
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        match &self.0 {
            Kind::Constant(v) => *v,
            Kind::Ramp { from, to, t0, t1 } => {
                if t <= *t0 {
                    *from
                } else if t >= *t1 {
                    *to
                } else {
                    from + (to - from) * (t - t0) / (t1 - t0)
                }
            }
            Kind::Sin {
                base,
                amplitude,
                period,
                phase,
            } => base + amplitude * ((t + phase * period) * 2.0 * PI / period).sin(),
            Kind::PiecewiseLinear(knots) => pwl_eval(knots, t),
            Kind::Quotient(n, d) => n.evaluate(t) / d.evaluate(t),
        }
    }

    /// A value `>= sup_{[t0, t1]} evaluate`; exact for every built-in kind
    /// except quotients, where it is the ratio of the factor bounds.
    pub fn upper_bound(&self, t0: f64, t1: f64) -> f64 {
        self.bound(t0, t1, true)
    }

    /// A value `<= inf_{[t0, t1]} evaluate`.
    pub fn lower_bound(&self, t0: f64, t1: f64) -> f64 {
        self.bound(t0, t1, false)
    }

    fn bound(&self, t0: f64, t1: f64, upper: bool) -> f64 {
        let pick = |a: f64, b: f64| if upper { a.max(b) } else { a.min(b) };
        match &self.0 {
            Kind::Constant(v) => *v,
            // monotone between the breakpoints, which both lie outside or on
            // the boundary of any interval that contains them
            Kind::Ramp { t0: r0, t1: r1, .. } => {
                let mut b = pick(self.evaluate(t0), self.evaluate(t1));
                for &k in [r0, r1].iter() {
                    if *k > t0 && *k < t1 {
                        b = pick(b, self.evaluate(*k));
                    }
                }
                b
            }
            Kind::Sin {
                base,
                amplitude,
                period,
                phase,
            } => {
                // extremum of sin at fractional cycle 1/4 (max) or 3/4 (min)
                let quarter = if upper { 0.25 } else { 0.75 };
                let first = ((t0 / period + phase - quarter).ceil() + quarter - phase) * period;
                if first <= t1 {
                    if upper {
                        base + amplitude
                    } else {
                        base - amplitude
                    }
                } else {
                    pick(self.evaluate(t0), self.evaluate(t1))
                }
            }
            Kind::PiecewiseLinear(knots) => knots
                .iter()
                .filter(|(t, _)| *t > t0 && *t < t1)
                .fold(pick(self.evaluate(t0), self.evaluate(t1)), |b, (_, v)| {
                    pick(b, *v)
                }),
            Kind::Quotient(n, d) => {
                if upper {
                    n.upper_bound(t0, t1) / d.lower_bound(t0, t1)
                } else {
                    n.lower_bound(t0, t1) / d.upper_bound(t0, t1)
                }
            }
        }
    }
}

fn pwl_eval(knots: &[(f64, f64)], t: f64) -> f64 {
    let (first, last) = (knots[0], knots[knots.len() - 1]);
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    let i = knots.partition_point(|(k, _)| *k <= t);
    let (ta, va) = knots[i - 1];
    let (tb, vb) = knots[i];
    va + (vb - va) * (t - ta) / (tb - ta)
}

/// `numerator(t) / denominator(t)`.
pub fn ratio(numerator: &RateFunction, denominator: &RateFunction, t: f64) -> f64 {
    numerator.evaluate(t) / denominator.evaluate(t)
}
