//! Degree distributions on the nonnegative integers.
//!
//! Every law is stored as a finite pmf vector. Parametric laws (Poisson) are
//! truncated once the remaining tail mass drops below a tolerance and then
//! renormalized, so all sums below are finite and exact on the stored support.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tail mass discarded when truncating a Poisson law.
pub const DEFAULT_TAIL_MASS: f64 = 1e-12;

/// Where a distribution came from. Only used for reporting.
#[derive(Debug, Clone, PartialEq)]
pub enum DistKind {
    PointMass(usize),
    Poisson { mean: f64, tail_mass: f64 },
    Pmf,
    SizeBiased(Box<DistKind>),
}

/// A probability law on `{0, 1, 2, ...}` with finite support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistSpec", into = "DistSpec")]
pub struct DegreeDistribution {
    probs: Vec<f64>,
    kind: DistKind,
}

/// Config-file representation of a degree law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistSpec {
    Poisson { mean: f64 },
    Regular { k: usize },
    Pmf { probs: Vec<f64> },
}

impl TryFrom<DistSpec> for DegreeDistribution {
    type Error = Error;

    fn try_from(spec: DistSpec) -> Result<Self> {
        match spec {
            DistSpec::Poisson { mean } => DegreeDistribution::poisson(mean),
            DistSpec::Regular { k } => Ok(DegreeDistribution::point_mass(k)),
            DistSpec::Pmf { probs } => DegreeDistribution::from_pmf(probs),
        }
    }
}

impl From<DegreeDistribution> for DistSpec {
    fn from(d: DegreeDistribution) -> Self {
        match d.kind {
            DistKind::PointMass(k) => DistSpec::Regular { k },
            DistKind::Poisson { mean, .. } => DistSpec::Poisson { mean },
            _ => DistSpec::Pmf { probs: d.probs },
        }
    }
}

impl DegreeDistribution {
    /// The Dirac law at `k`.
    pub fn point_mass(k: usize) -> Self {
        let mut probs = vec![0.0; k + 1];
        probs[k] = 1.0;
        Self {
            probs,
            kind: DistKind::PointMass(k),
        }
    }

    /// Poisson law with the default truncation tolerance.
    pub fn poisson(mean: f64) -> Result<Self> {
        Self::poisson_truncated(mean, DEFAULT_TAIL_MASS)
    }

    /// Poisson law truncated where the remaining tail mass falls below
    /// `tail_mass`, then renormalized.
    pub fn poisson_truncated(mean: f64, tail_mass: f64) -> Result<Self> {
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::invalid(format!(
                "poisson mean must be positive and finite, got {mean}"
            )));
        }
        if !(tail_mass > 0.0 && tail_mass < 1.0) {
            return Err(Error::invalid(format!(
                "tail mass must lie in (0, 1), got {tail_mass}"
            )));
        }
        let mut probs = Vec::new();
        let mut term = (-mean).exp();
        let mut k = 0usize;
        loop {
            probs.push(term);
            let next = term * mean / (k + 1) as f64;
            // For k + 2 > mean the tail is dominated by a geometric series.
            let ratio = mean / (k + 2) as f64;
            if ratio < 1.0 && next / (1.0 - ratio) < tail_mass {
                break;
            }
            term = next;
            k += 1;
        }
        let mut d = Self {
            probs,
            kind: DistKind::Poisson { mean, tail_mass },
        };
        d.normalize();
        Ok(d)
    }

    /// An explicit pmf, indexed by degree. Entries must be nonnegative and
    /// sum to one within `1e-6`; the vector is renormalized exactly.
    pub fn from_pmf(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("empty pmf"));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::invalid(format!("pmf entry {p} is not a probability")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::invalid(format!("pmf sums to {total}, expected 1")));
        }
        let mut d = Self {
            probs,
            kind: DistKind::Pmf,
        };
        d.normalize();
        Ok(d)
    }

    /// Build from nonnegative weights, normalizing by their sum.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::invalid("weights must have positive finite sum"));
        }
        Self::from_pmf(weights.iter().map(|w| w / total).collect())
    }

    fn normalize(&mut self) {
        while self.probs.len() > 1 && *self.probs.last().unwrap() == 0.0 {
            self.probs.pop();
        }
        let total: f64 = self.probs.iter().sum();
        for p in &mut self.probs {
            *p /= total;
        }
    }

    pub fn kind(&self) -> &DistKind {
        &self.kind
    }

    /// The stored pmf, indexed by degree.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest degree with positive probability.
    pub fn max_degree(&self) -> usize {
        self.probs.len() - 1
    }

    /// Smallest degree with positive probability.
    pub fn min_degree(&self) -> usize {
        self.probs.iter().position(|&p| p > 0.0).unwrap_or(0)
    }

    /// Degrees carrying positive mass.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, _)| k)
    }

    pub fn pmf(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    /// `E[d^p]` for `p` in `{1, 2, 3}`.
    pub fn moment(&self, p: u32) -> Result<f64> {
        if !(1..=3).contains(&p) {
            return Err(Error::invalid(format!("moment order must be 1, 2 or 3, got {p}")));
        }
        Ok(self
            .probs
            .iter()
            .enumerate()
            .map(|(k, &q)| (k as f64).powi(p as i32) * q)
            .sum())
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, &q)| k as f64 * q)
            .sum()
    }

    /// Laplace transform `M(x) = sum_k p(k) e^{kx}` on `x <= 0`.
    pub fn laplace(&self, x: f64) -> Result<f64> {
        check_nonpositive(x)?;
        Ok(self.laplace_unchecked(x))
    }

    /// `M'(x) = sum_k k p(k) e^{kx}` on `x <= 0`.
    pub fn laplace_derivative(&self, x: f64) -> Result<f64> {
        check_nonpositive(x)?;
        Ok(self.laplace_derivative_unchecked(x))
    }

    pub(crate) fn laplace_unchecked(&self, x: f64) -> f64 {
        let w = x.exp();
        // Horner from the top degree down.
        self.probs.iter().rev().fold(0.0, |acc, &p| acc * w + p)
    }

    pub(crate) fn laplace_derivative_unchecked(&self, x: f64) -> f64 {
        let w = x.exp();
        let mut acc = 0.0;
        for (k, &p) in self.probs.iter().enumerate().skip(1).rev() {
            acc = acc * w + k as f64 * p;
        }
        acc * w
    }

    /// `log M(-z)` for `z >= 0`, factoring out the smallest support point so
    /// it does not underflow for large `z`.
    pub fn log_laplace_neg(&self, z: f64) -> f64 {
        let lo = self.min_degree();
        let w = (-z).exp();
        let tail = self.probs[lo..].iter().rev().fold(0.0, |acc, &p| acc * w + p);
        tail.ln() - lo as f64 * z
    }

    /// Size-biased law `p^(k) = (k+1) p(k+1) / E[d]`: the number of further
    /// neighbors of a vertex reached along a uniformly chosen edge.
    pub fn size_biased(&self) -> Result<Self> {
        let mean = self.mean();
        if mean <= 0.0 {
            return Err(Error::invalid(
                "size-biasing requires a law with positive mean",
            ));
        }
        let probs: Vec<f64> = (0..self.probs.len() - 1)
            .map(|k| (k + 1) as f64 * self.probs[k + 1] / mean)
            .collect();
        let mut d = Self {
            probs,
            kind: DistKind::SizeBiased(Box::new(self.kind.clone())),
        };
        d.normalize();
        Ok(d)
    }

    /// `Phi(z) = M'(-z) / M(-z)` for `z >= 0`, the mean of the law tilted by
    /// `e^{-kz}`. Evaluated relative to the smallest support point so that the
    /// ratio stays finite for large `z`.
    pub fn phi(&self, z: f64) -> f64 {
        let lo = self.min_degree();
        let w = (-z).exp();
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, &p) in self.probs[lo..].iter().enumerate().rev() {
            num = num * w + (j + lo) as f64 * p;
            den = den * w + p;
        }
        num / den
    }

    /// Derivative of [`phi`](Self::phi): minus the variance of the tilted law.
    pub fn phi_derivative(&self, z: f64) -> f64 {
        let lo = self.min_degree();
        let w = (-z).exp();
        let (mut m0, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for (j, &p) in self.probs[lo..].iter().enumerate().rev() {
            let k = (j + lo) as f64;
            m0 = m0 * w + p;
            m1 = m1 * w + k * p;
            m2 = m2 * w + k * k * p;
        }
        let mean = m1 / m0;
        -(m2 / m0 - mean * mean)
    }

    /// Total-variation distance `1/2 sum |p - q|`.
    pub fn tv_distance(&self, other: &Self) -> f64 {
        let len = self.probs.len().max(other.probs.len());
        0.5 * (0..len)
            .map(|k| (self.pmf(k) - other.pmf(k)).abs())
            .sum::<f64>()
    }
}

fn check_nonpositive(x: f64) -> Result<()> {
    if x > 0.0 || x.is_nan() {
        Err(Error::invalid(format!(
            "Laplace transform is only defined for x <= 0, got {x}"
        )))
    } else {
        Ok(())
    }
}
