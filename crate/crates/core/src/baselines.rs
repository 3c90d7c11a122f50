//! Baseline designs (Hammersley, random Latin hypercube) and the Genz
//! integrand families used to score numerical integration.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::gp::normal_cdf;
use crate::{Design, Error, Result, Rng};

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&q| q * q <= candidate)
            .all(|&q| !candidate.is_multiple_of(q))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Base-`b` radical inverse: the digits of `i` mirrored about the radix point.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
    }
    out
}

/// Hammersley set: point `i` is `(i/n, φ_2(i), φ_3(i), φ_5(i), ...)`.
pub fn hammersley(n: usize, p: usize) -> Result<Design> {
    if n == 0 || p == 0 {
        return Err(Error::domain("hammersley needs n >= 1 and p >= 1"));
    }
    let primes = first_primes(p - 1);
    let mut data = Vec::with_capacity(n * p);
    for i in 0..n {
        data.push(i as f64 / n as f64);
        data.extend(primes.iter().map(|&b| radical_inverse(i as u64, b)));
    }
    Design::from_row_major(n, p, data)
}

/// Random Latin hypercube: each column places one point uniformly inside
/// every bin `[j/n, (j+1)/n)`, in random order.
pub fn random_lhd(n: usize, p: usize, rng: &mut Rng) -> Result<Design> {
    if n == 0 || p == 0 {
        return Err(Error::domain("random_lhd needs n >= 1 and p >= 1"));
    }
    let mut data = vec![0.0; n * p];
    let mut perm: Vec<usize> = (1..=n).collect();
    for k in 0..p {
        perm.shuffle(rng);
        for (i, &pi) in perm.iter().enumerate() {
            let u: f64 = rng.random();
            data[i * p + k] = (pi as f64 - u) / n as f64;
        }
    }
    Design::from_row_major(n, p, data)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenzFamily {
    /// `exp(-a Σ |x_k - d_k|)`
    Continuous,
    /// `exp(-a Σ (x_k - d_k)^2)`
    GaussPeak,
}

pub const DEFAULT_GENZ_SCALE: f64 = 5.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrandSpec {
    pub family: GenzFamily,
    pub d: Vec<f64>,
    pub scale: f64,
}

impl IntegrandSpec {
    pub fn new(family: GenzFamily, d: Vec<f64>) -> Result<Self> {
        if d.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::domain("Genz location parameters must lie in [0, 1]"));
        }
        Ok(IntegrandSpec {
            family,
            d,
            scale: DEFAULT_GENZ_SCALE,
        })
    }

    /// Location drawn i.i.d. uniform on `[0, 1]^p`.
    pub fn random(family: GenzFamily, p: usize, rng: &mut Rng) -> Self {
        IntegrandSpec {
            family,
            d: (0..p).map(|_| rng.random()).collect(),
            scale: DEFAULT_GENZ_SCALE,
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }
}

pub fn genz_value(x: &[f64], spec: &IntegrandSpec) -> f64 {
    let a = spec.scale;
    let s: f64 = match spec.family {
        GenzFamily::Continuous => x.iter().zip(&spec.d).map(|(x, d)| a * (x - d).abs()).sum(),
        GenzFamily::GaussPeak => x
            .iter()
            .zip(&spec.d)
            .map(|(x, d)| a * (x - d) * (x - d))
            .sum(),
    };
    (-s).exp()
}

/// Exact integral over `[0, 1]^p` (the integrands factorize).
pub fn genz_true_mean(spec: &IntegrandSpec) -> f64 {
    let a = spec.scale;
    spec.d
        .iter()
        .map(|&d| match spec.family {
            GenzFamily::Continuous => (2.0 - (-a * d).exp() - (-a * (1.0 - d)).exp()) / a,
            GenzFamily::GaussPeak => {
                let r = (2.0 * a).sqrt();
                (std::f64::consts::PI / a).sqrt() * (normal_cdf(r * (1.0 - d)) - normal_cdf(-r * d))
            }
        })
        .product()
}

/// `|mean_i f(x_i) - ∫ f|`.
pub fn integration_error(design: &Design, spec: &IntegrandSpec) -> f64 {
    let mean = design.rows().map(|x| genz_value(x, spec)).sum::<f64>() / design.n() as f64;
    (mean - genz_true_mean(spec)).abs()
}
