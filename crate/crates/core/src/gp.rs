//! Kriging prediction-error criteria under the Gaussian product correlation
//! `exp(-θ Σ_k (x_k - y_k)^2)` with an unknown constant mean.

use nalgebra::{DMatrix, DVector};
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{for_each_subset, subset_count};
use crate::{Design, Error, Result, Rng};

/// Diagonal jitter tried when the correlation matrix is not numerically
/// positive definite.
pub const DEFAULT_JITTER: f64 = 1e-10;
/// Condition estimate above which a result carries a warning.
pub const CONDITION_WARNING: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GpSpec {
    pub theta: f64,
    pub jitter: f64,
}

impl GpSpec {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::domain(format!(
                "theta must be positive, got {theta}"
            )));
        }
        Ok(GpSpec {
            theta,
            jitter: DEFAULT_JITTER,
        })
    }

    pub fn with_jitter(mut self, jitter: f64) -> Self {
        self.jitter = jitter;
        self
    }

    fn corr(&self, a: &[f64], b: &[f64]) -> f64 {
        let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        (-self.theta * d2).exp()
    }
}

const THETA_TABLE: [f64; 9] = [24.8, 8.6, 4.6, 2.9, 2.0, 1.5, 1.2, 1.0, 0.85];

/// Tabulated correlation decay for `h = 2..=10` active dimensions.
pub fn theta_default(h: usize) -> Result<f64> {
    if (2..=10).contains(&h) {
        Ok(THETA_TABLE[h - 2])
    } else {
        Err(Error::domain(format!(
            "no default theta for {h} dimensions (table covers 2..=10)"
        )))
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Axis-aligned cube `[lo, hi]^p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
}

impl Region {
    pub const UNIT: Region = Region { lo: 0.0, hi: 1.0 };
    pub const INNER: Region = Region { lo: 0.1, hi: 0.9 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::domain(format!("empty region [{lo}, {hi}]")));
        }
        Ok(Region { lo, hi })
    }

    pub fn volume(&self, p: usize) -> f64 {
        (self.hi - self.lo).powi(p as i32)
    }
}

impl Default for Region {
    fn default() -> Self {
        Region::UNIT
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImspeResult {
    pub value: f64,
    /// Diagonal jitter that was needed (0 when none).
    pub jitter: f64,
    pub warning: Option<String>,
}

struct Factor {
    chol: nalgebra::linalg::Cholesky<f64, nalgebra::Dyn>,
    jitter: f64,
    warning: Option<String>,
}

fn correlation_matrix(design: &Design, spec: &GpSpec) -> DMatrix<f64> {
    let n = design.n();
    let mut c = DMatrix::from_element(n, n, 1.0);
    for i in 0..n {
        for j in i + 1..n {
            let v = spec.corr(design.row(i), design.row(j));
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
    }
    c
}

fn factor(c: DMatrix<f64>, spec: &GpSpec) -> Result<Factor> {
    let (chol, jitter) = match c.clone().cholesky() {
        Some(ch) => (ch, 0.0),
        None => {
            let n = c.nrows();
            let jittered = c + DMatrix::identity(n, n) * spec.jitter;
            match jittered.cholesky() {
                Some(ch) => (ch, spec.jitter),
                None => {
                    return Err(Error::Numerical(
                        "correlation matrix is singular even after jitter (coincident points?)"
                            .into(),
                    ))
                }
            }
        }
    };
    let diag = chol.l_dirty().diagonal();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let cond = (hi / lo).powi(2);
    let warning = if jitter > 0.0 || cond > CONDITION_WARNING {
        let msg = format!(
            "correlation matrix is ill-conditioned (estimate {cond:.2e}, jitter {jitter:e})"
        );
        log::warn!("{msg}");
        Some(msg)
    } else {
        None
    };
    Ok(Factor {
        chol,
        jitter,
        warning,
    })
}

/// Exact integrated mean squared prediction error over `region`.
///
/// Uses the closed-form integrals `b_i = ∫ r_i(x) dx` and
/// `B_ij = ∫ r_i(x) r_j(x) dx` and the constant-mean kriging variance
/// `1 - rᵀC⁻¹r + (1 - 1ᵀC⁻¹r)² / 1ᵀC⁻¹1`, which integrates to
/// `V - tr(C⁻¹B) + (V - 2uᵀb + uᵀBu) / q` with `u = C⁻¹1`, `q = 1ᵀu`.
pub fn imspe(design: &Design, spec: &GpSpec, region: Region) -> Result<ImspeResult> {
    let (n, p) = (design.n(), design.p());
    if n == 0 {
        return Err(Error::domain("IMSPE needs a nonempty design"));
    }
    let theta = spec.theta;
    let (a, b) = (region.lo, region.hi);
    let vol = region.volume(p);
    let pi = std::f64::consts::PI;

    let s1 = (2.0 * theta).sqrt();
    let c1 = (pi / theta).sqrt();
    let bvec = DVector::from_iterator(
        n,
        design.rows().map(|x| {
            x.iter()
                .map(|&xk| c1 * (normal_cdf(s1 * (b - xk)) - normal_cdf(s1 * (a - xk))))
                .product::<f64>()
        }),
    );
    let s2 = 2.0 * theta.sqrt();
    let c2 = (pi / (2.0 * theta)).sqrt();
    let mut bmat = DMatrix::zeros(n, n);
    for i in 0..n {
        let xi = design.row(i);
        for j in i..n {
            let xj = design.row(j);
            let v: f64 = xi
                .iter()
                .zip(xj)
                .map(|(&u, &w)| {
                    let m = 0.5 * (u + w);
                    c2 * (-theta * (u - w) * (u - w) / 2.0).exp()
                        * (normal_cdf(s2 * (b - m)) - normal_cdf(s2 * (a - m)))
                })
                .product();
            bmat[(i, j)] = v;
            bmat[(j, i)] = v;
        }
    }

    let f = factor(correlation_matrix(design, spec), spec)?;
    let cinv_b = f.chol.solve(&bmat);
    let trace = cinv_b.trace();
    let u = f.chol.solve(&DVector::from_element(n, 1.0));
    let q = u.sum();
    let correction = (vol - 2.0 * u.dot(&bvec) + (&bmat * &u).dot(&u)) / q;
    Ok(ImspeResult {
        value: vol - trace + correction,
        jitter: f.jitter,
        warning: f.warning,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Kriging variance at `x` from the bordered system
/// `[[0, 1ᵀ], [1, C]]`, `1 - (1, rᵀ) M⁻¹ (1, r)`.
pub struct KrigingVariance<'a> {
    design: &'a Design,
    spec: GpSpec,
    lu: nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl<'a> KrigingVariance<'a> {
    pub fn new(design: &'a Design, spec: &GpSpec) -> Result<Self> {
        let n = design.n();
        if n == 0 {
            return Err(Error::domain("kriging needs a nonempty design"));
        }
        let c = correlation_matrix(design, spec);
        let mut m = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            m[(0, i + 1)] = 1.0;
            m[(i + 1, 0)] = 1.0;
        }
        m.view_mut((1, 1), (n, n)).copy_from(&c);
        let lu = m.lu();
        if !lu.is_invertible() {
            return Err(Error::Numerical(
                "bordered kriging system is singular".into(),
            ));
        }
        Ok(KrigingVariance {
            design,
            spec: *spec,
            lu,
        })
    }

    pub fn at(&self, x: &[f64]) -> f64 {
        let n = self.design.n();
        let mut r = DVector::from_element(n + 1, 1.0);
        for (i, row) in self.design.rows().enumerate() {
            r[i + 1] = self.spec.corr(row, x);
        }
        let sol = self.lu.solve(&r).expect("checked invertible");
        1.0 - r.dot(&sol)
    }
}

/// Monte Carlo IMSPE: region volume times the mean kriging variance at
/// `samples` uniform points.
pub fn imspe_mc(
    design: &Design,
    spec: &GpSpec,
    region: Region,
    samples: usize,
    rng: &mut Rng,
) -> Result<McEstimate> {
    if samples < 1000 {
        return Err(Error::domain(
            "Monte Carlo IMSPE needs at least 1000 samples",
        ));
    }
    let kv = KrigingVariance::new(design, spec)?;
    let p = design.p();
    let vol = region.volume(p);
    let mut x = vec![0.0; p];
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        x.iter_mut()
            .for_each(|v| *v = rng.random_range(region.lo..region.hi));
        let f = kv.at(&x);
        s += f;
        s2 += f * f;
    }
    let mean = s / samples as f64;
    let var = (s2 / samples as f64 - mean * mean).max(0.0);
    Ok(McEstimate {
        estimate: vol * mean,
        std_error: vol * (var / samples as f64).sqrt(),
        samples,
    })
}

pub const DEFAULT_MAX_SUBSETS: usize = 5000;

#[derive(Clone, Copy, Debug)]
pub struct ProjectionOptions {
    /// Overrides the tabulated θ for `h` dimensions.
    pub theta: Option<f64>,
    pub max_subsets: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions {
            theta: None,
            max_subsets: DEFAULT_MAX_SUBSETS,
        }
    }
}

/// Largest IMSPE over all `h`-dimensional coordinate projections, each with
/// `theta_default(h)` unless overridden.
pub fn max_proj_imspe(design: &Design, h: usize, opts: &ProjectionOptions) -> Result<f64> {
    let p = design.p();
    if h < 1 || h > p {
        return Err(Error::domain(format!(
            "projection dimension must be in 1..={p}, got {h}"
        )));
    }
    let theta = match opts.theta {
        Some(t) => t,
        None => theta_default(h)?,
    };
    let count = subset_count(p, h);
    if count > opts.max_subsets as f64 {
        return Err(Error::Resource {
            estimated: count,
            cap: opts.max_subsets as f64,
        });
    }
    let spec = GpSpec::new(theta)?;
    let mut subsets = Vec::new();
    for_each_subset(p, h, |u| subsets.push(u.to_vec()));
    let values = subsets
        .par_iter()
        .map(|u| imspe(&design.project(u), &spec, Region::UNIT).map(|r| r.value))
        .collect::<Result<Vec<f64>>>()?;
    Ok(values.into_iter().fold(f64::NEG_INFINITY, f64::max))
}
