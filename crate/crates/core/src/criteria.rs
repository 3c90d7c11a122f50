//! Distance, projection and discrepancy criteria for arbitrary designs.

use std::collections::BTreeMap;

use rand::Rng as _;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::baselines::radical_inverse;
use crate::{Design, Error, Result, Rng};

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Smallest Euclidean distance between two design points.
pub fn min_pairwise_distance(design: &Design) -> Result<f64> {
    let n = design.n();
    if n < 2 {
        return Err(Error::domain("minimum distance needs at least two points"));
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        let a = design.row(i);
        for j in i + 1..n {
            best = best.min(sq_dist(a, design.row(j)));
        }
    }
    Ok(best.sqrt())
}

fn nearest_distance(design: &Design, z: &[f64]) -> f64 {
    design
        .rows()
        .map(|x| sq_dist(x, z))
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

#[derive(Clone, Debug)]
pub struct FillOptions {
    /// Points per axis of the evaluation grid used when `p <= 3`.
    pub grid_resolution: usize,
    /// Number of shifted Halton points used when `p >= 4`.
    pub samples: usize,
    /// How many of the best starting points are refined by pattern search.
    pub refine_starts: usize,
}

impl Default for FillOptions {
    fn default() -> Self {
        FillOptions {
            grid_resolution: 201,
            samples: 100_000,
            refine_starts: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FillEstimate {
    pub value: f64,
    /// `"grid"` or `"halton"`.
    pub method: &'static str,
    /// Number of starting points evaluated before refinement.
    pub evaluated: usize,
}

/// Lower-bound estimate of the fill distance `sup_z min_x |z - x|` over
/// `[0, 1]^p`.
///
/// Evaluates a regular grid (including the cube's corners) for `p <= 3`, or a
/// randomly shifted Halton set plus all corners for `p >= 4`, then improves
/// the best starts by a compass search that shrinks its step to `1e-9`.
pub fn fill_distance_estimate(design: &Design, opts: &FillOptions, rng: &mut Rng) -> FillEstimate {
    let p = design.p();
    let mut starts: Vec<(f64, Vec<f64>)> = Vec::new();
    let method;
    if p <= 3 {
        method = "grid";
        let res = opts.grid_resolution.max(2);
        let total = res.pow(p as u32);
        for idx in 0..total {
            let mut rem = idx;
            let z: Vec<f64> = (0..p)
                .map(|_| {
                    let v = (rem % res) as f64 / (res - 1) as f64;
                    rem /= res;
                    v
                })
                .collect();
            starts.push((nearest_distance(design, &z), z));
        }
    } else {
        method = "halton";
        let shift: Vec<f64> = (0..p).map(|_| rng.random::<f64>()).collect();
        let primes = crate::baselines::first_primes(p);
        for i in 0..opts.samples {
            let z: Vec<f64> = primes
                .iter()
                .zip(&shift)
                .map(|(&b, s)| (radical_inverse(i as u64 + 1, b) + s).fract())
                .collect();
            starts.push((nearest_distance(design, &z), z));
        }
        if p <= 16 {
            for mask in 0u32..(1 << p) {
                let z: Vec<f64> = (0..p).map(|k| f64::from((mask >> k) & 1)).collect();
                starts.push((nearest_distance(design, &z), z));
            }
        }
    }
    let evaluated = starts.len();
    starts.sort_by(|a, b| b.0.total_cmp(&a.0));
    starts.truncate(opts.refine_starts.max(1));

    let initial_step = if p <= 3 {
        1.0 / (opts.grid_resolution.max(2) - 1) as f64
    } else {
        0.5 / (opts.samples.max(1) as f64).powf(1.0 / p as f64)
    };
    let directions = search_directions(p);
    let value = starts
        .into_iter()
        .map(|(d, z)| compass_search(design, z, d, initial_step, &directions))
        .fold(0.0, f64::max);
    FillEstimate {
        value,
        method,
        evaluated,
    }
}

/// Unit coordinate directions plus the diagonal pairs `±e_i ± e_j`.
fn search_directions(p: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..p {
        for s in [-1.0, 1.0] {
            let mut d = vec![0.0; p];
            d[i] = s;
            dirs.push(d);
        }
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..p {
        for j in i + 1..p {
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut d = vec![0.0; p];
                d[i] = a * r;
                d[j] = b * r;
                dirs.push(d);
            }
        }
    }
    dirs
}

fn compass_search(
    design: &Design,
    mut z: Vec<f64>,
    mut best: f64,
    step: f64,
    dirs: &[Vec<f64>],
) -> f64 {
    let mut step = step;
    let mut trial = z.clone();
    while step > 1e-9 {
        let mut improved = false;
        for d in dirs {
            for ((t, zi), di) in trial.iter_mut().zip(&z).zip(d) {
                *t = (zi + step * di).clamp(0.0, 1.0);
            }
            let v = nearest_distance(design, &trial);
            if v > best {
                best = v;
                z.copy_from_slice(&trial);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Calls `f` with every `h`-subset of `0..p` in lexicographic order.
pub(crate) fn for_each_subset(p: usize, h: usize, mut f: impl FnMut(&[usize])) {
    if h > p {
        return;
    }
    let mut idx: Vec<usize> = (0..h).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..h).rev().find(|&i| idx[i] != i + p - h) else {
            return;
        };
        idx[pos] += 1;
        for i in pos + 1..h {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// Number of `h`-subsets of `p` coordinates.
pub fn subset_count(p: usize, h: usize) -> f64 {
    if h > p {
        return 0.0;
    }
    (0..h).fold(1.0, |acc, i| acc * (p - i) as f64 / (i + 1) as f64)
}

/// Projected minimum distance
/// `min_u { 2/(n(n-1)) Σ_{i<j} |x_i - x_j|_u^{-2h} }^{-1/(2h)}` over all
/// `h`-dimensional coordinate projections `u`. Coincident projected points
/// give 0.
pub fn proj_min_distance(design: &Design, h: usize) -> Result<f64> {
    let (n, p) = (design.n(), design.p());
    if h < 1 || h > p {
        return Err(Error::domain(format!(
            "projection dimension must be in 1..={p}, got {h}"
        )));
    }
    if n < 2 {
        return Err(Error::domain(
            "projected distance needs at least two points",
        ));
    }
    let pairs = (n * (n - 1) / 2) as f64;
    let mut best = f64::INFINITY;
    for_each_subset(p, h, |u| {
        // Log-sum-exp of -h * ln(d^2) keeps near-coincident pairs finite.
        let mut logs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            let a = design.row(i);
            for j in i + 1..n {
                let b = design.row(j);
                let d2: f64 = u.iter().map(|&k| (a[k] - b[k]).powi(2)).sum();
                logs.push(-(h as f64) * d2.ln());
            }
        }
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let value = if max == f64::INFINITY {
            0.0
        } else {
            let lse = max + logs.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
            (-(lse - pairs.ln()) / (2.0 * h as f64)).exp()
        };
        best = best.min(value);
    });
    Ok(best)
}

/// Centered L2 discrepancy (square root of Hickernell's closed form).
pub fn centered_l2_discrepancy(design: &Design) -> f64 {
    let (n, p) = (design.n() as f64, design.p());
    let single: f64 = design
        .rows()
        .map(|x| {
            x.iter()
                .map(|&v| {
                    let a = (v - 0.5).abs();
                    1.0 + 0.5 * a - 0.5 * a * a
                })
                .product::<f64>()
        })
        .sum();
    let mut double = 0.0;
    for xi in design.rows() {
        for xj in design.rows() {
            double += xi
                .iter()
                .zip(xj)
                .map(|(&a, &b)| {
                    1.0 + 0.5 * (a - 0.5).abs() + 0.5 * (b - 0.5).abs() - 0.5 * (a - b).abs()
                })
                .product::<f64>();
        }
    }
    let sq = (13.0f64 / 12.0).powi(p as i32) - 2.0 / n * single + double / (n * n);
    sq.max(0.0).sqrt()
}

/// Unanchored L2 discrepancy over boxes `[u, v)`, the square root of
/// `12^{-p} - 2^{1-p}/n Σ_i Π_k x_ik (1 - x_ik)
///  + 1/n^2 Σ_{i,j} Π_k min(x_ik, x_jk) (1 - max(x_ik, x_jk))`.
pub fn l2_discrepancy(design: &Design) -> f64 {
    let (n, p) = (design.n() as f64, design.p() as i32);
    let single: f64 = design
        .rows()
        .map(|x| x.iter().map(|&v| v * (1.0 - v)).product::<f64>())
        .sum();
    let mut double = 0.0;
    for xi in design.rows() {
        for xj in design.rows() {
            double += xi
                .iter()
                .zip(xj)
                .map(|(&a, &b)| a.min(b) * (1.0 - a.max(b)))
                .product::<f64>();
        }
    }
    let sq = 12f64.powi(-p) - 2f64.powi(1 - p) / n * single + double / (n * n);
    sq.max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtremeEstimate {
    pub value: f64,
    pub exhaustive: bool,
}

/// Extreme discrepancy `sup |A([u, v)) / n - vol([u, v))|` with box corners
/// restricted to each axis' grid `{0, 1} ∪ {x_ik}`.
///
/// Exhaustive for `p <= 2`. For `p >= 3`, `effort` random grid boxes are each
/// improved by moving one face at a time to its best grid value, which gives
/// a lower bound on the grid supremum.
pub fn extreme_discrepancy_estimate(
    design: &Design,
    effort: usize,
    rng: &mut Rng,
) -> ExtremeEstimate {
    let p = design.p();
    let n = design.n();
    if n == 0 {
        return ExtremeEstimate {
            value: 0.0,
            exhaustive: true,
        };
    }
    let grids: Vec<Vec<f64>> = (0..p)
        .map(|k| {
            let mut g = design.column(k);
            g.push(0.0);
            g.push(1.0);
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        })
        .collect();
    // Grid index of every coordinate value.
    let idx: Vec<Vec<usize>> = design
        .rows()
        .map(|x| {
            x.iter()
                .zip(&grids)
                .map(|(v, g)| g.partition_point(|t| t < v))
                .collect()
        })
        .collect();
    match p {
        1 => exhaustive_1d(&grids[0], &idx, n),
        2 => exhaustive_2d(&grids, &idx, n),
        _ => randomized_search(&grids, &idx, n, effort.max(1), rng),
    }
}

fn exhaustive_1d(g: &[f64], idx: &[Vec<usize>], n: usize) -> ExtremeEstimate {
    let m = g.len();
    let mut prefix = vec![0usize; m + 1];
    for r in idx {
        prefix[r[0] + 1] += 1;
    }
    for i in 0..m {
        prefix[i + 1] += prefix[i];
    }
    let mut best = 0.0f64;
    for a in 0..m {
        for b in a + 1..m {
            let count = prefix[b] - prefix[a];
            best = best.max((count as f64 / n as f64 - (g[b] - g[a])).abs());
        }
    }
    ExtremeEstimate {
        value: best,
        exhaustive: true,
    }
}

fn exhaustive_2d(grids: &[Vec<f64>], idx: &[Vec<usize>], n: usize) -> ExtremeEstimate {
    let (gx, gy) = (&grids[0], &grids[1]);
    let (mx, my) = (gx.len(), gy.len());
    // cum[i][j] = points with x-index < i and y-index < j.
    let w = my + 1;
    let mut cum = vec![0i64; (mx + 1) * w];
    for r in idx {
        cum[(r[0] + 1) * w + r[1] + 1] += 1;
    }
    for i in 1..=mx {
        for j in 1..=my {
            cum[i * w + j] += cum[(i - 1) * w + j] + cum[i * w + j - 1] - cum[(i - 1) * w + j - 1];
        }
    }
    let inv_n = 1.0 / n as f64;
    let mut best = 0.0f64;
    for a in 0..mx {
        for b in a + 1..mx {
            let dx = gx[b] - gx[a];
            let (rb, ra) = (b * w, a * w);
            for c in 0..my {
                let base = cum[rb + c] - cum[ra + c];
                for d in c + 1..my {
                    let count = cum[rb + d] - cum[ra + d] - base;
                    let v = (count as f64 * inv_n - dx * (gy[d] - gy[c])).abs();
                    if v > best {
                        best = v;
                    }
                }
            }
        }
    }
    ExtremeEstimate {
        value: best,
        exhaustive: true,
    }
}

fn box_value(grids: &[Vec<f64>], idx: &[Vec<usize>], n: usize, lo: &[usize], hi: &[usize]) -> f64 {
    let count = idx
        .iter()
        .filter(|r| {
            r.iter()
                .zip(lo.iter().zip(hi))
                .all(|(&i, (&a, &b))| a <= i && i < b)
        })
        .count();
    let vol: f64 = grids
        .iter()
        .zip(lo.iter().zip(hi))
        .map(|(g, (&a, &b))| g[b] - g[a])
        .product();
    (count as f64 / n as f64 - vol).abs()
}

fn randomized_search(
    grids: &[Vec<f64>],
    idx: &[Vec<usize>],
    n: usize,
    effort: usize,
    rng: &mut Rng,
) -> ExtremeEstimate {
    let p = grids.len();
    let mut best = 0.0f64;
    for _ in 0..effort {
        let mut lo = vec![0; p];
        let mut hi = vec![0; p];
        for k in 0..p {
            let m = grids[k].len();
            let a = rng.random_range(0..m - 1);
            let b = rng.random_range(a + 1..m);
            lo[k] = a;
            hi[k] = b;
        }
        let mut current = box_value(grids, idx, n, &lo, &hi);
        loop {
            let before = current;
            for k in 0..p {
                let m = grids[k].len();
                for a in 0..hi[k] {
                    let saved = lo[k];
                    lo[k] = a;
                    let v = box_value(grids, idx, n, &lo, &hi);
                    if v > current {
                        current = v;
                    } else {
                        lo[k] = saved;
                    }
                }
                for b in lo[k] + 1..m {
                    let saved = hi[k];
                    hi[k] = b;
                    let v = box_value(grids, idx, n, &lo, &hi);
                    if v > current {
                        current = v;
                    } else {
                        hi[k] = saved;
                    }
                }
            }
            if current <= before {
                break;
            }
        }
        best = best.max(current);
    }
    ExtremeEstimate {
        value: best,
        exhaustive: false,
    }
}

/// Estimator details attached to one report entry.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct EntryMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jitter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Named criterion values for one design.
///
/// Serializes as `{"<criterion>": value, ..., "meta": {"<criterion>": {...}}}`
/// with keys sorted; non-finite values are written as the strings `"inf"`,
/// `"-inf"` or `"nan"`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CriterionReport {
    pub values: BTreeMap<String, f64>,
    pub meta: BTreeMap<String, EntryMeta>,
}

impl CriterionReport {
    pub fn insert(&mut self, name: impl Into<String>, value: f64) {
        self.values.insert(name.into(), value);
    }

    pub fn insert_with_meta(&mut self, name: impl Into<String>, value: f64, meta: EntryMeta) {
        let name = name.into();
        self.values.insert(name.clone(), value);
        self.meta.insert(name, meta);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }
}

struct JsonNumber(f64);

impl Serialize for JsonNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            v if v.is_finite() => s.serialize_f64(v),
            v if v.is_nan() => s.serialize_str("nan"),
            v if v > 0.0 => s.serialize_str("inf"),
            _ => s.serialize_str("-inf"),
        }
    }
}

impl Serialize for CriterionReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.values.len() + 1))?;
        for (k, v) in &self.values {
            map.serialize_entry(k, &JsonNumber(*v))?;
        }
        map.serialize_entry("meta", &self.meta)?;
        map.end()
    }
}

/// A named entry of the criteria battery.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    MinDist,
    Fill,
    Psi,
    ProjMinDist(usize),
    CenteredL2,
    L2,
    Extreme,
    Imspe,
    ImspeInner,
    MaxImspe(usize),
    GenzContinuous,
    GenzGaussPeak,
}

pub const CRITERION_NAMES: &str =
    "mindist, fill, psi, projmindist:h, cl2c, l2, extreme, imspe, imspe-inner, maximspe:h, genz-continuous, genz-gauss-peak";

impl std::str::FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let with_h = |rest: &str| -> std::result::Result<usize, String> {
            rest.parse::<usize>()
                .ok()
                .filter(|&h| h >= 1)
                .ok_or_else(|| format!("invalid projection dimension in '{s}'"))
        };
        if let Some(rest) = s.strip_prefix("projmindist:") {
            return with_h(rest).map(Criterion::ProjMinDist);
        }
        if let Some(rest) = s.strip_prefix("maximspe:") {
            return with_h(rest).map(Criterion::MaxImspe);
        }
        Ok(match s {
            "mindist" => Criterion::MinDist,
            "fill" => Criterion::Fill,
            "psi" => Criterion::Psi,
            "cl2c" => Criterion::CenteredL2,
            "l2" => Criterion::L2,
            "extreme" => Criterion::Extreme,
            "imspe" => Criterion::Imspe,
            "imspe-inner" => Criterion::ImspeInner,
            "genz-continuous" => Criterion::GenzContinuous,
            "genz-gauss-peak" => Criterion::GenzGaussPeak,
            _ => {
                return Err(format!(
                    "unknown criterion '{s}' (expected one of: {CRITERION_NAMES})"
                ))
            }
        })
    }
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Criterion::MinDist => f.write_str("mindist"),
            Criterion::Fill => f.write_str("fill"),
            Criterion::Psi => f.write_str("psi"),
            Criterion::ProjMinDist(h) => write!(f, "projmindist:{h}"),
            Criterion::CenteredL2 => f.write_str("cl2c"),
            Criterion::L2 => f.write_str("l2"),
            Criterion::Extreme => f.write_str("extreme"),
            Criterion::Imspe => f.write_str("imspe"),
            Criterion::ImspeInner => f.write_str("imspe-inner"),
            Criterion::MaxImspe(h) => write!(f, "maximspe:{h}"),
            Criterion::GenzContinuous => f.write_str("genz-continuous"),
            Criterion::GenzGaussPeak => f.write_str("genz-gauss-peak"),
        }
    }
}

/// Knobs shared by the whole battery.
#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Overrides the tabulated θ for every IMSPE-type entry.
    pub theta: Option<f64>,
    /// Seed for randomized estimators; each entry gets a fresh stream.
    pub seed: u64,
    pub fill: FillOptions,
    /// Random restarts of the extreme-discrepancy search for `p >= 3`.
    pub extreme_effort: usize,
    pub max_subsets: usize,
    pub genz_scale: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            theta: None,
            seed: 0,
            fill: FillOptions::default(),
            extreme_effort: 200,
            max_subsets: crate::gp::DEFAULT_MAX_SUBSETS,
            genz_scale: crate::baselines::DEFAULT_GENZ_SCALE,
        }
    }
}

/// Evaluates `criteria` on `design`.
pub fn evaluate(
    design: &Design,
    criteria: &[Criterion],
    opts: &EvalOptions,
) -> Result<CriterionReport> {
    use crate::baselines::{integration_error, GenzFamily, IntegrandSpec};
    use crate::gp::{self, GpSpec, ProjectionOptions, Region};

    let mut report = CriterionReport::default();
    let seeded = || crate::seeded_rng(opts.seed);
    let gp_spec = |h: usize| -> Result<GpSpec> {
        let theta = match opts.theta {
            Some(t) => t,
            None => gp::theta_default(h)?,
        };
        GpSpec::new(theta)
    };
    for &c in criteria {
        let name = c.to_string();
        match c {
            Criterion::MinDist => report.insert(name, min_pairwise_distance(design)?),
            Criterion::Fill => {
                let est = fill_distance_estimate(design, &opts.fill, &mut seeded());
                let meta = EntryMeta {
                    seed: Some(opts.seed),
                    samples: Some(est.evaluated as u64),
                    method: Some(est.method.to_string()),
                    ..EntryMeta::default()
                };
                report.insert_with_meta(name, est.value, meta);
            }
            Criterion::Psi => report.insert(name, crate::construct::psi(design)),
            Criterion::ProjMinDist(h) => report.insert(name, proj_min_distance(design, h)?),
            Criterion::CenteredL2 => report.insert(name, centered_l2_discrepancy(design)),
            Criterion::L2 => report.insert(name, l2_discrepancy(design)),
            Criterion::Extreme => {
                let est = extreme_discrepancy_estimate(design, opts.extreme_effort, &mut seeded());
                let meta = EntryMeta {
                    seed: Some(opts.seed),
                    samples: (!est.exhaustive).then_some(opts.extreme_effort as u64),
                    exhaustive: Some(est.exhaustive),
                    ..EntryMeta::default()
                };
                report.insert_with_meta(name, est.value, meta);
            }
            Criterion::Imspe | Criterion::ImspeInner => {
                let spec = gp_spec(design.p())?;
                let region = if c == Criterion::Imspe {
                    Region::UNIT
                } else {
                    Region::INNER
                };
                let r = gp::imspe(design, &spec, region)?;
                let meta = EntryMeta {
                    theta: Some(spec.theta),
                    jitter: (r.jitter > 0.0).then_some(r.jitter),
                    warning: r.warning,
                    ..EntryMeta::default()
                };
                report.insert_with_meta(name, r.value, meta);
            }
            Criterion::MaxImspe(h) => {
                let popts = ProjectionOptions {
                    theta: opts.theta,
                    max_subsets: opts.max_subsets,
                };
                let theta = gp_spec(h)?.theta;
                let value = gp::max_proj_imspe(design, h, &popts)?;
                let meta = EntryMeta {
                    theta: Some(theta),
                    ..EntryMeta::default()
                };
                report.insert_with_meta(name, value, meta);
            }
            Criterion::GenzContinuous | Criterion::GenzGaussPeak => {
                let family = if c == Criterion::GenzContinuous {
                    GenzFamily::Continuous
                } else {
                    GenzFamily::GaussPeak
                };
                let spec = IntegrandSpec::random(family, design.p(), &mut seeded())
                    .with_scale(opts.genz_scale);
                let meta = EntryMeta {
                    seed: Some(opts.seed),
                    ..EntryMeta::default()
                };
                report.insert_with_meta(name, integration_error(design, &spec), meta);
            }
        }
    }
    Ok(report)
}
