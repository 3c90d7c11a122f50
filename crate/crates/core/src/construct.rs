//! Building a rotated sphere packing design.
//!
//! 1. scale the lattice so one Voronoi cell has volume `1/n` ([`compute_l`]);
//! 2. enumerate the rotated lattice points that can reach the scaled box
//!    ([`compute_s`], [`enumerate_candidates`]);
//! 3. find a translation leaving exactly `n` points in the box ([`find_delta`]);
//! 4. map those points into `[0, 1]^p` ([`extract`]);
//! 5. repeat with fresh rotations and keep the best ψ ([`generate_rspd`]).

use log::warn;
use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::design::{Design, Provenance};
use crate::lattice::{self, unit_ball_volume, LatticeKind, LatticeSpec};
use crate::rotation::{compose, sample_plan, RotationPlan};
use crate::{seeded_rng, Error, Result, Rng};

/// Values closer than this in one coordinate count as coincident.
pub const PROJECTION_TOL: f64 = 1e-9;

/// Default budget on the number of lattice points the enumeration may visit.
pub const DEFAULT_MAX_CANDIDATES: f64 = 2e7;

#[derive(Clone, Debug)]
pub struct BuildConfig {
    pub max_candidates: f64,
    /// Anchor redraws allowed in [`find_delta`].
    pub delta_retries: usize,
    /// Rotation redraws allowed when a rotation leaves coincident projections.
    pub rotation_retries: usize,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            max_candidates: DEFAULT_MAX_CANDIDATES,
            delta_retries: 256,
            rotation_retries: 16,
        }
    }
}

/// Rotated lattice points that can land in the scaled box for some
/// admissible translation.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub p: usize,
    /// Side of the scaled design box, in lattice units.
    pub l: f64,
    /// Bound on every integer coefficient.
    pub s: usize,
    /// `(2s+1)^p`, the size of the full factorial coefficient grid.
    pub grid_size: f64,
    /// Row-major `m x p` matrix of retained points `f^T G R`.
    points: Vec<f64>,
    pub lattice: LatticeSpec,
    pub rotation: DMatrix<f64>,
    /// Every column of the retained points has pairwise-distinct entries.
    pub projections_ok: bool,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.points.len() / self.p
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.p..(i + 1) * self.p]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.p)
    }

    /// Number of points `e` with `e + delta` in `[-l/2, l/2]^p`.
    pub fn count(&self, delta: &[f64]) -> usize {
        let h = self.l / 2.0;
        self.points()
            .filter(|e| e.iter().zip(delta).all(|(x, d)| (x + d).abs() <= h))
            .count()
    }
}

/// Box side `l = (n Ω_p / Θ)^{1/p} ρ_c`; equivalently `l^p = n |det G|`.
pub fn compute_l(p: usize, n: usize, lat: &LatticeSpec) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("run size must be at least 1"));
    }
    if p != lat.p {
        return Err(Error::domain(format!(
            "lattice has dimension {}, requested {p}",
            lat.p
        )));
    }
    let omega = unit_ball_volume(p)?;
    Ok((n as f64 * omega / lat.theta).powf(1.0 / p as f64) * lat.rho_c)
}

/// Coefficient bound `s = ceil((l √p / 2 + ρ_c) / min_j |η_j|)`.
pub fn compute_s(p: usize, l: f64, lat: &LatticeSpec) -> Result<usize> {
    if l.is_nan() || l <= 0.0 {
        return Err(Error::domain("box side must be positive"));
    }
    let bound = (l * (p as f64).sqrt() / 2.0 + lat.rho_c) / lat.min_eta();
    Ok(bound.ceil() as usize)
}

/// Estimated number of lattice points visited when enumerating with
/// coefficient bound `s` around a box of side `l`.
pub fn estimated_search_size(lat: &LatticeSpec, l: f64, s: usize) -> f64 {
    let p = lat.p as i32;
    let grid = (2.0 * s as f64 + 1.0).powi(p);
    let radius = (l / 2.0 + lat.rho_c) * (lat.p as f64).sqrt();
    let ball = unit_ball_volume(lat.p).unwrap_or(f64::INFINITY) * radius.powi(p) / lat.det_abs;
    grid.min(ball)
}

/// Enumerates `f^T G R` for `f ∈ {-s..s}^p`, keeping the points inside
/// `[-l/2 - ρ_c, l/2 + ρ_c]^p`.
///
/// The search walks the coefficients depth-first over a triangular factor of
/// `(G R)^T`, pruning any branch that cannot reach the ball circumscribing
/// the slab; the retained set equals the pruned full factorial.
pub fn enumerate_candidates(
    lat: &LatticeSpec,
    rotation: &DMatrix<f64>,
    l: f64,
    s: usize,
    max_candidates: f64,
) -> Result<CandidateSet> {
    let p = lat.p;
    if rotation.shape() != (p, p) {
        return Err(Error::domain("rotation must be p x p"));
    }
    let estimated = estimated_search_size(lat, l, s);
    if estimated > max_candidates {
        return Err(Error::Resource {
            estimated,
            cap: max_candidates,
        });
    }

    let basis = &lat.generator * rotation;
    let half = l / 2.0 + lat.rho_c;
    let radius = half * (p as f64).sqrt();
    // (G R)^T = Q U, so |f^T G R| = |U f| with U upper triangular.
    let qr = basis.transpose().qr();
    let u = qr.r();

    let mut search = Search {
        basis: &basis,
        u: &u,
        half,
        r2: radius * radius * (1.0 + 1e-12) + 1e-12,
        s: s as i64,
        f: vec![0; p],
        partial: vec![vec![0.0; p]; p + 1],
        used: vec![0.0; p + 1],
        points: Vec::new(),
    };
    search.descend(p - 1);
    let points = search.points;

    let projections_ok = distinct_columns(&points, p, PROJECTION_TOL);
    Ok(CandidateSet {
        p,
        l,
        s,
        grid_size: (2.0 * s as f64 + 1.0).powi(p as i32),
        points,
        lattice: lat.clone(),
        rotation: rotation.clone(),
        projections_ok,
    })
}

/// Depth-first walk over integer coefficients, last coordinate first.
struct Search<'a> {
    basis: &'a DMatrix<f64>,
    /// Upper-triangular factor with `|f^T G R| = |U f|`.
    u: &'a DMatrix<f64>,
    half: f64,
    r2: f64,
    s: i64,
    f: Vec<i64>,
    /// `partial[k] = Σ_{j >= k} f_j v_j`.
    partial: Vec<Vec<f64>>,
    /// `used[k] = Σ_{i >= k} (U f)_i^2`.
    used: Vec<f64>,
    points: Vec<f64>,
}

impl Search<'_> {
    fn descend(&mut self, level: usize) {
        let p = self.f.len();
        let offset: f64 = (level + 1..p)
            .map(|j| self.u[(level, j)] * self.f[j] as f64)
            .sum();
        let diag = self.u[(level, level)];
        let centre = -offset / diag;
        let width = (self.r2 - self.used[level + 1]).max(0.0).sqrt() / diag.abs();
        let lo = ((centre - width).ceil() as i64).max(-self.s);
        let hi = ((centre + width).floor() as i64).min(self.s);
        for fk in lo..=hi {
            self.f[level] = fk;
            let y = offset + diag * fk as f64;
            self.used[level] = self.used[level + 1] + y * y;
            let (head, tail) = self.partial.split_at_mut(level + 1);
            for (c, out) in head[level].iter_mut().enumerate() {
                *out = tail[0][c] + fk as f64 * self.basis[(level, c)];
            }
            if level == 0 {
                let x = &self.partial[0];
                if x.iter().all(|v| v.abs() <= self.half) {
                    self.points.extend_from_slice(x);
                }
            } else {
                self.descend(level - 1);
            }
        }
    }
}

fn distinct_columns(points: &[f64], p: usize, tol: f64) -> bool {
    (0..p).all(|k| {
        let mut col: Vec<f64> = points.chunks_exact(p).map(|r| r[k]).collect();
        col.sort_by(f64::total_cmp);
        col.windows(2).all(|w| w[1] - w[0] > tol)
    })
}

/// Finds a translation `δ` with exactly `n` candidates in the shifted box.
///
/// The count along an axis-parallel line `γ + z e_j` is a step function of
/// `z` whose jumps happen where one candidate's `j`-th coordinate crosses a
/// face of the box; with distinct projections each jump has size one. The
/// search sweeps these events for random anchors `γ` in the ball of radius
/// `ρ_c`, staying inside that ball, and returns the midpoint of the widest
/// interval on which the count is exactly `n`.
pub fn find_delta(
    cand: &CandidateSet,
    n: usize,
    rng: &mut Rng,
    retries: usize,
) -> Result<Vec<f64>> {
    if !cand.projections_ok {
        return Err(Error::Construction(
            "candidate projections are not distinct; rotate the lattice".into(),
        ));
    }
    if n > cand.len() {
        return Err(Error::Construction(format!(
            "only {} candidates for n = {n}",
            cand.len()
        )));
    }
    let p = cand.p;
    let zero = vec![0.0; p];
    if cand.count(&zero) == n && no_point_on_faces(cand, &zero) {
        return Ok(zero);
    }
    let rho = cand.lattice.rho_c;
    let h = cand.l / 2.0;
    let mut events: Vec<(f64, i32)> = Vec::new();

    for attempt in 0..retries.max(1) {
        let gamma = sample_ball(p, rho, rng);
        let j = attempt % p;
        let off_axis: f64 = gamma
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .map(|(_, g)| g * g)
            .sum();
        let chord = (rho * rho - off_axis).max(0.0).sqrt();
        let (zmin, zmax) = (-gamma[j] - chord, -gamma[j] + chord);

        events.clear();
        for e in cand.points() {
            let inside = e
                .iter()
                .zip(&gamma)
                .enumerate()
                .all(|(i, (x, g))| i == j || (x + g).abs() <= h);
            if inside {
                let base = e[j] + gamma[j];
                events.push((-h - base, 1));
                events.push((h - base, -1));
            }
        }
        // Entries sort before exits at equal positions, so a point sitting
        // exactly on a face counts as inside.
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));

        let mut best: Option<(f64, f64)> = None;
        let mut count = 0i64;
        for w in 0..events.len() {
            count += events[w].1 as i64;
            if count != n as i64 || w + 1 == events.len() {
                continue;
            }
            let a = events[w].0.max(zmin);
            let b = events[w + 1].0.min(zmax);
            if b - a > 1e-12 && best.is_none_or(|(ba, bb)| b - a > bb - ba) {
                best = Some((a, b));
            }
        }
        // n = 0 is also reachable outside every event interval.
        if n == 0 && best.is_none() && zmax - zmin > 0.0 {
            let first = events.first().map_or(zmax, |e| e.0);
            if first > zmin {
                best = Some((zmin, first.min(zmax)));
            }
        }
        if let Some((a, b)) = best {
            let mut delta = gamma.clone();
            delta[j] += 0.5 * (a + b);
            if cand.count(&delta) == n {
                return Ok(delta);
            }
        }
    }
    Err(Error::Construction(format!(
        "no translation with exactly {n} points found after {retries} anchors"
    )))
}

fn no_point_on_faces(cand: &CandidateSet, delta: &[f64]) -> bool {
    let h = cand.l / 2.0;
    cand.points().all(|e| {
        e.iter()
            .zip(delta)
            .all(|(x, d)| ((x + d).abs() - h).abs() > 1e-12)
    })
}

fn sample_ball(p: usize, radius: f64, rng: &mut Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..p).map(|_| StandardNormal.sample(rng)).collect();
    let norm = v
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let r = radius * rng.random::<f64>().powf(1.0 / p as f64);
    v.iter_mut().for_each(|x| *x *= r / norm);
    v
}

/// Maps the candidates inside the shifted box to `[0, 1]^p`.
pub fn extract(cand: &CandidateSet, delta: &[f64], n: usize) -> Result<Design> {
    let h = cand.l / 2.0;
    let mut data = Vec::with_capacity(n * cand.p);
    let mut count = 0;
    for e in cand.points() {
        if e.iter().zip(delta).all(|(x, d)| (x + d).abs() <= h) {
            count += 1;
            data.extend(
                e.iter()
                    .zip(delta)
                    .map(|(x, d)| ((x + d) / cand.l + 0.5).clamp(0.0, 1.0)),
            );
        }
    }
    if count != n {
        return Err(Error::Construction(format!(
            "translation leaves {count} points in the box, expected {n}"
        )));
    }
    Design::from_row_major(n, cand.p, data)
}

/// Maximum-projection criterion
/// `ψ = { (n(n-1))^{-1} Σ_{i<j} 1 / Π_k (x_ik - x_jk)^2 }^{1/p}`.
///
/// Summed in log space so near-coincident projections do not overflow.
/// Returns `+inf` when two points share a coordinate value.
pub fn psi(design: &Design) -> f64 {
    let (n, p) = (design.n(), design.p());
    if n < 2 {
        return 0.0;
    }
    let mut logs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        let a = design.row(i);
        for j in i + 1..n {
            let b = design.row(j);
            let mut log_term = 0.0;
            for k in 0..p {
                let d = (a[k] - b[k]).abs();
                if d == 0.0 {
                    return f64::INFINITY;
                }
                log_term -= 2.0 * d.ln();
            }
            logs.push(log_term);
        }
    }
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|v| (v - max).exp()).sum();
    let log_mean = max + sum.ln() - ((n * (n - 1)) as f64).ln();
    (log_mean / p as f64).exp()
}

/// Which lattice [`generate_rspd`] starts from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LatticeChoice {
    /// Magic angle for `p = 2`, `A_p*` otherwise.
    #[default]
    Auto,
    AStar,
    Magic,
}

#[derive(Clone, Debug)]
pub struct RspdOptions {
    pub p: usize,
    pub n: usize,
    /// Number of rotations compared; forced to 1 for the magic lattice.
    pub w: usize,
    pub seed: u64,
    pub lattice: LatticeChoice,
    pub config: BuildConfig,
}

impl RspdOptions {
    pub fn new(p: usize, n: usize) -> Self {
        RspdOptions {
            p,
            n,
            w: 100,
            seed: 0,
            lattice: LatticeChoice::Auto,
            config: BuildConfig::default(),
        }
    }

    pub fn w(mut self, w: usize) -> Self {
        self.w = w;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn lattice(mut self, lattice: LatticeChoice) -> Self {
        self.lattice = lattice;
        self
    }

    fn resolved_lattice(&self) -> Result<LatticeSpec> {
        match (self.lattice, self.p) {
            (LatticeChoice::Auto | LatticeChoice::Magic, 2) => Ok(lattice::magic_lattice_2d()),
            (LatticeChoice::Magic, p) => Err(Error::domain(format!(
                "the magic lattice exists only for p = 2, got p = {p}"
            ))),
            (_, p) => lattice::a_star_lattice(p),
        }
    }
}

/// One finished build before selection.
#[derive(Clone, Debug)]
pub struct Build {
    pub design: Design,
    pub plan: RotationPlan,
    pub delta: Vec<f64>,
    pub psi: f64,
}

/// Runs one build (steps 1-4) from a dedicated random stream.
pub fn build_once(
    lat: &LatticeSpec,
    n: usize,
    random_rotation: bool,
    config: &BuildConfig,
    rng: &mut Rng,
) -> Result<Build> {
    let p = lat.p;
    let l = compute_l(p, n, lat)?;
    let s = compute_s(p, l, lat)?;
    let mut attempt = 0;
    let (plan, cand) = loop {
        let plan = if random_rotation {
            sample_plan(p, rng)
        } else {
            RotationPlan::identity(p)
        };
        let cand = enumerate_candidates(lat, &compose(&plan), l, s, config.max_candidates)?;
        if cand.projections_ok {
            break (plan, cand);
        }
        attempt += 1;
        if !random_rotation || attempt > config.rotation_retries {
            return Err(Error::Construction(
                "lattice projections coincide for every rotation tried".into(),
            ));
        }
        warn!("rotation left coincident projections (p = {p}, n = {n}); resampling");
    };
    let delta = find_delta(&cand, n, rng, config.delta_retries)?;
    let design = extract(&cand, &delta, n)?;
    let psi = psi(&design);
    Ok(Build {
        design,
        plan,
        delta,
        psi,
    })
}

/// Builds a rotated sphere packing design with `n` points in `[0, 1]^p`.
///
/// Candidate `k` draws from `seeded_rng(seed + k)`, so the result does not
/// depend on how the candidates are scheduled; the first candidate with the
/// smallest ψ wins.
pub fn generate_rspd(opts: &RspdOptions) -> Result<Design> {
    if opts.p < 2 {
        return Err(Error::domain("rotated sphere packing designs need p >= 2"));
    }
    if opts.n < 1 {
        return Err(Error::domain("run size must be at least 1"));
    }
    let lat = opts.resolved_lattice()?;
    let magic = lat.kind == LatticeKind::Magic;
    let w = if magic { 1 } else { opts.w.max(1) };

    let l = compute_l(opts.p, opts.n, &lat)?;
    let s = compute_s(opts.p, l, &lat)?;
    let estimated = estimated_search_size(&lat, l, s);
    if estimated > opts.config.max_candidates {
        return Err(Error::Resource {
            estimated,
            cap: opts.config.max_candidates,
        });
    }

    let builds: Vec<Build> = (0..w)
        .into_par_iter()
        .map(|k| {
            let mut rng = seeded_rng(opts.seed.wrapping_add(k as u64));
            build_once(&lat, opts.n, !magic, &opts.config, &mut rng)
        })
        .collect::<Result<_>>()?;

    let best = builds
        .into_iter()
        .reduce(|best, b| if b.psi < best.psi { b } else { best })
        .expect("w >= 1");
    let provenance = Provenance {
        p: opts.p,
        n: opts.n,
        w,
        seed: opts.seed,
        lattice: lat.name().to_string(),
        angles: best.plan.angles().to_vec(),
        delta: best.delta,
        l,
        psi: best.psi,
    };
    Ok(best.design.with_provenance(provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{a_star_lattice, magic_lattice_2d};

    fn magic_candidates(n: usize) -> CandidateSet {
        let lat = magic_lattice_2d();
        let l = compute_l(2, n, &lat).unwrap();
        let s = compute_s(2, l, &lat).unwrap();
        enumerate_candidates(&lat, &DMatrix::identity(2, 2), l, s, DEFAULT_MAX_CANDIDATES).unwrap()
    }

    /// Lattice points of the magic lattice inside the shifted box, found by
    /// scanning a generous coefficient square without any pruning.
    fn brute_count(l: f64, delta: &[f64]) -> usize {
        let g = magic_lattice_2d().generator;
        let mut count = 0;
        for a in -40i32..=40 {
            for b in -40i32..=40 {
                let x = a as f64 * g[(0, 0)] + b as f64 * g[(1, 0)] + delta[0];
                let y = a as f64 * g[(0, 1)] + b as f64 * g[(1, 1)] + delta[1];
                if x.abs() <= l / 2.0 && y.abs() <= l / 2.0 {
                    count += 1;
                }
            }
        }
        count
    }

    fn naive_psi(d: &Design) -> f64 {
        let n = d.n() as f64;
        let mut sum = 0.0;
        for i in 0..d.n() {
            for j in i + 1..d.n() {
                let prod: f64 = (0..d.p())
                    .map(|k| (d.row(i)[k] - d.row(j)[k]).powi(2))
                    .product();
                sum += 1.0 / prod;
            }
        }
        (sum / (n * (n - 1.0))).powf(1.0 / d.p() as f64)
    }

    fn min_distance(d: &Design) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..d.n() {
            for j in i + 1..d.n() {
                let dist: f64 = d
                    .row(i)
                    .iter()
                    .zip(d.row(j))
                    .map(|(a, b)| (a - b).powi(2))
                    .sum();
                best = best.min(dist.sqrt());
            }
        }
        best
    }

    #[test]
    fn scale_examples() {
        let lat = a_star_lattice(2).unwrap();
        assert!((compute_l(2, 20, &lat).unwrap() - 4.161791).abs() < 1e-6);
        assert!(
            ((20.0 * 3f64.sqrt() / 2.0).sqrt() - compute_l(2, 20, &lat).unwrap()).abs() < 1e-12
        );
        assert!((compute_l(2, 1, &lat).unwrap() - 0.9306).abs() < 1e-4);
        assert!(compute_l(2, 0, &lat).is_err());
        assert!(compute_l(3, 5, &lat).is_err());
    }

    #[test]
    fn scale_matches_cell_volume() {
        for p in 2..=10 {
            let lat = a_star_lattice(p).unwrap();
            for n in [1, 7, 10 * p, 333] {
                let l = compute_l(p, n, &lat).unwrap();
                let ratio = l.powi(p as i32) / lat.det_abs;
                assert!((ratio / n as f64 - 1.0).abs() < 1e-10, "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn bound_examples() {
        let lat = magic_lattice_2d();
        let l20 = compute_l(2, 20, &lat).unwrap();
        assert_eq!(compute_s(2, l20, &lat).unwrap(), 5);
        assert_eq!(compute_s(2, 4.28, &lat).unwrap(), 5);
        assert_eq!(
            compute_s(2, compute_l(2, 1, &lat).unwrap(), &lat).unwrap(),
            2
        );
        assert!(compute_s(2, 0.0, &lat).is_err());
        for p in 2..=6 {
            let lat = a_star_lattice(p).unwrap();
            let mut last = 0;
            for n in 1..300 {
                let s = compute_s(p, compute_l(p, n, &lat).unwrap(), &lat).unwrap();
                assert!(s >= last);
                last = s;
            }
        }
    }

    #[test]
    fn worked_example_grid() {
        let cand = magic_candidates(20);
        assert_eq!(cand.s, 5);
        assert_eq!(cand.grid_size, 121.0);
        assert!(cand.len() <= 121);
        assert!(cand.projections_ok);
    }

    #[test]
    fn enumeration_matches_pruned_factorial() {
        for (p, n, seed) in [(2, 20, 0), (3, 30, 1), (4, 17, 2)] {
            let lat = a_star_lattice(p).unwrap();
            let r = compose(&sample_plan(p, &mut seeded_rng(seed)));
            let l = compute_l(p, n, &lat).unwrap();
            let s = compute_s(p, l, &lat).unwrap();
            let cand = enumerate_candidates(&lat, &r, l, s, DEFAULT_MAX_CANDIDATES).unwrap();

            let basis = &lat.generator * &r;
            let half = l / 2.0 + lat.rho_c;
            let side = 2 * s + 1;
            let mut expected = Vec::new();
            for idx in 0..side.pow(p as u32) {
                let mut rem = idx;
                let mut x = vec![0.0; p];
                for row in 0..p {
                    let f = (rem % side) as f64 - s as f64;
                    rem /= side;
                    for c in 0..p {
                        x[c] += f * basis[(row, c)];
                    }
                }
                if x.iter().all(|v| v.abs() <= half) {
                    expected.push(x);
                }
            }
            let mut got: Vec<Vec<f64>> = cand.points().map(<[f64]>::to_vec).collect();
            let key = |a: &Vec<f64>, b: &Vec<f64>| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            };
            got.sort_by(key);
            expected.sort_by(key);
            assert_eq!(got.len(), expected.len(), "p = {p}");
            for (a, b) in got.iter().zip(&expected) {
                for (x, y) in a.iter().zip(b) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn zero_bound_gives_origin() {
        let lat = a_star_lattice(3).unwrap();
        let r = compose(&sample_plan(3, &mut seeded_rng(5)));
        let cand = enumerate_candidates(&lat, &r, 2.0, 0, DEFAULT_MAX_CANDIDATES).unwrap();
        assert_eq!(cand.len(), 1);
        assert!(cand.point(0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unrotated_a3_has_coincident_projections() {
        let lat = a_star_lattice(3).unwrap();
        let l = compute_l(3, 30, &lat).unwrap();
        let s = compute_s(3, l, &lat).unwrap();
        let cand =
            enumerate_candidates(&lat, &DMatrix::identity(3, 3), l, s, DEFAULT_MAX_CANDIDATES)
                .unwrap();
        assert!(!cand.projections_ok);
        let err = find_delta(&cand, 30, &mut seeded_rng(0), 10).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
    }

    #[test]
    fn resource_cap() {
        let lat = a_star_lattice(12).unwrap();
        let l = compute_l(12, 5000, &lat).unwrap();
        let s = compute_s(12, l, &lat).unwrap();
        let err = enumerate_candidates(
            &lat,
            &DMatrix::identity(12, 12),
            l,
            s,
            DEFAULT_MAX_CANDIDATES,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
        let err = generate_rspd(&RspdOptions::new(12, 5000)).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn delta_for_worked_example() {
        let cand = magic_candidates(20);
        let delta = find_delta(&cand, 20, &mut seeded_rng(1), 64).unwrap();
        assert_eq!(cand.count(&delta), 20);
        assert_eq!(brute_count(cand.l, &delta), 20);
        let design = extract(&cand, &delta, 20).unwrap();
        assert_eq!(design.n(), 20);
        assert!(design.in_unit_cube());
        // The published translation, used with the published box side.
        let mut published = cand.clone();
        published.l = 4.28;
        assert_eq!(
            published.count(&[0.037, -0.453]),
            brute_count(4.28, &[0.037, -0.453])
        );
    }

    #[test]
    fn delta_seven_is_attainable_on_grid() {
        let cand = magic_candidates(7);
        let delta = find_delta(&cand, 7, &mut seeded_rng(2), 64).unwrap();
        assert_eq!(brute_count(cand.l, &delta), 7);
        let rho = cand.lattice.rho_c;
        let mut hits = 0;
        for a in 0..400 {
            for b in 0..400 {
                let d = [
                    -rho + 2.0 * rho * (a as f64 + 0.5) / 400.0,
                    -rho + 2.0 * rho * (b as f64 + 0.5) / 400.0,
                ];
                if brute_count(cand.l, &d) == 7 {
                    hits += 1;
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn delta_zero_when_already_exact() {
        let mut cand = magic_candidates(20);
        cand.l = 4.0;
        let n0 = cand.count(&[0.0, 0.0]);
        let delta = find_delta(&cand, n0, &mut seeded_rng(0), 8).unwrap();
        assert_eq!(cand.count(&delta), n0);
    }

    #[test]
    fn delta_rejects_too_many_points() {
        let cand = magic_candidates(5);
        let err = find_delta(&cand, cand.len() + 1, &mut seeded_rng(0), 8).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
    }

    #[test]
    fn extract_centre_and_mismatch() {
        let cand = magic_candidates(20);
        let n0 = cand.count(&[0.0, 0.0]);
        let d = extract(&cand, &[0.0, 0.0], n0).unwrap();
        assert!(d.rows().any(|r| r == [0.5, 0.5]));
        assert!(matches!(
            extract(&cand, &[0.0, 0.0], n0 + 1),
            Err(Error::Construction(_))
        ));
    }

    #[test]
    fn psi_examples() {
        let d = Design::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        assert!((psi(&d) - 0.5f64.sqrt()).abs() < 1e-15);
        let d = Design::from_rows(&[[0.0, 0.0], [0.5, 1.0]]).unwrap();
        assert!((psi(&d) - 2f64.sqrt()).abs() < 1e-14);
        let d = Design::from_rows(&[[0.0, 0.3], [0.0, 1.0]]).unwrap();
        assert_eq!(psi(&d), f64::INFINITY);
    }

    #[test]
    fn psi_matches_naive_loop() {
        let mut rng = seeded_rng(9);
        for p in [2, 3, 5] {
            let data: Vec<f64> = (0..10 * p).map(|_| rng.random::<f64>()).collect();
            let d = Design::from_row_major(10, p, data).unwrap();
            let (a, b) = (psi(&d), naive_psi(&d));
            assert!(((a - b) / b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn psi_survives_tiny_gaps() {
        let d = Design::from_rows(&[[0.0, 0.0], [1e-100, 1e-100], [0.5, 0.7]]).unwrap();
        assert!(naive_psi(&d).is_infinite());
        assert!(psi(&d).is_finite());
    }

    #[test]
    fn magic_designs_meet_basic_invariants() {
        for n in [1, 2, 7, 20, 27, 64] {
            let d = generate_rspd(&RspdOptions::new(2, n)).unwrap();
            assert_eq!(d.n(), n);
            assert!(d.in_unit_cube());
            let prov = d.provenance.as_ref().unwrap();
            assert_eq!(prov.lattice, "magic");
            assert_eq!(prov.w, 1);
            if n >= 2 {
                assert!(min_distance(&d) >= 1.0 / prov.l - 1e-12);
                assert!(distinct_columns(d.as_slice(), 2, PROJECTION_TOL));
                assert!((psi(&d) - prov.psi).abs() == 0.0);
            }
        }
    }

    #[test]
    fn rotated_design_is_deterministic() {
        let opts = RspdOptions::new(3, 30).w(100).seed(4);
        let a = generate_rspd(&opts).unwrap();
        let b = generate_rspd(&opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 30);
        assert!(distinct_columns(a.as_slice(), 3, PROJECTION_TOL));
        assert!(min_distance(&a) >= 1.0 / a.provenance.as_ref().unwrap().l - 1e-12);
    }

    #[test]
    fn best_of_w_minimises_psi() {
        let lat = a_star_lattice(3).unwrap();
        let config = BuildConfig::default();
        let psis: Vec<f64> = (0..8u64)
            .map(|k| {
                build_once(&lat, 25, true, &config, &mut seeded_rng(10 + k))
                    .unwrap()
                    .psi
            })
            .collect();
        let d = generate_rspd(&RspdOptions::new(3, 25).w(8).seed(10)).unwrap();
        let best = psis.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(d.provenance.unwrap().psi, best);
    }

    #[test]
    fn larger_bound_changes_nothing() {
        let mut rng = seeded_rng(77);
        for case in 0..20 {
            let p = 2 + case % 4;
            let n = 5 + (rng.random::<f64>() * 60.0) as usize;
            let lat = a_star_lattice(p).unwrap();
            let r = compose(&sample_plan(p, &mut rng));
            let l = compute_l(p, n, &lat).unwrap();
            let s = compute_s(p, l, &lat).unwrap();
            let small = enumerate_candidates(&lat, &r, l, s, DEFAULT_MAX_CANDIDATES).unwrap();
            let large = enumerate_candidates(&lat, &r, l, s + 2, DEFAULT_MAX_CANDIDATES).unwrap();
            let delta = find_delta(&small, n, &mut rng, 256).unwrap();
            let mut a: Vec<Vec<f64>> = extract(&small, &delta, n)
                .unwrap()
                .rows()
                .map(<[f64]>::to_vec)
                .collect();
            let mut b: Vec<Vec<f64>> = extract(&large, &delta, n)
                .unwrap()
                .rows()
                .map(<[f64]>::to_vec)
                .collect();
            a.sort_by(|x, y| x[0].total_cmp(&y[0]));
            b.sort_by(|x, y| x[0].total_cmp(&y[0]));
            assert_eq!(a, b, "case {case}: p = {p}, n = {n}");
        }
    }

    #[test]
    fn magic_rejects_other_dimensions() {
        let err =
            generate_rspd(&RspdOptions::new(3, 10).lattice(LatticeChoice::Magic)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(generate_rspd(&RspdOptions::new(1, 10)).is_err());
        assert!(generate_rspd(&RspdOptions::new(2, 0)).is_err());
    }
}
