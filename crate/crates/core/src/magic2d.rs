//! The two-dimensional magic angle.
//!
//! With the magic generator `G_2` and no rotation, differences between design
//! points are lattice vectors `f^T G_2 / l`. The vectors that come closest to
//! the first axis while staying short along it are the *minimum vectors*
//! `y_1, y_2, ...`; they control how close two points can be in one
//! coordinate and give the quasi-Latin-hypercube gap bounds checked here.

use nalgebra::DMatrix;

use crate::construct::{generate_rspd, RspdOptions};
use crate::lattice::magic_lattice_2d;
use crate::{Design, Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Minimum vector `y_k`, already divided by the box side `l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimumVector {
    pub k: usize,
    pub y: [f64; 2],
}

/// Closed-form minimum vectors `y_1..y_{k_max}` scaled by `1/l`.
///
/// Odd `k = 2m+1`: `(-(√3+1)^k, (√3-1)^k) / 2^{m+3/2} / l`;
/// even `k = 2m+2`: `((√3+1)^k, (√3-1)^k) / 2^{m+3/2} / l`.
pub fn minimum_vectors(k_max: usize, l: f64) -> Result<Vec<MinimumVector>> {
    if k_max < 1 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    if l.is_nan() || l <= 0.0 {
        return Err(Error::domain("box side must be positive"));
    }
    (1..=k_max)
        .map(|k| {
            let m = (k - 1) / 2;
            let scale = 2f64.powf(m as f64 + 1.5) * l;
            let big = (SQRT3 + 1.0).powi(k as i32) / scale;
            let small = (SQRT3 - 1.0).powi(k as i32) / scale;
            if !big.is_finite() || small == 0.0 {
                return Err(Error::domain(format!(
                    "minimum vector y_{k} is outside the representable range"
                )));
            }
            let first = if k % 2 == 1 { -big } else { big };
            Ok(MinimumVector {
                k,
                y: [first, small],
            })
        })
        .collect()
}

/// Integer coefficients `f_k` with `y_k = f_k^T G_2 / l`, from
/// `f_1 = (0, 1)`, `f_2 = (-1, -3)`, `f_{2k+1} = f_{2k-1} - f_{2k}` and
/// `f_{2k+2} = f_{2k} - 2 f_{2k+1}`.
pub fn minimum_vector_coefficients(k_max: usize) -> Vec<[i64; 2]> {
    let mut f: Vec<[i64; 2]> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let next = match k {
            1 => [0, 1],
            2 => [-1, -3],
            _ if k % 2 == 1 => {
                let (a, b) = (f[k - 3], f[k - 2]);
                [a[0] - b[0], a[1] - b[1]]
            }
            _ => {
                let (a, b) = (f[k - 3], f[k - 2]);
                [a[0] - 2 * b[0], a[1] - 2 * b[1]]
            }
        };
        f.push(next);
    }
    f
}

/// Brute-force check of the minimum-vector property for the magic lattice:
/// for every nonzero `f_0` in `{-f_bound..f_bound}^2` and every `k <= k_max`,
/// `|x_{0,1}| < |y_{k,1}|` implies `|x_{0,2}| > y_{k,2}`, where
/// `x_0 = f_0^T G_2 / l`.
pub fn verify_prop1(k_max: usize, f_bound: i64, l: f64) -> bool {
    verify_prop1_for(&magic_lattice_2d().generator, k_max, f_bound, l)
}

/// Same check with an arbitrary generator in place of `G_2`; the minimum
/// vectors stay those of the magic lattice.
pub fn verify_prop1_for(generator: &DMatrix<f64>, k_max: usize, f_bound: i64, l: f64) -> bool {
    let Ok(ys) = minimum_vectors(k_max, l) else {
        return false;
    };
    // Relative slack on the hypothesis so that x_0 = ±y_k, which meets it
    // with equality, is not misread as a counterexample after rounding.
    const SLACK: f64 = 1e-9;
    for a in -f_bound..=f_bound {
        for b in -f_bound..=f_bound {
            if a == 0 && b == 0 {
                continue;
            }
            let x1 = (a as f64 * generator[(0, 0)] + b as f64 * generator[(1, 0)]) / l;
            let x2 = (a as f64 * generator[(0, 1)] + b as f64 * generator[(1, 1)]) / l;
            for y in &ys {
                if x1.abs() < y.y[0].abs() * (1.0 - SLACK) && x2.abs() <= y.y[1] {
                    return false;
                }
            }
        }
    }
    true
}

/// Smallest and largest gap between consecutive sorted values of one
/// coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapStats {
    pub min_gap: f64,
    pub max_gap: f64,
}

/// Gap statistics of coordinate `coord` (0-based).
pub fn gap_stats(design: &Design, coord: usize) -> Result<GapStats> {
    if design.n() < 2 {
        return Err(Error::domain("gap statistics need at least two points"));
    }
    if coord >= design.p() {
        return Err(Error::domain(format!(
            "coordinate {coord} out of range for p = {}",
            design.p()
        )));
    }
    let mut col = design.column(coord);
    col.sort_by(f64::total_cmp);
    let (min_gap, max_gap) = col
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), g| {
            (lo.min(g), hi.max(g))
        });
    Ok(GapStats { min_gap, max_gap })
}

/// Quasi-Latin-hypercube bounds `(√3/6 / n, (2√3/3 + 1) / n)` on the
/// one-dimensional gaps of a magic-angle design.
pub fn gap_bounds(n: usize) -> (f64, f64) {
    let n = n as f64;
    (SQRT3 / 6.0 / n, (2.0 * SQRT3 / 3.0 + 1.0) / n)
}

/// Tolerance applied to [`gap_bounds`] when checking designs.
pub const GAP_TOL: f64 = 1e-9;

/// Gap check of one coordinate of one design.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapCheck {
    pub n: usize,
    pub coord: usize,
    pub stats: GapStats,
    pub ok: bool,
}

/// Checks both coordinates of `design` against [`gap_bounds`].
pub fn check_gaps(design: &Design) -> Result<Vec<GapCheck>> {
    let n = design.n();
    let (lo, hi) = gap_bounds(n);
    (0..design.p())
        .map(|coord| {
            let stats = gap_stats(design, coord)?;
            let ok = stats.min_gap >= lo - GAP_TOL && stats.max_gap <= hi + GAP_TOL;
            Ok(GapCheck {
                n,
                coord,
                stats,
                ok,
            })
        })
        .collect()
}

/// Builds the magic-angle design for every `n` in `ns` and checks its gaps.
pub fn gap_sweep(ns: impl IntoIterator<Item = usize>, seed: u64) -> Result<Vec<GapCheck>> {
    let mut out = Vec::new();
    for n in ns {
        let design = generate_rspd(&RspdOptions::new(2, n).seed(seed))?;
        out.extend(check_gaps(&design)?);
    }
    Ok(out)
}
