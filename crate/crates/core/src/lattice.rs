//! Lattice generator matrices and the covering constants derived from them.
//!
//! Generator matrices are row-major in the semantic sense: row `i` is the
//! basis vector `v_i`, and lattice points are `f^T G` for integer `f`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest dimension for which `A_p*` is the thinnest known covering.
pub const A_STAR_MAX_DIM: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    /// Dual of the zero-sum root lattice.
    AStar,
    /// Integer lattice `Z^p`.
    Cubic,
    /// The two-dimensional `A_2*` basis at the magic angle.
    Magic,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::AStar => "astar",
            LatticeKind::Cubic => "cubic",
            LatticeKind::Magic => "magic",
        }
    }
}

/// A lattice basis with its packing and covering constants.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub p: usize,
    /// Row `i` is basis vector `v_i`.
    pub generator: DMatrix<f64>,
    /// Packing radius.
    pub rho_p: f64,
    /// Covering radius.
    pub rho_c: f64,
    /// Thickness: covering-ball volume over Voronoi-cell volume.
    pub theta: f64,
    /// Voronoi-cell volume `|det G|`.
    pub det_abs: f64,
    /// Lengths of each basis vector's component orthogonal to the other rows.
    pub eta_norms: Vec<f64>,
}

impl LatticeSpec {
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Density: packing-ball volume over Voronoi-cell volume.
    pub fn density(&self) -> f64 {
        unit_ball_volume(self.p).unwrap_or(f64::NAN) * self.rho_p.powi(self.p as i32) / self.det_abs
    }

    pub fn min_eta(&self) -> f64 {
        self.eta_norms.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Volume of the unit ball in `p` dimensions.
///
/// Uses `Ω_p = Ω_{p-2} · 2π / p` from `Ω_0 = 1`, `Ω_1 = 2`, which reproduces
/// `π^{p/2} / Γ(p/2 + 1)` without a gamma evaluation.
pub fn unit_ball_volume(p: usize) -> Result<f64> {
    if p < 1 {
        return Err(Error::domain("unit ball volume needs p >= 1"));
    }
    let (mut v, mut k) = if p.is_multiple_of(2) {
        (1.0, 2)
    } else {
        (2.0, 3)
    };
    while k <= p {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    Ok(v)
}

/// The `A_p*` lattice with unit-length basis vectors.
pub fn a_star_lattice(p: usize) -> Result<LatticeSpec> {
    if !(2..=A_STAR_MAX_DIM).contains(&p) {
        return Err(Error::domain(format!(
            "A_p* is supported for 2 <= p <= {A_STAR_MAX_DIM}, got p = {p}"
        )));
    }
    let pf = p as f64;
    let diag = (pf + 1.0).sqrt() / pf.sqrt();
    let off = 1.0 / (pf.sqrt() * ((pf + 1.0).sqrt() - 1.0));
    let generator = DMatrix::from_fn(p, p, |i, j| if i == j { diag - off } else { -off });

    let rho_c = ((pf + 2.0) / 12.0).sqrt();
    let det_abs = (pf + 1.0).powf((pf - 1.0) / 2.0) * pf.powf(-pf / 2.0);
    let theta = unit_ball_volume(p)?
        * (pf + 1.0).sqrt()
        * (pf * (pf + 2.0) / (12.0 * (pf + 1.0))).powf(pf / 2.0);
    let eta_norms = eta_norms(&generator)?;
    Ok(LatticeSpec {
        kind: LatticeKind::AStar,
        p,
        generator,
        rho_p: 0.5,
        rho_c,
        theta,
        det_abs,
        eta_norms,
    })
}

/// The integer lattice `Z^p` with the identity as generator.
pub fn cubic_lattice(p: usize) -> Result<LatticeSpec> {
    if p < 1 {
        return Err(Error::domain("cubic lattice needs p >= 1"));
    }
    let rho_c = (p as f64).sqrt() / 2.0;
    Ok(LatticeSpec {
        kind: LatticeKind::Cubic,
        p,
        generator: DMatrix::identity(p, p),
        rho_p: 0.5,
        rho_c,
        theta: unit_ball_volume(p)? * rho_c.powi(p as i32),
        det_abs: 1.0,
        eta_norms: vec![1.0; p],
    })
}

/// The magic-angle generator for `p = 2`.
///
/// Its rows are `((√3-1)/(2√2), -(√3+1)/(2√2))` and
/// `(-(√3+1)/(2√2), (√3-1)/(2√2))`; the lattice is `A_2*` with its shortest
/// vectors at 15 degrees (mod 60) off the coordinate axes.
pub fn magic_lattice_2d() -> LatticeSpec {
    let s3 = 3f64.sqrt();
    let a = (s3 - 1.0) / (2.0 * std::f64::consts::SQRT_2);
    let b = (s3 + 1.0) / (2.0 * std::f64::consts::SQRT_2);
    let generator = DMatrix::from_row_slice(2, 2, &[a, -b, -b, a]);
    let eta = eta_norms(&generator).expect("magic generator is nonsingular");
    LatticeSpec {
        kind: LatticeKind::Magic,
        p: 2,
        generator,
        rho_p: 0.5,
        rho_c: s3 / 3.0,
        theta: 2.0 * s3 * PI / 9.0,
        det_abs: s3 / 2.0,
        eta_norms: eta,
    }
}

/// Norms of `η_j = (I - G_(j)^T (G_(j) G_(j)^T)^{-1} G_(j)) v_j`, where
/// `G_(j)` drops row `j`.
pub fn eta_norms(generator: &DMatrix<f64>) -> Result<Vec<f64>> {
    let p = generator.nrows();
    if p == 0 || generator.ncols() != p {
        return Err(Error::domain("generator must be a nonempty square matrix"));
    }
    if p == 1 {
        return Ok(vec![generator[(0, 0)].abs()]);
    }
    (0..p)
        .map(|j| {
            let others = generator.clone().remove_row(j);
            let v = generator.row(j).transpose();
            let gram = &others * others.transpose();
            let rhs: DVector<f64> = &others * &v;
            let chol = gram.cholesky().ok_or_else(|| {
                Error::Numerical(format!("rows other than {j} are linearly dependent"))
            })?;
            let coef = chol.solve(&rhs);
            let eta = v - others.transpose() * coef;
            Ok(eta.norm())
        })
        .collect()
}
