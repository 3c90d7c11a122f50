//! Rotation matrices as ordered products of Givens rotations.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Rng};

/// One factor `R_p(i, j, alpha)`; indices are 1-based with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GivensAngle {
    pub i: usize,
    pub j: usize,
    /// Radians.
    pub alpha: f64,
}

/// One angle per coordinate pair, in lexicographic `(i, j)` order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationPlan {
    p: usize,
    angles: Vec<GivensAngle>,
}

/// Coordinate pairs `(i, j)`, `1 <= i < j <= p`, in lexicographic order.
pub fn pairs(p: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=p).flat_map(move |i| (i + 1..=p).map(move |j| (i, j)))
}

impl RotationPlan {
    /// Builds a plan from angles listed in lexicographic pair order.
    pub fn from_angles(p: usize, alphas: &[f64]) -> Result<Self> {
        let expected = p * p.saturating_sub(1) / 2;
        if alphas.len() != expected {
            return Err(Error::domain(format!(
                "a rotation plan for p = {p} needs {expected} angles, got {}",
                alphas.len()
            )));
        }
        let angles = pairs(p)
            .zip(alphas)
            .map(|((i, j), &alpha)| GivensAngle { i, j, alpha })
            .collect();
        Ok(RotationPlan { p, angles })
    }

    /// All angles zero, composing to the identity.
    pub fn identity(p: usize) -> Self {
        let zeros = vec![0.0; p * p.saturating_sub(1) / 2];
        RotationPlan::from_angles(p, &zeros).expect("length matches by construction")
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn angles(&self) -> &[GivensAngle] {
        &self.angles
    }
}

/// The `p x p` identity with the `(i, j)` plane rotated by `alpha`.
pub fn givens(p: usize, i: usize, j: usize, alpha: f64) -> Result<DMatrix<f64>> {
    if !(1 <= i && i < j && j <= p) {
        return Err(Error::domain(format!(
            "Givens indices must satisfy 1 <= i < j <= p, got i = {i}, j = {j}, p = {p}"
        )));
    }
    let mut r = DMatrix::identity(p, p);
    let (s, c) = alpha.sin_cos();
    let (a, b) = (i - 1, j - 1);
    r[(a, a)] = c;
    r[(a, b)] = -s;
    r[(b, a)] = s;
    r[(b, b)] = c;
    Ok(r)
}

/// Product of the plan's Givens factors, left to right.
pub fn compose(plan: &RotationPlan) -> DMatrix<f64> {
    let p = plan.p;
    let mut r = DMatrix::<f64>::identity(p, p);
    for g in &plan.angles {
        // Right-multiplying by a Givens factor only mixes columns i and j.
        let (s, c) = g.alpha.sin_cos();
        let (a, b) = (g.i - 1, g.j - 1);
        for row in 0..p {
            let x = r[(row, a)];
            let y = r[(row, b)];
            r[(row, a)] = c * x + s * y;
            r[(row, b)] = -s * x + c * y;
        }
    }
    r
}

/// Draws every angle independently and uniformly from `[0, 2π)`.
pub fn sample_plan(p: usize, rng: &mut Rng) -> RotationPlan {
    let alphas: Vec<f64> = pairs(p).map(|_| rng.random::<f64>() * TAU).collect();
    RotationPlan::from_angles(p, &alphas).expect("length matches by construction")
}
