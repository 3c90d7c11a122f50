use serde::{Deserialize, Serialize};

use crate::rotation::GivensAngle;
use crate::{Error, Result};

/// How a constructed design came about. Written next to design files as a
/// JSON sidecar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub p: usize,
    pub n: usize,
    /// Number of candidate builds compared by ψ.
    pub w: usize,
    pub seed: u64,
    pub lattice: String,
    pub angles: Vec<GivensAngle>,
    pub delta: Vec<f64>,
    pub l: f64,
    pub psi: f64,
}

/// An `n x p` point set, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Design {
    n: usize,
    p: usize,
    data: Vec<f64>,
    pub provenance: Option<Provenance>,
}

impl Design {
    /// Wraps row-major `data`; `data.len()` must equal `n * p`.
    pub fn from_row_major(n: usize, p: usize, data: Vec<f64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::domain("design must have at least one column"));
        }
        if data.len() != n * p {
            return Err(Error::domain(format!(
                "expected {} values for a {n}x{p} design, got {}",
                n * p,
                data.len()
            )));
        }
        Ok(Design {
            n,
            p,
            data,
            provenance: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let p = rows
            .first()
            .map(|r| r.as_ref().len())
            .ok_or_else(|| Error::domain("design has no rows"))?;
        let mut data = Vec::with_capacity(rows.len() * p);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != p {
                return Err(Error::domain(format!(
                    "row {i} has {} columns, expected {p}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Design::from_row_major(rows.len(), p, data)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.p)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.rows().map(|r| r[k]).collect()
    }

    /// Keeps only the listed coordinates, in the given order.
    pub fn project(&self, coords: &[usize]) -> Design {
        let data = self
            .rows()
            .flat_map(|r| coords.iter().map(move |&k| r[k]))
            .collect();
        Design {
            n: self.n,
            p: coords.len(),
            data,
            provenance: None,
        }
    }

    /// Returns a copy with rows reordered by `order`.
    pub fn permute_rows(&self, order: &[usize]) -> Design {
        let data = order
            .iter()
            .flat_map(|&i| self.row(i).iter().copied())
            .collect();
        Design {
            n: order.len(),
            p: self.p,
            data,
            provenance: self.provenance.clone(),
        }
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Design {
        Design {
            n: self.n,
            p: self.p,
            data: self.data.iter().map(|&v| f(v)).collect(),
            provenance: None,
        }
    }

    pub fn in_unit_cube(&self) -> bool {
        self.data.iter().all(|v| (0.0..=1.0).contains(v))
    }
}
