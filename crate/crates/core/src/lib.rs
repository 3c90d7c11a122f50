//! Rotated sphere packing designs.
//!
//! A rotated sphere packing design (RSPD) is obtained by scaling a thin
//! covering lattice so that its cells have volume `1/n`, rotating it,
//! translating it until exactly `n` lattice points fall inside the unit cube,
//! and keeping those points. The crate builds such designs for any `p >= 2`
//! and `n >= 1` and evaluates them, together with baseline designs, under
//! distance, projection, discrepancy and Gaussian-process criteria.
//!
//! Module map:
//!
//! - [`lattice`]: generator matrices and covering constants.
//! - [`rotation`]: Givens rotations and random rotation plans.
//! - [`construct`]: candidate enumeration, translation search, extraction.
//! - [`magic2d`]: the two-dimensional magic-angle lattice and its gap bounds.
//! - [`criteria`]: distance, projection and discrepancy criteria.
//! - [`gp`]: kriging prediction-error criteria.
//! - [`baselines`]: Hammersley points, random Latin hypercubes, Genz integrands.
//! - [`io`]: design CSV/JSON files and provenance sidecars.

pub mod baselines;
pub mod construct;
pub mod criteria;
pub mod design;
mod error;
pub mod gp;
pub mod io;
pub mod lattice;
pub mod magic2d;
pub mod rotation;

pub use design::{Design, Provenance};
pub use error::{Error, Result};

/// Seeded random stream used everywhere a procedure needs randomness.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Creates the crate's random stream from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}
