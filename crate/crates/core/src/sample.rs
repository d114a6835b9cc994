//! Deterministic sampling of punctured balls around the origin.
//!
//! A [`SampleScheme`] fixes a geometric radius schedule `r_j = r0 * rho^j`
//! and a seeded set of unit directions. The same directions are reused at
//! every radius, so the sample set is a bundle of rays through the origin;
//! the contact oracle leans on that ray structure for its per-radius trend
//! certificates.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Punctured-ball sampling plan. Deterministic given `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleScheme {
    pub r0: f64,
    pub rho: f64,
    pub num_radii: usize,
    pub dirs_per_radius: usize,
    pub seed: u64,
}

impl Default for SampleScheme {
    // Spans roughly four decades of radius at desk scale.
    fn default() -> Self {
        Self {
            r0: 0.1,
            rho: 0.5,
            num_radii: 12,
            dirs_per_radius: 64,
            seed: 0,
        }
    }
}

impl SampleScheme {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.r0 > 0.0) {
            return Err(Error::InvalidParameter("r0 must be > 0".into()));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidParameter("rho must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Radius schedule `r_j = r0 * rho^j`, largest first.
    pub fn radii(&self) -> Vec<f64> {
        (0..self.num_radii)
            .map(|j| self.r0 * self.rho.powi(j as i32))
            .collect()
    }

    /// Seeded unit directions on the sphere in `R^n`: normalized Gaussian
    /// draws, dimension-agnostic and deterministic under the seed.
    pub fn directions(&self, n: usize) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut dirs = Vec::with_capacity(self.dirs_per_radius);
        while dirs.len() < self.dirs_per_radius {
            let v: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue;
            }
            dirs.push(v.into_iter().map(|a| a / norm).collect());
        }
        dirs
    }

    /// All sample points `r_j * d_i`, radius-major order. Never emits the
    /// origin; every norm lies in `(0, r0]`.
    pub fn sample_punctured_ball(&self, n: usize) -> Result<Vec<Vec<f64>>, Error> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        self.validate()?;
        let dirs = self.directions(n);
        let mut out = Vec::with_capacity(self.num_radii * self.dirs_per_radius);
        for r in self.radii() {
            for d in &dirs {
                out.push(d.iter().map(|&c| r * c).collect());
            }
        }
        Ok(out)
    }
}

// Box-Muller from uniform draws; keeps us independent of distribution crates.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}
