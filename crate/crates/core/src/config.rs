//! Tolerance policy shared by the contact oracle, the synthesizer and the
//! verifier.

use serde::{Deserialize, Serialize};

use crate::Error;

/// Numerical tolerances. All checks and verdicts reference one of these
/// fields; defaults are overridable from the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Base of the per-radius zero threshold `eps_zero(r) = eps_zero_base * r^k`.
    /// A degree-<=k germ not identically zero on a ray decays no faster than
    /// `r^k`, so the threshold must scale with the sample radius.
    pub eps_zero_base: f64,
    /// Contact constants outside `[ratio_floor, 1/ratio_floor]` are treated
    /// as degeneration rather than equivalence.
    pub ratio_floor: f64,
    /// Tolerance for verifier checks (graph mapping, zero section, ...).
    pub check_tol: f64,
    /// Margin by which samples avoid case boundaries and sign hyperplanes.
    pub boundary_margin: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_zero_base: 1e-10,
            ratio_floor: 1e-6,
            check_tol: 1e-9,
            boundary_margin: 1e-6,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.eps_zero_base <= 0.0
            || self.ratio_floor <= 0.0
            || self.check_tol <= 0.0
            || self.boundary_margin <= 0.0
        {
            return Err(Error::InvalidParameter(
                "all tolerances must be positive".into(),
            ));
        }
        if self.ratio_floor >= 1.0 {
            return Err(Error::InvalidParameter("ratio_floor must be < 1".into()));
        }
        Ok(())
    }

    /// Zero threshold at sample radius `r` for a germ of degree bound `k`.
    pub fn eps_zero(&self, radius: f64, k: u32) -> f64 {
        self.eps_zero_base * radius.powi(k as i32)
    }
}
