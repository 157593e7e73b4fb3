use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the damped system: dissipation order alpha in
/// (-Laplace)^alpha, damping exponent beta in nu*|u|^(beta-1)*u, and the
/// damping coefficient nu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
}

/// Dissipation orders above this value fall outside the range the decay
/// theorems cover; they are accepted with a warning up to [`ALPHA_MAX`].
pub const ALPHA_THEOREM_MAX: f64 = 1.25;
pub const ALPHA_MAX: f64 = 2.0;

impl PhysicalParams {
    pub fn new(alpha: f64, beta: f64, nu: f64) -> Result<Self> {
        let p = Self { alpha, beta, nu };
        p.validate()?;
        Ok(p)
    }

    /// Hard range checks. Returns the soft warnings alongside (alpha beyond
    /// the theorem range, 2D grids etc. are legal but flagged).
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParams(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.alpha > ALPHA_MAX {
            return Err(Error::InvalidParams(format!(
                "alpha must be <= {ALPHA_MAX}, got {}",
                self.alpha
            )));
        }
        if !(self.beta >= 1.0) || !self.beta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "beta must be >= 1, got {}",
                self.beta
            )));
        }
        if !(self.nu >= 0.0) || !self.nu.is_finite() {
            return Err(Error::InvalidParams(format!(
                "nu must be >= 0, got {}",
                self.nu
            )));
        }
        let mut warnings = Vec::new();
        if self.alpha > ALPHA_THEOREM_MAX {
            warnings.push(format!(
                "alpha = {} exceeds {ALPHA_THEOREM_MAX}; decay-exponent comparisons are undefined there",
                self.alpha
            ));
        }
        Ok(warnings)
    }

    /// True when alpha lies in the range the fractional decay exponent
    /// formula covers.
    pub fn alpha_in_theorem_range(&self) -> bool {
        self.alpha > 0.0 && self.alpha < ALPHA_THEOREM_MAX
    }
}
