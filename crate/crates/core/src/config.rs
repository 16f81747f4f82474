use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::{mix_seed, HomotopyOptions};
use crate::poly::roots::RootOptions;

/// Run-wide settings shared by every operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Root clustering tolerance (relative, on normalized coefficients).
    pub cluster_tol: f64,
    /// Chordal distance below which two points are identified.
    pub point_tol: f64,
    /// Relative residual below which a form counts as vanishing.
    pub residual_tol: f64,
    /// Mantissa bits used in root polishing; at least 53.
    pub precision: u32,
    pub trials: usize,
    pub max_attempts: usize,
    /// Relative tolerance on ratio constancy in the Chow identity check.
    pub ratio_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            cluster_tol: 1e-8,
            point_tol: 1e-7,
            residual_tol: 1e-9,
            precision: 53,
            trials: 50,
            max_attempts: 20,
            ratio_tol: 1e-6,
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let tols = [self.cluster_tol, self.point_tol, self.residual_tol, self.ratio_tol];
        if tols.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.precision < 53 {
            return Err(Error::InvalidInput("precision must be at least 53 bits".into()));
        }
        if self.trials == 0 || self.max_attempts == 0 {
            return Err(Error::InvalidInput("trials and attempts must be positive".into()));
        }
        Ok(())
    }

    pub fn roots(&self) -> RootOptions {
        RootOptions { cluster_tol: self.cluster_tol, precision: self.precision }
    }

    /// Homotopy settings with a seed derived from the run seed and `salt`.
    pub fn homotopy(&self, salt: u64) -> HomotopyOptions {
        HomotopyOptions {
            seed: mix_seed(self.seed, salt),
            merge_tol: self.point_tol,
            residual_tol: self.residual_tol.max(1e-10),
            ..HomotopyOptions::default()
        }
    }

    /// The same configuration with a derived seed.
    pub fn derive(&self, salt: u64) -> Self {
        Self { seed: mix_seed(self.seed, salt), ..self.clone() }
    }
}
