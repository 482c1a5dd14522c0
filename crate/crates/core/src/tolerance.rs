//! Numerical tolerances shared by every operation.

use serde::{Deserialize, Serialize};

use crate::error::{HyperError, Result};

/// Environment variable that overrides `geom`.
pub const TOL_ENV: &str = "HYPERCONVEX_TOL";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Orthonormality residual allowed for stored bases.
    pub orth: f64,
    /// Relative singular-value cutoff for rank decisions.
    pub rank: f64,
    /// Geometric equality (membership, orthogonality, round trips).
    pub geom: f64,
    /// Target width of certified suprema.
    pub sup: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            orth: 1e-9,
            rank: 1e-8,
            geom: 1e-9,
            sup: 1e-3,
        }
    }
}

impl ToleranceConfig {
    /// Smallest admissible `rank`; anything below drowns in rounding.
    pub const RANK_FLOOR: f64 = 64.0 * f64::EPSILON;

    pub fn validate(&self) -> Result<()> {
        let all = [self.orth, self.rank, self.geom, self.sup];
        if all.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(HyperError::InvalidArgument(
                "tolerances must be finite and strictly positive".into(),
            ));
        }
        if self.rank < Self::RANK_FLOOR {
            return Err(HyperError::InvalidArgument(format!(
                "rank tolerance {} is below the floor {:e}",
                self.rank,
                Self::RANK_FLOOR
            )));
        }
        Ok(())
    }

    /// Defaults, with `geom` taken from `HYPERCONVEX_TOL` when set.
    pub fn from_env() -> Result<Self> {
        let mut tol = Self::default();
        if let Ok(raw) = std::env::var(TOL_ENV) {
            tol.geom = raw
                .trim()
                .parse()
                .map_err(|_| HyperError::InvalidArgument(format!("{TOL_ENV}={raw:?} is not a number")))?;
        }
        tol.validate()?;
        Ok(tol)
    }

    pub fn with_geom(mut self, geom: f64) -> Self {
        self.geom = geom;
        self
    }

    pub fn with_sup(mut self, sup: f64) -> Self {
        self.sup = sup;
        self
    }
}
