//! Tolerances and caps shared by every module.
//!
//! Values come from [`Config::default`], optionally overlaid by a TOML file
//! and then by the `NCBALL_TOL` / `NCBALL_SEED` environment variables.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Points with joint spectral radius within this distance of 1 are boundary points.
    pub boundary_tol: f64,
    /// Relative singular-value threshold for rank decisions.
    pub rank_tol: f64,
    /// Relative residual allowed for an invariant subspace or a block triangularization.
    pub invariance_tol: f64,
    /// Relative tolerance for polynomial relations in [`crate::variety`].
    pub relation_tol: f64,
    /// Tolerance for the sampled subharmonicity and Schwarz probes.
    pub prop_tol: f64,
    /// Condition numbers above this are flagged on conjugation.
    pub cond_cap: f64,
    /// Maximum number of words in an amplification `X^(k)`.
    pub amplification_cap: usize,
    /// Maximum dimension of a truncated Fock space.
    pub fock_dim_cap: usize,
    /// Largest truncated Fock dimension handled by a dense SVD.
    pub dense_svd_limit: usize,
    /// Seed for every randomized search.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            boundary_tol: 1e-9,
            rank_tol: 1e-10,
            invariance_tol: 1e-8,
            relation_tol: 1e-9,
            prop_tol: 1e-6,
            cond_cap: 1e8,
            amplification_cap: 1 << 14,
            fock_dim_cap: 200_000,
            dense_svd_limit: 400,
            seed: 0x005e_ed0f_ba11,
        }
    }
}

impl Config {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Apply `NCBALL_TOL` and `NCBALL_SEED` if set.
    pub fn with_env(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var("NCBALL_TOL") {
            self.boundary_tol = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("NCBALL_TOL: cannot parse {v:?}")))?;
        }
        if let Ok(v) = std::env::var("NCBALL_SEED") {
            self.seed = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("NCBALL_SEED: cannot parse {v:?}")))?;
        }
        Ok(self)
    }

    /// Defaults, then the optional file, then the environment.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let base = match path {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        base.with_env()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_keeps_defaults() {
        let c = Config::from_toml_str("boundary_tol = 1e-6\nseed = 7\n").unwrap();
        assert_eq!(c.boundary_tol, 1e-6);
        assert_eq!(c.seed, 7);
        assert_eq!(c.rank_tol, Config::default().rank_tol);
    }

    #[test]
    fn bad_toml_is_input_error() {
        let e = Config::from_toml_str("boundary_tol = \"x\"").unwrap_err();
        assert_eq!(e.class(), crate::error::ErrorClass::Input);
    }
}
