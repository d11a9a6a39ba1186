//! Runtime configuration: sample counts, seeds, grids, and tolerances.

use crate::error::{Error, Result};

/// Knobs shared by the Monte Carlo, grid, and solver paths.
///
/// All defaults live here and nowhere else.
#[derive(Debug, Clone)]
pub struct Config {
    /// Seed for every Monte Carlo draw. Outputs are a pure function of
    /// the seed, never of thread count or scheduling.
    pub seed: u64,
    /// Monte Carlo sample count for L¹ estimates and mean tests.
    pub mc_samples: u64,
    /// Number of grid points per angular dimension. On the circle this is
    /// the number of roots of unity; in higher dimension it sizes the
    /// deterministic evaluation set.
    pub grid_points_per_dim: usize,
    /// Relative tolerance for positive-semidefiniteness tests: a Hermitian
    /// matrix passes when its minimum eigenvalue is at least
    /// `-tol_psd * max_abs_entry`.
    pub tol_psd: f64,
    /// Absolute tolerance on bisection variables.
    pub tol_bisect: f64,
    /// Tolerance applied to convex-solver outputs and verdicts.
    pub solver_tol: f64,
    /// Override for the sup-norm inflation factor. `None` selects the
    /// built-in rule: `1/cos(pi*d/N)` on the circle (a Bernstein-type
    /// safeguard that certifies the bound) and the heuristic `1.02` in
    /// dimension two and up.
    pub inflation_factor: Option<f64>,
    /// Largest candidate degree accepted by the sup-norm minimizer.
    pub max_degree: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 42,
            mc_samples: 1_000_000,
            grid_points_per_dim: 2048,
            tol_psd: 1e-10,
            tol_bisect: 1e-10,
            solver_tol: 1e-6,
            inflation_factor: None,
            max_degree: 12,
        }
    }
}

impl Config {
    /// Checks the invariants every consumer relies on.
    pub fn validate(&self) -> Result<()> {
        if self.mc_samples == 0 {
            return Err(Error::InvalidArgument("mc_samples must be positive".into()));
        }
        if self.grid_points_per_dim < 8 {
            return Err(Error::InvalidArgument(
                "grid_points_per_dim must be at least 8".into(),
            ));
        }
        for (name, v) in [
            ("tol_psd", self.tol_psd),
            ("tol_bisect", self.tol_bisect),
            ("solver_tol", self.solver_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        if let Some(f) = self.inflation_factor {
            if !(f >= 1.0) || !f.is_finite() {
                return Err(Error::InvalidArgument(
                    "inflation_factor must be at least 1".into(),
                ));
            }
        }
        Ok(())
    }
}
