use crate::error::{Result, SolverError};
use serde::{Deserialize, Serialize};

/// Reconstruction weight selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightsMode {
    Nonlinear,
    Linear,
}

/// WENO5 reconstruction parameters. Ideal left-biased weights are
/// (1/10, 6/10, 3/10); `eps_weno` regularizes the smoothness indicators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoConfig {
    pub eps_weno: f64,
    pub mode: WeightsMode,
}

impl Default for WenoConfig {
    fn default() -> Self {
        WenoConfig { eps_weno: 1e-6, mode: WeightsMode::Nonlinear }
    }
}

/// Global solver parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    /// Referenced global Mach number, >= 0.
    pub eps: f64,
    /// Adiabatic index, > 1.
    pub gamma: f64,
    /// CFL number in (0, 1].
    pub cfl: f64,
    pub weights: WeightsMode,
    pub eps_weno: f64,
    /// Floor applied to eps where the explicit reference scheme divides by it.
    pub eps_floor_visc: f64,
    /// Relative residual target for the stage elliptic solve.
    pub solver_tol: f64,
    pub solver_max_iter: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            eps: 1.0,
            gamma: 1.4,
            cfl: 0.2,
            weights: WeightsMode::Nonlinear,
            eps_weno: 1e-6,
            eps_floor_visc: 1e-8,
            solver_tol: 1e-12,
            solver_max_iter: 10_000,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0) {
            return Err(SolverError::Config(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::Config(format!("CFL must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.eps >= 0.0) {
            return Err(SolverError::Config(format!("eps must be nonnegative, got {}", self.eps)));
        }
        Ok(())
    }

    /// Splitting parameter alpha = min(eps^2, 1); never stored, always derived.
    #[inline]
    pub fn alpha(&self) -> f64 {
        (self.eps * self.eps).min(1.0)
    }

    /// Implicit weight 1 - alpha.
    #[inline]
    pub fn omega(&self) -> f64 {
        1.0 - self.alpha()
    }

    /// min(1, 1/eps), defined as exactly 1 for every eps <= 1 (including 0).
    #[inline]
    pub fn visc_factor(&self) -> f64 {
        if self.eps > 1.0 {
            1.0 / self.eps
        } else {
            1.0
        }
    }

    pub fn weno(&self) -> WenoConfig {
        WenoConfig { eps_weno: self.eps_weno, mode: self.weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_clamps_at_one() {
        let mut p = SimParams::default();
        p.eps = 2.0;
        assert_eq!(p.alpha(), 1.0);
        assert_eq!(p.omega(), 0.0);
        p.eps = 0.5;
        assert_eq!(p.alpha(), 0.25);
    }

    #[test]
    fn visc_factor_is_exactly_one_below_unity() {
        let mut p = SimParams::default();
        for eps in [0.0, 1e-6, 1e-2, 0.9, 1.0] {
            p.eps = eps;
            assert_eq!(p.visc_factor(), 1.0);
        }
        p.eps = 2.0;
        assert_eq!(p.visc_factor(), 0.5);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let mut p = SimParams::default();
        p.gamma = 1.0;
        assert!(p.validate().is_err());
        p = SimParams::default();
        p.cfl = 0.0;
        assert!(p.validate().is_err());
        p = SimParams::default();
        p.eps = -1.0;
        assert!(p.validate().is_err());
    }
}
