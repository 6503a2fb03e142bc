//! Ideal-gas equation of state in the Mach-scaled variables:
//! E = eps^2 rho |u|^2 / 2 + p / (gamma - 1).

use crate::error::{Result, SolverError};
use crate::field::State;
use crate::params::SimParams;

/// Total non-gravitational energy from primitive variables.
pub fn eos_total_energy(rho: f64, u: f64, v: f64, p: f64, params: &SimParams) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(SolverError::Positivity { what: "density", i: 0, j: 0, value: rho });
    }
    if !(p > 0.0) {
        return Err(SolverError::Positivity { what: "pressure", i: 0, j: 0, value: p });
    }
    let eps2 = params.eps * params.eps;
    Ok(0.5 * eps2 * rho * (u * u + v * v) + p / (params.gamma - 1.0))
}

/// Pressure from conserved variables; nonpositive results are an error.
pub fn eos_pressure(rho: f64, qx: f64, qy: f64, e: f64, params: &SimParams) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(SolverError::Positivity { what: "density", i: 0, j: 0, value: rho });
    }
    let eps2 = params.eps * params.eps;
    let p = (params.gamma - 1.0) * (e - 0.5 * eps2 * (qx * qx + qy * qy) / rho);
    if !(p > 0.0) {
        return Err(SolverError::Positivity { what: "pressure", i: 0, j: 0, value: p });
    }
    Ok(p)
}

/// Pressure without the positivity guard, for hot loops that validate separately.
#[inline]
pub fn pressure_raw(rho: f64, qx: f64, qy: f64, e: f64, eps2: f64, gamma: f64) -> f64 {
    (gamma - 1.0) * (e - 0.5 * eps2 * (qx * qx + qy * qy) / rho)
}

/// Potential temperature defined through p = (rho theta)^gamma.
pub fn potential_temperature(rho: f64, p: f64, gamma: f64) -> Result<f64> {
    if !(rho > 0.0) || !(p > 0.0) {
        return Err(SolverError::Positivity {
            what: if rho > 0.0 { "pressure" } else { "density" },
            i: 0,
            j: 0,
            value: if rho > 0.0 { p } else { rho },
        });
    }
    Ok(p.powf(1.0 / gamma) / rho)
}

/// Enthalpy H = (E + p)/rho = gamma/(gamma-1) p/rho + eps^2 |q|^2 / (2 rho^2).
#[inline]
pub fn enthalpy(rho: f64, qx: f64, qy: f64, p: f64, eps2: f64, gamma: f64) -> f64 {
    gamma / (gamma - 1.0) * p / rho + 0.5 * eps2 * (qx * qx + qy * qy) / (rho * rho)
}

/// Largest material-plus-capped-acoustic signal speed over the interior:
/// Lambda = max(|u| + min(1, 1/eps) sqrt(gamma p / rho)).
/// The maximum is taken in a fixed row-major traversal.
pub fn max_signal_speed(state: &State, params: &SimParams) -> Result<f64> {
    let grid = state.grid().clone();
    let eps2 = params.eps * params.eps;
    let factor = params.visc_factor();
    let mut lambda = 0.0f64;
    for (i, j) in grid.interior() {
        let rho = state.rho.at(i, j);
        if !(rho > 0.0) {
            return Err(SolverError::Positivity { what: "density", i: i as usize, j: j as usize, value: rho });
        }
        let qx = state.qx.at(i, j);
        let qy = state.qy_at(i, j);
        let p = pressure_raw(rho, qx, qy, state.e.at(i, j), eps2, params.gamma);
        if !(p > 0.0) {
            return Err(SolverError::Positivity { what: "pressure", i: i as usize, j: j as usize, value: p });
        }
        let speed = (qx * qx + qy * qy).sqrt() / rho;
        lambda = lambda.max(speed + factor * (params.gamma * p / rho).sqrt());
    }
    Ok(lambda)
}
