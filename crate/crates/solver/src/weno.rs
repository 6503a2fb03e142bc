//! Classical fifth-order WENO-JS interface reconstruction from point values.

use crate::params::{WeightsMode, WenoConfig};

/// Ideal weights of the left-biased reconstruction.
pub const IDEAL: [f64; 3] = [0.1, 0.6, 0.3];

/// Candidate substencil values at the right interface of the center node,
/// for the left-biased stencil (v[0] = v_{i-2}, ..., v[4] = v_{i+2}).
#[inline]
pub fn candidates(v: &[f64; 5]) -> [f64; 3] {
    [
        (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0,
        (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0,
        (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0,
    ]
}

/// Jiang-Shu smoothness indicators.
#[inline]
pub fn smoothness(v: &[f64; 5]) -> [f64; 3] {
    let b0 = 13.0 / 12.0 * (v[0] - 2.0 * v[1] + v[2]).powi(2)
        + 0.25 * (v[0] - 4.0 * v[1] + 3.0 * v[2]).powi(2);
    let b1 = 13.0 / 12.0 * (v[1] - 2.0 * v[2] + v[3]).powi(2) + 0.25 * (v[1] - v[3]).powi(2);
    let b2 = 13.0 / 12.0 * (v[2] - 2.0 * v[3] + v[4]).powi(2)
        + 0.25 * (3.0 * v[2] - 4.0 * v[3] + v[4]).powi(2);
    [b0, b1, b2]
}

/// Normalized nonlinear weights for the left-biased stencil.
#[inline]
pub fn weights(v: &[f64; 5], cfg: &WenoConfig) -> [f64; 3] {
    match cfg.mode {
        WeightsMode::Linear => IDEAL,
        WeightsMode::Nonlinear => {
            let b = smoothness(v);
            let a0 = IDEAL[0] / ((cfg.eps_weno + b[0]) * (cfg.eps_weno + b[0]));
            let a1 = IDEAL[1] / ((cfg.eps_weno + b[1]) * (cfg.eps_weno + b[1]));
            let a2 = IDEAL[2] / ((cfg.eps_weno + b[2]) * (cfg.eps_weno + b[2]));
            let s = a0 + a1 + a2;
            [a0 / s, a1 / s, a2 / s]
        }
    }
}

/// Combine candidate values with the given weights.
#[inline]
pub fn combine(v: &[f64; 5], w: &[f64; 3]) -> f64 {
    let q = candidates(v);
    w[0] * q[0] + w[1] * q[1] + w[2] * q[2]
}

/// Left-biased reconstruction at the right interface of the center node.
#[inline]
pub fn reconstruct_left(v: &[f64; 5], cfg: &WenoConfig) -> f64 {
    combine(v, &weights(v, cfg))
}

/// Left-biased reconstruction returning the weights it used.
#[inline]
pub fn reconstruct_left_with_weights(v: &[f64; 5], cfg: &WenoConfig) -> (f64, [f64; 3]) {
    let w = weights(v, cfg);
    (combine(v, &w), w)
}

/// Mirror a right-biased window (w_{i-1}, ..., w_{i+3}) onto the left-biased kernel.
#[inline]
pub fn mirror(v: &[f64; 5]) -> [f64; 5] {
    [v[4], v[3], v[2], v[1], v[0]]
}
