//! Component-wise WENO operators: Lax-Friedrichs split divergences and the
//! upwind gradient used by the potential-temperature perturbation equation.

use crate::field::Field;
use crate::grid::{Grid, GHOST};
use crate::params::WenoConfig;
use crate::weno;
use rayon::prelude::*;
use std::sync::Arc;

/// Pointwise Lax-Friedrichs splitting F+- = (F +- Lambda V) / 2.
#[inline]
pub fn lf_split(f: f64, v: f64, lambda: f64) -> (f64, f64) {
    (0.5 * (f + lambda * v), 0.5 * (f - lambda * v))
}

/// Interface values of the split flux along one pencil.
///
/// `f` and `v` carry `n + 2 GHOST` node values; `hat[m]` receives the numerical
/// flux at the interface left of interior node `m` (m = 0..=n).
pub fn lf_interface_pencil(f: &[f64], v: &[f64], lambda: f64, cfg: &WenoConfig, n: usize, hat: &mut [f64]) {
    let g = GHOST;
    debug_assert_eq!(f.len(), n + 2 * g);
    debug_assert_eq!(hat.len(), n + 1);
    let mut wp = [0.0f64; 5];
    let mut wm = [0.0f64; 5];
    for m in 0..=n {
        // Left-biased window for F+ spans nodes m-3..m+1; right-biased for F-
        // spans m-2..m+2 (interior indexing), both inside the ghost frame.
        for k in 0..5 {
            let ip = m + k + g - 3;
            wp[k] = 0.5 * (f[ip] + lambda * v[ip]);
            let im = m + k + g - 2;
            wm[k] = 0.5 * (f[im] - lambda * v[im]);
        }
        let plus = weno::reconstruct_left(&wp, cfg);
        let minus = weno::reconstruct_left(&weno::mirror(&wm), cfg);
        hat[m] = plus + minus;
    }
}

fn gather_pencil_y(field: &Field, i: isize, out: &mut [f64]) {
    let _ = &field.grid;
    let g = GHOST as isize;
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = field.at(i, k as isize - g);
    }
}

/// Conservative x-divergence of a single split flux component.
/// `flux` and `visc` must have valid ghost layers.
pub fn div_w_x(flux: &Field, visc: &Field, lambda: f64, cfg: &WenoConfig) -> Field {
    let grid = flux.grid.clone();
    let n = grid.nx;
    let g = GHOST;
    let rows: Vec<Vec<f64>> = (0..grid.ny as isize)
        .into_par_iter()
        .map(|j| {
            let mut f = vec![0.0; n + 2 * g];
            let mut v = vec![0.0; n + 2 * g];
            for k in 0..n + 2 * g {
                let i = k as isize - g as isize;
                f[k] = flux.at(i, j);
                v[k] = visc.at(i, j);
            }
            let mut hat = vec![0.0; n + 1];
            lf_interface_pencil(&f, &v, lambda, cfg, n, &mut hat);
            let mut d = vec![0.0; n];
            for i in 0..n {
                d[i] = (hat[i + 1] - hat[i]) / grid.dx;
            }
            d
        })
        .collect();
    let mut out = Field::zeros(&grid);
    for (j, row) in rows.iter().enumerate() {
        for (i, val) in row.iter().enumerate() {
            out.set(i as isize, j as isize, *val);
        }
    }
    out
}

/// Conservative y-divergence of a single split flux component.
pub fn div_w_y(flux: &Field, visc: &Field, lambda: f64, cfg: &WenoConfig) -> Field {
    let grid = flux.grid.clone();
    assert_eq!(grid.dim, 2, "y-divergence requires a 2D grid");
    let n = grid.ny;
    let g = GHOST;
    let cols: Vec<Vec<f64>> = (0..grid.nx as isize)
        .into_par_iter()
        .map(|i| {
            let mut f = vec![0.0; n + 2 * g];
            let mut v = vec![0.0; n + 2 * g];
            gather_pencil_y(flux, i, &mut f);
            gather_pencil_y(visc, i, &mut v);
            let mut hat = vec![0.0; n + 1];
            lf_interface_pencil(&f, &v, lambda, cfg, n, &mut hat);
            let mut d = vec![0.0; n];
            for jj in 0..n {
                d[jj] = (hat[jj + 1] - hat[jj]) / grid.dy;
            }
            d
        })
        .collect();
    let mut out = Field::zeros(&grid);
    for (i, col) in cols.iter().enumerate() {
        for (j, val) in col.iter().enumerate() {
            out.set(i as isize, j as isize, *val);
        }
    }
    out
}

/// Divergence of a vector field (per-axis fluxes with per-axis viscosities).
pub fn div_w(
    flux: (&Field, Option<&Field>),
    visc: (&Field, Option<&Field>),
    lambda: f64,
    cfg: &WenoConfig,
) -> Field {
    let mut d = div_w_x(flux.0, visc.0, lambda, cfg);
    if let (Some(fy), Some(vy)) = (flux.1, visc.1) {
        let dy = div_w_y(fy, vy, lambda, cfg);
        for (a, b) in d.raw_mut().iter_mut().zip(dy.raw().iter()) {
            *a += *b;
        }
    }
    d
}

fn biased_derivative_pencil(t: &[f64], cfg: &WenoConfig, n: usize, h: f64, dm: &mut [f64], dp: &mut [f64]) {
    let g = GHOST;
    // Interface values with pure left bias and pure right bias.
    let mut left = vec![0.0; n + 1];
    let mut right = vec![0.0; n + 1];
    let mut w = [0.0f64; 5];
    for m in 0..=n {
        for k in 0..5 {
            w[k] = t[m + k + g - 3];
        }
        left[m] = weno::reconstruct_left(&w, cfg);
        for k in 0..5 {
            w[k] = t[m + k + g - 2];
        }
        right[m] = weno::reconstruct_left(&weno::mirror(&w), cfg);
    }
    for i in 0..n {
        dm[i] = (left[i + 1] - left[i]) / h;
        dp[i] = (right[i + 1] - right[i]) / h;
    }
}

/// Upwind advection term u . grad(theta2): per axis the biased WENO derivative
/// selected by the sign of the local velocity; ties average the two sides.
pub fn grad_uw(
    theta: &Field,
    vel: (&Field, Option<&Field>),
    cfg: &WenoConfig,
) -> Field {
    let grid = theta.grid.clone();
    let mut out = advect_axis(theta, vel.0, cfg, 0);
    if grid.dim == 2 {
        let vy = vel.1.expect("2D advection requires the y velocity");
        let oy = advect_axis(theta, vy, cfg, 1);
        for (a, b) in out.raw_mut().iter_mut().zip(oy.raw().iter()) {
            *a += *b;
        }
    }
    out
}

fn advect_axis(theta: &Field, vel: &Field, cfg: &WenoConfig, axis: usize) -> Field {
    let grid: Arc<Grid> = theta.grid.clone();
    let g = GHOST;
    let (n, npencil, h) = if axis == 0 {
        (grid.nx, grid.ny, grid.dx)
    } else {
        (grid.ny, grid.nx, grid.dy)
    };
    let pencils: Vec<Vec<f64>> = (0..npencil as isize)
        .into_par_iter()
        .map(|q| {
            let mut t = vec![0.0; n + 2 * g];
            for k in 0..n + 2 * g {
                let r = k as isize - g as isize;
                t[k] = if axis == 0 { theta.at(r, q) } else { theta.at(q, r) };
            }
            let mut dm = vec![0.0; n];
            let mut dp = vec![0.0; n];
            biased_derivative_pencil(&t, cfg, n, h, &mut dm, &mut dp);
            let mut res = vec![0.0; n];
            for r in 0..n {
                let u = if axis == 0 {
                    vel.at(r as isize, q)
                } else {
                    vel.at(q, r as isize)
                };
                let d = if u > 0.0 {
                    dm[r]
                } else if u < 0.0 {
                    dp[r]
                } else {
                    0.5 * (dm[r] + dp[r])
                };
                res[r] = u * d;
            }
            res
        })
        .collect();
    let mut out = Field::zeros(&grid);
    for (q, pen) in pencils.iter().enumerate() {
        for (r, val) in pen.iter().enumerate() {
            if axis == 0 {
                out.set(r as isize, q as isize, *val);
            } else {
                out.set(q as isize, r as isize, *val);
            }
        }
    }
    out
}
