//! Assembly and solution of the stage elliptic equation
//!   eps^2 r - sigma (Lap(a r) + div(r grad Phi)) = rhs,
//! with a = gamma p0 theta / (rho0 theta0) and sigma = (dt a_ii)^2 (1-eps^2)^2,
//! discretized with conservative 4th-order central differences.

use crate::boundary::{BcKind, BoundarySpec};
use crate::error::{Result, SolverError};
use crate::field::Field;
use crate::grid::{Grid, GHOST};
use crate::hydrostatic::SampledHydro;
use crate::params::SimParams;
use std::sync::Arc;

/// Ghost closure for the scalar elliptic unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhostRule {
    Periodic,
    MirrorEven,
    Extrapolate,
    /// Homogeneous ghosts; inhomogeneous boundary data enters through the rhs.
    Zero,
}

impl GhostRule {
    pub fn from_bc(kind: BcKind) -> Self {
        match kind {
            BcKind::Periodic => GhostRule::Periodic,
            BcKind::Inflow => GhostRule::Zero,
            BcKind::Outflow => GhostRule::Extrapolate,
            BcKind::TransmissiveSplit | BcKind::InviscidWall => GhostRule::MirrorEven,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarClosure {
    pub x_lo: GhostRule,
    pub x_hi: GhostRule,
    pub y_lo: GhostRule,
    pub y_hi: GhostRule,
}

impl From<&BoundarySpec> for ScalarClosure {
    fn from(spec: &BoundarySpec) -> Self {
        ScalarClosure {
            x_lo: GhostRule::from_bc(spec.x_lo),
            x_hi: GhostRule::from_bc(spec.x_hi),
            y_lo: GhostRule::from_bc(spec.y_lo),
            y_hi: GhostRule::from_bc(spec.y_hi),
        }
    }
}

/// Fill the ghost frame of `f` according to the closure rules (x before y).
pub fn fill_rule_ghosts(f: &mut Field, cl: &ScalarClosure) {
    let grid = f.grid.clone();
    let g = GHOST as isize;
    let nx = grid.nx as isize;
    let ny = grid.ny as isize;
    for j in 0..ny {
        for k in 1..=g {
            let v = match cl.x_lo {
                GhostRule::Periodic => f.at(nx - k, j),
                GhostRule::MirrorEven => f.at(k - 1, j),
                GhostRule::Extrapolate => f.at(0, j),
                GhostRule::Zero => 0.0,
            };
            f.set(-k, j, v);
            let v = match cl.x_hi {
                GhostRule::Periodic => f.at(k - 1, j),
                GhostRule::MirrorEven => f.at(nx - k, j),
                GhostRule::Extrapolate => f.at(nx - 1, j),
                GhostRule::Zero => 0.0,
            };
            f.set(nx - 1 + k, j, v);
        }
    }
    if grid.dim == 2 {
        for i in -g..nx + g {
            for k in 1..=g {
                let v = match cl.y_lo {
                    GhostRule::Periodic => f.at(i, ny - k),
                    GhostRule::MirrorEven => f.at(i, k - 1),
                    GhostRule::Extrapolate => f.at(i, 0),
                    GhostRule::Zero => 0.0,
                };
                f.set(i, -k, v);
                let v = match cl.y_hi {
                    GhostRule::Periodic => f.at(i, k - 1),
                    GhostRule::MirrorEven => f.at(i, ny - k),
                    GhostRule::Extrapolate => f.at(i, ny - 1),
                    GhostRule::Zero => 0.0,
                };
                f.set(i, ny - 1 + k, v);
            }
        }
    }
}

/// Matrix-free Helmholtz-type operator for the stage solve.
///
/// Both divergence terms use flux-form differences whose interface values are
/// the 4th-order "h-function" reconstructions, so the composite operator is
/// genuinely 4th-order accurate:
///   gradient flux  (v_{i-1} - 15 v_i + 15 v_{i+1} - v_{i+2}) / (12 h),
///   advective flux (-w_{i-1} + 7 w_i + 7 w_{i+1} - w_{i+2}) / 12,
/// with w the nodal product x * dPhi.
pub struct HelmholtzOp {
    pub grid: Arc<Grid>,
    pub eps2: f64,
    pub sigma: f64,
    /// Coefficient a = gamma p0 theta / (rho0 theta0), ghosts included.
    pub coeff: Field,
    pub closure: ScalarClosure,
    /// Nodal d(Phi)/dx with ghosts.
    phi_x: Field,
    /// Nodal d(Phi)/dy with ghosts (unused in 1D).
    phi_y: Field,
}

#[inline]
fn grad_flux(vm2: f64, vm1: f64, v0: f64, vp1: f64, inv12h: f64) -> f64 {
    (vm2 - 15.0 * vm1 + 15.0 * v0 - vp1) * inv12h
}

#[inline]
fn interp_flux(wm2: f64, wm1: f64, w0: f64, wp1: f64) -> f64 {
    (-wm2 + 7.0 * wm1 + 7.0 * w0 - wp1) / 12.0
}

impl HelmholtzOp {
    pub fn new(
        grid: &Arc<Grid>,
        eps2: f64,
        sigma: f64,
        coeff: Field,
        closure: ScalarClosure,
        phi_x: Field,
        phi_y: Field,
    ) -> Self {
        HelmholtzOp { grid: grid.clone(), eps2, sigma, coeff, closure, phi_x, phi_y }
    }

    /// Conservative 4th-order Laplacian of an already ghost-filled field.
    pub fn laplacian(&self, v: &Field) -> Field {
        let grid = &self.grid;
        let mut out = Field::zeros(grid);
        let inv12x = 1.0 / (12.0 * grid.dx);
        for j in 0..grid.ny as isize {
            let mut fx = vec![0.0; grid.nx + 1];
            for (m, slot) in fx.iter_mut().enumerate() {
                let m = m as isize;
                *slot = grad_flux(v.at(m - 2, j), v.at(m - 1, j), v.at(m, j), v.at(m + 1, j), inv12x);
            }
            for i in 0..grid.nx {
                out.set(i as isize, j, (fx[i + 1] - fx[i]) / grid.dx);
            }
        }
        if grid.dim == 2 {
            let inv12y = 1.0 / (12.0 * grid.dy);
            for i in 0..grid.nx as isize {
                let mut fy = vec![0.0; grid.ny + 1];
                for (m, slot) in fy.iter_mut().enumerate() {
                    let m = m as isize;
                    *slot =
                        grad_flux(v.at(i, m - 2), v.at(i, m - 1), v.at(i, m), v.at(i, m + 1), inv12y);
                }
                for jj in 0..grid.ny {
                    let prev = out.at(i, jj as isize);
                    out.set(i, jj as isize, prev + (fy[jj + 1] - fy[jj]) / grid.dy);
                }
            }
        }
        out
    }

    /// Apply the operator to an interior field (ghosts filled by the closure).
    pub fn apply(&self, x: &Field) -> Field {
        let mut xt = x.clone();
        fill_rule_ghosts(&mut xt, &self.closure);
        self.apply_ghosted(&xt)
    }

    /// Apply to a field whose ghost frame the caller controls.
    pub fn apply_ghosted(&self, xt: &Field) -> Field {
        let grid = &self.grid;
        let gx = grid.gx() as isize;
        let gy = grid.gy() as isize;
        // v = a x and w = x dPhi over every node.
        let mut v = Field::zeros(grid);
        let mut wx = Field::zeros(grid);
        let mut wy = Field::zeros(grid);
        for j in -gy..grid.ny as isize + gy {
            for i in -gx..grid.nx as isize + gx {
                let x = xt.at(i, j);
                v.set(i, j, self.coeff.at(i, j) * x);
                wx.set(i, j, self.phi_x.at(i, j) * x);
                if grid.dim == 2 {
                    wy.set(i, j, self.phi_y.at(i, j) * x);
                }
            }
        }
        let mut out = Field::zeros(grid);
        let inv12x = 1.0 / (12.0 * grid.dx);
        for j in 0..grid.ny as isize {
            let mut fx = vec![0.0; grid.nx + 1];
            for (m, slot) in fx.iter_mut().enumerate() {
                let m = m as isize;
                *slot = grad_flux(v.at(m - 2, j), v.at(m - 1, j), v.at(m, j), v.at(m + 1, j), inv12x)
                    + interp_flux(wx.at(m - 2, j), wx.at(m - 1, j), wx.at(m, j), wx.at(m + 1, j));
            }
            for i in 0..grid.nx {
                out.set(i as isize, j, (fx[i + 1] - fx[i]) / grid.dx);
            }
        }
        if grid.dim == 2 {
            let inv12y = 1.0 / (12.0 * grid.dy);
            for i in 0..grid.nx as isize {
                let mut fy = vec![0.0; grid.ny + 1];
                for (m, slot) in fy.iter_mut().enumerate() {
                    let m = m as isize;
                    *slot =
                        grad_flux(v.at(i, m - 2), v.at(i, m - 1), v.at(i, m), v.at(i, m + 1), inv12y)
                            + interp_flux(wy.at(i, m - 2), wy.at(i, m - 1), wy.at(i, m), wy.at(i, m + 1));
                }
                for jj in 0..grid.ny {
                    let prev = out.at(i, jj as isize);
                    out.set(i, jj as isize, prev + (fy[jj + 1] - fy[jj]) / grid.dy);
                }
            }
        }
        let mut res = Field::zeros(grid);
        for (i, j) in grid.interior() {
            res.set(i, j, self.eps2 * xt.at(i, j) - self.sigma * out.at(i, j));
        }
        res
    }

    /// Interior-stencil Jacobi diagonal (boundary folding ignored; the nodal
    /// advective flux has zero diagonal footprint).
    fn jacobi_diagonal(&self) -> Field {
        let grid = &self.grid;
        let mut d = Field::zeros(grid);
        let cx = 2.5 / (grid.dx * grid.dx);
        let cy = if grid.dim == 2 { 2.5 / (grid.dy * grid.dy) } else { 0.0 };
        for (i, j) in grid.interior() {
            let a = self.coeff.at(i, j);
            let val = self.eps2 + self.sigma * a * (cx + cy);
            d.set(i, j, if val.abs() > 1e-300 { val } else { 1.0 });
        }
        d
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveStats {
    pub iters: usize,
    pub residual: f64,
}

fn dot(a: &Field, b: &Field) -> f64 {
    let mut s = 0.0;
    for (i, j) in a.grid.interior() {
        s += a.at(i, j) * b.at(i, j);
    }
    s
}

fn norm2(a: &Field) -> f64 {
    dot(a, a).sqrt()
}

fn mean_interior(a: &Field) -> f64 {
    a.sum_interior() / (a.grid.nx * a.grid.ny) as f64
}

/// Solve op(x) = rhs with BiCGStab and Jacobi preconditioning.
///
/// With `singular` set (eps = 0 on a fully periodic domain), the rhs is
/// projected onto zero mean before the solve and the result is mean-corrected;
/// conservative telescoping keeps every Krylov vector mean-free, so the final
/// correction sits at rounding level.
pub fn solve_rho2(
    op: &HelmholtzOp,
    rhs: &Field,
    params: &SimParams,
    singular: bool,
) -> Result<(Field, SolveStats)> {
    let grid = op.grid.clone();
    if op.sigma == 0.0 {
        // The elliptic coupling is inactive; eps^2 rho2 = rhs.
        let mut x = Field::zeros(&grid);
        for (i, j) in grid.interior() {
            x.set(i, j, rhs.at(i, j) / op.eps2);
        }
        return Ok((x, SolveStats { iters: 0, residual: 0.0 }));
    }

    let rhs_scale = norm2(rhs);
    let mut b = rhs.clone();
    if singular {
        let m = mean_interior(&b);
        for (i, j) in grid.interior() {
            let v = b.at(i, j) - m;
            b.set(i, j, v);
        }
    }
    let bnorm = norm2(&b);
    // A compatible part at rounding level (or an exactly zero rhs) solves to zero.
    if bnorm == 0.0 || bnorm <= 1e-13 * rhs_scale {
        return Ok((Field::zeros(&grid), SolveStats { iters: 0, residual: 0.0 }));
    }

    let diag = op.jacobi_diagonal();
    let precond = |r: &Field| {
        let mut z = Field::zeros(&grid);
        for (i, j) in grid.interior() {
            z.set(i, j, r.at(i, j) / diag.at(i, j));
        }
        z
    };

    let finalize = |mut x: Field| {
        if singular {
            let m = mean_interior(&x);
            for (i, j) in grid.interior() {
                let v = x.at(i, j) - m;
                x.set(i, j, v);
            }
        }
        x
    };

    let mut x = Field::zeros(&grid);
    let mut r = b.clone();
    let rhat = r.clone();
    let mut rho = 1.0f64;
    let mut alpha = 1.0f64;
    let mut omega = 1.0f64;
    let mut v = Field::zeros(&grid);
    let mut p = Field::zeros(&grid);
    let tol = params.solver_tol;

    for it in 1..=params.solver_max_iter {
        let rho1 = dot(&rhat, &r);
        if rho1.abs() < 1e-300 {
            return Err(SolverError::SolverStall { iters: it, residual: norm2(&r) / bnorm });
        }
        let beta = (rho1 / rho) * (alpha / omega);
        rho = rho1;
        for (i, j) in grid.interior() {
            let val = r.at(i, j) + beta * (p.at(i, j) - omega * v.at(i, j));
            p.set(i, j, val);
        }
        let phat = precond(&p);
        v = op.apply(&phat);
        let rv = dot(&rhat, &v);
        if rv.abs() < 1e-300 {
            return Err(SolverError::SolverStall { iters: it, residual: norm2(&r) / bnorm });
        }
        alpha = rho / rv;
        let mut s = Field::zeros(&grid);
        for (i, j) in grid.interior() {
            s.set(i, j, r.at(i, j) - alpha * v.at(i, j));
        }
        let snorm = norm2(&s) / bnorm;
        if snorm <= tol {
            for (i, j) in grid.interior() {
                let val = x.at(i, j) + alpha * phat.at(i, j);
                x.set(i, j, val);
            }
            return Ok((finalize(x), SolveStats { iters: it, residual: snorm }));
        }
        let shat = precond(&s);
        let t = op.apply(&shat);
        let tt = dot(&t, &t);
        if tt.abs() < 1e-300 {
            return Err(SolverError::SolverStall { iters: it, residual: snorm });
        }
        omega = dot(&t, &s) / tt;
        for (i, j) in grid.interior() {
            let val = x.at(i, j) + alpha * phat.at(i, j) + omega * shat.at(i, j);
            x.set(i, j, val);
        }
        for (i, j) in grid.interior() {
            let val = s.at(i, j) - omega * t.at(i, j);
            r.set(i, j, val);
        }
        let res = norm2(&r) / bnorm;
        if res <= tol {
            return Ok((finalize(x), SolveStats { iters: it, residual: res }));
        }
    }
    Err(SolverError::SolverStall { iters: params.solver_max_iter, residual: norm2(&r) / bnorm })
}

/// Linearized pressure perturbation closure
/// p2 = gamma p0 / (rho0 theta0) (rho0 theta2 + rho2 theta), theta = theta0 + eps^2 theta2.
pub fn p2_from_rho2(
    rho2: &Field,
    theta2: &Field,
    hydro: &SampledHydro,
    params: &SimParams,
) -> Field {
    let grid = rho2.grid.clone();
    let eps2 = params.eps * params.eps;
    let gamma = params.gamma;
    let mut out = Field::zeros(&grid);
    let gx = grid.gx() as isize;
    let gy = grid.gy() as isize;
    for j in -gy..grid.ny as isize + gy {
        for i in -gx..grid.nx as isize + gx {
            let p0 = hydro.p0.at(i, j);
            let r0 = hydro.rho0.at(i, j);
            let t0 = hydro.theta0.at(i, j);
            let theta = t0 + eps2 * theta2.at(i, j);
            out.set(i, j, gamma * p0 / (r0 * t0) * (r0 * theta2.at(i, j) + rho2.at(i, j) * theta));
        }
    }
    out
}
