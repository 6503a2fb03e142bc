use crate::error::{Result, SolverError};
use crate::field::{Field, State};
use crate::grid::Grid;
use crate::params::SimParams;
use std::sync::Arc;

pub type Scalar2d = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Hydrostatic background (rho0, p0, theta0) together with the gravitational
/// potential and its analytic gradient. Gradients of the background fields are
/// optional; the residual check falls back to central differences without them.
#[derive(Clone)]
pub struct HydrostaticState {
    pub rho0: Scalar2d,
    pub p0: Scalar2d,
    pub theta0: Scalar2d,
    pub phi: Scalar2d,
    pub grad_phi: [Scalar2d; 2],
    pub grad_p0: Option<[Scalar2d; 2]>,
    pub grad_theta0: Option<[Scalar2d; 2]>,
    pub theta0_constant: bool,
}

impl std::fmt::Debug for HydrostaticState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HydrostaticState")
            .field("theta0_constant", &self.theta0_constant)
            .field("has_grad_p0", &self.grad_p0.is_some())
            .finish()
    }
}

fn constant(v: f64) -> Scalar2d {
    Arc::new(move |_, _| v)
}

impl HydrostaticState {
    /// Background with constant fields and flat potential; useful in tests.
    pub fn uniform(rho0: f64, p0: f64, gamma: f64) -> Self {
        let theta0 = p0.powf(1.0 / gamma) / rho0;
        HydrostaticState {
            rho0: constant(rho0),
            p0: constant(p0),
            theta0: constant(theta0),
            phi: constant(0.0),
            grad_phi: [constant(0.0), constant(0.0)],
            grad_p0: Some([constant(0.0), constant(0.0)]),
            grad_theta0: Some([constant(0.0), constant(0.0)]),
            theta0_constant: true,
        }
    }

    /// Max-norm of grad p0 + rho0 grad Phi sampled on the interior.
    /// Falls back to 4th-order central differences when grad p0 is absent.
    pub fn hydrostatic_residual(&self, grid: &Grid) -> f64 {
        let mut worst = 0.0f64;
        match &self.grad_p0 {
            Some(gp) => {
                for (i, j) in grid.interior() {
                    let (x, y) = (grid.x(i), grid.y(j));
                    let r0 = (self.rho0)(x, y);
                    let rx = gp[0](x, y) + r0 * (self.grad_phi[0])(x, y);
                    worst = worst.max(rx.abs());
                    if grid.dim == 2 {
                        let ry = gp[1](x, y) + r0 * (self.grad_phi[1])(x, y);
                        worst = worst.max(ry.abs());
                    }
                }
            }
            None => {
                let d4 = |f: &Scalar2d, x: f64, y: f64, h: f64, axis: usize| {
                    let ev = |s: f64| {
                        if axis == 0 {
                            f(x + s * h, y)
                        } else {
                            f(x, y + s * h)
                        }
                    };
                    (8.0 * (ev(1.0) - ev(-1.0)) - (ev(2.0) - ev(-2.0))) / (12.0 * h)
                };
                for (i, j) in grid.interior() {
                    let (x, y) = (grid.x(i), grid.y(j));
                    let r0 = (self.rho0)(x, y);
                    let rx = d4(&self.p0, x, y, grid.dx, 0) + r0 * (self.grad_phi[0])(x, y);
                    worst = worst.max(rx.abs());
                    if grid.dim == 2 {
                        let ry = d4(&self.p0, x, y, grid.dy, 1) + r0 * (self.grad_phi[1])(x, y);
                        worst = worst.max(ry.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn sample(&self, grid: &Arc<Grid>, gamma: f64) -> SampledHydro {
        let rho0 = Field::sample(grid, |x, y| (self.rho0)(x, y));
        let p0 = Field::sample(grid, |x, y| (self.p0)(x, y));
        let theta0 = Field::sample(grid, |x, y| (self.theta0)(x, y));
        let e0 = Field::sample(grid, |x, y| (self.p0)(x, y) / (gamma - 1.0));
        let phi_x = Field::sample(grid, |x, y| (self.grad_phi[0])(x, y));
        let phi_y = Field::sample(grid, |x, y| (self.grad_phi[1])(x, y));
        let gt = self.grad_theta0.as_ref();
        let theta0_x = Field::sample(grid, |x, y| gt.map_or(0.0, |g| g[0](x, y)));
        let theta0_y = Field::sample(grid, |x, y| gt.map_or(0.0, |g| g[1](x, y)));
        SampledHydro {
            grid: grid.clone(),
            rho0,
            p0,
            theta0,
            e0,
            phi_x,
            phi_y,
            theta0_x,
            theta0_y,
            theta0_constant: self.theta0_constant,
        }
    }
}

/// Background fields cached on one grid (ghosts included).
#[derive(Debug, Clone)]
pub struct SampledHydro {
    pub grid: Arc<Grid>,
    pub rho0: Field,
    pub p0: Field,
    pub theta0: Field,
    /// p0 / (gamma - 1): the energy of the zero-velocity equilibrium.
    pub e0: Field,
    pub phi_x: Field,
    pub phi_y: Field,
    pub theta0_x: Field,
    pub theta0_y: Field,
    pub theta0_constant: bool,
}

/// Perturbation fields rho2 = (rho - rho0)/eps^2, p2 = (p - p0)/eps^2.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub rho2: Field,
    pub p2: Field,
}

impl Perturbation {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Perturbation { rho2: Field::zeros(grid), p2: Field::zeros(grid) }
    }
}

/// Extract (rho2, p2) from a state against the background. Requires eps > 0;
/// at eps = 0 the perturbations live only in the elliptic solve history.
pub fn perturbation_extract(
    state: &State,
    hydro: &SampledHydro,
    params: &SimParams,
) -> Result<Perturbation> {
    if params.eps <= 0.0 {
        return Err(SolverError::MissingPerturbation);
    }
    let grid = state.grid().clone();
    let eps2 = params.eps * params.eps;
    let mut out = Perturbation::zeros(&grid);
    let gx = grid.gx() as isize;
    let gy = grid.gy() as isize;
    for j in -gy..grid.ny as isize + gy {
        for i in -gx..grid.nx as isize + gx {
            let rho = state.rho.at(i, j);
            let p = crate::eos::pressure_raw(
                rho,
                state.qx.at(i, j),
                state.qy_at(i, j),
                state.e.at(i, j),
                eps2,
                params.gamma,
            );
            out.rho2.set(i, j, (rho - hydro.rho0.at(i, j)) / eps2);
            out.p2.set(i, j, (p - hydro.p0.at(i, j)) / eps2);
        }
    }
    Ok(out)
}
