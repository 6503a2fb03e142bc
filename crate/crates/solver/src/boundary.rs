//! Ghost-layer fills. The transmissive and wall treatments act on the
//! hydrostatic split U = U0 + U' with U0 = (rho0, 0, p0/(gamma-1), theta0):
//! U' is mirrored (normal momentum odd at walls, everything else even) while
//! U0 comes from the analytic background.

use crate::error::{Result, SolverError};
use crate::field::{Field, State};
use crate::grid::GHOST;
use crate::hydrostatic::{Perturbation, SampledHydro};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Periodic,
    /// Pin ghosts to a prescribed exterior state.
    Inflow,
    /// Zeroth-order extrapolation of the conserved variables.
    Outflow,
    /// Mirror the perturbation evenly; background analytic.
    TransmissiveSplit,
    /// Mirror the perturbation with odd normal momentum; background analytic.
    InviscidWall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySpec {
    pub x_lo: BcKind,
    pub x_hi: BcKind,
    pub y_lo: BcKind,
    pub y_hi: BcKind,
}

impl BoundarySpec {
    pub fn all(kind: BcKind) -> Self {
        BoundarySpec { x_lo: kind, x_hi: kind, y_lo: kind, y_hi: kind }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let paired = |a: BcKind, b: BcKind| (a == BcKind::Periodic) == (b == BcKind::Periodic);
        if !paired(self.x_lo, self.x_hi) {
            return Err(SolverError::Config("periodic x boundary must be paired".into()));
        }
        if dim == 2 && !paired(self.y_lo, self.y_hi) {
            return Err(SolverError::Config("periodic y boundary must be paired".into()));
        }
        Ok(())
    }

    pub fn is_fully_periodic(&self, dim: usize) -> bool {
        self.x_lo == BcKind::Periodic && (dim == 1 || self.y_lo == BcKind::Periodic)
    }
}

/// Parity class of a standalone scalar/momentum field under mirror fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldClass {
    /// Perturbation scalar (rho2, p2, theta2): even under every mirror.
    Scalar,
    /// x-momentum-like: odd across walls normal to x.
    MomentumX,
    /// y-momentum-like: odd across walls normal to y.
    MomentumY,
}

/// Prescribed exterior data used by inflow sides.
#[derive(Debug, Clone)]
pub struct Pinned {
    pub state: State,
    pub pert: Perturbation,
}

pub struct BoundaryCtx<'a> {
    pub spec: &'a BoundarySpec,
    pub hydro: &'a SampledHydro,
    pub pinned: Option<&'a Pinned>,
}

#[derive(Clone, Copy)]
enum Side {
    XLo,
    XHi,
    YLo,
    YHi,
}

impl Side {
    fn kind(self, spec: &BoundarySpec) -> BcKind {
        match self {
            Side::XLo => spec.x_lo,
            Side::XHi => spec.x_hi,
            Side::YLo => spec.y_lo,
            Side::YHi => spec.y_hi,
        }
    }

    fn along_x(self) -> bool {
        matches!(self, Side::XLo | Side::XHi)
    }
}

/// Ghost node list for one side. X sides span interior rows only; Y sides
/// span every column so corners resolve deterministically (x before y).
fn ghost_nodes(side: Side, grid: &crate::grid::Grid) -> Vec<(isize, isize)> {
    let g = GHOST as isize;
    let nx = grid.nx as isize;
    let ny = grid.ny as isize;
    let mut out = Vec::new();
    match side {
        Side::XLo => {
            for j in 0..ny {
                for k in 1..=g {
                    out.push((-k, j));
                }
            }
        }
        Side::XHi => {
            for j in 0..ny {
                for k in 1..=g {
                    out.push((nx - 1 + k, j));
                }
            }
        }
        Side::YLo => {
            for i in -g..nx + g {
                for k in 1..=g {
                    out.push((i, -k));
                }
            }
        }
        Side::YHi => {
            for i in -g..nx + g {
                for k in 1..=g {
                    out.push((i, ny - 1 + k));
                }
            }
        }
    }
    out
}

/// Source node for wrap or mirror fills on one side.
fn image(side: Side, grid: &crate::grid::Grid, i: isize, j: isize, periodic: bool) -> (isize, isize) {
    let nx = grid.nx as isize;
    let ny = grid.ny as isize;
    match side {
        Side::XLo => {
            if periodic {
                (i + nx, j)
            } else {
                (-i - 1, j)
            }
        }
        Side::XHi => {
            if periodic {
                (i - nx, j)
            } else {
                (2 * nx - 1 - i, j)
            }
        }
        Side::YLo => {
            if periodic {
                (i, j + ny)
            } else {
                (i, -j - 1)
            }
        }
        Side::YHi => {
            if periodic {
                (i, j - ny)
            } else {
                (i, 2 * ny - 1 - j)
            }
        }
    }
}

/// Edge node for zeroth-order extrapolation.
fn edge(side: Side, grid: &crate::grid::Grid, i: isize, j: isize) -> (isize, isize) {
    let nx = grid.nx as isize;
    let ny = grid.ny as isize;
    match side {
        Side::XLo => (0, j),
        Side::XHi => (nx - 1, j),
        Side::YLo => (i, 0),
        Side::YHi => (i, ny - 1),
    }
}

/// Fill the conserved-state ghost layers per the boundary spec.
pub fn fill_ghosts_state(state: &mut State, ctx: &BoundaryCtx) -> Result<()> {
    let grid = state.grid().clone();
    ctx.spec.validate(grid.dim)?;
    let sides: &[Side] = if grid.dim == 2 {
        &[Side::XLo, Side::XHi, Side::YLo, Side::YHi]
    } else {
        &[Side::XLo, Side::XHi]
    };
    for &side in sides {
        let kind = side.kind(ctx.spec);
        for (i, j) in ghost_nodes(side, &grid) {
            match kind {
                BcKind::Periodic => {
                    let (si, sj) = image(side, &grid, i, j, true);
                    copy_state_node(state, i, j, si, sj);
                }
                BcKind::Inflow => {
                    let pin = ctx.pinned.ok_or_else(|| {
                        SolverError::Config("inflow boundary without prescribed state".into())
                    })?;
                    state.rho.set(i, j, pin.state.rho.at(i, j));
                    state.qx.set(i, j, pin.state.qx.at(i, j));
                    if let Some(qy) = state.qy.as_mut() {
                        qy.set(i, j, pin.state.qy.as_ref().unwrap().at(i, j));
                    }
                    state.e.set(i, j, pin.state.e.at(i, j));
                    state.theta2.set(i, j, pin.state.theta2.at(i, j));
                }
                BcKind::Outflow => {
                    let (si, sj) = edge(side, &grid, i, j);
                    copy_state_node(state, i, j, si, sj);
                }
                BcKind::TransmissiveSplit | BcKind::InviscidWall => {
                    let (si, sj) = image(side, &grid, i, j, false);
                    let h = ctx.hydro;
                    let rho_p = state.rho.at(si, sj) - h.rho0.at(si, sj);
                    let e_p = state.e.at(si, sj) - h.e0.at(si, sj);
                    let mut qx_p = state.qx.at(si, sj);
                    let mut qy_p = state.qy_at(si, sj);
                    if kind == BcKind::InviscidWall {
                        if side.along_x() {
                            qx_p = -qx_p;
                        } else {
                            qy_p = -qy_p;
                        }
                    }
                    state.rho.set(i, j, h.rho0.at(i, j) + rho_p);
                    state.qx.set(i, j, qx_p);
                    if let Some(qy) = state.qy.as_mut() {
                        qy.set(i, j, qy_p);
                    }
                    state.e.set(i, j, h.e0.at(i, j) + e_p);
                    let t2 = state.theta2.at(si, sj);
                    state.theta2.set(i, j, t2);
                }
            }
        }
    }
    Ok(())
}

fn copy_state_node(state: &mut State, i: isize, j: isize, si: isize, sj: isize) {
    let v = state.rho.at(si, sj);
    state.rho.set(i, j, v);
    let v = state.qx.at(si, sj);
    state.qx.set(i, j, v);
    if let Some(qy) = state.qy.as_mut() {
        let v = qy.at(si, sj);
        qy.set(i, j, v);
    }
    let v = state.e.at(si, sj);
    state.e.set(i, j, v);
    let v = state.theta2.at(si, sj);
    state.theta2.set(i, j, v);
}

/// Fill ghosts of a standalone field. `pinned` supplies inflow values.
pub fn fill_ghosts_scalar(
    field: &mut Field,
    class: FieldClass,
    ctx: &BoundaryCtx,
    pinned: Option<&Field>,
) -> Result<()> {
    let grid = field.grid.clone();
    ctx.spec.validate(grid.dim)?;
    let sides: &[Side] = if grid.dim == 2 {
        &[Side::XLo, Side::XHi, Side::YLo, Side::YHi]
    } else {
        &[Side::XLo, Side::XHi]
    };
    for &side in sides {
        let kind = side.kind(ctx.spec);
        for (i, j) in ghost_nodes(side, &grid) {
            let v = match kind {
                BcKind::Periodic => {
                    let (si, sj) = image(side, &grid, i, j, true);
                    field.at(si, sj)
                }
                BcKind::Inflow => pinned
                    .ok_or_else(|| SolverError::Config("inflow fill without pinned field".into()))?
                    .at(i, j),
                BcKind::Outflow => {
                    let (si, sj) = edge(side, &grid, i, j);
                    field.at(si, sj)
                }
                BcKind::TransmissiveSplit | BcKind::InviscidWall => {
                    let (si, sj) = image(side, &grid, i, j, false);
                    let mut v = field.at(si, sj);
                    if kind == BcKind::InviscidWall {
                        let odd = (class == FieldClass::MomentumX && side.along_x())
                            || (class == FieldClass::MomentumY && !side.along_x());
                        if odd {
                            v = -v;
                        }
                    }
                    v
                }
            };
            field.set(i, j, v);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::eos_total_energy;
    use crate::grid::Grid;
    use crate::hydrostatic::HydrostaticState;
    use crate::params::SimParams;
    use std::sync::Arc;

    fn ctx_uniform<'a>(hydro: &'a SampledHydro, spec: &'a BoundarySpec) -> BoundaryCtx<'a> {
        BoundaryCtx { spec, hydro, pinned: None }
    }

    #[test]
    fn periodic_wrap_is_exact() {
        let grid = Arc::new(Grid::new_1d(0.0, 1.0, 16).unwrap());
        let prm = SimParams::default();
        let hydro = HydrostaticState::uniform(1.0, 1.0, prm.gamma).sample(&grid, prm.gamma);
        let spec = BoundarySpec::all(BcKind::Periodic);
        let mut s = State::zeros(&grid);
        s.rho.assign_interior(|i, _| (std::f64::consts::TAU * grid.x(i)).sin() + 2.0);
        s.e.fill_value(2.5);
        fill_ghosts_state(&mut s, &ctx_uniform(&hydro, &spec)).unwrap();
        assert_eq!(s.rho.at(-1, 0), s.rho.at(15, 0));
        assert_eq!(s.rho.at(16, 0), s.rho.at(0, 0));
        assert_eq!(s.rho.at(-3, 0), s.rho.at(13, 0));
    }

    #[test]
    fn unpaired_periodic_is_rejected() {
        let spec = BoundarySpec {
            x_lo: BcKind::Periodic,
            x_hi: BcKind::Outflow,
            y_lo: BcKind::Periodic,
            y_hi: BcKind::Periodic,
        };
        assert!(spec.validate(1).is_err());
    }

    #[test]
    fn wall_flips_normal_momentum_only() {
        let grid = Arc::new(Grid::new_2d(0.0, 1.0, 8, 0.0, 1.0, 8).unwrap());
        let prm = SimParams::default();
        let hydro = HydrostaticState::uniform(1.0, 1.0, prm.gamma).sample(&grid, prm.gamma);
        let spec = BoundarySpec::all(BcKind::InviscidWall);
        let mut s = State::zeros(&grid);
        for (i, j) in grid.interior() {
            s.rho.set(i, j, 1.0);
            s.qx.set(i, j, 0.3 + 0.01 * i as f64);
            s.qy.as_mut().unwrap().set(i, j, -0.2 + 0.01 * j as f64);
            s.e.set(i, j, eos_total_energy(1.0, 0.3, -0.2, 1.0, &prm).unwrap());
        }
        fill_ghosts_state(&mut s, &ctx_uniform(&hydro, &spec)).unwrap();
        // y_lo wall: qy odd, qx even.
        assert_eq!(s.qy.as_ref().unwrap().at(2, -1), -s.qy.as_ref().unwrap().at(2, 0));
        assert_eq!(s.qx.at(2, -1), s.qx.at(2, 0));
        // x_lo wall: qx odd, qy even (interior rows were mirrored before y fill).
        assert_eq!(s.qx.at(-2, 3), -s.qx.at(1, 3));
        assert_eq!(s.rho.at(-1, 3), s.rho.at(0, 3));
    }

    #[test]
    fn transmissive_split_preserves_equilibrium_ghosts() {
        let grid = Arc::new(Grid::new_1d(0.0, 2.0, 32).unwrap());
        let gamma = 1.4;
        let ex = 1.0 / (gamma - 1.0);
        let k = (gamma - 1.0) / gamma;
        let h = HydrostaticState {
            rho0: Arc::new(move |x, _| (1.0 - k * x).powf(ex)),
            p0: Arc::new(move |x, _| (1.0 - k * x).powf(ex + 1.0)),
            theta0: Arc::new(|_, _| 1.0),
            phi: Arc::new(|x, _| x),
            grad_phi: [Arc::new(|_, _| 1.0), Arc::new(|_, _| 0.0)],
            grad_p0: None,
            grad_theta0: None,
            theta0_constant: true,
        };
        let hydro = h.sample(&grid, gamma);
        let spec = BoundarySpec::all(BcKind::TransmissiveSplit);
        let mut s = State::zeros(&grid);
        s.rho = hydro.rho0.clone();
        s.e = hydro.e0.clone();
        // Wipe ghost values to prove the fill restores the background there.
        for gk in 1..=3isize {
            s.rho.set(-gk, 0, f64::NAN);
            s.rho.set(31 + gk, 0, f64::NAN);
        }
        fill_ghosts_state(&mut s, &ctx_uniform(&hydro, &spec)).unwrap();
        for gk in 1..=3isize {
            assert_eq!(s.rho.at(-gk, 0), hydro.rho0.at(-gk, 0));
            assert_eq!(s.e.at(31 + gk, 0), hydro.e0.at(31 + gk, 0));
            assert_eq!(s.qx.at(-gk, 0), 0.0);
        }
    }

    #[test]
    fn fills_are_idempotent() {
        let grid = Arc::new(Grid::new_2d(0.0, 1.0, 6, 0.0, 1.0, 5).unwrap());
        let prm = SimParams::default();
        let hydro = HydrostaticState::uniform(1.0, 1.0, prm.gamma).sample(&grid, prm.gamma);
        for kind in [BcKind::Periodic, BcKind::Outflow, BcKind::TransmissiveSplit, BcKind::InviscidWall] {
            let spec = BoundarySpec::all(kind);
            let mut s = State::zeros(&grid);
            for (i, j) in grid.interior() {
                s.rho.set(i, j, 1.0 + 0.1 * (i + 2 * j) as f64);
                s.qx.set(i, j, 0.05 * (i - j) as f64);
                s.qy.as_mut().unwrap().set(i, j, 0.02 * (i * j) as f64);
                s.e.set(i, j, 2.5);
            }
            let ctx = ctx_uniform(&hydro, &spec);
            fill_ghosts_state(&mut s, &ctx).unwrap();
            let once = s.clone();
            fill_ghosts_state(&mut s, &ctx).unwrap();
            assert_eq!(once, s, "{kind:?} fill not idempotent");
        }
    }

    #[test]
    fn periodic_fill_commutes_with_translation() {
        let grid = Arc::new(Grid::new_1d(0.0, 1.0, 12).unwrap());
        let prm = SimParams::default();
        let hydro = HydrostaticState::uniform(1.0, 1.0, prm.gamma).sample(&grid, prm.gamma);
        let spec = BoundarySpec::all(BcKind::Periodic);
        let ctx = ctx_uniform(&hydro, &spec);
        let vals: Vec<f64> = (0..12).map(|i| (i as f64 * 0.7).sin()).collect();
        let shift = 5usize;

        let mut a = State::zeros(&grid);
        a.rho.assign_interior(|i, _| vals[i as usize]);
        fill_ghosts_state(&mut a, &ctx).unwrap();

        let mut b = State::zeros(&grid);
        b.rho.assign_interior(|i, _| vals[(i as usize + shift) % 12]);
        fill_ghosts_state(&mut b, &ctx).unwrap();

        // Translated interior produces translated ghosts.
        for gk in 1..=3isize {
            let ghost_b = b.rho.at(-gk, 0);
            let src = (((-gk + shift as isize) % 12) + 12) % 12;
            assert_eq!(ghost_b, vals[src as usize]);
        }
    }
}
