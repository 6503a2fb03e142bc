use crate::error::{Result, SolverError};

/// Ghost width required by the WENO5 stencils.
pub const GHOST: usize = 3;

/// Uniform cell-centered Cartesian mesh in one or two dimensions.
///
/// Interior nodes are indexed 0..nx (and 0..ny in 2D); node i sits at
/// `xmin + (i + 1/2) dx`. Ghost layers of width [`GHOST`] surround the
/// interior along every active axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub dim: usize,
    pub nx: usize,
    pub ny: usize,
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Grid {
    pub fn new_1d(xmin: f64, xmax: f64, nx: usize) -> Result<Self> {
        if nx == 0 || xmax <= xmin {
            return Err(SolverError::Config(format!(
                "degenerate 1D grid: [{xmin}, {xmax}] with {nx} cells"
            )));
        }
        let dx = (xmax - xmin) / nx as f64;
        Ok(Grid { dim: 1, nx, ny: 1, xmin, xmax, ymin: 0.0, ymax: 0.0, dx, dy: 0.0 })
    }

    pub fn new_2d(xmin: f64, xmax: f64, nx: usize, ymin: f64, ymax: f64, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 || xmax <= xmin || ymax <= ymin {
            return Err(SolverError::Config(format!(
                "degenerate 2D grid: [{xmin}, {xmax}]x[{ymin}, {ymax}] with {nx}x{ny} cells"
            )));
        }
        let dx = (xmax - xmin) / nx as f64;
        let dy = (ymax - ymin) / ny as f64;
        Ok(Grid { dim: 2, nx, ny, xmin, xmax, ymin, ymax, dx, dy })
    }

    #[inline]
    pub fn gx(&self) -> usize {
        GHOST
    }

    #[inline]
    pub fn gy(&self) -> usize {
        if self.dim == 2 {
            GHOST
        } else {
            0
        }
    }

    /// Total storage width along x including ghosts.
    #[inline]
    pub fn width(&self) -> usize {
        self.nx + 2 * self.gx()
    }

    /// Total storage height along y including ghosts.
    #[inline]
    pub fn height(&self) -> usize {
        self.ny + 2 * self.gy()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    /// Flat index of the (possibly ghost) node with interior-based indices.
    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let ii = i + self.gx() as isize;
        let jj = j + self.gy() as isize;
        debug_assert!(ii >= 0 && (ii as usize) < self.width());
        debug_assert!(jj >= 0 && (jj as usize) < self.height());
        jj as usize * self.width() + ii as usize
    }

    /// x-coordinate of interior node i (cell center).
    #[inline]
    pub fn x(&self, i: isize) -> f64 {
        self.xmin + (i as f64 + 0.5) * self.dx
    }

    /// y-coordinate of interior node j (cell center); 0 for 1D grids.
    #[inline]
    pub fn y(&self, j: isize) -> f64 {
        if self.dim == 2 {
            self.ymin + (j as f64 + 0.5) * self.dy
        } else {
            0.0
        }
    }

    /// Smallest active mesh size.
    #[inline]
    pub fn h_min(&self) -> f64 {
        if self.dim == 2 {
            self.dx.min(self.dy)
        } else {
            self.dx
        }
    }

    /// Cell measure (dx in 1D, dx*dy in 2D) for L1 quadrature.
    #[inline]
    pub fn cell_measure(&self) -> f64 {
        if self.dim == 2 {
            self.dx * self.dy
        } else {
            self.dx
        }
    }

    /// Iterate interior (i, j) pairs in a fixed row-major order.
    pub fn interior(&self) -> impl Iterator<Item = (isize, isize)> + '_ {
        let nx = self.nx as isize;
        let ny = self.ny as isize;
        (0..ny).flat_map(move |j| (0..nx).map(move |i| (i, j)))
    }
}
