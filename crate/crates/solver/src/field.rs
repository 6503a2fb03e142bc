use crate::grid::Grid;
use std::ops::{Index, IndexMut};
use std::sync::Arc;

/// Scalar grid function stored with ghost layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Arc<Grid>,
    data: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Field { grid: grid.clone(), data: vec![0.0; grid.len()] }
    }

    /// Sample `f(x, y)` at every node, ghosts included.
    pub fn sample(grid: &Arc<Grid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut out = Field::zeros(grid);
        let gx = grid.gx() as isize;
        let gy = grid.gy() as isize;
        for j in -gy..grid.ny as isize + gy {
            for i in -gx..grid.nx as isize + gx {
                out[(i, j)] = f(grid.x(i), grid.y(j));
            }
        }
        out
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> f64 {
        self.data[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: isize, j: isize, v: f64) {
        let k = self.grid.idx(i, j);
        self.data[k] = v;
    }

    pub fn fill_value(&mut self, v: f64) {
        self.data.fill(v);
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    pub fn raw_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Apply `f` nodewise over the interior, writing into self.
    pub fn assign_interior(&mut self, f: impl Fn(isize, isize) -> f64) {
        for j in 0..self.grid.ny as isize {
            for i in 0..self.grid.nx as isize {
                let k = self.grid.idx(i, j);
                self.data[k] = f(i, j);
            }
        }
    }

    /// Max-norm over interior nodes, fixed traversal order.
    pub fn max_abs_interior(&self) -> f64 {
        let mut m = 0.0f64;
        for (i, j) in self.grid.interior() {
            m = m.max(self.at(i, j).abs());
        }
        m
    }

    /// Plain interior sum in a fixed order.
    pub fn sum_interior(&self) -> f64 {
        let mut s = 0.0;
        for (i, j) in self.grid.interior() {
            s += self.at(i, j);
        }
        s
    }

    pub fn has_nan_interior(&self) -> bool {
        self.grid.interior().any(|(i, j)| !self.at(i, j).is_finite())
    }
}

impl Index<(isize, isize)> for Field {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (isize, isize)) -> &f64 {
        &self.data[self.grid.idx(i, j)]
    }
}

impl IndexMut<(isize, isize)> for Field {
    #[inline]
    fn index_mut(&mut self, (i, j): (isize, isize)) -> &mut f64 {
        let k = self.grid.idx(i, j);
        &mut self.data[k]
    }
}

/// Conserved state (rho, q, E, theta2) on one grid. `qy` is present only in 2D.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub rho: Field,
    pub qx: Field,
    pub qy: Option<Field>,
    pub e: Field,
    pub theta2: Field,
}

impl State {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        State {
            rho: Field::zeros(grid),
            qx: Field::zeros(grid),
            qy: if grid.dim == 2 { Some(Field::zeros(grid)) } else { None },
            e: Field::zeros(grid),
            theta2: Field::zeros(grid),
        }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid> {
        &self.rho.grid
    }

    #[inline]
    pub fn qy_at(&self, i: isize, j: isize) -> f64 {
        self.qy.as_ref().map_or(0.0, |q| q.at(i, j))
    }

    /// Linear combination accumulate: self += c * other (interior and ghosts).
    pub fn axpy(&mut self, c: f64, other: &State) {
        let add = |a: &mut Field, b: &Field| {
            for (x, y) in a.raw_mut().iter_mut().zip(b.raw().iter()) {
                *x += c * *y;
            }
        };
        add(&mut self.rho, &other.rho);
        add(&mut self.qx, &other.qx);
        if let (Some(a), Some(b)) = (self.qy.as_mut(), other.qy.as_ref()) {
            for (x, y) in a.raw_mut().iter_mut().zip(b.raw().iter()) {
                *x += c * *y;
            }
        }
        add(&mut self.e, &other.e);
        add(&mut self.theta2, &other.theta2);
    }

    pub fn has_nan_interior(&self) -> bool {
        self.rho.has_nan_interior()
            || self.qx.has_nan_interior()
            || self.qy.as_ref().is_some_and(|q| q.has_nan_interior())
            || self.e.has_nan_interior()
            || self.theta2.has_nan_interior()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    #[test]
    fn sample_covers_ghosts() {
        let g = Arc::new(Grid::new_1d(0.0, 1.0, 8).unwrap());
        let f = Field::sample(&g, |x, _| x);
        assert_eq!(f.at(-1, 0), g.x(-1));
        assert_eq!(f.at(8, 0), g.x(8));
    }

    #[test]
    fn axpy_matches_manual_update() {
        let g = Arc::new(Grid::new_1d(0.0, 1.0, 4).unwrap());
        let mut a = State::zeros(&g);
        let mut b = State::zeros(&g);
        b.rho.fill_value(2.0);
        a.axpy(0.5, &b);
        assert_eq!(a.rho.at(0, 0), 1.0);
        a.axpy(-0.5, &b);
        assert_eq!(a.rho.at(2, 0), 0.0);
        let _ = &mut b;
    }
}
