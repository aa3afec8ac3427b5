use crate::error::{Error, Result};

/// Uniform 2-D sampling lattice for a transverse plane, centered on the
/// optical axis.
///
/// Sample `(row j, col i)` sits at `x = (i - nx/2)*dx`, `y = (j - ny/2)*dy`.
/// Counts are kept even so the axis itself is a sample point and the mirror
/// map `y -> -y` is an index permutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64) -> Result<Self> {
        if nx < 2 || ny < 2 || !nx.is_multiple_of(2) || !ny.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "point counts must be even and >= 2, got {nx} x {ny}"
            )));
        }
        if !(dx > 0.0 && dx.is_finite()) || !(dy > 0.0 && dy.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "sample spacing must be positive and finite, got {dx} x {dy}"
            )));
        }
        Ok(GridSpec { nx, ny, dx, dy })
    }

    /// Square grid with equal spacing on both axes.
    pub fn square(n: usize, d: f64) -> Result<Self> {
        GridSpec::new(n, n, d, d)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    /// Physical x coordinate of column `i`.
    pub fn x_at(&self, i: usize) -> f64 {
        (i as f64 - (self.nx / 2) as f64) * self.dx
    }

    /// Physical y coordinate of row `j`.
    pub fn y_at(&self, j: usize) -> f64 {
        (j as f64 - (self.ny / 2) as f64) * self.dy
    }

    /// Full extent `(nx*dx, ny*dy)` in meters.
    pub fn extent(&self) -> (f64, f64) {
        (self.nx as f64 * self.dx, self.ny as f64 * self.dy)
    }

    /// Area of one lattice cell, `dx*dy`.
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// All y coordinates, row order.
    pub fn y_coords(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y_at(j)).collect()
    }
}
