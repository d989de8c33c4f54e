use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Periodic lattice with `nx × ny × nz` cells and spacings `dx, dy, dz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec3 {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl GridSpec3 {
    pub fn new(nx: usize, ny: usize, nz: usize, dx: f64, dy: f64, dz: f64) -> Result<Self> {
        let g = Self { nx, ny, nz, dx, dy, dz };
        g.validate()?;
        Ok(g)
    }

    /// `n³` cells of spacing `h`.
    pub fn cube(n: usize, h: f64) -> Result<Self> {
        Self::new(n, n, n, h, h, h)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 || self.nz < 2 {
            return Err(Error::Signature(format!(
                "grid needs at least 2 cells per axis, got {}x{}x{}",
                self.nx, self.ny, self.nz
            )));
        }
        for (name, h) in [("dx", self.dx), ("dy", self.dy), ("dz", self.dz)] {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "grid",
                    reason: format!("{name} must be positive, got {h}"),
                });
            }
        }
        Ok(())
    }

    /// Sites per component lattice.
    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.nx, self.ny, self.nz]
    }

    pub fn spacings(&self) -> [f64; 3] {
        [self.dx, self.dy, self.dz]
    }

    pub fn min_spacing(&self) -> f64 {
        self.dx.min(self.dy).min(self.dz)
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy * self.dz
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    /// Stride of a unit step along `axis` in the flat index.
    pub(crate) fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => 1,
            1 => self.nx,
            _ => self.nx * self.ny,
        }
    }

    /// Same lattice with every spacing multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.nx,
            self.ny,
            self.nz,
            self.dx * factor,
            self.dy * factor,
            self.dz * factor,
        )
    }
}
