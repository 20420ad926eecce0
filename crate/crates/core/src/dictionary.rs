//! Angular grid and coarray dictionary `B = [A_D(θ^g) | i]`.

use std::f64::consts::PI;

use crate::geometry::{ArrayGeometry, CoarrayIndex};
use crate::signal_model::steering_matrix;
use crate::{CMatrix, Complex64, DoaError, Result};

/// Grid of `g` points uniformly spaced in `sin θ` over `[−1, 1 − 2/g]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    sines: Vec<f64>,
    angles: Vec<f64>,
}

impl AngularGrid {
    pub fn uniform_sine(g: usize) -> Result<Self> {
        if g < 2 {
            return Err(DoaError::InvalidArgument(format!("grid needs at least 2 points, got {g}")));
        }
        let step = 2.0 / g as f64;
        let sines: Vec<f64> = (0..g).map(|k| -1.0 + k as f64 * step).collect();
        let angles = sines.iter().map(|s| s.asin()).collect();
        Ok(Self { sines, angles })
    }

    pub fn len(&self) -> usize {
        self.sines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sines.is_empty()
    }

    pub fn sines(&self) -> &[f64] {
        &self.sines
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.len() as f64
    }

    /// Index of the grid point closest to `sin θ`.
    pub fn nearest_index(&self, angle: f64) -> usize {
        let s = angle.sin();
        let k = ((s + 1.0) / self.spacing()).round();
        (k.max(0.0) as usize).min(self.len() - 1)
    }

    pub fn snap(&self, angle: f64) -> f64 {
        self.angles[self.nearest_index(angle)]
    }
}

/// Sparse coarray dictionary together with the physical on-grid manifold.
#[derive(Debug, Clone)]
pub struct Dictionary {
    b: CMatrix,
    grid: AngularGrid,
    physical: CMatrix,
    center: usize,
}

impl Dictionary {
    pub fn build(geom: &ArrayGeometry, index: &CoarrayIndex, grid: AngularGrid) -> Result<Self> {
        if index.n_sensors() != geom.len() {
            return Err(DoaError::DimensionMismatch {
                expected: geom.len(),
                actual: index.n_sensors(),
            });
        }
        let g = grid.len();
        let dof = index.dof();
        let lags = index.lags();
        let center = index.center();
        let b = CMatrix::from_fn(dof, g + 1, |k, d| {
            if d == g {
                Complex64::new(if k == center { 1.0 } else { 0.0 }, 0.0)
            } else {
                Complex64::from_polar(1.0, -PI * lags[k] as f64 * grid.sines[d])
            }
        });
        let physical = steering_matrix(geom, grid.angles());
        Ok(Self {
            b,
            grid,
            physical,
            center,
        })
    }

    /// `dof × (g+1)` dictionary; the last column is the noise atom.
    pub fn matrix(&self) -> &CMatrix {
        &self.b
    }

    /// `N × g` steering matrix sampled on the grid.
    pub fn physical_manifold(&self) -> &CMatrix {
        &self.physical
    }

    pub fn grid(&self) -> &AngularGrid {
        &self.grid
    }

    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    /// Column index of the noise atom (`g`, zero-based).
    pub fn noise_atom(&self) -> usize {
        self.grid.len()
    }

    pub fn dof(&self) -> usize {
        self.b.nrows()
    }

    pub fn n_sensors(&self) -> usize {
        self.physical.nrows()
    }

    pub fn center(&self) -> usize {
        self.center
    }
}
