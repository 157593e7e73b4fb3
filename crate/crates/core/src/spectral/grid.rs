use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Discretization of the periodic box [0, L)^dim with n points per axis.
///
/// The wavenumber attached to FFT index j along an axis is (2*pi/L) * j with
/// j running through [0 .. n/2-1, -n/2 .. -1], bit-exactly reproducible.
/// (Serialize-only: grids are rebuilt through `new` so the invariants hold.)
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    n: usize,
    box_length: f64,
    dim: usize,
}

impl GridSpec {
    /// Dimension 3 is the physical setting; dim = 2 is accepted for cheap
    /// tests only (fields constant along z).
    pub fn new(n: usize, box_length: f64, dim: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidGrid(format!("n must be >= 4, got {n}")));
        }
        if n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n must be even, got {n}")));
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "box_length must be positive and finite, got {box_length}"
            )));
        }
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        Ok(Self { n, box_length, dim })
    }

    /// Standard 3D grid on [0, 2*pi)^3.
    pub fn cubic(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI, 3)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True in the physical (3D) setting; 2D grids are test-only.
    pub fn is_three_dimensional(&self) -> bool {
        self.dim == 3
    }

    /// Array shape: the z axis collapses to a single plane in 2D.
    pub fn shape(&self) -> (usize, usize, usize) {
        let nz = if self.dim == 3 { self.n } else { 1 };
        (self.n, self.n, nz)
    }

    pub fn num_points(&self) -> usize {
        let (nx, ny, nz) = self.shape();
        nx * ny * nz
    }

    /// Grid spacing L/n.
    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Volume element dx^dim of the physical quadrature.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Signed integer index for FFT position i along a full axis.
    #[inline]
    pub fn signed_index(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Wavenumber table for one full axis, FFT ordering.
    pub fn axis_wavenumbers(&self) -> Vec<f64> {
        let scale = 2.0 * PI / self.box_length;
        (0..self.n).map(|i| scale * self.signed_index(i) as f64).collect()
    }

    /// Per-axis wavenumber tables; the collapsed z axis of a 2D grid
    /// contributes the single entry 0.
    pub fn wavenumbers(&self) -> Vec<Vec<f64>> {
        let full = self.axis_wavenumbers();
        match self.dim {
            3 => vec![full.clone(), full.clone(), full],
            _ => vec![full.clone(), full, vec![0.0]],
        }
    }

    /// Wavenumber vector at array position (ix, iy, iz).
    #[inline]
    pub fn wavevector(&self, ix: usize, iy: usize, iz: usize) -> [f64; 3] {
        let scale = 2.0 * PI / self.box_length;
        let kz = if self.dim == 3 {
            scale * self.signed_index(iz) as f64
        } else {
            0.0
        };
        [
            scale * self.signed_index(ix) as f64,
            scale * self.signed_index(iy) as f64,
            kz,
        ]
    }

    /// |k|^2 at array position (ix, iy, iz).
    #[inline]
    pub fn k_squared(&self, ix: usize, iy: usize, iz: usize) -> f64 {
        let [kx, ky, kz] = self.wavevector(ix, iy, iz);
        kx * kx + ky * ky + kz * kz
    }

    /// Compact label used in error messages.
    pub fn label(&self) -> String {
        format!("{}^{} L={}", self.n, self.dim, self.box_length)
    }
}
