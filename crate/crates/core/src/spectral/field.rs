use ndarray::Array3;
use num_complex::Complex64;

use super::fft::{forward_c2c_3d, inverse_c2c_3d};
use super::grid::GridSpec;
use crate::error::{Error, Result};

/// A 3-component velocity field stored as complex Fourier coefficients.
///
/// Holds u (or the heat-flow reference v, or the difference w) on a periodic
/// box. Physical-space values are reconstructed on demand; all linear
/// operators act directly on the coefficients. On 2D grids the field simply
/// does not vary along z (the third component is still carried).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    grid: GridSpec,
    coeffs: [Array3<Complex64>; 3],
}

impl SpectralVectorField {
    pub fn zeros(grid: GridSpec) -> Self {
        let shape = grid.shape();
        Self {
            grid,
            coeffs: [
                Array3::zeros(shape),
                Array3::zeros(shape),
                Array3::zeros(shape),
            ],
        }
    }

    pub fn from_components(grid: GridSpec, coeffs: [Array3<Complex64>; 3]) -> Result<Self> {
        for c in &coeffs {
            if c.dim() != grid.shape() {
                return Err(Error::InvalidGrid(format!(
                    "component shape {:?} does not match grid {}",
                    c.dim(),
                    grid.label()
                )));
            }
        }
        Ok(Self { grid, coeffs })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn component(&self, i: usize) -> &Array3<Complex64> {
        &self.coeffs[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut Array3<Complex64> {
        &mut self.coeffs[i]
    }

    pub fn components(&self) -> &[Array3<Complex64>; 3] {
        &self.coeffs
    }

    /// Array position of the signed mode index [jx, jy, jz].
    fn mode_position(&self, j: [i64; 3]) -> Result<(usize, usize, usize)> {
        let (nx, ny, nz) = self.grid.shape();
        let wrap = |j: i64, n: usize| -> Result<usize> {
            let n = n as i64;
            // valid signed range [-n/2, (n-1)/2]; a collapsed axis (n = 1)
            // only carries j = 0
            if j < -n / 2 || j > (n - 1) / 2 {
                return Err(Error::InvalidGrid(format!(
                    "mode index {j} outside [-{}, {}]",
                    n / 2,
                    (n - 1) / 2
                )));
            }
            Ok(((j % n + n) % n) as usize)
        };
        Ok((wrap(j[0], nx)?, wrap(j[1], ny)?, wrap(j[2], nz)?))
    }

    /// Set one coefficient by signed mode index. Does not touch the mirror
    /// mode; callers building real fields use [`Self::set_mode_pair`].
    pub fn set_mode(&mut self, comp: usize, j: [i64; 3], value: Complex64) -> Result<()> {
        let pos = self.mode_position(j)?;
        self.coeffs[comp][pos] = value;
        Ok(())
    }

    /// Set uhat(j) = value and uhat(-j) = conj(value), keeping the field
    /// real-valued in physical space.
    pub fn set_mode_pair(&mut self, comp: usize, j: [i64; 3], value: Complex64) -> Result<()> {
        self.set_mode(comp, j, value)?;
        let neg = [-j[0], -j[1], -j[2]];
        if neg != j {
            self.set_mode(comp, neg, value.conj())?;
        } else if value.im != 0.0 {
            return Err(Error::InvalidParams(
                "self-conjugate mode requires a real coefficient".into(),
            ));
        }
        Ok(())
    }

    pub fn mode(&self, comp: usize, j: [i64; 3]) -> Result<Complex64> {
        let pos = self.mode_position(j)?;
        Ok(self.coeffs[comp][pos])
    }

    /// Apply a real multiplier m(|k|^2) to every coefficient of every
    /// component (diagonal operators: dissipation symbols, propagators).
    pub fn apply_real_symbol(&self, symbol: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        out.apply_real_symbol_in_place(symbol);
        out
    }

    pub fn apply_real_symbol_in_place(&mut self, symbol: impl Fn(f64) -> f64) {
        let grid = self.grid;
        let shape = grid.shape();
        let mut factors = Array3::<f64>::zeros(shape);
        for ((ix, iy, iz), f) in factors.indexed_iter_mut() {
            *f = symbol(grid.k_squared(ix, iy, iz));
        }
        for comp in &mut self.coeffs {
            ndarray::Zip::from(comp).and(&factors).for_each(|c, &f| *c *= f);
        }
    }

    /// Physical-space samples of each component (real parts; for fields with
    /// conjugate symmetry the imaginary residue is roundoff).
    pub fn to_physical(&self) -> [Array3<f64>; 3] {
        let phys = |c: &Array3<Complex64>| inverse_c2c_3d(c).mapv(|v| v.re);
        [
            phys(&self.coeffs[0]),
            phys(&self.coeffs[1]),
            phys(&self.coeffs[2]),
        ]
    }

    pub fn from_physical(grid: GridSpec, physical: &[Array3<f64>; 3]) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(3);
        for p in physical {
            if p.dim() != grid.shape() {
                return Err(Error::InvalidGrid(format!(
                    "physical shape {:?} does not match grid {}",
                    p.dim(),
                    grid.label()
                )));
            }
            coeffs.push(forward_c2c_3d(&p.mapv(|v| Complex64::new(v, 0.0))));
        }
        let mut it = coeffs.into_iter();
        Ok(Self {
            grid,
            coeffs: [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()],
        })
    }

    /// Largest coefficient magnitude over all modes and components.
    pub fn max_coeff_magnitude(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest pointwise Euclidean speed max_x |u(x)| on the grid.
    pub fn physical_sup_norm(&self) -> f64 {
        let [ux, uy, uz] = self.to_physical();
        let mut sup: f64 = 0.0;
        for ((a, b), c) in ux.iter().zip(uy.iter()).zip(uz.iter()) {
            sup = sup.max((a * a + b * b + c * c).sqrt());
        }
        sup
    }

    /// max_k |k . uhat(k)|, the absolute divergence defect, together with the
    /// largest coefficient magnitude for relative comparison.
    pub fn divergence_defect(&self) -> (f64, f64) {
        let grid = self.grid;
        let mut max_div: f64 = 0.0;
        for ((ix, iy, iz), c0) in self.coeffs[0].indexed_iter() {
            let k = grid.wavevector(ix, iy, iz);
            let dot = c0 * k[0]
                + self.coeffs[1][(ix, iy, iz)] * k[1]
                + self.coeffs[2][(ix, iy, iz)] * k[2];
            max_div = max_div.max(dot.norm());
        }
        (max_div, self.max_coeff_magnitude())
    }

    /// Relative divergence max_k |k.uhat| / max_k |uhat| (0 for a zero field).
    pub fn divergence_ratio(&self) -> f64 {
        let (d, m) = self.divergence_defect();
        if m == 0.0 {
            0.0
        } else {
            d / m
        }
    }

    /// Largest violation of uhat(-k) = conj(uhat(k)) over modes/components.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let (nx, ny, nz) = self.grid.shape();
        let mut defect: f64 = 0.0;
        for comp in &self.coeffs {
            for ((ix, iy, iz), c) in comp.indexed_iter() {
                let mirror = comp[((nx - ix) % nx, (ny - iy) % ny, (nz - iz) % nz)];
                defect = defect.max((mirror - c.conj()).norm());
            }
        }
        defect
    }

    pub fn has_finite_coeffs(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(self.grid.label(), other.grid.label()));
        }
        Ok(())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_grid(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a += b;
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            c.mapv_inplace(|v| v * factor);
        }
        out
    }

    /// self += factor * other (grids must match; used by integrators).
    pub fn axpy(&mut self, factor: Complex64, other: &Self) -> Result<()> {
        self.check_same_grid(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            ndarray::Zip::from(a).and(b).for_each(|x, &y| *x += factor * y);
        }
        Ok(())
    }
}
