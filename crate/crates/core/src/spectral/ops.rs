use ndarray::Array3;
use num_complex::Complex64;

use super::fft::inverse_c2c_3d;
use super::field::SpectralVectorField;
use super::params::PhysicalParams;
use crate::error::{Error, Result};

/// Direction of the fractional Laplacian power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracDirection {
    /// Multiply mode k by |k|^(2*alpha); the mean mode maps to zero.
    Apply,
    /// Multiply nonzero modes by |k|^(-2*alpha); requires a mean-free field.
    Invert,
}

/// (-Laplace)^alpha as a Fourier multiplier, or its inverse on mean-free
/// fields. The inverse is rejected when the mean mode carries a nonzero
/// coefficient: negative powers only act on mean-free data.
pub fn fractional_laplacian(
    field: &SpectralVectorField,
    alpha: f64,
    direction: FracDirection,
) -> Result<SpectralVectorField> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParams(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if direction == FracDirection::Invert {
        let mean_mag = (0..3)
            .map(|c| field.component(c)[(0, 0, 0)].norm())
            .fold(0.0, f64::max);
        if mean_mag != 0.0 {
            return Err(Error::NonInvertibleMeanMode(mean_mag));
        }
    }
    let exponent = match direction {
        FracDirection::Apply => alpha,
        FracDirection::Invert => -alpha,
    };
    Ok(field.apply_real_symbol(|k2| if k2 == 0.0 { 0.0 } else { k2.powf(exponent) }))
}

/// Orthogonal projection onto divergence-free fields:
/// uhat(k) <- uhat(k) - k (k . uhat(k)) / |k|^2, mean mode untouched.
pub fn leray_project(field: &SpectralVectorField) -> SpectralVectorField {
    let grid = field.grid();
    let mut out = field.clone();
    let shape = grid.shape();
    for ix in 0..shape.0 {
        for iy in 0..shape.1 {
            for iz in 0..shape.2 {
                let k = grid.wavevector(ix, iy, iz);
                let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if k2 == 0.0 {
                    continue;
                }
                let dot = out.component(0)[(ix, iy, iz)] * k[0]
                    + out.component(1)[(ix, iy, iz)] * k[1]
                    + out.component(2)[(ix, iy, iz)] * k[2];
                let scale = dot / k2;
                for (comp, kc) in k.iter().enumerate() {
                    out.component_mut(comp)[(ix, iy, iz)] -= scale * kc;
                }
            }
        }
    }
    out
}

/// 2/3-rule dealiasing: zero every coefficient whose integer index exceeds
/// n/3 in magnitude along any axis.
pub fn dealias(field: &SpectralVectorField) -> SpectralVectorField {
    let grid = field.grid();
    let n = grid.n() as i64;
    let mut out = field.clone();
    let (nx, ny, nz) = grid.shape();
    let cut = |i: usize, len: usize| -> bool {
        if len == 1 {
            return false;
        }
        let j = if i < len / 2 {
            i as i64
        } else {
            i as i64 - len as i64
        };
        3 * j.abs() > n
    };
    for comp in 0..3 {
        let arr = out.component_mut(comp);
        for ix in 0..nx {
            for iy in 0..ny {
                for iz in 0..nz {
                    if cut(ix, nx) || cut(iy, ny) || cut(iz, nz) {
                        arr[(ix, iy, iz)] = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
    }
    out
}

/// The three norms tracked along trajectories, with their natural powers
/// kept alongside (the powers are the accumulated sums, not re-squared
/// norms, so they are bit-stable under the fixed summation order).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldNorms {
    pub l2: f64,
    pub h_alpha_seminorm: f64,
    pub l_beta_plus_1: f64,
    pub l2_sq: f64,
    pub h_alpha_sq: f64,
    pub l_beta_plus_1_pow: f64,
}

/// L^2 and the H^alpha seminorm via Parseval (lexicographic mode order,
/// sequential), L^(beta+1) by physical-space quadrature of the pointwise
/// Euclidean speed.
pub fn norms(field: &SpectralVectorField, params: &PhysicalParams) -> FieldNorms {
    let grid = field.grid();
    let volume_factor = grid.box_length().powi(grid.dim() as i32);

    let c0 = field.component(0).as_slice().expect("standard layout");
    let c1 = field.component(1).as_slice().expect("standard layout");
    let c2 = field.component(2).as_slice().expect("standard layout");
    let (nx, ny, nz) = grid.shape();

    let mut l2_sum = 0.0;
    let mut ha_sum = 0.0;
    let mut idx = 0usize;
    for ix in 0..nx {
        for iy in 0..ny {
            for iz in 0..nz {
                let mag2 = c0[idx].norm_sqr() + c1[idx].norm_sqr() + c2[idx].norm_sqr();
                l2_sum += mag2;
                let k2 = grid.k_squared(ix, iy, iz);
                if k2 > 0.0 {
                    ha_sum += k2.powf(params.alpha) * mag2;
                }
                idx += 1;
            }
        }
    }
    let l2_sq = volume_factor * l2_sum;
    let h_alpha_sq = volume_factor * ha_sum;

    let [ux, uy, uz] = field.to_physical();
    let pow = params.beta + 1.0;
    let mut lb_sum = 0.0;
    for ((a, b), c) in ux.iter().zip(uy.iter()).zip(uz.iter()) {
        let speed2 = a * a + b * b + c * c;
        lb_sum += speed2.powf(pow / 2.0);
    }
    let l_beta_plus_1_pow = lb_sum * grid.cell_volume();

    FieldNorms {
        l2: l2_sq.sqrt(),
        h_alpha_seminorm: h_alpha_sq.sqrt(),
        l_beta_plus_1: l_beta_plus_1_pow.powf(1.0 / pow),
        l2_sq,
        h_alpha_sq,
        l_beta_plus_1_pow,
    }
}

/// L^2 inner product <a, b> = L^dim * sum_k Re(ahat . conj(bhat)), summed
/// over components in lexicographic mode order.
pub fn l2_inner(a: &SpectralVectorField, b: &SpectralVectorField) -> Result<f64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch(a.grid().label(), b.grid().label()));
    }
    let volume_factor = a.grid().box_length().powi(a.grid().dim() as i32);
    let mut sum = 0.0;
    for comp in 0..3 {
        let ca = a.component(comp).as_slice().expect("standard layout");
        let cb = b.component(comp).as_slice().expect("standard layout");
        let mut part = 0.0;
        for (x, y) in ca.iter().zip(cb.iter()) {
            part += x.re * y.re + x.im * y.im;
        }
        sum += part;
    }
    Ok(volume_factor * sum)
}

/// Physical-space samples of d(u_comp)/d(x_axis), computed spectrally.
pub(crate) fn derivative_physical(
    field: &SpectralVectorField,
    comp: usize,
    axis: usize,
) -> Array3<f64> {
    let grid = field.grid();
    let mut spectral = field.component(comp).clone();
    for ((ix, iy, iz), c) in spectral.indexed_iter_mut() {
        let k = grid.wavevector(ix, iy, iz)[axis];
        *c = Complex64::new(-c.im * k, c.re * k); // multiply by i*k
    }
    inverse_c2c_3d(&spectral).mapv(|v| v.re)
}

/// sup over grid points of the Frobenius norm of the velocity gradient,
/// |grad u|(x) = sqrt(sum_ij (d u_j / d x_i)^2).
pub fn gradient_sup_norm(field: &SpectralVectorField) -> f64 {
    let grid = field.grid();
    let mut sq_sum = Array3::<f64>::zeros(grid.shape());
    for comp in 0..3 {
        for axis in 0..grid.dim() {
            let d = derivative_physical(field, comp, axis);
            ndarray::Zip::from(&mut sq_sum).and(&d).for_each(|s, &v| *s += v * v);
        }
    }
    sq_sum.iter().fold(0.0f64, |m, &v| m.max(v)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;
    use std::f64::consts::PI;

    fn params(alpha: f64, beta: f64) -> PhysicalParams {
        PhysicalParams::new(alpha, beta, 1.0).unwrap()
    }

    fn single_mode(comp: usize, j: [i64; 3], c: Complex64, n: usize) -> SpectralVectorField {
        let grid = GridSpec::cubic(n).unwrap();
        let mut f = SpectralVectorField::zeros(grid);
        f.set_mode_pair(comp, j, c).unwrap();
        f
    }

    #[test]
    fn laplacian_symbol_on_unit_mode() {
        let f = single_mode(0, [1, 0, 0], Complex64::new(0.5, 0.0), 8);
        let g = fractional_laplacian(&f, 1.0, FracDirection::Apply).unwrap();
        assert_eq!(g.mode(0, [1, 0, 0]).unwrap(), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn half_power_scales_by_modulus() {
        let f = single_mode(0, [2, 0, 0], Complex64::new(1.0, 0.0), 8);
        let g = fractional_laplacian(&f, 0.5, FracDirection::Apply).unwrap();
        assert!((g.mode(0, [2, 0, 0]).unwrap().re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn laplacian_matches_finite_differences_at_second_order() {
        // alpha = 1 on sin(3x) e2 must give 9 sin(3x) e2; centered second
        // differences of the physical samples converge to it at O(h^2).
        let mut errs = Vec::new();
        for &n in &[16usize, 32, 64] {
            let f = single_mode(1, [3, 0, 0], Complex64::new(0.0, -0.5), n);
            let g = fractional_laplacian(&f, 1.0, FracDirection::Apply).unwrap();
            let [_, spectral, _] = g.to_physical();
            let [_, phys, _] = f.to_physical();
            let h = 2.0 * PI / n as f64;
            let mut max_err = 0.0f64;
            for ix in 0..n {
                let left = phys[((ix + n - 1) % n, 0, 0)];
                let mid = phys[(ix, 0, 0)];
                let right = phys[((ix + 1) % n, 0, 0)];
                let fd = -(left - 2.0 * mid + right) / (h * h);
                max_err = max_err.max((fd - spectral[(ix, 0, 0)]).abs());
                // spectral result is exactly 9 sin(3x)
                let x = h * ix as f64;
                assert!((spectral[(ix, 0, 0)] - 9.0 * (3.0 * x).sin()).abs() < 1e-10);
            }
            errs.push(max_err);
        }
        // halving h divides the FD error by about 4
        assert!(errs[0] / errs[1] > 3.4 && errs[0] / errs[1] < 4.6);
        assert!(errs[1] / errs[2] > 3.4 && errs[1] / errs[2] < 4.6);
    }

    #[test]
    fn inverse_rejects_nonzero_mean() {
        let grid = GridSpec::cubic(8).unwrap();
        let mut f = SpectralVectorField::zeros(grid);
        f.set_mode(0, [0, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            fractional_laplacian(&f, 1.0, FracDirection::Invert),
            Err(Error::NonInvertibleMeanMode(_))
        ));
        let g = single_mode(0, [1, 1, 0], Complex64::new(1.0, 0.0), 8);
        let inv = fractional_laplacian(&g, 1.0, FracDirection::Invert).unwrap();
        assert!((inv.mode(0, [1, 1, 0]).unwrap().re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn composition_adds_exponents() {
        let f = single_mode(2, [2, -1, 3], Complex64::new(0.3, 0.7), 16);
        let a = fractional_laplacian(
            &fractional_laplacian(&f, 0.6, FracDirection::Apply).unwrap(),
            0.9,
            FracDirection::Apply,
        )
        .unwrap();
        let b = fractional_laplacian(&f, 1.5, FracDirection::Apply).unwrap();
        let diff = a.checked_sub(&b).unwrap().max_coeff_magnitude();
        assert!(diff <= 1e-12 * b.max_coeff_magnitude());
    }

    #[test]
    fn projection_annihilates_gradients() {
        let grid = GridSpec::cubic(8).unwrap();
        let mut f = SpectralVectorField::zeros(grid);
        // uhat = i k phihat for a few modes
        for (j, phi) in [
            ([1i64, 0, 0], Complex64::new(0.4, 0.1)),
            ([2, -1, 1], Complex64::new(-0.3, 0.2)),
        ] {
            let kvec = [j[0] as f64, j[1] as f64, j[2] as f64];
            for comp in 0..3 {
                let c = Complex64::new(0.0, kvec[comp]) * phi;
                f.set_mode_pair(comp, j, c).unwrap();
            }
        }
        let p = leray_project(&f);
        assert!(p.max_coeff_magnitude() < 1e-14);
    }

    #[test]
    fn projection_hand_value() {
        // uhat((1,1,0)) = e1 projects to (1/2, -1/2, 0)
        let grid = GridSpec::cubic(8).unwrap();
        let mut f = SpectralVectorField::zeros(grid);
        f.set_mode_pair(0, [1, 1, 0], Complex64::new(1.0, 0.0)).unwrap();
        let p = leray_project(&f);
        assert!((p.mode(0, [1, 1, 0]).unwrap().re - 0.5).abs() < 1e-14);
        assert!((p.mode(1, [1, 1, 0]).unwrap().re + 0.5).abs() < 1e-14);
        assert!(p.mode(2, [1, 1, 0]).unwrap().norm() < 1e-15);
    }

    #[test]
    fn dealias_cutoff_boundary() {
        let grid = GridSpec::cubic(8).unwrap();
        let mut f = SpectralVectorField::zeros(grid);
        f.set_mode_pair(0, [3, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        f.set_mode_pair(1, [2, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        let d = dealias(&f);
        assert_eq!(d.mode(0, [3, 0, 0]).unwrap().norm(), 0.0);
        assert_eq!(d.mode(1, [2, 0, 0]).unwrap().re, 1.0);
        // idempotent on fields inside the cutoff
        let dd = dealias(&d);
        assert_eq!(dd, d);
        // zero in, zero out
        let z = dealias(&SpectralVectorField::zeros(grid));
        assert_eq!(z.max_coeff_magnitude(), 0.0);
    }

    #[test]
    fn sine_l2_norm_matches_exact_integral() {
        let grid = GridSpec::cubic(16).unwrap();
        let mut f = SpectralVectorField::zeros(grid);
        f.set_mode_pair(1, [1, 0, 0], Complex64::new(0.0, -0.5)).unwrap();
        let n = norms(&f, &params(1.0, 3.0));
        let exact = (2.0 * PI).powi(3) / 2.0;
        assert!((n.l2_sq - exact).abs() < 1e-10 * exact);
        // beta = 1: L^2 and L^{beta+1} coincide
        let n1 = norms(&f, &params(1.0, 1.0));
        assert!((n1.l_beta_plus_1 - n1.l2).abs() < 1e-10 * n1.l2);
    }

    #[test]
    fn zero_field_has_zero_norms() {
        let f = SpectralVectorField::zeros(GridSpec::cubic(8).unwrap());
        let n = norms(&f, &params(1.0, 3.0));
        assert_eq!(n.l2, 0.0);
        assert_eq!(n.h_alpha_seminorm, 0.0);
        assert_eq!(n.l_beta_plus_1, 0.0);
    }

    #[test]
    fn gradient_sup_norm_of_sine() {
        // u = sin(x) e2: d u2/dx = cos(x), sup = 1
        let grid = GridSpec::cubic(16).unwrap();
        let mut f = SpectralVectorField::zeros(grid);
        f.set_mode_pair(1, [1, 0, 0], Complex64::new(0.0, -0.5)).unwrap();
        assert!((gradient_sup_norm(&f) - 1.0).abs() < 1e-12);
    }
}
