//! Thin rustfft wrappers for 3D complex transforms on ndarray storage.
//!
//! Convention: `forward_c2c_3d` divides by the total point count so the
//! result holds Fourier-series coefficients; `inverse_c2c_3d` is the plain
//! unnormalized inverse DFT, making the pair an exact round trip.

use ndarray::{Array3, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transform_axes(data: &mut Array3<Complex64>, forward: bool) {
    for axis in 0..3 {
        let len = data.shape()[axis];
        if len < 2 {
            continue;
        }
        let fft = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            if forward {
                p.plan_fft_forward(len)
            } else {
                p.plan_fft_inverse(len)
            }
        });
        let mut buffer = vec![Complex64::default(); len];
        for mut lane in data.lanes_mut(Axis(axis)) {
            for (b, v) in buffer.iter_mut().zip(lane.iter()) {
                *b = *v;
            }
            fft.process(&mut buffer);
            for (v, b) in lane.iter_mut().zip(buffer.iter()) {
                *v = *b;
            }
        }
    }
}

/// Physical samples -> Fourier-series coefficients (normalized by 1/N).
pub(crate) fn forward_c2c_3d(physical: &Array3<Complex64>) -> Array3<Complex64> {
    let mut out = physical.clone();
    transform_axes(&mut out, true);
    let scale = 1.0 / physical.len() as f64;
    out.mapv_inplace(|c| c * scale);
    out
}

/// Fourier-series coefficients -> physical samples (unnormalized inverse).
pub(crate) fn inverse_c2c_3d(spectral: &Array3<Complex64>) -> Array3<Complex64> {
    let mut out = spectral.clone();
    transform_axes(&mut out, false);
    out
}
