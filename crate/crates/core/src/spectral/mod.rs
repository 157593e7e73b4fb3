//! Periodic-box spectral toolbox: wavenumber bookkeeping, the fractional
//! Laplacian symbol |k|^(2*alpha), Leray (divergence-free) projection,
//! 2/3-rule dealiasing and L^2 / H^alpha / L^(beta+1) norms.
//!
//! Fields are stored as Fourier-series coefficients: a physical field
//! u(x) = sum_j uhat_j exp(i k_j . x) with k_j = (2*pi/L) * j and integer
//! multi-indices j in FFT ordering. Real-valued fields satisfy
//! uhat(-j) = conj(uhat(j)).

mod fft;
mod field;
mod grid;
mod ops;
mod params;

pub use field::SpectralVectorField;
pub use grid::GridSpec;
pub use ops::{
    dealias, fractional_laplacian, gradient_sup_norm, l2_inner, leray_project, norms, FieldNorms,
    FracDirection,
};
pub use params::PhysicalParams;

pub(crate) use fft::forward_c2c_3d;
pub(crate) use ops::derivative_physical;
