//! Pseudo-spectral toolbox for the 3D incompressible Navier-Stokes equations
//! with a velocity damping term nu*|u|^(beta-1)*u and fractional dissipation
//! (-Laplace)^alpha on a periodic box, together with the machinery needed to
//! measure and classify energy decay rates:
//!
//! * [`spectral`] - grids, Fourier coefficients, fractional Laplacian, Leray
//!   projection, dealiasing and norms;
//! * [`heat`] - the exactly solvable generalized heat flow, both on the box
//!   (Fourier multipliers) and on all of R^3 (radial quadrature), used as the
//!   reference solution v(t);
//! * [`solver`] - ETDRK2 / IMEX time integration of the full damped system;
//! * [`decay`] - theoretical decay exponents, the bootstrap exponent
//!   iteration, and power-law fitting of measured norm series;
//! * [`ledger`] - a-posteriori energy-balance and difference-inequality
//!   checks along simulated trajectories;
//! * [`harness`] - experiment configuration, sweep orchestration, CSV/JSON
//!   export (also exposed through the `nsdamp` CLI).

pub mod decay;
pub mod error;
pub mod harness;
pub mod heat;
pub mod ledger;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{GridSpec, PhysicalParams, SpectralVectorField};
