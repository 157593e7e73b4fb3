//! Python bindings for the nsdamp toolkit: spectral fields and operators,
//! the exact dissipative flow and its whole-space decay oracle, the damped
//! solver, and the decay-exponent algebra.

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use nsdamp::decay;
use nsdamp::heat;
use nsdamp::solver;
use nsdamp::spectral::{self, FracDirection, GridSpec, PhysicalParams, SpectralVectorField};

fn to_py_err(e: nsdamp::Error) -> PyErr {
    use nsdamp::Error::*;
    match e {
        Io(_) => PyIOError::new_err(e.to_string()),
        BlowUp { .. } | QuadratureNonConvergence(_) | FitError(_) | BootstrapNonConvergence(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn params(alpha: f64, beta: f64, nu: f64) -> PyResult<PhysicalParams> {
    PhysicalParams::new(alpha, beta, nu).map_err(to_py_err)
}

/// Periodic-box discretization.
#[pyclass(name = "Grid", skip_from_py_object)]
#[derive(Clone)]
struct PyGrid {
    inner: GridSpec,
}

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (n, box_length = 2.0 * std::f64::consts::PI, dim = 3))]
    fn new(n: usize, box_length: f64, dim: usize) -> PyResult<Self> {
        Ok(Self {
            inner: GridSpec::new(n, box_length, dim).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn box_length(&self) -> f64 {
        self.inner.box_length()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Per-axis wavenumber tables in FFT ordering.
    fn wavenumbers(&self) -> Vec<Vec<f64>> {
        self.inner.wavenumbers()
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(n={}, box_length={}, dim={})",
            self.inner.n(),
            self.inner.box_length(),
            self.inner.dim()
        )
    }
}

/// The three tracked norms of a field.
#[pyclass(name = "Norms")]
struct PyNorms {
    #[pyo3(get)]
    l2: f64,
    #[pyo3(get)]
    h_alpha_seminorm: f64,
    #[pyo3(get)]
    l_beta_plus_1: f64,
    #[pyo3(get)]
    l2_sq: f64,
    #[pyo3(get)]
    h_alpha_sq: f64,
    #[pyo3(get)]
    l_beta_plus_1_pow: f64,
}

/// A divergence-free velocity field in spectral representation.
#[pyclass(name = "Field", skip_from_py_object)]
#[derive(Clone)]
struct PyField {
    inner: SpectralVectorField,
}

impl PyField {
    fn wrap(inner: SpectralVectorField) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyField {
    #[staticmethod]
    fn zeros(grid: &PyGrid) -> Self {
        Self::wrap(SpectralVectorField::zeros(grid.inner))
    }

    #[staticmethod]
    #[pyo3(signature = (grid, amplitude = 1.0))]
    fn taylor_green(grid: &PyGrid, amplitude: f64) -> PyResult<Self> {
        solver::make_initial_data(solver::InitialDataKind::TaylorGreen, grid.inner, 0, amplitude)
            .map(Self::wrap)
            .map_err(to_py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (grid, seed, amplitude = 1.0))]
    fn low_freq_random(grid: &PyGrid, seed: u64, amplitude: f64) -> PyResult<Self> {
        solver::make_initial_data(
            solver::InitialDataKind::LowFreqRandom,
            grid.inner,
            seed,
            amplitude,
        )
        .map(Self::wrap)
        .map_err(to_py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (grid, seed, amplitude = 1.0))]
    fn gaussian_modulated(grid: &PyGrid, seed: u64, amplitude: f64) -> PyResult<Self> {
        solver::make_initial_data(
            solver::InitialDataKind::GaussianModulated,
            grid.inner,
            seed,
            amplitude,
        )
        .map(Self::wrap)
        .map_err(to_py_err)
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid { inner: self.inner.grid() }
    }

    /// Set uhat(j) and its mirror conj at -j (keeps the field real-valued).
    fn set_mode_pair(&mut self, comp: usize, j: (i64, i64, i64), re: f64, im: f64) -> PyResult<()> {
        self.inner
            .set_mode_pair(comp, [j.0, j.1, j.2], num_complex::Complex64::new(re, im))
            .map_err(to_py_err)
    }

    /// Coefficient at signed mode index j, as (re, im).
    fn mode(&self, comp: usize, j: (i64, i64, i64)) -> PyResult<(f64, f64)> {
        let c = self.inner.mode(comp, [j.0, j.1, j.2]).map_err(to_py_err)?;
        Ok((c.re, c.im))
    }

    #[pyo3(signature = (alpha = 1.0, beta = 3.0))]
    fn norms(&self, alpha: f64, beta: f64) -> PyResult<PyNorms> {
        let p = params(alpha, beta, 1.0)?;
        let n = spectral::norms(&self.inner, &p);
        Ok(PyNorms {
            l2: n.l2,
            h_alpha_seminorm: n.h_alpha_seminorm,
            l_beta_plus_1: n.l_beta_plus_1,
            l2_sq: n.l2_sq,
            h_alpha_sq: n.h_alpha_sq,
            l_beta_plus_1_pow: n.l_beta_plus_1_pow,
        })
    }

    fn leray_project(&self) -> Self {
        Self::wrap(spectral::leray_project(&self.inner))
    }

    fn dealias(&self) -> Self {
        Self::wrap(spectral::dealias(&self.inner))
    }

    /// Apply (-Laplace)^alpha (or its inverse on mean-free fields).
    #[pyo3(signature = (alpha, invert = false))]
    fn fractional_laplacian(&self, alpha: f64, invert: bool) -> PyResult<Self> {
        let dir = if invert { FracDirection::Invert } else { FracDirection::Apply };
        spectral::fractional_laplacian(&self.inner, alpha, dir)
            .map(Self::wrap)
            .map_err(to_py_err)
    }

    /// Exact dissipative evolution exp(-t (-Laplace)^alpha).
    fn evolve(&self, alpha: f64, t: f64) -> PyResult<Self> {
        heat::evolve_box(&self.inner, alpha, t).map(Self::wrap).map_err(to_py_err)
    }

    fn divergence_ratio(&self) -> f64 {
        self.inner.divergence_ratio()
    }

    fn conjugate_symmetry_defect(&self) -> f64 {
        self.inner.conjugate_symmetry_defect()
    }

    fn max_coeff_magnitude(&self) -> f64 {
        self.inner.max_coeff_magnitude()
    }

    fn physical_sup_norm(&self) -> f64 {
        self.inner.physical_sup_norm()
    }

    fn __sub__(&self, other: &PyField) -> PyResult<Self> {
        self.inner.checked_sub(&other.inner).map(Self::wrap).map_err(to_py_err)
    }

    fn __add__(&self, other: &PyField) -> PyResult<Self> {
        self.inner.checked_add(&other.inner).map(Self::wrap).map_err(to_py_err)
    }
}

/// Recorded norm series of a simulation.
#[pyclass(name = "Trajectory")]
struct PyTrajectory {
    #[pyo3(get)]
    times: Vec<f64>,
    #[pyo3(get)]
    l2_sq: Vec<f64>,
    #[pyo3(get)]
    h_alpha_sq: Vec<f64>,
    #[pyo3(get)]
    l_beta_plus_1_pow: Vec<f64>,
    #[pyo3(get)]
    w_l2_sq: Option<Vec<f64>>,
    #[pyo3(get)]
    divergence: Vec<f64>,
}

/// Integrate the damped system from `field`, recording norms.
#[pyfunction]
#[pyo3(signature = (
    field, alpha, beta, nu, dt, t_end,
    record_every = None, advection = true, track_difference = false
))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    field: &PyField,
    alpha: f64,
    beta: f64,
    nu: f64,
    dt: f64,
    t_end: f64,
    record_every: Option<f64>,
    advection: bool,
    track_difference: bool,
) -> PyResult<PyTrajectory> {
    let p = params(alpha, beta, nu)?;
    let mut config = solver::SolverConfig::new(field.inner.grid(), p, dt, t_end);
    config.record_every = record_every.unwrap_or(dt);
    config.advection = advection;
    config.track_difference = track_difference;
    let record = solver::simulate(&field.inner, &config)
        .map_err(|aborted| to_py_err(aborted.error))?;
    let s = record.norm_series;
    Ok(PyTrajectory {
        times: s.times,
        l2_sq: s.l2_sq,
        h_alpha_sq: s.h_alpha_sq,
        l_beta_plus_1_pow: s.l_beta_plus_1_pow,
        w_l2_sq: s.w_l2_sq,
        divergence: record.divergence,
    })
}

// -- decay-exponent algebra --------------------------------------------------

/// Decay exponent min{3/2, (3 beta - 2)/2} of ||u||^2 (classical dissipation).
#[pyfunction]
fn exponent_thm_nse(beta: f64) -> PyResult<f64> {
    decay::exponent_thm_nse(beta).map_err(to_py_err)
}

/// Decay exponent min{3/(2 alpha), (3 beta - 2 alpha)/(2 alpha)} of ||u||^2.
#[pyfunction]
fn exponent_thm_gnse(alpha: f64, beta: f64) -> PyResult<f64> {
    decay::exponent_thm_gnse(alpha, beta).map_err(to_py_err)
}

#[pyfunction]
fn exponent_cai_lei(beta: f64) -> PyResult<f64> {
    decay::exponent_catalog(decay::PriorResult::CaiLei { beta }).map_err(to_py_err)
}

#[pyfunction]
fn exponent_jia_zhang_dong(mu: f64, beta: f64) -> PyResult<f64> {
    decay::exponent_catalog(decay::PriorResult::JiaZhangDong { mu, beta }).map_err(to_py_err)
}

#[pyfunction]
fn exponent_jiang(beta: f64) -> PyResult<f64> {
    decay::exponent_catalog(decay::PriorResult::Jiang { beta }).map_err(to_py_err)
}

#[pyfunction]
fn exponent_jiu_yu(alpha: f64, p: f64) -> PyResult<f64> {
    decay::exponent_catalog(decay::PriorResult::JiuYu { alpha, p }).map_err(to_py_err)
}

#[pyfunction]
fn exponent_duan(alpha: f64) -> PyResult<f64> {
    decay::exponent_catalog(decay::PriorResult::Duan { alpha }).map_err(to_py_err)
}

/// Smoothing exponent -mu/(2 alpha) - (3/(2 alpha)) (1/r - 1/q); q may be
/// float('inf').
#[pyfunction]
#[pyo3(signature = (alpha, r, q, mu = 0.0))]
fn lq_bound_exponent(alpha: f64, r: f64, q: f64, mu: f64) -> PyResult<f64> {
    heat::lq_bound_exponent(alpha, r, q, mu).map_err(to_py_err)
}

/// One bootstrap pass sequence for the difference-field decay estimate.
#[pyclass(name = "BootstrapTrace")]
struct PyBootstrapTrace {
    /// (w_exponent, u_exponent) per iteration.
    #[pyo3(get)]
    iterates: Vec<(f64, f64)>,
    #[pyo3(get)]
    fixed_point: f64,
    #[pyo3(get)]
    converged_at: usize,
}

#[pyfunction]
#[pyo3(signature = (alpha, beta, max_iter = 16))]
fn bootstrap_exponents(alpha: f64, beta: f64, max_iter: usize) -> PyResult<PyBootstrapTrace> {
    let trace = decay::bootstrap_exponents(alpha, beta, max_iter).map_err(to_py_err)?;
    Ok(PyBootstrapTrace {
        iterates: trace
            .iterates
            .iter()
            .map(|it| (it.w_exponent, it.u_exponent))
            .collect(),
        fixed_point: trace.fixed_point,
        converged_at: trace.converged_at,
    })
}

// -- whole-space decay oracle ------------------------------------------------

/// ||v(t)||^2 on R^3 for Gaussian initial data exp(-|x|^2/2); the alpha = 1
/// closed form is (pi/(1+2t))^{3/2}.
#[pyfunction]
fn gaussian_l2_sq(alpha: f64, t: f64) -> PyResult<f64> {
    heat::l2_sq_r3(&heat::RadialInitialData::gaussian(), alpha, t).map_err(to_py_err)
}

#[pyclass(name = "SemigroupRecord")]
struct PySemigroupRecord {
    #[pyo3(get)]
    alpha: f64,
    #[pyo3(get)]
    times: Vec<f64>,
    #[pyo3(get)]
    l2_sq: Vec<f64>,
    #[pyo3(get)]
    fitted_exponent: f64,
    #[pyo3(get)]
    theory_exponent: f64,
    #[pyo3(get)]
    residual: f64,
    #[pyo3(get)]
    l1_like: bool,
    #[pyo3(get)]
    reliable: bool,
}

/// Fit the whole-space decay slope of ||v||^2 over [t_lo, t_hi]. `profile`
/// is an optional radial Fourier-amplitude callable r -> float (Gaussian
/// data when omitted); `l1_like` declares profile(0) != 0.
#[pyfunction]
#[pyo3(signature = (alpha, t_lo, t_hi, samples = 30, profile = None, l1_like = true))]
fn semigroup_rate_fit(
    py: Python<'_>,
    alpha: f64,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
    profile: Option<Py<PyAny>>,
    l1_like: bool,
) -> PyResult<PySemigroupRecord> {
    let data = match profile {
        None => heat::RadialInitialData::gaussian(),
        Some(callable) => heat::RadialInitialData::new(
            move |r| {
                Python::attach(|py| {
                    callable
                        .call1(py, (r,))
                        .and_then(|v| v.extract::<f64>(py))
                        .unwrap_or(f64::NAN)
                })
            },
            "python-profile",
            l1_like,
        ),
    };
    let rec = py.detach(|| heat::semigroup_rate_fit(&data, alpha, (t_lo, t_hi), samples));
    let rec = rec.map_err(to_py_err)?;
    let theory = rec.theory_exponent();
    Ok(PySemigroupRecord {
        alpha: rec.alpha,
        times: rec.times,
        l2_sq: rec.l2_sq,
        fitted_exponent: rec.fitted_exponent,
        theory_exponent: theory,
        residual: rec.residual,
        l1_like: rec.l1_like,
        reliable: rec.reliable,
    })
}

// -- power-law fitting ---------------------------------------------------

#[pyclass(name = "PowerLawFit")]
struct PyPowerLawFit {
    #[pyo3(get)]
    exponent: f64,
    #[pyo3(get)]
    intercept: f64,
    #[pyo3(get)]
    residual: f64,
    #[pyo3(get)]
    n_samples: usize,
}

/// Least squares of log(value) against log(1+t) over [t_lo, t_hi].
#[pyfunction]
fn fit_power_law(times: Vec<f64>, values: Vec<f64>, t_lo: f64, t_hi: f64) -> PyResult<PyPowerLawFit> {
    let fit = decay::fit_power_law(&times, &values, (t_lo, t_hi)).map_err(to_py_err)?;
    Ok(PyPowerLawFit {
        exponent: fit.exponent,
        intercept: fit.intercept,
        residual: fit.residual,
        n_samples: fit.n_samples,
    })
}

#[pymodule]
fn nsdamp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyNorms>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_class::<PyBootstrapTrace>()?;
    m.add_class::<PySemigroupRecord>()?;
    m.add_class::<PyPowerLawFit>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_thm_nse, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_thm_gnse, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_cai_lei, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_jia_zhang_dong, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_jiang, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_jiu_yu, m)?)?;
    m.add_function(wrap_pyfunction!(exponent_duan, m)?)?;
    m.add_function(wrap_pyfunction!(lq_bound_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(bootstrap_exponents, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_l2_sq, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup_rate_fit, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    Ok(())
}
