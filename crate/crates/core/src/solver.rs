//! Time integration of the damped system on the periodic box:
//!
//!   du/dt + P[(u . grad) u] + (-Laplace)^alpha u + nu P[|u|^(beta-1) u] = 0,
//!
//! with P the Leray projection, so the velocity stays exactly
//! divergence-free and no pressure is ever solved for. The stiff linear
//! part is integrated exactly (ETDRK2 with the true propagator
//! exp(-|k|^(2 alpha) dt)); convection and damping are evaluated pointwise
//! in physical space, the quadratic product 2/3-dealiased.

use ndarray::Array3;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::decay::NormSeries;
use crate::error::{Error, Result};
use crate::heat::evolve_box;
use crate::spectral::{
    dealias, derivative_physical, forward_c2c_3d, leray_project, norms, GridSpec, PhysicalParams,
    SpectralVectorField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Two-stage exponential time differencing; exact linear propagator.
    Etdrk2,
    /// Implicit linear part, explicit nonlinearity; first order, for
    /// cross-checks only.
    ImexEuler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvectionForm {
    /// (u . grad) u, dealiased.
    Advective,
    /// Average of advective and divergence forms; conserves energy exactly
    /// in undamped, non-dissipative stress tests.
    SkewSymmetric,
}

/// Simulation setup. `record_every` controls the norm-sampling interval and
/// must be an integer multiple of `dt` (as must `t_end`).
#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    pub grid: GridSpec,
    pub params: PhysicalParams,
    pub dt: f64,
    pub t_end: f64,
    pub cfl_safety: f64,
    pub record_every: f64,
    pub integrator: Integrator,
    /// Shrink dt below the configured value whenever the advective CFL
    /// bound cfl_safety * dx / max|u| demands it (re-evaluated each step).
    pub adaptive_dt: bool,
    /// Convection on/off. With advection off and nu = 0 the dynamics is the
    /// pure dissipative flow and must reproduce `evolve_box`.
    pub advection: bool,
    pub convection: ConvectionForm,
    /// For beta = 1 only: move the linear damping nu*u into the exponential
    /// symbol |k|^(2 alpha) + nu instead of the explicit nonlinear stage.
    pub absorb_linear_damping: bool,
    /// Keep a full field snapshot at every recorded time (needed by the
    /// difference-inequality checks).
    pub record_snapshots: bool,
    /// Record ||u(t) - v(t)||^2 against the exact dissipative flow v of the
    /// same initial data.
    pub track_difference: bool,
}

impl SolverConfig {
    pub fn new(grid: GridSpec, params: PhysicalParams, dt: f64, t_end: f64) -> Self {
        Self {
            grid,
            params,
            dt,
            t_end,
            cfl_safety: 0.5,
            record_every: dt,
            integrator: Integrator::Etdrk2,
            adaptive_dt: false,
            advection: true,
            convection: ConvectionForm::Advective,
            absorb_linear_damping: false,
            record_snapshots: false,
            track_difference: false,
        }
    }

    /// Number of fixed-size steps and the recording stride.
    fn schedule(&self) -> Result<(usize, usize)> {
        let steps = (self.t_end / self.dt).round();
        if steps < 1.0 || (steps * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(self.dt) {
            return Err(Error::InvalidConfig(format!(
                "t_end = {} must be a positive integer multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        let stride = (self.record_every / self.dt).round();
        if stride < 1.0
            || (stride * self.dt - self.record_every).abs() > 1e-9 * self.record_every
        {
            return Err(Error::InvalidConfig(format!(
                "record_every = {} must be a positive integer multiple of dt = {}",
                self.record_every, self.dt
            )));
        }
        Ok((steps as usize, stride as usize))
    }

    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = self.params.validate()?;
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        if self.record_every < self.dt {
            return Err(Error::InvalidConfig(format!(
                "record_every = {} must be >= dt = {}",
                self.record_every, self.dt
            )));
        }
        if self.absorb_linear_damping && self.params.beta != 1.0 {
            return Err(Error::InvalidConfig(
                "absorb_linear_damping requires beta = 1 (the damping must be linear)".into(),
            ));
        }
        if !self.adaptive_dt {
            self.schedule()?;
        }
        if !self.grid.is_three_dimensional() {
            warnings.push("2D grid: test-only setting, decay comparisons not meaningful".into());
        }
        Ok(warnings)
    }
}

/// A recorded trajectory: norm series, per-sample divergence ratios, and
/// (optionally) full field snapshots at the recorded times.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub norm_series: NormSeries,
    pub divergence: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub time: f64,
    pub field: SpectralVectorField,
}

impl TrajectoryRecord {
    pub fn times(&self) -> &[f64] {
        &self.norm_series.times
    }

    fn empty() -> Self {
        Self {
            norm_series: NormSeries {
                times: Vec::new(),
                l2_sq: Vec::new(),
                h_alpha_sq: Vec::new(),
                l_beta_plus_1_pow: Vec::new(),
                w_l2_sq: None,
            },
            divergence: Vec::new(),
            snapshots: Vec::new(),
        }
    }
}

/// A simulation interrupted mid-run; the partial record up to the failure
/// is preserved.
#[derive(Debug)]
pub struct SimulationAborted {
    pub error: Error,
    pub partial: TrajectoryRecord,
}

impl fmt::Display for SimulationAborted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} samples recorded before the abort)",
            self.error,
            self.partial.norm_series.times.len()
        )
    }
}

impl std::error::Error for SimulationAborted {}

// ---------------------------------------------------------------------------
// nonlinear right-hand side

fn rhs_with_options(
    u: &SpectralVectorField,
    beta: f64,
    nu: f64,
    advection: bool,
    form: ConvectionForm,
) -> Result<SpectralVectorField> {
    let grid = u.grid();
    let phys = u.to_physical();

    let mut total = SpectralVectorField::zeros(grid);

    if advection {
        let conv = match form {
            ConvectionForm::Advective => convective_term(u, &phys),
            ConvectionForm::SkewSymmetric => {
                let adv = convective_term(u, &phys);
                let div = divergence_form_term(u, &phys);
                let mut avg = adv;
                for comp in 0..3 {
                    let d = div.component(comp);
                    ndarray::Zip::from(avg.component_mut(comp))
                        .and(d)
                        .for_each(|a, &b| *a = 0.5 * (*a + b));
                }
                avg
            }
        };
        total = dealias(&conv);
    }

    if nu != 0.0 {
        let damp = damping_term(grid, &phys, beta);
        for comp in 0..3 {
            ndarray::Zip::from(total.component_mut(comp))
                .and(damp.component(comp))
                .for_each(|t, &d| *t += nu * d);
        }
    }

    let projected = leray_project(&total).scaled(-1.0);
    if !projected.has_finite_coeffs() {
        return Err(Error::BlowUp { time: f64::NAN });
    }
    Ok(projected)
}

/// (u . grad) u evaluated pointwise: sum_i u_i d(u_j)/d(x_i).
fn convective_term(u: &SpectralVectorField, phys: &[Array3<f64>; 3]) -> SpectralVectorField {
    let grid = u.grid();
    let mut out = SpectralVectorField::zeros(grid);
    for j in 0..3 {
        let mut acc = Array3::<f64>::zeros(grid.shape());
        for i in 0..grid.dim() {
            let dj = derivative_physical(u, j, i);
            ndarray::Zip::from(&mut acc)
                .and(&phys[i])
                .and(&dj)
                .for_each(|a, &ui, &d| *a += ui * d);
        }
        *out.component_mut(j) = forward_c2c_3d(&acc.mapv(|v| Complex64::new(v, 0.0)));
    }
    out
}

/// Divergence form sum_i d(u_i u_j)/d(x_i), spectral derivative of the
/// pointwise products.
fn divergence_form_term(u: &SpectralVectorField, phys: &[Array3<f64>; 3]) -> SpectralVectorField {
    let grid = u.grid();
    let mut out = SpectralVectorField::zeros(grid);
    for j in 0..3 {
        let mut acc = Array3::<Complex64>::zeros(grid.shape());
        for i in 0..grid.dim() {
            let mut prod = Array3::<f64>::zeros(grid.shape());
            ndarray::Zip::from(&mut prod)
                .and(&phys[i])
                .and(&phys[j])
                .for_each(|p, &a, &b| *p = a * b);
            let mut spec = forward_c2c_3d(&prod.mapv(|v| Complex64::new(v, 0.0)));
            for ((ix, iy, iz), c) in spec.indexed_iter_mut() {
                let k = grid.wavevector(ix, iy, iz)[i];
                *c = Complex64::new(-c.im * k, c.re * k);
            }
            acc += &spec;
        }
        *out.component_mut(j) = acc;
    }
    out
}

/// |u|^(beta-1) u pointwise; the product is 0 at u = 0 for beta >= 1.
fn damping_term(grid: GridSpec, phys: &[Array3<f64>; 3], beta: f64) -> SpectralVectorField {
    let mut out = SpectralVectorField::zeros(grid);
    let exponent = beta - 1.0;
    let mut factor = Array3::<f64>::zeros(grid.shape());
    ndarray::Zip::from(&mut factor)
        .and(&phys[0])
        .and(&phys[1])
        .and(&phys[2])
        .for_each(|f, &a, &b, &c| {
            let speed2 = a * a + b * b + c * c;
            *f = if exponent == 0.0 {
                1.0
            } else if speed2 == 0.0 {
                0.0
            } else {
                speed2.powf(0.5 * exponent)
            };
        });
    for comp in 0..3 {
        let mut damped = Array3::<f64>::zeros(grid.shape());
        ndarray::Zip::from(&mut damped)
            .and(&factor)
            .and(&phys[comp])
            .for_each(|d, &f, &v| *d = f * v);
        *out.component_mut(comp) = forward_c2c_3d(&damped.mapv(|v| Complex64::new(v, 0.0)));
    }
    out
}

/// The full nonlinear right-hand side
/// -P[dealias((u . grad) u)] - nu P[|u|^(beta-1) u].
pub fn nonlinear_rhs(u: &SpectralVectorField, params: &PhysicalParams) -> Result<SpectralVectorField> {
    rhs_with_options(u, params.beta, params.nu, true, ConvectionForm::Advective)
}

// ---------------------------------------------------------------------------
// exponential integrator

fn phi1(z: f64) -> f64 {
    if z.abs() < 0.5 {
        // sum_k z^k / (k+1)!
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=16 {
            term *= z / (k + 1) as f64;
            sum += term;
        }
        sum
    } else {
        z.exp_m1() / z
    }
}

fn phi2(z: f64) -> f64 {
    if z.abs() < 0.5 {
        // sum_k z^k / (k+2)!
        let mut term = 0.5;
        let mut sum = 0.5;
        for k in 1..=16 {
            term *= z / (k + 2) as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

struct Propagator {
    /// exp(-lambda dt)
    e: Array3<f64>,
    /// dt * phi1(-lambda dt)
    p1: Array3<f64>,
    /// dt * phi2(-lambda dt)
    p2: Array3<f64>,
    /// 1 / (1 + lambda dt) for the IMEX branch
    imex_inv: Array3<f64>,
    dt: f64,
}

impl Propagator {
    fn build(grid: GridSpec, alpha: f64, dt: f64, symbol_shift: f64) -> Self {
        let shape = grid.shape();
        let mut e = Array3::zeros(shape);
        let mut p1 = Array3::zeros(shape);
        let mut p2 = Array3::zeros(shape);
        let mut imex_inv = Array3::zeros(shape);
        for ix in 0..shape.0 {
            for iy in 0..shape.1 {
                for iz in 0..shape.2 {
                    let k2 = grid.k_squared(ix, iy, iz);
                    let lambda = if k2 == 0.0 { 0.0 } else { k2.powf(alpha) } + symbol_shift;
                    let z = -lambda * dt;
                    e[(ix, iy, iz)] = z.exp();
                    p1[(ix, iy, iz)] = dt * phi1(z);
                    p2[(ix, iy, iz)] = dt * phi2(z);
                    imex_inv[(ix, iy, iz)] = 1.0 / (1.0 + lambda * dt);
                }
            }
        }
        Self { e, p1, p2, imex_inv, dt }
    }
}

fn mul_symbol(field: &SpectralVectorField, symbol: &Array3<f64>) -> SpectralVectorField {
    let mut out = field.clone();
    for comp in 0..3 {
        ndarray::Zip::from(out.component_mut(comp))
            .and(symbol)
            .for_each(|c, &s| *c *= s);
    }
    out
}

/// One-step integrator with cached propagator arrays.
pub struct Stepper {
    config: SolverConfig,
    prop: Propagator,
    nu_explicit: f64,
}

impl Stepper {
    pub fn new(config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let shift = if config.absorb_linear_damping {
            config.params.nu
        } else {
            0.0
        };
        let prop = Propagator::build(config.grid, config.params.alpha, config.dt, shift);
        let nu_explicit = if config.absorb_linear_damping {
            0.0
        } else {
            config.params.nu
        };
        Ok(Self { config, prop, nu_explicit })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    fn rhs(&self, u: &SpectralVectorField) -> Result<SpectralVectorField> {
        rhs_with_options(
            u,
            self.config.params.beta,
            self.nu_explicit,
            self.config.advection,
            self.config.convection,
        )
    }

    /// Rebuild the cached propagator for a different dt (adaptive mode).
    fn with_dt(&self, dt: f64) -> Propagator {
        let shift = if self.config.absorb_linear_damping {
            self.config.params.nu
        } else {
            0.0
        };
        Propagator::build(self.config.grid, self.config.params.alpha, dt, shift)
    }

    fn advance(&self, u: &SpectralVectorField, prop: &Propagator) -> Result<SpectralVectorField> {
        match self.config.integrator {
            Integrator::Etdrk2 => {
                let n0 = self.rhs(u)?;
                // a = e u + dt phi1 N(u)
                let mut a = mul_symbol(u, &prop.e);
                let n0p = mul_symbol(&n0, &prop.p1);
                a.axpy(Complex64::new(1.0, 0.0), &n0p)?;
                let n1 = self.rhs(&a)?;
                // u1 = a + dt phi2 (N(a) - N(u))
                let mut dn = n1;
                dn.axpy(Complex64::new(-1.0, 0.0), &n0)?;
                let corr = mul_symbol(&dn, &prop.p2);
                a.axpy(Complex64::new(1.0, 0.0), &corr)?;
                Ok(a)
            }
            Integrator::ImexEuler => {
                let n0 = self.rhs(u)?;
                let mut stage = u.clone();
                stage.axpy(Complex64::new(prop.dt, 0.0), &n0)?;
                Ok(mul_symbol(&stage, &prop.imex_inv))
            }
        }
    }

    /// Advance one step of the configured dt.
    pub fn step_field(&self, u: &SpectralVectorField) -> Result<SpectralVectorField> {
        self.advance(u, &self.prop)
    }
}

/// Single-step convenience wrapper around [`Stepper`].
pub fn step(u: &SpectralVectorField, config: &SolverConfig) -> Result<SpectralVectorField> {
    Stepper::new(config.clone())?.step_field(u)
}

// ---------------------------------------------------------------------------
// trajectory integration

struct Recorder {
    params: PhysicalParams,
    track_difference: bool,
    record_snapshots: bool,
    initial: Option<SpectralVectorField>,
    times: Vec<f64>,
    l2_sq: Vec<f64>,
    h_alpha_sq: Vec<f64>,
    l_beta_plus_1_pow: Vec<f64>,
    w_l2_sq: Vec<f64>,
    divergence: Vec<f64>,
    snapshots: Vec<Snapshot>,
}

impl Recorder {
    fn new(config: &SolverConfig, initial: &SpectralVectorField) -> Self {
        Self {
            params: config.params,
            track_difference: config.track_difference,
            record_snapshots: config.record_snapshots,
            initial: config.track_difference.then(|| initial.clone()),
            times: Vec::new(),
            l2_sq: Vec::new(),
            h_alpha_sq: Vec::new(),
            l_beta_plus_1_pow: Vec::new(),
            w_l2_sq: Vec::new(),
            divergence: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    fn record(&mut self, t: f64, u: &SpectralVectorField) -> Result<()> {
        let n = norms(u, &self.params);
        self.times.push(t);
        self.l2_sq.push(n.l2_sq);
        self.h_alpha_sq.push(n.h_alpha_sq);
        self.l_beta_plus_1_pow.push(n.l_beta_plus_1_pow);
        self.divergence.push(u.divergence_ratio());
        if let Some(initial) = &self.initial {
            let v = evolve_box(initial, self.params.alpha, t)?;
            let w = u.checked_sub(&v)?;
            self.w_l2_sq.push(norms(&w, &self.params).l2_sq);
        }
        if self.record_snapshots {
            self.snapshots.push(Snapshot { time: t, field: u.clone() });
        }
        Ok(())
    }

    fn finish(self) -> TrajectoryRecord {
        TrajectoryRecord {
            norm_series: NormSeries {
                times: self.times,
                l2_sq: self.l2_sq,
                h_alpha_sq: self.h_alpha_sq,
                l_beta_plus_1_pow: self.l_beta_plus_1_pow,
                w_l2_sq: self.track_difference.then_some(self.w_l2_sq),
            },
            divergence: self.divergence,
            snapshots: self.snapshots,
        }
    }
}

/// Integrate from `u0` to `t_end`, recording norms every `record_every`.
///
/// The initial data is Leray-projected and dealiased before the run. On
/// blow-up the partial record accumulated so far is returned inside the
/// abort value.
pub fn simulate(
    u0: &SpectralVectorField,
    config: &SolverConfig,
) -> std::result::Result<TrajectoryRecord, SimulationAborted> {
    let abort = |error: Error| SimulationAborted {
        error,
        partial: TrajectoryRecord::empty(),
    };

    let stepper = Stepper::new(config.clone()).map_err(&abort)?;
    if u0.grid() != config.grid {
        return Err(abort(Error::GridMismatch(
            u0.grid().label(),
            config.grid.label(),
        )));
    }
    if !u0.has_finite_coeffs() {
        return Err(abort(Error::BlowUp { time: 0.0 }));
    }

    let u = dealias(&leray_project(u0));
    let mut recorder = Recorder::new(config, &u);
    if let Err(error) = recorder.record(0.0, &u) {
        return Err(abort(error));
    }

    match run_loop(&stepper, config, u, &mut recorder) {
        Ok(()) => Ok(recorder.finish()),
        Err(error) => Err(SimulationAborted {
            error,
            partial: recorder.finish(),
        }),
    }
}

fn run_loop(
    stepper: &Stepper,
    config: &SolverConfig,
    mut u: SpectralVectorField,
    recorder: &mut Recorder,
) -> Result<()> {
    if config.adaptive_dt {
        let dx = config.grid.dx();
        let mut t = 0.0f64;
        let mut next_record = config.record_every;
        let eps = 1e-12 * config.t_end;
        while t < config.t_end - eps {
            let sup = u.physical_sup_norm();
            let mut dt = config.dt;
            if sup > 0.0 {
                dt = dt.min(config.cfl_safety * dx / sup);
            }
            dt = dt.min(config.t_end - t);
            if !(dt > 1e-14 * config.t_end) {
                return Err(Error::BlowUp { time: t });
            }
            let prop = if (dt - config.dt).abs() <= 1e-15 * config.dt {
                None
            } else {
                Some(stepper.with_dt(dt))
            };
            u = stepper
                .advance(&u, prop.as_ref().unwrap_or(&stepper.prop))
                .map_err(|e| at_time(e, t))?;
            t += dt;
            if !u.has_finite_coeffs() {
                return Err(Error::BlowUp { time: t });
            }
            if t >= next_record - eps || t >= config.t_end - eps {
                recorder.record(t, &u)?;
                while next_record <= t + eps {
                    next_record += config.record_every;
                }
            }
        }
        Ok(())
    } else {
        let (steps, stride) = config.schedule()?;
        for i in 1..=steps {
            let t = i as f64 * config.dt;
            u = stepper.step_field(&u).map_err(|e| at_time(e, t))?;
            if !u.has_finite_coeffs() {
                return Err(Error::BlowUp { time: t });
            }
            if i % stride == 0 || i == steps {
                recorder.record(t, &u)?;
            }
        }
        Ok(())
    }
}

fn at_time(e: Error, t: f64) -> Error {
    match e {
        Error::BlowUp { .. } => Error::BlowUp { time: t },
        other => other,
    }
}

// ---------------------------------------------------------------------------
// initial data

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialDataKind {
    /// Classical Taylor-Green vortex, divergence-free by construction.
    TaylorGreen,
    /// Random solenoidal field supported on integer modes 0 < |j| <= 3:
    /// energy concentrated at the lowest wavenumbers, the box proxy for
    /// integrable initial data on the whole space.
    LowFreqRandom,
    /// Random solenoidal field with a Gaussian spectral envelope
    /// exp(-|j|^2/4) over the resolved band.
    GaussianModulated,
}

/// Build reproducible divergence-free initial data. Random kinds are
/// normalized so the pointwise maximum speed equals `amplitude`; the
/// Taylor-Green field has amplitude as its natural peak speed.
pub fn make_initial_data(
    kind: InitialDataKind,
    grid: GridSpec,
    seed: u64,
    amplitude: f64,
) -> Result<SpectralVectorField> {
    if !(amplitude > 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidParams(format!(
            "amplitude must be positive, got {amplitude}"
        )));
    }
    match kind {
        InitialDataKind::TaylorGreen => taylor_green(grid, amplitude),
        InitialDataKind::LowFreqRandom => {
            random_solenoidal(grid, seed, amplitude, |j2| if j2 <= 9 { 1.0 } else { 0.0 })
        }
        InitialDataKind::GaussianModulated => {
            random_solenoidal(grid, seed, amplitude, |j2| (-(j2 as f64) / 4.0).exp())
        }
    }
}

fn taylor_green(grid: GridSpec, amplitude: f64) -> Result<SpectralVectorField> {
    let mut f = SpectralVectorField::zeros(grid);
    let c = amplitude / 8.0;
    if grid.is_three_dimensional() {
        // u = A (sin x cos y cos z, -cos x sin y cos z, 0)
        for sx in [-1i64, 1] {
            for sy in [-1i64, 1] {
                for sz in [-1i64, 1] {
                    let j = [sx, sy, sz];
                    f.set_mode(0, j, Complex64::new(0.0, -(sx as f64) * c))?;
                    f.set_mode(1, j, Complex64::new(0.0, (sy as f64) * c))?;
                }
            }
        }
    } else {
        // u = A (sin x cos y, -cos x sin y, 0)
        let c = amplitude / 4.0;
        for sx in [-1i64, 1] {
            for sy in [-1i64, 1] {
                let j = [sx, sy, 0];
                f.set_mode(0, j, Complex64::new(0.0, -(sx as f64) * c))?;
                f.set_mode(1, j, Complex64::new(0.0, (sy as f64) * c))?;
            }
        }
    }
    Ok(f)
}

fn random_solenoidal(
    grid: GridSpec,
    seed: u64,
    amplitude: f64,
    envelope: impl Fn(i64) -> f64,
) -> Result<SpectralVectorField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralVectorField::zeros(grid);
    let n = grid.n() as i64;
    let reach = n / 2 - 1;
    let z_range: Vec<i64> = if grid.is_three_dimensional() {
        (-reach..=reach).collect()
    } else {
        vec![0]
    };

    // canonical half-space: first nonzero index positive, so each (j, -j)
    // pair is generated once, in a fixed lexicographic order
    for jx in -reach..=reach {
        for jy in -reach..=reach {
            for &jz in &z_range {
                let j = [jx, jy, jz];
                if j == [0, 0, 0] {
                    continue;
                }
                let canonical = match jx.cmp(&0) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => match jy.cmp(&0) {
                        std::cmp::Ordering::Greater => true,
                        std::cmp::Ordering::Less => false,
                        std::cmp::Ordering::Equal => jz > 0,
                    },
                };
                if !canonical {
                    continue;
                }
                let j2 = jx * jx + jy * jy + jz * jz;
                let env = envelope(j2);
                if env == 0.0 {
                    continue;
                }
                for comp in 0..3 {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    f.set_mode_pair(comp, j, Complex64::new(re, im) * env)?;
                }
            }
        }
    }

    let projected = dealias(&leray_project(&f));
    let sup = projected.physical_sup_norm();
    if !(sup > 0.0) {
        return Err(Error::InvalidParams(
            "degenerate random field: zero after projection".into(),
        ));
    }
    Ok(projected.scaled(amplitude / sup))
}
