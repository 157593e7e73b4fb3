//! A-posteriori verification of the energy structure along trajectories.
//!
//! Two checks, both on recorded samples with centered differences at
//! interval midpoints (second-order consistent with the integrator):
//!
//! * the u-energy law  d/dt ||u||^2 + 2 ||Lambda^alpha u||^2
//!   + 2 nu ||u||_{beta+1}^{beta+1} = 0, whose discrete residual must
//!   shrink at O(dt^2);
//! * the difference inequality for w = u - v (v the exact dissipative flow
//!   of the same data):
//!   d/dt ||w||^2 + 2 ||Lambda^alpha w||^2 + ||u||_{beta+1}^{beta+1}
//!   <= ||grad v||_inf ||u||^2 + C ||v||_{beta+1}^{beta+1},
//!   where C is a free prefactor; the report records the minimal
//!   sufficient value instead of claiming one.

use crate::error::{Error, Result};
use crate::heat::evolve_box;
use crate::solver::TrajectoryRecord;
use crate::spectral::{gradient_sup_norm, norms, PhysicalParams, SpectralVectorField};

/// Difference field w(t) = u(t) - v(t) with v the exact box evolution of
/// `u0`. At t = 0 the result is exactly zero when `u` equals `u0`.
pub fn difference_field(
    u: &SpectralVectorField,
    u0: &SpectralVectorField,
    alpha: f64,
    t: f64,
) -> Result<SpectralVectorField> {
    let v = evolve_box(u0, alpha, t)?;
    u.checked_sub(&v)
}

/// Per-interval residual of the u-energy law:
/// (E_{i+1} - E_i)/dt + (H_i + H_{i+1}) + nu (D_i + D_{i+1}),
/// E = ||u||^2, H = ||Lambda^alpha u||^2, D = ||u||_{beta+1}^{beta+1}
/// (the sums are twice the midpoint averages). Zero for the exact flow up
/// to O(dt^2).
pub fn u_energy_residual(record: &TrajectoryRecord, params: &PhysicalParams) -> Result<Vec<f64>> {
    let s = &record.norm_series;
    if s.len() < 2 {
        return Err(Error::InvalidParams(
            "need at least two samples for energy residuals".into(),
        ));
    }
    let mut residuals = Vec::with_capacity(s.len() - 1);
    for i in 0..s.len() - 1 {
        let dt = s.times[i + 1] - s.times[i];
        let de = (s.l2_sq[i + 1] - s.l2_sq[i]) / dt;
        let diss = s.h_alpha_sq[i] + s.h_alpha_sq[i + 1];
        let damp = params.nu * (s.l_beta_plus_1_pow[i] + s.l_beta_plus_1_pow[i + 1]);
        residuals.push(de + diss + damp);
    }
    Ok(residuals)
}

/// Margins and violations of the discrete difference inequality.
#[derive(Debug, Clone)]
pub struct LedgerReport {
    /// Interval midpoints.
    pub times: Vec<f64>,
    pub u_balance_residual: Vec<f64>,
    /// RHS - LHS per interval; negative beyond `tolerance` is a violation.
    pub w_inequality_margin: Vec<f64>,
    pub violations: Vec<(f64, f64)>,
    /// Smallest prefactor that would clear every margin at this tolerance
    /// (infinite when an interval has no ||v||^{beta+1} leverage left).
    pub minimal_prefactor: f64,
    pub prefactor: f64,
    pub tolerance: f64,
}

/// Evaluate the difference inequality along a snapshotted trajectory.
///
/// `record` must carry snapshots at every recorded time (run the solver
/// with `record_snapshots = true`); `u0` is the initial state of that run
/// (the t = 0 snapshot). `prefactor` multiplies the ||v||^{beta+1} term;
/// margins below `-tolerance` are collected as violations.
pub fn w_inequality_check(
    record: &TrajectoryRecord,
    u0: &SpectralVectorField,
    params: &PhysicalParams,
    prefactor: f64,
    tolerance: f64,
) -> Result<LedgerReport> {
    if !(prefactor > 0.0) {
        return Err(Error::InvalidParams(format!(
            "prefactor must be positive, got {prefactor}"
        )));
    }
    let s = &record.norm_series;
    if record.snapshots.len() != s.len() || s.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "difference check needs a snapshot per sample: {} snapshots vs {} samples",
            record.snapshots.len(),
            s.len()
        )));
    }

    // pointwise-in-time w and v quantities
    let mut w_l2_sq = Vec::with_capacity(s.len());
    let mut w_h_alpha_sq = Vec::with_capacity(s.len());
    let mut v_pow = Vec::with_capacity(s.len());
    let mut grad_v_sup = Vec::with_capacity(s.len());
    for (t, snap) in s.times.iter().zip(record.snapshots.iter()) {
        if (snap.time - t).abs() > 1e-12 * t.max(1.0) {
            return Err(Error::InvalidParams(format!(
                "snapshot at t = {} does not match sample time {t}",
                snap.time
            )));
        }
        let v = evolve_box(u0, params.alpha, *t)?;
        let w = snap.field.checked_sub(&v)?;
        let wn = norms(&w, params);
        w_l2_sq.push(wn.l2_sq);
        w_h_alpha_sq.push(wn.h_alpha_sq);
        let vn = norms(&v, params);
        v_pow.push(vn.l_beta_plus_1_pow);
        grad_v_sup.push(gradient_sup_norm(&v));
    }

    let u_balance_residual = u_energy_residual(record, params)?;

    let mut times = Vec::with_capacity(s.len() - 1);
    let mut margins = Vec::with_capacity(s.len() - 1);
    let mut violations = Vec::new();
    let mut minimal_prefactor = 0.0f64;
    for i in 0..s.len() - 1 {
        let dt = s.times[i + 1] - s.times[i];
        let mid = 0.5 * (s.times[i] + s.times[i + 1]);
        let lhs = (w_l2_sq[i + 1] - w_l2_sq[i]) / dt
            + (w_h_alpha_sq[i] + w_h_alpha_sq[i + 1])
            + 0.5 * (s.l_beta_plus_1_pow[i] + s.l_beta_plus_1_pow[i + 1]);
        let rhs_base = 0.5
            * (grad_v_sup[i] * s.l2_sq[i] + grad_v_sup[i + 1] * s.l2_sq[i + 1]);
        let v_term = 0.5 * (v_pow[i] + v_pow[i + 1]);
        let margin = rhs_base + prefactor * v_term - lhs;
        times.push(mid);
        margins.push(margin);
        if margin < -tolerance {
            violations.push((mid, margin));
        }
        let needed = lhs - rhs_base - tolerance;
        if needed > 0.0 {
            minimal_prefactor = if v_term > 0.0 {
                minimal_prefactor.max(needed / v_term)
            } else {
                f64::INFINITY
            };
        }
    }

    Ok(LedgerReport {
        times,
        u_balance_residual,
        w_inequality_margin: margins,
        violations,
        minimal_prefactor,
        prefactor,
        tolerance,
    })
}
