//! Decay-rate algebra and measurement.
//!
//! The theoretical side: closed-form decay exponents for the damped system
//! ([`exponent_thm_nse`], [`exponent_thm_gnse`]), the catalog of previously
//! published rates ([`exponent_catalog`]), and the bootstrap iteration that
//! sharpens a preliminary difference-field estimate until stationary
//! ([`bootstrap_exponents`]). The measured side: least-squares power-law
//! fits of norm series against (1+t) ([`fit_power_law`]) and the verdict
//! logic comparing fit to theory.
//!
//! Exponent sign convention: fitted and theoretical exponents are *slopes*
//! of log(value) vs log(1+t), so a decay like (1+t)^{-3/2} has exponent
//! -1.5.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default RMS log-misfit above which a fit verdict is `Unreliable`.
pub const DEFAULT_RESIDUAL_THRESHOLD: f64 = 0.05;
/// Default consistency tolerance as a fraction of |theory exponent|.
pub const DEFAULT_CONSISTENCY_FRACTION: f64 = 0.10;

/// Time-stamped norm record along a trajectory. All series share the time
/// axis; the difference-field column is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSeries {
    pub times: Vec<f64>,
    pub l2_sq: Vec<f64>,
    pub h_alpha_sq: Vec<f64>,
    pub l_beta_plus_1_pow: Vec<f64>,
    pub w_l2_sq: Option<Vec<f64>>,
}

impl NormSeries {
    pub fn new(
        times: Vec<f64>,
        l2_sq: Vec<f64>,
        h_alpha_sq: Vec<f64>,
        l_beta_plus_1_pow: Vec<f64>,
        w_l2_sq: Option<Vec<f64>>,
    ) -> Result<Self> {
        let n = times.len();
        if l2_sq.len() != n || h_alpha_sq.len() != n || l_beta_plus_1_pow.len() != n {
            return Err(Error::InvalidParams(
                "norm series columns must share the time axis length".into(),
            ));
        }
        if let Some(w) = &w_l2_sq {
            if w.len() != n {
                return Err(Error::InvalidParams(
                    "w column must share the time axis length".into(),
                ));
            }
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParams("times must be strictly increasing".into()));
        }
        let nonneg = |v: &[f64]| v.iter().all(|&x| x >= 0.0 && x.is_finite());
        if !nonneg(&l2_sq)
            || !nonneg(&h_alpha_sq)
            || !nonneg(&l_beta_plus_1_pow)
            || !w_l2_sq.as_deref().map_or(true, nonneg)
        {
            return Err(Error::InvalidParams(
                "norm series entries must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            times,
            l2_sq,
            h_alpha_sq,
            l_beta_plus_1_pow,
            w_l2_sq,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Decay exponent of ||u||_L2^2 for the damped system with classical
/// dissipation: min{3/2, (3 beta - 2)/2}, branch point beta = 5/3.
/// Returned as the positive rate sigma of (1+t)^{-sigma}.
pub fn exponent_thm_nse(beta: f64) -> Result<f64> {
    if !(beta >= 1.0) {
        return Err(Error::OutOfRange(format!("beta must satisfy beta >= 1, got {beta}")));
    }
    Ok((1.5f64).min((3.0 * beta - 2.0) / 2.0))
}

/// Decay exponent of ||u||_L2^2 with fractional dissipation order alpha:
/// min{3/(2 alpha), (3 beta - 2 alpha)/(2 alpha)}, defined for
/// 0 < alpha < 5/4 and beta >= 1. Reduces to [`exponent_thm_nse`] at
/// alpha = 1; branch point beta = (3 + 2 alpha)/3.
pub fn exponent_thm_gnse(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.25) {
        return Err(Error::OutOfRange(format!(
            "alpha must lie in (0, 5/4) for the fractional decay exponent, got {alpha}"
        )));
    }
    if !(beta >= 1.0) {
        return Err(Error::OutOfRange(format!("beta must satisfy beta >= 1, got {beta}")));
    }
    let cap = 3.0 / (2.0 * alpha);
    let damping_branch = (3.0 * beta - 2.0 * alpha) / (2.0 * alpha);
    Ok(cap.min(damping_branch))
}

/// Previously published decay rates for the same systems, each valid under
/// its quoted hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorResult {
    /// min{1/2, (3 beta - 7)/(2 (beta + 1))} for beta > 7/3.
    CaiLei { beta: f64 },
    /// min{mu, 3/2} for beta >= 10/3, given a spectral-type hypothesis
    /// parameter mu > 0.
    JiaZhangDong { mu: f64, beta: f64 },
    /// 3/2 for beta >= 3.
    Jiang { beta: f64 },
    /// (3/(2 alpha)) (2/p - 1) for 0 < alpha < 5/4 and
    /// max{1, 1/(3 - 2 alpha)} <= p < 2.
    JiuYu { alpha: f64, p: f64 },
    /// 3/(2 alpha) for 0 < alpha < 2.
    Duan { alpha: f64 },
}

/// Evaluate a catalog entry, rejecting parameters outside its hypotheses.
pub fn exponent_catalog(entry: PriorResult) -> Result<f64> {
    match entry {
        PriorResult::CaiLei { beta } => {
            if !(beta > 7.0 / 3.0) {
                return Err(Error::OutOfRange(format!(
                    "this rate requires beta > 7/3, got {beta}"
                )));
            }
            Ok((0.5f64).min((3.0 * beta - 7.0) / (2.0 * (beta + 1.0))))
        }
        PriorResult::JiaZhangDong { mu, beta } => {
            if !(beta >= 10.0 / 3.0) {
                return Err(Error::OutOfRange(format!(
                    "this rate requires beta >= 10/3, got {beta}"
                )));
            }
            if !(mu > 0.0) {
                return Err(Error::OutOfRange(format!("this rate requires mu > 0, got {mu}")));
            }
            Ok(mu.min(1.5))
        }
        PriorResult::Jiang { beta } => {
            if !(beta >= 3.0) {
                return Err(Error::OutOfRange(format!(
                    "this rate requires beta >= 3, got {beta}"
                )));
            }
            Ok(1.5)
        }
        PriorResult::JiuYu { alpha, p } => {
            if !(alpha > 0.0 && alpha < 1.25) {
                return Err(Error::OutOfRange(format!(
                    "this rate requires 0 < alpha < 5/4, got {alpha}"
                )));
            }
            let p_lo = (1.0f64).max(1.0 / (3.0 - 2.0 * alpha));
            if !(p >= p_lo && p < 2.0) {
                return Err(Error::OutOfRange(format!(
                    "this rate requires max(1, 1/(3 - 2 alpha)) <= p < 2, got p = {p} (lower bound {p_lo})"
                )));
            }
            Ok(3.0 / (2.0 * alpha) * (2.0 / p - 1.0))
        }
        PriorResult::Duan { alpha } => {
            if !(alpha > 0.0 && alpha < 2.0) {
                return Err(Error::OutOfRange(format!(
                    "this rate requires 0 < alpha < 2, got {alpha}"
                )));
            }
            Ok(3.0 / (2.0 * alpha))
        }
    }
}

/// One pass of the bootstrap: candidate exponents entering the w-update and
/// the resulting (w, u) pair. Rates are positive sigma values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapIterate {
    /// (2 - alpha)/alpha + previous u-exponent: the forcing chain.
    pub chain_candidate: f64,
    /// (3 beta - 2 alpha)/(2 alpha): the damping forcing term.
    pub damping_candidate: f64,
    /// 3/(2 alpha): the frequency-splitting ceiling.
    pub ceiling: f64,
    pub w_exponent: f64,
    pub u_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapTrace {
    pub alpha: f64,
    pub beta: f64,
    pub iterates: Vec<BootstrapIterate>,
    /// Stationary u-exponent (equals [`exponent_thm_gnse`]).
    pub fixed_point: f64,
    /// 1-based index of the first iterate equal to its predecessor.
    pub converged_at: usize,
}

/// Iterate the difference-field decay estimate until stationary:
///
/// w_{k+1} = min{ (2 - alpha)/alpha + u_k, (3 beta - 2 alpha)/(2 alpha),
///                3/(2 alpha) },
/// u_{k+1} = min{ 3/(2 alpha), w_{k+1} },  starting from u_0 = 0.
///
/// The first argument feeds the improved u-decay back through the forcing
/// terms; the last is the splitting ceiling on what the low-frequency ball
/// allows. The iteration is monotone and stationary within three passes on
/// the admissible parameter range.
pub fn bootstrap_exponents(alpha: f64, beta: f64, max_iter: usize) -> Result<BootstrapTrace> {
    // same hypotheses as the closed-form exponent
    let theorem = exponent_thm_gnse(alpha, beta)?;
    if max_iter == 0 {
        return Err(Error::InvalidParams("max_iter must be at least 1".into()));
    }

    let gain = (2.0 - alpha) / alpha;
    let damping = (3.0 * beta - 2.0 * alpha) / (2.0 * alpha);
    let ceiling = 3.0 / (2.0 * alpha);

    let mut iterates: Vec<BootstrapIterate> = Vec::new();
    let mut u_prev = 0.0f64;
    for k in 0..max_iter {
        let chain = gain + u_prev;
        let w = chain.min(damping).min(ceiling);
        let u = ceiling.min(w);
        let it = BootstrapIterate {
            chain_candidate: chain,
            damping_candidate: damping,
            ceiling,
            w_exponent: w,
            u_exponent: u,
        };
        let stationary = iterates
            .last()
            .is_some_and(|prev| prev.w_exponent == w && prev.u_exponent == u);
        iterates.push(it);
        if stationary {
            debug_assert!((u - theorem).abs() <= 1e-12 * theorem.max(1.0));
            return Ok(BootstrapTrace {
                alpha,
                beta,
                iterates,
                fixed_point: u,
                converged_at: k + 1,
            });
        }
        u_prev = u;
    }
    Err(Error::BootstrapNonConvergence(max_iter))
}

/// Unrated least-squares power-law fit: slope of log(value) vs log(1+t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub intercept: f64,
    pub residual: f64,
    pub window: (f64, f64),
    pub n_samples: usize,
}

/// Fit verdict against a theoretical exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Faster,
    Slower,
    Unreliable,
}

/// A power-law fit compared against a theoretical slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Fitted slope of log(value) vs log(1+t) (negative for decay).
    pub exponent: f64,
    pub window: (f64, f64),
    /// RMS misfit in log space.
    pub residual: f64,
    /// Theoretical slope it is compared against (same sign convention).
    pub theory_exponent: f64,
    pub verdict: Verdict,
}

/// Plain linear least squares y ~ slope*x + intercept with RMS residual.
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    let slope = cov / var;
    let intercept = mean_y - slope * mean_x;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        let e = y - (slope * x + intercept);
        ss += e * e;
    }
    (slope, intercept, (ss / n).sqrt())
}

/// Least squares of log(value) against log(1+t) over the samples falling in
/// [t_lo, t_hi]. Needs at least 10 in-window samples, all positive.
pub fn fit_power_law(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<PowerLawFit> {
    if times.len() != values.len() {
        return Err(Error::FitError("times/values length mismatch".into()));
    }
    let (t_lo, t_hi) = window;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in times.iter().zip(values.iter()) {
        if t < t_lo || t > t_hi {
            continue;
        }
        if !(v > 0.0) {
            return Err(Error::FitError(format!(
                "non-positive value {v} at t = {t} inside the fit window"
            )));
        }
        xs.push((1.0 + t).ln());
        ys.push(v.ln());
    }
    if xs.len() < 10 {
        return Err(Error::FitError(format!(
            "need at least 10 samples inside [{t_lo}, {t_hi}], found {}",
            xs.len()
        )));
    }
    let (slope, intercept, residual) = linear_fit(&xs, &ys);
    Ok(PowerLawFit {
        exponent: slope,
        intercept,
        residual,
        window,
        n_samples: xs.len(),
    })
}

/// Attach a verdict: `Unreliable` when the residual exceeds the threshold,
/// otherwise `Consistent` within the tolerance, else `Faster`/`Slower`
/// (faster decay = more negative slope than theory).
pub fn compare_to_theory(
    fit: &PowerLawFit,
    theory_exponent: f64,
    tolerance: f64,
    residual_threshold: f64,
) -> DecayFit {
    let verdict = if fit.residual > residual_threshold {
        Verdict::Unreliable
    } else if (fit.exponent - theory_exponent).abs() <= tolerance {
        Verdict::Consistent
    } else if fit.exponent < theory_exponent {
        Verdict::Faster
    } else {
        Verdict::Slower
    };
    DecayFit {
        exponent: fit.exponent,
        window: fit.window,
        residual: fit.residual,
        theory_exponent,
        verdict,
    }
}
