//! Experiment execution: single runs, concurrent parameter sweeps, the
//! semigroup verification battery, exponent tables and bootstrap traces.
//! Every run writes into its own subdirectory; the coordinator writes the
//! index once after all workers finish.

use serde::Serialize;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::config::{effective_workers, ExperimentConfig, Mode};
use super::export::{export_norm_series, fmt_f64, write_csv, write_json};
use crate::decay::{
    bootstrap_exponents, compare_to_theory, exponent_thm_gnse, fit_power_law, BootstrapTrace,
    DecayFit, PowerLawFit,
};
use crate::error::{Error, Result};
use crate::heat::{semigroup_rate_fit, RadialInitialData};
use crate::ledger::{u_energy_residual, w_inequality_check};
use crate::solver::{make_initial_data, simulate, TrajectoryRecord};

/// Map an error to the process exit code: 1 validation, 2 runtime
/// (blow-up, quadrature, fit), 3 I/O.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InvalidGrid(_)
        | Error::InvalidParams(_)
        | Error::InvalidConfig(_)
        | Error::GridMismatch(_, _)
        | Error::OutOfRange(_)
        | Error::NegativeTime(_)
        | Error::NonInvertibleMeanMode(_) => 1,
        Error::BlowUp { .. }
        | Error::QuadratureNonConvergence(_)
        | Error::FitError(_)
        | Error::BootstrapNonConvergence(_) => 2,
        Error::Io(_) => 3,
    }
}

/// Execute the experiment described by `config`, writing artifacts under
/// its output directory. `workers_cli` is the `--workers` flag.
pub fn run(config: &ExperimentConfig, workers_cli: Option<usize>) -> Result<()> {
    let out_dir = PathBuf::from(&config.output_dir);
    std::fs::create_dir_all(&out_dir)?;
    match config.mode {
        Mode::Simulate => run_simulations(config, workers_cli, &out_dir),
        Mode::SemigroupVerify => run_semigroup_battery(config, &out_dir),
        Mode::ExponentTable => run_exponent_table(config, &out_dir),
        Mode::BootstrapTrace => run_bootstrap_trace(config, &out_dir),
    }
}

// ---------------------------------------------------------------------------
// simulate mode

#[derive(Debug, Serialize)]
struct LedgerDigest {
    prefactor: f64,
    tolerance: f64,
    n_violations: usize,
    min_margin: Option<f64>,
    /// None when no finite prefactor can clear the margins.
    minimal_prefactor: Option<f64>,
}

#[derive(Debug, Serialize)]
struct RunSummary<'a> {
    alpha: f64,
    beta: f64,
    nu: f64,
    seed: u64,
    status: String,
    n_samples: usize,
    final_time: Option<f64>,
    final_l2_sq: Option<f64>,
    l2_monotone: Option<bool>,
    max_divergence: Option<f64>,
    max_u_energy_residual: Option<f64>,
    fit: Option<PowerLawFit>,
    decay_fit: Option<DecayFit>,
    ledger: Option<LedgerDigest>,
    warnings: Vec<String>,
    config: &'a ExperimentConfig,
}

#[derive(Debug, Serialize)]
struct RunIndexEntry {
    run_dir: String,
    alpha: f64,
    beta: f64,
    status: String,
}

#[derive(Debug, Serialize)]
struct RunIndex<'a> {
    config: &'a ExperimentConfig,
    runs: Vec<RunIndexEntry>,
}

fn run_simulations(
    config: &ExperimentConfig,
    workers_cli: Option<usize>,
    out_dir: &Path,
) -> Result<()> {
    let grid = config.parameter_grid()?;
    let workers = effective_workers(workers_cli, config.workers, grid.len());
    let runs_dir = out_dir.join("runs");
    std::fs::create_dir_all(&runs_dir)?;

    let next = AtomicUsize::new(0);
    let results: Vec<Mutex<Option<(RunIndexEntry, Option<Error>)>>> =
        (0..grid.len()).map(|_| Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= grid.len() {
                    break;
                }
                let (alpha, beta) = grid[i];
                let dir_name = format!("run_{i:03}_alpha{alpha}_beta{beta}");
                let run_dir = runs_dir.join(&dir_name);
                let outcome = run_single(config, alpha, beta, &run_dir);
                let (status, error) = match outcome {
                    Ok(()) => ("ok".to_string(), None),
                    Err(e) => (format!("failed: {e}"), Some(e)),
                };
                *results[i].lock().expect("worker poisoned") = Some((
                    RunIndexEntry {
                        run_dir: format!("runs/{dir_name}"),
                        alpha,
                        beta,
                        status,
                    },
                    error,
                ));
            });
        }
    });

    let mut entries = Vec::with_capacity(grid.len());
    let mut first_error = None;
    for cell in results {
        let (entry, error) = cell
            .into_inner()
            .expect("worker poisoned")
            .expect("all jobs claimed");
        if first_error.is_none() {
            first_error = error;
        }
        entries.push(entry);
    }

    write_json(&RunIndex { config, runs: entries }, &out_dir.join("index.json"))?;
    match first_error {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

fn run_single(
    config: &ExperimentConfig,
    alpha: f64,
    beta: f64,
    run_dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(run_dir)?;
    let (solver_config, kind, amplitude) = config.solver_config_for(alpha, beta)?;
    let warnings = solver_config.validate()?;
    let u0 = make_initial_data(kind, solver_config.grid, config.seed, amplitude)?;

    let (record, run_error) = match simulate(&u0, &solver_config) {
        Ok(record) => (record, None),
        Err(aborted) => (aborted.partial, Some(aborted.error)),
    };

    let mut summary = RunSummary {
        alpha,
        beta,
        nu: solver_config.params.nu,
        seed: config.seed,
        status: match &run_error {
            None => "ok".into(),
            Some(e) => format!("failed: {e}"),
        },
        n_samples: record.norm_series.len(),
        final_time: record.times().last().copied(),
        final_l2_sq: record.norm_series.l2_sq.last().copied(),
        l2_monotone: None,
        max_divergence: None,
        max_u_energy_residual: None,
        fit: None,
        decay_fit: None,
        ledger: None,
        warnings,
        config,
    };

    if !record.norm_series.is_empty() {
        export_norm_series(&record, &run_dir.join("norms.csv"))?;
        summary.l2_monotone =
            Some(record.norm_series.l2_sq.windows(2).all(|w| w[1] <= w[0]));
        summary.max_divergence = Some(
            record
                .divergence
                .iter()
                .fold(0.0f64, |m, &d| m.max(d)),
        );
        if record.norm_series.len() >= 2 {
            summary.max_u_energy_residual = Some(
                u_energy_residual(&record, &solver_config.params)?
                    .iter()
                    .fold(0.0f64, |m, r| m.max(r.abs())),
            );
        }
        summary.fit = fit_power_law(
            &record.norm_series.times,
            &record.norm_series.l2_sq,
            (config.fit.t_lo, config.fit.t_hi),
        )
        .ok();
        if let (Some(fit), Ok(sigma)) = (&summary.fit, exponent_thm_gnse(alpha, beta)) {
            let theory = -sigma;
            summary.decay_fit = Some(compare_to_theory(
                fit,
                theory,
                config.fit.consistency_fraction * sigma,
                config.fit.residual_threshold,
            ));
        }
        if config.ledger.enabled && run_error.is_none() {
            summary.ledger = Some(ledger_digest(&record, &u0, &solver_config, config)?);
        }
    }

    write_json(&summary, &run_dir.join("summary.json"))?;
    match run_error {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

fn ledger_digest(
    record: &TrajectoryRecord,
    u0: &crate::spectral::SpectralVectorField,
    solver_config: &crate::solver::SolverConfig,
    config: &ExperimentConfig,
) -> Result<LedgerDigest> {
    let initial = record
        .snapshots
        .first()
        .map(|s| &s.field)
        .unwrap_or(u0);
    let report = w_inequality_check(
        record,
        initial,
        &solver_config.params,
        config.ledger.prefactor,
        config.ledger.tolerance,
    )?;
    let min_margin = report
        .w_inequality_margin
        .iter()
        .copied()
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));
    Ok(LedgerDigest {
        prefactor: report.prefactor,
        tolerance: report.tolerance,
        n_violations: report.violations.len(),
        min_margin,
        minimal_prefactor: report.minimal_prefactor.is_finite().then_some(report.minimal_prefactor),
    })
}

// ---------------------------------------------------------------------------
// semigroup battery

#[derive(Debug, Serialize)]
struct SemigroupResult {
    alpha: f64,
    fitted_exponent: f64,
    theory_exponent: f64,
    rel_error: f64,
    residual: f64,
    reliable: bool,
}

#[derive(Debug, Serialize)]
struct SemigroupSummary<'a> {
    config: &'a ExperimentConfig,
    data: String,
    results: Vec<SemigroupResult>,
}

fn run_semigroup_battery(config: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    let data = RadialInitialData::gaussian();
    let window = (config.semigroup.t_lo, config.semigroup.t_hi);
    let mut results = Vec::new();
    let mut rows = Vec::new();
    for &alpha in &config.semigroup.alphas {
        let rec = semigroup_rate_fit(&data, alpha, window, config.semigroup.samples)?;
        let theory = rec.theory_exponent();
        results.push(SemigroupResult {
            alpha,
            fitted_exponent: rec.fitted_exponent,
            theory_exponent: theory,
            rel_error: (rec.fitted_exponent - theory).abs() / theory.abs(),
            residual: rec.residual,
            reliable: rec.reliable,
        });
        for (t, v) in rec.times.iter().zip(rec.l2_sq.iter()) {
            rows.push(vec![fmt_f64(alpha), fmt_f64(*t), fmt_f64(*v)]);
        }
    }
    write_csv(&out_dir.join("semigroup.csv"), "alpha,t,l2_sq", &rows)?;
    write_json(
        &SemigroupSummary {
            config,
            data: data.label().to_string(),
            results,
        },
        &out_dir.join("semigroup.json"),
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// exponent table

#[derive(Debug, Serialize)]
struct ExponentTableSummary<'a> {
    config: &'a ExperimentConfig,
    n_rows: usize,
    csv: String,
}

fn run_exponent_table(config: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    let grid = config.parameter_grid()?;
    let mut rows = Vec::with_capacity(grid.len());
    for (alpha, beta) in grid {
        let sigma = exponent_thm_gnse(alpha, beta)?;
        rows.push(vec![fmt_f64(alpha), fmt_f64(beta), fmt_f64(sigma)]);
    }
    let n_rows = rows.len();
    write_csv(&out_dir.join("exponent_table.csv"), "alpha,beta,exponent", &rows)?;
    write_json(
        &ExponentTableSummary {
            config,
            n_rows,
            csv: "exponent_table.csv".into(),
        },
        &out_dir.join("summary.json"),
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// bootstrap trace

#[derive(Debug, Serialize)]
struct BootstrapSummary<'a> {
    config: &'a ExperimentConfig,
    traces: Vec<BootstrapTrace>,
}

fn run_bootstrap_trace(config: &ExperimentConfig, out_dir: &Path) -> Result<()> {
    let grid = config.parameter_grid()?;
    let mut traces = Vec::with_capacity(grid.len());
    let mut rows = Vec::new();
    for (alpha, beta) in grid {
        let trace = bootstrap_exponents(alpha, beta, config.bootstrap.max_iter)?;
        for (i, it) in trace.iterates.iter().enumerate() {
            rows.push(vec![
                fmt_f64(alpha),
                fmt_f64(beta),
                (i + 1).to_string(),
                fmt_f64(it.w_exponent),
                fmt_f64(it.u_exponent),
            ]);
        }
        traces.push(trace);
    }
    write_csv(
        &out_dir.join("bootstrap_trace.csv"),
        "alpha,beta,iteration,w_exponent,u_exponent",
        &rows,
    )?;
    write_json(&BootstrapSummary { config, traces }, &out_dir.join("bootstrap_trace.json"))?;
    Ok(())
}
