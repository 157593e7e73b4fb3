//! Experiment configuration: a TOML file with nested sections, plus
//! `--set key.path=value` overrides applied to the parsed tree before
//! deserialization. The fully-defaulted configuration is echoed into every
//! JSON artifact, so outputs are self-describing.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::{ConvectionForm, InitialDataKind, Integrator, SolverConfig};
use crate::spectral::{GridSpec, PhysicalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Integrate the damped system, export norm series and fits.
    Simulate,
    /// Whole-space decay-rate battery for the dissipative semigroup.
    SemigroupVerify,
    /// CSV table of theoretical decay exponents over the sweep grid.
    ExponentTable,
    /// Iterate and export the bootstrap exponent sequence.
    BootstrapTrace,
}

fn default_output_dir() -> String {
    "out".into()
}

fn default_nu() -> f64 {
    1.0
}

fn default_two_pi() -> f64 {
    2.0 * PI
}

fn default_dim() -> usize {
    3
}

fn default_cfl() -> f64 {
    0.5
}

fn default_amplitude() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

fn default_integrator() -> Integrator {
    Integrator::Etdrk2
}

fn default_convection() -> ConvectionForm {
    ConvectionForm::Advective
}

fn default_initial_data() -> InitialDataKind {
    InitialDataKind::TaylorGreen
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub n: usize,
    #[serde(default = "default_two_pi")]
    pub box_length: f64,
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "default_nu")]
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    /// Defaults to dt (record every step).
    #[serde(default)]
    pub record_every: Option<f64>,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_integrator")]
    pub integrator: Integrator,
    #[serde(default = "default_initial_data")]
    pub initial_data: InitialDataKind,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default)]
    pub adaptive_dt: bool,
    #[serde(default = "default_true")]
    pub advection: bool,
    #[serde(default = "default_convection")]
    pub convection: ConvectionForm,
    #[serde(default)]
    pub absorb_linear_damping: bool,
    #[serde(default)]
    pub record_snapshots: bool,
    #[serde(default = "default_true")]
    pub track_difference: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitSection {
    pub t_lo: f64,
    pub t_hi: f64,
    pub residual_threshold: f64,
    /// Consistency tolerance as a fraction of |theory exponent|.
    pub consistency_fraction: f64,
}

impl Default for FitSection {
    fn default() -> Self {
        Self {
            t_lo: 1.0,
            t_hi: 20.0,
            residual_threshold: crate::decay::DEFAULT_RESIDUAL_THRESHOLD,
            consistency_fraction: crate::decay::DEFAULT_CONSISTENCY_FRACTION,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SemigroupSection {
    pub alphas: Vec<f64>,
    pub samples: usize,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Default for SemigroupSection {
    fn default() -> Self {
        Self {
            alphas: vec![0.5, 0.75, 1.0, 1.25],
            samples: 30,
            t_lo: 100.0,
            t_hi: 10000.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LedgerSection {
    pub enabled: bool,
    pub prefactor: f64,
    pub tolerance: f64,
}

impl Default for LedgerSection {
    fn default() -> Self {
        Self {
            enabled: false,
            prefactor: 4.0,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BootstrapSection {
    pub max_iter: usize,
}

impl Default for BootstrapSection {
    fn default() -> Self {
        Self { max_iter: 16 }
    }
}

/// The deserialized configuration with every default materialized; this is
/// the struct echoed verbatim into output JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub solver: Option<SolverSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub semigroup: SemigroupSection,
    #[serde(default)]
    pub ledger: LedgerSection,
    #[serde(default)]
    pub bootstrap: BootstrapSection,
}

impl ExperimentConfig {
    /// Parse a config file and apply `--set` overrides.
    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn from_toml_str(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e| Error::InvalidConfig(format!("TOML parse error: {e}")))?;
        let mut value = toml::Value::Table(table);
        for (key, raw) in overrides {
            apply_override(&mut value, key, raw)?;
        }
        let config: ExperimentConfig = value
            .try_into()
            .map_err(|e| Error::InvalidConfig(format!("{e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Structural checks beyond what serde enforces. Returns warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        if let Some(sweep) = &self.sweep {
            if sweep.alpha.is_empty() {
                return Err(Error::InvalidConfig("sweep.alpha must be non-empty".into()));
            }
            if sweep.beta.is_empty() {
                return Err(Error::InvalidConfig("sweep.beta must be non-empty".into()));
            }
        }
        match self.mode {
            Mode::Simulate => {
                if self.solver.is_none() {
                    return Err(Error::InvalidConfig(
                        "mode = \"simulate\" requires a [solver] section".into(),
                    ));
                }
                let (alpha, beta) = self.base_alpha_beta()?;
                let (config, _, _) = self.solver_config_for(alpha, beta)?;
                warnings.extend(config.validate()?);
            }
            Mode::ExponentTable | Mode::BootstrapTrace => {
                if self.sweep.is_none() {
                    return Err(Error::InvalidConfig(format!(
                        "mode = {:?} requires a [sweep] section with alpha and beta lists",
                        self.mode
                    )));
                }
            }
            Mode::SemigroupVerify => {
                if self.semigroup.alphas.is_empty() {
                    return Err(Error::InvalidConfig("semigroup.alphas must be non-empty".into()));
                }
            }
        }
        if !(self.fit.t_lo >= 0.0 && self.fit.t_hi > self.fit.t_lo) {
            return Err(Error::InvalidConfig(format!(
                "fit window [{}, {}] must be ordered and non-negative",
                self.fit.t_lo, self.fit.t_hi
            )));
        }
        Ok(warnings)
    }

    fn base_alpha_beta(&self) -> Result<(f64, f64)> {
        let solver = self.solver.as_ref().ok_or_else(|| {
            Error::InvalidConfig("this mode requires a [solver] section".into())
        })?;
        Ok((solver.alpha, solver.beta))
    }

    /// The (alpha, beta) grid this experiment runs over: the sweep lists, or
    /// the single solver pair when no sweep is given.
    pub fn parameter_grid(&self) -> Result<Vec<(f64, f64)>> {
        if let Some(sweep) = &self.sweep {
            let mut grid = Vec::with_capacity(sweep.alpha.len() * sweep.beta.len());
            for &a in &sweep.alpha {
                for &b in &sweep.beta {
                    grid.push((a, b));
                }
            }
            Ok(grid)
        } else {
            self.base_alpha_beta().map(|ab| vec![ab])
        }
    }

    /// Build the validated solver configuration for one (alpha, beta) pair.
    pub fn solver_config_for(
        &self,
        alpha: f64,
        beta: f64,
    ) -> Result<(SolverConfig, InitialDataKind, f64)> {
        let s = self.solver.as_ref().ok_or_else(|| {
            Error::InvalidConfig("this mode requires a [solver] section".into())
        })?;
        let grid = GridSpec::new(s.n, s.box_length, s.dim)?;
        let params = PhysicalParams::new(alpha, beta, s.nu)?;
        let mut config = SolverConfig::new(grid, params, s.dt, s.t_end);
        config.record_every = s.record_every.unwrap_or(s.dt);
        config.cfl_safety = s.cfl_safety;
        config.integrator = s.integrator;
        config.adaptive_dt = s.adaptive_dt;
        config.advection = s.advection;
        config.convection = s.convection;
        config.absorb_linear_damping = s.absorb_linear_damping;
        config.record_snapshots = s.record_snapshots || self.ledger.enabled;
        config.track_difference = s.track_difference;
        config.validate()?;
        Ok((config, s.initial_data, s.amplitude))
    }
}

/// Apply one `--set key.path=value` override to the TOML tree. The value is
/// parsed as a TOML literal (numbers, booleans, arrays, quoted strings);
/// anything that does not parse becomes a bare string.
fn apply_override(root: &mut toml::Value, key: &str, raw: &str) -> Result<()> {
    let parsed: toml::Value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("just inserted"),
        Err(_) => toml::Value::String(raw.to_string()),
    };

    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::InvalidConfig(format!("malformed override key '{key}'")));
    }
    for part in &parts[..parts.len() - 1] {
        let table = node.as_table_mut().ok_or_else(|| {
            Error::InvalidConfig(format!("override '{key}': '{part}' is not a section"))
        })?;
        node = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    let table = node.as_table_mut().ok_or_else(|| {
        Error::InvalidConfig(format!("override '{key}': parent is not a section"))
    })?;
    table.insert(parts[parts.len() - 1].to_string(), parsed);
    Ok(())
}

/// Worker-count precedence: CLI flag, then the NSDAMP_WORKERS environment
/// variable, then the config file, then the available parallelism.
pub fn effective_workers(cli: Option<usize>, config: Option<usize>, jobs: usize) -> usize {
    let from_env = std::env::var("NSDAMP_WORKERS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0);
    let chosen = cli.or(from_env).or(config).unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    });
    chosen.max(1).min(jobs.max(1))
}
