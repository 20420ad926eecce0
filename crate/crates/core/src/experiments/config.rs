//! JSON experiment description shared by every harness entry point.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dictionary::AngularGrid;
use crate::geometry::{ArrayGeometry, GeometryKind};
use crate::metrics::{OspaConfig, DEFAULT_PHI};
use crate::recovery::RecoveryConfig;
use crate::signal_model::CouplingModel;
use crate::{DoaError, Result};

/// Source directions used in the published comparisons, in multiples of π.
pub const PAPER_DOAS_PI: [f64; 5] = [-0.3426, -0.2947, -0.2889, -0.2820, 0.2947];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "LBML-OMP")]
    LbmlOmp,
    #[serde(rename = "OMP")]
    Omp,
    #[serde(rename = "ROMP")]
    Romp,
    #[serde(rename = "IHT")]
    Iht,
    #[serde(rename = "CoSaMP")]
    Cosamp,
    #[serde(rename = "SS-MUSIC")]
    SsMusic,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::LbmlOmp,
        Algorithm::Omp,
        Algorithm::Romp,
        Algorithm::Iht,
        Algorithm::Cosamp,
        Algorithm::SsMusic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::LbmlOmp => "LBML-OMP",
            Algorithm::Omp => "OMP",
            Algorithm::Romp => "ROMP",
            Algorithm::Iht => "IHT",
            Algorithm::Cosamp => "CoSaMP",
            Algorithm::SsMusic => "SS-MUSIC",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coarray measurement model used by a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModelSpec {
    Dctm,
    /// Enhanced model with the true error term.
    Edctm,
    /// Enhanced model with a noisy error-term estimate.
    EdctmEstimated { alpha: f64 },
}

impl ModelSpec {
    /// Suffix appended to algorithm names in series labels.
    pub fn suffix(&self) -> String {
        match self {
            ModelSpec::Dctm => String::new(),
            ModelSpec::Edctm => "_E".into(),
            ModelSpec::EdctmEstimated { alpha } => format!("_E(alpha={alpha})"),
        }
    }

    pub fn is_enhanced(&self) -> bool {
        !matches!(self, ModelSpec::Dctm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub kind: GeometryKind,
    #[serde(default)]
    pub n: usize,
    /// Explicit sensor positions (for `CUSTOM`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<i64>>,
}

impl GeometrySpec {
    pub fn new(kind: GeometryKind, n: usize) -> Self {
        Self { kind, n, positions: None }
    }

    pub fn build(&self) -> Result<ArrayGeometry> {
        match &self.positions {
            Some(p) => ArrayGeometry::from_positions(p.clone()),
            None => ArrayGeometry::build(self.kind, self.n),
        }
    }

    pub fn label(&self) -> String {
        match &self.positions {
            Some(p) => format!("{}-{}", self.kind, p.len()),
            None => format!("{}-{}", self.kind, self.n),
        }
    }
}

/// Source directions, given either as multiples of π or as sines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doas_pi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sines: Option<Vec<f64>>,
    /// Per-source powers; unit powers when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub powers: Option<Vec<f64>>,
    /// Snap the directions to the nearest grid point.
    #[serde(default = "yes")]
    pub on_grid: bool,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self {
            doas_pi: Some(PAPER_DOAS_PI.to_vec()),
            sines: None,
            powers: None,
            on_grid: true,
        }
    }
}

impl SceneSpec {
    pub fn from_sines(sines: Vec<f64>) -> Self {
        Self {
            doas_pi: None,
            sines: Some(sines),
            powers: None,
            on_grid: true,
        }
    }

    /// Directions in radians, snapped to `grid` when `on_grid` is set.
    pub fn doas(&self, grid: &AngularGrid) -> Result<Vec<f64>> {
        let raw: Vec<f64> = match (&self.doas_pi, &self.sines) {
            (Some(d), None) => d.iter().map(|x| x * PI).collect(),
            (None, Some(s)) => {
                if let Some(bad) = s.iter().find(|s| s.abs() >= 1.0) {
                    return Err(DoaError::Config(format!("sine {bad} outside (-1, 1)")));
                }
                s.iter().map(|x| x.asin()).collect()
            }
            _ => return Err(DoaError::Config("scene needs exactly one of 'doas_pi' or 'sines'".into())),
        };
        if raw.is_empty() {
            return Err(DoaError::Config("scene has no sources".into()));
        }
        Ok(if self.on_grid {
            raw.iter().map(|&t| grid.snap(t)).collect()
        } else {
            raw
        })
    }

    pub fn powers(&self, n_sources: usize) -> Result<Vec<f64>> {
        match &self.powers {
            None => Ok(vec![1.0; n_sources]),
            Some(p) if p.len() == n_sources => Ok(p.clone()),
            Some(p) => Err(DoaError::DimensionMismatch {
                expected: n_sources,
                actual: p.len(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Snr,
    Snapshots,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Snr => "snr_db",
            SweepAxis::Snapshots => "snapshots",
        }
    }
}

/// What to do with a trial whose estimator returned an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailPolicy {
    /// Score the trial as an empty estimate set (full cardinality penalty).
    #[default]
    Penalize,
    /// Leave the trial out of the average.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default = "default_geometries")]
    pub geometries: Vec<GeometrySpec>,
    #[serde(default)]
    pub scene: SceneSpec,
    #[serde(default = "default_axis")]
    pub axis: SweepAxis,
    #[serde(default = "default_snr")]
    pub snr_db: Vec<f64>,
    #[serde(default = "default_snapshots")]
    pub snapshots: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_models")]
    pub models: Vec<ModelSpec>,
    #[serde(default)]
    pub coupling: CouplingModel,
    #[serde(default = "default_grid")]
    pub grid_size: usize,
    #[serde(default = "default_candidates")]
    pub candidates: usize,
    #[serde(default = "default_phi")]
    pub phi: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_step_tolerance")]
    pub step_tolerance: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub fail_policy: FailPolicy,
    /// Fill the `seconds` column (makes output timing-dependent).
    #[serde(default)]
    pub record_timing: bool,
    /// Worker threads; 0 uses all cores.
    #[serde(default)]
    pub workers: usize,
}

fn yes() -> bool {
    true
}
fn default_name() -> String {
    "experiment".into()
}
fn default_geometries() -> Vec<GeometrySpec> {
    vec![GeometrySpec::new(GeometryKind::Snaq2, 8)]
}
fn default_axis() -> SweepAxis {
    SweepAxis::Snr
}
fn default_snr() -> Vec<f64> {
    (0..=15).map(|k| -10.0 + 2.0 * k as f64).collect()
}
fn default_snapshots() -> Vec<usize> {
    vec![50]
}
fn default_trials() -> usize {
    200
}
fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::LbmlOmp, Algorithm::Omp]
}
fn default_models() -> Vec<ModelSpec> {
    vec![ModelSpec::Dctm]
}
fn default_grid() -> usize {
    1024
}
fn default_candidates() -> usize {
    11
}
fn default_phi() -> f64 {
    DEFAULT_PHI
}
fn default_max_iterations() -> usize {
    300
}
fn default_step_tolerance() -> f64 {
    1e-6
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(DoaError::Config(m));
        if self.geometries.is_empty() {
            return fail("'geometries' is empty".into());
        }
        if self.snr_db.is_empty() || self.snapshots.is_empty() {
            return fail("'snr_db' and 'snapshots' must be non-empty".into());
        }
        if self.snapshots.contains(&0) {
            return fail("snapshot counts must be positive".into());
        }
        let fixed = match self.axis {
            SweepAxis::Snr => self.snapshots.len(),
            SweepAxis::Snapshots => self.snr_db.len(),
        };
        if fixed != 1 {
            return fail(format!(
                "sweeping '{}' needs a single value for the other parameter",
                self.axis.name()
            ));
        }
        if self.trials == 0 {
            return fail("'trials' must be at least 1".into());
        }
        if self.algorithms.is_empty() || self.models.is_empty() {
            return fail("'algorithms' and 'models' must be non-empty".into());
        }
        if let Some(m) = self.models.iter().find(
            |m| matches!(m, ModelSpec::EdctmEstimated { alpha } if !(alpha.is_finite() && *alpha >= 0.0)),
        ) {
            return fail(format!("invalid model {m:?}"));
        }
        if self.grid_size < 2 {
            return fail("'grid_size' must be at least 2".into());
        }
        if self.candidates == 0 || self.candidates % 2 == 0 {
            return fail("'candidates' must be odd".into());
        }
        OspaConfig::new(self.phi)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<AngularGrid> {
        AngularGrid::uniform_sine(self.grid_size)
    }

    pub fn ospa(&self) -> OspaConfig {
        OspaConfig { phi: self.phi }
    }

    pub fn recovery(&self, sources: usize) -> RecoveryConfig {
        RecoveryConfig {
            sources,
            candidates: self.candidates,
            max_iterations: self.max_iterations,
            step_tolerance: self.step_tolerance,
        }
    }

    /// Values along the swept axis, as reals.
    pub fn axis_values(&self) -> Vec<f64> {
        match self.axis {
            SweepAxis::Snr => self.snr_db.clone(),
            SweepAxis::Snapshots => self.snapshots.iter().map(|&t| t as f64).collect(),
        }
    }

    /// `(SNR, T)` for one axis cell.
    pub fn cell(&self, k: usize) -> (f64, usize) {
        match self.axis {
            SweepAxis::Snr => (self.snr_db[k], self.snapshots[0]),
            SweepAxis::Snapshots => (self.snr_db[0], self.snapshots[k]),
        }
    }
}
