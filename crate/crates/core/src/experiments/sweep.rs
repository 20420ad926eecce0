//! Monte Carlo OSPA sweeps over SNR or snapshot count.

use std::time::Instant;

use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig, FailPolicy, ModelSpec};
use crate::coarray::{dctm, edctm, edctm_estimated, eta_prime_from_mixing, eta_prime_perturbed, unit_circular_draw, CoarrayVector, EtaPrime};
use crate::dictionary::Dictionary;
use crate::geometry::{ArrayGeometry, CoarrayIndex};
use crate::metrics::{ospa_aggregate, ospa_single_trial};
use crate::recovery::{cosamp, iht, lbml_omp, omp, romp, RecoveryConfig};
use crate::signal_model::{simulate_snapshots_with, steering_matrix, SnapshotSet, SourceScene};
use crate::subspace::ss_music;
use crate::{rng, CMatrix, DoaError, Result};

/// Run one estimator on a coarray vector and return its DOA estimates.
///
/// `cov` is the physical sample covariance (used by LBML-OMP only).
pub fn estimate(
    algorithm: Algorithm,
    dict: &Dictionary,
    index: &CoarrayIndex,
    y: &CoarrayVector,
    cov: &CMatrix,
    rc: &RecoveryConfig,
) -> Result<Vec<f64>> {
    let d = rc.sources;
    let k = rc.sparsity();
    let result = match algorithm {
        Algorithm::LbmlOmp => lbml_omp(dict, &y.values, d, cov, rc.candidates)?,
        Algorithm::Omp => omp(dict, &y.values, d)?,
        Algorithm::Romp => romp(dict, &y.values, k)?,
        Algorithm::Iht => iht(dict, &y.values, k, rc.max_iterations, rc.step_tolerance)?,
        Algorithm::Cosamp => cosamp(dict, &y.values, k, rc.max_iterations, rc.step_tolerance)?,
        Algorithm::SsMusic => return Ok(ss_music(y, index, dict.grid(), d)?.doas),
    };
    Ok(result.doa_estimates)
}

/// Everything a trial needs about one array, built once and shared.
pub(crate) struct ArrayContext {
    pub geometry: ArrayGeometry,
    pub index: CoarrayIndex,
    pub dictionary: Dictionary,
    pub mixing: CMatrix,
}

impl ArrayContext {
    pub(crate) fn new(cfg: &ExperimentConfig, geometry: ArrayGeometry, doas: &[f64]) -> Result<Self> {
        let index = geometry.coarray();
        let dictionary = Dictionary::build(&geometry, &index, cfg.grid()?)?;
        let mixing = cfg.coupling.matrix(&geometry) * steering_matrix(&geometry, doas);
        Ok(Self {
            geometry,
            index,
            dictionary,
            mixing,
        })
    }

    /// Coarray vector for one model. `unit_draw` is the common
    /// perturbation direction for the estimated-η′ models.
    pub(crate) fn measurement(
        &self,
        model: ModelSpec,
        snaps: &SnapshotSet,
        eta: Option<&EtaPrime>,
        unit_draw: &crate::CVector,
    ) -> Result<CoarrayVector> {
        let cov = &snaps.sample_covariance;
        match model {
            ModelSpec::Dctm => dctm(cov, &self.index),
            ModelSpec::Edctm => edctm(cov, eta.expect("eta computed for enhanced models"), &self.index),
            ModelSpec::EdctmEstimated { alpha } => {
                let noisy = eta_prime_perturbed(eta.expect("eta computed for enhanced models"), alpha, unit_draw)?;
                edctm_estimated(cov, &noisy, alpha, &self.index)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    /// Algorithm name, model suffix and (for multi-array runs) array label.
    pub label: String,
    pub algorithm: Algorithm,
    pub model: ModelSpec,
    pub geometry: String,
    pub ospa: Vec<f64>,
    /// Trials that entered the average, per cell.
    pub trials: Vec<usize>,
    /// Trials whose estimator returned an error, per cell.
    pub failures: Vec<usize>,
    /// Summed estimator wall time per cell, when timing is recorded.
    pub seconds: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub name: String,
    pub axis_name: String,
    pub axis_values: Vec<f64>,
    pub series: Vec<SeriesResult>,
}

impl SweepResult {
    pub fn series(&self, label: &str) -> Option<&SeriesResult> {
        self.series.iter().find(|s| s.label == label)
    }
}

struct Outcome {
    term: Option<f64>,
    failed: bool,
    seconds: f64,
}

/// Per-series outcomes of one `(array, cell, trial)` unit.
fn run_unit(
    cfg: &ExperimentConfig,
    ctx: &ArrayContext,
    truth: &[f64],
    powers: &[f64],
    path: [u64; 3],
) -> Result<Vec<Outcome>> {
    let (snr, t) = cfg.cell(path[1] as usize);
    let scene = SourceScene::new(truth.to_vec(), powers.to_vec(), crate::signal_model::snr_to_noise_power(snr))?;
    let mut r = rng::trial_rng(cfg.seed, &path);
    let snaps = simulate_snapshots_with(&ctx.geometry, &scene, &cfg.coupling, t, &mut r)?;
    let unit_draw = unit_circular_draw(&mut r, ctx.index.dof());
    let eta = if cfg.models.iter().any(ModelSpec::is_enhanced) {
        Some(eta_prime_from_mixing(&ctx.mixing, &snaps.source_covariance(), &ctx.index)?)
    } else {
        None
    };
    let rc = cfg.recovery(truth.len());
    let ospa = cfg.ospa();
    let mut out = Vec::with_capacity(cfg.models.len() * cfg.algorithms.len());
    for &model in &cfg.models {
        let y = ctx.measurement(model, &snaps, eta.as_ref(), &unit_draw)?;
        for &algorithm in &cfg.algorithms {
            let start = cfg.record_timing.then(Instant::now);
            let est = estimate(algorithm, &ctx.dictionary, &ctx.index, &y, &snaps.sample_covariance, &rc);
            let seconds = start.map_or(0.0, |s| s.elapsed().as_secs_f64());
            let (term, failed) = match est {
                Ok(e) => (Some(ospa_single_trial(&e, truth, &ospa)?), false),
                Err(_) => match cfg.fail_policy {
                    FailPolicy::Penalize => (Some(ospa_single_trial(&[], truth, &ospa)?), true),
                    FailPolicy::Skip => (None, true),
                },
            };
            out.push(Outcome { term, failed, seconds });
        }
    }
    Ok(out)
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| DoaError::Config(format!("cannot start worker pool: {e}")))
}

/// Run every `(array, model, algorithm)` series over the configured axis.
///
/// Trial seeds depend only on `(seed, array, cell, trial)` and results are
/// reduced in key order, so the output does not depend on the worker count.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let truth = cfg.scene.doas(&grid)?;
    let powers = cfg.scene.powers(truth.len())?;
    let contexts = cfg
        .geometries
        .iter()
        .map(|g| ArrayContext::new(cfg, g.build()?, &truth))
        .collect::<Result<Vec<_>>>()?;
    for ctx in &contexts {
        cfg.recovery(truth.len()).validate(ctx.index.dof())?;
    }
    let n_cells = cfg.axis_values().len();
    let n_trials = cfg.trials;
    let units: Vec<[u64; 3]> = (0..contexts.len())
        .flat_map(|g| (0..n_cells).flat_map(move |c| (0..n_trials).map(move |t| [g as u64, c as u64, t as u64])))
        .collect();

    let pool = thread_pool(cfg.workers)?;
    let outcomes: Vec<Vec<Outcome>> = pool.install(|| {
        units
            .par_iter()
            .map(|&path| run_unit(cfg, &contexts[path[0] as usize], &truth, &powers, path))
            .collect::<Result<Vec<_>>>()
    })?;

    let multi = cfg.geometries.len() > 1;
    let mut series = Vec::new();
    for (g, spec) in cfg.geometries.iter().enumerate() {
        let mut s_idx = 0;
        for &model in &cfg.models {
            for &algorithm in &cfg.algorithms {
                let mut label = format!("{}{}", algorithm.name(), model.suffix());
                if multi {
                    label = format!("{label}@{}", spec.label());
                }
                let mut s = SeriesResult {
                    label,
                    algorithm,
                    model,
                    geometry: spec.label(),
                    ospa: Vec::with_capacity(n_cells),
                    trials: Vec::with_capacity(n_cells),
                    failures: Vec::with_capacity(n_cells),
                    seconds: Vec::with_capacity(n_cells),
                };
                for c in 0..n_cells {
                    let base = (g * n_cells + c) * n_trials;
                    let cell = &outcomes[base..base + n_trials];
                    let terms: Vec<f64> = cell.iter().filter_map(|o| o[s_idx].term).collect();
                    s.ospa.push(ospa_aggregate(&terms).unwrap_or(f64::NAN));
                    s.trials.push(terms.len());
                    s.failures.push(cell.iter().filter(|o| o[s_idx].failed).count());
                    s.seconds
                        .push(cfg.record_timing.then(|| cell.iter().map(|o| o[s_idx].seconds).sum()));
                }
                series.push(s);
                s_idx += 1;
            }
        }
    }
    Ok(SweepResult {
        name: cfg.name.clone(),
        axis_name: cfg.axis.name().into(),
        axis_values: cfg.axis_values(),
        series,
    })
}
