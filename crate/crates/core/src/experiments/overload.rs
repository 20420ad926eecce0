//! More-sources-than-sensors demonstration with LBML-OMP.

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::sweep::{thread_pool, ArrayContext};
use crate::coarray::unit_circular_draw;
use crate::metrics::min_cost_assignment;
use crate::recovery::lbml_omp;
use crate::signal_model::{simulate_snapshots_with, snr_to_noise_power, SourceScene};
use crate::{rng, Result};

/// Estimates within this many grid bins of a source count as a hit.
pub const HIT_RADIUS: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct OverloadResult {
    pub sines: Vec<f64>,
    pub truth_bins: Vec<usize>,
    /// `|ĥ|` over the grid (noise atom excluded), one row per trial.
    pub magnitudes: Vec<Vec<f64>>,
    /// Selected grid bins per trial.
    pub estimates: Vec<Vec<usize>>,
    /// Sources matched within [`HIT_RADIUS`] bins, per trial.
    pub recovered: Vec<usize>,
}

impl OverloadResult {
    pub fn median_recovered(&self) -> usize {
        let mut r = self.recovered.clone();
        r.sort_unstable();
        r[r.len() / 2]
    }

    pub fn mean_magnitude(&self) -> Vec<f64> {
        let l = self.magnitudes.len() as f64;
        (0..self.sines.len())
            .map(|k| self.magnitudes.iter().map(|m| m[k]).sum::<f64>() / l)
            .collect()
    }
}

/// Largest number of truth bins that can be matched one-to-one to estimates
/// lying within `radius` bins.
pub fn matched_within(estimates: &[usize], truth: &[usize], radius: usize) -> usize {
    if estimates.is_empty() || truth.is_empty() {
        return 0;
    }
    let (small, large) = if estimates.len() <= truth.len() {
        (estimates, truth)
    } else {
        (truth, estimates)
    };
    let cost: Vec<Vec<f64>> = small
        .iter()
        .map(|&a| large.iter().map(|&b| if a.abs_diff(b) <= radius { 0.0 } else { 1.0 }).collect())
        .collect();
    let (misses, _) = min_cost_assignment(&cost);
    small.len() - misses.round() as usize
}

/// Run LBML-OMP with the first configured array, model, SNR and snapshot
/// count, for `trials` independent draws.
pub fn run_overload_demo(cfg: &ExperimentConfig) -> Result<OverloadResult> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let truth = cfg.scene.doas(&grid)?;
    let powers = cfg.scene.powers(truth.len())?;
    let ctx = ArrayContext::new(cfg, cfg.geometries[0].build()?, &truth)?;
    let rc = cfg.recovery(truth.len());
    rc.validate(ctx.index.dof())?;
    let scene = SourceScene::new(truth.clone(), powers, snr_to_noise_power(cfg.snr_db[0]))?;
    let model = cfg.models[0];
    let t = cfg.snapshots[0];
    let truth_bins: Vec<usize> = truth.iter().map(|&d| grid.nearest_index(d)).collect();
    let g = grid.len();

    let pool = thread_pool(cfg.workers)?;
    let trials: Vec<(Vec<f64>, Vec<usize>)> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|trial| {
                let mut r = rng::trial_rng(cfg.seed, &[0, 0, trial as u64]);
                let snaps = simulate_snapshots_with(&ctx.geometry, &scene, &cfg.coupling, t, &mut r)?;
                let w = unit_circular_draw(&mut r, ctx.index.dof());
                let eta = if model.is_enhanced() {
                    Some(crate::coarray::eta_prime_from_mixing(&ctx.mixing, &snaps.source_covariance(), &ctx.index)?)
                } else {
                    None
                };
                let y = ctx.measurement(model, &snaps, eta.as_ref(), &w)?;
                let res = lbml_omp(&ctx.dictionary, &y.values, rc.sources, &snaps.sample_covariance, rc.candidates)?;
                let mags = res.coefficients.iter().take(g).map(|c| c.norm()).collect();
                Ok((mags, res.grid_support(&ctx.dictionary)))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let recovered = trials
        .iter()
        .map(|(_, est)| matched_within(est, &truth_bins, HIT_RADIUS))
        .collect();
    let (magnitudes, estimates) = trials.into_iter().unzip();
    Ok(OverloadResult {
        sines: grid.sines().to_vec(),
        truth_bins,
        magnitudes,
        estimates,
        recovered,
    })
}
