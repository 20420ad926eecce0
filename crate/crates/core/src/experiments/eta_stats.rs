//! Monte Carlo statistics of the first coarray error-term entry `[η′]₁`.

use rayon::prelude::*;

use super::config::{ExperimentConfig, SweepAxis};
use super::sweep::thread_pool;
use crate::coarray::{eta_prime_exact, eta_prime_moments_oracle};
use crate::signal_model::{complex_gaussian, sample_covariance};
use crate::{rng, Complex64, DoaError, Result};

pub const HISTOGRAM_BINS: usize = 64;

/// Fixed-width histogram normalized to a density.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn build(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Self {
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0usize; bins];
        for &x in samples {
            let k = ((x - lo) / width).floor();
            if k >= 0.0 && (k as usize) < bins {
                counts[k as usize] += 1;
            } else if x == hi {
                counts[bins - 1] += 1;
            }
        }
        let scale = 1.0 / (samples.len().max(1) as f64 * width);
        Self {
            lo,
            hi,
            density: counts.into_iter().map(|c| c as f64 * scale).collect(),
        }
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.density.len() as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        let w = self.width();
        (0..self.density.len()).map(|k| self.lo + (k as f64 + 0.5) * w).collect()
    }
}

/// Statistics for one snapshot count.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaCell {
    pub snapshots: usize,
    pub mean: Complex64,
    /// Standard errors of the real and imaginary sample means.
    pub std_error: (f64, f64),
    /// Empirical `E|[η′]₁|²`.
    pub variance: f64,
    pub oracle_variance: f64,
    pub real_histogram: Histogram,
    pub imag_histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaStatistics {
    /// Lag of the tracked entry (the most negative lag).
    pub lag: i64,
    pub trials: usize,
    pub cells: Vec<EtaCell>,
}

/// Draw `trials` realizations of `[η′]₁` for every configured snapshot count.
///
/// Uses the first configured array and the scene's sources; noise does not
/// enter η′, so SNR is irrelevant here.
pub fn run_eta_statistics(cfg: &ExperimentConfig) -> Result<EtaStatistics> {
    ExperimentConfig {
        axis: SweepAxis::Snapshots,
        snr_db: cfg.snr_db.iter().take(1).copied().collect(),
        ..cfg.clone()
    }
    .validate()?;
    let geometry = cfg.geometries[0].build()?;
    let index = geometry.coarray();
    let doas = cfg.scene.doas(&cfg.grid()?)?;
    let powers = cfg.scene.powers(doas.len())?;
    let pool = thread_pool(cfg.workers)?;
    let mut cells = Vec::with_capacity(cfg.snapshots.len());
    for (ti, &t) in cfg.snapshots.iter().enumerate() {
        let draws: Vec<Complex64> = pool.install(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let mut r = rng::trial_rng(cfg.seed, &[ti as u64, trial as u64]);
                    let s = complex_gaussian(&mut r, &powers, t);
                    eta_prime_exact(&geometry, &doas, &sample_covariance(&s), &index).map(|e| e.0[0])
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let oracle = eta_prime_moments_oracle(&geometry, &doas, &powers, t, &index)?;
        cells.push(summarize(t, &draws, oracle.variance[0]));
    }
    Ok(EtaStatistics {
        lag: index.lags()[0],
        trials: cfg.trials,
        cells,
    })
}

fn summarize(snapshots: usize, draws: &[Complex64], oracle_variance: f64) -> EtaCell {
    let l = draws.len() as f64;
    let mean = draws.iter().sum::<Complex64>() / l;
    let var_re = draws.iter().map(|z| (z.re - mean.re).powi(2)).sum::<f64>() / (l - 1.0).max(1.0);
    let var_im = draws.iter().map(|z| (z.im - mean.im).powi(2)).sum::<f64>() / (l - 1.0).max(1.0);
    let variance = draws.iter().map(|z| z.norm_sqr()).sum::<f64>() / l;
    let re: Vec<f64> = draws.iter().map(|z| z.re).collect();
    let im: Vec<f64> = draws.iter().map(|z| z.im).collect();
    let span = re.iter().chain(&im).fold(0.0f64, |m, x| m.max(x.abs()));
    let span = if span > 0.0 { span } else { 1.0 };
    EtaCell {
        snapshots,
        mean,
        std_error: ((var_re / l).sqrt(), (var_im / l).sqrt()),
        variance,
        oracle_variance,
        real_histogram: Histogram::build(&re, -span, span, HISTOGRAM_BINS),
        imag_histogram: Histogram::build(&im, -span, span, HISTOGRAM_BINS),
    }
}

impl EtaStatistics {
    pub fn cell(&self, snapshots: usize) -> Result<&EtaCell> {
        self.cells
            .iter()
            .find(|c| c.snapshots == snapshots)
            .ok_or_else(|| DoaError::InvalidArgument(format!("no statistics for T = {snapshots}")))
    }
}
