//! List-based ML orthogonal matching pursuit.
//!
//! Each iteration takes the correlation-maximizing atom `j`, forms the `Q`
//! nearest unselected grid neighbours of `j` as candidates, and keeps the
//! candidate minimizing the asymptotic stochastic-ML score of the physical
//! sample covariance restricted to the candidate support.

use super::{greedy, CandidateStep, RecoveryResult};
use crate::dictionary::Dictionary;
use crate::numerics::{gather_columns, ml_log_score, Projector};
use crate::{CMatrix, CVector, DoaError, Result};

/// `Q` nearest entries of the free list `free` around position `n0`,
/// clamped to the list ends and returned nearest-first.
pub fn candidate_window(free: &[usize], n0: usize, q: usize) -> Vec<usize> {
    let len = free.len();
    if len == 0 {
        return Vec::new();
    }
    let q = q.min(len);
    let half = (q - 1) / 2;
    let start = n0.saturating_sub(half).min(len - q);
    let mut picks: Vec<usize> = (start..start + q).collect();
    picks.sort_by_key(|&p| (p.abs_diff(n0), p > n0));
    picks.into_iter().map(|p| free[p]).collect()
}

/// Latest grid atoms of the support (noise atom excluded) that fit beside
/// one candidate in an `N − 1` column projector.
pub fn support_window(support: &[usize], noise_atom: usize, n_sensors: usize) -> Vec<usize> {
    let grid: Vec<usize> = support.iter().copied().filter(|&j| j != noise_atom).collect();
    let keep = n_sensors.saturating_sub(2).min(grid.len());
    grid[grid.len() - keep..].to_vec()
}

/// LBML-OMP with `q` candidates per iteration.
///
/// `atoms` is the number of grid atoms to select (the number of sources);
/// `cov` is the `N×N` sample covariance of the physical array.
pub fn lbml_omp(dict: &Dictionary, y: &CVector, atoms: usize, cov: &CMatrix, q: usize) -> Result<RecoveryResult> {
    let n = dict.n_sensors();
    if cov.shape() != (n, n) {
        return Err(DoaError::DimensionMismatch {
            expected: n,
            actual: cov.nrows(),
        });
    }
    if q == 0 || q % 2 == 0 {
        return Err(DoaError::InvalidArgument(format!("candidate count must be odd, got {q}")));
    }
    let manifold = dict.physical_manifold();
    let g = dict.grid_size();
    let noise_atom = dict.noise_atom();
    let mut trace = Vec::with_capacity(atoms);

    let (support, h) = greedy(dict, y, atoms, |j, taken, support| {
        let free: Vec<usize> = (0..g).filter(|&k| !taken[k]).collect();
        let n0 = free.binary_search(&j).expect("corr-max index is free");
        let candidates = candidate_window(&free, n0, q);
        let base = support_window(support, noise_atom, n);

        let mut log_scores = Vec::with_capacity(candidates.len());
        let mut cols = base.clone();
        cols.push(0);
        for &v in &candidates {
            *cols.last_mut().unwrap() = v;
            let score = match Projector::onto(&gather_columns(manifold, &cols)) {
                Ok(u) => ml_log_score(&u, cov, cols.len())?,
                Err(DoaError::RankDeficient { .. }) => f64::INFINITY,
                Err(e) => return Err(e),
            };
            log_scores.push(score);
        }

        let best = log_scores
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_finite())
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i);
        let (chosen, fallback) = match best {
            Some(i) => (candidates[i], false),
            None => (j, true),
        };
        trace.push(CandidateStep {
            corr_max: j,
            candidates,
            log_scores,
            chosen,
            fallback,
        });
        Ok(chosen)
    })?;
    Ok(RecoveryResult::finish(dict, support, h, trace))
}
