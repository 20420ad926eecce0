use super::{check_measurement, correlate, robust_least_squares, RecoveryResult};
use crate::dictionary::Dictionary;
use crate::{CVector, Result};

/// Regularized OMP over all `g + 1` columns with total sparsity `k`.
///
/// Each round takes the `k` largest correlations, keeps the maximal-energy
/// run whose magnitudes are within a factor of two, and refits.
pub fn romp(dict: &Dictionary, y: &CVector, k: usize) -> Result<RecoveryResult> {
    check_measurement(dict, y)?;
    let b = dict.matrix();
    let cols = b.ncols();
    let k = k.min(dict.dof());
    let mut support: Vec<usize> = Vec::new();
    let mut h = CVector::zeros(cols);
    let mut residual = y.clone();
    let tol = 1e-12 * y.norm().max(f64::MIN_POSITIVE);

    for _ in 0..k {
        if support.len() >= k || residual.norm() <= tol {
            break;
        }
        let corr = correlate(b, &residual);
        let mut ranked: Vec<usize> = (0..cols)
            .filter(|j| !support.contains(j) && corr[*j].norm() > 0.0)
            .collect();
        ranked.sort_by(|&a, &c| corr[c].norm().total_cmp(&corr[a].norm()).then(a.cmp(&c)));
        ranked.truncate(k);
        if ranked.is_empty() {
            break;
        }
        let mags: Vec<f64> = ranked.iter().map(|&j| corr[j].norm()).collect();
        let (lo, hi) = best_comparable_run(&mags);
        let room = k - support.len();
        support.extend(ranked[lo..hi].iter().take(room));
        let proxy = correlate(b, y);
        h = robust_least_squares(b, y, &mut support, &proxy);
        residual = y - b * &h;
    }
    Ok(RecoveryResult::finish(dict, support, h, Vec::new()))
}

/// Maximal-energy window `[lo, hi)` of a descending magnitude list in which
/// every entry is at least half the window's largest.
fn best_comparable_run(mags: &[f64]) -> (usize, usize) {
    let mut best = (0, 1);
    let mut best_energy = -1.0;
    let mut hi = 0;
    let mut energy = 0.0;
    for lo in 0..mags.len() {
        if hi < lo {
            hi = lo;
            energy = 0.0;
        }
        while hi < mags.len() && mags[lo] <= 2.0 * mags[hi] {
            energy += mags[hi] * mags[hi];
            hi += 1;
        }
        if energy > best_energy {
            best_energy = energy;
            best = (lo, hi);
        }
        energy -= mags[lo] * mags[lo];
    }
    best
}
