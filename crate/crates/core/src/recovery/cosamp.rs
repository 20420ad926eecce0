use super::{check_measurement, correlate, robust_least_squares, top_k, RecoveryResult};
use crate::dictionary::Dictionary;
use crate::{CVector, Result};

/// Compressive sampling matching pursuit with total sparsity `k`.
pub fn cosamp(dict: &Dictionary, y: &CVector, k: usize, max_iterations: usize, step_tolerance: f64) -> Result<RecoveryResult> {
    check_measurement(dict, y)?;
    let b = dict.matrix();
    let cols = b.ncols();
    let mut h = CVector::zeros(cols);
    let mut support: Vec<usize> = Vec::new();
    let mut residual = y.clone();
    let y_norm = y.norm();
    if k == 0 || y_norm == 0.0 {
        return Ok(RecoveryResult::finish(dict, support, h, Vec::new()));
    }

    for _ in 0..max_iterations.max(1) {
        let proxy = correlate(b, &residual);
        let mut merged = top_k(&proxy, 2 * k);
        for &j in &support {
            if !merged.contains(&j) {
                merged.push(j);
            }
        }
        // support entries rank ahead of fresh proxies when pruning to DoF
        let mut rank = proxy.clone();
        for &j in &support {
            rank[j] = crate::Complex64::new(f64::INFINITY, 0.0);
        }
        let fit = robust_least_squares(b, y, &mut merged, &rank);
        let pruned = top_k(&fit, k.min(merged.len()));
        let mut next = CVector::zeros(cols);
        for &j in &pruned {
            next[j] = fit[j];
        }
        let next_residual = y - b * &next;
        let old = residual.norm();
        let new = next_residual.norm();
        // a growing residual means the merged fit was ill-conditioned; keep the previous iterate
        if new >= old && !support.is_empty() {
            break;
        }
        h = next;
        support = pruned;
        residual = next_residual;
        if new <= step_tolerance * y_norm || (old - new).abs() <= step_tolerance * old {
            break;
        }
    }
    support.retain(|&j| h[j].norm() > 0.0);
    Ok(RecoveryResult::finish(dict, support, h, Vec::new()))
}
