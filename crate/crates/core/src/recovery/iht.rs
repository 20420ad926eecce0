use super::{check_measurement, correlate, robust_least_squares, top_k, RecoveryResult};
use crate::dictionary::Dictionary;
use crate::numerics::spectral_norm;
use crate::{CVector, Result};

/// Iterative hard thresholding with step `1/‖B‖₂²`, finished by a least
/// squares refit on the final support.
pub fn iht(dict: &Dictionary, y: &CVector, k: usize, max_iterations: usize, step_tolerance: f64) -> Result<RecoveryResult> {
    check_measurement(dict, y)?;
    let b = dict.matrix();
    let cols = b.ncols();
    let norm = spectral_norm(b)?;
    let mu = if norm > 0.0 { 1.0 / (norm * norm) } else { 0.0 };

    let mut h = CVector::zeros(cols);
    for _ in 0..max_iterations.max(1) {
        let grad = correlate(b, &(y - b * &h));
        let step = &h + grad.scale(mu);
        let keep = top_k(&step, k);
        let mut next = CVector::zeros(cols);
        for &j in &keep {
            next[j] = step[j];
        }
        let change = (&next - &h).norm();
        let scale = next.norm();
        h = next;
        if change <= step_tolerance * scale || scale == 0.0 {
            break;
        }
    }

    let mut support: Vec<usize> = (0..cols).filter(|&j| h[j].norm() > 0.0).collect();
    if support.is_empty() {
        return Ok(RecoveryResult::finish(dict, support, h, Vec::new()));
    }
    let proxy = h.clone();
    let fitted = robust_least_squares(b, y, &mut support, &proxy);
    Ok(RecoveryResult::finish(dict, support, fitted, Vec::new()))
}
