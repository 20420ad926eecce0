//! Sparse recovery over the coarray dictionary.
//!
//! Greedy methods ([`omp`], [`lbml_omp`]) start from the noise atom and add
//! one grid atom per iteration. The baselines ([`romp`], [`iht`], [`cosamp`])
//! treat all `g + 1` columns alike and take the total sparsity.

mod cosamp;
mod iht;
mod lbml;
mod omp;
mod romp;

pub use cosamp::cosamp;
pub use iht::iht;
pub use lbml::{candidate_window, lbml_omp, support_window};
pub use omp::omp;
pub use romp::romp;

use serde::{Deserialize, Serialize};

use crate::dictionary::Dictionary;
use crate::numerics::restricted_least_squares;
use crate::{CMatrix, CVector, DoaError, Result};

/// Tuning shared by the recovery algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    /// Number of sources `D`; sparsity is `K = D + 1` with the noise atom.
    pub sources: usize,
    /// LBML-OMP candidate list length (odd).
    pub candidates: usize,
    pub max_iterations: usize,
    pub step_tolerance: f64,
}

impl RecoveryConfig {
    pub fn new(sources: usize) -> Self {
        Self {
            sources,
            candidates: 11,
            max_iterations: 300,
            step_tolerance: 1e-6,
        }
    }

    pub fn sparsity(&self) -> usize {
        self.sources + 1
    }

    pub fn validate(&self, dof: usize) -> Result<()> {
        if self.candidates == 0 || self.candidates % 2 == 0 {
            return Err(DoaError::InvalidArgument(format!(
                "candidate count must be odd and positive, got {}",
                self.candidates
            )));
        }
        if self.sparsity() > dof {
            return Err(DoaError::InvalidArgument(format!(
                "sparsity {} exceeds coarray DoF {dof}",
                self.sparsity()
            )));
        }
        Ok(())
    }
}

/// One LBML-OMP iteration, kept for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateStep {
    /// Index picked by correlation maximization.
    pub corr_max: usize,
    /// Candidate grid indices, in evaluation order.
    pub candidates: Vec<usize>,
    /// Log ML score per candidate (`+∞` for rank-deficient sets).
    pub log_scores: Vec<f64>,
    pub chosen: usize,
    /// All candidates were rank-deficient and `corr_max` was used.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    /// Selected columns in insertion order.
    pub support: Vec<usize>,
    /// Length `g + 1`, zero off the support.
    pub coefficients: CVector,
    pub doa_estimates: Vec<f64>,
    pub trace: Vec<CandidateStep>,
}

impl RecoveryResult {
    pub(crate) fn finish(dict: &Dictionary, support: Vec<usize>, coefficients: CVector, trace: Vec<CandidateStep>) -> Self {
        let doa_estimates = extract_doas(&support, dict);
        Self {
            support,
            coefficients,
            doa_estimates,
            trace,
        }
    }

    /// Grid indices of the selected atoms, noise atom excluded.
    pub fn grid_support(&self, dict: &Dictionary) -> Vec<usize> {
        self.support
            .iter()
            .copied()
            .filter(|&j| j != dict.noise_atom())
            .collect()
    }
}

/// Grid angles of a support, with the noise atom dropped.
pub fn extract_doas(support: &[usize], dict: &Dictionary) -> Vec<f64> {
    let angles = dict.grid().angles();
    support
        .iter()
        .filter(|&&j| j != dict.noise_atom())
        .map(|&j| angles[j])
        .collect()
}

pub(crate) fn check_measurement(dict: &Dictionary, y: &CVector) -> Result<()> {
    if y.len() != dict.dof() {
        return Err(DoaError::DimensionMismatch {
            expected: dict.dof(),
            actual: y.len(),
        });
    }
    Ok(())
}

/// `Bᴴ·r`.
pub(crate) fn correlate(b: &CMatrix, r: &CVector) -> CVector {
    b.ad_mul(r)
}

/// Argmax of `|corr|` over grid columns not yet in the support.
pub(crate) fn corr_max(corr: &CVector, grid_size: usize, taken: &[bool]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for j in 0..grid_size {
        if taken[j] {
            continue;
        }
        let m = corr[j].norm_sqr();
        if best.is_none_or(|(_, bm)| m > bm) {
            best = Some((j, m));
        }
    }
    best.map(|(j, _)| j)
}

/// Shared greedy loop: noise atom first, then `atoms` grid columns chosen by
/// `pick(corr_max_index, taken_mask, support)`, with least squares after each.
pub(crate) fn greedy<F>(dict: &Dictionary, y: &CVector, atoms: usize, mut pick: F) -> Result<(Vec<usize>, CVector)>
where
    F: FnMut(usize, &[bool], &[usize]) -> Result<usize>,
{
    check_measurement(dict, y)?;
    let b = dict.matrix();
    let g = dict.grid_size();
    if atoms + 1 > dict.dof() {
        return Err(DoaError::InvalidArgument(format!(
            "cannot select {} atoms from a {}-dimensional coarray",
            atoms + 1,
            dict.dof()
        )));
    }
    let mut taken = vec![false; g + 1];
    let mut support = vec![dict.noise_atom()];
    taken[dict.noise_atom()] = true;
    let mut h = CVector::zeros(g + 1);
    let mut residual = y.clone();
    for _ in 0..atoms.min(g) {
        let corr = correlate(b, &residual);
        let Some(j) = corr_max(&corr, g, &taken) else { break };
        let chosen = pick(j, &taken, &support)?;
        debug_assert!(!taken[chosen]);
        taken[chosen] = true;
        support.push(chosen);
        h = restricted_least_squares(b, y, &support)?;
        residual = y - b * &h;
    }
    Ok((support, h))
}

/// Restricted least squares that shrinks a rank-deficient support by
/// dropping its weakest-proxy entries until the fit succeeds.
pub(crate) fn robust_least_squares(b: &CMatrix, y: &CVector, support: &mut Vec<usize>, proxy: &CVector) -> CVector {
    support.sort_by(|&a, &c| proxy[c].norm_sqr().total_cmp(&proxy[a].norm_sqr()).then(a.cmp(&c)));
    support.truncate(b.nrows());
    loop {
        match restricted_least_squares(b, y, support) {
            Ok(h) => return h,
            Err(_) if !support.is_empty() => {
                support.pop();
            }
            Err(_) => return CVector::zeros(b.ncols()),
        }
    }
}

/// Indices of the `k` largest-magnitude entries, ties broken by index.
pub(crate) fn top_k(v: &CVector, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].norm_sqr().total_cmp(&v[a].norm_sqr()).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}
