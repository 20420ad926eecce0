//! Optimal sub-pattern assignment (OSPA) error for DOA sets.
//!
//! Per trial, the smaller set is matched injectively into the larger one;
//! each matched pair costs `min(φ, |θ̂ − θ|)²` and each unmatched element
//! costs `φ²`. The trial term is that total divided by the larger
//! cardinality, and the reported OSPA is the square root of the mean
//! trial term.

use serde::{Deserialize, Serialize};

use crate::{DoaError, Result};

/// Default cutoff, in radians.
pub const DEFAULT_PHI: f64 = 0.0430;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OspaConfig {
    pub phi: f64,
}

impl Default for OspaConfig {
    fn default() -> Self {
        Self { phi: DEFAULT_PHI }
    }
}

impl OspaConfig {
    pub fn new(phi: f64) -> Result<Self> {
        if phi.is_nan() || phi <= 0.0 {
            return Err(DoaError::InvalidArgument(format!("OSPA cutoff must be positive, got {phi}")));
        }
        Ok(Self { phi })
    }

    pub fn cutoff(&self, a: f64, b: f64) -> f64 {
        self.phi.min((a - b).abs())
    }
}

/// Un-normalized trial cost and the cardinality it is normalized by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OspaTerm {
    pub cost: f64,
    pub cardinality: usize,
}

impl OspaTerm {
    pub fn normalized(&self) -> f64 {
        self.cost / self.cardinality as f64
    }
}

/// Assignment cost plus cardinality penalty for one trial.
pub fn ospa_trial_cost(estimates: &[f64], truth: &[f64], cfg: &OspaConfig) -> Result<OspaTerm> {
    if truth.is_empty() {
        return Err(DoaError::InvalidArgument("OSPA needs a non-empty truth set".into()));
    }
    // match the smaller set into the larger (the metric is symmetric)
    let (small, large) = if estimates.len() <= truth.len() {
        (estimates, truth)
    } else {
        (truth, estimates)
    };
    let phi2 = cfg.phi * cfg.phi;
    let cost: Vec<Vec<f64>> = small
        .iter()
        .map(|&a| large.iter().map(|&b| cfg.cutoff(a, b).powi(2)).collect())
        .collect();
    let (matched, _) = min_cost_assignment(&cost);
    Ok(OspaTerm {
        cost: matched + phi2 * (large.len() - small.len()) as f64,
        cardinality: large.len(),
    })
}

/// Normalized per-trial OSPA term.
pub fn ospa_single_trial(estimates: &[f64], truth: &[f64], cfg: &OspaConfig) -> Result<f64> {
    ospa_trial_cost(estimates, truth, cfg).map(|t| t.normalized())
}

/// `sqrt(mean(terms))` over trials.
pub fn ospa_aggregate(per_trial: &[f64]) -> Result<f64> {
    if per_trial.is_empty() {
        return Err(DoaError::InvalidArgument("OSPA aggregate needs at least one trial".into()));
    }
    Ok((per_trial.iter().sum::<f64>() / per_trial.len() as f64).sqrt())
}

/// Minimum-cost assignment of every row to a distinct column
/// (`rows ≤ cols`), by the Hungarian method with dual potentials.
///
/// Returns the total cost and, per row, the assigned column.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> (f64, Vec<usize>) {
    let n = cost.len();
    if n == 0 {
        return (0.0, Vec::new());
    }
    let m = cost[0].len();
    assert!(n <= m, "assignment needs rows <= cols");
    // 1-based arrays; column 0 is a virtual start column
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=m {
        if owner[j] != 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    let total = assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    (total, assignment)
}
