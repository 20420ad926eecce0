use super::{greedy, RecoveryResult};
use crate::dictionary::Dictionary;
use crate::{CVector, Result};

/// Orthogonal matching pursuit seeded with the noise atom.
///
/// Selects `atoms` grid columns (the number of sources) by maximum residual
/// correlation, refitting all selected columns by least squares after each.
pub fn omp(dict: &Dictionary, y: &CVector, atoms: usize) -> Result<RecoveryResult> {
    let (support, h) = greedy(dict, y, atoms, |j, _, _| Ok(j))?;
    Ok(RecoveryResult::finish(dict, support, h, Vec::new()))
}
