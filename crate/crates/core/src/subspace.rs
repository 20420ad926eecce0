//! Spatial-smoothing MUSIC on the contiguous part of the coarray.

use std::f64::consts::PI;
use std::io::Write;

use crate::coarray::CoarrayVector;
use crate::dictionary::AngularGrid;
use crate::geometry::CoarrayIndex;
use crate::numerics::hermitian_eig;
use crate::{CMatrix, CVector, Complex64, DoaError, Result};

/// Floor on `‖Eₙᴴ·a‖²` so exact nulls stay finite.
const NULL_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct MusicSpectrum {
    pub sines: Vec<f64>,
    pub values: Vec<f64>,
}

impl MusicSpectrum {
    /// Two-column CSV: `sine,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "sine,value")?;
        for (s, v) in self.sines.iter().zip(&self.values) {
            writeln!(out, "{s},{v}")?;
        }
        Ok(())
    }

    /// Ratio of the highest value to the median, a flatness diagnostic.
    pub fn peak_to_median(&self) -> f64 {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        let median = v[v.len() / 2];
        v[v.len() - 1] / median
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MusicEstimate {
    pub spectrum: MusicSpectrum,
    /// Grid indices of the reported peaks, highest first.
    pub peaks: Vec<usize>,
    pub doas: Vec<f64>,
}

/// Half-width `M` of the largest hole-free lag range `−M..=M`.
pub fn contiguous_segment(index: &CoarrayIndex) -> usize {
    index.contiguous_half_width()
}

/// Smoothed covariance `(1/(M+1))·Σ zᵢ·zᵢᴴ` where `zᵢ` holds lags `i−M..=i`.
pub fn smoothed_covariance(x: &CoarrayVector, index: &CoarrayIndex) -> Result<CMatrix> {
    if x.len() != index.dof() {
        return Err(DoaError::DimensionMismatch {
            expected: index.dof(),
            actual: x.len(),
        });
    }
    let m = contiguous_segment(index);
    let c = index.center();
    let size = m + 1;
    let mut r = CMatrix::zeros(size, size);
    for i in 0..=m {
        let start = c + i - m;
        let z = x.values.rows(start, size);
        r += &z * z.adjoint();
    }
    Ok(r.unscale(size as f64))
}

/// Segment steering vector matching the coarray phase convention
/// (entry `k` is `exp(−jπ·k·sinθ)`).
fn segment_steering(size: usize, sine: f64) -> CVector {
    CVector::from_fn(size, |k, _| Complex64::from_polar(1.0, -PI * k as f64 * sine))
}

pub fn ss_music(x: &CoarrayVector, index: &CoarrayIndex, grid: &AngularGrid, sources: usize) -> Result<MusicEstimate> {
    if sources == 0 {
        return Err(DoaError::InvalidArgument("SS-MUSIC needs at least one source".into()));
    }
    let m = contiguous_segment(index);
    if sources >= m + 1 {
        return Err(DoaError::InsufficientAperture {
            sources,
            segment: m + 1,
        });
    }
    let r = smoothed_covariance(x, index)?;
    let (_, vectors) = hermitian_eig(&r)?;
    let noise = vectors.columns(0, m + 1 - sources);
    let values: Vec<f64> = grid
        .sines()
        .iter()
        .map(|&s| {
            let proj = noise.ad_mul(&segment_steering(m + 1, s));
            1.0 / proj.norm_squared().max(NULL_FLOOR)
        })
        .collect();
    let peaks = pick_peaks(&values, sources);
    let doas = peaks.iter().map(|&k| grid.angles()[k]).collect();
    Ok(MusicEstimate {
        spectrum: MusicSpectrum {
            sines: grid.sines().to_vec(),
            values,
        },
        peaks,
        doas,
    })
}

/// Up to `count` local maxima, highest first. Interior points must be
/// `≥` the left neighbour and `>` the right one (so a plateau reports once);
/// end points only compare with their single neighbour.
pub fn pick_peaks(values: &[f64], count: usize) -> Vec<usize> {
    let n = values.len();
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| {
            let left = k == 0 || values[k] >= values[k - 1];
            let right = k + 1 == n || values[k] > values[k + 1];
            n > 1 && left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    peaks.truncate(count);
    peaks
}
