//! Sparse linear array layouts and their difference coarray.
//!
//! Positions are integers in units of half a wavelength. The difference
//! vector is `c = a ⊗ 1 − 1 ⊗ a`, so entry `k·N + l` (zero-based) holds
//! `n_k − n_l`; this matches column-major vectorization of an `N×N`
//! covariance, where the same linear index addresses row `l`, column `k`.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{CVector, DoaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GeometryKind {
    Ula,
    Naq2,
    Snaq2,
    Mra,
    Mha,
    Custom,
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GeometryKind::Ula => "ULA",
            GeometryKind::Naq2 => "NAQ2",
            GeometryKind::Snaq2 => "SNAQ2",
            GeometryKind::Mra => "MRA",
            GeometryKind::Mha => "MHA",
            GeometryKind::Custom => "CUSTOM",
        };
        f.write_str(s)
    }
}

impl FromStr for GeometryKind {
    type Err = DoaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ULA" => Ok(GeometryKind::Ula),
            "NAQ2" | "NESTED" => Ok(GeometryKind::Naq2),
            "SNAQ2" | "SUPER-NESTED" => Ok(GeometryKind::Snaq2),
            "MRA" => Ok(GeometryKind::Mra),
            "MHA" => Ok(GeometryKind::Mha),
            "CUSTOM" => Ok(GeometryKind::Custom),
            other => Err(DoaError::InvalidArgument(format!("unknown geometry kind '{other}'"))),
        }
    }
}

/// Restricted (hole-free) minimum-redundancy arrays, indexed by `N − 3`.
const MRA_TABLE: [&[i64]; 8] = [
    &[0, 1, 3],
    &[0, 1, 4, 6],
    &[0, 1, 4, 7, 9],
    &[0, 1, 6, 9, 11, 13],
    &[0, 1, 8, 11, 13, 15, 17],
    &[0, 1, 2, 11, 15, 18, 21, 23],
    &[0, 1, 2, 14, 18, 21, 24, 27, 29],
    &[0, 1, 3, 6, 13, 20, 27, 31, 35, 36],
];

/// Minimum-hole arrays (optimal Golomb rulers), indexed by `N − 3`.
const MHA_TABLE: [&[i64]; 8] = [
    &[0, 1, 3],
    &[0, 1, 4, 6],
    &[0, 1, 4, 9, 11],
    &[0, 1, 4, 10, 12, 17],
    &[0, 1, 4, 10, 18, 23, 25],
    &[0, 1, 4, 9, 15, 22, 32, 34],
    &[0, 1, 5, 12, 25, 27, 35, 41, 44],
    &[0, 1, 6, 10, 23, 26, 34, 41, 53, 55],
];

/// A linear array with sensors at integer multiples of half a wavelength.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayGeometry {
    positions: Vec<i64>,
    kind: GeometryKind,
}

impl ArrayGeometry {
    /// Build a custom layout. Positions must be distinct and non-negative;
    /// they are sorted on construction.
    pub fn from_positions(mut positions: Vec<i64>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(DoaError::InvalidGeometry(format!(
                "need at least 2 sensors, got {}",
                positions.len()
            )));
        }
        if let Some(p) = positions.iter().find(|&&p| p < 0) {
            return Err(DoaError::InvalidGeometry(format!("negative position {p}")));
        }
        positions.sort_unstable();
        if positions.windows(2).any(|w| w[0] == w[1]) {
            return Err(DoaError::InvalidGeometry("duplicate sensor position".into()));
        }
        Ok(Self {
            positions,
            kind: GeometryKind::Custom,
        })
    }

    /// Read a custom layout, one integer position per line. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut positions = Vec::new();
        let mut last = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let p: i64 = line.parse().map_err(|_| {
                DoaError::InvalidGeometry(format!("line {}: '{line}' is not an integer", lineno + 1))
            })?;
            if last.is_some_and(|l| p <= l) {
                return Err(DoaError::InvalidGeometry(format!(
                    "line {}: positions must be strictly ascending",
                    lineno + 1
                )));
            }
            last = Some(p);
            positions.push(p);
        }
        Self::from_positions(positions)
    }

    pub fn build(kind: GeometryKind, n: usize) -> Result<Self> {
        let unsupported = || DoaError::UnsupportedGeometry {
            kind: kind.to_string(),
            n,
        };
        if n < 2 {
            return Err(unsupported());
        }
        let positions = match kind {
            GeometryKind::Ula => (0..n as i64).collect(),
            GeometryKind::Naq2 => {
                let (n1, n2) = nested_split(n);
                nested(n1, n2)
            }
            GeometryKind::Snaq2 => {
                let (n1, n2) = nested_split(n);
                super_nested(n1, n2).ok_or_else(unsupported)?
            }
            GeometryKind::Mra => table_entry(&MRA_TABLE, n).ok_or_else(unsupported)?,
            GeometryKind::Mha => table_entry(&MHA_TABLE, n).ok_or_else(unsupported)?,
            GeometryKind::Custom => return Err(unsupported()),
        };
        Ok(Self { positions, kind })
    }

    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn aperture(&self) -> i64 {
        self.positions[self.positions.len() - 1] - self.positions[0]
    }

    pub fn coarray(&self) -> CoarrayIndex {
        CoarrayIndex::new(&self.positions)
    }
}

/// `N1 = ⌈N/2⌉`, `N2 = ⌊N/2⌋`.
pub fn nested_split(n: usize) -> (usize, usize) {
    (n.div_ceil(2), n / 2)
}

/// Two-level nested array: inner `{1..N1}`, outer `{m(N1+1) : m = 1..N2}`.
pub fn nested(n1: usize, n2: usize) -> Vec<i64> {
    let step = n1 as i64 + 1;
    (1..=n1 as i64).chain((1..=n2 as i64).map(|m| m * step)).collect()
}

/// Second-order super nested array derived from the nested parent `(N1, N2)`.
///
/// Defined for `N1 ≥ 4`, `N2 ≥ 3`; returns `None` otherwise. The dense
/// subarray is split into four sparse runs whose lengths depend on `N1 mod 4`.
pub fn super_nested(n1: usize, n2: usize) -> Option<Vec<i64>> {
    if n1 < 4 || n2 < 3 {
        return None;
    }
    let r = (n1 / 4) as i64;
    let (a1, b1, a2, b2) = match n1 % 4 {
        0 => (r, r - 1, r - 1, r - 2),
        1 => (r, r - 1, r, r - 2),
        2 => (r + 1, r - 1, r, r - 2),
        _ => (r, r, r, r - 1),
    };
    let s = n1 as i64 + 1;
    let mut out: Vec<i64> = Vec::with_capacity(n1 + n2);
    out.extend((0..=a1).map(|l| 1 + 2 * l));
    out.extend((0..=b1).map(|l| s - (1 + 2 * l)));
    out.extend((0..=a2).map(|l| s + (2 + 2 * l)));
    out.extend((0..=b2).map(|l| 2 * s - (2 + 2 * l)));
    out.extend((2..=n2 as i64).map(|l| l * s));
    out.push(n2 as i64 * s - 1);
    out.sort_unstable();
    out.dedup();
    debug_assert_eq!(out.len(), n1 + n2);
    Some(out)
}

fn table_entry(table: &[&[i64]], n: usize) -> Option<Vec<i64>> {
    n.checked_sub(3)
        .and_then(|i| table.get(i))
        .map(|row| row.to_vec())
}

/// Difference-coarray bookkeeping for one geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarrayIndex {
    n_sensors: usize,
    diff: Vec<i64>,
    selection: Vec<usize>,
    lags: Vec<i64>,
}

impl CoarrayIndex {
    pub fn new(positions: &[i64]) -> Self {
        let n = positions.len();
        let diff: Vec<i64> = positions
            .iter()
            .flat_map(|&nk| positions.iter().map(move |&nl| nk - nl))
            .collect();

        // first occurrence of each lag, then ascending by lag
        let mut seen = HashSet::with_capacity(diff.len());
        let mut selection: Vec<usize> = (0..diff.len()).filter(|&i| seen.insert(diff[i])).collect();
        selection.sort_by_key(|&i| diff[i]);
        let lags = selection.iter().map(|&i| diff[i]).collect();

        Self {
            n_sensors: n,
            diff,
            selection,
            lags,
        }
    }

    pub fn n_sensors(&self) -> usize {
        self.n_sensors
    }

    /// All `N²` pairwise differences, with repetition.
    pub fn diff_vector(&self) -> &[i64] {
        &self.diff
    }

    /// Indices into the difference vector (and into a column-major
    /// vectorized covariance) picking each lag once, in ascending lag order.
    pub fn selection(&self) -> &[usize] {
        &self.selection
    }

    pub fn lags(&self) -> &[i64] {
        &self.lags
    }

    pub fn dof(&self) -> usize {
        self.lags.len()
    }

    /// Zero-based position of lag 0.
    pub fn center(&self) -> usize {
        (self.dof() - 1) / 2
    }

    /// `(row, column)` of the covariance entry selected for coarray position `k`.
    pub fn covariance_entry(&self, k: usize) -> (usize, usize) {
        let idx = self.selection[k];
        (idx % self.n_sensors, idx / self.n_sensors)
    }

    pub fn position_of_lag(&self, lag: i64) -> Option<usize> {
        self.lags.binary_search(&lag).ok()
    }

    /// Largest `M` such that every lag in `−M..=M` is present.
    pub fn contiguous_half_width(&self) -> usize {
        let c = self.center();
        let mut m = 0;
        while c + m + 1 < self.dof() && self.lags[c + m + 1] == (m + 1) as i64 {
            m += 1;
        }
        m
    }

    /// Pick the coarray entries out of a length-`N²` vector.
    pub fn select(&self, full: &CVector) -> Result<CVector> {
        let expected = self.n_sensors * self.n_sensors;
        if full.len() != expected {
            return Err(DoaError::DimensionMismatch {
                expected,
                actual: full.len(),
            });
        }
        Ok(CVector::from_iterator(
            self.dof(),
            self.selection.iter().map(|&i| full[i]),
        ))
    }
}
