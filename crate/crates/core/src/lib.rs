//! Coarray-domain direction-of-arrival estimation for non-uniform linear arrays.
//!
//! The crate covers the whole pipeline:
//!
//! - [`geometry`]: sparse array layouts (ULA, nested, super-nested, MRA, MHA)
//!   and their difference-coarray indexing.
//! - [`signal_model`]: snapshot simulation with optional mutual coupling.
//! - [`coarray`]: the DCTM measurement vector and its finite-snapshot
//!   corrected variant (EDCTM) built from the cross-source error term.
//! - [`dictionary`]: angular grid and the sparse coarray dictionary.
//! - [`numerics`]: projectors, restricted least squares, Hermitian
//!   eigendecomposition and the candidate ML score.
//! - [`recovery`]: OMP, LBML-OMP and the ROMP / IHT / CoSaMP baselines.
//! - [`subspace`]: spatial-smoothing MUSIC.
//! - [`metrics`]: the OSPA error.
//! - [`experiments`]: Monte Carlo sweeps and the figure presets.
//!
//! ```
//! use coarray_doa::geometry::{ArrayGeometry, GeometryKind};
//!
//! let geom = ArrayGeometry::build(GeometryKind::Naq2, 8).unwrap();
//! assert_eq!(geom.positions(), &[1, 2, 3, 4, 5, 10, 15, 20]);
//! assert_eq!(geom.coarray().dof(), 39);
//! ```

pub mod coarray;
pub mod dictionary;
mod error;
pub mod experiments;
pub mod geometry;
pub mod metrics;
pub mod numerics;
pub mod recovery;
pub mod rng;
pub mod signal_model;
pub mod subspace;

pub use error::{DoaError, Result};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<num_complex::Complex64>;
pub use num_complex::Complex64;
