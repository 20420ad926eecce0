//! Narrowband snapshot simulation for uncorrelated Gaussian sources.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::geometry::ArrayGeometry;
use crate::{rng, CMatrix, Complex64, DoaError, Result};

/// Source directions (radians from broadside), powers and noise power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceScene {
    pub doas: Vec<f64>,
    pub powers: Vec<f64>,
    pub noise_power: f64,
}

impl SourceScene {
    pub fn new(doas: Vec<f64>, powers: Vec<f64>, noise_power: f64) -> Result<Self> {
        if doas.is_empty() {
            return Err(DoaError::InvalidArgument("scene needs at least one source".into()));
        }
        if doas.len() != powers.len() {
            return Err(DoaError::DimensionMismatch {
                expected: doas.len(),
                actual: powers.len(),
            });
        }
        if powers.iter().any(|&p| p <= 0.0 || !p.is_finite()) {
            return Err(DoaError::InvalidArgument("source powers must be positive".into()));
        }
        if noise_power < 0.0 || !noise_power.is_finite() {
            return Err(DoaError::InvalidArgument("noise power must be non-negative".into()));
        }
        if let Some(t) = doas.iter().find(|t| !(t.abs() <= PI / 2.0)) {
            return Err(DoaError::InvalidArgument(format!("DOA {t} outside [-pi/2, pi/2]")));
        }
        Ok(Self {
            doas,
            powers,
            noise_power,
        })
    }

    /// Unit-power sources with `σ²_n = 10^(−SNR/10)`.
    pub fn with_snr(doas: Vec<f64>, snr_db: f64) -> Result<Self> {
        let powers = vec![1.0; doas.len()];
        Self::new(doas, powers, snr_to_noise_power(snr_db))
    }

    pub fn n_sources(&self) -> usize {
        self.doas.len()
    }
}

pub fn snr_to_noise_power(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// B-banded mutual coupling with `g(k) = g(1)·exp(−j(k−1)π)/k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingModel {
    pub enabled: bool,
    pub g1_magnitude: f64,
    pub g1_phase: f64,
    pub band: usize,
}

impl Default for CouplingModel {
    fn default() -> Self {
        Self {
            enabled: false,
            ..Self::standard()
        }
    }
}

impl CouplingModel {
    /// `g(1) = 0.3·exp(jπ/3)`, `B = 100`.
    pub fn standard() -> Self {
        Self {
            enabled: true,
            g1_magnitude: 0.3,
            g1_phase: PI / 3.0,
            band: 100,
        }
    }

    pub fn g1(&self) -> Complex64 {
        Complex64::from_polar(self.g1_magnitude, self.g1_phase)
    }

    /// Coupling coefficient for a sensor separation of `k` half-wavelengths.
    pub fn coefficient(&self, k: usize) -> Complex64 {
        match k {
            0 => Complex64::new(1.0, 0.0),
            _ if k > self.band => Complex64::new(0.0, 0.0),
            _ => self.g1() * Complex64::from_polar(1.0, -((k - 1) as f64) * PI) / k as f64,
        }
    }

    /// `N×N` coupling matrix; identity when disabled.
    pub fn matrix(&self, geom: &ArrayGeometry) -> CMatrix {
        let p = geom.positions();
        if !self.enabled {
            return CMatrix::identity(p.len(), p.len());
        }
        CMatrix::from_fn(p.len(), p.len(), |l, m| {
            self.coefficient((p[l] - p[m]).unsigned_abs() as usize)
        })
    }
}

/// `exp(jπ·n·sinθ)` for one sensor position and angle.
pub fn steering_entry(position: i64, doa: f64) -> Complex64 {
    Complex64::from_polar(1.0, PI * position as f64 * doa.sin())
}

/// Array manifold `A(θ)`, one column per angle.
pub fn steering_matrix(geom: &ArrayGeometry, doas: &[f64]) -> CMatrix {
    let p = geom.positions();
    CMatrix::from_fn(p.len(), doas.len(), |k, d| steering_entry(p[k], doas[d]))
}

/// Model covariance `G·A·diag(p)·Aᴴ·Gᴴ + σ²_n·I`.
pub fn exact_covariance(geom: &ArrayGeometry, scene: &SourceScene, coupling: &CouplingModel) -> CMatrix {
    let a = coupling.matrix(geom) * steering_matrix(geom, &scene.doas);
    let n = geom.len();
    let mut c = CMatrix::identity(n, n).scale(scene.noise_power);
    for (d, &p) in scene.powers.iter().enumerate() {
        let col = a.column(d);
        c += (&col * col.adjoint()).scale(p);
    }
    c
}

/// One realization of `T` snapshots together with the drawn source waveforms.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSet {
    pub samples: CMatrix,
    pub sources: CMatrix,
    pub sample_covariance: CMatrix,
}

impl SnapshotSet {
    pub fn n_snapshots(&self) -> usize {
        self.samples.ncols()
    }

    /// Source sample covariance `(1/T)·S·Sᴴ` (simulation-only quantity).
    pub fn source_covariance(&self) -> CMatrix {
        sample_covariance(&self.sources)
    }
}

pub fn sample_covariance(x: &CMatrix) -> CMatrix {
    let t = x.ncols().max(1) as f64;
    let c = (x * x.adjoint()).unscale(t);
    (&c + c.adjoint()).scale(0.5)
}

/// Circular complex Gaussian matrix with per-row variances.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variances: &[f64], cols: usize) -> CMatrix {
    let mut m = CMatrix::zeros(variances.len(), cols);
    // column-major fill keeps the draw order independent of the row count per column
    for c in 0..cols {
        for (r, &v) in variances.iter().enumerate() {
            let s = (v / 2.0).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(r, c)] = Complex64::new(s * re, s * im);
        }
    }
    m
}

/// Draw `x(t) = G·A·s(t) + n(t)` for `t = 1..T`.
pub fn simulate_snapshots_with<R: Rng + ?Sized>(
    geom: &ArrayGeometry,
    scene: &SourceScene,
    coupling: &CouplingModel,
    n_snapshots: usize,
    rng: &mut R,
) -> Result<SnapshotSet> {
    if n_snapshots == 0 {
        return Err(DoaError::InvalidArgument("need at least one snapshot".into()));
    }
    let mixing = coupling.matrix(geom) * steering_matrix(geom, &scene.doas);
    let sources = complex_gaussian(rng, &scene.powers, n_snapshots);
    let noise = complex_gaussian(rng, &vec![scene.noise_power; geom.len()], n_snapshots);
    let samples = &mixing * &sources + noise;
    let sample_covariance = sample_covariance(&samples);
    Ok(SnapshotSet {
        samples,
        sources,
        sample_covariance,
    })
}

/// Seeded variant of [`simulate_snapshots_with`].
pub fn simulate_snapshots(
    geom: &ArrayGeometry,
    scene: &SourceScene,
    coupling: &CouplingModel,
    n_snapshots: usize,
    seed: u64,
) -> Result<SnapshotSet> {
    let mut r = rng::trial_rng(seed, &[]);
    simulate_snapshots_with(geom, scene, coupling, n_snapshots, &mut r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometryKind;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn broadside_column_is_ones() {
        let g = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
        let a = steering_matrix(&g, &[0.0, 0.3]);
        assert!(a.column(0).iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-15));
        assert!(a.iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn two_element_half_sine() {
        let g = ArrayGeometry::build(GeometryKind::Ula, 2).unwrap();
        let a = steering_matrix(&g, &[0.5f64.asin()]);
        assert!((a[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((a[(1, 0)] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn coupling_coefficients() {
        let m = CouplingModel::standard();
        let g1 = Complex64::from_polar(0.3, PI / 3.0);
        assert!((m.coefficient(1) - g1).norm() < 1e-15);
        assert!((m.coefficient(2) - g1.scale(-0.5)).norm() < 1e-15);
        assert_eq!(m.coefficient(0), c(1.0, 0.0));
        let banded = CouplingModel { band: 2, ..m };
        assert_eq!(banded.coefficient(3), c(0.0, 0.0));

        let g = ArrayGeometry::build(GeometryKind::Ula, 4).unwrap();
        let gm = m.matrix(&g);
        for k in 0..4 {
            assert_eq!(gm[(k, k)], c(1.0, 0.0));
        }
        assert!((gm[(0, 2)] - g1.scale(-0.5)).norm() < 1e-15);
        assert_eq!(CouplingModel::default().matrix(&g), CMatrix::identity(4, 4));
    }

    #[test]
    fn same_seed_same_draw() {
        let g = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
        let scene = SourceScene::with_snr(vec![0.1, -0.4], 5.0).unwrap();
        let a = simulate_snapshots(&g, &scene, &CouplingModel::default(), 20, 11).unwrap();
        let b = simulate_snapshots(&g, &scene, &CouplingModel::default(), 20, 11).unwrap();
        assert_eq!(a, b);
        let other = simulate_snapshots(&g, &scene, &CouplingModel::default(), 20, 12).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn sample_covariance_hermitian_psd() {
        let g = ArrayGeometry::build(GeometryKind::Mra, 6).unwrap();
        let scene = SourceScene::with_snr(vec![0.2, 0.9], 0.0).unwrap();
        for seed in 0..5 {
            let s = simulate_snapshots(&g, &scene, &CouplingModel::standard(), 3, seed).unwrap();
            let cov = &s.sample_covariance;
            assert!((cov - cov.adjoint()).norm() < 1e-14);
            let (vals, _) = crate::numerics::hermitian_eig(cov).unwrap();
            assert!(vals[0] > -1e-10 * vals[vals.len() - 1]);
            let direct = (&s.samples * s.samples.adjoint()).unscale(3.0);
            assert!((cov - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn exact_covariance_without_coupling() {
        let g = ArrayGeometry::build(GeometryKind::Naq2, 6).unwrap();
        let scene = SourceScene::new(vec![0.3, -0.2], vec![2.0, 0.5], 0.1).unwrap();
        let a = steering_matrix(&g, &scene.doas);
        let p = CMatrix::from_diagonal(&crate::CVector::from_vec(vec![c(2.0, 0.0), c(0.5, 0.0)]));
        let expect = &a * p * a.adjoint() + CMatrix::identity(6, 6).scale(0.1);
        assert!((exact_covariance(&g, &scene, &CouplingModel::default()) - expect).norm() < 1e-12);
    }

    #[test]
    fn large_sample_covariance_converges() {
        let g = ArrayGeometry::build(GeometryKind::Ula, 4).unwrap();
        let scene = SourceScene::new(vec![0.4], vec![1.0], 0.0).unwrap();
        let s = simulate_snapshots(&g, &scene, &CouplingModel::default(), 100_000, 3).unwrap();
        let exact = exact_covariance(&g, &scene, &CouplingModel::default());
        let rel = (&s.sample_covariance - &exact).norm() / exact.norm();
        assert!(rel < 0.05, "relative error {rel}");
    }

    #[test]
    fn trace_expectation() {
        // E[tr Ĉ] = N·Σp + N·σ²
        let g = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
        let scene = SourceScene::new(vec![0.1, 0.5], vec![1.0, 2.0], 0.5).unwrap();
        let trials = 1000;
        let traces: Vec<f64> = (0..trials)
            .map(|t| {
                simulate_snapshots(&g, &scene, &CouplingModel::default(), 10, t)
                    .unwrap()
                    .sample_covariance
                    .trace()
                    .re
            })
            .collect();
        let mean = traces.iter().sum::<f64>() / trials as f64;
        let var = traces.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        let expect = 8.0 * 3.0 + 8.0 * 0.5;
        assert!((mean - expect).abs() < 3.0 * se, "mean {mean} expect {expect} se {se}");
    }

    #[test]
    fn scene_validation() {
        assert!(SourceScene::new(vec![], vec![], 1.0).is_err());
        assert!(SourceScene::new(vec![0.1], vec![0.0], 1.0).is_err());
        assert!(SourceScene::new(vec![2.0], vec![1.0], 1.0).is_err());
        assert!(SourceScene::new(vec![0.1], vec![1.0, 1.0], 1.0).is_err());
        let s = SourceScene::with_snr(vec![0.0], 10.0).unwrap();
        assert!((s.noise_power - 0.1).abs() < 1e-15);
    }
}
