//! Coarray-domain measurement vectors.
//!
//! The plain model vectorizes the sample covariance (column-major) and keeps
//! one entry per lag. The enhanced model additionally removes the error
//! term produced by the off-diagonal part of the source sample covariance:
//!
//! ```text
//! η  = vec(A·(Ĉs − diag(Ĉs))·Aᴴ)
//! η′ = η restricted through the coarray selection
//! x_EDCTM = x_DCTM − η′
//! ```
//!
//! For uncorrelated sources η′ has zero mean and a variance that decays
//! as `1/T`, so both models agree once enough snapshots are available.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{ArrayGeometry, CoarrayIndex};
use crate::signal_model::{complex_gaussian, steering_matrix};
use crate::{rng, CMatrix, CVector, DoaError, Result};

/// Which model produced a coarray vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CoarrayModel {
    Dctm,
    EdctmExact,
    EdctmEstimated { alpha: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoarrayVector {
    pub values: CVector,
    pub model: CoarrayModel,
}

impl CoarrayVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Coarray error term η′, one entry per lag.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaPrime(pub CVector);

impl EtaPrime {
    pub fn zeros(dof: usize) -> Self {
        Self(CVector::zeros(dof))
    }

    pub fn values(&self) -> &CVector {
        &self.0
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }
}

/// Column-major `vec(·)`.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

fn check_square(cov: &CMatrix, index: &CoarrayIndex) -> Result<()> {
    let n = index.n_sensors();
    if cov.shape() != (n, n) {
        return Err(DoaError::DimensionMismatch {
            expected: n,
            actual: if cov.nrows() != n { cov.nrows() } else { cov.ncols() },
        });
    }
    Ok(())
}

/// Plain difference-coarray vector of a covariance matrix.
pub fn dctm(cov: &CMatrix, index: &CoarrayIndex) -> Result<CoarrayVector> {
    check_square(cov, index)?;
    Ok(CoarrayVector {
        values: index.select(&vectorize(cov))?,
        model: CoarrayModel::Dctm,
    })
}

/// η′ from the realized source sample covariance (requires the true DOAs).
pub fn eta_prime_exact(
    geom: &ArrayGeometry,
    doas: &[f64],
    source_cov: &CMatrix,
    index: &CoarrayIndex,
) -> Result<EtaPrime> {
    let d = doas.len();
    if source_cov.shape() != (d, d) {
        return Err(DoaError::DimensionMismatch {
            expected: d,
            actual: source_cov.nrows(),
        });
    }
    eta_prime_from_mixing(&steering_matrix(geom, doas), source_cov, index)
}

/// η′ for an arbitrary source-to-sensor mixing matrix `M` (e.g. `G·A`
/// under mutual coupling): `select(vec(M·(Ĉs − diag Ĉs)·Mᴴ))`.
pub fn eta_prime_from_mixing(mixing: &CMatrix, source_cov: &CMatrix, index: &CoarrayIndex) -> Result<EtaPrime> {
    let d = mixing.ncols();
    if source_cov.shape() != (d, d) {
        return Err(DoaError::DimensionMismatch {
            expected: d,
            actual: source_cov.nrows(),
        });
    }
    let mut hollow = source_cov.clone();
    hollow.fill_diagonal(Default::default());
    let eta = vectorize(&(mixing * hollow * mixing.adjoint()));
    Ok(EtaPrime(index.select(&eta)?))
}

/// Enhanced coarray vector `dctm(cov) − η′`.
pub fn edctm(cov: &CMatrix, eta: &EtaPrime, index: &CoarrayIndex) -> Result<CoarrayVector> {
    let base = dctm(cov, index)?;
    if eta.0.len() != base.len() {
        return Err(DoaError::DimensionMismatch {
            expected: base.len(),
            actual: eta.0.len(),
        });
    }
    Ok(CoarrayVector {
        values: base.values - &eta.0,
        model: CoarrayModel::EdctmExact,
    })
}

/// Enhanced vector built from a perturbed η′ estimate.
pub fn edctm_estimated(
    cov: &CMatrix,
    estimate: &EtaPrime,
    alpha: f64,
    index: &CoarrayIndex,
) -> Result<CoarrayVector> {
    let mut v = edctm(cov, estimate, index)?;
    v.model = CoarrayModel::EdctmEstimated { alpha };
    Ok(v)
}

/// `η′ + sqrt(α‖η′‖²/dof)·w` for a given unit-variance circular draw `w`.
pub fn eta_prime_perturbed(eta: &EtaPrime, alpha: f64, unit_draw: &CVector) -> Result<EtaPrime> {
    if alpha < 0.0 {
        return Err(DoaError::InvalidArgument(format!("alpha must be >= 0, got {alpha}")));
    }
    if unit_draw.len() != eta.0.len() {
        return Err(DoaError::DimensionMismatch {
            expected: eta.0.len(),
            actual: unit_draw.len(),
        });
    }
    if alpha == 0.0 {
        return Ok(eta.clone());
    }
    let dof = eta.0.len() as f64;
    let scale = (alpha * eta.norm_squared() / dof).sqrt();
    Ok(EtaPrime(&eta.0 + unit_draw.scale(scale)))
}

/// Unit-variance circular complex Gaussian vector of length `dof`.
pub fn unit_circular_draw<R: Rng + ?Sized>(rng: &mut R, dof: usize) -> CVector {
    complex_gaussian(rng, &vec![1.0; dof], 1).column(0).into_owned()
}

/// Estimated η′: adds white circular Gaussian noise of per-entry variance
/// `α·‖η′‖²/dof`.
pub fn eta_prime_estimated(eta: &EtaPrime, alpha: f64, seed: u64) -> Result<EtaPrime> {
    let mut r = rng::trial_rng(seed, &[]);
    let w = unit_circular_draw(&mut r, eta.0.len());
    eta_prime_perturbed(eta, alpha, &w)
}

/// Analytic first and second moments of η′ for uncorrelated sources.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaMoments {
    pub mean: CVector,
    /// `E|[η′]_k|²` per lag.
    pub variance: Vec<f64>,
}

/// Propagate the complex-Wishart moments of the hollow source covariance
/// through the linear map to η′:
/// `E|[η′]_k|² = (1/T)·Σ_{i≠j} |w_k(i,j)|²·p_i·p_j`, with
/// `w_k(i,j) = a_i[r]·conj(a_j[c])` for the covariance entry `(r, c)` behind lag `k`.
pub fn eta_prime_moments_oracle(
    geom: &ArrayGeometry,
    doas: &[f64],
    powers: &[f64],
    n_snapshots: usize,
    index: &CoarrayIndex,
) -> Result<EtaMoments> {
    if doas.len() != powers.len() {
        return Err(DoaError::DimensionMismatch {
            expected: doas.len(),
            actual: powers.len(),
        });
    }
    if n_snapshots == 0 {
        return Err(DoaError::InvalidArgument("need at least one snapshot".into()));
    }
    let a = steering_matrix(geom, doas);
    let d = doas.len();
    let t = n_snapshots as f64;
    let variance = (0..index.dof())
        .map(|k| {
            let (r, c) = index.covariance_entry(k);
            let mut acc = 0.0;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        let w = a[(r, i)] * a[(c, j)].conj();
                        acc += w.norm_sqr() * powers[i] * powers[j];
                    }
                }
            }
            acc / t
        })
        .collect();
    Ok(EtaMoments {
        mean: CVector::zeros(index.dof()),
        variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeometryKind;
    use crate::signal_model::{exact_covariance, simulate_snapshots, CouplingModel, SourceScene};
    use crate::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_matrix(rng: &mut impl Rng, r: usize, c: usize) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
        a.kronecker(b)
    }

    #[test]
    fn vec_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let (p, q, r, s) = (
                rng.random_range(1..=6),
                rng.random_range(1..=6),
                rng.random_range(1..=6),
                rng.random_range(1..=6),
            );
            let a = random_matrix(&mut rng, p, q);
            let b = random_matrix(&mut rng, q, r);
            let c = random_matrix(&mut rng, r, s);
            let lhs = vectorize(&(&a * &b * &c));
            let rhs = kron(&c.transpose(), &a) * vectorize(&b);
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn white_noise_only_zero_lag() {
        let idx = ArrayGeometry::build(GeometryKind::Ula, 2).unwrap().coarray();
        let v = dctm(&CMatrix::identity(2, 2).scale(0.7), &idx).unwrap();
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(v.values.as_slice(), &[z, Complex64::new(0.7, 0.0), z]);
        assert_eq!(v.model, CoarrayModel::Dctm);
    }

    #[test]
    fn single_source_coarray_phases() {
        let g = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
        let idx = g.coarray();
        let theta = 0.37;
        let scene = SourceScene::new(vec![theta], vec![1.0], 0.0).unwrap();
        let v = dctm(&exact_covariance(&g, &scene, &CouplingModel::default()), &idx).unwrap();
        for (k, &lag) in idx.lags().iter().enumerate() {
            let expect = Complex64::from_polar(1.0, -PI * lag as f64 * theta.sin());
            assert!((v.values[k] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_input_gives_conjugate_symmetric_lags() {
        let g = ArrayGeometry::build(GeometryKind::Mra, 7).unwrap();
        let idx = g.coarray();
        let scene = SourceScene::with_snr(vec![0.2, -0.5], 3.0).unwrap();
        let s = simulate_snapshots(&g, &scene, &CouplingModel::default(), 15, 4).unwrap();
        let v = dctm(&s.sample_covariance, &idx).unwrap().values;
        let dof = idx.dof();
        for k in 0..dof {
            assert!((v[k] - v[dof - 1 - k].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn dctm_dimension_mismatch() {
        let idx = ArrayGeometry::build(GeometryKind::Ula, 3).unwrap().coarray();
        assert!(matches!(dctm(&CMatrix::identity(4, 4), &idx), Err(DoaError::DimensionMismatch { .. })));
    }

    #[test]
    fn eta_vanishes_for_diagonal_or_single_source() {
        let g = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
        let idx = g.coarray();
        let diag = CMatrix::from_diagonal(&CVector::from_vec(vec![Complex64::new(1.3, 0.0), Complex64::new(0.4, 0.0)]));
        let eta = eta_prime_exact(&g, &[0.1, 0.6], &diag, &idx).unwrap();
        assert_eq!(eta.norm_squared(), 0.0);

        let one = CMatrix::from_element(1, 1, Complex64::new(2.5, 0.0));
        assert_eq!(eta_prime_exact(&g, &[0.3], &one, &idx).unwrap().norm_squared(), 0.0);
    }

    #[test]
    fn eta_two_routes_agree() {
        // η′ = dctm(A Ĉs Aᴴ) − dctm(A diag(Ĉs) Aᴴ)
        let g = ArrayGeometry::build(GeometryKind::Naq2, 8).unwrap();
        let idx = g.coarray();
        let doas = [0.25, -0.7];
        let scene = SourceScene::new(doas.to_vec(), vec![1.0, 1.0], 0.0).unwrap();
        for seed in 0..10 {
            let s = simulate_snapshots(&g, &scene, &CouplingModel::default(), 12, seed).unwrap();
            let cs = s.source_covariance();
            let a = steering_matrix(&g, &doas);
            let mut d = cs.clone();
            for i in 0..2 {
                for j in 0..2 {
                    if i != j {
                        d[(i, j)] = Complex64::new(0.0, 0.0);
                    }
                }
            }
            let full = dctm(&s.sample_covariance, &idx).unwrap().values;
            let diag_part = dctm(&(&a * d * a.adjoint()), &idx).unwrap().values;
            let eta = eta_prime_exact(&g, &doas, &cs, &idx).unwrap();
            assert!((full - diag_part - &eta.0).norm() < 1e-12);
        }
    }

    #[test]
    fn edctm_subtractivity_and_noise_atom() {
        let g = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
        let idx = g.coarray();
        let scene = SourceScene::new(vec![0.2, -0.3], vec![1.0, 2.0], 0.3).unwrap();
        let cov = exact_covariance(&g, &scene, &CouplingModel::default());
        let zero = EtaPrime::zeros(idx.dof());
        let e = edctm(&cov, &zero, &idx).unwrap();
        assert_eq!(e.values, dctm(&cov, &idx).unwrap().values);
        assert_eq!(e.model, CoarrayModel::EdctmExact);

        // A_D·p + σ²·i
        let mut expect = CVector::zeros(idx.dof());
        for (k, &lag) in idx.lags().iter().enumerate() {
            for (t, p) in scene.doas.iter().zip(&scene.powers) {
                expect[k] += Complex64::from_polar(*p, -PI * lag as f64 * t.sin());
            }
        }
        expect[idx.center()] += Complex64::new(0.3, 0.0);
        assert!((e.values - &expect).norm() < 1e-12);

        let eta = EtaPrime(CVector::from_fn(idx.dof(), |k, _| Complex64::new(k as f64, 1.0)));
        let corrected = edctm(&cov, &eta, &idx).unwrap();
        assert!((corrected.values + &eta.0 - dctm(&cov, &idx).unwrap().values).norm() < 1e-12);
        assert!(edctm(&cov, &EtaPrime::zeros(3), &idx).is_err());
    }

    #[test]
    fn alpha_zero_and_zero_eta() {
        let eta = EtaPrime(CVector::from_fn(9, |k, _| Complex64::new(k as f64, -1.0)));
        assert_eq!(eta_prime_estimated(&eta, 0.0, 5).unwrap(), eta);
        let zero = EtaPrime::zeros(9);
        assert_eq!(eta_prime_estimated(&zero, 0.6, 5).unwrap(), zero);
        assert!(eta_prime_estimated(&eta, -0.1, 5).is_err());
    }

    #[test]
    fn alpha_sets_error_energy() {
        let eta = EtaPrime(CVector::from_fn(39, |k, _| Complex64::from_polar(1.0 + k as f64 * 0.1, k as f64)));
        let target = 0.4 * eta.norm_squared();
        let draws = 10_000;
        let mean: f64 = (0..draws)
            .map(|s| (eta_prime_estimated(&eta, 0.4, s).unwrap().0 - &eta.0).norm_squared())
            .sum::<f64>()
            / draws as f64;
        assert!((mean / target - 1.0).abs() < 0.03, "{mean} vs {target}");
    }

    #[test]
    fn oracle_single_source_and_snapshot_scaling() {
        let g = ArrayGeometry::build(GeometryKind::Snaq2, 8).unwrap();
        let idx = g.coarray();
        let one = eta_prime_moments_oracle(&g, &[0.3], &[1.0], 50, &idx).unwrap();
        assert!(one.variance.iter().all(|&v| v == 0.0));

        let a = eta_prime_moments_oracle(&g, &[0.3, -0.2], &[1.0, 1.5], 100, &idx).unwrap();
        let b = eta_prime_moments_oracle(&g, &[0.3, -0.2], &[1.0, 1.5], 200, &idx).unwrap();
        for (x, y) in a.variance.iter().zip(&b.variance) {
            assert!((x / y - 2.0).abs() < 1e-12);
            assert!((x - 2.0 * 1.5 / 100.0).abs() < 1e-12);
        }
        assert!(a.mean.iter().all(|z| z.norm() == 0.0));
    }
}
