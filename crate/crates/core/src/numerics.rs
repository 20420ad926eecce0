//! Small dense complex linear algebra used by the recovery algorithms.

use nalgebra::{Cholesky, SymmetricEigen};

use crate::{CMatrix, CVector, DoaError, Result};

/// Relative tolerance on pivoted-QR diagonal entries for column rank.
pub const RANK_TOL: f64 = 1e-10;
/// Sweep cap for the Hermitian eigensolver.
pub const EIG_MAX_SWEEPS: usize = 500;
/// Determinants below this are treated as singular.
pub const DET_FLOOR: f64 = 1e-30;

/// Orthogonal projector onto the span of a set of columns.
#[derive(Debug, Clone)]
pub struct Projector {
    p: CMatrix,
    rank: usize,
}

impl Projector {
    /// Projector onto the range of `columns` (`N×m`, `m ≤ N`).
    ///
    /// Fails with [`DoaError::RankDeficient`] when the pivoted QR finds a
    /// diagonal entry below `RANK_TOL` relative to the largest one.
    pub fn onto(columns: &CMatrix) -> Result<Self> {
        let (n, m) = columns.shape();
        if m == 0 {
            return Ok(Self {
                p: CMatrix::zeros(n, n),
                rank: 0,
            });
        }
        if m > n {
            return Err(DoaError::RankDeficient { rank: n, cols: m });
        }
        let qr = columns.clone().col_piv_qr();
        let r = qr.r();
        let lead = r[(0, 0)].norm();
        let rank = (0..m)
            .take_while(|&k| lead > 0.0 && r[(k, k)].norm() > RANK_TOL * lead)
            .count();
        if rank < m {
            return Err(DoaError::RankDeficient { rank, cols: m });
        }
        let q = qr.q();
        Ok(Self {
            p: &q * q.adjoint(),
            rank,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.p
    }

    pub fn complement(&self) -> CMatrix {
        CMatrix::identity(self.p.nrows(), self.p.ncols()) - &self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.p.nrows()
    }
}

/// Columns of `m` at the given indices.
pub fn gather_columns(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), idx.len(), |r, c| m[(r, idx[c])])
}

/// Least-squares fit of `y` using only the columns of `b` in `support`.
///
/// Returns a length-`b.ncols()` vector that is zero off the support.
/// Solved through a QR factorization of the restricted columns.
pub fn restricted_least_squares(b: &CMatrix, y: &CVector, support: &[usize]) -> Result<CVector> {
    if y.len() != b.nrows() {
        return Err(DoaError::DimensionMismatch {
            expected: b.nrows(),
            actual: y.len(),
        });
    }
    let mut out = CVector::zeros(b.ncols());
    if support.is_empty() {
        return Ok(out);
    }
    let sub = gather_columns(b, support);
    let z = solve_least_squares(&sub, y)?;
    for (k, &j) in support.iter().enumerate() {
        out[j] = z[k];
    }
    Ok(out)
}

/// Least-squares solution of `a·z ≈ y` for full-column-rank `a`.
pub fn solve_least_squares(a: &CMatrix, y: &CVector) -> Result<CVector> {
    let (n, m) = a.shape();
    if m > n {
        return Err(DoaError::RankDeficient { rank: n, cols: m });
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let lead = (0..m).map(|k| r[(k, k)].norm()).fold(0.0, f64::max);
    let rank = (0..m).filter(|&k| r[(k, k)].norm() > RANK_TOL * lead).count();
    if lead == 0.0 || rank < m {
        return Err(DoaError::RankDeficient { rank, cols: m });
    }
    let rhs = qr.q().adjoint() * y;
    r.solve_upper_triangular(&rhs)
        .ok_or(DoaError::RankDeficient { rank, cols: m })
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrized as `(M + Mᴴ)/2` first.
pub fn hermitian_eig(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if !m.is_square() {
        return Err(DoaError::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, EIG_MAX_SWEEPS)
        .ok_or(DoaError::NoConvergence(EIG_MAX_SWEEPS))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Logarithm of the candidate ML score
/// `det(U·C·U + tr(U⊥·C)/(N − m) · U⊥)`.
///
/// Returns `+∞` when the argument is numerically singular.
pub fn ml_log_score(u: &Projector, cov: &CMatrix, support_size: usize) -> Result<f64> {
    let n = u.dim();
    if cov.shape() != (n, n) {
        return Err(DoaError::DimensionMismatch {
            expected: n,
            actual: cov.nrows(),
        });
    }
    if support_size >= n {
        return Err(DoaError::SupportTooLarge {
            support: support_size,
            sensors: n,
        });
    }
    let p = u.matrix();
    let perp = u.complement();
    let noise = (&perp * cov).trace().re / (n - support_size) as f64;
    let arg = p * cov * p + perp.scale(noise);
    let arg = (&arg + arg.adjoint()).scale(0.5);
    Ok(log_det_hpd(arg))
}

/// [`ml_log_score`] exponentiated.
pub fn ml_score(u: &Projector, cov: &CMatrix, support_size: usize) -> Result<f64> {
    ml_log_score(u, cov, support_size).map(f64::exp)
}

/// Log-determinant of a Hermitian positive definite matrix via Cholesky;
/// `+∞` if the factorization fails or the determinant underflows the floor.
pub fn log_det_hpd(m: CMatrix) -> f64 {
    match Cholesky::new(m) {
        Some(ch) => {
            let l = ch.l_dirty();
            let log_det: f64 = (0..l.nrows()).map(|k| 2.0 * l[(k, k)].re.ln()).sum();
            if log_det.is_nan() || log_det < DET_FLOOR.ln() {
                f64::INFINITY
            } else {
                log_det
            }
        }
        None => f64::INFINITY,
    }
}

/// Largest singular value of `m`, from the eigenvalues of the smaller
/// Gram matrix (`m·mᴴ` or `mᴴ·m`).
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    let gram = if m.nrows() <= m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    let (vals, _) = hermitian_eig(&gram)?;
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}
