//! Hermitian positive-definite matrices and their log-Euclidean geometry.
//!
//! One matrix type covers both cases the simulator needs: real symmetric
//! (regularized graph Laplacians) and complex Hermitian (channel outer
//! products). The logarithm goes through a Hermitian eigendecomposition,
//! so the spectrum is real by construction. Distances use the squared
//! Frobenius norm of log differences; the square root of that quantity is
//! the actual metric, but every argmax/argmin in the crate is invariant
//! to the square.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative tolerance for the Hermitian symmetry check.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// A validated Hermitian positive-definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    entries: DMatrix<Complex<f64>>,
}

/// Principal logarithm of an [`SpdMatrix`]: Hermitian, not necessarily PD.
#[derive(Debug, Clone, PartialEq)]
pub struct LogMatrix {
    entries: DMatrix<Complex<f64>>,
}

/// Isometric vectorization of a [`LogMatrix`]; Euclidean norm equals the
/// Frobenius norm of the source matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector(pub DVector<f64>);

fn max_abs(m: &DMatrix<Complex<f64>>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Checks Hermitian symmetry to `HERMITIAN_TOL` (relative to the largest
/// entry) and returns the exactly hermitized matrix (M + M^H)/2.
fn hermitize(m: DMatrix<Complex<f64>>) -> Result<DMatrix<Complex<f64>>> {
    let scale = max_abs(&m).max(1.0);
    let adjoint = m.adjoint();
    let max_dev = max_abs(&(&m - &adjoint));
    if max_dev > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            max_dev,
            tol: HERMITIAN_TOL,
        });
    }
    Ok((m + adjoint) * Complex::new(0.5, 0.0))
}

impl SpdMatrix {
    /// Validates squareness, Hermitian symmetry, and positive definiteness
    /// (via Cholesky). The stored entries are exactly hermitized.
    pub fn new(entries: DMatrix<Complex<f64>>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                left: entries.nrows(),
                right: entries.ncols(),
            });
        }
        let entries = hermitize(entries)?;
        let min_eig = entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { entries })
    }

    /// Wraps a real symmetric matrix.
    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex::new(x, 0.0)))
    }

    /// Skips the PD check for matrices positive definite by construction
    /// (e.g. L + gamma*I with gamma > 0, or exp of a Hermitian matrix).
    /// Still hermitizes, so the symmetry invariant holds.
    pub(crate) fn from_hermitian_unchecked(entries: DMatrix<Complex<f64>>) -> Result<Self> {
        Ok(Self {
            entries: hermitize(entries)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<f64>> {
        &self.entries
    }

    /// Principal matrix logarithm via Hermitian eigendecomposition:
    /// S = U diag(w) U^H  ->  log S = U diag(ln w) U^H.
    pub fn log(&self) -> Result<LogMatrix> {
        let eig = self.entries.clone().symmetric_eigen();
        for &w in eig.eigenvalues.iter() {
            if w <= 0.0 {
                return Err(Error::NonPositiveEigenvalue(w));
            }
        }
        let log_vals = eig.eigenvalues.map(f64::ln);
        let rec = rebuild(&eig.eigenvectors, &log_vals);
        Ok(LogMatrix {
            entries: hermitize(rec)?,
        })
    }

    /// Hermitian square root S^{1/2}.
    pub fn sqrt(&self) -> Result<SpdMatrix> {
        let eig = self.entries.clone().symmetric_eigen();
        for &w in eig.eigenvalues.iter() {
            if w <= 0.0 {
                return Err(Error::NonPositiveEigenvalue(w));
            }
        }
        let sqrt_vals = eig.eigenvalues.map(f64::sqrt);
        SpdMatrix::from_hermitian_unchecked(rebuild(&eig.eigenvectors, &sqrt_vals))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut w: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect();
        w.sort_by(f64::total_cmp);
        w
    }
}

fn rebuild(vectors: &DMatrix<Complex<f64>>, values: &DVector<f64>) -> DMatrix<Complex<f64>> {
    let mut scaled = vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex::new(values[j], 0.0);
    }
    scaled * vectors.adjoint()
}

impl LogMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex<f64>> {
        &self.entries
    }

    /// Matrix exponential; inverse of [`SpdMatrix::log`].
    pub fn exp(&self) -> SpdMatrix {
        let eig = self.entries.clone().symmetric_eigen();
        let exp_vals = eig.eigenvalues.map(f64::exp);
        SpdMatrix::from_hermitian_unchecked(rebuild(&eig.eigenvectors, &exp_vals))
            .expect("exp of a Hermitian matrix is Hermitian")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Vectorization for the real symmetric case: diagonal entries as-is,
    /// each upper-triangle entry scaled by sqrt(2). Length d(d+1)/2.
    /// Rejects matrices with non-negligible imaginary parts.
    pub fn vectorize_symmetric(&self) -> Result<TangentVector> {
        let max_imag = self
            .entries
            .iter()
            .map(|c| c.im.abs())
            .fold(0.0, f64::max);
        let scale = max_abs(&self.entries).max(1.0);
        if max_imag > HERMITIAN_TOL * scale {
            return Err(Error::NotRealSymmetric(max_imag));
        }
        let d = self.dim();
        let mut v = Vec::with_capacity(d * (d + 1) / 2);
        let sqrt2 = std::f64::consts::SQRT_2;
        // Row-major upper triangle: [[a,b],[b,c]] -> (a, sqrt2*b, c).
        for i in 0..d {
            for j in i..d {
                if i == j {
                    v.push(self.entries[(i, i)].re);
                } else {
                    v.push(sqrt2 * self.entries[(i, j)].re);
                }
            }
        }
        Ok(TangentVector(DVector::from_vec(v)))
    }

    /// Vectorization for the Hermitian case: diagonal (real) as-is, real
    /// and imaginary parts of each upper-triangle entry scaled by sqrt(2).
    /// Length d^2.
    pub fn vectorize_hermitian(&self) -> TangentVector {
        let d = self.dim();
        let mut v = Vec::with_capacity(d * d);
        let sqrt2 = std::f64::consts::SQRT_2;
        for i in 0..d {
            for j in i..d {
                if i == j {
                    v.push(self.entries[(i, i)].re);
                } else {
                    v.push(sqrt2 * self.entries[(i, j)].re);
                    v.push(sqrt2 * self.entries[(i, j)].im);
                }
            }
        }
        TangentVector(DVector::from_vec(v))
    }
}

impl TangentVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// Squared Frobenius norm of log(s1) - log(s2).
///
/// Kept squared deliberately: symmetry and identity hold as stated, while
/// the triangle inequality applies to the square root.
pub fn lem_distance(s1: &SpdMatrix, s2: &SpdMatrix) -> Result<f64> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            left: s1.dim(),
            right: s2.dim(),
        });
    }
    let diff = s1.log()?.entries - s2.log()?.entries;
    Ok(diff.iter().map(|c| c.norm_sqr()).sum())
}

/// [`lem_distance`] against a pre-computed logarithm, for callers that
/// compare many matrices to one fixed baseline. Bit-identical to the
/// two-argument form.
pub fn lem_distance_from_log(baseline_log: &LogMatrix, s: &SpdMatrix) -> Result<f64> {
    if baseline_log.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            left: baseline_log.dim(),
            right: s.dim(),
        });
    }
    let diff = s.log()?.entries - &baseline_log.entries;
    Ok(diff.iter().map(|c| c.norm_sqr()).sum())
}

/// exp of the arithmetic mean of matrix logs.
pub fn log_euclidean_mean(matrices: &[SpdMatrix]) -> Result<SpdMatrix> {
    let first = matrices.first().ok_or(Error::EmptyMatrixList)?;
    let dim = first.dim();
    let mut acc = DMatrix::<Complex<f64>>::zeros(dim, dim);
    for m in matrices {
        if m.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: m.dim(),
            });
        }
        acc += &m.log()?.entries;
    }
    acc /= Complex::new(matrices.len() as f64, 0.0);
    Ok(LogMatrix { entries: acc }.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn real(m: &DMatrix<f64>) -> SpdMatrix {
        SpdMatrix::from_real(m).unwrap()
    }

    fn diag(values: &[f64]) -> SpdMatrix {
        real(&DMatrix::from_diagonal(&DVector::from_row_slice(values)))
    }

    #[test]
    fn log_of_identity_is_zero() {
        let s = diag(&[1.0, 1.0, 1.0]);
        assert!(s.log().unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn log_of_diagonal_is_elementwise() {
        let e = std::f64::consts::E;
        let l = diag(&[e, e * e]).log().unwrap();
        assert_relative_eq!(l.entries()[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_relative_eq!(l.entries()[(1, 1)].re, 2.0, epsilon = 1e-12);
        assert!(l.entries()[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn log_matches_hand_eigendecomposition() {
        // [[1,-0.5],[-0.5,1]] has eigenpairs (1.5, (1,-1)/sqrt2), (0.5, (1,1)/sqrt2),
        // so log = [[ln(0.75)/2, -ln(3)/2], [-ln(3)/2, ln(0.75)/2]].
        let s = real(&DMatrix::from_row_slice(2, 2, &[1.0, -0.5, -0.5, 1.0]));
        let l = s.log().unwrap();
        let diag_expected = 0.75f64.ln() / 2.0;
        let off_expected = -(3.0f64.ln()) / 2.0;
        assert_relative_eq!(l.entries()[(0, 0)].re, diag_expected, epsilon = 1e-12);
        assert_relative_eq!(l.entries()[(1, 1)].re, diag_expected, epsilon = 1e-12);
        assert_relative_eq!(l.entries()[(0, 1)].re, off_expected, epsilon = 1e-12);
        assert_relative_eq!(l.entries()[(1, 0)].re, off_expected, epsilon = 1e-12);
    }

    #[test]
    fn spd_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.2, 1.0]);
        assert!(matches!(
            SpdMatrix::from_real(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn spd_rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            SpdMatrix::from_real(&m),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn distance_to_self_is_zero() {
        let s = real(&DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]));
        assert_eq!(lem_distance(&s, &s).unwrap(), 0.0);
    }

    #[test]
    fn distance_diagonal_case() {
        let e = std::f64::consts::E;
        let d = lem_distance(&diag(&[1.0, e]), &diag(&[1.0, 1.0])).unwrap();
        assert_relative_eq!(d, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn distance_between_scalar_matrices() {
        for n in [2usize, 3, 5] {
            let two = diag(&vec![2.0; n]);
            let one = diag(&vec![1.0; n]);
            let expected = n as f64 * 2.0f64.ln().powi(2);
            assert_relative_eq!(lem_distance(&two, &one).unwrap(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn distance_rejects_dimension_mismatch() {
        let a = diag(&[1.0, 2.0]);
        let b = diag(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            lem_distance(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn symmetric_vectorization_layout() {
        let l = real(&DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]))
            .log()
            .unwrap();
        let v = l.vectorize_symmetric().unwrap();
        assert_eq!(v.len(), 3);
        let a = l.entries()[(0, 0)].re;
        let b = l.entries()[(0, 1)].re;
        let c = l.entries()[(1, 1)].re;
        // layout (a, sqrt2*b, c)
        assert_eq!(v.0[0], a);
        assert_eq!(v.0[1], std::f64::consts::SQRT_2 * b);
        assert_eq!(v.0[2], c);
        assert_relative_eq!(v.norm(), l.frobenius_norm(), epsilon = 1e-12);
    }

    #[test]
    fn zero_matrix_vectorizes_to_zero() {
        let l = diag(&[1.0, 1.0]).log().unwrap();
        assert!(l.vectorize_symmetric().unwrap().norm() < 1e-14);
        assert!(l.vectorize_hermitian().norm() < 1e-14);
    }

    #[test]
    fn hermitian_vectorization_is_isometric() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(2.0, 0.0),
                Complex::new(0.3, 0.4),
                Complex::new(0.3, -0.4),
                Complex::new(1.5, 0.0),
            ],
        );
        let l = SpdMatrix::new(m).unwrap().log().unwrap();
        let v = l.vectorize_hermitian();
        assert_eq!(v.len(), 4);
        assert_relative_eq!(v.norm(), l.frobenius_norm(), epsilon = 1e-12);
    }

    #[test]
    fn mean_of_singleton_reproduces_input() {
        let s = real(&DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]));
        let m = log_euclidean_mean(std::slice::from_ref(&s)).unwrap();
        let err = (m.entries() - s.entries()).map(|c| c.norm()).max();
        assert!(err < 1e-8 * 2.0);
    }

    #[test]
    fn mean_of_diagonal_pair() {
        let e = std::f64::consts::E;
        let m = log_euclidean_mean(&[diag(&[e * e, 1.0]), diag(&[1.0, e * e])]).unwrap();
        assert_relative_eq!(m.entries()[(0, 0)].re, e, epsilon = 1e-10);
        assert_relative_eq!(m.entries()[(1, 1)].re, e, epsilon = 1e-10);
        assert!(m.entries()[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn mean_of_matrix_and_inverse_is_identity() {
        let s = real(&DMatrix::from_row_slice(
            3,
            3,
            &[4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0],
        ));
        let inv = SpdMatrix::new(s.entries().clone().try_inverse().unwrap()).unwrap();
        let m = log_euclidean_mean(&[s, inv]).unwrap();
        let eye = DMatrix::<Complex<f64>>::identity(3, 3);
        let err = (m.entries() - eye).map(|c| c.norm()).max();
        assert!(err < 1e-10, "deviation from identity {err}");
    }

    #[test]
    fn mean_rejects_empty_list() {
        assert!(matches!(
            log_euclidean_mean(&[]),
            Err(Error::EmptyMatrixList)
        ));
    }

    #[test]
    fn exp_log_round_trip() {
        let s = real(&DMatrix::from_row_slice(
            3,
            3,
            &[5.0, 1.0, 0.3, 1.0, 4.0, 0.7, 0.3, 0.7, 3.0],
        ));
        let back = s.log().unwrap().exp();
        let rel = (back.entries() - s.entries()).map(|c| c.norm()).max()
            / s.entries().map(|c| c.norm()).max();
        assert!(rel < 1e-12);
    }
}
