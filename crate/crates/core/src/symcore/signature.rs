//! Inertia of symmetric and Hermitian forms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::jacobi::jacobi_eigenvalues;
use crate::error::{Error, Result};

/// Morse positive index, nullity and Morse negative index of a form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureTriple {
    pub m_plus: usize,
    pub m_zero: usize,
    pub m_minus: usize,
    pub eigenvalues: Vec<f64>,
}

impl SignatureTriple {
    /// Classifies eigenvalues against an absolute zero band.
    pub fn from_eigenvalues(eigenvalues: Vec<f64>, zero_tol: f64) -> Self {
        let mut s = SignatureTriple {
            m_plus: 0,
            m_zero: 0,
            m_minus: 0,
            eigenvalues,
        };
        for &l in &s.eigenvalues {
            if l > zero_tol {
                s.m_plus += 1;
            } else if l < -zero_tol {
                s.m_minus += 1;
            } else {
                s.m_zero += 1;
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.m_plus + self.m_zero + self.m_minus
    }

    /// `[p, z, m]`, the layout used in reports.
    pub fn counts(&self) -> [usize; 3] {
        [self.m_plus, self.m_zero, self.m_minus]
    }
}

/// Largest entrywise deviation from symmetry.
pub fn symmetry_residual(s: &DMatrix<f64>) -> f64 {
    (s - s.transpose()).amax()
}

/// Largest entrywise deviation from being Hermitian.
pub fn hermitian_residual(h: &DMatrix<Complex64>) -> f64 {
    (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Signature of a real symmetric matrix.
pub fn signature(s: &DMatrix<f64>, zero_tol: f64) -> Result<SignatureTriple> {
    check_square(s.nrows(), s.ncols())?;
    let residual = symmetry_residual(s);
    if residual > 10.0 * zero_tol {
        return Err(Error::NotSymmetric {
            residual,
            limit: 10.0 * zero_tol,
        });
    }
    Ok(SignatureTriple::from_eigenvalues(
        symmetric_eigenvalues(s),
        zero_tol,
    ))
}

/// Signature of a complex Hermitian matrix.
pub fn signature_hermitian(h: &DMatrix<Complex64>, zero_tol: f64) -> Result<SignatureTriple> {
    check_square(h.nrows(), h.ncols())?;
    let residual = hermitian_residual(h);
    if residual > 10.0 * zero_tol {
        return Err(Error::NotSymmetric {
            residual,
            limit: 10.0 * zero_tol,
        });
    }
    Ok(SignatureTriple::from_eigenvalues(
        hermitian_eigenvalues(h),
        zero_tol,
    ))
}

/// Eigenvalues of the symmetric part, ascending.
pub fn symmetric_eigenvalues(s: &DMatrix<f64>) -> Vec<f64> {
    let sym = (s + s.transpose()) * 0.5;
    jacobi_eigenvalues(&sym)
}

/// Eigenvalues of the Hermitian part, ascending.
///
/// Uses the real embedding `[[X, −Y], [Y, X]]` of `X + iY`, whose spectrum is
/// that of the Hermitian matrix with every multiplicity doubled.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let k = h.nrows();
    let herm = (h + h.adjoint()).map(|z| z * 0.5);
    let emb = real_embedding(&herm);
    let doubled = jacobi_eigenvalues(&emb);
    // Pairs are adjacent after sorting; keep one of each.
    (0..k).map(|i| 0.5 * (doubled[2 * i] + doubled[2 * i + 1])).collect()
}

/// Real `2k × 2k` embedding of a complex `k × k` matrix.
pub fn real_embedding(h: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (r, c) = h.shape();
    let mut out = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let z = h[(i, j)];
            out[(i, j)] = z.re;
            out[(i, j + c)] = -z.im;
            out[(i + r, j)] = z.im;
            out[(i + r, j + c)] = z.re;
        }
    }
    out
}

fn check_square(r: usize, c: usize) -> Result<()> {
    if r != c {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: c,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn diagonal_signature() {
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, 0.0]));
        let t = signature(&s, 1e-9).unwrap();
        assert_eq!(t.counts(), [1, 1, 1]);
    }

    #[test]
    fn zero_signature() {
        let t = signature(&DMatrix::zeros(4, 4), 1e-9).unwrap();
        assert_eq!(t.counts(), [0, 4, 0]);
    }

    #[test]
    fn positive_definite_two_by_two() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 2.0]);
        let t = signature(&s, 1e-9).unwrap();
        assert_eq!(t.counts(), [2, 0, 0]);
        let r5 = 5f64.sqrt();
        assert!((t.eigenvalues[0] - (3.0 - r5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let s = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            signature(&s, 1e-9),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn hermitian_pauli_y() {
        let i = Complex64::new(0.0, 1.0);
        let h = DMatrix::from_row_slice(2, 2, &[Complex64::new(0.0, 0.0), -i, i, Complex64::new(0.0, 0.0)]);
        let t = signature_hermitian(&h, 1e-9).unwrap();
        assert_eq!(t.counts(), [1, 0, 1]);
        assert!((t.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((t.eigenvalues[1] - 1.0).abs() < 1e-14);
    }
}
