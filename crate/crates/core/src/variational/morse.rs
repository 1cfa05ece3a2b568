//! Relative Morse index of `A − sB` by eigenvalue tracking.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symcore::jacobi::jacobi_eigen;
use crate::symcore::signature::{symmetric_eigenvalues, symmetry_residual};

/// Tracks and index of the family `A − sB`, `s ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeMorse {
    /// Crossing count: a track contributes +1 when it leaves the zero band
    /// downward (or jumps from nonnegative to negative), −1 for the reverse.
    pub index: i64,
    /// `m⁻(A − B) − m⁻(A)`.
    pub oracle: i64,
    /// `grid + 1` rows of ascending eigenvalues; sorted eigenvalues are
    /// continuous in `s`, so row-wise sorting is the tracking.
    pub tracks: Vec<Vec<f64>>,
    /// Largest increase of any track between grid points.
    pub max_uphill: f64,
}

fn check_square_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!("{what} must be square")));
    }
    let r = symmetry_residual(m);
    let limit = 1e-12 * m.amax().max(1.0);
    if r > limit {
        return Err(Error::NotSymmetric { residual: r, limit });
    }
    Ok(())
}

fn m_minus(eig: &[f64], band: f64) -> i64 {
    eig.iter().filter(|&&x| x < -band).count() as i64
}

/// `I(A, A − B)` on a uniform grid of `grid` steps.
pub fn relative_morse(a: &DMatrix<f64>, b: &DMatrix<f64>, grid: usize, zero_tol: f64) -> Result<RelativeMorse> {
    check_square_symmetric(a, "A")?;
    check_square_symmetric(b, "B")?;
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    if grid == 0 {
        return Err(Error::InvalidInput("grid must be positive".into()));
    }
    let scale = a.amax().max(b.amax()).max(1.0);
    let band = zero_tol * scale;
    let tracks: Vec<Vec<f64>> = (0..=grid)
        .map(|i| {
            let s = i as f64 / grid as f64;
            symmetric_eigenvalues(&(a - b * s))
        })
        .collect();
    for (s, row) in [(0.0, &tracks[0]), (1.0, &tracks[grid])] {
        if row.iter().any(|x| x.abs() <= band) {
            return Err(Error::DegenerateEndpoint { s });
        }
    }
    let mut index = 0i64;
    let mut max_uphill = 0.0f64;
    for w in tracks.windows(2) {
        for (x0, x1) in w[0].iter().zip(&w[1]) {
            max_uphill = max_uphill.max(x1 - x0);
            let before_neg = *x0 < -band;
            let after_neg = *x1 < -band;
            if !before_neg && after_neg {
                index += 1;
            } else if before_neg && !after_neg {
                index -= 1;
            }
        }
    }
    let oracle = m_minus(&tracks[grid], band) - m_minus(&tracks[0], band);
    Ok(RelativeMorse {
        index,
        oracle,
        tracks,
        max_uphill,
    })
}

/// For `s` with `ker(A − sB) ≠ 0`, the largest of `‖Av‖`, `‖Bv‖` over an
/// orthonormal kernel basis; zero exactly when the kernel lies in `ker A ∩ ker B`.
pub fn kernel_defect(a: &DMatrix<f64>, b: &DMatrix<f64>, s: f64, zero_tol: f64) -> f64 {
    let m = a - b * s;
    let eig = jacobi_eigen(&m);
    let band = zero_tol * m.amax().max(1.0);
    let mut worst = 0.0f64;
    for (i, &l) in eig.values.iter().enumerate() {
        if l.abs() <= band {
            let v = eig.vectors.column(i);
            worst = worst.max((a * v).norm()).max((b * v).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
        let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        (&g + g.transpose()) * 0.5
    }

    #[test]
    fn scalar_cases() {
        let a = DMatrix::from_element(1, 1, 1.0);
        let r = relative_morse(&a, &DMatrix::from_element(1, 1, 2.0), 100, 1e-12).unwrap();
        assert_eq!(r.index, 1);
        let r = relative_morse(&a, &DMatrix::zeros(1, 1), 10, 1e-12).unwrap();
        assert_eq!(r.index, 0);
        assert!(matches!(
            relative_morse(&a, &DMatrix::from_element(1, 1, 1.0), 10, 1e-12),
            Err(Error::DegenerateEndpoint { s }) if s == 1.0
        ));
    }

    #[test]
    fn random_semipositive_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let n = 10;
            let a = random_sym(&mut rng, n);
            let g = DMatrix::from_fn(n, 3, |_, _| rng.random_range(-1.0..1.0));
            let b = &g * g.transpose();
            let r = relative_morse(&a, &b, 200, 1e-12).unwrap();
            assert_eq!(r.index, r.oracle);
            assert!(r.max_uphill <= 1e-9);
        }
    }

    #[test]
    fn kernel_constancy() {
        // A and B share a kernel vector e₃; ker(A − sB) = span e₃ for generic s.
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -2.0, 0.0]));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 0.0]));
        assert!(kernel_defect(&a, &b, 0.1, 1e-12) < 1e-12);
        assert!(kernel_defect(&a, &b, 0.6, 1e-12) < 1e-12);
        // At s = 1/3 the kernel jumps and picks up e₁ ∉ ker A.
        assert!(kernel_defect(&a, &b, 1.0 / 3.0, 1e-12) > 0.5);
    }
}
