//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use nalgebra::{ComplexField, DMatrix, DVector};

/// Convergence threshold on the off-diagonal Frobenius mass, relative to the
/// Frobenius norm of the input.
pub const JACOBI_THRESHOLD: f64 = 1e-13;
const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition `A = V diag(values) Vᵀ` with eigenvalues sorted ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

/// Diagonalizes the symmetric part of `a` by cyclic Jacobi rotations.
///
/// Only the upper triangle is read. The rotation angle follows the stable
/// `t = sgn(θ)/(|θ| + √(θ²+1))` form so small pivots do not lose accuracy.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> SymmetricEigen {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "jacobi_eigen needs a square matrix");
    let mut m = DMatrix::from_fn(n, n, |i, j| if i <= j { a[(i, j)] } else { a[(j, i)] });
    let mut v = DMatrix::<f64>::identity(n, n);

    let total = m.norm();
    let target = JACOBI_THRESHOLD * total;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= target || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)]));
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    SymmetricEigen { values, vectors }
}

/// Eigenvalues only, ascending.
pub fn jacobi_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    jacobi_eigen(a).values.iter().copied().collect()
}

// Applies the rotation Gᵀ M G in the (p, q) plane and accumulates V ← V G.
fn rotate(m: &mut DMatrix<f64>, v: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = m.nrows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Thin singular value decomposition `A = U Σ Vᴴ` with `V` square.
#[derive(Debug, Clone)]
pub struct Svd<T: ComplexField<RealField = f64>> {
    /// Descending.
    pub values: Vec<f64>,
    /// `m × ncols` left vectors; columns for zero singular values are zero.
    pub u: DMatrix<T>,
    /// `ncols × ncols` unitary.
    pub v: DMatrix<T>,
}

/// One-sided (Hestenes) Jacobi SVD. Slower than bidiagonalization but
/// accurate on exactly rank-deficient inputs, which the kernel and
/// intersection computations rely on.
pub fn jacobi_svd<T: ComplexField<RealField = f64>>(a: &DMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = DMatrix::<T>::identity(n, n);
    // columns below this squared norm are zero to working precision
    let negligible = (f64::EPSILON * a.norm()).powi(2);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w.column(p).norm_squared();
                let beta: f64 = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.clone().modulus();
                if g == 0.0 || alpha <= negligible || beta <= negligible || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma.unscale(g);
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for r in 0..mat.nrows() {
                        let xp = mat[(r, p)].clone();
                        let xq = mat[(r, q)].clone() * phase.clone().conjugate();
                        mat[(r, p)] = xp.clone().scale(c) - xq.clone().scale(s);
                        mat[(r, q)] = (xp.scale(s) + xq.scale(c)) * phase.clone();
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = DMatrix::from_fn(m, n, |r, k| {
        let j = order[k];
        if norms[j] > 0.0 {
            w[(r, j)].clone().unscale(norms[j])
        } else {
            T::zero()
        }
    });
    let v = DMatrix::from_fn(n, n, |r, k| v[(r, order[k])].clone());
    Svd { values, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let e = jacobi_eigenvalues(&a);
        assert_eq!(e, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_matches_closed_form() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 2.0]);
        let e = jacobi_eigenvalues(&a);
        let r5 = 5f64.sqrt();
        assert!((e[0] - (3.0 - r5) / 2.0).abs() < 1e-14);
        assert!((e[1] - (3.0 + r5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_a_dense_matrix() {
        #[rustfmt::skip]
        let a = DMatrix::from_row_slice(5, 5, &[
            1.0, 2.0, 3.0, 4.0, 5.0,
            2.0, 3.0, 0.0, 2.0, 4.0,
            3.0, 0.0, 2.0, 1.0, 3.0,
            4.0, 2.0, 1.0, 1.0, 2.0,
            5.0, 4.0, 3.0, 2.0, 1.0,
        ]);
        let e = jacobi_eigen(&a);
        let rebuilt = &e.vectors * DMatrix::from_diagonal(&e.values) * e.vectors.transpose();
        assert!((rebuilt - &a).amax() < 1e-12);
        let orth = e.vectors.transpose() * &e.vectors - DMatrix::identity(5, 5);
        assert!(orth.amax() < 1e-13);
        assert!((e.values[4] - 1.244545682971212e1).abs() < 1e-11);
        assert!((e.values[0] - (-4.861158430649138)).abs() < 1e-11);
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let e = jacobi_eigenvalues(&DMatrix::zeros(4, 4));
        assert!(e.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn svd_of_rank_deficient_matrix_reconstructs() {
        use num_complex::Complex64;
        let mut a = DMatrix::<f64>::zeros(8, 8);
        for i in 0..4 {
            a[(i, 4 + i)] = 1.0;
            a[(4 + i, 4 + i)] = 1.0;
        }
        for i in 0..2 {
            a[(i, i)] = -1.0;
            a[(4 + i, 2 + i)] = -1.0;
        }
        let svd = jacobi_svd(&a);
        let sig = DMatrix::from_diagonal(&DVector::from_vec(svd.values.clone()));
        let recon = &svd.u * sig * svd.v.transpose();
        assert!((recon - &a).amax() < 1e-14);
        assert_eq!(svd.values.iter().filter(|&&x| x < 1e-12).count(), 2);

        let z = a.map(|x| Complex64::new(x, 0.5 * x));
        let svd = jacobi_svd(&z);
        let sig = DMatrix::from_diagonal(&DVector::from_vec(svd.values.clone())).map(|x| Complex64::new(x, 0.0));
        let recon = &svd.u * sig * svd.v.adjoint();
        assert!((recon - &z).iter().all(|e| e.norm() < 1e-13));
        let vv = svd.v.adjoint() * &svd.v - DMatrix::<Complex64>::identity(8, 8);
        assert!(vv.iter().all(|e| e.norm() < 1e-13));
    }

    #[test]
    fn svd_of_wide_matrix() {
        let a = DMatrix::from_row_slice(2, 3, &[3.0, 0.0, 4.0, 0.0, 2.0, 0.0]);
        let svd = jacobi_svd(&a);
        assert!((svd.values[0] - 5.0).abs() < 1e-14);
        assert!((svd.values[1] - 2.0).abs() < 1e-14);
        assert!(svd.values[2] < 1e-14);
        let k = svd.v.column(2);
        assert!((&a * k).amax() < 1e-14);
    }
}
