//! Rank, kernel and span computations on small dense matrices.
//!
//! Everything goes through the one-sided Jacobi SVD, which always returns a
//! full set of right singular vectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::jacobi::jacobi_svd;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Full right-singular basis: singular values (descending, padded with zeros
/// up to the column count) and `V` whose columns pair with them.
pub fn right_singular_c(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let svd = jacobi_svd(a);
    (svd.values, svd.v)
}

/// Real counterpart of [`right_singular_c`].
pub fn right_singular(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let svd = jacobi_svd(a);
    (svd.values, svd.v)
}

/// Singular values in descending order, without vectors.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    jacobi_svd(a).values
}

/// Number of singular values above `rel_tol · σ_max`.
pub fn numerical_rank(sv: &[f64], rel_tol: f64) -> usize {
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Orthonormal basis of the kernel, rank decided relative to `σ_max`.
pub fn null_space_c(a: &CMatrix, rel_tol: f64) -> CMatrix {
    let (sv, v) = right_singular_c(a);
    let rank = numerical_rank(&sv, rel_tol);
    v.columns(rank, v.ncols() - rank).into_owned()
}

/// Orthonormal kernel basis using an absolute singular-value cutoff.
pub fn null_space_abs_c(a: &CMatrix, abs_tol: f64) -> CMatrix {
    let (sv, v) = right_singular_c(a);
    let rank = sv.iter().filter(|&&s| s > abs_tol).count();
    v.columns(rank, v.ncols() - rank).into_owned()
}

/// Orthonormal basis of the column span.
pub fn column_space_c(a: &CMatrix, rel_tol: f64) -> CMatrix {
    if a.ncols() == 0 {
        return CMatrix::zeros(a.nrows(), 0);
    }
    let svd = jacobi_svd(a);
    let rank = numerical_rank(&svd.values, rel_tol).min(a.nrows());
    svd.u.columns(0, rank).into_owned()
}

/// Minimum-norm least-squares solution of `a x = b`.
pub fn least_squares_c(a: &CMatrix, b: &CMatrix, rel_tol: f64) -> CMatrix {
    let svd = jacobi_svd(a);
    let rank = numerical_rank(&svd.values, rel_tol);
    let u = svd.u.columns(0, rank);
    let v = svd.v.columns(0, rank);
    let mut coeff = u.adjoint() * b;
    for (i, mut row) in coeff.row_iter_mut().enumerate() {
        row /= c(svd.values[i], 0.0);
    }
    v * coeff
}

/// Horizontal concatenation.
pub fn hstack_c(parts: &[&CMatrix]) -> CMatrix {
    let rows = parts[0].nrows();
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        assert_eq!(p.nrows(), rows);
        out.view_mut((0, at), (rows, p.ncols())).copy_from(p);
        at += p.ncols();
    }
    out
}

/// Vertical concatenation.
pub fn vstack_c(parts: &[&CMatrix]) -> CMatrix {
    let cols = parts[0].ncols();
    let rows: usize = parts.iter().map(|p| p.nrows()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for p in parts {
        assert_eq!(p.ncols(), cols);
        out.view_mut((at, 0), (p.nrows(), cols)).copy_from(p);
        at += p.nrows();
    }
    out
}

/// Spectral norm.
pub fn op_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    singular_values(a)[0]
}

/// Orthonormal basis of `span(a) ∩ span(b)`.
pub fn subspace_intersection(a: &CMatrix, b: &CMatrix, rel_tol: f64) -> CMatrix {
    let qa = column_space_c(a, rel_tol);
    let qb = column_space_c(b, rel_tol);
    if qa.ncols() == 0 || qb.ncols() == 0 {
        return CMatrix::zeros(a.nrows(), 0);
    }
    let stacked = hstack_c(&[&qa, &(-&qb)]);
    let ker = null_space_c(&stacked, rel_tol);
    let coeff = ker.rows(0, qa.ncols()).into_owned();
    let vectors = &qa * coeff;
    column_space_c(&vectors, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_matrix_kernel_has_expected_dimension() {
        let a = complexify(&DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]));
        let k = null_space_c(&a, 1e-10);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn intersection_of_two_planes_is_a_line() {
        let a = complexify(&DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]));
        let b = complexify(&DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]));
        let i = subspace_intersection(&a, &b, 1e-10);
        assert_eq!(i.ncols(), 1);
        assert!((i[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn least_squares_is_minimum_norm() {
        let a = complexify(&DMatrix::from_row_slice(1, 2, &[1.0, 1.0]));
        let b = complexify(&DMatrix::from_row_slice(1, 1, &[2.0]));
        let x = least_squares_c(&a, &b, 1e-12);
        assert!((x[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((x[(1, 0)].re - 1.0).abs() < 1e-14);
    }
}
