//! Conjugate points of the `L0` problem and the convexifying shift.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{maslov, BoundarySpec};
use crate::matrizant::{matrizant, CoefficientPath};
use crate::symcore::signature::symmetric_eigenvalues;
use crate::symcore::Tolerances;

/// Interior instants with `γ(s)L₀ ∩ L₀ ≠ 0` and their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugatePoints {
    pub points: Vec<(f64, usize)>,
    pub sum: usize,
}

fn sample_times(b: &CoefficientPath, count: usize) -> Vec<f64> {
    let mut t: Vec<f64> = (0..=count).map(|i| b.tau() * i as f64 / count as f64).collect();
    t.extend(b.breakpoints());
    t
}

fn lower_block(m: &DMatrix<f64>, n: usize) -> DMatrix<f64> {
    m.view((n, n), (n, n)).into_owned()
}

/// Conjugate points of `B` on `(0, τ)`, located by the `L0` crossing scan.
pub fn conjugate_points(b: &CoefficientPath, steps: usize, tol: &Tolerances) -> Result<ConjugatePoints> {
    let n = b.n();
    for t in sample_times(b, 512) {
        let blk = lower_block(&b.at(t), n);
        if blk.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite { t });
        }
    }
    let g = matrizant(b, steps)?;
    let r = maslov(&g, &BoundarySpec::L0, tol)?;
    let points: Vec<(f64, usize)> = r
        .crossings
        .iter()
        .filter(|c| c.t > 0.0 && c.t < b.tau())
        .map(|c| (c.t, c.dim))
        .collect();
    let sum = points.iter().map(|p| p.1).sum();
    Ok(ConjugatePoints { points, sum })
}

/// Smallest margin-1 `λ ≥ 0` with `B(t) + diag(λI, 0)` positive definite:
/// `max_t λ_max(B₁₂B₂₂⁻¹B₂₁ − B₁₁) + 1`, clamped at zero.
pub fn convexifying_lambda(b: &CoefficientPath) -> Result<f64> {
    let n = b.n();
    let times = sample_times(b, 1000);
    let mut worst = f64::NEG_INFINITY;
    for &t in &times {
        let m = b.at(t);
        let d = lower_block(&m, n);
        let ch = d.cholesky().ok_or(Error::DBlockNotPositive { t })?;
        let a = m.view((0, 0), (n, n)).into_owned();
        let c = m.view((0, n), (n, n)).into_owned();
        let schur = &c * ch.solve(&c.transpose()) - a;
        let sym = (&schur + schur.transpose()) * 0.5;
        let top = *symmetric_eigenvalues(&sym).last().expect("n ≥ 1");
        worst = worst.max(top);
    }
    let lambda = (worst + 1.0).max(0.0);
    for &t in &times {
        let mut m = b.at(t);
        for k in 0..n {
            m[(k, k)] += lambda;
        }
        if m.cholesky().is_none() {
            return Err(Error::NotPositiveDefinite { t });
        }
    }
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rotation_conjugate_points() {
        let tol = Tolerances::default();
        let b = CoefficientPath::identity(1, 1.5 * PI).unwrap();
        let c = conjugate_points(&b, 2048, &tol).unwrap();
        assert_eq!(c.sum, 1);
        assert!((c.points[0].0 - PI).abs() < 1e-8);
        let b = CoefficientPath::identity(1, 0.5 * PI).unwrap();
        assert_eq!(conjugate_points(&b, 512, &tol).unwrap().sum, 0);
    }

    #[test]
    fn lambda_examples() {
        let b = CoefficientPath::constant(DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]), 1.0).unwrap();
        assert!((convexifying_lambda(&b).unwrap() - 1.0).abs() < 1e-14);
        let b = CoefficientPath::constant(DMatrix::from_row_slice(2, 2, &[-2.0, 1.0, 1.0, 1.0]), 1.0).unwrap();
        assert!((convexifying_lambda(&b).unwrap() - 4.0).abs() < 1e-14);
        let b = CoefficientPath::constant(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]), 1.0).unwrap();
        assert!(matches!(convexifying_lambda(&b), Err(Error::DBlockNotPositive { .. })));
        let b = CoefficientPath::constant(DMatrix::identity(2, 2) * 5.0, 1.0).unwrap();
        assert_eq!(convexifying_lambda(&b).unwrap(), 0.0);
    }
}
