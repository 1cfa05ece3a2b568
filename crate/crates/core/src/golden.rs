//! Reference cases with known exact answers, shared by the `selftest`
//! command and the acceptance suite.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::Result;
use crate::index::{maslov, triple_index, BoundarySpec};
use crate::iteration::{brake_iterate, tilde_shift};
use crate::matrizant::{matrizant, CoefficientPath, SymplecticPath};
use crate::symcore::linalg::{numerical_rank, singular_values};
use crate::symcore::symplectic::blocks;
use crate::symcore::{signature, LagrangianFrame, Tolerances};
use crate::variational::{j_pi_mode_matrix, pi_operator, FourierVector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenCheck {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl GoldenCheck {
    pub fn exact(name: impl Into<String>, expected: i64, actual: i64) -> Self {
        GoldenCheck {
            name: name.into(),
            expected: expected as f64,
            actual: actual as f64,
            tolerance: 0.0,
            passed: expected == actual,
        }
    }

    pub fn close(name: impl Into<String>, expected: f64, actual: f64, tolerance: f64) -> Self {
        GoldenCheck {
            name: name.into(),
            expected,
            actual,
            tolerance,
            passed: (expected - actual).abs() <= tolerance,
        }
    }
}

/// Constant `B = (π/2) P⁻ᵀP⁻¹` with `P = [[1, 1], [1, 0]]`, whose matrizant
/// ends at `[[1, −2], [1, −1]]` at `τ = 1`.
pub fn shear_path(steps: usize) -> Result<SymplecticPath> {
    let p = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 0.0]);
    let pinv = p.try_inverse().expect("P is invertible");
    let b = CoefficientPath::constant(pinv.transpose() * &pinv * (PI / 2.0), 1.0)?;
    matrizant(&b, steps)
}

/// Change of the doubled `L0` index under the half-period shift, from the
/// end-point formula and from crossings of the two doubled paths.
pub fn shear_shift_checks(tol: &Tolerances) -> Result<Vec<GoldenCheck>> {
    let g = shear_path(2048)?;
    let end = g.end().clone();
    let want = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 1.0, -1.0]);
    let mut out = vec![GoldenCheck::close("shear path end point", 0.0, (&end - want).amax(), 1e-9)];

    let n = g.n() as i64;
    let (a, b, c, d) = blocks(&end);
    let mut form = DMatrix::zeros(2 * g.n(), 2 * g.n());
    let k = g.n();
    form.view_mut((0, 0), (k, k)).copy_from(&(c.transpose() * &a));
    form.view_mut((0, k), (k, k)).copy_from(&(a.transpose() * &d));
    form.view_mut((k, 0), (k, k)).copy_from(&(d.transpose() * &a));
    form.view_mut((k, k), (k, k)).copy_from(&(d.transpose() * &b));
    let form = (&form + form.transpose()) * 0.5;
    let m_plus = signature(&form, tol.zero * form.amax().max(1.0))?.m_plus as i64;
    let kernel = |m: &DMatrix<f64>| (m.ncols() - numerical_rank(&singular_values(m), tol.rank)) as i64;
    let formula_index = n - m_plus - kernel(&a);
    let formula_sum = n - m_plus - kernel(&d);

    let g2 = brake_iterate(&g, 2)?;
    let t2 = brake_iterate(&tilde_shift(&g)?, 2)?;
    let r2 = maslov(&g2, &BoundarySpec::L0, tol)?;
    let rt = maslov(&t2, &BoundarySpec::L0, tol)?;
    out.push(GoldenCheck::exact("shifted L0 index change, end-point formula", -1, formula_index));
    out.push(GoldenCheck::exact("shifted L0 index change, crossings", -1, rt.index - r2.index));
    out.push(GoldenCheck::exact("shifted L0 index+nullity change, end-point formula", -1, formula_sum));
    out.push(GoldenCheck::exact(
        "shifted L0 index+nullity change, crossings",
        -1,
        rt.index_plus_nullity() - r2.index_plus_nullity(),
    ));
    Ok(out)
}

/// The three triple indices at the identity graph that equal `n`.
pub fn identity_triple_checks(n_max: usize, tol: &Tolerances) -> Result<Vec<GoldenCheck>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let id = LagrangianFrame::graph(&DMatrix::identity(2 * n, 2 * n))?;
        let a01 = LagrangianFrame::alpha_pair(0, 1, n);
        let a10 = LagrangianFrame::alpha_pair(1, 0, n);
        let t0 = LagrangianFrame::alpha_tilde(0, n);
        let t1 = LagrangianFrame::alpha_tilde(1, n);
        let cases = [
            ("L0xL1 against doubled L0", &a01, &t0),
            ("doubled L1 against doubled L0", &t1, &t0),
            ("L0xL1 against L1xL0", &a01, &a10),
        ];
        for (label, beta, delta) in cases {
            let got = triple_index(&id, beta, delta, tol)?;
            out.push(GoldenCheck::exact(format!("identity triple index, {label}, n = {n}"), n as i64, got));
        }
    }
    Ok(out)
}

/// `Π` on `sin(jt)e₁ + cos(jt)e₂` at `T = 2π`, and the `JΠ` eigenvalue `−1/j`.
pub fn pi_mode_checks(j_max: usize) -> Result<Vec<GoldenCheck>> {
    let mut out = Vec::new();
    let times: Vec<f64> = (0..64).map(|i| -PI + 2.0 * PI * i as f64 / 64.0).collect();
    for j in 1..=j_max {
        let mut sin = DMatrix::zeros(2, j);
        let mut cos = DMatrix::zeros(2, j);
        sin[(0, j - 1)] = 1.0;
        cos[(1, j - 1)] = 1.0;
        let u = FourierVector::from_coefficients(2.0 * PI, sin, cos)?;
        let pu = pi_operator(&u);
        let jf = j as f64;
        let err = times
            .iter()
            .map(|&t| {
                let want = DVector::from_vec(vec![-(jf * t).cos() / jf, (jf * t).sin() / jf]);
                (pu.eval(t) - want).amax()
            })
            .fold(0.0, f64::max);
        out.push(GoldenCheck::close(format!("Pi on mode {j}"), 0.0, err, 1e-14));
        let jpu = pu.apply_j();
        let eig_err = jpu.max_abs_diff(&u.apply_matrix(&(DMatrix::identity(2, 2) * (-1.0 / jf))));
        out.push(GoldenCheck::close(format!("J Pi eigenvalue on mode {j}"), 0.0, eig_err, 1e-14));
        let m = j_pi_mode_matrix(1, 2.0 * PI, j);
        let v = DVector::from_vec(vec![1.0, 0.0, 0.0, 1.0]);
        let rayleigh = v.dot(&(&m * &v)) / v.norm_squared();
        out.push(GoldenCheck::close(format!("J Pi mode matrix eigenvalue, j = {j}"), -1.0 / jf, rayleigh, 1e-14));
    }
    Ok(out)
}

/// All reference cases.
pub fn run_all(tol: &Tolerances) -> Result<Vec<GoldenCheck>> {
    let mut out = shear_shift_checks(tol)?;
    out.extend(identity_triple_checks(4, tol)?);
    out.extend(pi_mode_checks(8)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reference_cases_pass() {
        for check in run_all(&Tolerances::default()).unwrap() {
            assert!(check.passed, "{check:?}");
        }
    }
}
