//! Zero-mean trigonometric vectors on `[−T/2, T/2]` and the primitive `Π`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrizant::apply_j;
use crate::symcore::symplectic::j_matrix;

/// `u(t) = Σ_{j=1}^{J} sin(ωjt)·S_j + cos(ωjt)·C_j` with `ω = 2π/T`.
///
/// The brake-symmetric subspace (`u(−t) = Nu(t)`) has `S_j` supported on the
/// first `n` components and `C_j` on the last `n`; [`pi_operator`] and
/// [`derivative`] leave it, so the general form is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierVector {
    n: usize,
    period: f64,
    /// `2n × J`.
    sin: DMatrix<f64>,
    /// `2n × J`.
    cos: DMatrix<f64>,
}

impl FourierVector {
    pub fn zeros(n: usize, period: f64, modes: usize) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        Ok(FourierVector {
            n,
            period,
            sin: DMatrix::zeros(2 * n, modes),
            cos: DMatrix::zeros(2 * n, modes),
        })
    }

    pub fn from_coefficients(period: f64, sin: DMatrix<f64>, cos: DMatrix<f64>) -> Result<Self> {
        if sin.shape() != cos.shape() || sin.nrows() % 2 != 0 {
            return Err(Error::InvalidInput(
                "sine and cosine coefficients must share an even-row shape".into(),
            ));
        }
        let mut u = FourierVector::zeros(sin.nrows() / 2, period, sin.ncols())?;
        u.sin = sin;
        u.cos = cos;
        Ok(u)
    }

    /// Random element of the brake-symmetric subspace.
    pub fn random_brake<R: Rng + ?Sized>(rng: &mut R, n: usize, period: f64, modes: usize) -> Result<Self> {
        let mut u = FourierVector::zeros(n, period, modes)?;
        for j in 0..modes {
            for k in 0..n {
                u.sin[(k, j)] = rng.random_range(-1.0..1.0);
                u.cos[(n + k, j)] = rng.random_range(-1.0..1.0);
            }
        }
        Ok(u)
    }

    /// Unit vector of the brake basis: `sin(ωjt) e_k` for `k < n`,
    /// `cos(ωjt) e_k` for `k ≥ n`; `j` counts from 1.
    pub fn brake_basis(n: usize, period: f64, modes: usize, j: usize, k: usize) -> Result<Self> {
        if j == 0 || j > modes || k >= 2 * n {
            return Err(Error::InvalidInput(format!("no basis element ({j}, {k})")));
        }
        let mut u = FourierVector::zeros(n, period, modes)?;
        if k < n {
            u.sin[(k, j - 1)] = 1.0;
        } else {
            u.cos[(k, j - 1)] = 1.0;
        }
        Ok(u)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn modes(&self) -> usize {
        self.sin.ncols()
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn sin_coefficients(&self) -> &DMatrix<f64> {
        &self.sin
    }

    pub fn cos_coefficients(&self) -> &DMatrix<f64> {
        &self.cos
    }

    pub fn eval(&self, t: f64) -> DVector<f64> {
        let w = self.omega();
        let mut out = DVector::zeros(2 * self.n);
        for j in 0..self.modes() {
            let a = w * (j + 1) as f64 * t;
            out += self.sin.column(j) * a.sin() + self.cos.column(j) * a.cos();
        }
        out
    }

    /// Whether `u(−t) = Nu(t)` holds coefficient-wise within `tol`.
    pub fn is_brake(&self, tol: f64) -> bool {
        let n = self.n;
        self.sin.rows(n, n).amax() <= tol && self.cos.rows(0, n).amax() <= tol
    }

    /// `∫_{−T/2}^{T/2} (u, v) dt`.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.sin.shape(), other.sin.shape());
        0.5 * self.period * (self.sin.dot(&other.sin) + self.cos.dot(&other.cos))
    }

    pub fn apply_matrix(&self, m: &DMatrix<f64>) -> Self {
        FourierVector {
            n: self.n,
            period: self.period,
            sin: m * &self.sin,
            cos: m * &self.cos,
        }
    }

    pub fn apply_j(&self) -> Self {
        FourierVector {
            n: self.n,
            period: self.period,
            sin: apply_j(&self.sin),
            cos: apply_j(&self.cos),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.sin - &other.sin).amax().max((&self.cos - &other.cos).amax())
    }
}

/// The zero-mean primitive: `Π sin(ωjt) = −cos(ωjt)/(ωj)`, `Π cos(ωjt) = sin(ωjt)/(ωj)`.
pub fn pi_operator(u: &FourierVector) -> FourierVector {
    let w = u.omega();
    let mut out = u.clone();
    for j in 0..u.modes() {
        let f = 1.0 / (w * (j + 1) as f64);
        out.sin.set_column(j, &(u.cos.column(j) * f));
        out.cos.set_column(j, &(u.sin.column(j) * -f));
    }
    out
}

pub fn derivative(u: &FourierVector) -> FourierVector {
    let w = u.omega();
    let mut out = u.clone();
    for j in 0..u.modes() {
        let f = w * (j + 1) as f64;
        out.sin.set_column(j, &(u.cos.column(j) * -f));
        out.cos.set_column(j, &(u.sin.column(j) * f));
    }
    out
}

/// Matrix of `JΠ` acting on one mode's stacked `(S_j, C_j)` coefficients.
pub fn j_pi_mode_matrix(n: usize, period: f64, j: usize) -> DMatrix<f64> {
    let f = period / (2.0 * PI * j as f64);
    let jm = j_matrix(n);
    let mut m = DMatrix::zeros(4 * n, 4 * n);
    m.view_mut((0, 2 * n), (2 * n, 2 * n)).copy_from(&(&jm * f));
    m.view_mut((2 * n, 0), (2 * n, 2 * n)).copy_from(&(&jm * -f));
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pi_of_first_mode() {
        let mut u = FourierVector::zeros(1, 2.0 * PI, 1).unwrap();
        u.sin[(0, 0)] = 1.0;
        u.cos[(1, 0)] = 1.0;
        let p = pi_operator(&u);
        for &t in &[0.0f64, 0.3, 1.7, -2.2] {
            let want = DVector::from_vec(vec![-t.cos(), t.sin()]);
            assert!((p.eval(t) - want).amax() < 1e-15);
        }
        let jp = pi_operator(&u).apply_j();
        assert!(jp.max_abs_diff(&u.apply_matrix(&-DMatrix::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn derivative_inverts_pi() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = FourierVector::random_brake(&mut rng, 2, 3.3, 7).unwrap();
        assert!(derivative(&pi_operator(&u)).max_abs_diff(&u) < 1e-14);
        assert!(pi_operator(&derivative(&u)).max_abs_diff(&u) < 1e-14);
        assert!(u.is_brake(0.0));
        assert!(!pi_operator(&u).is_brake(1e-12));
    }

    #[test]
    fn inner_product_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = FourierVector::random_brake(&mut rng, 1, 2.0, 3).unwrap();
        let v = FourierVector::random_brake(&mut rng, 1, 2.0, 3).unwrap();
        let m = 2000;
        let h = 2.0 / m as f64;
        let quad: f64 = (0..m)
            .map(|i| {
                let t = -1.0 + (i as f64 + 0.5) * h;
                u.eval(t).dot(&v.eval(t)) * h
            })
            .sum();
        assert!((quad - u.inner(&v)).abs() < 1e-5);
    }

    #[test]
    fn mode_matrix_has_eigenvalue_minus_inverse_j() {
        for j in 1..=4 {
            let m = j_pi_mode_matrix(1, 2.0 * PI, j);
            let v = DVector::from_vec(vec![1.0, 0.0, 0.0, 1.0]);
            assert!((&m * &v + &v / j as f64).amax() < 1e-15);
        }
    }
}
