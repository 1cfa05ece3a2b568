//! Convex maps and their Fenchel conjugates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A `C²` strictly convex function on `ℝᵈ`.
pub trait ConvexMap {
    fn dim(&self) -> usize;
    fn value(&self, x: &DVector<f64>) -> f64;
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64>;
}

/// `½ xᵀQx` with `Q` positive definite.
#[derive(Debug, Clone)]
pub struct QuadraticMap {
    pub q: DMatrix<f64>,
}

impl ConvexMap for QuadraticMap {
    fn dim(&self) -> usize {
        self.q.nrows()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.q * x))
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.q * x
    }
    fn hessian(&self, _x: &DVector<f64>) -> DMatrix<f64> {
        self.q.clone()
    }
}

/// `(c/p) |x|ᵖ` with `p ≥ 2`.
#[derive(Debug, Clone)]
pub struct PowerMap {
    pub dim: usize,
    pub coeff: f64,
    pub power: f64,
}

impl ConvexMap for PowerMap {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        self.coeff / self.power * x.norm().powf(self.power)
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        x * (self.coeff * x.norm().powf(self.power - 2.0))
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let r = x.norm();
        let d = self.dim;
        if r == 0.0 {
            return if self.power == 2.0 {
                DMatrix::identity(d, d) * self.coeff
            } else {
                DMatrix::zeros(d, d)
            };
        }
        let base = self.coeff * r.powf(self.power - 2.0);
        let outer = x * x.transpose() * (self.coeff * (self.power - 2.0) * r.powf(self.power - 4.0));
        DMatrix::identity(d, d) * base + outer
    }
}

/// Result of a conjugate evaluation `F*(y) = x·y − F(x)` with `F'(x) = y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Conjugate {
    pub value: f64,
    pub maximizer: DVector<f64>,
    /// `‖F'(x) − y‖`.
    pub residual: f64,
    pub iterations: usize,
}

pub const FENCHEL_MAX_ITER: usize = 100;
pub const FENCHEL_TOL: f64 = 1e-12;

/// `F*(y) = sup_x {x·y − F(x)}` by damped Newton on `F'(x) = y` from `x = 0`.
///
/// Steps are halved until `F(x) − x·y` decreases; a Levenberg shift is added
/// when the Hessian is not numerically positive definite.
pub fn fenchel(f: &dyn ConvexMap, y: &DVector<f64>) -> Result<Conjugate> {
    let d = f.dim();
    if y.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: y.len(),
        });
    }
    let target = FENCHEL_TOL * y.norm().max(1.0);
    let objective = |x: &DVector<f64>| f.value(x) - x.dot(y);
    let mut x = DVector::zeros(d);
    let mut phi = objective(&x);
    for it in 0..FENCHEL_MAX_ITER {
        let g = f.gradient(&x) - y;
        let res = g.norm();
        if res <= target {
            return Ok(Conjugate {
                value: -phi,
                maximizer: x,
                residual: res,
                iterations: it,
            });
        }
        let h = f.hessian(&x);
        let scale = h.amax().max(1.0);
        let mut shift = 0.0;
        let step = loop {
            let shifted = &h + DMatrix::identity(d, d) * shift;
            if let Some(ch) = shifted.cholesky() {
                break -ch.solve(&g);
            }
            shift = if shift == 0.0 { 1e-10 * scale } else { shift * 10.0 };
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial = &x + &step * t;
            let v = objective(&trial);
            // below this the objective cannot resolve a decrease
            let flat = 8.0 * f64::EPSILON * (phi.abs() + trial.dot(y).abs() + 1.0);
            if v < phi || (v <= phi + flat && (f.gradient(&trial) - y).norm() < res) {
                x = trial;
                phi = v;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // Round-off floor: the objective can no longer decrease.
            let res = (f.gradient(&x) - y).norm();
            if res <= 1e-10 * y.norm().max(1.0) {
                return Ok(Conjugate {
                    value: -phi,
                    maximizer: x,
                    residual: res,
                    iterations: it,
                });
            }
            return Err(Error::NoConvergence {
                what: "fenchel".into(),
                iterations: it,
                residual: res,
            });
        }
    }
    let res = (f.gradient(&x) - y).norm();
    Err(Error::NoConvergence {
        what: "fenchel".into(),
        iterations: FENCHEL_MAX_ITER,
        residual: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_self_conjugate() {
        let f = QuadraticMap {
            q: DMatrix::identity(3, 3),
        };
        let y = DVector::from_vec(vec![0.3, -1.2, 2.0]);
        let c = fenchel(&f, &y).unwrap();
        assert!((c.value - 0.5 * y.norm_squared()).abs() < 1e-14);
        assert!((&c.maximizer - &y).amax() < 1e-14);
    }

    #[test]
    fn quartic_conjugate_closed_form() {
        let f = PowerMap {
            dim: 1,
            coeff: 1.0,
            power: 4.0,
        };
        for &y in &[0.0, 1e-3, 0.7, -2.5, 40.0] {
            let c = fenchel(&f, &DVector::from_vec(vec![y])).unwrap();
            let want = 0.75 * y.abs().powf(4.0 / 3.0);
            assert!((c.value - want).abs() < 1e-10 * want.max(1.0), "y = {y}");
            assert!(c.residual <= 1e-10);
        }
    }

    #[test]
    fn reciprocity() {
        let f = PowerMap {
            dim: 2,
            coeff: 2.0,
            power: 3.0,
        };
        let x0 = DVector::from_vec(vec![0.4, -1.1]);
        let y = f.gradient(&x0);
        let c = fenchel(&f, &y).unwrap();
        assert!((&c.maximizer - &x0).amax() < 1e-8);
        // F(x) + F*(y) = x·y at conjugate pairs.
        assert!((f.value(&x0) + c.value - x0.dot(&y)).abs() < 1e-10);
    }

    #[test]
    fn dimension_is_checked() {
        let f = QuadraticMap {
            q: DMatrix::identity(2, 2),
        };
        assert!(fenchel(&f, &DVector::zeros(3)).is_err());
    }
}
