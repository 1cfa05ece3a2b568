//! Reversible Hamiltonians `H(p, q)` with closed-form derivatives.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::variational::ConvexMap;

/// Largest admissible `|H(Nx) − H(x)|` on the validation samples.
pub const REVERSIBILITY_TOL: f64 = 1e-10;

/// One monomial `c · Π pᵢ^{aᵢ} Π qᵢ^{bᵢ}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub coeff: f64,
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

/// Hamiltonian on `ℝ²ⁿ` with coordinates `x = (p, q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HamiltonianSpec {
    /// `½|p|² + ½|q|²`.
    Harmonic { n: usize },
    /// `½|p|² + ½|q|² + ¼|q|⁴`, for `n ∈ {1, 2}`.
    Quartic { n: usize },
    /// Sum of monomials; every term must have even total degree in `p`.
    Polynomial { n: usize, terms: Vec<Monomial> },
}

impl HamiltonianSpec {
    pub fn harmonic(n: usize) -> Self {
        HamiltonianSpec::Harmonic { n }
    }

    pub fn quartic(n: usize) -> Self {
        HamiltonianSpec::Quartic { n }
    }

    pub fn n(&self) -> usize {
        match self {
            HamiltonianSpec::Harmonic { n }
            | HamiltonianSpec::Quartic { n }
            | HamiltonianSpec::Polynomial { n, .. } => *n,
        }
    }

    /// Structural checks plus a sampled reversibility test.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidInput("Hamiltonian dimension must be positive".into()));
        }
        match self {
            HamiltonianSpec::Harmonic { .. } => {}
            HamiltonianSpec::Quartic { n } => {
                if *n > 2 {
                    return Err(Error::InvalidInput(format!(
                        "the quartic builtin supports n = 1 or 2, got {n}"
                    )));
                }
            }
            HamiltonianSpec::Polynomial { terms, .. } => {
                for (k, term) in terms.iter().enumerate() {
                    if term.p.len() != n || term.q.len() != n {
                        return Err(Error::InvalidInput(format!(
                            "term {k}: exponent vectors must have length {n}"
                        )));
                    }
                    if !term.coeff.is_finite() {
                        return Err(Error::InvalidInput(format!("term {k}: coefficient is not finite")));
                    }
                    let p_degree: u32 = term.p.iter().sum();
                    if p_degree % 2 != 0 {
                        return Err(Error::InvalidInput(format!(
                            "term {k} is odd in p, so H(Nx) != H(x)"
                        )));
                    }
                }
            }
        }
        let residual = self.reversibility_residual(64);
        if residual > REVERSIBILITY_TOL {
            return Err(Error::InvalidInput(format!(
                "Hamiltonian is not reversible: residual {residual:.3e}"
            )));
        }
        Ok(())
    }

    /// `max |H(Nx) − H(x)|` over random points of `[−1, 1]²ⁿ`.
    pub fn reversibility_residual(&self, samples: usize) -> f64 {
        let n = self.n();
        let mut rng = ChaCha8Rng::seed_from_u64(0x4e);
        (0..samples)
            .map(|_| {
                let x = DVector::from_fn(2 * n, |_, _| rng.random_range(-1.0..1.0));
                (self.value(&reflect(&x)) - self.value(&x)).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        let n = self.n();
        let (p, q) = split(x, n);
        match self {
            HamiltonianSpec::Harmonic { .. } => 0.5 * (p.norm_squared() + q.norm_squared()),
            HamiltonianSpec::Quartic { .. } => {
                let r2 = q.norm_squared();
                0.5 * (p.norm_squared() + r2) + 0.25 * r2 * r2
            }
            HamiltonianSpec::Polynomial { terms, .. } => terms
                .iter()
                .map(|t| t.coeff * monomial(x, &exponents(t), &[]))
                .sum(),
        }
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        match self {
            HamiltonianSpec::Harmonic { .. } => x.clone(),
            HamiltonianSpec::Quartic { .. } => {
                let r2 = split(x, n).1.norm_squared();
                let mut g = x.clone();
                for k in n..2 * n {
                    g[k] *= 1.0 + r2;
                }
                g
            }
            HamiltonianSpec::Polynomial { terms, .. } => {
                let mut g = DVector::zeros(2 * n);
                for t in terms {
                    let e = exponents(t);
                    for k in 0..2 * n {
                        g[k] += t.coeff * monomial(x, &e, &[k]);
                    }
                }
                g
            }
        }
    }

    pub fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        match self {
            HamiltonianSpec::Harmonic { .. } => DMatrix::identity(2 * n, 2 * n),
            HamiltonianSpec::Quartic { .. } => {
                let q = split(x, n).1;
                let r2 = q.norm_squared();
                let mut h = DMatrix::identity(2 * n, 2 * n);
                for i in 0..n {
                    h[(n + i, n + i)] += r2;
                    for j in 0..n {
                        h[(n + i, n + j)] += 2.0 * q[i] * q[j];
                    }
                }
                h
            }
            HamiltonianSpec::Polynomial { terms, .. } => {
                let mut h = DMatrix::zeros(2 * n, 2 * n);
                for t in terms {
                    let e = exponents(t);
                    for k in 0..2 * n {
                        for l in k..2 * n {
                            let v = t.coeff * monomial(x, &e, &[k, l]);
                            h[(k, l)] += v;
                            if l != k {
                                h[(l, k)] += v;
                            }
                        }
                    }
                }
                h
            }
        }
    }

    /// Hamiltonian vector field `JH'(x)`.
    pub fn field(&self, x: &DVector<f64>) -> DVector<f64> {
        apply_j_vec(&self.gradient(x))
    }
}

/// `F(x) = H(x) + ½λ|p|²`, the convexified Hamiltonian of the dual action.
#[derive(Debug, Clone)]
pub struct ShiftedHamiltonian<'a> {
    pub spec: &'a HamiltonianSpec,
    pub lambda: f64,
}

impl ConvexMap for ShiftedHamiltonian<'_> {
    fn dim(&self) -> usize {
        2 * self.spec.n()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        let n = self.spec.n();
        self.spec.value(x) + 0.5 * self.lambda * x.rows(0, n).norm_squared()
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let n = self.spec.n();
        let mut g = self.spec.gradient(x);
        for k in 0..n {
            g[k] += self.lambda * x[k];
        }
        g
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.spec.n();
        let mut h = self.spec.hessian(x);
        for k in 0..n {
            h[(k, k)] += self.lambda;
        }
        h
    }
}

/// `J(a, b) = (−b, a)`.
pub fn apply_j_vec(v: &DVector<f64>) -> DVector<f64> {
    let n = v.len() / 2;
    DVector::from_fn(2 * n, |i, _| if i < n { -v[i + n] } else { v[i - n] })
}

/// `N(p, q) = (−p, q)`.
pub fn reflect(x: &DVector<f64>) -> DVector<f64> {
    let n = x.len() / 2;
    DVector::from_fn(2 * n, |i, _| if i < n { -x[i] } else { x[i] })
}

fn split(x: &DVector<f64>, n: usize) -> (DVector<f64>, DVector<f64>) {
    (x.rows(0, n).into_owned(), x.rows(n, n).into_owned())
}

fn exponents(t: &Monomial) -> Vec<u32> {
    t.p.iter().chain(t.q.iter()).copied().collect()
}

/// Partial derivative of `Π xₖ^{eₖ}` with respect to the listed variables.
fn monomial(x: &DVector<f64>, e: &[u32], derivs: &[usize]) -> f64 {
    let mut e: Vec<i64> = e.iter().map(|&k| k as i64).collect();
    let mut factor = 1.0;
    for &k in derivs {
        if e[k] <= 0 {
            return 0.0;
        }
        factor *= e[k] as f64;
        e[k] -= 1;
    }
    e.iter()
        .zip(x.iter())
        .fold(factor, |acc, (&k, &xi)| acc * xi.powi(k as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic_as_polynomial() -> HamiltonianSpec {
        let term = |coeff, p, q| Monomial { coeff, p: vec![p], q: vec![q] };
        HamiltonianSpec::Polynomial {
            n: 1,
            terms: vec![term(0.5, 2, 0), term(0.5, 0, 2), term(0.25, 0, 4)],
        }
    }

    fn fd_gradient(h: &HamiltonianSpec, x: &DVector<f64>) -> DVector<f64> {
        let d = 1e-6;
        DVector::from_fn(x.len(), |k, _| {
            let mut a = x.clone();
            let mut b = x.clone();
            a[k] += d;
            b[k] -= d;
            (h.value(&a) - h.value(&b)) / (2.0 * d)
        })
    }

    #[test]
    fn polynomial_matches_builtin_quartic() {
        let poly = quartic_as_polynomial();
        let quartic = HamiltonianSpec::quartic(1);
        let x = DVector::from_vec(vec![0.3, -0.7]);
        assert!((poly.value(&x) - quartic.value(&x)).abs() < 1e-15);
        assert!((poly.gradient(&x) - quartic.gradient(&x)).norm() < 1e-14);
        assert!((poly.hessian(&x) - quartic.hessian(&x)).norm() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let x = DVector::from_vec(vec![0.4, -0.2, 0.9, 0.5]);
        for h in [HamiltonianSpec::harmonic(2), HamiltonianSpec::quartic(2)] {
            assert!((h.gradient(&x) - fd_gradient(&h, &x)).norm() < 1e-8);
            let hess = h.hessian(&x);
            for k in 0..4 {
                let d = 1e-6;
                let mut a = x.clone();
                let mut b = x.clone();
                a[k] += d;
                b[k] -= d;
                let col = (h.gradient(&a) - h.gradient(&b)) / (2.0 * d);
                assert!((hess.column(k) - col).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn quartic_position_block_is_at_least_one() {
        let h = HamiltonianSpec::quartic(1);
        let hess = h.hessian(&DVector::from_vec(vec![0.0, 0.8]));
        assert!((hess[(1, 1)] - (1.0 + 3.0 * 0.64)).abs() < 1e-15);
    }

    #[test]
    fn odd_momentum_term_is_rejected() {
        let h = HamiltonianSpec::Polynomial {
            n: 1,
            terms: vec![Monomial { coeff: 1.0, p: vec![1], q: vec![1] }],
        };
        assert!(matches!(h.validate(), Err(Error::InvalidInput(_))));
        assert!(quartic_as_polynomial().validate().is_ok());
        assert!(HamiltonianSpec::quartic(3).validate().is_err());
    }

    #[test]
    fn json_round_trip_and_unknown_fields() {
        let h: HamiltonianSpec = serde_json::from_str(r#"{"kind":"quartic","n":2}"#).unwrap();
        assert_eq!(h, HamiltonianSpec::quartic(2));
        let back: HamiltonianSpec =
            serde_json::from_value(serde_json::to_value(quartic_as_polynomial()).unwrap()).unwrap();
        assert_eq!(back, quartic_as_polynomial());
        assert!(serde_json::from_str::<HamiltonianSpec>(r#"{"kind":"quartic","n":1,"x":0}"#).is_err());
    }
}
