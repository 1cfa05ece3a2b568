//! The standard structures `J`, `N` and symplectic matrices.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::json::RowMatrix;
use crate::error::{Error, Result};

/// `J = [[0, −I], [I, 0]]`.
pub fn j_matrix(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

/// `N = diag(−I, I)`.
pub fn n_matrix(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, i)] = -1.0;
        m[(n + i, n + i)] = 1.0;
    }
    m
}

/// Conjugation `N M N`, done by sign flips instead of products.
pub fn conj_n(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows() / 2;
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let s = if (i < n) == (j < n) { 1.0 } else { -1.0 };
        s * m[(i, j)]
    })
}

/// `‖MᵀJM − J‖_∞` as the largest absolute entry.
pub fn check_symplectic(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows() / 2;
    let j = j_matrix(n);
    (m.transpose() * &j * m - j).amax()
}

/// Inverse of a symplectic matrix, `M⁻¹ = −J Mᵀ J`.
pub fn symplectic_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows() / 2;
    let j = j_matrix(n);
    -(&j * m.transpose() * &j)
}

/// A validated real symplectic matrix with block accessors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RowMatrix", into = "RowMatrix")]
pub struct SymplecticMatrix {
    n: usize,
    m: DMatrix<f64>,
}

/// Default symplectic residual tolerance.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

impl SymplecticMatrix {
    pub fn new(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::InvalidInput(format!(
                "symplectic matrix must be square of even size, got {r}x{c}"
            )));
        }
        let scale = m.amax().max(1.0);
        let residual = check_symplectic(&m);
        if residual > tol * scale * scale {
            return Err(Error::NotSymplectic { residual });
        }
        debug_assert!((m.determinant() - 1.0).abs() < 1e-6 * scale.powi(r as i32));
        Ok(SymplecticMatrix { n: r / 2, m })
    }

    /// Wraps without checking; for matrices symplectic by construction.
    pub fn new_unchecked(m: DMatrix<f64>) -> Self {
        SymplecticMatrix { n: m.nrows() / 2, m }
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix {
            n,
            m: DMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Blocks `(A, B, C, D)` of `M = [[A, B], [C, D]]`.
    pub fn blocks(&self) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        blocks(&self.m)
    }

    pub fn inverse(&self) -> Self {
        SymplecticMatrix::new_unchecked(symplectic_inverse(&self.m))
    }

    pub fn mul(&self, other: &Self) -> Self {
        SymplecticMatrix::new_unchecked(&self.m * &other.m)
    }

    pub fn residual(&self) -> f64 {
        check_symplectic(&self.m)
    }
}

impl TryFrom<RowMatrix> for SymplecticMatrix {
    type Error = Error;
    fn try_from(m: RowMatrix) -> Result<Self> {
        SymplecticMatrix::new(m.to_matrix()?, SYMPLECTIC_TOL)
    }
}

impl From<SymplecticMatrix> for RowMatrix {
    fn from(s: SymplecticMatrix) -> Self {
        RowMatrix::from(&s.m)
    }
}

/// Blocks `(A, B, C, D)` of a `2n × 2n` matrix.
pub fn blocks(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let n = m.nrows() / 2;
    (
        m.view((0, 0), (n, n)).into_owned(),
        m.view((0, n), (n, n)).into_owned(),
        m.view((n, 0), (n, n)).into_owned(),
        m.view((n, n), (n, n)).into_owned(),
    )
}

/// Assembles `[[A, B], [C, D]]`.
pub fn from_blocks(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(a);
    m.view_mut((0, n), (n, n)).copy_from(b);
    m.view_mut((n, 0), (n, n)).copy_from(c);
    m.view_mut((n, n), (n, n)).copy_from(d);
    m
}

fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = scale * rng.random_range(-1.0..1.0);
            s[(i, j)] = x;
            s[(j, i)] = x;
        }
    }
    s
}

/// Random symplectic matrix built from shears `[[I, S], [0, I]]`,
/// `[[I, 0], [S, I]]` and a block-diagonal `diag(G, G⁻ᵀ)` factor.
///
/// `scale` bounds the entries of the symmetric shear blocks.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> SymplecticMatrix {
    let i = DMatrix::<f64>::identity(n, n);
    let z = DMatrix::<f64>::zeros(n, n);
    let mut m = DMatrix::<f64>::identity(2 * n, 2 * n);
    for _ in 0..2 {
        let s1 = random_symmetric(rng, n, scale);
        let s2 = random_symmetric(rng, n, scale);
        m = from_blocks(&i, &s1, &z, &i) * m;
        m = from_blocks(&i, &z, &s2, &i) * m;
    }
    let g = loop {
        let g = &i + DMatrix::from_fn(n, n, |_, _| 0.5 * rng.random_range(-1.0..1.0));
        if g.determinant().abs() > 0.2 {
            break g;
        }
    };
    let g_inv_t = g.clone().try_inverse().expect("checked determinant").transpose();
    m = from_blocks(&g, &z, &z, &g_inv_t) * m;
    SymplecticMatrix::new_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_symplectic() {
        assert_eq!(check_symplectic(&DMatrix::identity(4, 4)), 0.0);
    }

    #[test]
    fn shear_example_is_symplectic() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 1.0, -1.0]);
        assert!(check_symplectic(&m) < 1e-15);
    }

    #[test]
    fn scaling_is_not_symplectic() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!((check_symplectic(&m) - 1.0).abs() < 1e-15);
        assert!(matches!(
            SymplecticMatrix::new(m, SYMPLECTIC_TOL),
            Err(Error::NotSymplectic { .. })
        ));
    }

    #[test]
    fn nj_anticommute() {
        let j = j_matrix(3);
        let n = n_matrix(3);
        assert_eq!(&n * &j, -(&j * &n));
        let m = DMatrix::from_fn(6, 6, |i, k| (i * 7 + k * 3) as f64);
        assert_eq!(conj_n(&m), &n * &m * &n);
    }

    #[test]
    fn random_matrices_are_symplectic_and_inverse_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            let m = random_symplectic(&mut rng, n, 1.0);
            assert!(m.residual() < 1e-12);
            let prod = m.matrix() * m.inverse().matrix();
            assert!((prod - DMatrix::identity(2 * n, 2 * n)).amax() < 1e-11);
        }
    }

    #[test]
    fn serde_round_trip_validates() {
        let m = SymplecticMatrix::identity(1);
        let s = serde_json::to_string(&m).unwrap();
        let back: SymplecticMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
