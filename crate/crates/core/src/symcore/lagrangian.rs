//! Lagrangian frames in `(ℂ²ⁿ, ω₀)` and in the doubled space
//! `(ℂ²ⁿ ⊕ ℂ²ⁿ, (−ω₀) ⊕ ω₀)`, their intersections and the triple form.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::json::complex_rows;
use super::linalg::{
    column_space_c, complexify, hstack_c, least_squares_c, null_space_abs_c, right_singular_c,
    subspace_intersection, vstack_c, CMatrix,
};
use super::symplectic::j_matrix;
use crate::error::{Error, Result};

/// Default relative rank tolerance.
pub const RANK_TOL: f64 = 1e-8;

/// Which symplectic form a frame is Lagrangian for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceTag {
    /// `ω₀(x, y) = xᴴ(−J)y` on `ℂ²ⁿ`.
    Single,
    /// `(−ω₀) ⊕ ω₀`, matrix `diag(J, −J)` on `ℂ⁴ⁿ`.
    Doubled,
}

/// A full-rank complex frame whose span is Lagrangian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagrangianFrame {
    #[serde(with = "complex_rows")]
    span: CMatrix,
    space: SpaceTag,
}

/// Matrix of the symplectic form for a space tag and ambient dimension.
pub fn omega_matrix(space: SpaceTag, ambient: usize) -> CMatrix {
    match space {
        SpaceTag::Single => complexify(&(-j_matrix(ambient / 2))),
        SpaceTag::Doubled => {
            let n = ambient / 4;
            let j = j_matrix(n);
            let mut m = DMatrix::zeros(ambient, ambient);
            m.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&j);
            m.view_mut((2 * n, 2 * n), (2 * n, 2 * n)).copy_from(&(-j));
            complexify(&m)
        }
    }
}

impl LagrangianFrame {
    /// Validates rank and isotropy of `span`.
    pub fn new(span: CMatrix, space: SpaceTag) -> Result<Self> {
        let f = LagrangianFrame { span, space };
        f.validate(RANK_TOL)?;
        Ok(f)
    }

    /// Checks full column rank, half-dimensionality and isotropy.
    pub fn validate(&self, rank_tol: f64) -> Result<()> {
        let (rows, cols) = self.span.shape();
        let unit = match self.space {
            SpaceTag::Single => 2,
            SpaceTag::Doubled => 4,
        };
        if rows == 0 || rows % unit != 0 || 2 * cols != rows {
            return Err(Error::DegenerateFrame(format!(
                "a {:?} frame must be {rows}x{} but is {rows}x{cols}",
                self.space,
                rows / 2
            )));
        }
        let (sv, _) = right_singular_c(&self.span);
        let top = sv[0];
        let bottom = *sv.last().expect("nonempty");
        if top == 0.0 || bottom <= rank_tol * top {
            return Err(Error::DegenerateFrame(format!(
                "columns are dependent (singular values {top:.3e} .. {bottom:.3e})"
            )));
        }
        let omega = omega_matrix(self.space, rows);
        let iso = self.span.adjoint() * omega * &self.span;
        let residual = iso.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual > 1e-8 * top * top {
            return Err(Error::DegenerateFrame(format!(
                "span is not isotropic (residual {residual:.3e})"
            )));
        }
        Ok(())
    }

    pub fn span(&self) -> &CMatrix {
        &self.span
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn ambient_dim(&self) -> usize {
        self.span.nrows()
    }

    /// Half-dimension `n` of the underlying phase space `ℝ²ⁿ`.
    pub fn n(&self) -> usize {
        match self.space {
            SpaceTag::Single => self.span.nrows() / 2,
            SpaceTag::Doubled => self.span.nrows() / 4,
        }
    }

    /// `α₀ = {0} × ℂⁿ`.
    pub fn alpha0(n: usize) -> Self {
        let mut s = CMatrix::zeros(2 * n, n);
        for i in 0..n {
            s[(n + i, i)] = Complex64::new(1.0, 0.0);
        }
        LagrangianFrame {
            span: s,
            space: SpaceTag::Single,
        }
    }

    /// `α₁ = ℂⁿ × {0}`.
    pub fn alpha1(n: usize) -> Self {
        let mut s = CMatrix::zeros(2 * n, n);
        for i in 0..n {
            s[(i, i)] = Complex64::new(1.0, 0.0);
        }
        LagrangianFrame {
            span: s,
            space: SpaceTag::Single,
        }
    }

    /// `α_j` for `j ∈ {0, 1}`.
    pub fn alpha(j: usize, n: usize) -> Self {
        if j == 0 {
            Self::alpha0(n)
        } else {
            Self::alpha1(n)
        }
    }

    /// `λ × μ` in the doubled space.
    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        if a.space != SpaceTag::Single || b.space != SpaceTag::Single || a.n() != b.n() {
            return Err(Error::AmbientMismatch {
                left: format!("{:?}/{}", a.space, a.ambient_dim()),
                right: format!("{:?}/{}", b.space, b.ambient_dim()),
            });
        }
        let (ra, ca) = a.span.shape();
        let (rb, cb) = b.span.shape();
        let mut s = CMatrix::zeros(ra + rb, ca + cb);
        s.view_mut((0, 0), (ra, ca)).copy_from(&a.span);
        s.view_mut((ra, ca), (rb, cb)).copy_from(&b.span);
        Ok(LagrangianFrame {
            span: s,
            space: SpaceTag::Doubled,
        })
    }

    /// `α̃_j = α_j × α_j`.
    pub fn alpha_tilde(j: usize, n: usize) -> Self {
        let a = Self::alpha(j, n);
        Self::product(&a, &a).expect("same space")
    }

    /// `α_i × α_j`.
    pub fn alpha_pair(i: usize, j: usize, n: usize) -> Self {
        Self::product(&Self::alpha(i, n), &Self::alpha(j, n)).expect("same space")
    }

    /// `Graph(M) = {(x, Mx)}` for a real matrix.
    pub fn graph(m: &DMatrix<f64>) -> Result<Self> {
        Self::graph_complex(&complexify(m))
    }

    /// `Graph(M)` for a complex matrix.
    pub fn graph_complex(m: &CMatrix) -> Result<Self> {
        let k = m.nrows();
        if k != m.ncols() || k % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "graph needs an even square matrix, got {}x{}",
                k,
                m.ncols()
            )));
        }
        let span = vstack_c(&[&CMatrix::identity(k, k), m]);
        Self::new(span, SpaceTag::Doubled)
    }

    /// `Graph(z·I)` in dimension `2n`.
    pub fn graph_scalar(n: usize, z: Complex64) -> Self {
        let span = vstack_c(&[
            &CMatrix::identity(2 * n, 2 * n),
            &(CMatrix::identity(2 * n, 2 * n) * z),
        ]);
        LagrangianFrame {
            span,
            space: SpaceTag::Doubled,
        }
    }

    /// Image `M λ` of a single-space frame under a real symplectic matrix.
    pub fn image(&self, m: &DMatrix<f64>) -> Result<Self> {
        if self.space != SpaceTag::Single {
            return Err(Error::InvalidInput("image is defined for single-space frames".into()));
        }
        Self::new(complexify(m) * &self.span, SpaceTag::Single)
    }
}

fn same_space(a: &LagrangianFrame, b: &LagrangianFrame) -> Result<()> {
    if a.space != b.space || a.ambient_dim() != b.ambient_dim() {
        return Err(Error::AmbientMismatch {
            left: format!("{:?}/{}", a.space, a.ambient_dim()),
            right: format!("{:?}/{}", b.space, b.ambient_dim()),
        });
    }
    Ok(())
}

/// Dimension and orthonormal basis of `span F₁ ∩ span F₂`.
pub fn intersection_dim(
    f1: &LagrangianFrame,
    f2: &LagrangianFrame,
    rank_tol: f64,
) -> Result<(usize, CMatrix)> {
    same_space(f1, f2)?;
    let basis = subspace_intersection(&f1.span, &f2.span, rank_tol);
    Ok((basis.ncols(), basis))
}

/// Splits `x = −y + z` with `y ∈ span β`, `z ∈ span δ` by the minimum-norm
/// least-squares solve on `[−β | δ]`. Columns of `x` are split independently.
pub fn decompose(
    x: &CMatrix,
    beta: &LagrangianFrame,
    delta: &LagrangianFrame,
    rank_tol: f64,
) -> (CMatrix, CMatrix) {
    let a = hstack_c(&[&(-beta.span()), delta.span()]);
    let coeff = least_squares_c(&a, x, rank_tol);
    let kb = beta.span().ncols();
    let y = beta.span() * coeff.rows(0, kb);
    let z = delta.span() * coeff.rows(kb, coeff.nrows() - kb);
    (y, z)
}

/// Gram matrix `G_ij = ω(x_i, y_j)` in the doubled space.
pub fn form_matrix(x: &CMatrix, y: &CMatrix) -> CMatrix {
    let omega = omega_matrix(SpaceTag::Doubled, x.nrows());
    x.adjoint() * omega * y
}

/// The Hermitian form `Q(α, β; δ)` restricted to `α ∩ (β + δ)`.
#[derive(Debug, Clone)]
pub struct TripleForm {
    /// Hermitian Gram matrix in the returned basis.
    pub matrix: CMatrix,
    /// Orthonormal basis of `α ∩ (β + δ)`, one vector per column.
    pub basis: CMatrix,
    /// Deviation of the raw Gram matrix from being Hermitian.
    pub hermitian_residual: f64,
}

/// Builds `Q(α, β; δ)`.
pub fn triple_form(
    alpha: &LagrangianFrame,
    beta: &LagrangianFrame,
    delta: &LagrangianFrame,
    rank_tol: f64,
) -> Result<TripleForm> {
    for f in [alpha, beta, delta] {
        if f.space != SpaceTag::Doubled {
            return Err(Error::AmbientMismatch {
                left: "doubled".into(),
                right: format!("{:?}", f.space),
            });
        }
        f.validate(rank_tol)?;
    }
    same_space(alpha, beta)?;
    same_space(alpha, delta)?;

    // α ∩ (β + δ): project α onto the orthogonal complement of β + δ and take
    // the kernel of that projection.
    let sum = column_space_c(&hstack_c(&[beta.span(), delta.span()]), rank_tol);
    let a_orth = column_space_c(alpha.span(), rank_tol);
    let residual = &a_orth - &sum * (sum.adjoint() * &a_orth);
    // a_orth has orthonormal columns, so the cutoff is absolute.
    let ker = null_space_abs_c(&residual, rank_tol);
    let basis = column_space_c(&(&a_orth * ker), rank_tol);

    let (y, _) = decompose(&basis, beta, delta, rank_tol);
    let raw = form_matrix(&basis, &y);
    let herm = (&raw + raw.adjoint()).map(|z| z * 0.5);
    let hermitian_residual = (&raw - raw.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    Ok(TripleForm {
        matrix: herm,
        basis,
        hermitian_residual,
    })
}
