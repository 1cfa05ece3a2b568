//! Boundary conditions and the endpoint blocks whose kernels they detect.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symcore::lagrangian::LagrangianFrame;
use crate::symcore::linalg::{
    column_space_c, complexify, hstack_c, right_singular, singular_values, right_singular_c, vstack_c, CMatrix,
};
use crate::symcore::signature::real_embedding;
use crate::symcore::symplectic::{blocks, SymplecticMatrix};

/// A fixed Lagrangian of the doubled space against which `Graph(γ(t))` is
/// intersected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BoundarySpec {
    /// `α̃₀ = α₀ × α₀`.
    L0,
    /// `α̃₁ = α₁ × α₁`.
    L1,
    /// `α₀ × α₁`.
    L0xL1,
    /// `α₁ × α₀`.
    L1xL0,
    /// `Graph(I)`.
    Periodic,
    /// `Graph(e^{iθ} I)`, `θ ∈ (0, 2π)`.
    Theta(f64),
    /// An arbitrary Lagrangian frame of the doubled space.
    General(LagrangianFrame),
}

impl BoundarySpec {
    /// `Theta(θ)` after rejecting `θ ≡ 0 mod 2π`.
    pub fn theta(theta: f64) -> Result<Self> {
        let r = theta.rem_euclid(2.0 * std::f64::consts::PI);
        if r.abs() < 1e-12 || (2.0 * std::f64::consts::PI - r).abs() < 1e-12 {
            return Err(Error::InvalidInput(
                "Theta boundary excludes multiples of 2π; use Periodic".into(),
            ));
        }
        Ok(BoundarySpec::Theta(r))
    }

    /// The five real boundary kinds in suite order.
    pub fn standard() -> [BoundarySpec; 5] {
        [
            BoundarySpec::L0,
            BoundarySpec::L1,
            BoundarySpec::L0xL1,
            BoundarySpec::L1xL0,
            BoundarySpec::Periodic,
        ]
    }

    /// Normalization subtracted from the raw Maslov index.
    pub fn shift(&self, n: usize) -> i64 {
        match self {
            BoundarySpec::L0 | BoundarySpec::L1 | BoundarySpec::Periodic => n as i64,
            _ => 0,
        }
    }

    /// The Lagrangian of the doubled space this boundary stands for.
    pub fn frame(&self, n: usize) -> LagrangianFrame {
        match self {
            BoundarySpec::L0 => LagrangianFrame::alpha_tilde(0, n),
            BoundarySpec::L1 => LagrangianFrame::alpha_tilde(1, n),
            BoundarySpec::L0xL1 => LagrangianFrame::alpha_pair(0, 1, n),
            BoundarySpec::L1xL0 => LagrangianFrame::alpha_pair(1, 0, n),
            BoundarySpec::Periodic => LagrangianFrame::graph_scalar(n, Complex64::new(1.0, 0.0)),
            BoundarySpec::Theta(t) => LagrangianFrame::graph_scalar(n, Complex64::from_polar(1.0, *t)),
            BoundarySpec::General(w) => w.clone(),
        }
    }

    /// Short name used in reports.
    pub fn name(&self) -> String {
        match self {
            BoundarySpec::L0 => "L0".into(),
            BoundarySpec::L1 => "L1".into(),
            BoundarySpec::L0xL1 => "L0xL1".into(),
            BoundarySpec::L1xL0 => "L1xL0".into(),
            BoundarySpec::Periodic => "periodic".into(),
            BoundarySpec::Theta(t) => format!("theta:{t}"),
            BoundarySpec::General(_) => "general".into(),
        }
    }
}

impl fmt::Display for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for BoundarySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L0" | "l0" => Ok(BoundarySpec::L0),
            "L1" | "l1" => Ok(BoundarySpec::L1),
            "L0xL1" | "l0xl1" => Ok(BoundarySpec::L0xL1),
            "L1xL0" | "l1xl0" => Ok(BoundarySpec::L1xL0),
            "periodic" | "Periodic" | "P" => Ok(BoundarySpec::Periodic),
            _ => {
                if let Some(rest) = s.strip_prefix("theta:") {
                    let t: f64 = rest
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad theta value '{rest}'")))?;
                    BoundarySpec::theta(t)
                } else {
                    Err(Error::InvalidInput(format!(
                        "unknown boundary '{s}' (expected L0, L1, L0xL1, L1xL0, periodic or theta:<rad>)"
                    )))
                }
            }
        }
    }
}

/// Per-kind evaluation of the crossing indicator and kernel at a matrix.
#[derive(Debug, Clone)]
pub(crate) struct BlockEvaluator {
    kind: BoundarySpec,
    n: usize,
    /// Orthonormal basis of `W` for general frames.
    w_basis: Option<CMatrix>,
}

/// `max(1, ‖M‖_F)`, the scale used to normalize singular values.
pub(crate) fn matrix_scale(m: &DMatrix<f64>) -> f64 {
    m.norm().max(1.0)
}

impl BlockEvaluator {
    pub(crate) fn new(kind: &BoundarySpec, n: usize) -> Result<Self> {
        let w_basis = match kind {
            BoundarySpec::General(w) => {
                if w.n() != n || w.space() != crate::symcore::SpaceTag::Doubled {
                    return Err(Error::AmbientMismatch {
                        left: format!("doubled/{}", 4 * n),
                        right: format!("{:?}/{}", w.space(), w.ambient_dim()),
                    });
                }
                Some(column_space_c(w.span(), 1e-12))
            }
            _ => None,
        };
        Ok(BlockEvaluator {
            kind: kind.clone(),
            n,
            w_basis,
        })
    }

    /// Normalized smallest singular value: zero exactly on crossings.
    pub(crate) fn indicator(&self, m: &DMatrix<f64>) -> f64 {
        match &self.kind {
            BoundarySpec::Theta(_) | BoundarySpec::General(_) => {
                let (sv, _) = self.complex_svd(m);
                *sv.last().expect("nonempty") / self.complex_scale(m)
            }
            _ => {
                let k = self.real_block(m);
                let smin = *singular_values(&k).last().expect("nonempty");
                smin / matrix_scale(m)
            }
        }
    }

    /// Orthonormal basis (as `x` vectors in `ℂ²ⁿ`) of the `x` with
    /// `(x, Mx) ∈ W`, using singular values `≤ tol · scale`.
    pub(crate) fn kernel(&self, m: &DMatrix<f64>, tol: f64) -> CMatrix {
        let n = self.n;
        match &self.kind {
            BoundarySpec::Theta(_) => {
                let (sv, v) = self.complex_svd(m);
                let cut = tol * self.complex_scale(m);
                let real: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= cut).collect();
                // Real kernel vectors (a; b) stand for a + ib.
                let z = CMatrix::from_fn(2 * n, real.len(), |r, c| {
                    Complex64::new(v[(r, real[c])].re, v[(r + 2 * n, real[c])].re)
                });
                column_space_c(&z, 1e-6)
            }
            BoundarySpec::General(_) => {
                let (sv, v) = self.complex_svd(m);
                let cut = tol * self.complex_scale(m);
                let idx: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= cut).collect();
                let g = self.graph_basis(m);
                let k = g.ncols();
                let coeff = CMatrix::from_fn(k, idx.len(), |r, c| v[(r, idx[c])]);
                let pts = g * coeff;
                column_space_c(&pts.rows(0, 2 * n).into_owned(), 1e-6)
            }
            _ => {
                let k = self.real_block(m);
                let (sv, v) = right_singular(&k);
                let cut = tol * matrix_scale(m);
                let idx: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= cut).collect();
                let dim = k.ncols();
                let mut x = CMatrix::zeros(2 * n, idx.len());
                let offset = match self.kind {
                    BoundarySpec::L0 | BoundarySpec::L0xL1 => n,
                    _ => 0,
                };
                for (c, &i) in idx.iter().enumerate() {
                    for r in 0..dim {
                        x[(r + offset, c)] = Complex64::new(v[(r, i)], 0.0);
                    }
                }
                x
            }
        }
    }

    /// Kernel dimension at `m`.
    pub(crate) fn nullity(&self, m: &DMatrix<f64>, tol: f64) -> usize {
        self.kernel(m, tol).ncols()
    }

    fn real_block(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let (a, b, c, d) = blocks(m);
        match self.kind {
            BoundarySpec::L0 => b,
            BoundarySpec::L1 => c,
            BoundarySpec::L0xL1 => d,
            BoundarySpec::L1xL0 => a,
            BoundarySpec::Periodic => m - DMatrix::identity(m.nrows(), m.ncols()),
            _ => unreachable!("complex kinds handled separately"),
        }
    }

    fn graph_basis(&self, m: &DMatrix<f64>) -> CMatrix {
        let k = m.nrows();
        column_space_c(&vstack_c(&[&CMatrix::identity(k, k), &complexify(m)]), 1e-14)
    }

    fn complex_scale(&self, m: &DMatrix<f64>) -> f64 {
        match self.kind {
            BoundarySpec::Theta(_) => matrix_scale(m),
            _ => 1.0,
        }
    }

    // Singular values (descending) and right singular vectors of the
    // complex block: the real embedding of M − e^{iθ}I for Theta, and
    // [Q_graph | −Q_W] for general frames.
    fn complex_svd(&self, m: &DMatrix<f64>) -> (Vec<f64>, CMatrix) {
        match &self.kind {
            BoundarySpec::Theta(t) => {
                let z = Complex64::from_polar(1.0, *t);
                let k = complexify(m) - CMatrix::identity(m.nrows(), m.ncols()) * z;
                let emb = real_embedding(&k);
                let (sv, v) = right_singular(&emb);
                (sv, complexify(&v))
            }
            BoundarySpec::General(_) => {
                let g = self.graph_basis(m);
                let w = self.w_basis.as_ref().expect("set for general frames");
                right_singular_c(&hstack_c(&[&g, &(-w)]))
            }
            _ => unreachable!("real kinds handled separately"),
        }
    }
}

/// End-point nullities of a symplectic matrix for every boundary kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nullities {
    pub l0: usize,
    pub l1: usize,
    pub l0xl1: usize,
    pub l1xl0: usize,
    pub periodic: usize,
}

/// `ν_{L0} = dim ker B`, `ν_{L1} = dim ker C`, `ν_{L0×L1} = dim ker D`,
/// `ν_{L1×L0} = dim ker A`, `ν₁ = dim ker(M − I)`.
pub fn nullities(m: &SymplecticMatrix, rank_tol: f64) -> Nullities {
    let n = m.n();
    let get = |k: BoundarySpec| {
        BlockEvaluator::new(&k, n)
            .expect("standard kind")
            .nullity(m.matrix(), rank_tol)
    };
    Nullities {
        l0: get(BoundarySpec::L0),
        l1: get(BoundarySpec::L1),
        l0xl1: get(BoundarySpec::L0xL1),
        l1xl0: get(BoundarySpec::L1xL0),
        periodic: get(BoundarySpec::Periodic),
    }
}

/// Nullity of `M` for one boundary, including Theta and general frames.
pub fn nullity(m: &SymplecticMatrix, kind: &BoundarySpec, rank_tol: f64) -> Result<usize> {
    Ok(BlockEvaluator::new(kind, m.n())?.nullity(m.matrix(), rank_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::RANK_TOL;
    use std::f64::consts::PI;

    #[test]
    fn identity_nullities() {
        let m = SymplecticMatrix::identity(1);
        let v = nullities(&m, RANK_TOL);
        assert_eq!((v.l0, v.l1, v.periodic, v.l0xl1, v.l1xl0), (1, 1, 2, 0, 0));
    }

    #[test]
    fn shear_example_nullities() {
        let m = SymplecticMatrix::new(
            DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 1.0, -1.0]),
            1e-10,
        )
        .unwrap();
        let v = nullities(&m, RANK_TOL);
        assert_eq!((v.l0, v.l1, v.periodic), (0, 0, 0));
    }

    #[test]
    fn minus_identity_theta_pi() {
        let m = SymplecticMatrix::new(-DMatrix::identity(2, 2), 1e-10).unwrap();
        let k = BoundarySpec::theta(PI).unwrap();
        assert_eq!(nullity(&m, &k, RANK_TOL).unwrap(), 2);
    }

    #[test]
    fn general_frame_agrees_with_block_kinds() {
        let t = 0.9f64;
        let m = DMatrix::from_row_slice(4, 4, &[
            t.cos(), 0.0, -t.sin(), 0.0,
            0.0, 1.0, 0.0, 0.0,
            t.sin(), 0.0, t.cos(), 0.0,
            0.0, 0.0, 0.0, 1.0,
        ]);
        let m = SymplecticMatrix::new(m, 1e-10).unwrap();
        for kind in BoundarySpec::standard() {
            let general = BoundarySpec::General(kind.frame(2));
            assert_eq!(
                nullity(&m, &kind, RANK_TOL).unwrap(),
                nullity(&m, &general, RANK_TOL).unwrap(),
                "{kind}"
            );
        }
    }

    #[test]
    fn theta_zero_is_rejected() {
        assert!(BoundarySpec::theta(0.0).is_err());
        assert!(BoundarySpec::theta(2.0 * PI).is_err());
        assert!("theta:1.5".parse::<BoundarySpec>().is_ok());
    }
}
