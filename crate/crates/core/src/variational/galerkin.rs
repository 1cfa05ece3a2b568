//! Galerkin matrix of the dual quadratic form on the brake-symmetric basis.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrizant::CoefficientPath;
use crate::symcore::json::real_rows;
use crate::symcore::signature::{symmetric_eigenvalues, SignatureTriple};

pub const DEFAULT_MODES: usize = 64;
pub const DEFAULT_PANELS: usize = 256;
pub const QUAD_ORDER: usize = 4;

// 4-point Gauss–Legendre on [−1, 1].
const GAUSS_X: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GAUSS_W: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Matrix of
/// `q(u, u) = ∫_{−T/2}^{T/2} ½[(−JΠu + JΛJΠ²u, u) + ((B(t) + Λ)⁻¹u, u)] dt`
/// on `sin(ωjt)e_k` (`k < n`) and `cos(ωjt)e_k` (`k ≥ n`), `j = 1..J`,
/// ordered mode by mode, with `Λ = diag(λI, 0)`.
#[derive(Debug, Clone, Serialize)]
pub struct GalerkinForm {
    #[serde(with = "real_rows")]
    pub matrix: DMatrix<f64>,
    pub modes: usize,
    pub panels: usize,
    pub quad_order: usize,
    pub period: f64,
    pub lambda: f64,
    #[serde(skip)]
    pub signature: SignatureTriple,
}

impl GalerkinForm {
    pub fn m_minus(&self) -> usize {
        self.signature.m_minus
    }

    pub fn m_zero(&self) -> usize {
        self.signature.m_zero
    }
}

/// Quadrature nodes and weights on `[a, b]`.
fn gauss_nodes(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (b - a) / panels as f64;
    let mut t = Vec::with_capacity(4 * panels);
    let mut w = Vec::with_capacity(4 * panels);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, wx) in GAUSS_X.iter().zip(GAUSS_W) {
            t.push(mid + 0.5 * h * x);
            w.push(0.5 * h * wx);
        }
    }
    (t, w)
}

/// Assembles the dual form for a coefficient path given on the half period
/// `[0, T/2]` (so `T = 2τ`), extended to `[−T/2, 0]` by `B(−t) = NB(t)N`.
pub fn dual_form(b: &CoefficientPath, lambda: f64, modes: usize, panels: usize) -> Result<GalerkinForm> {
    if modes == 0 || panels == 0 {
        return Err(Error::InvalidInput("modes and panels must be positive".into()));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidInput(format!("lambda must be nonnegative, got {lambda}")));
    }
    let n = b.n();
    let half = b.tau();
    let period = 2.0 * half;
    let omega = 2.0 * PI / period;
    let dim = 2 * n * modes;
    let (nodes, weights) = gauss_nodes(0.0, half, panels);
    let q = nodes.len();

    // Entries of (B + Λ)⁻¹ at each node, times the weight.
    let mut minv = vec![DMatrix::<f64>::zeros(q, 1); 4 * n * n];
    for (i, (&t, &w)) in nodes.iter().zip(&weights).enumerate() {
        let mut m = b.at(t);
        for k in 0..n {
            m[(k, k)] += lambda;
        }
        let ch = m.cholesky().ok_or(Error::NotPositiveDefinite { t })?;
        let inv = ch.inverse();
        for c1 in 0..2 * n {
            for c2 in 0..2 * n {
                minv[c1 * 2 * n + c2][(i, 0)] = w * inv[(c1, c2)];
            }
        }
    }
    let sin = DMatrix::from_fn(q, modes, |i, j| (omega * (j + 1) as f64 * nodes[i]).sin());
    let cos = DMatrix::from_fn(q, modes, |i, j| (omega * (j + 1) as f64 * nodes[i]).cos());
    let basis = |c: usize| if c < n { &sin } else { &cos };

    let mut matrix = DMatrix::zeros(dim, dim);
    for c1 in 0..2 * n {
        for c2 in c1..2 * n {
            let wm = &minv[c1 * 2 * n + c2];
            let weighted = DMatrix::from_fn(q, modes, |i, j| basis(c1)[(i, j)] * wm[(i, 0)]);
            let block = weighted.transpose() * basis(c2);
            for j1 in 0..modes {
                for j2 in 0..modes {
                    let v = block[(j1, j2)];
                    matrix[(j1 * 2 * n + c1, j2 * 2 * n + c2)] = v;
                    matrix[(j2 * 2 * n + c2, j1 * 2 * n + c1)] = v;
                }
            }
        }
    }
    for j in 0..modes {
        let wj = omega * (j + 1) as f64;
        let base = j * 2 * n;
        for k in 0..n {
            let (a, bb) = (base + k, base + n + k);
            matrix[(a, bb)] += 0.25 * period / wj;
            matrix[(bb, a)] += 0.25 * period / wj;
            matrix[(bb, bb)] += 0.25 * period * lambda / (wj * wj);
        }
    }
    let eig = symmetric_eigenvalues(&matrix);
    let top = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let signature = SignatureTriple::from_eigenvalues(eig, 1e-9 * top.max(1.0));
    Ok(GalerkinForm {
        matrix,
        modes,
        panels,
        quad_order: QUAD_ORDER,
        period,
        lambda,
        signature,
    })
}

/// `m⁻` at `modes` and at `2·modes`; equal values mean the truncation has stabilized.
pub fn morse_index_pair(b: &CoefficientPath, lambda: f64, modes: usize, panels: usize) -> Result<(usize, usize)> {
    let a = dual_form(b, lambda, modes, panels)?.m_minus();
    let c = dual_form(b, lambda, 2 * modes, panels)?.m_minus();
    Ok((a, c))
}
