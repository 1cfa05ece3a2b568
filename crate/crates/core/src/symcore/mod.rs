//! Dense linear algebra for small symplectic and Lagrangian objects.

pub mod jacobi;
pub mod json;
pub mod lagrangian;
pub mod linalg;
pub mod signature;
pub mod symplectic;

use serde::{Deserialize, Serialize};

pub use lagrangian::{
    decompose, form_matrix, intersection_dim, omega_matrix, triple_form, LagrangianFrame,
    SpaceTag, TripleForm, RANK_TOL,
};
pub use signature::{signature, signature_hermitian, SignatureTriple};
pub use symplectic::{
    check_symplectic, conj_n, j_matrix, n_matrix, random_symplectic, symplectic_inverse,
    SymplecticMatrix, SYMPLECTIC_TOL,
};

/// Default zero band for signatures.
pub const ZERO_TOL: f64 = 1e-9;

/// Numerical tolerances shared by the index computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub symplectic: f64,
    /// Relative singular-value threshold for ranks and kernels.
    pub rank: f64,
    /// Zero band for eigenvalues of forms.
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symplectic: SYMPLECTIC_TOL,
            rank: RANK_TOL,
            zero: ZERO_TOL,
        }
    }
}
