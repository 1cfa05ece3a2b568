//! Maslov-type indices of symplectic paths under Lagrangian boundary
//! conditions, brake iterations, index identities, and certification of
//! brake periodic orbits.
//!
//! The crate is organized bottom-up:
//!
//! * [`symcore`]: symplectic and Lagrangian linear algebra, signatures, the
//!   triple Hermitian form.
//! * [`matrizant`]: coefficient paths `B(t)` and fundamental solutions of
//!   `ẋ = JB(t)x`.
//! * [`index`]: crossing-form Maslov indices, triple and Hörmander indices.
//! * [`iteration`]: brake iteration, concatenation, time shift and the
//!   identity/inequality verifiers.
//! * [`variational`]: Fenchel conjugates, the `Π` operator, the Galerkin dual
//!   form, conjugate points and relative Morse indices.
//! * [`orbit`]: shooting for brake orbits and their certification.
//! * [`golden`]: reference cases with exact answers.

pub mod error;
pub mod golden;
pub mod index;
pub mod iteration;
pub mod matrizant;
pub mod orbit;
pub mod symcore;
pub mod variational;

pub use error::{Error, Result};
pub use index::{
    hormander, index_suite, maslov, nullities, triple_index, BoundarySpec, Crossing, IndexReport,
    IndexSuite, Nullities,
};
pub use orbit::{shoot, BrakeOrbit, HamiltonianSpec};
pub use matrizant::{brake_extend, matrizant, sample_coefficient_path, CoefficientPath, SymplecticPath};
pub use symcore::{
    check_symplectic, intersection_dim, signature, signature_hermitian, triple_form,
    LagrangianFrame, SignatureTriple, SymplecticMatrix, Tolerances,
};
