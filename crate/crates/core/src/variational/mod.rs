//! Finite-dimensional versions of the dual variational objects: Fenchel
//! conjugates, the primitive `Π`, the Galerkin dual form and its Morse index,
//! conjugate points and the relative Morse index.

mod conjugate;
mod fenchel;
pub mod fourier;
mod galerkin;
mod morse;

pub use conjugate::{conjugate_points, convexifying_lambda, ConjugatePoints};
pub use fenchel::{fenchel, Conjugate, ConvexMap, PowerMap, QuadraticMap, FENCHEL_MAX_ITER};
pub use fourier::{derivative, j_pi_mode_matrix, pi_operator, FourierVector};
pub use galerkin::{dual_form, morse_index_pair, GalerkinForm, DEFAULT_MODES, DEFAULT_PANELS, QUAD_ORDER};
pub use morse::{kernel_defect, relative_morse, RelativeMorse};
