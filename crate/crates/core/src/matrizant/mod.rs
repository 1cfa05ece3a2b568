//! Coefficient paths and the fundamental solutions of `ẋ = JB(t)x`.

pub mod coefficient;
pub mod path;

pub use coefficient::{
    brake_extend, sample_coefficient_path, CoefficientPath, CoefficientPathJson, HessianSource,
    PathFlags, Side, TrigSeries,
};
pub use path::{apply_j, integrate, matrizant, project_symplectic, SymplecticPath, DEFAULT_STEPS};
