//! Brake orbits of reversible Hamiltonian systems: shooting on the half
//! period and certification of the result.

pub mod certify;
pub mod hamiltonian;
pub mod trajectory;

pub use certify::{
    action_values, minimal_period, orbit_indices, ActionValues, MinimalPeriod, MorseAgreement, OrbitCertificate,
    MAX_PERIOD_DIVISOR, MORSE_MODES,
};
pub use hamiltonian::{HamiltonianSpec, Monomial, ShiftedHamiltonian, REVERSIBILITY_TOL};
pub use trajectory::{
    orbit_coefficient_path, shoot, shoot_with, shooting_jacobian, shooting_map, BrakeOrbit, OrbitCoeffs, ORBIT_STEPS,
    SHOOT_MAX_ITER, SHOOT_TOL, SINGULAR_TOL,
};
