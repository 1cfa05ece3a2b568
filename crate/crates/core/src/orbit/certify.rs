//! Certification of brake orbits: index suite, Morse/Maslov agreement,
//! action duality and minimal period.

use nalgebra::DVector;
use serde::Serialize;

use super::hamiltonian::{apply_j_vec, ShiftedHamiltonian};
use super::trajectory::BrakeOrbit;
use crate::error::Result;
use crate::index::{index_suite, IndexSuite};
use crate::matrizant::{matrizant, DEFAULT_STEPS};
use crate::symcore::signature::symmetric_eigenvalues;
use crate::symcore::Tolerances;
use crate::variational::{conjugate_points, convexifying_lambda, dual_form, fenchel, ConjugatePoints, DEFAULT_PANELS};

/// Truncations used for the Morse/Maslov comparison.
pub const MORSE_MODES: [usize; 2] = [64, 128];
/// Largest iteration count tried by [`minimal_period`].
pub const MAX_PERIOD_DIVISOR: usize = 32;

/// Galerkin Morse indices, conjugate points and the `L0` index of one orbit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseAgreement {
    pub lambda: f64,
    /// `(modes, m⁻)` per truncation.
    pub morse: Vec<(usize, usize)>,
    pub conjugate: ConjugatePoints,
    pub maslov: i64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitCertificate {
    pub suite: IndexSuite,
    /// `i_L0 ≤ 1 ≤ i_L0 + ν_L0`. Informational only.
    pub index_estimate: bool,
    /// `H_qq(x(t)) > 0` on every grid sample.
    pub positivity: bool,
    pub min_position_eigenvalue: f64,
    /// Present only when `positivity` holds.
    pub morse: Option<MorseAgreement>,
}

/// Index suite of `H''(x(t))` on `[0, T/2]` plus the certification flags.
pub fn orbit_indices(orbit: &BrakeOrbit, tol: &Tolerances, modes: &[usize]) -> Result<OrbitCertificate> {
    let b = orbit.coefficient_path()?;
    let gamma = matrizant(&b, DEFAULT_STEPS)?;
    let suite = index_suite(&gamma, tol)?;
    let i = suite.l0.index;
    let nu = suite.l0.nullity_at_end as i64;
    let index_estimate = i <= 1 && 1 <= i + nu;

    let n = orbit.n();
    let min_position_eigenvalue = orbit
        .half_states()
        .iter()
        .map(|x| {
            let h = orbit.hamiltonian.hessian(x);
            symmetric_eigenvalues(&h.view((n, n), (n, n)).into_owned())[0]
        })
        .fold(f64::INFINITY, f64::min);
    let positivity = min_position_eigenvalue > tol.zero;

    let morse = if positivity {
        let lambda = convexifying_lambda(&b)?;
        let mut counts = Vec::with_capacity(modes.len());
        for &m in modes {
            counts.push((m, dual_form(&b, lambda, m, DEFAULT_PANELS)?.m_minus()));
        }
        let conjugate = conjugate_points(&b, DEFAULT_STEPS, tol)?;
        let agree = counts.iter().all(|&(_, m)| m as i64 == i) && conjugate.sum as i64 == i;
        Some(MorseAgreement { lambda, morse: counts, conjugate, maslov: i, agree })
    } else {
        None
    };

    Ok(OrbitCertificate {
        suite,
        index_estimate,
        positivity,
        min_position_eigenvalue,
        morse,
    })
}

/// Primal and dual actions over one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionValues {
    pub lambda: f64,
    /// `∫ ½(Jẋ, x) + H(x)`.
    pub phi: f64,
    /// `∫ ½(Jẋ − Λx, x) + F*(−Jẋ + Λx)` with `F = H + ½(Λx, x)`.
    pub psi: f64,
    /// `Φ + Ψ`, zero at a solution.
    pub residual: f64,
}

/// Both actions by composite Simpson quadrature on the half-period grid,
/// doubled by the brake symmetry of the integrands. `λ` acts on the `p` block.
pub fn action_values(orbit: &BrakeOrbit, lambda: f64) -> Result<ActionValues> {
    let n = orbit.n();
    let f = ShiftedHamiltonian { spec: &orbit.hamiltonian, lambda };
    let shift = |x: &DVector<f64>| DVector::from_fn(2 * n, |k, _| if k < n { lambda * x[k] } else { 0.0 });
    let mut primal = Vec::with_capacity(orbit.steps + 1);
    let mut dual = Vec::with_capacity(orbit.steps + 1);
    for (x, v) in orbit.half_states().iter().zip(orbit.half_velocities()) {
        let jv = apply_j_vec(v);
        let lx = shift(x);
        primal.push(0.5 * jv.dot(x) + orbit.hamiltonian.value(x));
        let u = &lx - &jv;
        dual.push(0.5 * (&jv - &lx).dot(x) + fenchel(&f, &u)?.value);
    }
    let h = orbit.half_period() / orbit.steps as f64;
    let phi = 2.0 * simpson(&primal, h);
    let psi = 2.0 * simpson(&dual, h);
    Ok(ActionValues { lambda, phi, psi, residual: phi + psi })
}

fn simpson(values: &[f64], h: f64) -> f64 {
    let last = values.len() - 1;
    if last % 2 == 1 {
        // trapezoid fallback for odd interval counts
        return h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[last]));
    }
    let inner: f64 = values[1..last]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    h / 3.0 * (values[0] + values[last] + inner)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalPeriod {
    pub k: usize,
    pub period: f64,
    pub note: Option<String>,
}

/// Largest `k ≤ 32` with `max_t ‖x(t + T/k) − x(t)‖ ≤ tol`.
pub fn minimal_period(orbit: &BrakeOrbit, tol: f64) -> MinimalPeriod {
    let samples = 1024;
    let times: Vec<f64> = (0..samples).map(|i| orbit.period * i as f64 / samples as f64).collect();
    let states: Vec<_> = times.iter().map(|&t| orbit.state(t)).collect();
    let k = (1..=MAX_PERIOD_DIVISOR)
        .rev()
        .find(|&k| {
            let a = orbit.period / k as f64;
            times
                .iter()
                .zip(&states)
                .all(|(&t, x)| (orbit.state(t + a) - x).norm() <= tol)
        })
        .unwrap_or(1);
    let note = (k == MAX_PERIOD_DIVISOR).then(|| {
        format!("every tested shift is a period; the orbit is likely an equilibrium (k capped at {MAX_PERIOD_DIVISOR})")
    });
    MinimalPeriod {
        k,
        period: orbit.period / k as f64,
        note,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{shoot, HamiltonianSpec};
    use std::f64::consts::PI;

    const QUARTIC_PHI: f64 = -0.276586933121457081442006165754;

    fn quartic_orbit() -> BrakeOrbit {
        shoot(&HamiltonianSpec::quartic(1), 5.0, &[1.0]).unwrap()
    }

    #[test]
    fn quartic_orbit_certificate() {
        let orbit = quartic_orbit();
        let cert = orbit_indices(&orbit, &Tolerances::default(), &MORSE_MODES).unwrap();
        assert_eq!(cert.suite.l0.index, 1);
        assert_eq!(cert.suite.l0.nullity_at_end, 0);
        assert!(cert.index_estimate);
        assert!(cert.positivity);
        assert!(cert.min_position_eigenvalue >= 1.0 - 1e-12);
        let morse = cert.morse.unwrap();
        assert_eq!(morse.lambda, 0.0);
        assert_eq!(morse.conjugate.points.len(), 1);
        assert!((morse.conjugate.points[0].0 - 2.0765).abs() < 1e-3);
        assert!(morse.agree, "{morse:?}");
    }

    #[test]
    fn quartic_actions_are_dual() {
        let a = action_values(&quartic_orbit(), 0.0).unwrap();
        assert!((a.phi - QUARTIC_PHI).abs() < 1e-8, "phi = {}", a.phi);
        assert!(a.phi < 0.0);
        assert!(a.residual.abs() <= 1e-6);
        let shifted = action_values(&quartic_orbit(), 2.0).unwrap();
        assert!(shifted.residual.abs() <= 1e-6);
    }

    #[test]
    fn rest_point_has_zero_actions() {
        let orbit = BrakeOrbit::integrate(&HamiltonianSpec::quartic(1), 5.0, &[0.0], 256).unwrap();
        let a = action_values(&orbit, 0.0).unwrap();
        assert_eq!(a.phi, 0.0);
        assert!(a.psi.abs() < 1e-14);
        let mp = minimal_period(&orbit, 1e-8);
        assert_eq!(mp.k, MAX_PERIOD_DIVISOR);
        assert!(mp.note.is_some());
    }

    #[test]
    fn minimal_period_of_simple_and_doubled_orbits() {
        let orbit = quartic_orbit();
        assert_eq!(minimal_period(&orbit, 1e-6).k, 1);
        let doubled = orbit.repeated(2).unwrap();
        let mp = minimal_period(&doubled, 1e-6);
        assert_eq!(mp.k, 2);
        assert!((mp.period - 5.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_circle_has_unit_l0_nullity() {
        let orbit = BrakeOrbit::integrate(&HamiltonianSpec::harmonic(1), 2.0 * PI, &[1.0], 1024).unwrap();
        let cert = orbit_indices(&orbit, &Tolerances::default(), &[16]).unwrap();
        assert_eq!(cert.suite.l0.nullity_at_end, 1);
        assert!(cert.index_estimate);
    }
}
