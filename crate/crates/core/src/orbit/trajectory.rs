//! Integration of brake orbits on the half period and Newton shooting.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::hamiltonian::{apply_j_vec, reflect, HamiltonianSpec};
use crate::error::{Error, Result};
use crate::matrizant::{apply_j, CoefficientPath, HessianSource};
use crate::symcore::linalg::singular_values;

/// RK4 steps on `[0, T/2]`.
pub const ORBIT_STEPS: usize = 8192;
/// Convergence threshold on `‖p(T/2)‖`.
pub const SHOOT_TOL: f64 = 1e-10;
pub const SHOOT_MAX_ITER: usize = 50;
/// A Jacobian block with `σ_min ≤ SINGULAR_TOL · max(1, σ_max)` is singular.
pub const SINGULAR_TOL: f64 = 1e-9;

/// End state of the half-period flow, optionally with its variational matrizant.
struct HalfFlow {
    states: Vec<DVector<f64>>,
    variation: Option<DMatrix<f64>>,
}

fn half_flow(spec: &HamiltonianSpec, half: f64, q0: &DVector<f64>, steps: usize, variation: bool) -> HalfFlow {
    let n = spec.n();
    let h = half / steps as f64;
    let mut x = DVector::zeros(2 * n);
    x.rows_mut(n, n).copy_from(q0);
    let mut phi = variation.then(|| DMatrix::identity(2 * n, 2 * n));
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x.clone());
    let lin = |y: &DVector<f64>, m: &DMatrix<f64>| apply_j(&(spec.hessian(y) * m));
    for _ in 0..steps {
        let x2 = &x + spec.field(&x) * (0.5 * h);
        let k1 = spec.field(&x);
        let k2 = spec.field(&x2);
        let x3 = &x + &k2 * (0.5 * h);
        let k3 = spec.field(&x3);
        let x4 = &x + &k3 * h;
        let k4 = spec.field(&x4);
        if let Some(m) = phi.as_mut() {
            let m1 = lin(&x, m);
            let m2 = lin(&x2, &(&*m + &m1 * (0.5 * h)));
            let m3 = lin(&x3, &(&*m + &m2 * (0.5 * h)));
            let m4 = lin(&x4, &(&*m + &m3 * h));
            *m += (m1 + m2 * 2.0 + m3 * 2.0 + m4) * (h / 6.0);
        }
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        states.push(x.clone());
    }
    HalfFlow { states, variation: phi }
}

/// A `T`-periodic brake solution sampled on `[0, T/2]` and extended by
/// `x(−t) = N x(t)`.
#[derive(Debug, Clone, Serialize)]
pub struct BrakeOrbit {
    pub hamiltonian: HamiltonianSpec,
    pub period: f64,
    pub q0: Vec<f64>,
    pub steps: usize,
    /// `‖p(T/2)‖`.
    pub residual: f64,
    /// `max |H(x(t)) − H(x(0))|` over the half-period samples.
    pub energy_drift: f64,
    pub energy: f64,
    pub newton_iterations: usize,
    #[serde(skip)]
    states: Vec<DVector<f64>>,
    #[serde(skip)]
    velocities: Vec<DVector<f64>>,
}

impl BrakeOrbit {
    /// Integrates from `(0, q₀)` without any boundary correction.
    pub fn integrate(spec: &HamiltonianSpec, period: f64, q0: &[f64], steps: usize) -> Result<Self> {
        spec.validate()?;
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidInput(format!("period must be positive, got {period}")));
        }
        if q0.len() != spec.n() {
            return Err(Error::DimensionMismatch { expected: spec.n(), got: q0.len() });
        }
        if steps < 16 {
            return Err(Error::StepCountTooSmall(steps));
        }
        let flow = half_flow(spec, 0.5 * period, &DVector::from_column_slice(q0), steps, false);
        Ok(Self::from_states(spec, period, q0.to_vec(), steps, flow.states, 0))
    }

    fn from_states(
        spec: &HamiltonianSpec,
        period: f64,
        q0: Vec<f64>,
        steps: usize,
        states: Vec<DVector<f64>>,
        newton_iterations: usize,
    ) -> Self {
        let n = spec.n();
        let energy = spec.value(&states[0]);
        let energy_drift = states
            .iter()
            .map(|x| (spec.value(x) - energy).abs())
            .fold(0.0, f64::max);
        let residual = states[steps].rows(0, n).norm();
        let velocities = states.iter().map(|x| spec.field(x)).collect();
        BrakeOrbit {
            hamiltonian: spec.clone(),
            period,
            q0,
            steps,
            residual,
            energy_drift,
            energy,
            newton_iterations,
            states,
            velocities,
        }
    }

    pub fn n(&self) -> usize {
        self.hamiltonian.n()
    }

    pub fn half_period(&self) -> f64 {
        0.5 * self.period
    }

    /// Grid times on `[0, T/2]`.
    pub fn times(&self) -> Vec<f64> {
        let h = self.half_period() / self.steps as f64;
        (0..=self.steps).map(|i| i as f64 * h).collect()
    }

    /// Grid states on `[0, T/2]`.
    pub fn half_states(&self) -> &[DVector<f64>] {
        &self.states
    }

    /// Grid velocities `ẋ = JH'(x)` on `[0, T/2]`.
    pub fn half_velocities(&self) -> &[DVector<f64>] {
        &self.velocities
    }

    /// `x(t)` for any real `t`, by periodicity, reflection and cubic Hermite
    /// interpolation of the half-period grid.
    pub fn state(&self, t: f64) -> DVector<f64> {
        let r = t - self.period * (t / self.period).round();
        if r < 0.0 {
            reflect(&self.half_state(-r))
        } else {
            self.half_state(r)
        }
    }

    fn half_state(&self, t: f64) -> DVector<f64> {
        let h = self.half_period() / self.steps as f64;
        let t = t.clamp(0.0, self.half_period());
        let i = ((t / h).floor() as usize).min(self.steps - 1);
        let s = (t - i as f64 * h) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        &self.states[i] * h00
            + &self.velocities[i] * (h10 * h)
            + &self.states[i + 1] * h01
            + &self.velocities[i + 1] * (h11 * h)
    }

    /// Both end points lie in `L0 = {p = 0}` within `tol`.
    pub fn ends_in_l0(&self, tol: f64) -> bool {
        let n = self.n();
        self.states[0].rows(0, n).norm() <= tol && self.states[self.steps].rows(0, n).norm() <= tol
    }

    /// `B(t) = H''(x(t))` on `[0, T/2]`.
    pub fn coefficient_path(&self) -> Result<CoefficientPath> {
        CoefficientPath::from_hessian(Arc::new(OrbitHessian { orbit: Arc::new(self.clone()) }), self.half_period())
    }

    /// The same solution read as a `k·T`-periodic orbit.
    pub fn repeated(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("repetition count must be positive".into()));
        }
        let mut out = Self::integrate(&self.hamiltonian, self.period * k as f64, &self.q0, self.steps * k)?;
        out.newton_iterations = self.newton_iterations;
        Ok(out)
    }

    /// Samples on `[−T/2, T/2]` as CSV rows `t,p…,q…`.
    pub fn to_csv(&self) -> String {
        let n = self.n();
        let mut out = String::from("t");
        for k in 0..n {
            out.push_str(&format!(",p{k}"));
        }
        for k in 0..n {
            out.push_str(&format!(",q{k}"));
        }
        out.push('\n');
        let times = self.times();
        let rows = (1..=self.steps)
            .rev()
            .map(|i| (-times[i], reflect(&self.states[i])))
            .chain((0..=self.steps).map(|i| (times[i], self.states[i].clone())));
        for (t, x) in rows {
            out.push_str(&format!("{t:.12e}"));
            for v in x.iter() {
                out.push_str(&format!(",{v:.12e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Newton shooting on `q₀ ↦ p(T/2)` with step halving.
pub fn shoot(spec: &HamiltonianSpec, period: f64, q0_guess: &[f64]) -> Result<BrakeOrbit> {
    shoot_with(spec, period, q0_guess, ORBIT_STEPS)
}

pub fn shoot_with(spec: &HamiltonianSpec, period: f64, q0_guess: &[f64], steps: usize) -> Result<BrakeOrbit> {
    // validates everything that `shoot` relies on
    BrakeOrbit::integrate(spec, period, q0_guess, 16)?;
    if steps < 16 {
        return Err(Error::StepCountTooSmall(steps));
    }
    let n = spec.n();
    let half = 0.5 * period;
    let mut q = DVector::from_column_slice(q0_guess);
    let mut flow = half_flow(spec, half, &q, steps, true);
    for iteration in 0..=SHOOT_MAX_ITER {
        let r = flow.states[steps].rows(0, n).into_owned();
        let rn = r.norm();
        let jac = shooting_jacobian_of(&flow, n);
        let sv = singular_values(&jac);
        if sv[n - 1] <= SINGULAR_TOL * sv[0].max(1.0) {
            return Err(Error::SingularJacobian { singular_values: sv });
        }
        if rn <= SHOOT_TOL {
            return Ok(BrakeOrbit::from_states(spec, period, q.iter().copied().collect(), steps, flow.states, iteration));
        }
        if iteration == SHOOT_MAX_ITER {
            break;
        }
        let delta = jac.lu().solve(&(-&r)).ok_or(Error::SingularJacobian { singular_values: sv })?;
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let trial = &q + &delta * alpha;
            let f = half_flow(spec, half, &trial, steps, true);
            if f.states[steps].rows(0, n).norm() < rn {
                accepted = Some((trial, f));
                break;
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((trial, f)) => {
                q = trial;
                flow = f;
            }
            None => {
                return Err(Error::NoConvergence {
                    what: "shooting line search".into(),
                    iterations: iteration,
                    residual: rn,
                })
            }
        }
    }
    Err(Error::NoConvergence {
        what: "shooting".into(),
        iterations: SHOOT_MAX_ITER,
        residual: flow.states[steps].rows(0, n).norm(),
    })
}

fn shooting_jacobian_of(flow: &HalfFlow, n: usize) -> DMatrix<f64> {
    flow.variation
        .as_ref()
        .expect("variation was integrated")
        .view((0, n), (n, n))
        .into_owned()
}

/// `∂p(T/2)/∂q₀`, the upper-right block of the variational matrizant.
pub fn shooting_jacobian(spec: &HamiltonianSpec, period: f64, q0: &[f64], steps: usize) -> DMatrix<f64> {
    let flow = half_flow(spec, 0.5 * period, &DVector::from_column_slice(q0), steps, true);
    shooting_jacobian_of(&flow, spec.n())
}

/// `p(T/2)` as a function of `q₀`.
pub fn shooting_map(spec: &HamiltonianSpec, period: f64, q0: &[f64], steps: usize) -> DVector<f64> {
    let flow = half_flow(spec, 0.5 * period, &DVector::from_column_slice(q0), steps, false);
    flow.states[steps].rows(0, spec.n()).into_owned()
}

/// `H''(x(t))` along a brake orbit.
#[derive(Debug)]
struct OrbitHessian {
    orbit: Arc<BrakeOrbit>,
}

impl HessianSource for OrbitHessian {
    fn n(&self) -> usize {
        self.orbit.n()
    }
    fn hessian(&self, t: f64) -> DMatrix<f64> {
        self.orbit.hamiltonian.hessian(&self.orbit.state(t))
    }
    fn to_json(&self) -> Option<serde_json::Value> {
        serde_json::to_value(OrbitCoeffs {
            hamiltonian: self.orbit.hamiltonian.clone(),
            period: self.orbit.period,
            q0: self.orbit.q0.clone(),
            steps: self.orbit.steps,
        })
        .ok()
    }
}

/// `coeffs` payload of the `orbit` coefficient-path kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitCoeffs {
    pub hamiltonian: HamiltonianSpec,
    pub period: f64,
    pub q0: Vec<f64>,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_steps() -> usize {
    ORBIT_STEPS
}

/// Rebuilds the Hessian path of an orbit from its JSON description; `tau`
/// must be the half period.
pub fn orbit_coefficient_path(coeffs: &serde_json::Value, tau: f64) -> Result<CoefficientPath> {
    let c: OrbitCoeffs = serde_json::from_value(coeffs.clone())
        .map_err(|e| Error::InvalidInput(format!("orbit coefficients: {e}")))?;
    if (0.5 * c.period - tau).abs() > 1e-12 * c.period.abs().max(1.0) {
        return Err(Error::InvalidInput(format!(
            "orbit path duration {tau} differs from half the period {}",
            c.period
        )));
    }
    BrakeOrbit::integrate(&c.hamiltonian, c.period, &c.q0, c.steps)?.coefficient_path()
}

/// Velocity `JH'(x)` for callers that only hold a state.
pub fn velocity(spec: &HamiltonianSpec, x: &DVector<f64>) -> DVector<f64> {
    apply_j_vec(&spec.gradient(x))
}
