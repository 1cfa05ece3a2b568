//! Fundamental solutions `γ` of `ẋ = JB(t)x` and sampled symplectic paths.

use nalgebra::DMatrix;

use super::coefficient::{CoefficientPath, Side};
use crate::error::{Error, Result};
use crate::symcore::signature::symmetry_residual;
use crate::symcore::symplectic::{check_symplectic, j_matrix};

/// Default number of integration steps.
pub const DEFAULT_STEPS: usize = 4096;
/// Sample count above which stored samples are decimated.
pub const MAX_STORED: usize = 8192;
/// Steps between symplectic re-projections.
pub const PROJECT_EVERY: usize = 64;

/// A sampled path in `Sp(2n)`, optionally carrying its coefficient path.
#[derive(Debug, Clone)]
pub struct SymplecticPath {
    n: usize,
    times: Vec<f64>,
    mats: Vec<DMatrix<f64>>,
    source: Option<CoefficientPath>,
    steps: usize,
    /// Integration step used to evaluate between samples.
    h: f64,
}

/// `J M` computed by moving rows.
pub fn apply_j(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows() / 2;
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        if i < n {
            -m[(i + n, j)]
        } else {
            m[(i - n, j)]
        }
    })
}

/// One classical RK4 step of `γ̇ = JB(t)γ` over `[t, t + h]`.
pub fn rk4_step(b: &CoefficientPath, t: f64, h: f64, g: &DMatrix<f64>) -> DMatrix<f64> {
    let b0 = b.eval(t, Side::Right);
    let bm = b.eval(t + 0.5 * h, Side::Right);
    let b1 = b.eval(t + h, Side::Left);
    let k1 = apply_j(&(&b0 * g));
    let k2 = apply_j(&(&bm * (g + &k1 * (0.5 * h))));
    let k3 = apply_j(&(&bm * (g + &k2 * (0.5 * h))));
    let k4 = apply_j(&(&b1 * (g + &k3 * h)));
    g + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Iterative correction `M ← ½(M + J⁻¹M⁻ᵀJ)` toward `Sp(2n)`.
pub fn project_symplectic(m: &DMatrix<f64>, iterations: usize) -> DMatrix<f64> {
    let n = m.nrows() / 2;
    let j = j_matrix(n);
    let mut out = m.clone();
    for _ in 0..iterations {
        let Some(inv) = out.clone().try_inverse() else {
            break;
        };
        // J⁻¹ = −J.
        let corr = -(&j * inv.transpose() * &j);
        out = (&out + corr) * 0.5;
    }
    out
}

/// Integrates `γ̇ = JB(t)γ` from `start` over `[t0, t1]` in `substeps` steps.
pub fn integrate(
    b: &CoefficientPath,
    start: &DMatrix<f64>,
    t0: f64,
    t1: f64,
    substeps: usize,
) -> DMatrix<f64> {
    let mut g = start.clone();
    if t1 <= t0 {
        return g;
    }
    let h = (t1 - t0) / substeps.max(1) as f64;
    for k in 0..substeps.max(1) {
        let t = t0 + k as f64 * h;
        g = rk4_step(b, t, h, &g);
    }
    g
}

/// Fundamental solution of `ẋ = JB(t)x` on `[0, τ]`.
///
/// The grid is uniform with `steps` intervals, refined so that breakpoints of
/// `B` are grid points.
pub fn matrizant(b: &CoefficientPath, steps: usize) -> Result<SymplecticPath> {
    if steps < 16 {
        return Err(Error::StepCountTooSmall(steps));
    }
    let tau = b.tau();
    let n = b.n();
    let grid = build_grid(tau, steps, &b.breakpoints());

    let mut g = DMatrix::<f64>::identity(2 * n, 2 * n);
    let mut all_t = Vec::with_capacity(grid.len());
    let mut all_m = Vec::with_capacity(grid.len());
    all_t.push(0.0);
    all_m.push(g.clone());
    for (k, w) in grid.windows(2).enumerate() {
        let (t0, t1) = (w[0], w[1]);
        let bt = b.eval(t0, Side::Right);
        let residual = symmetry_residual(&bt);
        if residual > 1e-12 * bt.amax().max(1.0) {
            return Err(Error::NonSymmetricCoefficient { t: t0, residual });
        }
        g = rk4_step(b, t0, t1 - t0, &g);
        if (k + 1) % PROJECT_EVERY == 0 {
            g = project_symplectic(&g, 2);
        }
        all_t.push(t1);
        all_m.push(g.clone());
    }
    let last = all_m.len() - 1;
    all_m[last] = project_symplectic(&all_m[last], 1);

    let (times, mats) = decimate(all_t, all_m, &b.breakpoints());
    Ok(SymplecticPath {
        n,
        times,
        mats,
        source: Some(b.clone()),
        steps,
        h: tau / steps as f64,
    })
}

fn build_grid(tau: f64, steps: usize, breakpoints: &[f64]) -> Vec<f64> {
    let h = tau / steps as f64;
    let mut grid: Vec<f64> = (0..=steps).map(|k| k as f64 * h).collect();
    grid[steps] = tau;
    for &b in breakpoints {
        let k = (b / h).round();
        if (k * h - b).abs() <= 1e-9 * h {
            // Snap the nearby grid point onto the breakpoint exactly.
            grid[k as usize] = b;
        } else {
            grid.push(b);
        }
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn decimate(
    times: Vec<f64>,
    mats: Vec<DMatrix<f64>>,
    keep: &[f64],
) -> (Vec<f64>, Vec<DMatrix<f64>>) {
    if times.len() <= MAX_STORED + 1 {
        return (times, mats);
    }
    let stride = (times.len() - 1).div_ceil(MAX_STORED);
    let last = times.len() - 1;
    let mut out_t = Vec::new();
    let mut out_m = Vec::new();
    for (i, (t, m)) in times.into_iter().zip(mats).enumerate() {
        if i % stride == 0 || i == last || keep.contains(&t) {
            out_t.push(t);
            out_m.push(m);
        }
    }
    (out_t, out_m)
}

impl SymplecticPath {
    /// Builds a path from samples. Samples must be symplectic to `1e-8`
    /// (relative to their size) with strictly increasing times starting at 0.
    pub fn from_samples(
        times: Vec<f64>,
        mats: Vec<DMatrix<f64>>,
        source: Option<CoefficientPath>,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != mats.len() {
            return Err(Error::InvalidInput("a path needs matching, nonempty samples".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidInput("sample times must start at 0".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("sample times must increase strictly".into()));
        }
        let n = mats[0].nrows() / 2;
        for m in &mats {
            if m.shape() != (2 * n, 2 * n) {
                return Err(Error::DimensionMismatch {
                    expected: 2 * n,
                    got: m.nrows(),
                });
            }
            let scale = m.amax().max(1.0);
            let residual = check_symplectic(m);
            if residual > 1e-8 * scale * scale {
                return Err(Error::NotSymplectic { residual });
            }
        }
        if let Some(b) = &source {
            if b.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: b.n(),
                });
            }
        }
        let tau = *times.last().expect("nonempty");
        let steps = times.len() - 1;
        let h = if steps == 0 { 0.0 } else { tau / steps as f64 };
        Ok(SymplecticPath {
            n,
            times,
            mats,
            source,
            steps,
            h,
        })
    }

    /// Constant path at `I` on `[0, τ]` with `B ≡ 0`, or the trivial
    /// zero-duration path when `τ = 0`.
    pub fn trivial(n: usize, tau: f64) -> Self {
        let id = DMatrix::identity(2 * n, 2 * n);
        if tau == 0.0 {
            return SymplecticPath {
                n,
                times: vec![0.0],
                mats: vec![id],
                source: None,
                steps: 0,
                h: 0.0,
            };
        }
        let source = CoefficientPath::constant(DMatrix::zeros(2 * n, 2 * n), tau).ok();
        SymplecticPath {
            n,
            times: vec![0.0, tau],
            mats: vec![id.clone(), id],
            source,
            steps: 1,
            h: tau,
        }
    }

    pub(crate) fn from_parts(
        times: Vec<f64>,
        mats: Vec<DMatrix<f64>>,
        source: Option<CoefficientPath>,
        steps: usize,
        h: f64,
    ) -> Self {
        let n = mats[0].nrows() / 2;
        SymplecticPath {
            n,
            times,
            mats,
            source,
            steps,
            h,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[DMatrix<f64>] {
        &self.mats
    }

    pub fn source(&self) -> Option<&CoefficientPath> {
        self.source.as_ref()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Nominal integration step.
    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn start(&self) -> &DMatrix<f64> {
        &self.mats[0]
    }

    pub fn end(&self) -> &DMatrix<f64> {
        self.mats.last().expect("nonempty")
    }

    /// Largest symplectic residual over the stored samples.
    pub fn max_residual(&self) -> f64 {
        self.mats.iter().map(check_symplectic).fold(0.0, f64::max)
    }

    /// Index of the last sample at or before `t`.
    pub fn sample_index(&self, t: f64) -> usize {
        match self.times.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        }
    }

    /// `γ(t)`: exact at samples; between samples integrated from the
    /// preceding sample with the source path, or linearly interpolated when
    /// the path carries no source.
    pub fn at(&self, t: f64) -> DMatrix<f64> {
        let t = t.clamp(0.0, self.tau());
        let i = self.sample_index(t);
        let t0 = self.times[i];
        if t == t0 || i + 1 == self.times.len() {
            return self.mats[i].clone();
        }
        match &self.source {
            Some(b) => {
                let sub = ((t - t0) / self.h.max(f64::MIN_POSITIVE)).ceil().max(1.0) as usize;
                integrate(b, &self.mats[i], t0, t, sub)
            }
            None => {
                let t1 = self.times[i + 1];
                let w = (t - t0) / (t1 - t0);
                &self.mats[i] * (1.0 - w) + &self.mats[i + 1] * w
            }
        }
    }

    /// `t ↦ γ(t)P`.
    pub fn right_multiply(&self, p: &DMatrix<f64>) -> Self {
        SymplecticPath {
            n: self.n,
            times: self.times.clone(),
            mats: self.mats.iter().map(|m| m * p).collect(),
            source: self.source.clone(),
            steps: self.steps,
            h: self.h,
        }
    }

    /// Same samples, different source (for perturbation retries and tests).
    pub fn with_source(mut self, source: Option<CoefficientPath>) -> Self {
        self.source = source;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rotation(t: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
    }

    #[test]
    fn zero_coefficients_give_identity() {
        let b = CoefficientPath::constant(DMatrix::zeros(2, 2), 1.0).unwrap();
        let g = matrizant(&b, 64).unwrap();
        assert!(g.samples().iter().all(|m| *m == DMatrix::identity(2, 2)));
    }

    #[test]
    fn identity_coefficients_rotate() {
        let b = CoefficientPath::identity(1, PI / 2.0).unwrap();
        let g = matrizant(&b, DEFAULT_STEPS).unwrap();
        assert!((g.end() - rotation(PI / 2.0)).amax() < 1e-8);
        assert_eq!(g.end()[(0, 1)].signum(), -1.0);

        let b = CoefficientPath::identity(1, 2.0 * PI).unwrap();
        let g = matrizant(&b, DEFAULT_STEPS).unwrap();
        assert!((g.end() - DMatrix::identity(2, 2)).amax() < 1e-8);
    }

    #[test]
    fn too_few_steps() {
        let b = CoefficientPath::identity(1, 1.0).unwrap();
        assert_eq!(matrizant(&b, 8).unwrap_err(), Error::StepCountTooSmall(8));
    }

    #[test]
    fn evaluation_between_samples_is_accurate() {
        let b = CoefficientPath::identity(1, 3.0).unwrap();
        let g = matrizant(&b, 256).unwrap();
        assert!((g.at(1.2345) - rotation(1.2345)).amax() < 1e-9);
    }

    #[test]
    fn projection_fixes_a_perturbed_symplectic_matrix() {
        let mut m = rotation(0.4);
        m[(0, 0)] += 1e-6;
        let p = project_symplectic(&m, 2);
        assert!(check_symplectic(&p) < 1e-14);
    }

    #[test]
    fn decimation_keeps_endpoints() {
        let b = CoefficientPath::identity(1, 1.0).unwrap();
        let g = matrizant(&b, 20000).unwrap();
        assert!(g.times().len() <= MAX_STORED + 2);
        assert_eq!(g.times()[0], 0.0);
        assert_eq!(g.tau(), 1.0);
    }
}
