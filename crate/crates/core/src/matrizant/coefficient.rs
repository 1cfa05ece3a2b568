//! Symmetric-matrix-valued coefficient paths `B(t)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symcore::json::{matrix_to_rows, rows_to_matrix};
use crate::symcore::linalg::op_norm;
use crate::symcore::signature::symmetry_residual;
use crate::symcore::symplectic::conj_n;

/// Tolerance on `‖B − Bᵀ‖` for stored coefficients.
pub const COEFF_SYMMETRY_TOL: f64 = 1e-12;

/// Which one-sided value to take at a breakpoint of a piecewise path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Something that yields a symmetric Hessian along a trajectory.
pub trait HessianSource: Send + Sync + fmt::Debug {
    fn n(&self) -> usize;
    fn hessian(&self, t: f64) -> DMatrix<f64>;
    /// The `coeffs` payload of the `orbit` JSON kind, if serializable.
    fn to_json(&self) -> Option<serde_json::Value>;
}

/// Trigonometric polynomial `C₀ + Σ_k Cₖ cos(kωt) + Sₖ sin(kωt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    pub c0: DMatrix<f64>,
    pub cos: Vec<DMatrix<f64>>,
    pub sin: Vec<DMatrix<f64>>,
    pub omega: f64,
}

impl TrigSeries {
    fn eval(&self, t: f64) -> DMatrix<f64> {
        let mut b = self.c0.clone();
        for (k, (c, s)) in self.cos.iter().zip(&self.sin).enumerate() {
            let arg = (k + 1) as f64 * self.omega * t;
            b += c * arg.cos() + s * arg.sin();
        }
        b
    }
}

#[derive(Debug)]
enum Kind {
    Constant(DMatrix<f64>),
    Trig(TrigSeries),
    Hessian(Arc<dyn HessianSource>),
    /// `B(t + offset)`, wrapping periodically when the inner path is periodic.
    Shifted { inner: CoefficientPath, offset: f64 },
    /// On `[0, 2S]`: `B(t)` then `N B(2S − t) N`.
    BrakeExtended { inner: CoefficientPath },
    /// Periodic repetition of the inner path.
    Repeated { inner: CoefficientPath },
    /// `B₁` on `[0, τ₁]` followed by `B₂(t − τ₁)`.
    Concat { first: CoefficientPath, second: CoefficientPath },
    /// `N B(S − t) N`.
    Reflected { inner: CoefficientPath },
    /// `B(t) + ε I`.
    Perturbed { inner: CoefficientPath, eps: f64 },
}

/// Flags carried by a coefficient path.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PathFlags {
    pub periodic: bool,
    pub brake: bool,
}

/// A continuous (or piecewise continuous) symmetric `B : [0, τ] → Sym(2n)`.
///
/// Cloning is cheap; derived paths share their parents.
#[derive(Debug, Clone)]
pub struct CoefficientPath {
    n: usize,
    tau: f64,
    flags: PathFlags,
    kind: Arc<Kind>,
}

impl CoefficientPath {
    /// Constant path `B(t) ≡ b`.
    pub fn constant(b: DMatrix<f64>, tau: f64) -> Result<Self> {
        check_shape(&b)?;
        check_tau(tau)?;
        check_symmetric(&b, 0.0)?;
        Ok(CoefficientPath {
            n: b.nrows() / 2,
            tau,
            flags: PathFlags {
                periodic: true,
                brake: false,
            },
            kind: Arc::new(Kind::Constant(b)),
        })
    }

    /// `B ≡ I₂ₙ`.
    pub fn identity(n: usize, tau: f64) -> Result<Self> {
        Self::constant(DMatrix::identity(2 * n, 2 * n), tau)
    }

    /// Trigonometric polynomial with base frequency `2π/τ`.
    pub fn trig(c0: DMatrix<f64>, cos: Vec<DMatrix<f64>>, sin: Vec<DMatrix<f64>>, tau: f64) -> Result<Self> {
        check_shape(&c0)?;
        check_tau(tau)?;
        if cos.len() != sin.len() {
            return Err(Error::InvalidInput(format!(
                "trig path needs as many sine as cosine terms ({} vs {})",
                sin.len(),
                cos.len()
            )));
        }
        for m in std::iter::once(&c0).chain(&cos).chain(&sin) {
            if m.shape() != c0.shape() {
                return Err(Error::DimensionMismatch {
                    expected: c0.nrows(),
                    got: m.nrows(),
                });
            }
            check_symmetric(m, 0.0)?;
        }
        Ok(CoefficientPath {
            n: c0.nrows() / 2,
            tau,
            flags: PathFlags {
                periodic: true,
                brake: false,
            },
            kind: Arc::new(Kind::Trig(TrigSeries {
                c0,
                cos,
                sin,
                omega: 2.0 * std::f64::consts::PI / tau,
            })),
        })
    }

    /// Hessian along a trajectory, `t ∈ [0, τ]`.
    pub fn from_hessian(source: Arc<dyn HessianSource>, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(CoefficientPath {
            n: source.n(),
            tau,
            flags: PathFlags::default(),
            kind: Arc::new(Kind::Hessian(source)),
        })
    }

    pub fn with_flags(mut self, flags: PathFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn flags(&self) -> PathFlags {
        self.flags
    }

    /// `B(t)`, taking the right limit at breakpoints except at `τ`.
    pub fn at(&self, t: f64) -> DMatrix<f64> {
        let side = if t >= self.tau { Side::Left } else { Side::Right };
        self.eval(t, side)
    }

    /// `B(t)` with an explicit one-sided choice at breakpoints.
    pub fn eval(&self, t: f64, side: Side) -> DMatrix<f64> {
        match &*self.kind {
            Kind::Constant(b) => b.clone(),
            Kind::Trig(s) => s.eval(t),
            Kind::Hessian(h) => h.hessian(t),
            Kind::Shifted { inner, offset } => {
                let mut u = t + offset;
                if inner.flags.periodic {
                    u = wrap(u, inner.tau, side);
                }
                inner.eval(u, side)
            }
            Kind::BrakeExtended { inner } => {
                let s = inner.tau;
                if before_split(t, s, side) {
                    inner.eval(t, side)
                } else {
                    let flipped = if side == Side::Left { Side::Right } else { Side::Left };
                    conj_n(&inner.eval(2.0 * s - t, flipped))
                }
            }
            Kind::Repeated { inner } => inner.eval(wrap(t, inner.tau, side), side),
            Kind::Concat { first, second } => {
                let t1 = first.tau;
                if before_split(t, t1, side) {
                    first.eval(t, side)
                } else {
                    second.eval(t - t1, side)
                }
            }
            Kind::Reflected { inner } => {
                let flipped = if side == Side::Left { Side::Right } else { Side::Left };
                conj_n(&inner.eval(inner.tau - t, flipped))
            }
            Kind::Perturbed { inner, eps } => {
                let mut b = inner.eval(t, side);
                for i in 0..b.nrows() {
                    b[(i, i)] += eps;
                }
                b
            }
        }
    }

    /// Times in `(0, τ)` where the path may be discontinuous.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = match &*self.kind {
            Kind::Constant(_) | Kind::Trig(_) | Kind::Hessian(_) => Vec::new(),
            Kind::Shifted { inner, offset } => {
                let mut v: Vec<f64> = inner
                    .breakpoints()
                    .into_iter()
                    .map(|b| b - offset)
                    .collect();
                if inner.flags.periodic {
                    let p = inner.tau;
                    let mut k = (offset / p).floor() + 1.0;
                    while k * p - offset < self.tau {
                        v.push(k * p - offset);
                        for b in inner.breakpoints() {
                            v.push(k * p + b - offset);
                        }
                        k += 1.0;
                    }
                }
                v
            }
            Kind::BrakeExtended { inner } => {
                let s = inner.tau;
                let mut v = inner.breakpoints();
                v.push(s);
                v.extend(inner.breakpoints().into_iter().map(|b| 2.0 * s - b));
                v
            }
            Kind::Repeated { inner } => {
                let p = inner.tau;
                let copies = (self.tau / p).round() as usize;
                let base = inner.breakpoints();
                let mut v = Vec::new();
                for c in 0..copies.max(1) {
                    let off = c as f64 * p;
                    if c > 0 {
                        v.push(off);
                    }
                    v.extend(base.iter().map(|b| b + off));
                }
                v
            }
            Kind::Concat { first, second } => {
                let mut v = first.breakpoints();
                v.push(first.tau);
                v.extend(second.breakpoints().into_iter().map(|b| b + first.tau));
                v
            }
            Kind::Reflected { inner } => inner.breakpoints().into_iter().map(|b| inner.tau - b).collect(),
            Kind::Perturbed { inner, .. } => inner.breakpoints(),
        };
        let eps = 1e-12 * self.tau;
        out.retain(|&b| b > eps && b < self.tau - eps);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() <= eps);
        out
    }

    /// `t ↦ B(t + offset)` on `[0, duration]`.
    pub fn shifted(&self, offset: f64, duration: f64) -> Result<Self> {
        check_tau(duration)?;
        if !self.flags.periodic && offset + duration > self.tau * (1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!(
                "shift {offset} + {duration} leaves the domain [0, {}] of a non-periodic path",
                self.tau
            )));
        }
        Ok(CoefficientPath {
            n: self.n,
            tau: duration,
            flags: PathFlags::default(),
            kind: Arc::new(Kind::Shifted {
                inner: self.clone(),
                offset,
            }),
        })
    }

    /// `k` periodic copies on `[0, kτ]`.
    pub fn repeated(&self, copies: usize) -> Self {
        if copies <= 1 {
            return self.clone();
        }
        CoefficientPath {
            n: self.n,
            tau: self.tau * copies as f64,
            flags: self.flags,
            kind: Arc::new(Kind::Repeated { inner: self.clone() }),
        }
    }

    /// `B₁` then `B₂`.
    pub fn concat(&self, second: &Self) -> Result<Self> {
        if self.n != second.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: second.n,
            });
        }
        Ok(CoefficientPath {
            n: self.n,
            tau: self.tau + second.tau,
            flags: PathFlags::default(),
            kind: Arc::new(Kind::Concat {
                first: self.clone(),
                second: second.clone(),
            }),
        })
    }

    /// `t ↦ N B(τ − t) N`, the coefficient of the time-reversed, N-conjugated path.
    pub fn reflected(&self) -> Self {
        CoefficientPath {
            n: self.n,
            tau: self.tau,
            flags: PathFlags::default(),
            kind: Arc::new(Kind::Reflected { inner: self.clone() }),
        }
    }

    /// `B + ε I`.
    pub fn perturbed(&self, eps: f64) -> Self {
        CoefficientPath {
            n: self.n,
            tau: self.tau,
            flags: self.flags,
            kind: Arc::new(Kind::Perturbed {
                inner: self.clone(),
                eps,
            }),
        }
    }

    /// Largest `‖B − Bᵀ‖` entry over `count + 1` uniform samples.
    pub fn max_asymmetry(&self, count: usize) -> (f64, f64) {
        let mut worst = (0.0, 0.0);
        for i in 0..=count {
            let t = self.tau * i as f64 / count as f64;
            let r = symmetry_residual(&self.at(t));
            if r > worst.0 {
                worst = (r, t);
            }
        }
        worst
    }

    /// Largest `‖N B(τ − t) N − B(t)‖` entry over uniform samples, i.e. the
    /// brake-symmetry defect with the periodic extension `B(−t) = B(τ − t)`.
    pub fn brake_defect(&self, count: usize) -> f64 {
        (0..=count)
            .map(|i| {
                let t = self.tau * i as f64 / count as f64;
                (conj_n(&self.eval(self.tau - t, Side::Left)) - self.eval(t, Side::Right)).amax()
            })
            .fold(0.0, f64::max)
    }

    /// Sup of the operator norm over `count + 1` uniform samples.
    pub fn sup_norm(&self, count: usize) -> f64 {
        (0..=count)
            .map(|i| op_norm(&self.at(self.tau * i as f64 / count as f64)))
            .fold(0.0, f64::max)
    }

    /// Stored trigonometric coefficients, when the path is a trig series or constant.
    pub fn trig_series(&self) -> Option<TrigSeries> {
        match &*self.kind {
            Kind::Trig(s) => Some(s.clone()),
            Kind::Constant(b) => Some(TrigSeries {
                c0: b.clone(),
                cos: Vec::new(),
                sin: Vec::new(),
                omega: 2.0 * std::f64::consts::PI / self.tau,
            }),
            _ => None,
        }
    }

    /// JSON document form. Only stored kinds (constant, trig, orbit) serialize.
    pub fn to_json(&self) -> Result<CoefficientPathJson> {
        let coeffs = match &*self.kind {
            Kind::Constant(b) => ("constant", serde_json::to_value(matrix_to_rows(b)).expect("finite")),
            Kind::Trig(s) => (
                "trig",
                serde_json::to_value(TrigCoeffsJson {
                    c0: matrix_to_rows(&s.c0),
                    cos: s.cos.iter().map(matrix_to_rows).collect(),
                    sin: s.sin.iter().map(matrix_to_rows).collect(),
                })
                .expect("finite"),
            ),
            Kind::Hessian(h) => (
                "orbit",
                h.to_json()
                    .ok_or_else(|| Error::InvalidInput("this Hessian path has no JSON form".into()))?,
            ),
            _ => {
                return Err(Error::InvalidInput(
                    "derived coefficient paths have no JSON form".into(),
                ))
            }
        };
        let mut flags = Vec::new();
        if self.flags.periodic {
            flags.push("periodic".to_string());
        }
        if self.flags.brake {
            flags.push("brake".to_string());
        }
        Ok(CoefficientPathJson {
            n: self.n,
            tau: self.tau,
            kind: coeffs.0.to_string(),
            coeffs: coeffs.1,
            flags,
        })
    }

    /// Builds a path from its JSON document form.
    pub fn from_json(doc: &CoefficientPathJson) -> Result<Self> {
        let path = match doc.kind.as_str() {
            "constant" => {
                let rows: Vec<Vec<f64>> = serde_json::from_value(doc.coeffs.clone())
                    .map_err(|e| Error::InvalidInput(format!("constant coeffs: {e}")))?;
                Self::constant(rows_to_matrix(&rows)?, doc.tau)?
            }
            "trig" => {
                let t: TrigCoeffsJson = serde_json::from_value(doc.coeffs.clone())
                    .map_err(|e| Error::InvalidInput(format!("trig coeffs: {e}")))?;
                let conv = |v: &[Vec<Vec<f64>>]| -> Result<Vec<DMatrix<f64>>> {
                    v.iter().map(|r| rows_to_matrix(r)).collect()
                };
                Self::trig(rows_to_matrix(&t.c0)?, conv(&t.cos)?, conv(&t.sin)?, doc.tau)?
            }
            "orbit" => crate::orbit::orbit_coefficient_path(&doc.coeffs, doc.tau)?,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown coefficient kind '{other}' (expected trig, constant or orbit)"
                )))
            }
        };
        if path.n != doc.n {
            return Err(Error::DimensionMismatch {
                expected: doc.n,
                got: path.n,
            });
        }
        let mut flags = PathFlags::default();
        for f in &doc.flags {
            match f.as_str() {
                "periodic" => flags.periodic = true,
                "brake" => flags.brake = true,
                other => return Err(Error::InvalidInput(format!("unknown flag '{other}'"))),
            }
        }
        let path = path.with_flags(flags);
        if flags.brake {
            let defect = path.brake_defect(256);
            if defect > 1e-10 {
                return Err(Error::InvalidInput(format!(
                    "path flagged brake-symmetric has defect {defect:.3e}"
                )));
            }
        }
        Ok(path)
    }
}

/// Serialized coefficient path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientPathJson {
    pub n: usize,
    pub tau: f64,
    pub kind: String,
    pub coeffs: serde_json::Value,
    #[serde(default)]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrigCoeffsJson {
    c0: Vec<Vec<f64>>,
    #[serde(default)]
    cos: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    sin: Vec<Vec<Vec<f64>>>,
}

/// The extension to `[0, 2S]` with `B(t + S) = N B(S − t) N`, flagged
/// brake-symmetric and `2S`-periodic.
///
/// A path that is already a brake extension is returned unchanged.
pub fn brake_extend(b: &CoefficientPath) -> CoefficientPath {
    if let Kind::BrakeExtended { .. } = &*b.kind {
        return b.clone();
    }
    CoefficientPath {
        n: b.n,
        tau: 2.0 * b.tau,
        flags: PathFlags {
            periodic: true,
            brake: true,
        },
        kind: Arc::new(Kind::BrakeExtended { inner: b.clone() }),
    }
}

/// Deterministic random trigonometric coefficient path of period `tau` with
/// `sup_t ‖B(t)‖ ≤ amplitude`.
pub fn sample_coefficient_path(seed: u64, n: usize, degree: usize, amplitude: f64, tau: f64) -> Result<CoefficientPath> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sym = |rng: &mut ChaCha8Rng| {
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..2 * n {
            for j in i..2 * n {
                let x: f64 = rng.random_range(-1.0..1.0);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        m
    };
    let c0 = sym(&mut rng);
    let mut cos = Vec::with_capacity(degree);
    let mut sin = Vec::with_capacity(degree);
    for _ in 0..degree {
        cos.push(sym(&mut rng));
        sin.push(sym(&mut rng));
    }
    let total: f64 = std::iter::once(&c0).chain(&cos).chain(&sin).map(op_norm).sum();
    let scale = if total > 0.0 { amplitude / total } else { 0.0 };
    CoefficientPath::trig(
        c0 * scale,
        cos.into_iter().map(|m| m * scale).collect(),
        sin.into_iter().map(|m| m * scale).collect(),
        tau,
    )
}

fn wrap(t: f64, period: f64, side: Side) -> f64 {
    let eps = SNAP * period;
    let u = t.rem_euclid(period);
    // Near a multiple of the period the side decides which copy owns the point:
    // the left limit belongs to the end of the previous copy.
    if u < eps || u > period - eps {
        let at_start = t < 0.5 * period;
        if side == Side::Left && !at_start {
            period
        } else {
            0.0
        }
    } else {
        u
    }
}

/// Relative distance below which a time counts as sitting on a breakpoint.
const SNAP: f64 = 1e-12;

/// Whether `t` belongs to the piece ending at `split`, given the side.
fn before_split(t: f64, split: f64, side: Side) -> bool {
    let eps = SNAP * split.max(1.0);
    if (t - split).abs() <= eps {
        side == Side::Left
    } else {
        t < split
    }
}

fn check_shape(b: &DMatrix<f64>) -> Result<()> {
    let (r, c) = b.shape();
    if r != c || r % 2 != 0 || r == 0 {
        return Err(Error::InvalidInput(format!(
            "coefficient matrices must be square of even size, got {r}x{c}"
        )));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidInput(format!("duration must be positive, got {tau}")));
    }
    Ok(())
}

fn check_symmetric(b: &DMatrix<f64>, t: f64) -> Result<()> {
    let residual = symmetry_residual(b);
    if residual > COEFF_SYMMETRY_TOL {
        return Err(Error::NonSymmetricCoefficient { t, residual });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> CoefficientPath {
        // [[1, t], [t, 1]] on [0, 1] as a truncated trig series is awkward, so
        // use a Hessian source.
        #[derive(Debug)]
        struct Ramp;
        impl HessianSource for Ramp {
            fn n(&self) -> usize {
                1
            }
            fn hessian(&self, t: f64) -> DMatrix<f64> {
                DMatrix::from_row_slice(2, 2, &[1.0, t, t, 1.0])
            }
            fn to_json(&self) -> Option<serde_json::Value> {
                None
            }
        }
        CoefficientPath::from_hessian(Arc::new(Ramp), 1.0).unwrap()
    }

    #[test]
    fn brake_extension_of_identity_is_identity() {
        let b = CoefficientPath::identity(2, 1.0).unwrap();
        let e = brake_extend(&b);
        assert_eq!(e.tau(), 2.0);
        assert!(e.flags().brake && e.flags().periodic);
        for t in [0.0, 0.3, 1.0, 1.5, 2.0] {
            assert_eq!(e.at(t), DMatrix::identity(4, 4));
        }
    }

    #[test]
    fn brake_extension_of_ramp() {
        let e = brake_extend(&ramp());
        let want = DMatrix::from_row_slice(2, 2, &[1.0, -0.5, -0.5, 1.0]);
        assert!((e.at(1.5) - want).amax() < 1e-15);
        assert!(e.brake_defect(64) < 1e-15);
        assert_eq!(e.breakpoints(), vec![1.0]);
    }

    #[test]
    fn brake_extension_is_idempotent() {
        let e = brake_extend(&ramp());
        let ee = brake_extend(&e);
        for i in 0..=20 {
            let t = 0.1 * i as f64;
            assert_eq!(e.at(t), ee.at(t));
        }
    }

    #[test]
    fn sampled_path_examples() {
        let p = sample_coefficient_path(0, 2, 0, 1.0, 1.0).unwrap();
        assert_eq!(p.at(0.0), p.at(0.77));
        let a = sample_coefficient_path(7, 2, 3, 2.0, 1.0).unwrap();
        let b = sample_coefficient_path(7, 2, 3, 2.0, 1.0).unwrap();
        assert_eq!(a.trig_series(), b.trig_series());
        assert!(a.sup_norm(200) <= 2.0 + 1e-12);
        let z = sample_coefficient_path(3, 1, 2, 0.0, 1.0).unwrap();
        assert_eq!(z.at(0.4), DMatrix::zeros(2, 2));
    }

    #[test]
    fn non_symmetric_constant_is_rejected() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            CoefficientPath::constant(b, 1.0),
            Err(Error::NonSymmetricCoefficient { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let a = sample_coefficient_path(5, 1, 2, 1.0, 2.0).unwrap();
        let doc = a.to_json().unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back = CoefficientPath::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.trig_series(), a.trig_series());
    }

    #[test]
    fn json_rejects_unknown_fields() {
        let text = r#"{"n":1,"tau":1.0,"kind":"constant","coeffs":[[1,0],[0,1]],"flags":[],"extra":1}"#;
        assert!(serde_json::from_str::<CoefficientPathJson>(text).is_err());
    }

    #[test]
    fn repeated_path_wraps_with_sides() {
        let e = brake_extend(&ramp()).repeated(3);
        assert_eq!(e.tau(), 6.0);
        assert!((e.eval(2.0, Side::Left) - e.eval(0.0, Side::Right)).amax() < 1e-15);
        assert_eq!(e.breakpoints(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn reflection_matches_definition() {
        let r = ramp().reflected();
        let want = conj_n(&ramp().at(0.75));
        assert!((r.at(0.25) - want).amax() < 1e-15);
    }
}
