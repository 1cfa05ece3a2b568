//! Crossing-form computation of Maslov-type indices of `Graph(γ)` against a
//! fixed Lagrangian.
//!
//! Convention: a crossing at `t = 0` contributes `m⁺`, an interior crossing
//! `m⁺ − m⁻`, a crossing at `t = τ` contributes `−m⁻`.

use nalgebra::DMatrix;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::boundary::{matrix_scale, BlockEvaluator, BoundarySpec, Nullities};
use crate::error::{Error, Result};
use crate::matrizant::{CoefficientPath, Side, SymplecticPath};
use crate::symcore::linalg::{complexify, CMatrix};
use crate::symcore::signature::{hermitian_eigenvalues, SignatureTriple};
use crate::symcore::symplectic::SymplecticMatrix;
use crate::symcore::Tolerances;

/// Tag recorded in every report.
pub const CONVENTION: &str = "half-open-mplus";

/// Golden ratio conjugate used by the localization search.
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// One crossing instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub t: f64,
    pub dim: usize,
    pub sig: SignatureTriple,
}

impl Serialize for Crossing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Crossing", 3)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("sig", &self.sig.counts())?;
        st.end()
    }
}

/// Result of a Maslov index computation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    /// Normalized index.
    pub index: i64,
    #[serde(rename = "nullity")]
    pub nullity_at_end: usize,
    pub crossings: Vec<Crossing>,
    pub convention: String,
    /// Normalization that was subtracted from the raw index.
    #[serde(skip)]
    pub shift: i64,
}

impl IndexReport {
    /// The raw Maslov index `Mas{Graph γ, W}` before normalization.
    pub fn raw(&self) -> i64 {
        self.index + self.shift
    }

    /// `index + nullity`.
    pub fn index_plus_nullity(&self) -> i64 {
        self.index + self.nullity_at_end as i64
    }
}

// Per-path data shared by every boundary kind.
struct Scan<'a> {
    path: &'a SymplecticPath,
    /// Bound on the derivative of the normalized indicator.
    lipschitz: f64,
}

impl<'a> Scan<'a> {
    fn new(path: &'a SymplecticPath) -> Self {
        let times = path.times();
        let mats = path.samples();
        let lipschitz = match path.source() {
            Some(b) => {
                let mut l: f64 = 0.0;
                for &t in times {
                    l = l.max(b.eval(t, Side::Left).norm()).max(b.eval(t, Side::Right).norm());
                }
                l
            }
            None => {
                let mut l: f64 = 0.0;
                for i in 1..times.len() {
                    let d = (&mats[i] - &mats[i - 1]).norm()
                        / ((times[i] - times[i - 1]) * matrix_scale(&mats[i - 1]));
                    l = l.max(d);
                }
                l
            }
        };
        Scan {
            path,
            lipschitz: lipschitz.max(1e-3),
        }
    }
}

// A crossing before its form is evaluated.
struct RawCrossing {
    t: f64,
    at_start: bool,
    at_end: bool,
    matrix: DMatrix<f64>,
    kernel: CMatrix,
}

fn locate(scan: &Scan<'_>, eval: &BlockEvaluator, tol: &Tolerances) -> Vec<RawCrossing> {
    let path = scan.path;
    let times = path.times();
    let mats = path.samples();
    let last = times.len() - 1;
    let tau = path.tau();
    let h = if path.step() > 0.0 { path.step() } else { tau };
    let s: Vec<f64> = mats.iter().map(|m| eval.indicator(m)).collect();
    let max_gap = times
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    let threshold = 2.0 * scan.lipschitz * max_gap + tol.rank;

    let mut found: Vec<RawCrossing> = Vec::new();
    let start_hit = s[0] <= tol.rank;
    let end_hit = last > 0 && s[last] <= tol.rank;
    if start_hit {
        found.push(RawCrossing {
            t: 0.0,
            at_start: true,
            at_end: last == 0,
            matrix: mats[0].clone(),
            kernel: eval.kernel(&mats[0], tol.rank),
        });
    }
    if last == 0 {
        return found;
    }

    let mut interior: Vec<(f64, f64, DMatrix<f64>, f64)> = Vec::new();
    for i in 0..=last {
        let left_ok = i == 0 || s[i] <= s[i - 1];
        let right_ok = i == last || s[i] < s[i + 1];
        if !(left_ok && right_ok) || s[i] > threshold {
            continue;
        }
        if (i == 0 && start_hit) || (i == last && end_hit) {
            continue;
        }
        let a = times[i.saturating_sub(1)];
        let b = times[(i + 1).min(last)];
        let (t_star, s_star, m_star) = golden_search(path, eval, a, b, tau * 1e-10, (times[i], s[i]));
        let accept = tol.rank.max(10.0 * scan.lipschitz * tau * 1e-10);
        if s_star <= accept {
            interior.push((t_star, s_star, m_star, accept));
        }
    }

    // Merge duplicates (the same zero reached from neighbouring minima) and
    // zeros that collapse onto an endpoint crossing. Refined zeros are
    // accurate to about τ·1e-10, so anything further apart is a distinct
    // crossing even when it sits within a grid step.
    interior.sort_by(|x, y| x.0.total_cmp(&y.0));
    let iso = (1e-6 * tau).min(h);
    let mut kept: Vec<(f64, f64, DMatrix<f64>, f64)> = Vec::new();
    for c in interior {
        if start_hit && c.0 <= iso {
            continue;
        }
        if end_hit && c.0 >= tau - iso {
            continue;
        }
        if let Some(prev) = kept.last_mut() {
            if c.0 - prev.0 <= iso {
                if c.1 < prev.1 {
                    *prev = c;
                }
                continue;
            }
        }
        kept.push(c);
    }
    for (t, _, m, accept) in kept {
        let kernel = eval.kernel(&m, accept);
        if kernel.ncols() == 0 {
            continue;
        }
        found.push(RawCrossing {
            t,
            at_start: false,
            at_end: false,
            matrix: m,
            kernel,
        });
    }
    if end_hit {
        found.push(RawCrossing {
            t: tau,
            at_start: false,
            at_end: true,
            matrix: mats[last].clone(),
            kernel: eval.kernel(&mats[last], tol.rank),
        });
    }
    found
}

// Minimizes the indicator on [a, b]; `seed` is the best sampled point.
fn golden_search(
    path: &SymplecticPath,
    eval: &BlockEvaluator,
    mut a: f64,
    mut b: f64,
    width: f64,
    seed: (f64, f64),
) -> (f64, f64, DMatrix<f64>) {
    let f = |t: f64| {
        let m = path.at(t);
        (eval.indicator(&m), m)
    };
    let mut best = (seed.0, seed.1, path.at(seed.0));
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut m1) = f(x1);
    let (mut f2, mut m2) = f(x2);
    while b - a > width {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            m2 = m1;
            x1 = b - GOLDEN * (b - a);
            (f1, m1) = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            m1 = m2;
            x2 = a + GOLDEN * (b - a);
            (f2, m2) = f(x2);
        }
        if f1 < best.1 {
            best = (x1, f1, m1.clone());
        }
        if f2 < best.1 {
            best = (x2, f2, m2.clone());
        }
    }
    best
}

/// Crossing form `Q(x) = ⟨B(t)γx, γx⟩` on the kernel vectors `x`.
fn crossing_form(b: &CoefficientPath, t: f64, side: Side, gamma: &DMatrix<f64>, x: &CMatrix) -> CMatrix {
    let gx = complexify(gamma) * x;
    let bt = complexify(&b.eval(t, side));
    let g = gx.adjoint() * bt * &gx;
    (&g + g.adjoint()).map(|z| z * 0.5)
}

fn classify(form: &CMatrix, zero_tol: f64) -> (SignatureTriple, bool) {
    let eig = hermitian_eigenvalues(form);
    let top = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let band = zero_tol * top.max(1.0);
    let sig = SignatureTriple::from_eigenvalues(eig, band);
    let degenerate = sig.m_zero > 0;
    (sig, degenerate)
}

fn maslov_with(
    scan: &Scan<'_>,
    kind: &BoundarySpec,
    tol: &Tolerances,
) -> Result<IndexReport> {
    let path = scan.path;
    let n = path.n();
    let eval = BlockEvaluator::new(kind, n)?;
    let raw = locate(scan, &eval, tol);
    let mut total: i64 = 0;
    let mut crossings = Vec::with_capacity(raw.len());
    for c in raw {
        let b = path.source().ok_or(Error::MissingCoefficientPath)?;
        // At an endpoint only the one-sided value inside [0, τ] exists.
        let side = if c.at_end { Side::Left } else { Side::Right };
        let form = crossing_form(b, c.t, side, &c.matrix, &c.kernel);
        let (sig, degenerate) = classify(&form, tol.zero);
        if degenerate {
            return Err(Error::DegenerateCrossing {
                t: c.t,
                boundary: kind.name(),
            });
        }
        let contribution = if c.at_start && c.at_end {
            0
        } else if c.at_start {
            sig.m_plus as i64
        } else if c.at_end {
            -(sig.m_minus as i64)
        } else {
            sig.m_plus as i64 - sig.m_minus as i64
        };
        total += contribution;
        crossings.push(Crossing {
            t: c.t,
            dim: c.kernel.ncols(),
            sig,
        });
    }
    let nullity_at_end = eval.nullity(path.end(), tol.rank);
    let shift = kind.shift(n);
    Ok(IndexReport {
        index: total - shift,
        nullity_at_end,
        crossings,
        convention: CONVENTION.to_string(),
        shift,
    })
}

/// Maslov-type index `i_W(γ)` with the nullity at `γ(τ)`.
pub fn maslov(path: &SymplecticPath, kind: &BoundarySpec, tol: &Tolerances) -> Result<IndexReport> {
    maslov_with(&Scan::new(path), kind, tol)
}

/// All five real indices and end-point nullities of one path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexSuite {
    pub l0: IndexReport,
    pub l1: IndexReport,
    pub l0xl1: IndexReport,
    pub l1xl0: IndexReport,
    pub periodic: IndexReport,
    pub nullities: Nullities,
}

/// Runs [`maslov`] for L0, L1, L0×L1, L1×L0 and Periodic on one shared scan.
pub fn index_suite(path: &SymplecticPath, tol: &Tolerances) -> Result<IndexSuite> {
    if path.source().is_none() {
        return Err(Error::MissingCoefficientPath);
    }
    let scan = Scan::new(path);
    let l0 = maslov_with(&scan, &BoundarySpec::L0, tol)?;
    let l1 = maslov_with(&scan, &BoundarySpec::L1, tol)?;
    let l0xl1 = maslov_with(&scan, &BoundarySpec::L0xL1, tol)?;
    let l1xl0 = maslov_with(&scan, &BoundarySpec::L1xL0, tol)?;
    let periodic = maslov_with(&scan, &BoundarySpec::Periodic, tol)?;
    let nullities = Nullities {
        l0: l0.nullity_at_end,
        l1: l1.nullity_at_end,
        l0xl1: l0xl1.nullity_at_end,
        l1xl0: l1xl0.nullity_at_end,
        periodic: periodic.nullity_at_end,
    };
    Ok(IndexSuite {
        l0,
        l1,
        l0xl1,
        l1xl0,
        periodic,
        nullities,
    })
}

/// End-point nullities of a path (convenience over [`super::nullities`]).
pub fn end_nullities(path: &SymplecticPath, tol: &Tolerances) -> Nullities {
    super::boundary::nullities(&SymplecticMatrix::new_unchecked(path.end().clone()), tol.rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrizant::matrizant;
    use std::f64::consts::PI;

    fn rotation_path(tau: f64) -> SymplecticPath {
        matrizant(&CoefficientPath::identity(1, tau).unwrap(), 4096).unwrap()
    }

    #[test]
    fn rotation_three_half_pi_l0() {
        let r = maslov(&rotation_path(1.5 * PI), &BoundarySpec::L0, &Tolerances::default()).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.crossings.len(), 2);
        assert!((r.crossings[1].t - PI).abs() < 1e-8);
        assert_eq!(r.crossings[1].sig.counts(), [1, 0, 0]);
        assert_eq!(r.nullity_at_end, 0);
    }

    #[test]
    fn rotation_full_turn_periodic() {
        let r = maslov(&rotation_path(2.0 * PI), &BoundarySpec::Periodic, &Tolerances::default()).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.nullity_at_end, 2);
        assert_eq!(r.raw(), 2);
    }

    #[test]
    fn rotation_quarter_l0xl1() {
        let r = maslov(&rotation_path(PI / 4.0), &BoundarySpec::L0xL1, &Tolerances::default()).unwrap();
        assert_eq!(r.index, 0);
        assert!(r.crossings.is_empty());
    }

    #[test]
    fn suite_for_quarter_rotation() {
        let s = index_suite(&rotation_path(PI / 4.0), &Tolerances::default()).unwrap();
        assert_eq!((s.l0.index, s.l1.index, s.l0xl1.index), (0, 0, 0));
        assert_eq!(s.nullities, Nullities { l0: 0, l1: 0, l0xl1: 0, l1xl0: 0, periodic: 0 });
    }

    #[test]
    fn zero_coefficients_are_degenerate() {
        let b = CoefficientPath::constant(DMatrix::zeros(2, 2), 1.0).unwrap();
        let g = matrizant(&b, 64).unwrap();
        let e = index_suite(&g, &Tolerances::default()).unwrap_err();
        assert!(matches!(e, Error::DegenerateCrossing { t, .. } if t == 0.0));
    }

    #[test]
    fn missing_source_is_reported() {
        let g = rotation_path(PI).with_source(None);
        assert_eq!(
            maslov(&g, &BoundarySpec::L0, &Tolerances::default()).unwrap_err(),
            Error::MissingCoefficientPath
        );
    }

    #[test]
    fn report_json_layout() {
        let r = maslov(&rotation_path(1.5 * PI), &BoundarySpec::L0, &Tolerances::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["index"], 1);
        assert_eq!(v["nullity"], 0);
        assert_eq!(v["convention"], "half-open-mplus");
        assert_eq!(v["crossings"][1]["sig"], serde_json::json!([1, 0, 0]));
        assert_eq!(v.as_object().unwrap().len(), 4);
    }
}
