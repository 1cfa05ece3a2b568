//! Integer-exact checks of the iteration formulas and endpoint identities.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use super::construct::{brake_iterate, tilde_shift};
use crate::error::{Error, Result};
use crate::index::{maslov, nullities, triple_index, BoundarySpec, IndexReport};
use crate::matrizant::{matrizant, SymplecticPath};
use crate::symcore::signature::{symmetric_eigenvalues, SignatureTriple};
use crate::symcore::symplectic::blocks;
use crate::symcore::{LagrangianFrame, SymplecticMatrix, Tolerances};

/// Size of the `B ± εI` perturbation used after a degenerate crossing.
pub const RETRY_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Equality,
    Inequality,
}

/// One checked statement `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
    pub relation: String,
    pub kind: ClaimKind,
    pub satisfied: bool,
}

impl Claim {
    pub fn eq(name: impl Into<String>, lhs: Vec<i64>, rhs: Vec<i64>) -> Self {
        let satisfied = lhs == rhs;
        Claim {
            name: name.into(),
            lhs,
            rhs,
            relation: "=".into(),
            kind: ClaimKind::Equality,
            satisfied,
        }
    }

    pub fn ge(name: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Claim {
            name: name.into(),
            lhs: vec![lhs],
            rhs: vec![rhs],
            relation: ">=".into(),
            kind: ClaimKind::Inequality,
            satisfied: lhs >= rhs,
        }
    }

    pub fn le(name: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Claim {
            name: name.into(),
            lhs: vec![lhs],
            rhs: vec![rhs],
            relation: "<=".into(),
            kind: ClaimKind::Inequality,
            satisfied: lhs <= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claims: Vec<Claim>,
    pub seed: Option<u64>,
    pub path: String,
    /// Set when a degenerate crossing forced the `B ± εI` retry; the
    /// reported sides are those of the `+ε` run.
    pub retry_epsilon: Option<f64>,
}

impl VerificationReport {
    pub fn all_satisfied(&self) -> bool {
        self.claims.iter().all(|c| c.satisfied)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.satisfied)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_path(mut self, path: impl Into<String>) -> Self {
        self.path = path.into();
        self
    }

    /// Fixed-width text table, one claim per line.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let width = self.claims.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.claims {
            out.push_str(&format!(
                "{:<4} {:<width$}  {:?} {} {:?}\n",
                if c.satisfied { "ok" } else { "FAIL" },
                c.name,
                c.lhs,
                c.relation,
                c.rhs,
            ));
        }
        out
    }
}

/// Re-integrates the source of `g` shifted by `eps·I` with the same step count.
pub fn perturbed_matrizant(g: &SymplecticPath, eps: f64) -> Result<SymplecticPath> {
    let b = g.source().ok_or(Error::MissingCoefficientPath)?;
    matrizant(&b.perturbed(eps), g.steps().max(16))
}

/// Evaluates `claims` on `g`; on a degenerate crossing evaluates them on the
/// `B + εI` and `B − εI` paths and keeps a claim only if it holds in both.
pub fn with_retry<F>(g: &SymplecticPath, mut claims: F) -> Result<VerificationReport>
where
    F: FnMut(&SymplecticPath) -> Result<Vec<Claim>>,
{
    match claims(g) {
        Ok(c) => Ok(VerificationReport {
            claims: c,
            seed: None,
            path: String::new(),
            retry_epsilon: None,
        }),
        Err(Error::DegenerateCrossing { .. }) => {
            let plus = claims(&perturbed_matrizant(g, RETRY_EPSILON)?)?;
            let minus = claims(&perturbed_matrizant(g, -RETRY_EPSILON)?)?;
            let merged = plus
                .into_iter()
                .zip(minus)
                .map(|(mut p, m)| {
                    p.satisfied &= m.satisfied;
                    p
                })
                .collect();
            Ok(VerificationReport {
                claims: merged,
                seed: None,
                path: String::new(),
                retry_epsilon: Some(RETRY_EPSILON),
            })
        }
        Err(e) => Err(e),
    }
}

fn m_plus(s: &DMatrix<f64>, tol: &Tolerances) -> i64 {
    let sym = (s + s.transpose()) * 0.5;
    let eig = symmetric_eigenvalues(&sym);
    let top = eig.iter().map(|x| x.abs()).fold(0.0, f64::max);
    SignatureTriple::from_eigenvalues(eig, tol.zero * top.max(1.0)).m_plus as i64
}

fn block_form(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
    d: &DMatrix<f64>,
) -> DMatrix<f64> {
    crate::symcore::symplectic::from_blocks(a, b, c, d)
}

fn idx(g: &SymplecticPath, kind: &BoundarySpec, tol: &Tolerances) -> Result<IndexReport> {
    maslov(g, kind, tol)
}

/// Bott-type formulas for the brake iterate `γᵏ`, with `β = e^{iπ/k}`.
///
/// Odd `k`: `i_{La}(γᵏ) = i_{La}(γ) + Σ_{j=1}^{(k−1)/2} i_{β^{2j}}(γ²)` and
/// the same for nullities, `a ∈ {0, 1}`. Even `k`: `i_{L0}(γᵏ) = i_{L0}(γ) +
/// i_{L0×L1}(γ) + Σ_{j=1}^{k/2−1} i_{β^{2j}}(γ²)` and the same for nullities.
pub fn verify_bott(g: &SymplecticPath, k: usize, tol: &Tolerances) -> Result<VerificationReport> {
    if k == 0 {
        return Err(Error::InvalidInput("iteration count must be positive".into()));
    }
    if g.source().is_none() {
        return Err(Error::MissingCoefficientPath);
    }
    with_retry(g, |g| bott_claims(g, k, tol))
}

fn bott_claims(g: &SymplecticPath, k: usize, tol: &Tolerances) -> Result<Vec<Claim>> {
    let gk = brake_iterate(g, k)?;
    let g2 = if k >= 2 { Some(brake_iterate(g, 2)?) } else { None };
    let terms = if k % 2 == 1 { (k - 1) / 2 } else { k / 2 - 1 };
    let mut theta_i = 0;
    let mut theta_nu = 0;
    if let Some(g2) = &g2 {
        for j in 1..=terms {
            let r = idx(g2, &BoundarySpec::theta(2.0 * PI * j as f64 / k as f64)?, tol)?;
            theta_i += r.index;
            theta_nu += r.nullity_at_end as i64;
        }
    }
    let kinds: &[BoundarySpec] = if k % 2 == 1 {
        &[BoundarySpec::L0, BoundarySpec::L1]
    } else {
        &[BoundarySpec::L0]
    };
    let extra = if k % 2 == 0 {
        let r = idx(g, &BoundarySpec::L0xL1, tol)?;
        (r.index, r.nullity_at_end as i64)
    } else {
        (0, 0)
    };
    let mut claims = Vec::new();
    for kind in kinds {
        let lhs = idx(&gk, kind, tol)?;
        let base = idx(g, kind, tol)?;
        claims.push(Claim::eq(
            format!("bott k={k} {kind} index"),
            vec![lhs.index],
            vec![base.index + extra.0 + theta_i],
        ));
        claims.push(Claim::eq(
            format!("bott k={k} {kind} nullity"),
            vec![lhs.nullity_at_end as i64],
            vec![base.nullity_at_end as i64 + extra.1 + theta_nu],
        ));
    }
    Ok(claims)
}

/// Endpoint identities relating the indices of one path and of its
/// doubled and time-shifted versions.
pub fn verify_identities(g: &SymplecticPath, tol: &Tolerances) -> Result<VerificationReport> {
    if g.source().is_none() {
        return Err(Error::MissingCoefficientPath);
    }
    with_retry(g, |g| identity_claims(g, tol))
}

fn identity_claims(g: &SymplecticPath, tol: &Tolerances) -> Result<Vec<Claim>> {
    let n = g.n() as i64;
    let end = SymplecticMatrix::new_unchecked(g.end().clone());
    let nul = nullities(&end, tol.rank);
    let (a, b, c, d) = blocks(g.end());
    let (ker_a, ker_c, ker_d) = (nul.l1xl0 as i64, nul.l1 as i64, nul.l0xl1 as i64);

    let l0 = idx(g, &BoundarySpec::L0, tol)?;
    let l1 = idx(g, &BoundarySpec::L1, tol)?;
    let l01 = idx(g, &BoundarySpec::L0xL1, tol)?;
    let l10 = idx(g, &BoundarySpec::L1xL0, tol)?;
    let g2 = brake_iterate(g, 2)?;
    let p2 = idx(&g2, &BoundarySpec::Periodic, tol)?;

    let dtb = m_plus(&(d.transpose() * &b), tol);
    let form_c = m_plus(
        &block_form(
            &(c.transpose() * &a),
            &(c.transpose() * &b),
            &(b.transpose() * &c),
            &(d.transpose() * &b),
        ),
        tol,
    );
    let form_a = m_plus(
        &block_form(
            &(c.transpose() * &a),
            &(a.transpose() * &d),
            &(d.transpose() * &a),
            &(d.transpose() * &b),
        ),
        tol,
    );

    let nu = |r: &IndexReport| r.nullity_at_end as i64;
    let mut claims = vec![
        Claim::eq(
            "doubled periodic index",
            vec![p2.index],
            vec![l0.index + l1.index + n],
        ),
        Claim::eq(
            "doubled periodic nullity",
            vec![nu(&p2)],
            vec![nu(&l0) + nu(&l1)],
        ),
        Claim::eq(
            "L1 index+nullity from L0",
            vec![l1.index_plus_nullity()],
            vec![l0.index_plus_nullity() + form_c - n + ker_c],
        ),
        Claim::eq(
            "L0 index+nullity from L0xL1",
            vec![l0.index_plus_nullity()],
            vec![l01.index - dtb],
        ),
        Claim::eq(
            "L0xL1 index from L1",
            vec![l01.index],
            vec![l1.index_plus_nullity() + dtb - form_c - ker_c + n],
        ),
        Claim::ge(
            "L0xL1 index dominates L1 index+nullity",
            l01.index,
            l1.index_plus_nullity(),
        ),
        Claim::le("|L1xL0 - L0xL1| index gap", (l10.index - l01.index).abs(), n),
        Claim::eq(
            "L1xL0 - L0xL1 index",
            vec![l10.index - l01.index],
            vec![n - form_a - ker_a],
        ),
        Claim::eq(
            "L1xL0 - L0xL1 index+nullity",
            vec![l10.index_plus_nullity() - l01.index_plus_nullity()],
            vec![n - form_a - ker_d],
        ),
    ];

    let shifted2 = brake_iterate(&tilde_shift(g)?, 2)?;
    let t0 = idx(&shifted2, &BoundarySpec::L0, tol)?;
    let g0 = idx(&g2, &BoundarySpec::L0, tol)?;
    claims.push(Claim::eq(
        "shifted doubled L0 index change",
        vec![t0.index - g0.index],
        vec![n - form_a - ker_a],
    ));
    claims.push(Claim::eq(
        "shifted doubled L0 index+nullity change",
        vec![t0.index_plus_nullity() - g0.index_plus_nullity()],
        vec![n - form_a - ker_d],
    ));
    Ok(claims)
}

/// Iteration inequalities for `k ≤ kmax`, plus positivity checks when the
/// diagonal blocks of `B` are positive definite.
pub fn verify_inequalities(
    g: &SymplecticPath,
    kmax: usize,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if !(1..=8).contains(&kmax) {
        return Err(Error::InvalidInput(format!("kmax must be in 1..=8, got {kmax}")));
    }
    if g.source().is_none() {
        return Err(Error::MissingCoefficientPath);
    }
    with_retry(g, |g| inequality_claims(g, kmax, tol))
}

fn inequality_claims(g: &SymplecticPath, kmax: usize, tol: &Tolerances) -> Result<Vec<Claim>> {
    let n = g.n() as i64;
    let mut l0 = Vec::with_capacity(kmax);
    let mut l1 = Vec::with_capacity(kmax);
    let mut periodic2 = None;
    for k in 1..=kmax {
        let gk = brake_iterate(g, k)?;
        l0.push(idx(&gk, &BoundarySpec::L0, tol)?);
        l1.push(idx(&gk, &BoundarySpec::L1, tol)?);
        if k == 2 {
            periodic2 = Some(idx(&gk, &BoundarySpec::Periodic, tol)?);
        }
    }
    let mut claims = Vec::new();
    for (name, reps) in [("L0", &l0), ("L1", &l1)] {
        let mut nu_sum = 0;
        for k in 1..=kmax {
            claims.push(Claim::ge(
                format!("{name} iterate k={k} lower bound"),
                reps[k - 1].index,
                k as i64 * reps[0].index + nu_sum,
            ));
            nu_sum += reps[k - 1].nullity_at_end as i64;
        }
    }
    for k in 1..=kmax {
        claims.push(Claim::ge(
            format!("L0 iterate k={k} index+nullity bound"),
            l0[k - 1].index,
            k as i64 * l0[0].index_plus_nullity() - n,
        ));
    }
    if let Some(p2) = periodic2 {
        for l in 1..=kmax / 2 {
            claims.push(Claim::ge(
                format!("L0 iterate k={} from doubled path", 2 * l),
                l0[2 * l - 1].index,
                l0[1].index + (l as i64 - 1) * (p2.index_plus_nullity() - n),
            ));
        }
    }
    let (b22, b11) = diagonal_blocks_positive(g);
    if b22 {
        claims.push(Claim::ge("L0 index nonnegative", l0[0].index, 0));
        let interior: usize = l0[0]
            .crossings
            .iter()
            .filter(|c| c.t > 0.0 && c.t < g.tau())
            .map(|c| c.dim)
            .sum();
        claims.push(Claim::eq(
            "L0 index counts interior nullities",
            vec![l0[0].index],
            vec![interior as i64],
        ));
    }
    if b11 {
        claims.push(Claim::ge("L1 index nonnegative", l1[0].index, 0));
    }
    Ok(claims)
}

/// Whether `B₂₂(t)` and `B₁₁(t)` are positive definite at all grid samples.
fn diagonal_blocks_positive(g: &SymplecticPath) -> (bool, bool) {
    let Some(src) = g.source() else {
        return (false, false);
    };
    let n = g.n();
    let count = 512;
    let mut b22 = true;
    let mut b11 = true;
    for i in 0..=count {
        let t = g.tau() * i as f64 / count as f64;
        let m = src.at(t);
        if b11 {
            let blk = m.view((0, 0), (n, n)).into_owned();
            b11 = symmetric_eigenvalues(&blk).first().is_some_and(|&x| x > 1e-8);
        }
        if b22 {
            let blk = m.view((n, n), (n, n)).into_owned();
            b22 = symmetric_eigenvalues(&blk).first().is_some_and(|&x| x > 1e-8);
        }
    }
    (b22, b11)
}

/// `Mas{Graph γ, W₂} − Mas{Graph γ, W₁} = i(Graph I, W₁, W₂) − i(Graph γ(τ), W₁, W₂)`
/// for every ordered pair of the L0, L1 and Periodic frames.
pub fn verify_hormander(g: &SymplecticPath, tol: &Tolerances) -> Result<VerificationReport> {
    if g.source().is_none() {
        return Err(Error::MissingCoefficientPath);
    }
    with_retry(g, |g| hormander_claims(g, tol))
}

fn hormander_claims(g: &SymplecticPath, tol: &Tolerances) -> Result<Vec<Claim>> {
    let n = g.n();
    let kinds = [BoundarySpec::L0, BoundarySpec::L1, BoundarySpec::Periodic];
    let raw = kinds
        .iter()
        .map(|k| idx(g, k, tol).map(|r| r.raw()))
        .collect::<Result<Vec<_>>>()?;
    let start = LagrangianFrame::graph(g.start())?;
    let end = LagrangianFrame::graph(g.end())?;
    let mut claims = Vec::new();
    for (i, w1) in kinds.iter().enumerate() {
        for (j, w2) in kinds.iter().enumerate() {
            if i == j {
                continue;
            }
            let (f1, f2) = (w1.frame(n), w2.frame(n));
            let rhs = triple_index(&start, &f1, &f2, tol)? - triple_index(&end, &f1, &f2, tol)?;
            claims.push(Claim::eq(
                format!("hormander {w1} -> {w2}"),
                vec![raw[j] - raw[i]],
                vec![rhs],
            ));
        }
    }
    Ok(claims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iteration::corpus_matrizant;
    use crate::matrizant::CoefficientPath;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn assert_all(r: &VerificationReport) {
        assert!(r.all_satisfied(), "{}", r.table());
    }

    #[test]
    fn rotation_bott_and_inequalities() {
        let b = CoefficientPath::identity(1, 1.0).unwrap();
        let g = matrizant(&b, 512).unwrap();
        for k in 1..=6 {
            assert_all(&verify_bott(&g, k, &tol()).unwrap());
        }
        let r = verify_inequalities(&g, 6, &tol()).unwrap();
        assert_all(&r);
        assert!(r.claims.iter().any(|c| c.name == "L0 index nonnegative"));
    }

    #[test]
    fn rotation_identities() {
        let b = CoefficientPath::identity(2, 0.9).unwrap();
        let g = matrizant(&b, 512).unwrap();
        assert_all(&verify_identities(&g, &tol()).unwrap());
        assert_all(&verify_hormander(&g, &tol()).unwrap());
    }

    #[test]
    fn shear_example_changes_by_minus_one() {
        // B = (π/2) P⁻ᵀP⁻¹ gives γ(1) = P R(π/2) P⁻¹ = [[1, −2], [1, −1]] for P = [[1, 1], [1, 0]].
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 0.0]);
        let pinv = p.clone().try_inverse().unwrap();
        let bmat = pinv.transpose() * &pinv * (PI / 2.0);
        let b = CoefficientPath::constant(bmat, 1.0).unwrap();
        let g = matrizant(&b, 2048).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 1.0, -1.0]);
        assert!((g.end() - want).amax() < 1e-10);
        let r = verify_identities(&g, &tol()).unwrap();
        assert_all(&r);
        let change = r
            .claims
            .iter()
            .find(|c| c.name == "shifted doubled L0 index change")
            .unwrap();
        assert_eq!(change.lhs, vec![-1]);
        let change = r
            .claims
            .iter()
            .find(|c| c.name == "shifted doubled L0 index+nullity change")
            .unwrap();
        assert_eq!(change.lhs, vec![-1]);
    }

    #[test]
    fn degenerate_path_is_retried() {
        let b = CoefficientPath::constant(DMatrix::zeros(2, 2), 1.0).unwrap();
        let g = matrizant(&b, 64).unwrap();
        let r = verify_identities(&g, &tol()).unwrap();
        assert_eq!(r.retry_epsilon, Some(RETRY_EPSILON));
        assert_all(&r);
    }

    #[test]
    fn corpus_samples() {
        for seed in 0..4 {
            for n in 1..=2 {
                let g = corpus_matrizant(seed, n).unwrap();
                assert_all(&verify_identities(&g, &tol()).unwrap());
                assert_all(&verify_bott(&g, 3, &tol()).unwrap());
                assert_all(&verify_hormander(&g, &tol()).unwrap());
            }
        }
    }

    #[test]
    fn kmax_is_bounded() {
        let g = matrizant(&CoefficientPath::identity(1, 1.0).unwrap(), 64).unwrap();
        assert!(verify_inequalities(&g, 9, &tol()).is_err());
        assert!(verify_inequalities(&g, 0, &tol()).is_err());
    }
}
