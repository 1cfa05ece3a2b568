use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use maslov_core::golden;
use maslov_core::index::CONVENTION;
use maslov_core::iteration::{
    brake_iterate, corpus_path, describe, verify_bott, verify_hormander, verify_identities, verify_inequalities,
    VerificationReport,
};
use maslov_core::matrizant::CoefficientPathJson;
use maslov_core::orbit::{action_values, minimal_period, orbit_indices, shoot, ActionValues, HamiltonianSpec};
use maslov_core::variational::{conjugate_points, convexifying_lambda, dual_form, relative_morse, DEFAULT_PANELS};
use maslov_core::{index_suite, maslov, matrizant, BoundarySpec, CoefficientPath, Error, Tolerances};
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{Cli, Command, Common};
use crate::pool::parallel_map;

/// Duality residual above which the orbit report counts as a failed claim.
const DUALITY_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(Error),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 64,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Numerical(e) => write!(f, "numerical error: {e}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => Failure::Config(m),
            Error::DimensionMismatch { .. }
            | Error::StepCountTooSmall(_)
            | Error::NotSymmetric { .. }
            | Error::NonSymmetricCoefficient { .. } => Failure::Config(e.to_string()),
            other => Failure::Numerical(other),
        }
    }
}

/// A finished run: the JSON report, whether every claim held, and extra files.
pub struct Outcome {
    pub report: Value,
    pub claims_ok: bool,
    pub files: Vec<(PathBuf, String)>,
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let c = &cli.common;
    if c.jobs == 0 {
        return Err(Failure::Config("--jobs must be at least 1".into()));
    }
    let tol = tolerances(c)?;
    let (name, body, claims_ok, files) = match &cli.command {
        Command::Index => ("index", index(c, &tol)?, true, vec![]),
        Command::Iterate { k } => {
            let (body, ok) = iterate(c, &tol, *k)?;
            ("iterate", body, ok, vec![])
        }
        Command::Verify { count, table } => {
            let (body, ok) = verify(c, &tol, *count, *table)?;
            ("verify", body, ok, vec![])
        }
        Command::Morse => {
            let (body, ok) = morse(c, &tol)?;
            ("morse", body, ok, vec![])
        }
        Command::Orbit { csv } => {
            let (body, ok, samples) = orbit(c, &tol)?;
            let files = csv.iter().map(|p| (p.clone(), samples.clone())).collect();
            ("orbit", body, ok, files)
        }
        Command::Selftest => {
            let checks = golden::run_all(&tol)?;
            let passed = checks.iter().filter(|k| k.passed).count();
            let ok = passed == checks.len();
            let body = json!({ "passed": passed, "total": checks.len(), "checks": checks });
            ("selftest", body, ok, vec![])
        }
    };
    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!(name));
    if !c.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        report.insert("generated_at".into(), json!(secs));
    }
    report.insert("all_claims_hold".into(), json!(claims_ok));
    report.insert("report".into(), body);
    Ok(Outcome {
        report: Value::Object(report),
        claims_ok,
        files,
    })
}

fn tolerances(c: &Common) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::default();
    for (value, slot, flag) in [(c.tol_rank, &mut tol.rank, "--tol-rank"), (c.tol_zero, &mut tol.zero, "--tol-zero")] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::Config(format!("{flag} must be positive, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

/// The `--input` document, read from a file or given inline.
fn input_value(c: &Common) -> Result<Option<Value>, Failure> {
    let Some(src) = &c.input else { return Ok(None) };
    let text = if src.trim_start().starts_with('{') {
        src.clone()
    } else {
        std::fs::read_to_string(src).map_err(|e| Failure::Config(format!("cannot read {src}: {e}")))?
    };
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Failure::Config(format!("input is not valid JSON: {e}")))
}

fn parse<T: DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Config(format!("{what}: {e}")))
}

fn path_from_json(v: Value) -> Result<CoefficientPath, Failure> {
    let doc: CoefficientPathJson = parse(v, "coefficient path")?;
    Ok(CoefficientPath::from_json(&doc)?)
}

fn builtin_path(c: &Common, seed: u64) -> Result<(CoefficientPath, String), Failure> {
    match c.builtin.as_str() {
        "constant-identity" => Ok((
            CoefficientPath::identity(c.n, c.tau)?,
            format!("constant identity, n = {}, tau = {}", c.n, c.tau),
        )),
        "corpus" => Ok((corpus_path(seed, c.n)?, describe(seed, c.n))),
        other => Err(Failure::Config(format!(
            "unknown --B '{other}' (expected constant-identity or corpus)"
        ))),
    }
}

/// The coefficient path selected by `--input` or `--B`.
fn coefficient_path(c: &Common) -> Result<(CoefficientPath, String), Failure> {
    match input_value(c)? {
        Some(v) => Ok((path_from_json(v)?, "input".into())),
        None => builtin_path(c, c.seed),
    }
}

fn index(c: &Common, tol: &Tolerances) -> Result<Value, Failure> {
    let (b, source) = coefficient_path(c)?;
    let g = matrizant(&b, c.steps)?;
    let suite = index_suite(&g, tol)?;
    Ok(json!({
        "source": source,
        "n": b.n(),
        "tau": b.tau(),
        "steps": c.steps,
        "convention": CONVENTION,
        "suite": suite,
    }))
}

fn iterate(c: &Common, tol: &Tolerances, k: usize) -> Result<(Value, bool), Failure> {
    let (b, source) = coefficient_path(c)?;
    let g = matrizant(&b, c.steps)?;
    let gk = brake_iterate(&g, k)?;
    let base = index_suite(&g, tol)?;
    let iterate = index_suite(&gk, tol)?;
    let bott = verify_bott(&g, k, tol)?.with_path(source.clone());
    let ok = bott.all_satisfied();
    Ok((
        json!({
            "source": source,
            "k": k,
            "steps": c.steps,
            "convention": CONVENTION,
            "base": base,
            "iterate": iterate,
            "bott": bott,
        }),
        ok,
    ))
}

#[derive(Debug, Serialize)]
struct VerifyRecord {
    seed: Option<u64>,
    source: String,
    identities: VerificationReport,
    hormander: VerificationReport,
    bott: Vec<VerificationReport>,
    inequalities: VerificationReport,
}

impl VerifyRecord {
    fn reports(&self) -> impl Iterator<Item = &VerificationReport> {
        [&self.identities, &self.hormander, &self.inequalities]
            .into_iter()
            .chain(self.bott.iter())
    }
}

fn verify_one(
    b: &CoefficientPath,
    seed: Option<u64>,
    source: &str,
    c: &Common,
    tol: &Tolerances,
) -> Result<VerifyRecord, Error> {
    let g = matrizant(b, c.steps)?;
    let tag = |r: VerificationReport| {
        let r = r.with_path(source);
        match seed {
            Some(s) => r.with_seed(s),
            None => r,
        }
    };
    let mut bott = Vec::new();
    for k in 2..=c.kmax {
        bott.push(tag(verify_bott(&g, k, tol)?));
    }
    Ok(VerifyRecord {
        seed,
        source: source.to_string(),
        identities: tag(verify_identities(&g, tol)?),
        hormander: tag(verify_hormander(&g, tol)?),
        bott,
        inequalities: tag(verify_inequalities(&g, c.kmax, tol)?),
    })
}

fn verify(c: &Common, tol: &Tolerances, count: u64, table: bool) -> Result<(Value, bool), Failure> {
    if !(1..=8).contains(&c.kmax) {
        return Err(Failure::Config(format!("--kmax must be in 1..=8, got {}", c.kmax)));
    }
    let mut jobs: Vec<(CoefficientPath, Option<u64>, String)> = Vec::new();
    match input_value(c)? {
        Some(v) => jobs.push((path_from_json(v)?, None, "input".into())),
        None if c.builtin == "corpus" => {
            for seed in c.seed..c.seed.saturating_add(count) {
                let (b, s) = builtin_path(c, seed)?;
                jobs.push((b, Some(seed), s));
            }
        }
        None => {
            let (b, s) = builtin_path(c, c.seed)?;
            jobs.push((b, None, s));
        }
    }
    let results = parallel_map(&jobs, c.jobs, |(b, seed, source)| verify_one(b, *seed, source, c, tol));
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        records.push(r?);
    }
    if table {
        for r in &records {
            eprintln!("# {}", r.source);
            for rep in r.reports() {
                eprint!("{}", rep.table());
            }
        }
    }
    let failed: usize = records
        .iter()
        .flat_map(|r| r.reports())
        .map(|rep| rep.failures().count())
        .sum();
    let total: usize = records.iter().flat_map(|r| r.reports()).map(|rep| rep.claims.len()).sum();
    Ok((
        json!({
            "convention": CONVENTION,
            "steps": c.steps,
            "kmax": c.kmax,
            "claims": total,
            "failed_claims": failed,
            "records": records,
        }),
        failed == 0,
    ))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PencilInput {
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    #[serde(default = "default_grid")]
    grid: usize,
    #[serde(default)]
    zero_tol: Option<f64>,
}

fn default_grid() -> usize {
    400
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>, Failure> {
    let r = rows.len();
    let cols = rows.first().map_or(0, |x| x.len());
    if r == 0 || rows.iter().any(|x| x.len() != cols) {
        return Err(Failure::Config(format!("{what} must be a non-empty rectangular array")));
    }
    Ok(DMatrix::from_fn(r, cols, |i, j| rows[i][j]))
}

fn morse(c: &Common, tol: &Tolerances) -> Result<(Value, bool), Failure> {
    let input = input_value(c)?;
    if let Some(v) = input.as_ref().filter(|v| v.get("a").is_some()) {
        let p: PencilInput = parse(v.clone(), "pencil")?;
        let a = matrix(&p.a, "a")?;
        let b = matrix(&p.b, "b")?;
        let r = relative_morse(&a, &b, p.grid, p.zero_tol.unwrap_or(tol.zero))?;
        let ok = r.index == r.oracle;
        return Ok((json!({ "kind": "pencil", "relative_morse": r }), ok));
    }
    let (b, source) = match input {
        Some(v) => (path_from_json(v)?, "input".to_string()),
        None => builtin_path(c, c.seed)?,
    };
    if c.modes.is_empty() || c.modes.contains(&0) {
        return Err(Failure::Config("--modes must list positive truncations".into()));
    }
    let lambda = convexifying_lambda(&b)?;
    let mut counts = Vec::new();
    for &m in &c.modes {
        counts.push(json!({ "modes": m, "m_minus": dual_form(&b, lambda, m, DEFAULT_PANELS)?.m_minus() }));
    }
    let conjugate = conjugate_points(&b, c.steps, tol)?;
    let l0 = maslov(&matrizant(&b, c.steps)?, &BoundarySpec::L0, tol)?;
    let agree = counts.iter().all(|x| x["m_minus"] == json!(l0.index)) && conjugate.sum as i64 == l0.index;
    Ok((
        json!({
            "kind": "path",
            "source": source,
            "lambda": lambda,
            "galerkin": counts,
            "conjugate_points": conjugate,
            "l0_index": l0.index,
            "l0_nullity": l0.nullity_at_end,
            "agree": agree,
        }),
        agree,
    ))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrbitInput {
    hamiltonian: HamiltonianSpec,
    #[serde(rename = "T")]
    period: f64,
    q0: Vec<f64>,
    #[serde(default)]
    tolerances: OrbitTolerances,
    /// Shift of the `p` block for the dual action; chosen automatically when absent.
    #[serde(default)]
    lambda: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct OrbitTolerances {
    rank: Option<f64>,
    zero: Option<f64>,
    period: f64,
}

impl Default for OrbitTolerances {
    fn default() -> Self {
        OrbitTolerances {
            rank: None,
            zero: None,
            period: 1e-6,
        }
    }
}

fn orbit(c: &Common, tol: &Tolerances) -> Result<(Value, bool, String), Failure> {
    let v = input_value(c)?.ok_or_else(|| Failure::Config("orbit needs --input".into()))?;
    let input: OrbitInput = parse(v, "orbit input")?;
    let mut tol = *tol;
    if let Some(r) = input.tolerances.rank {
        tol.rank = r;
    }
    if let Some(z) = input.tolerances.zero {
        tol.zero = z;
    }
    let orbit = shoot(&input.hamiltonian, input.period, &input.q0)?;
    let cert = orbit_indices(&orbit, &tol, &c.modes)?;
    let lambda = match (input.lambda, &cert.morse) {
        (Some(l), _) => Some(l),
        (None, Some(m)) => Some(m.lambda),
        (None, None) => convexifying_lambda(&orbit.coefficient_path()?).ok(),
    };
    let actions: Option<ActionValues> = lambda.map(|l| action_values(&orbit, l)).transpose()?;
    let period = minimal_period(&orbit, input.tolerances.period);
    let ok = cert.morse.as_ref().map_or(true, |m| m.agree)
        && actions.as_ref().map_or(true, |a| a.residual.abs() <= DUALITY_TOL);
    let body = json!({
        "orbit": orbit,
        "certificate": cert,
        "actions": actions,
        "minimal_period": period,
    });
    Ok((body, ok, orbit.to_csv()))
}
