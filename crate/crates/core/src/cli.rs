//! Command implementations behind the `frobcurve` binary.
//!
//! Every command returns a JSON value. Anything wall-clock dependent goes into a
//! top-level `"timing"` object (or a per-row one in scans), so that stripping `"timing"`
//! leaves a payload fully determined by the [`RunConfig`].

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartier::{
    cartier_manin, enumerate_p_torsion, geometric_torsion, TorsionMethod, TorsionSet,
};
use crate::error::Error;
use crate::exactnum::{Field, FieldValue};
use crate::formulas;
use crate::funcfield::Curve;
use crate::verify::{
    check_offdiag_closed_forms, check_two_sums, rigidity_scan, LemmaReport, RigidityMode, Status,
};

pub const TOOL_NAME: &str = "frobcurve";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Seed for the modulus of F_{p^k} when only k is given.
pub const EXT_MODULUS_SEED: u64 = 0x5eed;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::FieldTooLargeForBrute { .. } | Error::DegreeOverflow { .. } => {
                CliError::Resource(format!("{e} ({e:?})"))
            }
            _ => CliError::Input(format!("{e} ({e:?})")),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// One coefficient of f: an integer (reduced into the prime field) or a coefficient
/// vector over the extension basis 1, t, t², ….
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Vector(Vec<i64>),
}

/// A catalog entry: `{"p": 5, "ext": [2, 4, 1], "f": [1, 0, 0, 0, 2, 1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveInput {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext: Option<Vec<u64>>,
    pub f: Vec<Coeff>,
}

impl CurveInput {
    pub fn build(&self) -> crate::Result<Curve> {
        let field = match &self.ext {
            None => Field::prime(self.p)?,
            Some(m) => Field::extension(self.p, m)?,
        };
        build_curve(&field, &self.f)
    }
}

fn build_curve(field: &Field, f: &[Coeff]) -> crate::Result<Curve> {
    let p = field.characteristic() as i64;
    let coeffs: Vec<FieldValue> = f
        .iter()
        .map(|c| match c {
            Coeff::Int(v) => field.from_i64(*v),
            Coeff::Vector(v) => {
                let reduced: Vec<u64> = v.iter().map(|x| x.rem_euclid(p) as u64).collect();
                field.from_coeffs(&reduced)
            }
        })
        .collect();
    if coeffs.len() != 6 {
        return Err(Error::Range(format!(
            "f needs 6 coefficients c0..c5, got {}",
            coeffs.len()
        )));
    }
    Curve::new(field, &coeffs)
}

/// Parses `--f 1,2,0,0,0,1`; an entry `a:b` is the extension element a + b·t.
pub fn parse_coeffs(s: &str) -> CliResult<Vec<Coeff>> {
    let bad =
        |e: std::num::ParseIntError| CliError::Input(format!("bad coefficient list {s:?}: {e}"));
    s.split(',')
        .map(|part| {
            let part = part.trim();
            if part.contains(':') {
                part.split(':')
                    .map(|x| x.trim().parse::<i64>().map_err(bad))
                    .collect::<CliResult<Vec<_>>>()
                    .map(Coeff::Vector)
            } else {
                part.parse::<i64>().map(Coeff::Int).map_err(bad)
            }
        })
        .collect()
}

/// Everything that determines a report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub p: Option<u64>,
    /// Extension degree; the modulus is chosen with [`EXT_MODULUS_SEED`].
    pub ext_k: usize,
    pub f: Option<Vec<Coeff>>,
    pub catalog: Option<PathBuf>,
    pub method: Option<String>,
    pub crosscheck: bool,
    pub seed: u64,
    pub count: usize,
    pub genus: u64,
    /// Not part of the payload: results are independent of it.
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: String::new(),
            p: None,
            ext_k: 1,
            f: None,
            catalog: None,
            method: None,
            crosscheck: false,
            seed: 0,
            count: 50,
            genus: 2,
            workers: None,
            out: None,
        }
    }
}

impl RunConfig {
    fn field(&self) -> CliResult<Field> {
        let p = self
            .p
            .ok_or_else(|| CliError::Input("--p is required".into()))?;
        Ok(Field::extension_seeded(p, self.ext_k, EXT_MODULUS_SEED)?)
    }

    fn curve(&self) -> CliResult<Curve> {
        let f = self
            .f
            .as_ref()
            .ok_or_else(|| CliError::Input("--f is required".into()))?;
        Ok(build_curve(&self.field()?, f)?)
    }

    fn pool(&self) -> CliResult<rayon::ThreadPool> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = self.workers {
            if w == 0 {
                return Err(CliError::Input("--workers must be at least 1".into()));
            }
            b = b.num_threads(w);
        }
        b.build()
            .map_err(|e| CliError::Input(format!("cannot build worker pool: {e}")))
    }
}

fn tool() -> Value {
    json!({ "name": TOOL_NAME, "version": TOOL_VERSION })
}

/// The exact curve data carried by every report.
pub fn curve_json(curve: &Curve) -> Value {
    let field = curve.field();
    json!({
        "id": curve.canonical_id(),
        "p": field.characteristic(),
        "k": field.degree(),
        "modulus": field.modulus(),
        "f": curve.f().coeffs().iter().chain(std::iter::repeat(&field.zero())).take(6).collect::<Vec<_>>(),
    })
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Dispatches on `config.command`.
pub fn run(config: &RunConfig) -> CliResult<Value> {
    match config.command.as_str() {
        "curve" => cmd_curve(config),
        "torsion" => cmd_torsion(config),
        "verify" => cmd_verify(config),
        "scan" => cmd_scan(config),
        "formulas" => cmd_formulas(config),
        other => Err(CliError::Input(format!("unknown command {other:?}"))),
    }
}

pub fn cmd_curve(config: &RunConfig) -> CliResult<Value> {
    let start = Instant::now();
    let curve = config.curve()?;
    let a = cartier_manin(&curve);
    let det = a.det();
    Ok(json!({
        "tool": tool(),
        "command": "curve",
        "curve": curve_json(&curve),
        "A": a.entries,
        "det": det,
        "ordinary": !det.is_zero(),
        "genus": curve.genus(),
        "timing": { "total_ms": ms(start) },
    }))
}

fn torsion_method(config: &RunConfig) -> CliResult<TorsionMethod> {
    config
        .method
        .as_deref()
        .unwrap_or("semilinear")
        .parse()
        .map_err(|e: Error| CliError::Input(e.to_string()))
}

fn torsion_json(set: &TorsionSet) -> Value {
    json!({
        "count": set.len(),
        "dimension": set.dimension(),
        "is_subspace": set.is_subspace(),
        "forms": set.forms(),
    })
}

pub fn cmd_torsion(config: &RunConfig) -> CliResult<Value> {
    let start = Instant::now();
    let curve = config.curve()?;
    let method = torsion_method(config)?;
    let pool = config.pool()?;
    pool.install(|| {
        let set = enumerate_p_torsion(&curve, method)?;
        let t_main = ms(start);
        let mut report = json!({
            "tool": tool(),
            "command": "torsion",
            "curve": curve_json(&curve),
            "method": method,
            "ordinary": !cartier_manin(&curve).det().is_zero(),
            "torsion": torsion_json(&set),
        });
        let mut timing = json!({ "enumerate_ms": t_main });
        if config.crosscheck {
            let other = match method {
                TorsionMethod::Brute => TorsionMethod::Semilinear,
                TorsionMethod::Semilinear => TorsionMethod::Brute,
            };
            let t = Instant::now();
            let other_set = enumerate_p_torsion(&curve, other)?;
            report["crosscheck"] = json!({ "method": other, "agree": other_set == set });
            timing["crosscheck_ms"] = json!(ms(t));
        }
        if curve.field().is_prime_field() {
            let t = Instant::now();
            let g = geometric_torsion(&curve)?;
            report["geometric"] = json!({
                "dimension": g.dimension,
                "extension_degree": g.extension_degree,
                "count": g.count(curve.characteristic()).to_string(),
            });
            timing["geometric_ms"] = json!(ms(t));
        }
        timing["total_ms"] = json!(ms(start));
        report["timing"] = timing;
        Ok(report)
    })
}

fn status_counts(reports: &[LemmaReport]) -> Value {
    let n = |s: Status| reports.iter().filter(|r| r.status == s).count();
    json!({
        "holds": n(Status::Holds),
        "violated": n(Status::Violated),
        "inapplicable": n(Status::Inapplicable),
    })
}

/// Two-sums and off-diagonal checks for every nonzero torsion form ω_L against each basis
/// form and against ω_L itself (a dependent pair, reported as inapplicable).
fn lemma_reports(curve: &Curve, set: &TorsionSet) -> crate::Result<Vec<LemmaReport>> {
    let basis = [
        curve.omega0(),
        curve.global_form(&curve.field().zero(), &curve.field().one()),
    ];
    let mut out = Vec::new();
    for omega_l in set.nonzero_forms(curve) {
        for omega in basis.iter().chain(std::iter::once(&omega_l)) {
            out.push(check_two_sums(curve, &omega_l, omega)?);
            out.push(check_offdiag_closed_forms(curve, &omega_l, omega)?);
        }
    }
    Ok(out)
}

pub fn cmd_verify(config: &RunConfig) -> CliResult<Value> {
    let curve = config.curve()?;
    let mode: RigidityMode = config
        .method
        .as_deref()
        .unwrap_or("brute")
        .parse()
        .map_err(|e: Error| CliError::Input(e.to_string()))?;
    config.pool()?.install(|| verify_report(&curve, mode))
}

/// Lemma checks and rigidity scans for every nonzero F-rational torsion form of `curve`,
/// on the current rayon pool.
pub fn verify_report(curve: &Curve, mode: RigidityMode) -> CliResult<Value> {
    let start = Instant::now();
    let set = enumerate_p_torsion(curve, TorsionMethod::Semilinear)?;
    if set.len() <= 1 {
        return Err(CliError::Input(
            "curve has no nonzero torsion form over its field of definition".into(),
        ));
    }
    let mut reports = lemma_reports(curve, &set)?;
    let mut rigidity = Vec::new();
    for omega_l in set.nonzero_forms(curve) {
        let outcome = rigidity_scan(curve, &omega_l, mode)?;
        rigidity.push(json!({
            "omega_l": omega_l.global_coords(),
            "solution_count": outcome.solutions.solutions.len(),
            "dimension": outcome.solutions.dimension,
            "is_conjugate_trivial_family": outcome.solutions.is_conjugate_trivial_family,
        }));
        reports.extend([outcome.rigidity, outcome.closed_forms, outcome.scalar_twist]);
    }
    let timing: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "lemma": r.lemma, "ms": r.elapsed.as_secs_f64() * 1e3 }))
        .collect();
    let summary = status_counts(&reports);
    Ok(json!({
        "tool": tool(),
        "command": "verify",
        "curve": curve_json(curve),
        "rigidity_mode": mode.to_string(),
        "torsion": torsion_json(&set),
        "summary": summary,
        "all_hold": summary["violated"] == 0,
        "rigidity": rigidity,
        "reports": reports,
        "timing": { "total_ms": ms(start), "reports": timing },
    }))
}

pub fn cmd_formulas(config: &RunConfig) -> CliResult<Value> {
    let p = config
        .p
        .ok_or_else(|| CliError::Input("--p is required".into()))?;
    let counts = formulas::counts(p, config.genus)?;
    Ok(json!({
        "tool": tool(),
        "command": "formulas",
        "counts": counts,
    }))
}

/// Reads a catalog: a JSON array of entries, or one entry per line. Empty input is an
/// empty catalog.
pub fn read_catalog(path: &Path) -> CliResult<Vec<CurveInput>> {
    let text = std::fs::read_to_string(path)?;
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let malformed = |e: serde_json::Error| {
        CliError::Input(format!("malformed catalog {}: {e}", path.display()))
    };
    if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(malformed)
    } else {
        trimmed
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(malformed))
            .collect()
    }
}

/// `count` distinct squarefree quintics over `field`, rejection-sampled from a seeded
/// stream. Returns fewer only if the sampler keeps hitting curves it already has.
pub fn random_curves(field: &Field, count: usize, seed: u64) -> Vec<Curve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut ids = HashSet::new();
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1000 * count + 10_000 {
        attempts += 1;
        let mut f: Vec<FieldValue> = (0..5).map(|_| field.random(&mut rng)).collect();
        let mut lead = field.random(&mut rng);
        while lead.is_zero() {
            lead = field.random(&mut rng);
        }
        f.push(lead);
        if let Ok(c) = Curve::new(field, &f) {
            if ids.insert(c.canonical_id()) {
                out.push(c);
            }
        }
    }
    out
}

/// Summary row for one curve. Lemma checks run only when a nonzero torsion form is
/// defined over the field of the curve.
pub fn scan_row(curve: &Curve) -> crate::Result<Value> {
    let start = Instant::now();
    let p = curve.characteristic();
    let a = cartier_manin(curve);
    let ordinary = !a.det().is_zero();
    let set = enumerate_p_torsion(curve, TorsionMethod::Semilinear)?;
    let mut row = json!({
        "record": "curve",
        "curve": curve_json(curve),
        "A": a.entries,
        "ordinary": ordinary,
        "torsionCount": set.len(),
        "torsionDimension": set.dimension(),
        "isSubspace": set.is_subspace(),
    });
    if curve.field().is_prime_field() {
        let g = geometric_torsion(curve)?;
        let count = g.count(p);
        row["geometricTorsionCount"] = json!(count.to_string());
        row["geometricExtensionDegree"] = json!(g.extension_degree);
        row["consistent"] = json!(ordinary == (count == (p as u128).pow(2)));
    }
    let reports = lemma_reports(curve, &set)?;
    row["lemmas"] = status_counts(&reports);
    row["timing"] = json!({ "total_ms": ms(start) });
    Ok(row)
}

fn existing_ids(path: &Path) -> CliResult<(Vec<Value>, HashSet<String>)> {
    let mut rows = Vec::new();
    let mut ids = HashSet::new();
    if !path.exists() {
        return Ok((rows, ids));
    }
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line)
            .map_err(|e| CliError::Input(format!("corrupt scan output {}: {e}", path.display())))?;
        if let Some(id) = v["curve"]["id"].as_str() {
            ids.insert(id.to_string());
        }
        rows.push(v);
    }
    Ok((rows, ids))
}

/// Batch scan. Rows go to `config.out` as JSON lines (appending, skipping curve ids already
/// present); the returned value is the aggregate, with the rows inlined when there is no
/// output file.
pub fn cmd_scan(config: &RunConfig) -> CliResult<Value> {
    let start = Instant::now();
    let curves: Vec<Curve> = match &config.catalog {
        Some(path) => read_catalog(path)?
            .iter()
            .map(|c| c.build())
            .collect::<crate::Result<_>>()?,
        None => random_curves(&config.field()?, config.count, config.seed),
    };
    let (mut previous, done) = match &config.out {
        Some(path) => existing_ids(path)?,
        None => (Vec::new(), HashSet::new()),
    };
    let mut seen = done.clone();
    let todo: Vec<&Curve> = curves
        .iter()
        .filter(|c| seen.insert(c.canonical_id()))
        .collect();

    let pool = config.pool()?;
    let new_rows: Vec<Value> = pool.install(|| {
        use rayon::prelude::*;
        todo.par_iter()
            .map(|c| scan_row(c))
            .collect::<crate::Result<_>>()
    })?;

    if let Some(path) = &config.out {
        let mut file = OpenOptions::new().create(true).append(true).open(path)?;
        for row in &new_rows {
            writeln!(file, "{}", serde_json::to_string(row).expect("json"))?;
        }
    }
    let skipped = curves.len() - new_rows.len();
    previous.extend(new_rows);
    let rows = previous;

    let ordinary = rows.iter().filter(|r| r["ordinary"] == true).count();
    let violations: u64 = rows
        .iter()
        .filter_map(|r| r["lemmas"]["violated"].as_u64())
        .sum();
    let inconsistent = rows.iter().filter(|r| r["consistent"] == false).count();
    let mut aggregate = json!({
        "record": "aggregate",
        "tool": tool(),
        "config": config,
        "curves": rows.len(),
        "skipped": skipped,
        "ordinary": ordinary,
        "ordinaryFraction": if rows.is_empty() { 0.0 } else { ordinary as f64 / rows.len() as f64 },
        "lemmaViolations": violations,
        "consistencyViolations": inconsistent,
        "timing": { "total_ms": ms(start) },
    });
    if config.out.is_none() {
        aggregate["rows"] = Value::Array(rows);
    }
    Ok(aggregate)
}

/// Recursively drops every `"timing"` key.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timing");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: &str, p: u64, f: &str) -> RunConfig {
        RunConfig {
            command: command.into(),
            p: Some(p),
            f: Some(parse_coeffs(f).unwrap()),
            ..RunConfig::default()
        }
    }

    #[test]
    fn parse_coefficient_lists() {
        assert_eq!(
            parse_coeffs("1, -2,0:1").unwrap(),
            vec![Coeff::Int(1), Coeff::Int(-2), Coeff::Vector(vec![0, 1])]
        );
        assert!(parse_coeffs("1,x").is_err());
    }

    #[test]
    fn curve_errors_map_to_exit_codes() {
        let e = cmd_curve(&cfg("curve", 2, "1,0,0,0,0,1")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("EvenCharacteristic"));
        let e = cmd_curve(&cfg("curve", 3, "0,1,0,1,0,1")).unwrap_err();
        assert!(e.to_string().contains("NotSquarefree"));
        let e = cmd_curve(&cfg("curve", 3, "1,1,0,0,0,1")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let mut c = cfg("torsion", 3, "1,2,0,0,0,1");
        c.ext_k = 9;
        c.method = Some("brute".into());
        assert_eq!(cmd_torsion(&c).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn curve_report_carries_curve_data() {
        let v = cmd_curve(&cfg("curve", 3, "1,2,0,0,0,1")).unwrap();
        assert_eq!(v["curve"]["f"], json!([1, 2, 0, 0, 0, 1]));
        assert_eq!(v["curve"]["k"], 1);
        assert_eq!(v["tool"]["version"], TOOL_VERSION);
        let c = Curve::over_prime(3, &[1, 2, 0, 0, 0, 1]).unwrap();
        assert_eq!(v["curve"]["id"], c.canonical_id());
        assert_eq!(v["ordinary"], !cartier_manin(&c).det().is_zero());
    }

    #[test]
    fn random_curves_are_seeded() {
        let f = Field::prime(5).unwrap();
        let a: Vec<String> = random_curves(&f, 10, 7)
            .iter()
            .map(Curve::canonical_id)
            .collect();
        let b: Vec<String> = random_curves(&f, 10, 7)
            .iter()
            .map(Curve::canonical_id)
            .collect();
        let c: Vec<String> = random_curves(&f, 10, 8)
            .iter()
            .map(Curve::canonical_id)
            .collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.iter().collect::<HashSet<_>>().len(), 10);
    }

    #[test]
    fn strip_timing_is_recursive() {
        let mut v = json!({"a": 1, "timing": 2, "rows": [{"timing": {}, "b": 3}]});
        strip_timing(&mut v);
        assert_eq!(v, json!({"a": 1, "rows": [{"b": 3}]}));
    }
}
