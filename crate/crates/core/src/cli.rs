//! Batch commands behind the `cutkit` binary, as plain functions returning
//! the text to print and the exit code.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::cuts::{CardinalReport, ClassificationReport, CovarianceTable, CutType, Symbolic};
use crate::error::{Error, Result};
use crate::index::Segment;
use crate::oracle::{check_approximating_sequence, check_cofinal_sequence, check_covariance, check_invariance, OracleReport};
use crate::quasicut::{qcut_compare, QuasiCutPoint};
use crate::serial::{oracle_report_to_json, qpoint_to_json, report_to_json, vector_to_json, JobFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classify,
    Compare,
    Realize,
    Oracle,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub json: bool,
    pub seed: Option<u64>,
    pub count: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Directory searched for job files not found as given.
pub fn fixture_dir() -> PathBuf {
    match std::env::var_os("CUTKIT_FIXTURES") {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"),
    }
}

pub fn resolve(file: &str) -> PathBuf {
    let direct = PathBuf::from(file);
    if direct.exists() {
        return direct;
    }
    fixture_dir().join(file)
}

pub fn run(cmd: Command, file: &str, opts: &Options) -> Outcome {
    let path = resolve(file);
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return failure(format!("cannot read {}: {e}", path.display())),
    };
    match run_text(cmd, &text, opts) {
        Ok(o) => o,
        Err(e) => failure(format!("{}: {e}", path.display())),
    }
}

fn failure(msg: String) -> Outcome {
    Outcome { stdout: String::new(), stderr: msg + "\n", code: EXIT_INVALID }
}

pub fn run_text(cmd: Command, text: &str, opts: &Options) -> Result<Outcome> {
    let job = JobFile::parse(text)?;
    let ok = |stdout: String| Outcome { stdout, stderr: String::new(), code: EXIT_OK };
    match cmd {
        Command::Classify => cmd_classify(&job, opts).map(ok),
        Command::Compare => cmd_compare(&job, opts).map(ok),
        Command::Realize => cmd_realize(&job, opts).map(ok),
        Command::Oracle => {
            let (stdout, report) = cmd_oracle(&job, opts)?;
            let code = if report.is_clean() { EXIT_OK } else { EXIT_VIOLATIONS };
            Ok(Outcome { stdout, stderr: String::new(), code })
        }
    }
}

fn table(job: &JobFile) -> CovarianceTable {
    job.covariance_table.clone().unwrap_or_default()
}

/// One report per cut; `None` for interior points, which are not cuts.
pub fn classify_items(job: &JobFile) -> Vec<Option<ClassificationReport>> {
    let t = table(job);
    job.items
        .iter()
        .map(|p| match p {
            QuasiCutPoint::CutPoint(d) => Some(d.classify_with(&t)),
            QuasiCutPoint::Interior(_) => None,
        })
        .collect()
}

fn cardinal_text(c: &CardinalReport) -> String {
    let sym = match c.symbolic.label() {
        "aleph0" => "ℵ₀".to_string(),
        other => other.to_string(),
    };
    if c.symbolic == Symbolic::Aleph0 {
        sym
    } else {
        format!("{sym} = {}", c.value)
    }
}

fn covariance_text(report: &ClassificationReport, seg: &Segment, stable: bool) -> String {
    let name = if *seg == report.invariance { "H" } else { "H'" };
    format!("{name} {}", if stable { "stable" } else { "unstable" })
}

fn align(rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

pub fn cmd_classify(job: &JobFile, opts: &Options) -> Result<String> {
    let reports = classify_items(job);
    if opts.json {
        let arr: Vec<Value> = reports.iter().map(|r| r.as_ref().map_or(Value::Null, report_to_json)).collect();
        return Ok(serde_json::to_string_pretty(&json!({ "reports": arr })).expect("json") + "\n");
    }
    let mut rows = vec![["item", "type", "subtype", "H", "H'", "V_f", "V_i", "kappa", "lambda", "rank"].map(String::from).to_vec()];
    for (k, r) in reports.iter().enumerate() {
        let Some(r) = r else {
            rows.push(vec![k.to_string(), "interior".into()]);
            continue;
        };
        rows.push(vec![
            k.to_string(),
            r.type6.label().to_string(),
            r.subtype.map_or("-".to_string(), |s| s.to_string()),
            r.invariance.to_string(),
            r.h_prime.to_string(),
            covariance_text(r, &r.vf, r.vf_stable),
            covariance_text(r, &r.vi, r.vi_stable),
            cardinal_text(&r.kappa),
            cardinal_text(&r.lambda),
            if r.rank_increases { "+1".into() } else { "+0".into() },
        ]);
    }
    for r in rows.iter_mut() {
        r.resize(10, String::new());
    }
    Ok(align(&rows))
}

/// Full pairwise order of the items, checked for antisymmetry.
pub fn compare_matrix(job: &JobFile) -> Result<Vec<Vec<Ordering>>> {
    if job.items.len() < 2 {
        return Err(Error::Precondition("compare needs at least two items".into()));
    }
    let m = job
        .items
        .iter()
        .map(|p| job.items.iter().map(|q| qcut_compare(p, q)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    for (i, row) in m.iter().enumerate() {
        for (j, o) in row.iter().enumerate().take(i) {
            if *o != m[j][i].reverse() {
                return Err(Error::Precondition(format!("comparison of items {i} and {j} is not antisymmetric")));
            }
        }
    }
    Ok(m)
}

fn ord_symbol(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

pub fn cmd_compare(job: &JobFile, opts: &Options) -> Result<String> {
    let m = compare_matrix(job)?;
    if opts.json {
        let rows: Vec<Vec<&str>> = m.iter().map(|r| r.iter().map(|o| ord_symbol(*o)).collect()).collect();
        return Ok(serde_json::to_string_pretty(&json!({ "matrix": rows })).expect("json") + "\n");
    }
    let n = m.len();
    let mut rows = vec![std::iter::once(String::new()).chain((0..n).map(|j| j.to_string())).collect::<Vec<_>>()];
    for (i, r) in m.iter().enumerate() {
        rows.push(std::iter::once(i.to_string()).chain(r.iter().map(|o| ord_symbol(*o).to_string())).collect());
    }
    Ok(align(&rows))
}

pub fn cmd_realize(job: &JobFile, opts: &Options) -> Result<String> {
    if opts.json {
        let arr: Vec<Value> = job
            .items
            .iter()
            .map(|p| json!({ "point": qpoint_to_json(p), "realization": vector_to_json(&p.realize()) }))
            .collect();
        return Ok(serde_json::to_string_pretty(&json!({ "realizations": arr })).expect("json") + "\n");
    }
    let mut out = String::new();
    for (k, p) in job.items.iter().enumerate() {
        let _ = writeln!(out, "{k}  {}", p.realize());
    }
    Ok(out)
}

/// Sequence length used for the cofinality checks.
const SEQUENCE_LENGTH: usize = 50;

pub fn oracle_report(job: &JobFile, opts: &Options) -> Result<OracleReport> {
    let mut cfg = job.sample;
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if let Some(c) = opts.count {
        cfg.count = c;
    }
    cfg.validate()?;
    let t = table(job);
    let mut report = OracleReport { seed: cfg.seed, ..OracleReport::default() };
    for p in &job.items {
        let QuasiCutPoint::CutPoint(d) = p else { continue };
        report.merge(check_invariance(d, &cfg)?);
        report.merge(check_covariance(d, &t, &cfg)?);
        match d.cut_type() {
            CutType::NonBallNoGap => report.merge(check_cofinal_sequence(d, SEQUENCE_LENGTH, &cfg)?),
            CutType::NonBallGap => report.merge(check_approximating_sequence(d, SEQUENCE_LENGTH)?),
            _ => {}
        }
    }
    Ok(report)
}

pub fn cmd_oracle(job: &JobFile, opts: &Options) -> Result<(String, OracleReport)> {
    let report = oracle_report(job, opts)?;
    let text = if opts.json {
        serde_json::to_string_pretty(&oracle_report_to_json(&report)).expect("json") + "\n"
    } else {
        let mut out = format!(
            "checked {}  violations {}  seed {}\n",
            report.checked,
            report.violations.len(),
            report.seed
        );
        for v in &report.violations {
            let _ = writeln!(out, "  {v}");
        }
        out
    };
    Ok((text, report))
}
