//! JSON wire formats.
//!
//! Values are read from `serde_json::Value` by hand so that every error names
//! the path of the offending value, unknown fields are rejected, and indices
//! and segments are checked against the index set they belong to.

use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::coordinate::{parse_coordinate, parse_rational};
use crate::cuts::{
    CardinalReport, ClassificationReport, CovarianceRow, CovarianceTable, CutDescriptor, CutType, Group, Side, Subtype,
    Symbolic,
};
use crate::error::{invalid, Error, Result};
use crate::index::{Atom, CardinalValue, Index, IndexSet, Segment, Within};
use crate::oracle::{OracleReport, SampleConfig};
use crate::quasicut::QuasiCutPoint;
use crate::small_ext::GammaDElement;
use crate::vector::{RealVector, Tail};

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    invalid(format!("{path}: {msg}"))
}

/// Object with a fixed set of allowed keys.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str, allowed: &[&str]) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| err(path, "expected an object"))?;
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(err(path, format!("unknown field \"{k}\"")));
        }
        Ok(Obj { map, path: path.to_string() })
    }

    fn sub(&self, key: &str) -> String {
        format!("{}.{key}", self.path)
    }

    fn opt(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key).filter(|v| !v.is_null())
    }

    fn req(&self, key: &str) -> Result<&'a Value> {
        self.map.get(key).ok_or_else(|| err(&self.path, format!("missing field \"{key}\"")))
    }

    fn bool(&self, key: &str) -> Result<bool> {
        self.req(key)?.as_bool().ok_or_else(|| err(&self.sub(key), "expected a boolean"))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.req(key)?.as_str().ok_or_else(|| err(&self.sub(key), "expected a string"))
    }

    fn u64(&self, key: &str) -> Result<u64> {
        as_u64(self.req(key)?, &self.sub(key))
    }
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| err(path, "expected a non-negative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

/// The single key of a one-entry object, for tagged alternatives.
fn tag<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<(&'a str, &'a Value)> {
    let map = v.as_object().ok_or_else(|| err(path, format!("expected an object with one of {allowed:?}")))?;
    if map.len() != 1 {
        return Err(err(path, format!("expected exactly one of {allowed:?}")));
    }
    let (k, inner) = map.iter().next().expect("one entry");
    if !allowed.contains(&k.as_str()) {
        return Err(err(path, format!("unknown field \"{k}\"")));
    }
    Ok((k.as_str(), inner))
}

pub fn index_set_to_json(space: &IndexSet) -> Value {
    Value::Array(
        space
            .atoms()
            .iter()
            .map(|a| match a {
                Atom::Fin(n) => json!({ "fin": n }),
                Atom::Omega => json!("omega"),
                Atom::OmegaOpp => json!("omega_opp"),
            })
            .collect(),
    )
}

pub fn index_set_from_json(v: &Value, path: &str) -> Result<IndexSet> {
    let atoms = as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let p = format!("{path}[{k}]");
            match a {
                Value::String(s) if s == "omega" => Ok(Atom::Omega),
                Value::String(s) if s == "omega_opp" => Ok(Atom::OmegaOpp),
                Value::Object(_) => {
                    let o = Obj::new(a, &p, &["fin"])?;
                    Ok(Atom::Fin(o.u64("fin")?))
                }
                _ => Err(err(&p, "expected {\"fin\": n}, \"omega\" or \"omega_opp\"")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    IndexSet::new(atoms).map_err(|e| e.at(path))
}

pub fn index_to_json(i: &Index) -> Value {
    json!([i.atom, i.inner])
}

pub fn index_from_json(v: &Value, space: &IndexSet, path: &str) -> Result<Index> {
    let pair = as_array(v, path)?;
    if pair.len() != 2 {
        return Err(err(path, "an index is [atom, inner]"));
    }
    let atom = as_u64(&pair[0], path)? as usize;
    let inner = as_u64(&pair[1], path)?;
    let i = Index::new(atom, inner);
    space.validate_index(&i).map_err(|e| e.at(path))?;
    Ok(i)
}

pub fn segment_to_json(s: &Segment) -> Value {
    match (s.atom(), s.within()) {
        (None, _) => json!("full"),
        (Some(1), Within::Empty) => json!("empty"),
        (Some(a), Within::Empty) => json!({ "atom": a - 1, "all": true }),
        (Some(a), Within::UpTo(k)) => json!({ "atom": a, "upto": k }),
    }
}

pub fn segment_from_json(v: &Value, space: &IndexSet, path: &str) -> Result<Segment> {
    let s = match v {
        Value::String(s) if s == "empty" => Ok(space.empty_segment()),
        Value::String(s) if s == "full" => Ok(Segment::full()),
        Value::Object(_) => {
            let o = Obj::new(v, path, &["atom", "upto", "all"])?;
            let atom = o.u64("atom")? as usize;
            if atom == 0 || atom > space.atom_count() {
                return Err(err(path, format!("no atom {atom} in an index set of {} atoms", space.atom_count())));
            }
            match (o.opt("upto"), o.opt("all")) {
                (Some(_), None) => space.segment(atom, Within::UpTo(o.u64("upto")?)),
                (None, Some(_)) if o.bool("all")? => space.through_atom(atom),
                (None, Some(_)) => Err(err(path, "\"all\" must be true")),
                _ => Err(err(path, "a segment needs exactly one of \"upto\" and \"all\"")),
            }
        }
        _ => Err(err(path, "expected \"empty\", \"full\" or a segment object")),
    };
    s.map_err(|e| e.at(path))
}

pub fn vector_to_json(x: &RealVector) -> Value {
    json!({
        "finite": x.finite().iter().map(|(i, c)| json!([index_to_json(i), c.to_string()])).collect::<Vec<_>>(),
        "tail": x.tail().map(|t| json!({ "value": t.value.to_string(), "from": index_to_json(&t.from) })),
        "added": x.added().map(|(s, c)| json!({ "segment": segment_to_json(s), "coord": c.to_string() })),
    })
}

pub fn vector_from_json(v: &Value, space: &Arc<IndexSet>, path: &str) -> Result<RealVector> {
    let o = Obj::new(v, path, &["finite", "tail", "added"])?;
    let mut finite = Vec::new();
    if let Some(f) = o.opt("finite") {
        for (k, entry) in as_array(f, &o.sub("finite"))?.iter().enumerate() {
            let p = format!("{}[{k}]", o.sub("finite"));
            let pair = as_array(entry, &p)?;
            if pair.len() != 2 {
                return Err(err(&p, "an entry is [index, \"coord\"]"));
            }
            let i = index_from_json(&pair[0], space, &p)?;
            let text = pair[1].as_str().ok_or_else(|| err(&p, "coordinates are strings"))?;
            finite.push((i, parse_coordinate(text).map_err(|e| e.at(&p))?));
        }
    }
    let tail = match o.opt("tail") {
        None => None,
        Some(t) => {
            let to = Obj::new(t, &o.sub("tail"), &["value", "from"])?;
            let value = parse_rational(to.str("value")?).map_err(|e| e.at(&to.sub("value")))?;
            Some(Tail { value, from: index_from_json(to.req("from")?, space, &to.sub("from"))? })
        }
    };
    let added = match o.opt("added") {
        None => None,
        Some(a) => {
            let ao = Obj::new(a, &o.sub("added"), &["segment", "coord"])?;
            let s = segment_from_json(ao.req("segment")?, space, &ao.sub("segment"))?;
            Some((s, parse_coordinate(ao.str("coord")?).map_err(|e| e.at(&ao.sub("coord")))?))
        }
    };
    RealVector::new(space.clone(), finite, added, tail).map_err(|e| e.at(path))
}

fn side_str(side: Side) -> &'static str {
    match side {
        Side::Plus => "+",
        Side::Minus => "-",
    }
}

pub fn cut_to_json(d: &CutDescriptor) -> Value {
    match d {
        CutDescriptor::Ball { center, segment, side } => json!({
            "ball": { "center": vector_to_json(center), "segment": segment_to_json(segment), "side": side_str(*side) }
        }),
        CutDescriptor::NonBall { realization, .. } => json!({ "nonball": { "vector": vector_to_json(realization) } }),
    }
}

pub fn cut_from_json(v: &Value, space: &Arc<IndexSet>, path: &str) -> Result<CutDescriptor> {
    let (k, inner) = tag(v, path, &["ball", "nonball"])?;
    let p = format!("{path}.{k}");
    if k == "ball" {
        let o = Obj::new(inner, &p, &["center", "segment", "side"])?;
        let center = vector_from_json(o.req("center")?, space, &o.sub("center"))?;
        let segment = segment_from_json(o.req("segment")?, space, &o.sub("segment"))?;
        let side = match o.str("side")? {
            "+" => Side::Plus,
            "-" => Side::Minus,
            other => return Err(err(&o.sub("side"), format!("expected \"+\" or \"-\", got \"{other}\""))),
        };
        CutDescriptor::ball(center, segment, side).map_err(|e| e.at(&p))
    } else {
        let o = Obj::new(inner, &p, &["vector"])?;
        let x = vector_from_json(o.req("vector")?, space, &o.sub("vector"))?;
        CutDescriptor::nonball(&x).map_err(|e| e.at(&p))
    }
}

pub fn qpoint_to_json(p: &QuasiCutPoint) -> Value {
    match p {
        QuasiCutPoint::Interior(a) => json!({ "interior": vector_to_json(a) }),
        QuasiCutPoint::CutPoint(d) => json!({ "cut": cut_to_json(d) }),
    }
}

/// A quasi-cut point; a bare `{"ball": ..}` or `{"nonball": ..}` is read as a cut point.
pub fn qpoint_from_json(v: &Value, space: &Arc<IndexSet>, path: &str) -> Result<QuasiCutPoint> {
    let (k, inner) = tag(v, path, &["interior", "cut", "ball", "nonball"])?;
    match k {
        "interior" => {
            let p = format!("{path}.interior");
            QuasiCutPoint::interior(vector_from_json(inner, space, &p)?).map_err(|e| e.at(&p))
        }
        "cut" => Ok(QuasiCutPoint::CutPoint(cut_from_json(inner, space, &format!("{path}.cut"))?)),
        _ => Ok(QuasiCutPoint::CutPoint(cut_from_json(v, space, path)?)),
    }
}

fn cardinal_to_json(c: &CardinalReport) -> Value {
    let value = match c.value {
        CardinalValue::Zero => json!(0),
        CardinalValue::One => json!(1),
        CardinalValue::Aleph0 => json!("aleph0"),
    };
    json!({ "symbolic": c.symbolic.label(), "value": value })
}

fn cardinal_from_json(v: &Value, path: &str) -> Result<CardinalReport> {
    let o = Obj::new(v, path, &["symbolic", "value"])?;
    let sym = o.str("symbolic")?;
    let symbolic = Symbolic::from_label(sym).ok_or_else(|| err(&o.sub("symbolic"), format!("unknown cardinal \"{sym}\"")))?;
    let value = match o.req("value")? {
        Value::String(s) if s == "aleph0" => CardinalValue::Aleph0,
        n if n.as_u64() == Some(0) => CardinalValue::Zero,
        n if n.as_u64() == Some(1) => CardinalValue::One,
        _ => return Err(err(&o.sub("value"), "expected 0, 1 or \"aleph0\"")),
    };
    Ok(CardinalReport { symbolic, value })
}

pub fn report_to_json(r: &ClassificationReport) -> Value {
    json!({
        "type6": r.type6.label(),
        "subtype": r.subtype.map(|s| s.to_string()),
        "invariance": segment_to_json(&r.invariance),
        "h_prime": segment_to_json(&r.h_prime),
        "vf": segment_to_json(&r.vf),
        "vf_stable": r.vf_stable,
        "vi": segment_to_json(&r.vi),
        "vi_stable": r.vi_stable,
        "kappa": cardinal_to_json(&r.kappa),
        "lambda": cardinal_to_json(&r.lambda),
        "rank_increases": r.rank_increases,
    })
}

const REPORT_FIELDS: [&str; 11] = [
    "type6", "subtype", "invariance", "h_prime", "vf", "vf_stable", "vi", "vi_stable", "kappa", "lambda", "rank_increases",
];

fn cut_type_from(s: &str, path: &str) -> Result<CutType> {
    CutType::from_label(s).ok_or_else(|| err(path, format!("unknown cut type \"{s}\"")))
}

pub fn report_from_json(v: &Value, space: &IndexSet, path: &str) -> Result<ClassificationReport> {
    let o = Obj::new(v, path, &REPORT_FIELDS)?;
    let subtype = match o.opt("subtype") {
        None => None,
        Some(s) => {
            let text = s.as_str().ok_or_else(|| err(&o.sub("subtype"), "expected a string"))?;
            Some(Subtype::parse(text).ok_or_else(|| err(&o.sub("subtype"), format!("bad sign triple \"{text}\"")))?)
        }
    };
    let seg = |k: &str| segment_from_json(o.req(k)?, space, &o.sub(k));
    Ok(ClassificationReport {
        type6: cut_type_from(o.str("type6")?, &o.sub("type6"))?,
        subtype,
        invariance: seg("invariance")?,
        h_prime: seg("h_prime")?,
        vf: seg("vf")?,
        vf_stable: o.bool("vf_stable")?,
        vi: seg("vi")?,
        vi_stable: o.bool("vi_stable")?,
        kappa: cardinal_from_json(o.req("kappa")?, &o.sub("kappa"))?,
        lambda: cardinal_from_json(o.req("lambda")?, &o.sub("lambda"))?,
        rank_increases: o.bool("rank_increases")?,
    })
}

fn bigint_to_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(small) => json!(small),
        Err(_) => json!(n.to_string()),
    }
}

fn bigint_from_json(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().expect("integer literal")),
        Value::String(s) => s.parse().map_err(|_| err(path, format!("bad integer \"{s}\""))),
        _ => Err(err(path, "expected an integer")),
    }
}

pub fn gd_element_to_json(u: &GammaDElement) -> Value {
    json!({ "cut": cut_to_json(&u.cut), "m": bigint_to_json(&u.m), "b": vector_to_json(&u.b) })
}

pub fn gd_element_from_json(v: &Value, space: &Arc<IndexSet>, path: &str) -> Result<GammaDElement> {
    let o = Obj::new(v, path, &["cut", "m", "b"])?;
    let cut = cut_from_json(o.req("cut")?, space, &o.sub("cut"))?;
    let m = bigint_from_json(o.req("m")?, &o.sub("m"))?;
    let b = vector_from_json(o.req("b")?, space, &o.sub("b"))?;
    GammaDElement::new(cut, m, b).map_err(|e| e.at(path))
}

pub fn oracle_report_to_json(r: &OracleReport) -> Value {
    json!({ "violations": r.violations, "checked": r.checked, "seed": r.seed })
}

pub fn oracle_report_from_json(v: &Value, path: &str) -> Result<OracleReport> {
    let o = Obj::new(v, path, &["violations", "checked", "seed"])?;
    let violations = as_array(o.req("violations")?, &o.sub("violations"))?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| err(&o.sub("violations"), "expected strings")))
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleReport { violations, checked: o.u64("checked")? as usize, seed: o.u64("seed")? })
}

fn group_str(g: Group) -> &'static str {
    match g {
        Group::H => "H",
        Group::HPrime => "H'",
    }
}

fn group_from(v: &str, path: &str) -> Result<Group> {
    match v {
        "H" => Ok(Group::H),
        "H'" => Ok(Group::HPrime),
        _ => Err(err(path, format!("expected \"H\" or \"H'\", got \"{v}\""))),
    }
}

pub fn covariance_table_to_json(t: &CovarianceTable) -> Value {
    Value::Array(
        t.rows()
            .map(|(ty, r)| {
                json!({
                    "type": ty.label(),
                    "vf": group_str(r.vf), "vf_stable": r.vf_stable,
                    "vi": group_str(r.vi), "vi_stable": r.vi_stable,
                })
            })
            .collect(),
    )
}

/// A full table: one row for each of the six types.
pub fn covariance_table_from_json(v: &Value, path: &str) -> Result<CovarianceTable> {
    let mut table = CovarianceTable::default();
    let mut seen = Vec::new();
    for (k, row) in as_array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{k}]");
        let o = Obj::new(row, &p, &["type", "vf", "vf_stable", "vi", "vi_stable"])?;
        let ty = cut_type_from(o.str("type")?, &o.sub("type"))?;
        if seen.contains(&ty) {
            return Err(err(&p, format!("duplicate row for {ty}")));
        }
        seen.push(ty);
        table.set_row(
            ty,
            CovarianceRow {
                vf: group_from(o.str("vf")?, &o.sub("vf"))?,
                vf_stable: o.bool("vf_stable")?,
                vi: group_from(o.str("vi")?, &o.sub("vi"))?,
                vi_stable: o.bool("vi_stable")?,
            },
        );
    }
    if seen.len() != CutType::ALL.len() {
        return Err(err(path, "the table needs a row for each of the six types"));
    }
    Ok(table)
}

/// Batch input: an index set, the points to process, and optional overrides.
#[derive(Clone, Debug)]
pub struct JobFile {
    pub space: Arc<IndexSet>,
    pub items: Vec<QuasiCutPoint>,
    pub covariance_table: Option<CovarianceTable>,
    pub sample: SampleConfig,
}

impl JobFile {
    pub fn parse(text: &str) -> Result<JobFile> {
        let v: Value = serde_json::from_str(text)?;
        let o = Obj::new(&v, "$", &["group", "items", "covariance_table", "sample"])?;
        let space = Arc::new(index_set_from_json(o.req("group")?, &o.sub("group"))?);
        let items = as_array(o.req("items")?, &o.sub("items"))?
            .iter()
            .enumerate()
            .map(|(k, it)| qpoint_from_json(it, &space, &format!("$.items[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        let covariance_table = match o.opt("covariance_table") {
            None => None,
            Some(t) => Some(covariance_table_from_json(t, &o.sub("covariance_table"))?),
        };
        let mut sample = SampleConfig::default();
        if let Some(s) = o.opt("sample") {
            let so = Obj::new(s, &o.sub("sample"), &["max_denominator", "max_support", "max_label", "count", "seed"])?;
            if so.opt("max_denominator").is_some() {
                sample.max_denominator = so.u64("max_denominator")?;
            }
            if so.opt("max_support").is_some() {
                sample.max_support = so.u64("max_support")? as usize;
            }
            if so.opt("max_label").is_some() {
                sample.max_label = so.u64("max_label")?;
            }
            if so.opt("count").is_some() {
                sample.count = so.u64("count")? as usize;
            }
            if so.opt("seed").is_some() {
                sample.seed = so.u64("seed")?;
            }
            sample.validate().map_err(|e| e.at(&o.sub("sample")))?;
        }
        Ok(JobFile { space, items, covariance_table, sample })
    }
}
