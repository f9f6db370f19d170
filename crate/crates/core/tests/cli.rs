mod common;

use std::path::PathBuf;
use std::process::Command as Proc;
use std::sync::Arc;

use common::*;
use cutkit::cli::{compare_matrix, run, run_text, Command, Options, EXIT_INVALID, EXIT_OK, EXIT_VIOLATIONS};
use cutkit::cuts::{CutType, Symbolic};
use cutkit::index::{CardinalValue, IndexSet};
use cutkit::oracle::{check_invariance, SampleConfig};
use cutkit::quasicut::QuasiCutPoint;
use cutkit::serial::*;
use cutkit::small_ext::GammaDElement;
use num_bigint::BigInt;
use rand::Rng;
use serde_json::Value;

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_cutkit"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cutkit-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json_opts() -> Options {
    Options { json: true, ..Options::default() }
}

fn classify_json(name: &str) -> Vec<Value> {
    let out = run(Command::Classify, name, &json_opts());
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    v["reports"].as_array().unwrap().clone()
}

#[test]
fn zero_plus_over_q_has_kappa_one() {
    let r = &classify_json("q_plus.json")[0];
    assert_eq!(r["type6"], "(b+G)+");
    assert_eq!(r["subtype"], "(+,+,-)");
    assert_eq!(r["kappa"]["symbolic"], "lambda(S)");
    assert_eq!(r["kappa"]["value"], 1);
    assert_eq!(r["lambda"]["value"], "aleph0");
    let text = run(Command::Classify, "q_plus.json", &Options::default()).stdout;
    assert!(text.contains("lambda(S) = 1"), "{text}");
}

#[test]
fn sqrt2_cut_is_nonball_with_gap() {
    let r = &classify_json("sqrt2.json")[0];
    assert_eq!(r["type6"], "nb+G");
    assert_eq!(r["kappa"]["value"], "aleph0");
    assert_eq!(r["lambda"]["value"], "aleph0");
    assert_eq!(r["rank_increases"], false);
}

/// Text rows rebuilt token by token from the JSON reports.
#[test]
fn text_and_json_agree_on_every_fixture() {
    for name in fixture_names() {
        let job = fixture(&name);
        let text = run(Command::Classify, &name, &Options::default());
        let reports = classify_json(&name);
        let lines: Vec<&str> = text.stdout.lines().skip(1).collect();
        assert_eq!(lines.len(), reports.len(), "{name}");
        for (k, (line, rj)) in lines.iter().zip(&reports).enumerate() {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(tokens[0], k.to_string());
            if rj.is_null() {
                assert_eq!(tokens[1..], ["interior"], "{name}");
                continue;
            }
            let r = report_from_json(rj, &job.space, "$").unwrap();
            let group = |s| if s == r.invariance { "H" } else { "H'" };
            let stab = |b| if b { "stable" } else { "unstable" };
            let card = |c: &cutkit::cuts::CardinalReport| match c.symbolic {
                Symbolic::Aleph0 => "ℵ₀".to_string(),
                s => format!("{} = {}", s.label(), c.value),
            };
            let mut want: Vec<String> = vec![
                k.to_string(),
                r.type6.label().into(),
                r.subtype.map_or("-".into(), |s| s.to_string()),
                r.invariance.to_string(),
                r.h_prime.to_string(),
                group(r.vf).into(),
                stab(r.vf_stable).into(),
                group(r.vi).into(),
                stab(r.vi_stable).into(),
            ];
            want.extend(card(&r.kappa).split_whitespace().map(String::from));
            want.extend(card(&r.lambda).split_whitespace().map(String::from));
            want.push(if r.rank_increases { "+1" } else { "+0" }.into());
            assert_eq!(tokens, want, "{name} item {k}");
        }
    }
}

#[test]
fn reports_round_trip_through_json() {
    for name in fixture_names() {
        let job = fixture(&name);
        for p in &job.items {
            let QuasiCutPoint::CutPoint(d) = p else { continue };
            let r = d.classify();
            assert_eq!(report_from_json(&report_to_json(&r), &job.space, "$").unwrap(), r, "{name}");
        }
        let cfg = SampleConfig { count: 20, max_label: 3, ..SampleConfig::default() };
        for p in &job.items {
            if let QuasiCutPoint::CutPoint(d) = p {
                let rep = check_invariance(d, &cfg).unwrap();
                assert_eq!(oracle_report_from_json(&oracle_report_to_json(&rep), "$").unwrap(), rep);
            }
        }
    }
}

#[test]
fn values_round_trip_through_json() {
    let mut rng = rng(11);
    for space in spaces() {
        assert_eq!(index_set_from_json(&index_set_to_json(&space), "$").unwrap(), *space);
        for s in space.segments_up_to(3) {
            assert_eq!(segment_from_json(&segment_to_json(&s), &space, "$").unwrap(), s);
        }
        for _ in 0..40 {
            let x = base_vector(&mut rng, &space);
            assert_eq!(vector_from_json(&vector_to_json(&x), &space, "$").unwrap(), x);
            let d = cut(&mut rng, &space);
            assert_eq!(cut_from_json(&cut_to_json(&d), &space, "$").unwrap(), d);
            let p = point(&mut rng, &space);
            assert_eq!(qpoint_from_json(&qpoint_to_json(&p), &space, "$").unwrap(), p);
            let realized = p.realize();
            assert_eq!(vector_from_json(&vector_to_json(&realized), &space, "$").unwrap(), realized);
            let u = GammaDElement::new(d, BigInt::from(rng.gen_range(-5..=5)), gamma(&mut rng, &space)).unwrap();
            assert_eq!(gd_element_from_json(&gd_element_to_json(&u), &space, "$").unwrap(), u);
        }
    }
}

#[test]
fn covariance_table_round_trips() {
    let job = fixture("corrupted_table.json");
    let t = job.covariance_table.unwrap();
    assert_eq!(covariance_table_from_json(&covariance_table_to_json(&t), "$").unwrap(), t);
    assert_ne!(t, Default::default());
}

#[test]
fn malformed_coordinate_is_a_parse_error() {
    let dir = scratch("malformed");
    let file = dir.join("bad.json");
    std::fs::write(&file, r#"{"group": ["omega"], "items": [{"interior": {"finite": [[[1, 1], "1//2"]]}}]}"#).unwrap();
    let out = bin().args(["classify", file.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INVALID));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error") && err.contains("finite[0]"), "{err}");
}

#[test]
fn broken_json_reports_line_and_column() {
    let e = run_text(Command::Classify, "{\n  \"group\": [\"omega\"],\n  \"items\": [\n", &Options::default()).unwrap_err();
    assert!(e.to_string().contains("line"), "{e}");
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"group": ["omega"], "items": [], "colour": 3}"#;
    let e = run_text(Command::Classify, text, &Options::default()).unwrap_err();
    assert!(e.to_string().contains("colour"), "{e}");
    let nested = r#"{"group": ["omega"], "items": [{"ball": {"center": {}, "segment": "full", "side": "+", "radius": 1}}]}"#;
    assert!(run_text(Command::Classify, nested, &Options::default()).is_err());
}

#[test]
fn validation_errors_exit_two() {
    // label 3 does not exist in Fin(2)
    let text = r#"{"group": [{"fin": 2}], "items": [{"interior": {"finite": [[[1, 3], "1"]]}}]}"#;
    let dir = scratch("invalid");
    let file = dir.join("job.json");
    std::fs::write(&file, text).unwrap();
    let out = run(Command::Classify, file.to_str().unwrap(), &Options::default());
    assert_eq!(out.code, EXIT_INVALID);
    assert!(!out.stderr.is_empty());
}

fn symbols(name: &str) -> Vec<Vec<String>> {
    let out = run(Command::Compare, name, &json_opts());
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    v["matrix"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect())
        .collect()
}

fn strictly_increasing(m: &[Vec<String>]) -> bool {
    m.iter().enumerate().all(|(i, r)| {
        r.iter().enumerate().all(|(j, s)| s == if i < j { "<" } else if i > j { ">" } else { "=" })
    })
}

#[test]
fn compare_chains() {
    // 0⁻ < 0 < 0⁺
    assert!(strictly_increasing(&symbols("compare_zero_chain.json")));
    // 1 < √2 < 3/2 < 2
    let m = symbols("compare_sqrt2.json");
    assert_eq!(m.len(), 4);
    assert!(strictly_increasing(&m));
    let dup = symbols("compare_duplicates.json");
    assert_eq!(dup[0][1], "=");
    assert_eq!(dup[1][0], "=");
}

#[test]
fn compare_needs_two_items() {
    let out = run(Command::Compare, "q_plus.json", &Options::default());
    assert_eq!(out.code, EXIT_INVALID);
    let job = fixture("compare_zero_chain.json");
    assert_eq!(compare_matrix(&job).unwrap().len(), 3);
}

#[test]
fn realize_places_zero_plus_at_the_added_index() {
    let out = run(Command::Realize, "q_plus.json", &json_opts());
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let r = &v["realizations"][0]["realization"];
    let space = Arc::new(IndexSet::rank_one());
    let x = vector_from_json(r, &space, "$").unwrap();
    assert!(x.added().is_some());
    assert!(x.finite().is_empty());
}

#[test]
fn oracle_exit_codes() {
    for name in ["q_plus.json", "sqrt2.json", "fig1_qn_zero_minus.json"] {
        let out = bin().args(["oracle", name, "--count", "60"]).output().unwrap();
        assert_eq!(out.status.code(), Some(EXIT_OK), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let out = bin().args(["oracle", "corrupted_table.json", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_VIOLATIONS));
    let rep = oracle_report_from_json(&serde_json::from_slice(&out.stdout).unwrap(), "$").unwrap();
    assert!(!rep.violations.is_empty());
}

#[test]
fn oracle_reports_are_reproducible() {
    let go = || bin().args(["oracle", "q_plus.json", "--seed", "7", "--count", "500", "--json"]).output().unwrap();
    let (a, b) = (go(), go());
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn fixture_directory_override() {
    let dir = scratch("fixtures");
    std::fs::write(
        dir.join("only_here.json"),
        r#"{"group": [{"fin": 1}], "items": [{"ball": {"center": {}, "segment": "full", "side": "-"}}]}"#,
    )
    .unwrap();
    let out = bin().env("CUTKIT_FIXTURES", &dir).args(["classify", "only_here.json", "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reports"][0]["type6"], CutType::BallGapMinus.label());
    let missing = bin().env("CUTKIT_FIXTURES", &dir).args(["classify", "q_plus.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(EXIT_INVALID));
}

#[test]
fn evaluated_cardinals_use_the_report_vocabulary() {
    let r = &classify_json("fig1_qn_ones_tail.json")[0];
    assert_eq!(r["kappa"]["symbolic"], "cofin(S)");
    let space = fixture("fig1_qn_ones_tail.json").space;
    let rep = report_from_json(r, &space, "$").unwrap();
    assert_eq!(rep.kappa.value, CardinalValue::Aleph0);
}
