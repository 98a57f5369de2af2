mod common;

use std::collections::BTreeMap;
use std::fs;

use common::{catalogue, conjugation_example, d3_base, fixture_dir, golden_dir, wreath_s4};
use cremona_cli::report::{run, RunConfig, Subcommand};
use cremona_cli::schema::{parse_input, serialize};
use cremona_cli::verify::map_document_value;
use serde_json::{json, Value};

const CFG: RunConfig<'static> = RunConfig { cap_override: None, points: None };

fn manifest() -> BTreeMap<String, (String, String)> {
    let text = fs::read_to_string(golden_dir().join("manifest.json")).expect("manifest present");
    let v: BTreeMap<String, Value> = serde_json::from_str(&text).unwrap();
    v.into_iter()
        .map(|(k, e)| (k, (e["verdict"].as_str().unwrap().to_string(), e["rule"].as_str().unwrap().to_string())))
        .collect()
}

#[test]
#[ignore = "rewrites tests/golden and tests/fixtures"]
fn regenerate() {
    fs::create_dir_all(golden_dir()).unwrap();
    fs::create_dir_all(fixture_dir()).unwrap();
    let mut entries = serde_json::Map::new();
    for case in catalogue() {
        fs::write(golden_dir().join(format!("{}.json", case.name)), serialize(&case.doc) + "\n").unwrap();
        entries.insert(case.name.into(), json!({ "verdict": case.verdict, "rule": case.rule }));
    }
    fs::write(golden_dir().join("manifest.json"), serde_json::to_string_pretty(&entries).unwrap() + "\n").unwrap();
    fs::write(fixture_dir().join("s4_wreath.json"), serialize(&wreath_s4()) + "\n").unwrap();
    fs::write(fixture_dir().join("d3_base.json"), serialize(&d3_base()) + "\n").unwrap();
    let map = serde_json::to_string_pretty(&map_document_value(&conjugation_example())).unwrap();
    fs::write(fixture_dir().join("conjugation.json"), map + "\n").unwrap();
}

#[test]
fn files_match_catalogue() {
    let cases = catalogue();
    let m = manifest();
    assert_eq!(m.len(), cases.len());
    for case in &cases {
        let text = fs::read_to_string(golden_dir().join(format!("{}.json", case.name))).unwrap();
        assert_eq!(parse_input(&text).unwrap(), case.doc, "{}", case.name);
        assert_eq!(m[case.name], (case.verdict.to_string(), case.rule.to_string()), "{}", case.name);
    }
}

#[test]
fn suite_covers_table() {
    let m = manifest();
    let lin = m.values().filter(|(v, _)| v == "linearizable").count();
    let not = m.values().filter(|(v, _)| v == "not_linearizable").count();
    assert!(m.len() >= 20);
    assert!(lin >= 12, "{lin} linearizable rows");
    assert!(not >= 8, "{not} counterparts");
}

#[test]
fn decide_matches_manifest() {
    for (name, (verdict, rule)) in manifest() {
        let text = fs::read_to_string(golden_dir().join(format!("{name}.json"))).unwrap();
        let out = run(Subcommand::Decide, &text, &CFG);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["decision"], json!(verdict), "{name}: {}", out.stdout);
        assert_eq!(v["reason"]["rule"], json!(rule), "{name}");
        assert_eq!(out.code, if verdict == "invalid_input" { 2 } else { 0 }, "{name}");
        if verdict == "linearizable" {
            let steps = v["witness"].as_array().unwrap();
            let flagged = v.get("witness_status").is_some();
            assert!(flagged || !steps.is_empty() || rule == "plane_linear", "{name} lacks a witness");
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for (name, _) in manifest() {
        let text = fs::read_to_string(golden_dir().join(format!("{name}.json"))).unwrap();
        assert_eq!(run(Subcommand::Decide, &text, &CFG), run(Subcommand::Decide, &text, &CFG), "{name}");
    }
}
