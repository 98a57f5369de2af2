mod common;

use std::fs;
use std::process::Command;
use std::time::Instant;

use common::{catalogue, fixture_dir, golden_dir};
use cremona_cli::report::{run, RunConfig, Subcommand};
use cremona_cli::schema::{parse_input, serialize, SchemaError};
use cremona_cli::verify::{parse_map_document, verify_p2_conjugation, Ordering};
use proptest::prelude::*;
use serde_json::{json, Value};

const CFG: RunConfig<'static> = RunConfig { cap_override: None, points: None };

fn fixture(name: &str) -> String {
    fs::read_to_string(fixture_dir().join(name)).unwrap()
}

fn report(cmd: Subcommand, text: &str, points: Option<&str>) -> (Value, i32) {
    let out = run(cmd, text, &RunConfig { cap_override: None, points });
    (serde_json::from_str(&out.stdout).unwrap(), out.code)
}

#[test]
fn minimal_plane_document() {
    let doc = parse_input(r#"{"conductor": 1, "surface": "P2"}"#).unwrap();
    assert_eq!(doc.conductor, 1);
    let (v, code) = report(Subcommand::Decide, r#"{"conductor": 1, "surface": "P2", "generators": []}"#, None);
    assert_eq!(code, 0);
    assert_eq!(v["decision"], "linearizable");
}

#[test]
fn quadric_with_three_by_three_matrix() {
    let text = r#"{"conductor": 1, "surface": "Quadric",
        "generators": [{"m": [[1,0,0],[0,1,0],[0,0,1]], "n": [[1,0],[0,1]]}]}"#;
    match parse_input(text) {
        Err(SchemaError::Invalid { path, .. }) => assert_eq!(path, "generators[0].m"),
        other => panic!("{other:?}"),
    }
    let (v, code) = report(Subcommand::Decide, text, None);
    assert_eq!(code, 2);
    assert_eq!(v["path"], "generators[0].m");
}

#[test]
fn quintic_with_repeated_label() {
    let text = r#"{"conductor": 1, "surface": "DP5", "generators": [{"perm": [1,1,2,3,4]}]}"#;
    assert!(matches!(parse_input(text), Err(SchemaError::Invalid { .. })));
}

#[test]
fn bad_conductor_and_keys() {
    assert!(matches!(parse_input(r#"{"conductor": 0, "surface": "P2"}"#), Err(SchemaError::ConductorInvalid { .. })));
    assert!(matches!(parse_input(r#"{"conductor": 3, "surface": "P2", "extra": 1}"#), Err(SchemaError::Invalid { .. })));
    assert!(parse_input(r#"{"conductor": 3, "surface": {"Hirzebruch": 0}}"#).is_err());
    assert!(matches!(parse_input("not json"), Err(SchemaError::Json(_))));
}

#[test]
fn classify_wreath() {
    let (v, code) = report(Subcommand::Classify, &fixture("s4_wreath.json"), None);
    assert_eq!(code, 0);
    assert_eq!(v["group"]["order"], 1152);
    assert_eq!(v["group"]["family"], "Wreath(S4)");
    assert_eq!(v["rank"], 1);
}

#[test]
fn orbits_on_dihedral_base() {
    let (v, code) = report(Subcommand::Orbits, &fixture("d3_base.json"), Some("[[1,1]]"));
    assert_eq!(code, 0);
    assert_eq!(v["orbit_lengths"], json!([3]));
    let (v, _) = report(Subcommand::Orbits, &fixture("d3_base.json"), Some("[[1,0],[1,2]]"));
    assert_eq!(v["orbit_lengths"], json!([2, 6]));
}

#[test]
fn goursat_of_dihedral_product() {
    let text = fs::read_to_string(golden_dir().join("quadric_dihedral_d15.json")).unwrap();
    let (v, code) = report(Subcommand::Goursat, &text, None);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["projections"][0]["order"], 6);
    assert_eq!(v["projections"][1]["order"], 10);
    assert_eq!(v["kernel_order"], 30);
    assert_eq!(v["quotient_order"], 2);
    let (_, code) = report(Subcommand::Goursat, &fixture("d3_base.json"), None);
    assert_eq!(code, 2);
}

#[test]
fn witness_subcommand() {
    let text = fs::read_to_string(golden_dir().join("quadric_dihedral_d15.json")).unwrap();
    let out = run(Subcommand::Witness, &text, &CFG);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("(x,y) ↦ (x, x⁻¹y)"), "{}", out.stdout);
    let text = fs::read_to_string(golden_dir().join("del_pezzo_three.json")).unwrap();
    assert_eq!(run(Subcommand::Witness, &text, &CFG).code, 2);
}

#[test]
fn worked_conjugation_example() {
    let start = Instant::now();
    let (v, code) = report(Subcommand::VerifyMap, &fixture("conjugation.json"), None);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
    assert_eq!(v["trials"], 50);
    assert_eq!(v["composite_degree"], 18);
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn conjugation_example_degrees() {
    let m = parse_map_document(&fixture("conjugation.json")).unwrap();
    assert_eq!((m.f.degree, m.conjugator.degree, m.target.degree), (2, 3, 1));
    // the involution squares to the identity up to a common factor
    let r = verify_p2_conjugation(&m.conjugator, &m.conjugator, &m.conjugator, 20, 1).unwrap();
    assert!(r.verified);
    let composite = m.conjugator.compose(&m.f).compose(&m.conjugator);
    assert_eq!(composite.degree, 18);
    assert!(composite.polys.iter().all(|p| p.degree().unwrap_or(0) <= 18));
}

#[test]
fn perturbed_target_is_rejected() {
    let text = fixture("conjugation.json");
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["target"][2] = json!([[1, [0, 1, 0]], [1, [0, 0, 1]]]);
    let m = parse_map_document(&v.to_string()).unwrap();
    let r = verify_p2_conjugation(&m.f, &m.conjugator, &m.target, 50, 0).unwrap();
    assert!(!r.verified);
    assert!(r.orderings.iter().all(|o| !o.holds || o.ordering == Ordering::Sandwich && o.checked == 0));
}

#[test]
fn cap_override_bounds_closure() {
    let text = fs::read_to_string(fixture_dir().join("s4_wreath.json")).unwrap();
    let out = run(Subcommand::Classify, &text, &RunConfig { cap_override: Some(100), points: None });
    // a valid document that outgrows the cap is not an input error
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert!(out.stdout.contains("cap"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cremona");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["decide", golden_dir().join("quadric_dihedral_d15.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["decision"], "linearizable");
    let not = status(&["decide", golden_dir().join("del_pezzo_two.json").to_str().unwrap()]);
    assert_eq!(not.status.code(), Some(0));
    let invalid = status(&["decide", golden_dir().join("conic_bundle_seven.json").to_str().unwrap()]);
    assert_eq!(invalid.status.code(), Some(2));
    let orbits = status(&["orbits", fixture_dir().join("d3_base.json").to_str().unwrap(), "--points", "[[1,1]]"]);
    assert_eq!(serde_json::from_slice::<Value>(&orbits.stdout).unwrap()["orbit_lengths"], json!([3]));
    let env = Command::new(bin)
        .env("CREMONA_CAP", "10")
        .args(["classify", fixture_dir().join("s4_wreath.json").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn golden_documents_round_trip(i in 0usize..40) {
        let cases = catalogue();
        let doc = &cases[i % cases.len()].doc;
        let once = parse_input(&serialize(doc)).unwrap();
        prop_assert_eq!(&once, doc);
        prop_assert_eq!(serialize(&once), serialize(doc));
    }

    #[test]
    fn literal_terms_round_trip(terms in proptest::collection::vec((-9i64..10, 1i64..6, 0i64..12), 0..6)) {
        let lits: Vec<Value> = terms.iter().map(|&(p, q, e)| json!([p, q, e])).collect();
        let text = json!({
            "conductor": 12,
            "surface": {"Hirzebruch": 1},
            "generators": [[[{"terms": lits}, 1], [1, 2]]],
        });
        if let Ok(doc) = parse_input(&text.to_string()) {
            let again = parse_input(&serialize(&doc)).unwrap();
            prop_assert_eq!(again, doc);
        }
    }
}
