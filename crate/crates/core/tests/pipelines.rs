//! Integration tests for the shipped pipeline scripts.

use std::path::PathBuf;
use surgery_core::dsl::{execute, load_script_file, parse, Report};

fn scripts_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts")
}

fn run(script: &str, n: i64) -> Report {
    let path = scripts_dir().join(script);
    let (script, dataset) = load_script_file(&path).expect("load");
    execute(&script, &dataset, n).expect("execute")
}

#[test]
fn z_construction_endpoint() {
    let report = run("z_construction.surg", 1);
    assert!(report.all_assertions_pass(), "{}", report.render());
    let l = report.final_ledger;
    assert_eq!((l.e, l.sigma, l.b2_plus, l.b2_minus), (13, -5, 3, 8));
    assert_eq!(report.final_class_count, 2);
    assert_eq!(report.sw_abs_values, vec![1, 1]);
}

#[test]
fn z_construction_values_scale_cubically() {
    for n in 1..=3 {
        let report = run("z_construction.surg", n);
        assert!(report.all_assertions_pass(), "n={n}:\n{}", report.render());
        assert_eq!(report.sw_abs_values, vec![n * n * n, n * n * n]);
    }
}

#[test]
fn ss_y_stops_at_h1_zero() {
    let report = run("ss_y.surg", 2);
    assert!(report.all_assertions_pass(), "{}", report.render());
    assert_eq!(
        report.final_ledger.pi1,
        surgery_core::Pi1Status::H1Zero
    );
    assert!(matches!(
        report.freedman,
        surgery_core::dsl::FreedmanOutcome::NotDetermined(_)
    ));
}

#[test]
fn ztilde_matches_z_endpoint() {
    let z = run("z_construction.surg", 2);
    let zt = run("ztilde_construction.surg", 2);
    assert!(zt.all_assertions_pass(), "{}", zt.render());
    assert_eq!(z.final_ledger, zt.final_ledger);
    assert_eq!(z.sw_abs_values, zt.sw_abs_values);
}

#[test]
fn swapped_order_gives_identical_final_section() {
    let a = run("z_construction.surg", 3);
    let b = run("z_construction_swapped.surg", 3);
    assert!(a.all_assertions_pass(), "{}", a.render());
    assert!(b.all_assertions_pass(), "{}", b.render());
    assert_eq!(a.final_section(), b.final_section());
    assert_eq!(a.certificates, b.certificates);
}

#[test]
fn reports_are_deterministic() {
    let a = run("z_construction.surg", 2);
    let b = run("z_construction.surg", 2);
    assert_eq!(a.render(), b.render());
}

#[test]
fn certificate_groups_and_merges() {
    use surgery_core::dsl::nondiffeo_certificate;

    // duplicate parameters collapse into one group
    let a = run("z_construction.surg", 2);
    let b = run("z_construction.surg", 2);
    let c = run("z_construction.surg", 3);
    let partition = nondiffeo_certificate(&[&a, &b, &c]);
    assert_eq!(partition.distinct_groups(), 2);
    assert_eq!(partition.groups[0].1.len(), 2);

    // the two constructions are not distinguished at equal parameter
    let zt = run("ztilde_construction.surg", 2);
    let partition = nondiffeo_certificate(&[&a, &zt]);
    assert_eq!(partition.distinct_groups(), 1);
    assert_eq!(partition.groups[0].1.len(), 2);
    let rendered = partition.to_string();
    assert!(rendered.contains("not distinguished"), "{rendered}");
}

#[test]
fn shipped_scripts_roundtrip_through_printer() {
    for name in [
        "z_construction.surg",
        "z_construction_swapped.surg",
        "ss_y.surg",
        "ztilde_construction.surg",
    ] {
        let text = std::fs::read_to_string(scripts_dir().join(name)).unwrap();
        let first = parse("s", &text).expect("parse");
        let printed = first.to_string();
        let second = parse("s", &printed).expect("reparse");
        assert_eq!(first.statements.len(), second.statements.len(), "{name}");
        for (a, b) in first.statements.iter().zip(&second.statements) {
            assert_eq!(a.kind, b.kind, "{name}");
        }
    }
}
