//! Scope validation and error-path tests for the script language.

use surgery_core::dsl::{execute, parse, parse_dataset, validate, Dataset};

const DATASET: &str = "
generators T S
gram T = S:1
gram S = S:-2
exceptionals E1..E4
";

fn dataset() -> Dataset {
    parse_dataset(DATASET).unwrap()
}

#[test]
fn undeclared_config_is_rejected() {
    let script = parse("t", "start E2\nrbd C_unknown\n").unwrap();
    let err = validate(&script, &dataset()).unwrap_err();
    assert!(err.msg.contains("undeclared config `C_unknown`"), "{err}");
}

#[test]
fn start_must_come_first_and_models_are_known() {
    let script = parse("t", "blowup E1\nstart E2\n").unwrap();
    assert!(validate(&script, &dataset()).is_err());

    let script = parse("t", "start E9\n").unwrap();
    let err = validate(&script, &dataset()).unwrap_err();
    assert!(err.msg.contains("unknown starting model"), "{err}");
}

#[test]
fn unknown_statement_is_a_parse_error() {
    let err = parse("t", "start E2\nfrobnicate X\n").unwrap_err();
    assert_eq!(err.line, 2);
    assert!(err.msg.contains("unknown statement"), "{err}");
}

#[test]
fn two_statement_script_parses() {
    let script = parse("t", "start E2\nknot_surgery fiber=T alexander=twist(n)\n").unwrap();
    assert_eq!(script.statements.len(), 2);
}

#[test]
fn every_use_before_declaration_permutation_is_rejected() {
    // statement pool: the declaration order below is the only valid one
    let stmts = [
        "start E2",
        "declare_class X = T + E1",
        "declare_class Y = X - E2",
        "assert_sw_value class=Y coeff=1",
    ];
    let ds = dataset();
    let mut tried = 0;
    let mut rejected = 0;
    permute(&mut [0, 1, 2, 3], 0, &mut |perm: &[usize]| {
        let text: String =
            perm.iter().map(|&i| format!("{}\n", stmts[i])).collect();
        let script = parse("t", &text).unwrap();
        let ok = validate(&script, &ds).is_ok();
        let well_scoped = perm == [0, 1, 2, 3];
        assert_eq!(ok, well_scoped, "permutation {perm:?}");
        tried += 1;
        if !ok {
            rejected += 1;
        }
    });
    assert_eq!(tried, 24);
    assert_eq!(rejected, 23);
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[test]
fn double_blowup_is_rejected() {
    let script = parse("t", "start E2\nblowup E1\nblowup E1\n").unwrap();
    let err = validate(&script, &dataset()).unwrap_err();
    assert!(err.msg.contains("blown up twice"), "{err}");
}

#[test]
fn double_rbd_of_same_config_is_rejected() {
    let text = "
start E2
declare_class fourE = E1 - E2 - E3 - E4
declare_config C21 pq=(2, 1) plumbing=(-4) spheres=[fourE]
rbd C21
rbd C21
";
    let script = parse("t", text).unwrap();
    let err = validate(&script, &dataset()).unwrap_err();
    assert!(err.msg.contains("already blown down"), "{err}");
}

#[test]
fn negative_twist_fails_at_execution() {
    let script = parse("t", "start E2\nknot_surgery fiber=T alexander=twist(n)\n").unwrap();
    let err = execute(&script, &dataset(), -1).unwrap_err();
    assert_eq!(err.step, 2);
    assert!(err.to_string().contains("non-negative"), "{err}");
}

#[test]
fn blowup_of_non_exceptional_is_rejected() {
    let script = parse("t", "start E2\nblowup S\n").unwrap();
    let err = validate(&script, &dataset()).unwrap_err();
    assert!(err.msg.contains("not exceptional"), "{err}");
}

#[test]
fn failed_assertions_are_reported_not_fatal() {
    let script = parse("t", "start E2\nassert_ledger e=0 sigma=0 b2plus=0 b2minus=0\n").unwrap();
    let report = execute(&script, &dataset(), 1).unwrap();
    assert_eq!(report.assertions_failed(), 1);
    assert!(!report.all_assertions_pass());
    assert!(report.render().contains("assert FAIL"));
}

#[test]
fn knot_surgery_with_explicit_polynomial() {
    let text = "start E2\nknot_surgery fiber=T alexander=poly(1:1, 0:-1, -1:1)\n";
    let script = parse("t", text).unwrap();
    let report = execute(&script, &dataset(), 1).unwrap();
    assert!(report.steps[1].sw_summary.contains("e^{2T}"));

    // asymmetric polynomial is refused by the constructor
    let text = "start E2\nknot_surgery fiber=T alexander=poly(1:2, -1:1)\n";
    let script = parse("t", text).unwrap();
    let err = execute(&script, &dataset(), 1).unwrap_err();
    assert!(err.to_string().contains("not symmetric"), "{err}");
}

#[test]
fn nexpr_forms_evaluate_and_roundtrip() {
    use surgery_core::dsl::StmtKind;
    let cases = [
        ("n^3", 2, 8),
        ("2*n - 1", 3, 5),
        ("-(n + 1)", 4, -5),
        ("n*n*n", 5, 125),
        ("(n - 1)^2 + 1", 4, 10),
    ];
    for (src, n, want) in cases {
        let text = format!("start E2\nassert_sw_value class=T coeff={src}\n");
        let script = parse("t", &text).unwrap();
        let StmtKind::AssertSwValue { coeff, .. } = &script.statements[1].kind else {
            panic!("wrong statement")
        };
        assert_eq!(coeff.eval(n), want, "{src}");
        // printer output parses back to the same tree
        let reparsed = parse("t", &script.to_string()).unwrap();
        assert_eq!(script.statements[1].kind, reparsed.statements[1].kind, "{src}");
    }
}
