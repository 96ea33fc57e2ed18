use mfc_core::parse_symbol;
use mfc_core::verify::{Status, TheoremId, TheoremReport, Verifier};
use serde_json::json;

fn run(t: TheoremId, s: &str) -> TheoremReport {
    Verifier::default().verify(t, &parse_symbol(s).unwrap()).unwrap()
}

#[test]
fn theorem_a_examples() {
    for (s, expect) in [
        ("2[3]2[4]3", true),
        ("G25", false),
        ("D4", false),
        ("A3", true),
        ("Z5", true),
        ("G4", true),
    ] {
        let r = run(TheoremId::A, s);
        assert_eq!(r.predicted, json!(expect), "{s}");
        assert_eq!(
            r.status,
            Status::Agree,
            "{s}: {}",
            serde_json::to_string(&r.counterexample).unwrap()
        );
    }
}

#[test]
fn monomial_walls_are_named_one_rank_down() {
    let r = run(TheoremId::A, "2[3]2[4]3");
    for row in &r.details {
        assert_eq!(row["diagram"], json!("G(3,1,2)"), "{row}");
    }
}

#[test]
fn theorem_b_examples() {
    for (s, expect) in [("F4", false), ("A3", true), ("G25", true)] {
        let r = run(TheoremId::B, s);
        assert_eq!(r.predicted, json!(expect), "{s}");
        assert_eq!(r.status, Status::Agree, "{s}");
    }
    let r = run(TheoremId::B, "A3");
    for row in &r.details {
        assert_eq!(row["certificate"]["full_family"], json!(true));
        assert_eq!(row["certificate"]["recognized"], json!("A2"));
    }
}

#[test]
fn counts_orlik_monomial_examples() {
    let r = run(TheoremId::Counts, "H3");
    assert_eq!(r.status, Status::Agree);
    assert_eq!(r.computed["item_i"], json!(true));
    let r = run(TheoremId::Orlik, "G4");
    assert_eq!(r.status, Status::Agree);
    let id = r.details.iter().find(|d| d["word"] == json!("1")).unwrap();
    assert_eq!(id["betti"], json!([0, 9]));
    let r = run(TheoremId::Monomial, "B3");
    assert_eq!(r.status, Status::Agree);
}

#[test]
fn join_checks() {
    for s in ["A1 + A1", "A2 + Z3", "Z3 + 2[4]3"] {
        let r = run(TheoremId::Join, s);
        assert_eq!(r.status, Status::Agree, "{s}: {}", r.computed);
    }
}

#[test]
fn reports_are_deterministic() {
    let a = serde_json::to_string(&run(TheoremId::B, "H3")).unwrap();
    let b = serde_json::to_string(&run(TheoremId::B, "H3")).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"mfc_report\":1"));
    assert!(!a.contains("timing_ms"));
}
