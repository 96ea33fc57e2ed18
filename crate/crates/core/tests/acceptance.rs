//! Acceptance gate: one PASS or FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mfc_core::complex::{milnor_fiber_complex, reduced_homology, CosetAction, DEFAULT_SIMPLEX_CAP};
use mfc_core::diagram::{basic_degrees, Shephard2};
use mfc_core::group::{GroupTable, DEFAULT_CAP};
use mfc_core::verify::{load_suite, Bundle, RunOptions, Status, TheoremId, TheoremReport, Verifier};
use mfc_core::walls::{chamber_count_check, wall, Elimination, NotMfcReason, Outcome, Recognizer};
use mfc_core::{parse_symbol, Diagram, Family, TypedComplex};
use serde_json::{json, Value};

const SUITE_BUDGET: Duration = Duration::from_secs(300);

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Context {
    bundle: Bundle,
    elapsed: Duration,
    verifier: Verifier,
    recognizer: Recognizer,
}

impl Context {
    fn reports(&self, theorem: TheoremId) -> impl Iterator<Item = &TheoremReport> {
        self.bundle.reports().filter(move |r| r.theorem == theorem)
    }

    fn report(&self, theorem: TheoremId, name: &str) -> Result<&TheoremReport, String> {
        self.reports(theorem)
            .find(|r| r.name == name)
            .ok_or_else(|| format!("no {theorem} report for {name} in the default suite"))
    }

    fn all_agree(&self, theorem: TheoremId) -> Result<usize, String> {
        let mut n = 0;
        for r in self.reports(theorem) {
            ensure!(
                r.status == Status::Agree,
                "{theorem} on {}: {:?}, counterexample {}",
                r.name,
                r.status,
                json!(r.counterexample)
            );
            n += 1;
        }
        ensure!(n > 0, "no {theorem} reports");
        Ok(n)
    }

    fn verify(&self, theorem: TheoremId, symbol: &str) -> Result<TheoremReport, String> {
        let d = parse_symbol(symbol).map_err(|e| e.to_string())?;
        self.verifier
            .verify(theorem, &d)
            .map_err(|e| format!("{theorem} {symbol}: {e}"))
    }
}

fn build(d: &Diagram) -> Result<(TypedComplex, CosetAction), String> {
    let t = GroupTable::enumerate(d, DEFAULT_CAP).map_err(|e| e.to_string())?;
    milnor_fiber_complex(Arc::new(t), DEFAULT_SIMPLEX_CAP).map_err(|e| e.to_string())
}

fn class_walls(symbol: &str) -> Result<Vec<(u64, TypedComplex)>, String> {
    let (c, a) = build(&parse_symbol(symbol).unwrap())?;
    let t = a.table().clone();
    Ok(t.reflection_classes()
        .iter()
        .map(|cl| (t.element_order(cl.rep), wall(&c, &a, cl.rep)))
        .collect())
}

const NAMED: [&str; 18] = [
    "A3", "A4", "B3", "B4", "D4", "H3", "H4", "F4", "G4", "G5", "G6", "G25", "G26", "G(3,1,2)", "G(3,1,3)", "G(6,1,2)",
    "2[3]2", "2[4]2",
];

/// The rank-one and rank-two rows of the classification with order at most
/// 2000, listed from the family parameters.
fn small_rank_rows() -> Vec<Family> {
    let mut out: Vec<Family> = (2..=2000).map(Family::Cyclic).collect();
    out.extend((3..=1000).map(Family::Dihedral));
    out.extend(
        (3u32..)
            .take_while(|m| 2 * m * m <= 2000)
            .map(|m| Family::monomial(m, 2)),
    );
    out.extend(
        Shephard2::ALL
            .iter()
            .map(|&g| Family::ShephardRank2(g))
            .filter(|f| f.order() <= 2000),
    );
    out
}

fn criterion_1(cx: &Context) -> Check {
    let keys: BTreeSet<String> = cx
        .bundle
        .entries
        .iter()
        .map(|e| parse_symbol(&e.symbol).unwrap().canonical_key().unwrap())
        .collect();
    let mut groups: Vec<(Diagram, u64)> = small_rank_rows()
        .iter()
        .map(|f| (f.diagram(), f.degrees().iter().product()))
        .collect();
    for s in NAMED {
        let d = parse_symbol(s).unwrap();
        let order = d.families().unwrap().iter().map(Family::order).product();
        groups.push((d, order));
    }
    for (d, order) in &groups {
        let key = d.canonical_key().unwrap();
        ensure!(
            keys.contains(&key),
            "{} is missing from the default suite",
            d.canonical_name().unwrap()
        );
        let (c, _) = build(d)?;
        let chambers = c.count(d.rank() as isize - 1);
        ensure!(
            chambers == *order,
            "{}: {chambers} chambers, degrees give {order}",
            d.canonical_name().unwrap()
        );
    }
    for r in cx.reports(TheoremId::Counts) {
        ensure!(
            r.computed["chambers"] == json!(true),
            "counts report for {} has a chamber mismatch",
            r.name
        );
    }
    ensure!(
        cx.elapsed <= SUITE_BUDGET,
        "default suite took {:.1}s",
        cx.elapsed.as_secs_f64()
    );
    Ok(format!(
        "{} groups exact; default suite {:.1}s (budget {}s)",
        groups.len(),
        cx.elapsed.as_secs_f64(),
        SUITE_BUDGET.as_secs()
    ))
}

fn criterion_2(cx: &Context) -> Check {
    let n = cx.all_agree(TheoremId::Counts)?;
    for r in cx.reports(TheoremId::Counts) {
        ensure!(
            r.computed["walls"] == json!(true),
            "{}: a wall has the wrong chamber count",
            r.name
        );
    }
    for (s, expect) in [("G25", 54), ("G26", 72), ("H3", 12)] {
        for (_, w) in class_walls(s)? {
            let got = w.count(1);
            ensure!(got == expect, "{s}: wall with {got} chambers, expected {expect}");
        }
    }
    Ok(format!("{n} irreducible groups; G25 54, G26 72, H3 12"))
}

fn table_rows(v: &Value) -> usize {
    v.as_array()
        .map_or_else(|| v["rows"].as_u64().unwrap_or(0) as usize, Vec::len)
}

fn criterion_3(cx: &Context) -> Check {
    let mut checked = 0;
    for e in &cx.bundle.entries {
        let d = parse_symbol(&e.symbol).unwrap();
        let Some(r) = e.reports.iter().find(|r| r.theorem == TheoremId::Orlik) else {
            continue;
        };
        ensure!(
            r.status == Status::Agree,
            "orlik on {}: {}",
            r.name,
            json!(r.counterexample)
        );
        if d.is_connected() && d.rank() <= 3 {
            let t = GroupTable::enumerate(&d, DEFAULT_CAP).map_err(|e| e.to_string())?;
            let classes = t.conjugacy_classes().len();
            ensure!(
                table_rows(&r.computed) == classes,
                "{}: {} rows for {classes} classes",
                r.name,
                table_rows(&r.computed)
            );
            checked += 1;
        }
    }
    for s in ["D4", "B4", "F4"] {
        let r = cx.report(TheoremId::Orlik, s)?;
        ensure!(r.status == Status::Agree, "orlik on {s}");
        let id = &r.computed.as_array().ok_or("identity row missing")?[0];
        let (c, _) = build(&parse_symbol(s).unwrap())?;
        let expected = (basic_degrees(&parse_symbol(s).unwrap()).unwrap()[0] - 1).pow(4);
        let h = reduced_homology(&c);
        ensure!(
            h.is_concentrated_in(3, expected) && id["betti"] == json!(expected),
            "{s}: Betti {:?}",
            h.betti
        );
        if c.total_faces() <= 50_000 {
            ensure!(id["torsion_free"] == json!(true), "{s}: torsion not certified");
        }
    }
    Ok(format!(
        "{checked} irreducible groups of rank <= 3 over all classes; D4, B4, F4 whole complex"
    ))
}

fn criterion_4(cx: &Context) -> Check {
    let n = cx.all_agree(TheoremId::A)?;
    for (_, w) in class_walls("G25")? {
        let v = cx.recognizer.recognize(&w, 2).map_err(|e| e.to_string())?;
        ensure!(
            v.outcome
                == Outcome::NotMfc {
                    reason: NotMfcReason::BettiMismatchForAll
                },
            "G25 wall: {:?}",
            v.outcome
        );
    }
    let mut order_three = 0;
    for (order, w) in class_walls("G26")? {
        if order != 3 {
            continue;
        }
        order_three += 1;
        let v = cx.recognizer.recognize(&w, 2).map_err(|e| e.to_string())?;
        ensure!(!v.is_recognized(), "G26 order-3 wall recognized");
        let mut survivors = v.betti_survivors();
        survivors.sort();
        ensure!(survivors == ["G(6,1,2)", "G5"], "G26 survivors {survivors:?}");
        for c in v.candidates.iter().filter(|c| survivors.contains(&c.diagram.as_str())) {
            match &c.eliminated {
                Some(Elimination::DegreeProfileMismatch { complex, candidate }) => {
                    let has4 = |h: &Vec<(usize, usize)>| h.iter().any(|&(deg, _)| deg == 4);
                    ensure!(
                        has4(complex) && !has4(candidate),
                        "{}: no degree-4 separation",
                        c.diagram
                    );
                }
                other => return Err(format!("{} eliminated by {other:?}", c.diagram)),
            }
        }
    }
    ensure!(order_three > 0, "G26 has no order-3 reflection class");
    let mut monomial: Vec<(u32, usize)> = vec![(2, 3), (2, 4), (3, 3)];
    monomial.extend((3u32..=31).map(|m| (m, 2)));
    for (m, rank) in &monomial {
        let d = Family::monomial(*m, *rank).diagram();
        let expect = Family::monomial(*m, rank - 1).name();
        let r = cx.verifier.verify(TheoremId::A, &d).map_err(|e| e.to_string())?;
        for row in &r.details {
            ensure!(
                row["diagram"] == json!(expect),
                "G({m},1,{rank}) wall {} recognized as {}",
                row["word"],
                row["diagram"]
            );
        }
    }
    Ok(format!(
        "{n} reports agree; G25 Betti elimination; G26 order-3 walls keep {{G5, G(6,1,2)}} and fail on a degree-4 vertex; {} monomial groups recurse",
        monomial.len()
    ))
}

/// Recognized name of each class certificate, `None` for a class without one.
fn certificates(r: &TheoremReport) -> Vec<Option<String>> {
    r.details
        .iter()
        .map(|row| row["certificate"]["recognized"].as_str().map(str::to_string))
        .collect()
}

fn criterion_5(cx: &Context) -> Check {
    let mut problems = Vec::new();
    for r in cx.reports(TheoremId::B) {
        if r.status != Status::Agree {
            problems.push(format!(
                "B on {} {:?} (predicted {}, computed {})",
                r.name, r.status, r.predicted, r.computed
            ));
        }
    }
    let g25 = cx.report(TheoremId::B, "G25")?;
    for c in certificates(g25) {
        match c {
            Some(c) if c == "G(3,1,2)" => {}
            Some(c) => problems.push(format!("G25 certificate names {c}")),
            None => problems.push("G25 class without certificate".to_string()),
        }
    }
    let g26 = cx.report(TheoremId::B, "G26")?;
    for (row, c) in g26.details.iter().zip(certificates(g26)) {
        match c {
            Some(c) if c == "G(3,1,2)" || c == "G(6,1,2)" => {}
            Some(c) => problems.push(format!("G26 class {} certificate names {c}", row["word"])),
            None => problems.push(format!("G26 class {} has no certificate", row["word"])),
        }
    }
    for s in ["D4", "F4"] {
        let r = cx.report(TheoremId::B, s)?;
        let exhaustive = r
            .details
            .iter()
            .any(|row| row["certificate"].is_null() && row["families_tried"] == json!(16));
        if !exhaustive {
            problems.push(format!("{s}: no class fails all 16 families"));
        }
    }
    ensure!(problems.is_empty(), "{}", problems.join("; "));
    Ok("suite agrees; G25 and G26 certificates; D4 and F4 exhaustive failures".to_string())
}

fn criterion_6(cx: &Context) -> Check {
    let n = cx.all_agree(TheoremId::Counts)?;
    let d4 = parse_symbol("D4").unwrap();
    let (c, a) = build(&d4)?;
    let check = chamber_count_check(&c, &a, a.table(), &d4).map_err(|e| e.to_string())?;
    let bad = check.item_i_counterexample(4).ok_or("D4 satisfies item (i)")?;
    ensure!(
        bad.p == 2 && bad.count != 8,
        "D4 counterexample p = {} count = {}",
        bad.p,
        bad.count
    );
    for s in ["A3", "B3", "H3", "G4", "G(3,1,3)"] {
        let d = parse_symbol(s).unwrap();
        let (c, a) = build(&d)?;
        let check = chamber_count_check(&c, &a, a.table(), &d).map_err(|e| e.to_string())?;
        ensure!(check.item_i, "{s}: item (i) fails");
    }
    Ok(format!(
        "D4 class {} has f_1 = {} != 8; item (i) holds on the rest; {n} counts reports agree",
        bad.word, bad.count
    ))
}

fn criterion_7(cx: &Context) -> Check {
    for (m, n) in [(2u32, 2usize), (3, 2), (2, 3), (3, 3)] {
        let symbol = Family::monomial(m, n).diagram().to_symbol();
        let r = cx.verify(TheoremId::Monomial, &symbol)?;
        ensure!(r.status == Status::Agree, "G({m},1,{n}): computed {}", r.computed);
    }
    Ok("(2,2), (3,2), (2,3), (3,3) equivariant, walls recurse on both models".to_string())
}

fn criterion_8(cx: &Context) -> Check {
    for s in ["A1 + A1", "A2 + Z3", "A2 + A1", "Z3 + G(3,1,2)"] {
        let r = cx.verify(TheoremId::Join, s)?;
        ensure!(r.status == Status::Agree, "{s}: computed {}", r.computed);
    }
    Ok("A1+A1, A2+Z3, A2+A1, Z3+G(3,1,2)".to_string())
}

fn criterion_9() -> Check {
    let suite = load_suite(&suite_path("deep.toml")).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let bundle = suite
        .run(&RunOptions {
            deep: true,
            ..RunOptions::default()
        })
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let find = |t: TheoremId| {
        bundle
            .reports()
            .find(|r| r.theorem == t && r.name == "G32")
            .ok_or(format!("no {t} report"))
    };
    let counts = find(TheoremId::Counts)?;
    let rows = counts.details.iter();
    let identity = counts
        .details
        .iter()
        .find(|r| r["word"] == json!("1"))
        .ok_or("identity row")?;
    ensure!(identity["count"] == json!(155520), "G32 chambers {}", identity["count"]);
    for row in rows.filter(|r| r["is_reflection"] == json!(true)) {
        ensure!(
            row["count"] == json!(5184),
            "G32 wall {} has {} chambers",
            row["word"],
            row["count"]
        );
    }
    let a = find(TheoremId::A)?;
    ensure!(
        a.computed == json!(false) && a.status == Status::Agree,
        "G32 Theorem A computed {}",
        a.computed
    );
    for row in &a.details {
        let h = &row["homology"];
        ensure!(
            h["betti"] == json!([0, 0, 1331]) && h["betti_minus_one"] == json!(0),
            "G32 wall Betti {h}"
        );
    }
    let b = find(TheoremId::B)?;
    ensure!(
        b.computed == json!(true) && b.status == Status::Agree,
        "G32 Theorem B computed {}",
        b.computed
    );
    for row in &b.details {
        ensure!(
            row["certificate"]["recognized"] == json!("G26"),
            "G32 certificate {}",
            row["certificate"]
        );
    }
    Ok(format!(
        "G32: 155520 chambers, walls 5184, Betti (0,0,1331), A false, B true via G26 ({:.1}s)",
        elapsed.as_secs_f64()
    ))
}

fn suite_path(file: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../suites").join(file)
}

fn main() -> ExitCode {
    let suite = load_suite(&suite_path("default.toml")).expect("default suite");
    let start = Instant::now();
    let bundle = suite.run(&RunOptions::default()).expect("default suite run");
    let cx = Context {
        bundle,
        elapsed: start.elapsed(),
        verifier: Verifier::default(),
        recognizer: Recognizer::default(),
    };
    let criteria: [Criterion; 9] = [
        ("chamber counts", Box::new(|| criterion_1(&cx))),
        ("wall chamber counts", Box::new(|| criterion_2(&cx))),
        ("Orlik Betti numbers", Box::new(|| criterion_3(&cx))),
        ("Theorem A", Box::new(|| criterion_4(&cx))),
        ("Theorem B", Box::new(|| criterion_5(&cx))),
        ("chamber count equivalence", Box::new(|| criterion_6(&cx))),
        ("monomial flag model", Box::new(|| criterion_7(&cx))),
        ("joins and reduction", Box::new(|| criterion_8(&cx))),
        ("deep G32", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
