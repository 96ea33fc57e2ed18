use std::sync::Arc;

use mfc_core::complex::{find_isomorphism, milnor_fiber_complex, reduced_homology, CosetAction, DEFAULT_SIMPLEX_CAP};
use mfc_core::group::{GroupTable, DEFAULT_CAP};
use mfc_core::walls::{
    chamber_count_check, fixed_subcomplex, setwise_fixed_is_pointwise, wall, Elimination, NotMfcReason, Outcome,
    Recognizer,
};
use mfc_core::{parse_symbol, ComplexAction, TypedComplex};

fn build(s: &str) -> (TypedComplex, CosetAction) {
    let t = GroupTable::enumerate(&parse_symbol(s).unwrap(), DEFAULT_CAP).unwrap();
    milnor_fiber_complex(Arc::new(t), DEFAULT_SIMPLEX_CAP).unwrap()
}

fn class_walls(s: &str) -> Vec<TypedComplex> {
    let (c, a) = build(s);
    a.table()
        .reflection_classes()
        .iter()
        .map(|cl| wall(&c, &a, cl.rep))
        .collect()
}

#[test]
fn g25_walls_fail_at_betti_step() {
    let r = Recognizer::default();
    for w in class_walls("G25") {
        assert_eq!(w.f_vector().last(), Some(&54));
        let v = r.recognize(&w, 2).unwrap();
        assert_eq!(
            v.outcome,
            Outcome::NotMfc {
                reason: NotMfcReason::BettiMismatchForAll
            }
        );
        let names: Vec<&str> = v.candidates.iter().map(|c| c.diagram.as_str()).collect();
        assert_eq!(names.len(), 4, "{names:?}");
        for n in ["Z2 + Z27", "Z3 + Z18", "Z6 + Z9", "I2(27)"] {
            assert!(names.contains(&n), "{names:?}");
        }
    }
}

#[test]
fn g26_walls_fail_at_isomorphism_step() {
    let r = Recognizer::default();
    let (c, a) = build("G26");
    let w = wall(&c, &a, a.table().generator(0));
    assert_eq!(w.f_vector().last(), Some(&72));
    assert!(w.degree_histogram().iter().any(|&(deg, _)| deg == 4));
    let v = r.recognize(&w, 2).unwrap();
    let mut survivors = v.betti_survivors();
    survivors.sort();
    assert_eq!(survivors, vec!["G(6,1,2)", "G5"]);
    for cand in &v.candidates {
        if survivors.contains(&cand.diagram.as_str()) {
            assert!(matches!(
                cand.eliminated,
                Some(Elimination::DegreeProfileMismatch { .. })
            ));
        }
    }
    assert!(!v.is_recognized());
}

#[test]
fn monomial_walls_recognized_one_rank_down() {
    let r = Recognizer::default();
    for (s, expect) in [("2[3]2[4]3", "G(3,1,2)"), ("2[3]2[4]2", "B2"), ("2[4]3", "Z3")] {
        for w in class_walls(s) {
            let v = r.recognize(&w, parse_symbol(s).unwrap().rank() - 1).unwrap();
            // the transposition class gives G(m,1,n-1); the diagonal classes
            // give G(m,1,n-1) as well, except in rank two
            assert!(v.is_recognized(), "{s}: {:?}", v.outcome);
            if v.recognized() == Some(expect) {
                assert!(v.recheck(&w, &r).unwrap());
            }
        }
    }
}

#[test]
fn g25_walls_are_milnor_walls_of_g312() {
    let r = Recognizer::default();
    for w in class_walls("G25") {
        let cert = r.milnor_wall_search(&w, 3).unwrap().certificate.unwrap();
        assert_eq!(cert.recognized, "G(3,1,2)");
    }
}

#[test]
fn g26_wall_families() {
    let r = Recognizer::default();
    let (c, a) = build("G26");
    let (g312, _) = build("2[4]3");
    let t = a.table().clone();
    for cl in t.reflection_classes() {
        let w = wall(&c, &a, cl.rep);
        let search = r.milnor_wall_search(&w, 3).unwrap();
        if t.element_order(cl.rep) == 2 {
            // the whole wall is already the complex of G5
            let cert = search.certificate.unwrap();
            assert_eq!(cert.recognized, "G5");
            assert!(cert.full_family);
            continue;
        }
        // an order-3 reflection fixes no coset of <r3>, so no edge of type
        // {r1, r2}; the {r1, r3} edges split into two copies of G(3,1,2)
        assert!(search.certificate.is_none());
        assert_eq!(search.attempts.len(), 8);
        assert!(w.faces(1).all(|f| w.face_type(f) != vec![0, 1]));
        let (sub, _) = w.filtered(|f| f.len() == 2 && w.face_type(f) == vec![0, 2]);
        assert_eq!(sub.f_vector(), vec![30, 36]);
        assert_eq!(reduced_homology(&sub).betti, vec![1, 8]);
        let adj = sub.adjacency();
        let mut seen = vec![false; sub.num_vertices()];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v as usize] {
                if !std::mem::replace(&mut seen[u as usize], true) {
                    stack.push(u);
                }
            }
        }
        let half = sub.generated(
            sub.faces(1)
                .filter(|f| seen[f[0] as usize])
                .map(|f| f.to_vec())
                .collect::<Vec<_>>(),
        );
        assert!(find_isomorphism(&half, &g312, false).is_some());
    }
}

#[test]
fn d4_and_f4_have_walls_without_certificates() {
    let r = Recognizer::default();
    for s in ["D4", "F4"] {
        let results: Vec<bool> = class_walls(s)
            .iter()
            .map(|w| {
                let search = r.milnor_wall_search(w, 4).unwrap();
                if search.certificate.is_none() {
                    assert_eq!(search.attempts.len(), 16);
                }
                search.certificate.is_some()
            })
            .collect();
        assert!(results.contains(&false), "{s}");
    }
}

#[test]
fn setwise_fixed_faces_are_fixed_pointwise() {
    for s in ["A3", "G25", "2[4]3", "G26", "H3"] {
        let (c, a) = build(s);
        for cl in a.table().conjugacy_classes() {
            let perm = a.vertex_permutation(cl[0]);
            assert!(setwise_fixed_is_pointwise(&c, &perm), "{s}");
        }
    }
}

#[test]
fn conjugate_reflections_have_isomorphic_walls() {
    for s in ["G26", "B3", "H3"] {
        let (c, a) = build(s);
        let t = a.table().clone();
        for cl in t.reflection_classes() {
            let base = fixed_subcomplex(&c, &a, cl.rep);
            for &r in cl.elements.iter().take(4) {
                let other = fixed_subcomplex(&c, &a, r);
                assert!(find_isomorphism(&base, &other, true).is_some());
            }
        }
    }
}

#[test]
fn chamber_counts_of_d4_fail_item_i() {
    let d = parse_symbol("D4").unwrap();
    let (c, a) = build("D4");
    let check = chamber_count_check(&c, &a, a.table(), &d).unwrap();
    assert!(check.chambers_ok && check.walls_ok);
    assert!(!check.item_i);
    let bad = check.item_i_counterexample(4).unwrap();
    assert_eq!(bad.p, 2);
    assert_ne!(bad.count, 8);
    for s in ["A3", "B3", "H3", "G4", "2[3]2[4]3"] {
        let d = parse_symbol(s).unwrap();
        let (c, a) = build(s);
        let check = chamber_count_check(&c, &a, a.table(), &d).unwrap();
        assert!(check.item_i && check.item_ii && check.walls_ok, "{s}");
    }
}

#[test]
fn orlik_bouquets_for_g26_classes() {
    let (c, a) = build("G26");
    let t = a.table().clone();
    for cl in t.conjugacy_classes() {
        let f = fixed_subcomplex(&c, &a, cl[0]);
        let p = f.dim() + 1;
        let h = reduced_homology(&f);
        assert!(h.is_concentrated_in(p - 1, 5u64.pow(p as u32)), "class of {}", cl[0]);
    }
}
