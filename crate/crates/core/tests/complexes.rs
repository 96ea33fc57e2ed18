use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use mfc_core::complex::monomial::check_equivariance;
use mfc_core::complex::{
    find_isomorphism, milnor_fiber_complex, monomial_flag_complex, reduced_homology, Torsion, DEFAULT_SIMPLEX_CAP,
};
use mfc_core::group::{GroupTable, DEFAULT_CAP};
use mfc_core::{parse_symbol, TypedComplex};

fn coset_complex(s: &str) -> (TypedComplex, mfc_core::complex::CosetAction) {
    let t = GroupTable::enumerate(&parse_symbol(s).unwrap(), DEFAULT_CAP).unwrap();
    milnor_fiber_complex(Arc::new(t), DEFAULT_SIMPLEX_CAP).unwrap()
}

/// A3 built from scratch in S4: chambers are permutations, the vertex of
/// type `r` of chamber `w` is the coset `w <s_j : j != r>` as a set.
fn a3_oracle() -> TypedComplex {
    type Perm = [u8; 4];
    let compose =
        |a: &Perm, b: &Perm| -> Perm { [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize], a[b[3] as usize]] };
    let gens: Vec<Perm> = (0..3)
        .map(|i| {
            let mut p = [0, 1, 2, 3];
            p.swap(i, i + 1);
            p
        })
        .collect();
    let mut elements: Vec<Perm> = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    if p.iter().collect::<BTreeSet<_>>().len() == 4 {
                        elements.push(p);
                    }
                }
            }
        }
    }
    let subgroup = |sub: &[usize]| -> Vec<Perm> {
        let mut set: BTreeSet<Perm> = [[0, 1, 2, 3]].into_iter().collect();
        loop {
            let before = set.len();
            let cur: Vec<Perm> = set.iter().copied().collect();
            for x in cur {
                for &i in sub {
                    set.insert(compose(&x, &gens[i]));
                }
            }
            if set.len() == before {
                return set.into_iter().collect();
            }
        }
    };
    let mut vertex_id: HashMap<(usize, Vec<Perm>), u32> = HashMap::new();
    let mut vertex_types = Vec::new();
    let mut facets = Vec::new();
    for w in &elements {
        let mut chamber = Vec::new();
        for r in 0..3 {
            let others: Vec<usize> = (0..3).filter(|&j| j != r).collect();
            let mut coset: Vec<Perm> = subgroup(&others).iter().map(|h| compose(w, h)).collect();
            coset.sort();
            let next = vertex_id.len() as u32;
            let id = *vertex_id.entry((r, coset)).or_insert_with(|| {
                vertex_types.push(r as u16);
                next
            });
            chamber.push(id);
        }
        facets.push(chamber);
    }
    let labels = vec!["s1".to_string(), "s2".to_string(), "s3".to_string()];
    TypedComplex::new(labels, vertex_types, facets).unwrap()
}

#[test]
fn a3_matches_symmetric_group_oracle() {
    let (c, _) = coset_complex("A3");
    let oracle = a3_oracle();
    assert_eq!(oracle.f_vector(), vec![14, 36, 24]);
    assert_eq!(c.f_vector(), oracle.f_vector());
    assert_eq!(c.reduced_euler_characteristic() + 1, 2);
    let iso = find_isomorphism(&c, &oracle, true).unwrap();
    assert!(iso.verify(&c, &oracle));
}

#[test]
fn chamber_counts_and_connectivity() {
    for (s, chambers) in [("G25", 648u64), ("H3", 120), ("2[4]3", 18), ("G26", 1296), ("F4", 1152)] {
        let (c, _) = coset_complex(s);
        assert_eq!(*c.f_vector().last().unwrap(), chambers, "{s}");
        assert!(c.is_pure());
        assert!(c.chambers_connected(), "{s}");
    }
}

#[test]
fn bouquet_betti_numbers() {
    let h = reduced_homology(&coset_complex("G25").0);
    assert_eq!(h.betti, vec![0, 0, 125]);
    assert_eq!(h.torsion, Torsion::Free);
    let h = reduced_homology(&coset_complex("H3").0);
    assert_eq!(h.betti, vec![0, 0, 1]);
    let h = reduced_homology(&coset_complex("2[4]3").0);
    assert_eq!(h.betti, vec![0, 4]);
    let h = reduced_homology(&coset_complex("3[3]3").0);
    assert_eq!(h.betti, vec![0, 9]);
}

#[test]
fn euler_characteristic_matches_betti() {
    for s in ["A3", "G26", "2[4]4", "3[4]3"] {
        let c = coset_complex(s).0;
        let h = reduced_homology(&c);
        let alt: i64 = h
            .betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum::<i64>()
            - h.betti_minus_one as i64;
        assert_eq!(alt, c.reduced_euler_characteristic(), "{s}");
    }
}

#[test]
fn degree_profiles_separate_g5_and_g612() {
    let g5 = coset_complex("G5").0;
    let g612 = coset_complex("G(6,1,2)").0;
    assert_eq!(g5.f_vector().last(), g612.f_vector().last());
    assert_eq!(g5.degree_histogram(), vec![(3, 48)]);
    assert_eq!(g612.degree_histogram(), vec![(2, 36), (6, 12)]);
    assert!(find_isomorphism(&g5, &g612, false).is_none());
}

#[test]
fn vertex_link_of_g26_is_g4() {
    let (c, _) = coset_complex("G26");
    let (g4, _) = coset_complex("G4");
    let v = c.vertex_types().iter().position(|&t| t == 2).unwrap() as u32;
    let link = c.link(&[v]).unwrap();
    let iso = find_isomorphism(&link, &g4, true).unwrap();
    assert!(iso.verify(&link, &g4));
}

#[test]
fn links_are_parabolic_complexes() {
    // every vertex link is the complex of the parabolic on the other types
    for s in ["A3", "G25", "2[4]3", "3[3]3[4]2", "H3"] {
        let d = parse_symbol(s).unwrap();
        let (c, _) = coset_complex(s);
        for r in 0..d.rank() {
            let others: Vec<usize> = (0..d.rank()).filter(|&j| j != r).collect();
            let (sub, _) = coset_complex(&d.induced(&others).to_symbol());
            for v in (0..c.num_vertices() as u32).filter(|&v| c.vertex_type(v) == r as u16) {
                let link = c.link(&[v]).unwrap();
                assert!(find_isomorphism(&link, &sub, true).is_some(), "{s} vertex {v}");
            }
        }
    }
}

#[test]
fn joins_match_product_groups() {
    for (left, right) in [("A1", "A1"), ("A2", "Z3"), ("A2", "A1"), ("Z3", "2[4]3")] {
        let (a, _) = coset_complex(left);
        let (b, _) = coset_complex(right);
        let (p, _) = coset_complex(&format!("{left} + {right}"));
        let j = a.join(&b);
        let iso = find_isomorphism(&j, &p, true).unwrap();
        assert!(iso.verify(&j, &p));
    }
    let tri = coset_complex("A2 + Z3").0;
    assert_eq!(tri.f_vector(), vec![9, 24, 18]);
}

#[test]
fn flag_models_are_equivariantly_isomorphic() {
    for (m, n) in [(2u32, 2usize), (3, 2), (4, 2), (2, 3), (3, 3), (4, 3)] {
        let d = mfc_core::Family::monomial(m, n).diagram();
        let t = Arc::new(GroupTable::enumerate(&d, DEFAULT_CAP).unwrap());
        let (coset, action) = milnor_fiber_complex(t.clone(), DEFAULT_SIMPLEX_CAP).unwrap();
        let (flag, flag_action) = monomial_flag_complex(m, n, DEFAULT_SIMPLEX_CAP).unwrap();
        let check = check_equivariance(&coset, &action, &flag, &flag_action.with_table(t));
        assert!(check.holds(), "G({m},1,{n}): {check:?}");
    }
}

#[test]
fn export_import_preserves_structure() {
    let (c, _) = coset_complex("G4");
    let back = TypedComplex::from_export_str(&c.to_export_string()).unwrap();
    assert_eq!(back.f_vector(), c.f_vector());
    assert!(find_isomorphism(&c, &back, true).is_some());
}
