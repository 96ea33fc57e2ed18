use std::sync::Arc;

use mfc_core::complex::homology::smith_diagonal;
use mfc_core::complex::{find_isomorphism, milnor_fiber_complex, reduced_homology, CosetAction, DEFAULT_SIMPLEX_CAP};
use mfc_core::diagram::{basic_degrees, classify_component, enumerate_admissible, has_forbidden_subdiagram, Shephard2};
use mfc_core::group::{GroupTable, DEFAULT_CAP};
use mfc_core::walls::{fixed_subcomplex, setwise_fixed_is_pointwise};
use mfc_core::{parse_symbol, ComplexAction, Diagram, Family, TypedComplex};
use num_bigint::BigInt;
use proptest::prelude::*;

fn families() -> Vec<Family> {
    let mut out: Vec<Family> = (2..=7).map(Family::Cyclic).collect();
    out.extend((3..=8).map(Family::Dihedral));
    out.extend([Family::A(3), Family::A(4), Family::D(4), Family::H3, Family::F4]);
    out.extend([
        Family::monomial(2, 3),
        Family::monomial(3, 2),
        Family::monomial(4, 2),
        Family::monomial(3, 3),
    ]);
    out.extend([Shephard2::G4, Shephard2::G5, Shephard2::G6, Shephard2::G8].map(Family::ShephardRank2));
    out
}

fn family() -> impl Strategy<Value = Family> {
    proptest::sample::select(families())
}

/// Unions of one to three families, of total rank at most 6.
fn diagram() -> impl Strategy<Value = Diagram> {
    proptest::collection::vec(family(), 1..=3)
        .prop_map(|fs| {
            fs.iter()
                .map(Family::diagram)
                .fold(Diagram::empty(), |acc, d| acc.union(&d))
        })
        .prop_filter("rank bound", |d| d.rank() <= 6)
}

fn small_diagram(max_order: u64) -> impl Strategy<Value = Diagram> {
    diagram().prop_filter("order bound", move |d| d.group_order().unwrap() <= max_order)
}

fn build(d: &Diagram) -> (TypedComplex, CosetAction) {
    let t = GroupTable::enumerate(d, DEFAULT_CAP).unwrap();
    milnor_fiber_complex(Arc::new(t), DEFAULT_SIMPLEX_CAP).unwrap()
}

/// Determinant by fraction-free elimination.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symbols_round_trip(d in diagram()) {
        let back = parse_symbol(&d.to_symbol()).unwrap();
        prop_assert!(back.isomorphic_to(&d));
        prop_assert_eq!(back.canonical_key().unwrap(), d.canonical_key().unwrap());
    }

    #[test]
    fn classification_ignores_reversal(f in family()) {
        let d = f.diagram();
        prop_assume!(d.linear_order().is_some());
        prop_assert_eq!(classify_component(&d).unwrap(), classify_component(&d.reversed()).unwrap());
    }

    #[test]
    fn degrees_multiply_to_enumerated_order(d in small_diagram(20000)) {
        let t = GroupTable::enumerate(&d, DEFAULT_CAP).unwrap();
        let degrees = basic_degrees(&d).unwrap();
        prop_assert_eq!(degrees.iter().product::<u64>(), t.order() as u64);
        prop_assert_eq!(t.reflections().len() as u64, degrees.iter().map(|x| x - 1).sum::<u64>());
    }

    #[test]
    fn regular_action_and_cosets(d in small_diagram(5000), pick in any::<u32>(), mask in any::<u32>()) {
        let t = GroupTable::enumerate(&d, DEFAULT_CAP).unwrap();
        let g = 1 + pick % (t.order() as u32 - 1);
        let left = t.left_multiplication(g);
        prop_assert!(left.iter().enumerate().all(|(e, &x)| e as u32 != x));
        prop_assert_eq!(t.apply_word(0, &t.word(g)), g);
        prop_assert_eq!(t.multiply(g, t.inverse(g)), 0);
        let subset: Vec<usize> = (0..d.rank()).filter(|&i| mask >> i & 1 == 1).collect();
        let part = t.parabolic_cosets(&subset);
        prop_assert_eq!(part.num_blocks() * part.block_size, t.order());
        prop_assert!(part.blocks().iter().all(|b| b.len() == part.block_size));
    }

    #[test]
    fn odd_braids_join_reflection_classes(d in small_diagram(20000)) {
        let t = GroupTable::enumerate(&d, DEFAULT_CAP).unwrap();
        let classes = t.reflection_classes();
        let class_of = |g: u32| classes.iter().position(|c| c.elements.binary_search(&g).is_ok());
        for (i, j, m) in d.edges() {
            if m % 2 == 1 {
                prop_assert_eq!(class_of(t.generator(i)), class_of(t.generator(j)));
            }
        }
    }

    #[test]
    fn forbidden_subdiagrams_are_monotone(d in diagram(), e in family()) {
        let patterns = [Family::D(4), Family::F4, Family::H4, Family::G25, Family::G26];
        let bigger = d.union(&e.diagram());
        if has_forbidden_subdiagram(&d, &patterns) {
            prop_assert!(has_forbidden_subdiagram(&bigger, &patterns));
        }
    }

    #[test]
    fn enumeration_contains_every_union(d in small_diagram(100000)) {
        let key = d.canonical_key().unwrap();
        let all = enumerate_admissible(d.rank(), d.group_order().unwrap());
        prop_assert!(all.iter().any(|x| x.canonical_key().unwrap() == key));
    }

    #[test]
    fn complexes_count_chambers_and_homology(d in small_diagram(3000)) {
        let (c, a) = build(&d);
        let order = d.group_order().unwrap();
        prop_assert_eq!(c.count(d.rank() as isize - 1), order);
        let h = reduced_homology(&c);
        let euler: i64 = c.f_vector().iter().enumerate().map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) }).sum();
        let betti: i64 = h.betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
        prop_assert_eq!(euler - 1, betti - h.betti_minus_one as i64);
        for i in 0..a.num_generators() {
            let p = a.generator_permutation(i);
            prop_assert!((0..p.len() as u32).all(|v| c.vertex_type(v) == c.vertex_type(p[v as usize])));
        }
    }

    #[test]
    fn setwise_fixed_faces_are_pointwise_fixed(d in small_diagram(3000), pick in any::<u32>()) {
        let (c, a) = build(&d);
        let g = pick % a.group_order() as u32;
        let perm = a.vertex_permutation(g);
        prop_assert!(setwise_fixed_is_pointwise(&c, &perm));
        let fixed = fixed_subcomplex(&c, &a, g);
        let (expect, _) = c.filtered(|f| {
            let mut image: Vec<u32> = f.iter().map(|&v| perm[v as usize]).collect();
            image.sort_unstable();
            image == f
        });
        prop_assert_eq!(fixed, expect);
    }

    #[test]
    fn join_f_vectors_convolve(d in small_diagram(60), e in small_diagram(60)) {
        let (x, _) = build(&d);
        let (y, _) = build(&e);
        let j = x.join(&y);
        let fx: Vec<u64> = std::iter::once(1).chain(x.f_vector()).collect();
        let fy: Vec<u64> = std::iter::once(1).chain(y.f_vector()).collect();
        let mut expect = vec![0u64; fx.len() + fy.len() - 1];
        for (i, a) in fx.iter().enumerate() {
            for (k, b) in fy.iter().enumerate() {
                expect[i + k] += a * b;
            }
        }
        prop_assert_eq!(j.f_vector(), expect[1..].to_vec());
        let (u, _) = build(&d.union(&e));
        prop_assert!(find_isomorphism(&j, &u, true).is_some());
    }

    #[test]
    fn relabelled_complexes_are_isomorphic(d in small_diagram(200), seed in any::<u64>()) {
        let (c, _) = build(&d);
        let n = c.num_vertices();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            perm.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let mut types = vec![0u16; n];
        for v in 0..n {
            types[perm[v] as usize] = c.vertex_type(v as u32);
        }
        let top = c.dim() as usize;
        let faces: Vec<Vec<u32>> = c.faces(top).map(|f| f.iter().map(|&v| perm[v as usize]).collect()).collect();
        let shuffled = TypedComplex::new(c.type_labels().to_vec(), types, faces).unwrap();
        prop_assert_eq!(shuffled.f_vector(), c.f_vector());
        prop_assert!(find_isomorphism(&c, &shuffled, true).is_some());
    }

    #[test]
    fn smith_diagonal_matches_rank_and_determinant(rows in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 4), 4)) {
        let diag = smith_diagonal(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect());
        let det = bareiss_det(rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect());
        let product: BigInt = diag.iter().product();
        let nonzero = diag.iter().filter(|x| **x != BigInt::from(0)).count();
        if det != 0 {
            prop_assert_eq!(nonzero, 4);
            prop_assert_eq!(product.magnitude().clone(), BigInt::from(det).magnitude().clone());
        } else {
            prop_assert!(nonzero < 4);
        }
        for w in diag.windows(2) {
            if w[0] != BigInt::from(0) {
                prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
            }
        }
    }
}
