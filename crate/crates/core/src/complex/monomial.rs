//! The full monomial group `G(m,1,n)` acting on flags of labeled
//! coordinate sets.
//!
//! A vertex is a set `{a_1 e_{i_1}, ..., a_k e_{i_k}}` of distinct
//! coordinate vectors scaled by `m`-th roots of unity (stored as exponents
//! mod `m`), with `1 <= k <= n`; it has type `k - 1`. Faces are chains under
//! inclusion. Generator `r_k` (`k < n`) swaps coordinates `k` and `k + 1`;
//! `r_n` scales coordinate `n` by a primitive root.

use std::collections::HashMap;
use std::sync::Arc;

use super::{ComplexAction, ComplexError, CosetAction, TypedComplex};
use crate::group::GroupTable;

/// A labeled coordinate set: sorted `(coordinate, exponent)` pairs.
pub type LabeledSet = Vec<(u8, u32)>;

/// Monomial matrix `e_i -> zeta^{exps[i]} e_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub perm: Vec<u8>,
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn identity(n: usize) -> Self {
        Monomial {
            perm: (0..n as u8).collect(),
            exps: vec![0; n],
        }
    }

    /// The matrix of generator `i` of `G(m,1,n)`.
    pub fn generator(n: usize, i: usize) -> Self {
        let mut g = Monomial::identity(n);
        if i + 1 < n {
            g.perm.swap(i, i + 1);
        } else {
            g.exps[n - 1] = 1;
        }
        g
    }

    /// `self * other`.
    pub fn compose(&self, other: &Monomial, m: u32) -> Monomial {
        let n = self.perm.len();
        let mut out = Monomial::identity(n);
        for i in 0..n {
            let j = other.perm[i] as usize;
            out.perm[i] = self.perm[j];
            out.exps[i] = (other.exps[i] + self.exps[j]) % m;
        }
        out
    }

    pub fn apply(&self, set: &LabeledSet, m: u32) -> LabeledSet {
        let mut out: LabeledSet = set
            .iter()
            .map(|&(i, a)| (self.perm[i as usize], (a + self.exps[i as usize]) % m))
            .collect();
        out.sort_unstable();
        out
    }
}

/// `G(m,1,n)` acting on the flag complex, with element ids taken from a
/// group table for the same presentation.
#[derive(Clone, Debug)]
pub struct MonomialAction {
    m: u32,
    n: usize,
    vertices: Vec<LabeledSet>,
    index: HashMap<LabeledSet, u32>,
    table: Option<Arc<GroupTable>>,
}

impl MonomialAction {
    pub fn vertex(&self, v: u32) -> &LabeledSet {
        &self.vertices[v as usize]
    }

    pub fn vertex_id(&self, set: &LabeledSet) -> Option<u32> {
        self.index.get(set).copied()
    }

    /// The matrix of a word in the generators.
    pub fn matrix_of_word(&self, word: &[usize]) -> Monomial {
        word.iter().fold(Monomial::identity(self.n), |acc, &i| {
            acc.compose(&Monomial::generator(self.n, i), self.m)
        })
    }

    fn permutation(&self, g: &Monomial) -> Vec<u32> {
        self.vertices.iter().map(|s| self.index[&g.apply(s, self.m)]).collect()
    }

    /// Attaches the group table whose element ids `vertex_permutation`
    /// interprets.
    pub fn with_table(mut self, table: Arc<GroupTable>) -> Self {
        self.table = Some(table);
        self
    }
}

impl ComplexAction for MonomialAction {
    fn group_order(&self) -> usize {
        let fact: usize = (1..=self.n).product();
        fact * (self.m as usize).pow(self.n as u32)
    }

    fn num_generators(&self) -> usize {
        self.n
    }

    fn generator_permutation(&self, i: usize) -> Vec<u32> {
        self.permutation(&Monomial::generator(self.n, i))
    }

    /// Panics unless a table was attached with [`MonomialAction::with_table`].
    fn vertex_permutation(&self, g: u32) -> Vec<u32> {
        let table = self.table.as_ref().expect("monomial action needs a group table");
        self.permutation(&self.matrix_of_word(&table.word(g)))
    }
}

/// Builds the flag complex of labeled coordinate sets; fails when the
/// number of faces would exceed `simplex_cap`.
pub fn monomial_flag_complex(
    m: u32,
    n: usize,
    simplex_cap: u64,
) -> Result<(TypedComplex, MonomialAction), ComplexError> {
    assert!(m >= 2 && (1..=u8::MAX as usize).contains(&n));
    let chambers: u64 = (1..=n as u64).product::<u64>() * (m as u64).pow(n as u32);
    if chambers > simplex_cap {
        return Err(ComplexError::SimplexCapExceeded {
            needed: chambers,
            cap: simplex_cap,
        });
    }
    let mut vertices: Vec<LabeledSet> = Vec::new();
    for k in 1..=n {
        for mask in 0u64..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let coords: Vec<u8> = (0..n as u8).filter(|&i| mask >> i & 1 == 1).collect();
            for labels in 0..(m as u64).pow(k as u32) {
                let mut rest = labels;
                let set: LabeledSet = coords
                    .iter()
                    .map(|&c| {
                        let a = (rest % m as u64) as u32;
                        rest /= m as u64;
                        (c, a)
                    })
                    .collect();
                vertices.push(set);
            }
        }
    }
    vertices.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let index: HashMap<LabeledSet, u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u32))
        .collect();
    let vertex_types: Vec<u16> = vertices.iter().map(|s| (s.len() - 1) as u16).collect();
    // maximal chains: an ordering of coordinates plus a label for each
    let mut facets = Vec::with_capacity(chambers as usize);
    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut perms = Vec::new();
    heap_permutations(&mut perm, n, &mut perms);
    for p in &perms {
        for labels in 0..(m as u64).pow(n as u32) {
            let mut rest = labels;
            let mut set: LabeledSet = Vec::with_capacity(n);
            let mut chain = Vec::with_capacity(n);
            for &c in p {
                set.push((c, (rest % m as u64) as u32));
                rest /= m as u64;
                let mut sorted = set.clone();
                sorted.sort_unstable();
                chain.push(index[&sorted]);
            }
            facets.push(chain);
        }
    }
    let labels: Vec<String> = (1..=n).map(|k| format!("r{k}")).collect();
    let complex = TypedComplex::new(labels, vertex_types, facets)?;
    if complex.total_faces() > simplex_cap {
        return Err(ComplexError::SimplexCapExceeded {
            needed: complex.total_faces(),
            cap: simplex_cap,
        });
    }
    Ok((
        complex,
        MonomialAction {
            m,
            n,
            vertices,
            index,
            table: None,
        },
    ))
}

fn heap_permutations(a: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(a, k - 1, out);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permutations(a, k - 1, out);
}

/// Outcome of comparing the coset complex of `G(m,1,n)` with the flag
/// model through `gG_{R - {r_k}} -> M(g){e_1, ..., e_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivarianceCheck {
    /// Image of each coset vertex.
    pub map: Vec<u32>,
    pub bijective: bool,
    pub type_preserving: bool,
    pub faces_preserved: bool,
    /// The map commutes with every generator.
    pub equivariant: bool,
}

impl EquivarianceCheck {
    pub fn holds(&self) -> bool {
        self.bijective && self.type_preserving && self.faces_preserved && self.equivariant
    }
}

/// Transports coset vertices to the flag model and checks that the map is
/// an isomorphism of typed complexes commuting with each generator.
pub fn check_equivariance(
    coset: &TypedComplex,
    coset_action: &CosetAction,
    flag: &TypedComplex,
    flag_action: &MonomialAction,
) -> EquivarianceCheck {
    let table = coset_action.table();
    let n = flag_action.n;
    let map: Vec<u32> = (0..coset.num_vertices() as u32)
        .map(|v| {
            let k = coset.vertex_type(v) as usize + 1;
            let g = flag_action.matrix_of_word(&table.word(coset_action.vertex_representative(v)));
            let base: LabeledSet = (0..k as u8).map(|i| (i, 0)).collect();
            flag_action
                .vertex_id(&g.apply(&base, flag_action.m))
                .expect("image is a vertex")
        })
        .collect();
    let mut hit = vec![false; flag.num_vertices()];
    let mut bijective = coset.num_vertices() == flag.num_vertices();
    for &w in &map {
        if hit[w as usize] {
            bijective = false;
        }
        hit[w as usize] = true;
    }
    let type_preserving = (0..coset.num_vertices()).all(|v| coset.vertex_type(v as u32) == flag.vertex_type(map[v]));
    let faces_preserved = coset.f_vector() == flag.f_vector()
        && (0..coset.f_vector().len()).all(|k| {
            coset.faces(k).all(|f| {
                let mut img: Vec<u32> = f.iter().map(|&v| map[v as usize]).collect();
                img.sort_unstable();
                flag.contains(&img)
            })
        });
    let equivariant = (0..n).all(|i| {
        let pc = coset_action.generator_permutation(i);
        let pf = flag_action.generator_permutation(i);
        (0..coset.num_vertices()).all(|v| map[pc[v] as usize] == pf[map[v] as usize])
    });
    EquivarianceCheck {
        map,
        bijective,
        type_preserving,
        faces_preserved,
        equivariant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b2_flag_model_is_octagon() {
        let (c, _) = monomial_flag_complex(2, 2, 1 << 20).unwrap();
        assert_eq!(c.f_vector(), vec![8, 8]);
        assert_eq!(c.degree_histogram(), vec![(2, 8)]);
    }

    #[test]
    fn rank_one_is_points() {
        let (c, _) = monomial_flag_complex(5, 1, 1 << 20).unwrap();
        assert_eq!(c.f_vector(), vec![5]);
    }

    #[test]
    fn generator_matrices_satisfy_relations() {
        let m = 3;
        let n = 3;
        let id = Monomial::identity(n);
        let pow = |g: &Monomial, k: usize| (0..k).fold(id.clone(), |acc, _| acc.compose(g, m));
        let r: Vec<Monomial> = (0..n).map(|i| Monomial::generator(n, i)).collect();
        assert_eq!(pow(&r[0], 2), id);
        assert_eq!(pow(&r[2], 3), id);
        let r23 = r[1].compose(&r[2], m);
        let r32 = r[2].compose(&r[1], m);
        assert_eq!(r23.compose(&r23, m), r32.compose(&r32, m));
        let r12 = r[0].compose(&r[1], m);
        let r21 = r[1].compose(&r[0], m);
        assert_eq!(r12.compose(&r[0], m), r21.compose(&r[1], m));
    }
}
