//! Simplicial isomorphism search.
//!
//! Vertex colors are refined jointly on both complexes (face counts, then
//! neighbor color multisets) so that equal colors mean equal invariants.
//! A depth-first search then maps vertices of the first complex, always
//! taking next the vertex with the most mapped neighbors. Candidates are
//! drawn from the neighbors of the image of a mapped neighbor, and the
//! search checks every face as soon as all its vertices are
//! mapped.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::TypedComplex;

const UNSET: u32 = u32::MAX;

/// A vertex bijection `a -> b`, with the induced type bijection when types
/// were respected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Isomorphism {
    pub vertex_map: Vec<u32>,
    /// `(type in a, type in b)` pairs for the types in use.
    pub type_map: Option<Vec<(u16, u16)>>,
}

impl Isomorphism {
    /// Re-checks the certificate from scratch.
    pub fn verify(&self, a: &TypedComplex, b: &TypedComplex) -> bool {
        let n = a.num_vertices();
        if b.num_vertices() != n || self.vertex_map.len() != n || a.f_vector() != b.f_vector() {
            return false;
        }
        let mut hit = vec![false; n];
        for &w in &self.vertex_map {
            if w as usize >= n || hit[w as usize] {
                return false;
            }
            hit[w as usize] = true;
        }
        if let Some(tm) = &self.type_map {
            let map: BTreeMap<u16, u16> = tm.iter().copied().collect();
            if map.len() != tm.len() {
                return false;
            }
            let mut images: Vec<u16> = map.values().copied().collect();
            images.sort_unstable();
            images.dedup();
            if images.len() != map.len() {
                return false;
            }
            for v in 0..n {
                if map.get(&a.vertex_type(v as u32)) != Some(&b.vertex_type(self.vertex_map[v])) {
                    return false;
                }
            }
        }
        for k in 0..=a.dim().max(0) as usize {
            for f in a.faces(k) {
                let mut img: Vec<u32> = f.iter().map(|&v| self.vertex_map[v as usize]).collect();
                img.sort_unstable();
                if !b.contains(&img) {
                    return false;
                }
            }
        }
        true
    }
}

struct Side<'a> {
    c: &'a TypedComplex,
    adj: Vec<Vec<u32>>,
    color: Vec<u32>,
}

fn face_profiles(c: &TypedComplex) -> Vec<Vec<u64>> {
    let dims = c.f_vector().len();
    let mut prof = vec![vec![0u64; dims]; c.num_vertices()];
    for k in 0..dims {
        for f in c.faces(k) {
            for &v in f {
                prof[v as usize][k] += 1;
            }
        }
    }
    prof
}

fn type_sizes(c: &TypedComplex) -> BTreeMap<u16, u64> {
    let mut m = BTreeMap::new();
    for &t in c.vertex_types() {
        *m.entry(t).or_insert(0) += 1;
    }
    m
}

fn histogram(colors: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Assigns shared ids to the keys of both sides in sorted key order.
fn relabel<K: Ord + Clone>(ka: &[K], kb: &[K]) -> (Vec<u32>, Vec<u32>) {
    let mut all: Vec<K> = ka.iter().chain(kb).cloned().collect();
    all.sort();
    all.dedup();
    let id = |k: &K| all.binary_search(k).unwrap() as u32;
    (ka.iter().map(id).collect(), kb.iter().map(id).collect())
}

/// Refines colors on both sides until the partition is stable; `None` when
/// the color histograms differ.
fn refine(a: &mut Side, b: &mut Side) -> Option<()> {
    let mut classes = 0;
    loop {
        if histogram(&a.color) != histogram(&b.color) {
            return None;
        }
        let count = histogram(&a.color).len();
        if count == classes {
            return Some(());
        }
        classes = count;
        let sig = |s: &Side| -> Vec<(u32, Vec<u32>)> {
            (0..s.color.len())
                .map(|v| {
                    let mut nb: Vec<u32> = s.adj[v].iter().map(|&u| s.color[u as usize]).collect();
                    nb.sort_unstable();
                    (s.color[v], nb)
                })
                .collect()
        };
        let (ca, cb) = relabel(&sig(a), &sig(b));
        a.color = ca;
        b.color = cb;
    }
}

/// Finds an isomorphism `a -> b`. With `respect_types`, the map must also
/// induce a bijection between the used types of `a` and of `b`.
pub fn find_isomorphism(a: &TypedComplex, b: &TypedComplex, respect_types: bool) -> Option<Isomorphism> {
    let n = a.num_vertices();
    if b.num_vertices() != n || a.f_vector() != b.f_vector() {
        return None;
    }
    if n == 0 {
        return Some(Isomorphism {
            vertex_map: Vec::new(),
            type_map: respect_types.then(Vec::new),
        });
    }
    let (sa, sb) = (type_sizes(a), type_sizes(b));
    if respect_types {
        let mut x: Vec<u64> = sa.values().copied().collect();
        let mut y: Vec<u64> = sb.values().copied().collect();
        x.sort_unstable();
        y.sort_unstable();
        if x != y {
            return None;
        }
    }
    let key = |c: &TypedComplex, sizes: &BTreeMap<u16, u64>| -> Vec<(Vec<u64>, u64)> {
        face_profiles(c)
            .into_iter()
            .enumerate()
            .map(|(v, p)| {
                let t = if respect_types {
                    sizes[&c.vertex_type(v as u32)]
                } else {
                    0
                };
                (p, t)
            })
            .collect()
    };
    let (ca, cb) = relabel(&key(a, &sa), &key(b, &sb));
    let mut side_a = Side {
        c: a,
        adj: a.adjacency(),
        color: ca,
    };
    let mut side_b = Side {
        c: b,
        adj: b.adjacency(),
        color: cb,
    };
    refine(&mut side_a, &mut side_b)?;
    search(&side_a, &side_b, respect_types)
}

fn search(a: &Side, b: &Side, respect_types: bool) -> Option<Isomorphism> {
    let n = a.c.num_vertices();
    let class_size = histogram(&a.color);
    // greedy order: next is the vertex with the most ordered neighbors, then
    // the rarest color; its anchor is the ordered neighbor of least degree
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut anchor: Vec<u32> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let rank = |v: u32, links: usize| (Reverse(links), class_size[&a.color[v as usize]], v);
    let mut queue: BTreeSet<_> = (0..n as u32).map(|v| rank(v, 0)).collect();
    while let Some((_, _, v)) = queue.pop_first() {
        placed[v as usize] = true;
        let best = a.adj[v as usize]
            .iter()
            .filter(|&&u| placed[u as usize] && u != v)
            .min_by_key(|&&u| (a.adj[u as usize].len(), u));
        order.push(v);
        anchor.push(best.copied().unwrap_or(UNSET));
        for &u in &a.adj[v as usize] {
            if !placed[u as usize] {
                queue.remove(&rank(u, links[u as usize]));
                links[u as usize] += 1;
                queue.insert(rank(u, links[u as usize]));
            }
        }
    }
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    // faces of dimension >= 2, filed under their last vertex in search order
    let mut closing: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    for k in 2..=a.c.dim().max(0) as usize {
        for f in a.c.faces(k) {
            let last = *f.iter().max_by_key(|&&v| pos[v as usize]).unwrap();
            closing[pos[last as usize]].push(f.to_vec());
        }
    }
    let mut by_color_b: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for w in 0..n as u32 {
        by_color_b.entry(b.color[w as usize]).or_default().push(w);
    }
    let ntypes_a = a.c.type_labels().len();
    let ntypes_b = b.c.type_labels().len();
    let mut map = vec![UNSET; n];
    let mut used = vec![false; n];
    let mut tmap = vec![UNSET as u16; ntypes_a];
    let mut tused = vec![0u32; ntypes_b];
    // per depth: candidates and the index of the next one to try
    let mut cands: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut next: Vec<usize> = Vec::with_capacity(n);
    let mut type_set: Vec<bool> = Vec::with_capacity(n);
    let candidates = |depth: usize, map: &[u32], used: &[bool]| -> Vec<u32> {
        let v = order[depth] as usize;
        let pool: Vec<u32> = if anchor[depth] == UNSET {
            by_color_b[&a.color[v]].clone()
        } else {
            b.adj[map[anchor[depth] as usize] as usize].clone()
        };
        pool.into_iter()
            .filter(|&w| !used[w as usize] && b.color[w as usize] == a.color[v])
            .collect()
    };
    cands.push(candidates(0, &map, &used));
    next.push(0);
    type_set.push(false);
    let mut img = Vec::new();
    loop {
        let depth = cands.len() - 1;
        let v = order[depth] as usize;
        // undo the previous choice at this depth
        if map[v] != UNSET {
            let w = map[v] as usize;
            used[w] = false;
            map[v] = UNSET;
            if type_set[depth] {
                let ta = a.c.vertex_type(v as u32) as usize;
                tused[tmap[ta] as usize] -= 1;
                tmap[ta] = UNSET as u16;
                type_set[depth] = false;
            } else if respect_types {
                let ta = a.c.vertex_type(v as u32) as usize;
                tused[tmap[ta] as usize] -= 1;
            }
        }
        let mut chosen = None;
        while next[depth] < cands[depth].len() {
            let w = cands[depth][next[depth]];
            next[depth] += 1;
            if used[w as usize] {
                continue;
            }
            if respect_types {
                let ta = a.c.vertex_type(v as u32) as usize;
                let tb = b.c.vertex_type(w);
                if tmap[ta] == UNSET as u16 {
                    if tused[tb as usize] > 0 {
                        continue;
                    }
                } else if tmap[ta] != tb {
                    continue;
                }
            }
            // edges to mapped neighbors must map to edges, and no extra ones
            let mut mapped_a = 0;
            let mut ok = true;
            for &u in &a.adj[v] {
                let fu = map[u as usize];
                if fu != UNSET {
                    mapped_a += 1;
                    if b.adj[w as usize].binary_search(&fu).is_err() {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let mapped_b = b.adj[w as usize].iter().filter(|&&x| used[x as usize]).count();
            if mapped_a != mapped_b {
                continue;
            }
            map[v] = w;
            let faces_ok = closing[depth].iter().all(|f| {
                img.clear();
                img.extend(f.iter().map(|&x| map[x as usize]));
                img.sort_unstable();
                b.c.contains(&img)
            });
            map[v] = UNSET;
            if !faces_ok {
                continue;
            }
            chosen = Some(w);
            break;
        }
        match chosen {
            Some(w) => {
                map[v] = w;
                used[w as usize] = true;
                if respect_types {
                    let ta = a.c.vertex_type(v as u32) as usize;
                    let tb = b.c.vertex_type(w);
                    if tmap[ta] == UNSET as u16 {
                        tmap[ta] = tb;
                        type_set[depth] = true;
                    }
                    tused[tb as usize] += 1;
                }
                if depth + 1 == n {
                    break;
                }
                cands.push(candidates(depth + 1, &map, &used));
                next.push(0);
                type_set.push(false);
            }
            None => {
                cands.pop();
                next.pop();
                type_set.pop();
                if cands.is_empty() {
                    return None;
                }
            }
        }
    }
    let type_map = respect_types.then(|| {
        tmap.iter()
            .enumerate()
            .filter(|&(_, &t)| t != UNSET as u16)
            .map(|(ta, &tb)| (ta as u16, tb))
            .collect()
    });
    let iso = Isomorphism {
        vertex_map: map,
        type_map,
    };
    debug_assert!(iso.verify(a.c, b.c));
    Some(iso)
}
