//! Typed simplicial complexes.
//!
//! A [`TypedComplex`] stores every nonempty face explicitly, grouped by
//! dimension, with vertices sorted inside each face and faces sorted
//! lexicographically. The empty face is always present and not stored.
//! Every vertex carries a type drawn from an ordered list of labels.

mod coset;
pub mod homology;
pub mod iso;
pub mod monomial;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

pub use coset::{milnor_fiber_complex, CosetAction, DEFAULT_SIMPLEX_CAP};
pub use homology::{reduced_homology, Homology, Torsion};
pub use iso::{find_isomorphism, Isomorphism};
pub use monomial::{monomial_flag_complex, MonomialAction};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(u32),
    #[error("type {0} out of range")]
    TypeOutOfRange(u16),
    #[error("face {0:?} repeats a vertex or a type")]
    BadFace(Vec<u32>),
    #[error("simplex {0:?} is not in the complex")]
    NotFound(Vec<u32>),
    #[error("complex would have {needed} faces, cap is {cap}")]
    SimplexCapExceeded { needed: u64, cap: u64 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
    #[error(transparent)]
    Diagram(#[from] crate::diagram::DiagramError),
}

/// Permutation action of a group on the vertices of a complex.
pub trait ComplexAction {
    fn group_order(&self) -> usize;
    /// Number of generators of the acting group.
    fn num_generators(&self) -> usize;
    /// Image of every vertex under the generator `i`.
    fn generator_permutation(&self, i: usize) -> Vec<u32>;
    /// Image of every vertex under the element `g`.
    fn vertex_permutation(&self, g: u32) -> Vec<u32>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedComplex {
    type_labels: Vec<String>,
    vertex_types: Vec<u16>,
    /// `levels[k]` lists the k-faces back to back, `k + 1` ids each.
    levels: Vec<Vec<u32>>,
}

fn sort_dedup_faces(flat: Vec<u32>, stride: usize) -> Vec<u32> {
    let n = flat.len() / stride;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_unstable_by(|&a, &b| flat[a * stride..(a + 1) * stride].cmp(&flat[b * stride..(b + 1) * stride]));
    let mut out: Vec<u32> = Vec::with_capacity(flat.len());
    for i in idx {
        let face = &flat[i * stride..(i + 1) * stride];
        if out.len() >= stride && &out[out.len() - stride..] == face {
            continue;
        }
        out.extend_from_slice(face);
    }
    out
}

impl TypedComplex {
    /// The complex whose only face is the empty face.
    pub fn empty_face_only(type_labels: Vec<String>) -> Self {
        TypedComplex {
            type_labels,
            vertex_types: Vec::new(),
            levels: Vec::new(),
        }
    }

    /// Closes `faces` under taking subsets. Every id below
    /// `vertex_types.len()` becomes a vertex.
    pub fn new(
        type_labels: Vec<String>,
        vertex_types: Vec<u16>,
        faces: impl IntoIterator<Item = Vec<u32>>,
    ) -> Result<Self, ComplexError> {
        if let Some(&t) = vertex_types.iter().find(|&&t| t as usize >= type_labels.len()) {
            return Err(ComplexError::TypeOutOfRange(t));
        }
        let nv = vertex_types.len() as u32;
        let mut generators: Vec<Vec<u32>> = (0..nv).map(|v| vec![v]).collect();
        for mut f in faces {
            f.sort_unstable();
            if let Some(&v) = f.iter().find(|&&v| v >= nv) {
                return Err(ComplexError::VertexOutOfRange(v));
            }
            let types: BTreeSet<u16> = f.iter().map(|&v| vertex_types[v as usize]).collect();
            if types.len() != f.len() {
                return Err(ComplexError::BadFace(f));
            }
            if !f.is_empty() {
                generators.push(f);
            }
        }
        Ok(Self::closure(type_labels, vertex_types, generators))
    }

    /// Closure of sorted, valid faces; no validation.
    fn closure(type_labels: Vec<String>, vertex_types: Vec<u16>, faces: Vec<Vec<u32>>) -> Self {
        let top = faces.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut levels: Vec<Vec<u32>> = vec![Vec::new(); top];
        for f in faces {
            levels[f.len() - 1].extend_from_slice(&f);
        }
        for k in (0..top).rev() {
            let stride = k + 1;
            let level = std::mem::take(&mut levels[k]);
            let level = sort_dedup_faces(level, stride);
            if k > 0 {
                let mut below = std::mem::take(&mut levels[k - 1]);
                for face in level.chunks_exact(stride) {
                    for skip in 0..stride {
                        below.extend(face.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    }
                }
                levels[k - 1] = below;
            }
            levels[k] = level;
        }
        TypedComplex {
            type_labels,
            vertex_types,
            levels,
        }
    }

    /// Assembles a complex from already closed, sorted levels.
    pub(crate) fn from_levels(type_labels: Vec<String>, vertex_types: Vec<u16>, mut levels: Vec<Vec<u32>>) -> Self {
        while levels.last().is_some_and(|l| l.is_empty()) {
            levels.pop();
        }
        TypedComplex {
            type_labels,
            vertex_types,
            levels,
        }
    }

    pub fn type_labels(&self) -> &[String] {
        &self.type_labels
    }

    pub fn vertex_types(&self) -> &[u16] {
        &self.vertex_types
    }

    pub fn vertex_type(&self, v: u32) -> u16 {
        self.vertex_types[v as usize]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_types.len()
    }

    /// Dimension; `-1` when only the empty face is present.
    pub fn dim(&self) -> isize {
        self.levels.len() as isize - 1
    }

    /// `(f_0, ..., f_dim)`; the empty face is not counted.
    pub fn f_vector(&self) -> Vec<u64> {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, l)| (l.len() / (k + 1)) as u64)
            .collect()
    }

    /// Number of k-faces, with `f(-1) = 1`.
    pub fn count(&self, k: isize) -> u64 {
        match k {
            -1 => 1,
            k if k < -1 || k > self.dim() => 0,
            k => (self.levels[k as usize].len() / (k as usize + 1)) as u64,
        }
    }

    pub fn total_faces(&self) -> u64 {
        self.f_vector().iter().sum::<u64>() + 1
    }

    /// The k-faces in lexicographic order.
    pub fn faces(&self, k: usize) -> std::slice::ChunksExact<'_, u32> {
        match self.levels.get(k) {
            Some(l) => l.chunks_exact(k + 1),
            None => [].chunks_exact(k + 1),
        }
    }

    pub fn face(&self, k: usize, i: usize) -> &[u32] {
        &self.levels[k][i * (k + 1)..(i + 1) * (k + 1)]
    }

    /// Position of the sorted face `f` among faces of its dimension.
    pub fn index_of(&self, f: &[u32]) -> Option<usize> {
        if f.is_empty() {
            return Some(0);
        }
        let k = f.len() - 1;
        let level = self.levels.get(k)?;
        let n = level.len() / (k + 1);
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match level[mid * (k + 1)..(mid + 1) * (k + 1)].cmp(f) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, f: &[u32]) -> bool {
        self.index_of(f).is_some()
    }

    /// Sorted type set of a face.
    pub fn face_type(&self, f: &[u32]) -> Vec<u16> {
        let mut t: Vec<u16> = f.iter().map(|&v| self.vertex_types[v as usize]).collect();
        t.sort_unstable();
        t
    }

    /// Types that occur on some vertex.
    pub fn used_types(&self) -> Vec<u16> {
        let set: BTreeSet<u16> = self.vertex_types.iter().copied().collect();
        set.into_iter().collect()
    }

    /// Maximal faces, by dimension then lexicographically.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for k in 0..self.levels.len() {
            let mut covered = vec![false; self.levels[k].len() / (k + 1)];
            if k + 1 < self.levels.len() {
                for face in self.faces(k + 1) {
                    for skip in 0..face.len() {
                        let sub: Vec<u32> = face
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        if let Some(i) = self.index_of(&sub) {
                            covered[i] = true;
                        }
                    }
                }
            }
            for (i, face) in self.faces(k).enumerate() {
                if !covered[i] {
                    out.push(face.to_vec());
                }
            }
        }
        out
    }

    /// Faces of top dimension.
    pub fn chambers(&self) -> Vec<Vec<u32>> {
        match self.levels.last() {
            Some(_) => self.faces(self.levels.len() - 1).map(|f| f.to_vec()).collect(),
            None => Vec::new(),
        }
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets().iter().all(|f| f.len() as isize - 1 == d)
    }

    /// Whether the top-dimensional faces are connected through shared
    /// codimension-one faces.
    pub fn chambers_connected(&self) -> bool {
        let d = self.dim();
        if d <= 0 {
            return self.count(d.max(0)) <= 1 || d < 0;
        }
        let d = d as usize;
        let n = self.count(d as isize) as usize;
        let mut by_ridge: Vec<Vec<usize>> = vec![Vec::new(); self.count(d as isize - 1) as usize];
        for (c, face) in self.faces(d).enumerate() {
            for skip in 0..=d {
                let sub: Vec<u32> = face
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                by_ridge[self.index_of(&sub).expect("closed")].push(c);
            }
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for list in &by_ridge {
            for w in list.windows(2) {
                adj[w[0]].push(w[1]);
                adj[w[1]].push(w[0]);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(c) = stack.pop() {
            for &e in &adj[c] {
                if !seen[e] {
                    seen[e] = true;
                    reached += 1;
                    stack.push(e);
                }
            }
        }
        reached == n
    }

    /// Reduced Euler characteristic `sum_k (-1)^k f_k - 1`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum::<i64>()
            - 1
    }

    /// 1-skeleton adjacency lists, sorted.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for e in self.faces(1) {
            adj[e[0] as usize].push(e[1]);
            adj[e[1] as usize].push(e[0]);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Histogram of 1-skeleton vertex degrees as `(degree, count)` pairs.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for a in self.adjacency() {
            *hist.entry(a.len()).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }

    /// Full subcomplex on the vertices with `keep[v]`, together with the
    /// original id of each new vertex.
    pub fn induced(&self, keep: &[bool]) -> (TypedComplex, Vec<u32>) {
        let old_ids: Vec<u32> = (0..self.num_vertices() as u32).filter(|&v| keep[v as usize]).collect();
        let mut new_id = vec![u32::MAX; self.num_vertices()];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let mut levels: Vec<Vec<u32>> = Vec::new();
        for k in 0..self.levels.len() {
            let level: Vec<u32> = self
                .faces(k)
                .filter(|f| f.iter().all(|&v| keep[v as usize]))
                .flat_map(|f| f.iter().map(|&v| new_id[v as usize]))
                .collect();
            if level.is_empty() {
                break;
            }
            levels.push(level);
        }
        let vertex_types = old_ids.iter().map(|&v| self.vertex_types[v as usize]).collect();
        (
            TypedComplex {
                type_labels: self.type_labels.clone(),
                vertex_types,
                levels,
            },
            old_ids,
        )
    }

    /// Subcomplex generated by `faces`, on the vertices it uses, together
    /// with the original id of each new vertex.
    pub fn generated_with_map(&self, faces: impl IntoIterator<Item = Vec<u32>>) -> (TypedComplex, Vec<u32>) {
        let faces: Vec<Vec<u32>> = faces.into_iter().filter(|f| !f.is_empty()).collect();
        let used: BTreeSet<u32> = faces.iter().flatten().copied().collect();
        let old_ids: Vec<u32> = used.into_iter().collect();
        let mut new_id = vec![u32::MAX; self.num_vertices()];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v as usize] = i as u32;
        }
        let vertex_types = old_ids.iter().map(|&v| self.vertex_types[v as usize]).collect();
        let renamed = faces
            .into_iter()
            .map(|f| {
                let mut g: Vec<u32> = f.iter().map(|&v| new_id[v as usize]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        (Self::closure(self.type_labels.clone(), vertex_types, renamed), old_ids)
    }

    /// Subcomplex generated by `faces` (all their subsets).
    pub fn generated(&self, faces: impl IntoIterator<Item = Vec<u32>>) -> TypedComplex {
        self.generated_with_map(faces).0
    }

    /// Subcomplex of faces satisfying `keep`, closed under subsets.
    pub fn filtered(&self, mut keep: impl FnMut(&[u32]) -> bool) -> (TypedComplex, Vec<u32>) {
        let mut chosen = Vec::new();
        for k in 0..self.levels.len() {
            for f in self.faces(k) {
                if keep(f) {
                    chosen.push(f.to_vec());
                }
            }
        }
        self.generated_with_map(chosen)
    }

    /// `{tau : tau and sigma disjoint, tau + sigma a face}`.
    pub fn link(&self, sigma: &[u32]) -> Result<TypedComplex, ComplexError> {
        let mut sigma = sigma.to_vec();
        sigma.sort_unstable();
        if !self.contains(&sigma) {
            return Err(ComplexError::NotFound(sigma));
        }
        if sigma.is_empty() {
            return Ok(self.clone());
        }
        let mut rest = Vec::new();
        for k in sigma.len()..self.levels.len() {
            for f in self.faces(k) {
                if sigma.iter().all(|v| f.binary_search(v).is_ok()) {
                    rest.push(
                        f.iter()
                            .copied()
                            .filter(|v| sigma.binary_search(v).is_err())
                            .collect::<Vec<u32>>(),
                    );
                }
            }
        }
        if rest.is_empty() {
            return Ok(TypedComplex::empty_face_only(self.type_labels.clone()));
        }
        Ok(self.generated(rest))
    }

    /// The join; types are tagged `0:` and `1:` by factor.
    pub fn join(&self, other: &TypedComplex) -> TypedComplex {
        let mut labels: Vec<String> = self.type_labels.iter().map(|l| format!("0:{l}")).collect();
        labels.extend(other.type_labels.iter().map(|l| format!("1:{l}")));
        let shift_t = self.type_labels.len() as u16;
        let mut vertex_types = self.vertex_types.clone();
        vertex_types.extend(other.vertex_types.iter().map(|&t| t + shift_t));
        let shift_v = self.num_vertices() as u32;
        let mut left: Vec<Vec<u32>> = vec![Vec::new()];
        for k in 0..self.levels.len() {
            left.extend(self.faces(k).map(|f| f.to_vec()));
        }
        let mut right: Vec<Vec<u32>> = vec![Vec::new()];
        for k in 0..other.levels.len() {
            right.extend(other.faces(k).map(|f| f.iter().map(|&v| v + shift_v).collect()));
        }
        let top = self.levels.len() + other.levels.len();
        let mut levels: Vec<Vec<u32>> = vec![Vec::new(); top];
        for a in &left {
            for b in &right {
                let size = a.len() + b.len();
                if size == 0 {
                    continue;
                }
                levels[size - 1].extend_from_slice(a);
                levels[size - 1].extend_from_slice(b);
            }
        }
        let levels = levels
            .into_iter()
            .enumerate()
            .map(|(k, l)| sort_dedup_faces(l, k + 1))
            .collect();
        TypedComplex::from_levels(labels, vertex_types, levels)
    }

    /// Facet-list export: header, one `v:` line per vertex, one `f:` line
    /// per facet.
    pub fn to_export_string(&self) -> String {
        let facets = self.facets();
        let mut s = format!("MFC-COMPLEX v1 {} {}\n", self.num_vertices(), facets.len());
        for (v, &t) in self.vertex_types.iter().enumerate() {
            let _ = writeln!(s, "v: {} {}", v, self.type_labels[t as usize]);
        }
        for f in facets {
            let ids: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "f: {}", ids.join(" "));
        }
        s
    }

    /// Parses [`Self::to_export_string`] output. Type labels are numbered
    /// in order of first appearance.
    pub fn from_export_str(text: &str) -> Result<TypedComplex, ComplexError> {
        let err = |line: usize, msg: &str| ComplexError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "MFC-COMPLEX" || parts[1] != "v1" {
            return Err(err(1, "bad header"));
        }
        let nv: usize = parts[2].parse().map_err(|_| err(1, "bad vertex count"))?;
        let nf: usize = parts[3].parse().map_err(|_| err(1, "bad facet count"))?;
        let mut labels: Vec<String> = Vec::new();
        let mut vertex_types = vec![None; nv];
        let mut facets = Vec::new();
        for (i, line) in lines {
            let line_no = i + 1;
            if let Some(rest) = line.strip_prefix("v:") {
                let mut it = rest.split_whitespace();
                let id: usize = it
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(line_no, "bad vertex id"))?;
                let label = it.next().ok_or_else(|| err(line_no, "missing type label"))?;
                if id >= nv || vertex_types[id].is_some() {
                    return Err(err(line_no, "vertex id out of range or repeated"));
                }
                let t = match labels.iter().position(|l| l == label) {
                    Some(t) => t,
                    None => {
                        labels.push(label.to_string());
                        labels.len() - 1
                    }
                };
                vertex_types[id] = Some(t as u16);
            } else if let Some(rest) = line.strip_prefix("f:") {
                let ids: Result<Vec<u32>, _> = rest.split_whitespace().map(|t| t.parse::<u32>()).collect();
                facets.push(ids.map_err(|_| err(line_no, "bad facet"))?);
            } else {
                return Err(err(line_no, "expected `v:` or `f:`"));
            }
        }
        if facets.len() != nf {
            return Err(err(0, "facet count does not match header"));
        }
        let vertex_types: Option<Vec<u16>> = vertex_types.into_iter().collect();
        let vertex_types = vertex_types.ok_or_else(|| err(0, "missing vertex line"))?;
        TypedComplex::new(labels, vertex_types, facets)
    }
}

/// Checks that `perm` maps faces of `c` onto faces of the same type.
pub fn preserves_faces_and_types(c: &TypedComplex, perm: &[u32]) -> bool {
    for v in 0..c.num_vertices() {
        if c.vertex_type(v as u32) != c.vertex_type(perm[v]) {
            return false;
        }
    }
    for k in 0..c.levels.len() {
        for f in c.faces(k) {
            let mut img: Vec<u32> = f.iter().map(|&v| perm[v as usize]).collect();
            img.sort_unstable();
            if !c.contains(&img) {
                return false;
            }
        }
    }
    true
}
