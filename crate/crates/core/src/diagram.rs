//! Admissible diagrams.
//!
//! A [`Diagram`] encodes a presentation with generators `r_i` of order `p_i`
//! and braid relations of length `m_ij`. Connected admissible diagrams are
//! exactly the rows of the classification of finite irreducible Coxeter and
//! Shephard groups; [`classify_component`] matches a diagram against those
//! rows and [`Family`] carries the row together with its basic degrees.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("syntax error in {text:?} at offset {pos}: {msg}")]
    Syntax { text: String, pos: usize, msg: String },
    #[error("vertex label {0} is below the minimum 2")]
    VertexLabel(u32),
    #[error("edge label {0} is below the minimum 2")]
    EdgeLabel(u32),
    #[error("edge {0}-{1} is a loop or refers to a missing vertex")]
    BadEdge(usize, usize),
    #[error("edge {i}-{j} has odd braid length {m} but vertex orders {pi} and {pj} differ")]
    OddBraidMismatch {
        i: usize,
        j: usize,
        m: u32,
        pi: u32,
        pj: u32,
    },
    #[error("unknown diagram name {0:?}")]
    UnknownName(String),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
}

/// A labeled graph: vertex `i` has order `p_i >= 2`, and an edge `{i, j}`
/// carries the braid length `m_ij >= 3`. Absent pairs commute (`m_ij = 2`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    orders: Vec<u32>,
    edges: BTreeMap<(usize, usize), u32>,
}

impl Diagram {
    pub fn new(orders: Vec<u32>, edges: impl IntoIterator<Item = (usize, usize, u32)>) -> Result<Self, DiagramError> {
        if let Some(&p) = orders.iter().find(|&&p| p < 2) {
            return Err(DiagramError::VertexLabel(p));
        }
        let n = orders.len();
        let mut map = BTreeMap::new();
        for (i, j, m) in edges {
            if i == j || i >= n || j >= n {
                return Err(DiagramError::BadEdge(i, j));
            }
            if m < 2 {
                return Err(DiagramError::EdgeLabel(m));
            }
            if m == 2 {
                continue;
            }
            if m % 2 == 1 && orders[i] != orders[j] {
                return Err(DiagramError::OddBraidMismatch {
                    i,
                    j,
                    m,
                    pi: orders[i],
                    pj: orders[j],
                });
            }
            map.insert((i.min(j), i.max(j)), m);
        }
        Ok(Diagram { orders, edges: map })
    }

    /// The diagram with no vertices; its group is trivial.
    pub fn empty() -> Self {
        Diagram::default()
    }

    /// Linear diagram `p_1[q_1]p_2...p_n`.
    pub fn linear(orders: &[u32], labels: &[u32]) -> Result<Self, DiagramError> {
        assert_eq!(labels.len() + 1, orders.len().max(1));
        Diagram::new(orders.to_vec(), labels.iter().enumerate().map(|(i, &q)| (i, i + 1, q)))
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self, i: usize) -> u32 {
        self.orders[i]
    }

    /// Braid length between `i` and `j`; 2 when no edge is stored.
    pub fn braid(&self, i: usize, j: usize) -> u32 {
        self.edges.get(&(i.min(j), i.max(j))).copied().unwrap_or(2)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(i, j), &m)| (i, j, m))
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn is_coxeter(&self) -> bool {
        self.orders.iter().all(|&p| p == 2)
    }

    /// Induced subdiagram on `vertices`, re-indexed in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Diagram {
        let orders = vertices.iter().map(|&v| self.orders[v]).collect();
        let mut edges = BTreeMap::new();
        for (a, &va) in vertices.iter().enumerate() {
            for (b, &vb) in vertices.iter().enumerate().skip(a + 1) {
                let m = self.braid(va, vb);
                if m > 2 {
                    edges.insert((a, b), m);
                }
            }
        }
        Diagram { orders, edges }
    }

    /// Disjoint union; the vertices of `other` follow those of `self`.
    pub fn union(&self, other: &Diagram) -> Diagram {
        let shift = self.rank();
        let mut out = self.clone();
        out.orders.extend_from_slice(&other.orders);
        for (&(i, j), &m) in &other.edges {
            out.edges.insert((i + shift, j + shift), m);
        }
        out
    }

    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub fn component_vertices(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut k = 0;
            while k < comp.len() {
                for w in self.neighbors(comp[k]) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.component_vertices().len() == 1
    }

    /// Vertex `i` becomes vertex `n - 1 - i`.
    pub fn reversed(&self) -> Diagram {
        let n = self.rank();
        let orders = self.orders.iter().rev().copied().collect();
        let edges = self
            .edges
            .iter()
            .map(|(&(i, j), &m)| ((n - 1 - j, n - 1 - i), m))
            .collect();
        Diagram { orders, edges }
    }

    /// For a connected path, the vertices in path order starting from the
    /// endpoint with the smaller index.
    pub fn linear_order(&self) -> Option<Vec<usize>> {
        let n = self.rank();
        if n == 0 || self.edges.len() != n - 1 || !self.is_connected() {
            return None;
        }
        let degree: Vec<usize> = (0..n).map(|v| self.neighbors(v).len()).collect();
        if degree.iter().any(|&d| d > 2) {
            return None;
        }
        let start = (0..n).find(|&v| degree[v] <= 1)?;
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while path.len() < n {
            let next = self.neighbors(cur).into_iter().find(|&w| w != prev)?;
            prev = cur;
            cur = next;
            path.push(cur);
        }
        Some(path)
    }

    /// Symbol text. Linear components are written `p[q]p...` with every label
    /// explicit; branched components use their classification name.
    pub fn to_symbol(&self) -> String {
        if self.is_empty() {
            return String::new();
        }
        self.component_vertices()
            .iter()
            .map(|comp| {
                let sub = self.induced(comp);
                if let Some(path) = sub.linear_order() {
                    let mut s = sub.orders[path[0]].to_string();
                    for w in path.windows(2) {
                        s.push_str(&format!("[{}]{}", sub.braid(w[0], w[1]), sub.orders[w[1]]));
                    }
                    s
                } else {
                    match classify_component(&sub) {
                        Ok(id) => id.family.name(),
                        Err(_) => format!("<{:?}>", sub),
                    }
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// The connected components as diagrams (see [`connected_components`]).
    pub fn components(&self) -> Vec<Diagram> {
        connected_components(self)
    }

    /// Families of the components, in component order.
    pub fn families(&self) -> Result<Vec<Family>, DiagramError> {
        self.components()
            .iter()
            .map(|c| classify_component(c).map(|id| id.family))
            .collect()
    }

    pub fn is_admissible(&self) -> bool {
        self.families().is_ok()
    }

    /// Product of the basic degrees, i.e. the group order.
    pub fn group_order(&self) -> Result<u64, DiagramError> {
        Ok(basic_degrees(self)?.iter().product())
    }

    /// Canonical name: component names sorted by rank and family, joined by
    /// `" + "`. Two admissible diagrams have the same canonical name exactly
    /// when they are isomorphic.
    pub fn canonical_name(&self) -> Result<String, DiagramError> {
        let fams = canonical_families(self)?;
        if fams.is_empty() {
            return Ok("1".to_string());
        }
        Ok(fams.iter().map(|f| f.name()).collect::<Vec<_>>().join(" + "))
    }

    /// Compact key without spaces, suitable for file headers.
    pub fn canonical_key(&self) -> Result<String, DiagramError> {
        Ok(self.canonical_name()?.replace(' ', ""))
    }

    /// Lexicographically minimal encoding over all vertex orderings of each
    /// component, components sorted. Brute force; components of rank above
    /// eight are rejected.
    pub fn canonical_encoding(&self) -> Option<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        for comp in self.components() {
            out.push(min_encoding(&comp)?);
        }
        out.sort();
        Some(out)
    }

    /// Isomorphism up to vertex relabeling.
    pub fn isomorphic_to(&self, other: &Diagram) -> bool {
        match (canonical_families(self), canonical_families(other)) {
            (Ok(a), Ok(b)) => a == b,
            _ => {
                self.rank() == other.rank()
                    && self.canonical_encoding().is_some()
                    && self.canonical_encoding() == other.canonical_encoding()
            }
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_symbol())
    }
}

fn encode(d: &Diagram, perm: &[usize]) -> Vec<u32> {
    let mut code: Vec<u32> = perm.iter().map(|&v| d.orders[v]).collect();
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            code.push(d.braid(perm[a], perm[b]));
        }
    }
    code
}

fn min_encoding(d: &Diagram) -> Option<Vec<u32>> {
    let n = d.rank();
    if n > 8 {
        return None;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = encode(d, &perm);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let code = encode(d, &perm);
            if code < best {
                best = code;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Some(best)
}

fn canonical_families(d: &Diagram) -> Result<Vec<Family>, DiagramError> {
    let mut fams = d.families()?;
    fams.sort_by_key(|f| (f.rank(), *f));
    Ok(fams)
}

/// The exceptional rank-two Shephard groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shephard2 {
    G4,
    G5,
    G6,
    G8,
    G9,
    G10,
    G14,
    G16,
    G17,
    G18,
    G20,
    G21,
}

impl Shephard2 {
    pub const ALL: [Shephard2; 12] = [
        Shephard2::G4,
        Shephard2::G5,
        Shephard2::G6,
        Shephard2::G8,
        Shephard2::G9,
        Shephard2::G10,
        Shephard2::G14,
        Shephard2::G16,
        Shephard2::G17,
        Shephard2::G18,
        Shephard2::G20,
        Shephard2::G21,
    ];

    /// (Shephard–Todd number, p1, q, p2, degrees).
    fn row(self) -> (u32, u32, u32, u32, [u64; 2]) {
        match self {
            Shephard2::G4 => (4, 3, 3, 3, [4, 6]),
            Shephard2::G5 => (5, 3, 4, 3, [6, 12]),
            Shephard2::G6 => (6, 3, 6, 2, [4, 12]),
            Shephard2::G8 => (8, 4, 3, 4, [8, 12]),
            Shephard2::G9 => (9, 4, 6, 2, [8, 24]),
            Shephard2::G10 => (10, 4, 4, 3, [12, 24]),
            Shephard2::G14 => (14, 3, 8, 2, [6, 24]),
            Shephard2::G16 => (16, 5, 3, 5, [20, 30]),
            Shephard2::G17 => (17, 5, 6, 2, [20, 60]),
            Shephard2::G18 => (18, 5, 4, 3, [30, 60]),
            Shephard2::G20 => (20, 3, 5, 3, [12, 30]),
            Shephard2::G21 => (21, 3, 10, 2, [12, 60]),
        }
    }

    pub fn number(self) -> u32 {
        self.row().0
    }
}

/// A row of the classification of finite irreducible Coxeter and Shephard
/// groups, with parameters normalized so that every connected admissible
/// diagram has exactly one family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `Z_m`, `m >= 2`.
    Cyclic(u32),
    /// `I_2(k)` = `2[k]2`, `k >= 3` (includes `A_2`, `B_2`).
    Dihedral(u32),
    /// `A_n`, `n >= 3`.
    A(usize),
    /// `D_n`, `n >= 4`.
    D(usize),
    /// `G(m,1,n)`, either `m = 2, n >= 3` (type `B_n`) or `m >= 3, n >= 2`.
    Monomial {
        m: u32,
        n: usize,
    },
    ShephardRank2(Shephard2),
    H3,
    G25,
    G26,
    F4,
    H4,
    G32,
    E6,
    E7,
    E8,
}

impl Family {
    /// `G(m,1,n)` normalized to its family.
    pub fn monomial(m: u32, n: usize) -> Family {
        match (m, n) {
            (_, 1) => Family::Cyclic(m),
            (2, 2) => Family::Dihedral(4),
            _ => Family::Monomial { m, n },
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Family::Cyclic(_) => 1,
            Family::Dihedral(_) | Family::ShephardRank2(_) => 2,
            Family::A(n) | Family::D(n) => n,
            Family::Monomial { n, .. } => n,
            Family::H3 | Family::G25 | Family::G26 => 3,
            Family::F4 | Family::H4 | Family::G32 => 4,
            Family::E6 => 6,
            Family::E7 => 7,
            Family::E8 => 8,
        }
    }

    /// Basic degrees, nondecreasing.
    pub fn degrees(&self) -> Vec<u64> {
        let mut d = match *self {
            Family::Cyclic(m) => vec![m as u64],
            Family::Dihedral(k) => vec![2, k as u64],
            Family::A(n) => (2..=n as u64 + 1).collect(),
            Family::D(n) => {
                let mut v: Vec<u64> = (1..n as u64).map(|k| 2 * k).collect();
                v.push(n as u64);
                v
            }
            Family::Monomial { m, n } => (1..=n as u64).map(|k| k * m as u64).collect(),
            Family::ShephardRank2(s) => s.row().4.to_vec(),
            Family::H3 => vec![2, 6, 10],
            Family::G25 => vec![6, 9, 12],
            Family::G26 => vec![6, 12, 18],
            Family::F4 => vec![2, 6, 8, 12],
            Family::H4 => vec![2, 12, 20, 30],
            Family::G32 => vec![12, 18, 24, 30],
            Family::E6 => vec![2, 5, 6, 8, 9, 12],
            Family::E7 => vec![2, 6, 8, 10, 12, 14, 18],
            Family::E8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
        };
        d.sort_unstable();
        d
    }

    pub fn order(&self) -> u64 {
        self.degrees().iter().product()
    }

    pub fn smallest_degree(&self) -> u64 {
        self.degrees()[0]
    }

    pub fn is_coxeter(&self) -> bool {
        self.diagram().is_coxeter()
    }

    /// The standard diagram of the family.
    pub fn diagram(&self) -> Diagram {
        let lin = |o: &[u32], q: &[u32]| Diagram::linear(o, q).expect("table diagram");
        match *self {
            Family::Cyclic(m) => lin(&[m], &[]),
            Family::Dihedral(k) => lin(&[2, 2], &[k]),
            Family::A(n) => lin(&vec![2; n], &vec![3; n - 1]),
            Family::D(n) => branched(n - 2, 1),
            Family::Monomial { m, n } => {
                let mut o = vec![2; n];
                o[n - 1] = m;
                let mut q = vec![3; n - 1];
                q[n - 2] = 4;
                lin(&o, &q)
            }
            Family::ShephardRank2(s) => {
                let (_, p1, q, p2, _) = s.row();
                lin(&[p1, p2], &[q])
            }
            Family::H3 => lin(&[2, 2, 2], &[3, 5]),
            Family::G25 => lin(&[3, 3, 3], &[3, 3]),
            Family::G26 => lin(&[3, 3, 2], &[3, 4]),
            Family::F4 => lin(&[2, 2, 2, 2], &[3, 4, 3]),
            Family::H4 => lin(&[2, 2, 2, 2], &[3, 3, 5]),
            Family::G32 => lin(&[3, 3, 3, 3], &[3, 3, 3]),
            Family::E6 => branched(3, 2),
            Family::E7 => branched(3, 3),
            Family::E8 => branched(3, 4),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Family::Cyclic(m) => format!("Z{m}"),
            Family::Dihedral(3) => "A2".to_string(),
            Family::Dihedral(4) => "B2".to_string(),
            Family::Dihedral(k) => format!("I2({k})"),
            Family::A(n) => format!("A{n}"),
            Family::D(n) => format!("D{n}"),
            Family::Monomial { m: 2, n } => format!("B{n}"),
            Family::Monomial { m, n } => format!("G({m},1,{n})"),
            Family::ShephardRank2(s) => format!("G{}", s.number()),
            Family::H3 => "H3".to_string(),
            Family::G25 => "G25".to_string(),
            Family::G26 => "G26".to_string(),
            Family::F4 => "F4".to_string(),
            Family::H4 => "H4".to_string(),
            Family::G32 => "G32".to_string(),
            Family::E6 => "E6".to_string(),
            Family::E7 => "E7".to_string(),
            Family::E8 => "E8".to_string(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Simply-laced tree: a chain `0..left+right` whose vertex `left - 1` carries
/// one extra vertex, numbered last.
fn branched(left: usize, right: usize) -> Diagram {
    let chain = left + right;
    let n = chain + 1;
    let mut edges: Vec<(usize, usize, u32)> = (0..chain - 1).map(|i| (i, i + 1, 3)).collect();
    edges.push((left - 1, n - 1, 3));
    Diagram::new(vec![2; n], edges).expect("branched diagram")
}

/// Classification record: family plus its basic degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupId {
    pub family: Family,
    pub degrees: Vec<u64>,
}

impl GroupId {
    pub fn new(family: Family) -> Self {
        GroupId {
            family,
            degrees: family.degrees(),
        }
    }
}

/// Connected components in order of smallest vertex index.
pub fn connected_components(d: &Diagram) -> Vec<Diagram> {
    d.component_vertices().iter().map(|vs| d.induced(vs)).collect()
}

/// Matches a connected nonempty diagram against the classification.
pub fn classify_component(d: &Diagram) -> Result<GroupId, DiagramError> {
    let fail = || DiagramError::NotAdmissible(format!("{:?}", d));
    if d.rank() == 0 || !d.is_connected() {
        return Err(fail());
    }
    let n = d.rank();
    if n == 1 {
        return Ok(GroupId::new(Family::Cyclic(d.orders[0])));
    }
    if let Some(path) = d.linear_order() {
        let orders: Vec<u32> = path.iter().map(|&v| d.orders[v]).collect();
        let labels: Vec<u32> = path.windows(2).map(|w| d.braid(w[0], w[1])).collect();
        for (o, q) in [
            (orders.clone(), labels.clone()),
            (
                orders.iter().rev().copied().collect(),
                labels.iter().rev().copied().collect(),
            ),
        ] {
            if let Some(f) = match_linear(&o, &q) {
                return Ok(GroupId::new(f));
            }
        }
        return Err(fail());
    }
    // Branched simply-laced trees: D and E.
    if !d.is_coxeter() || d.edges().any(|(_, _, m)| m != 3) || d.edges.len() != n - 1 {
        return Err(fail());
    }
    let degree: Vec<usize> = (0..n).map(|v| d.neighbors(v).len()).collect();
    let centers: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    if centers.len() != 1 || degree[centers[0]] != 3 {
        return Err(fail());
    }
    let center = centers[0];
    let mut arms: Vec<usize> = d
        .neighbors(center)
        .into_iter()
        .map(|start| {
            let mut len = 1;
            let (mut prev, mut cur) = (center, start);
            loop {
                let next: Vec<usize> = d.neighbors(cur).into_iter().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [w] => {
                        prev = cur;
                        cur = *w;
                        len += 1;
                    }
                    _ => break len,
                }
            }
        })
        .collect();
    arms.sort_unstable();
    let family = match arms.as_slice() {
        [1, 1, c] => Family::D(c + 3),
        [1, 2, 2] => Family::E6,
        [1, 2, 3] => Family::E7,
        [1, 2, 4] => Family::E8,
        _ => return Err(fail()),
    };
    Ok(GroupId::new(family))
}

fn match_linear(orders: &[u32], labels: &[u32]) -> Option<Family> {
    let n = orders.len();
    if n == 2 {
        let (p1, q, p2) = (orders[0], labels[0], orders[1]);
        if p1 == 2 && p2 == 2 {
            return Some(Family::Dihedral(q));
        }
        if p1 == 2 && q == 4 && p2 >= 3 {
            return Some(Family::Monomial { m: p2, n: 2 });
        }
        return Shephard2::ALL.iter().copied().find_map(|s| {
            let (_, a, b, c, _) = s.row();
            (a == p1 && b == q && c == p2).then_some(Family::ShephardRank2(s))
        });
    }
    let head_two = orders[..n - 1].iter().all(|&p| p == 2);
    let head_three = labels[..n - 2].iter().all(|&q| q == 3);
    if head_two && head_three {
        if orders[n - 1] == 2 && labels[n - 2] == 3 {
            return Some(Family::A(n));
        }
        if labels[n - 2] == 4 {
            return Some(Family::monomial(orders[n - 1], n));
        }
    }
    [
        Family::H3,
        Family::G25,
        Family::G26,
        Family::F4,
        Family::H4,
        Family::G32,
    ]
    .into_iter()
    .find(|f| {
        let t = f.diagram();
        let path: Vec<usize> = (0..t.rank()).collect();
        t.rank() == n
            && path.iter().map(|&v| t.orders[v]).eq(orders.iter().copied())
            && path.windows(2).map(|w| t.braid(w[0], w[1])).eq(labels.iter().copied())
    })
}

/// Multiset union of the components' basic degrees, sorted.
pub fn basic_degrees(d: &Diagram) -> Result<Vec<u64>, DiagramError> {
    let mut out: Vec<u64> = d.families()?.iter().flat_map(|f| f.degrees()).collect();
    out.sort_unstable();
    Ok(out)
}

/// True when some induced subdiagram of `d` is isomorphic, as a labeled
/// graph, to the diagram of one of `patterns`.
pub fn has_forbidden_subdiagram(d: &Diagram, patterns: &[Family]) -> bool {
    patterns.iter().any(|p| embeds_induced(&p.diagram(), d))
}

/// Whether `pattern` is isomorphic to an induced subdiagram of `host`.
pub fn embeds_induced(pattern: &Diagram, host: &Diagram) -> bool {
    fn extend(pattern: &Diagram, host: &Diagram, image: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let k = image.len();
        if k == pattern.rank() {
            return true;
        }
        for h in 0..host.rank() {
            if used[h] || host.orders[h] != pattern.orders[k] {
                continue;
            }
            if (0..k).any(|j| pattern.braid(j, k) != host.braid(image[j], h)) {
                continue;
            }
            used[h] = true;
            image.push(h);
            if extend(pattern, host, image, used) {
                return true;
            }
            image.pop();
            used[h] = false;
        }
        false
    }
    if pattern.rank() > host.rank() {
        return false;
    }
    extend(pattern, host, &mut Vec::new(), &mut vec![false; host.rank()])
}

fn checked_factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Irreducible families of the given rank whose order is exactly `order`.
pub fn irreducible_families(rank: usize, order: u64) -> Vec<Family> {
    let mut out = Vec::new();
    match rank {
        0 => {}
        1 => {
            if order >= 2 && order <= u32::MAX as u64 {
                out.push(Family::Cyclic(order as u32));
            }
        }
        2 => {
            if order.is_multiple_of(2) && order / 2 >= 3 && order / 2 <= u32::MAX as u64 {
                out.push(Family::Dihedral((order / 2) as u32));
            }
            let mut m: u64 = 3;
            while 2 * m * m <= order {
                if 2 * m * m == order {
                    out.push(Family::Monomial { m: m as u32, n: 2 });
                }
                m += 1;
            }
            for s in Shephard2::ALL {
                if Family::ShephardRank2(s).order() == order {
                    out.push(Family::ShephardRank2(s));
                }
            }
        }
        n => {
            if let Some(f) = checked_factorial(n) {
                if f.checked_mul(n as u64 + 1) == Some(order) {
                    out.push(Family::A(n));
                }
                if n >= 4 && 1u64.checked_shl(n as u32 - 1).and_then(|p| p.checked_mul(f)) == Some(order) {
                    out.push(Family::D(n));
                }
                let mut m: u64 = 2;
                loop {
                    match m.checked_pow(n as u32).and_then(|p| p.checked_mul(f)) {
                        Some(o) if o <= order => {
                            if o == order {
                                out.push(Family::Monomial { m: m as u32, n });
                            }
                        }
                        _ => break,
                    }
                    m += 1;
                }
            }
            for f in [
                Family::H3,
                Family::G25,
                Family::G26,
                Family::F4,
                Family::H4,
                Family::G32,
                Family::E6,
                Family::E7,
                Family::E8,
            ] {
                if f.rank() == n && f.order() == order {
                    out.push(f);
                }
            }
        }
    }
    out.sort();
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n.is_multiple_of(k) {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Every admissible diagram (up to isomorphism) with `rank` vertices and
/// group order `order`, in canonical order.
pub fn enumerate_admissible(rank: usize, order: u64) -> Vec<Diagram> {
    fn rec(rank: usize, order: u64, last: Option<(usize, Family)>, cur: &mut Vec<Family>, out: &mut Vec<Vec<Family>>) {
        if rank == 0 {
            if order == 1 {
                out.push(cur.clone());
            }
            return;
        }
        if order < 2 {
            return;
        }
        for k in 1..=rank {
            for q in divisors(order) {
                if q < 2 {
                    continue;
                }
                for f in irreducible_families(k, q) {
                    if last.is_some_and(|l| (k, f) < l) {
                        continue;
                    }
                    cur.push(f);
                    rec(rank - k, order / q, Some((k, f)), cur, out);
                    cur.pop();
                }
            }
        }
    }
    if order == 0 {
        return Vec::new();
    }
    let mut lists = Vec::new();
    rec(rank, order, None, &mut Vec::new(), &mut lists);
    lists.sort_by_key(|l| l.iter().map(|f| (f.rank(), *f)).collect::<Vec<_>>());
    lists
        .into_iter()
        .map(|fams| fams.iter().fold(Diagram::empty(), |acc, f| acc.union(&f.diagram())))
        .collect()
}

/// Connected members of [`enumerate_admissible`].
pub fn enumerate_irreducible(rank: usize, order: u64) -> Vec<Diagram> {
    irreducible_families(rank, order).iter().map(|f| f.diagram()).collect()
}

/// Parses a diagram symbol: linear terms `p[q]p...`, named diagrams
/// (`A4`, `D5`, `E6`, `F4`, `H3`, `G25`, `Z7`, `I2(5)`, `B(m,n)`,
/// `G(m,1,n)`, ...) and unions `X + Y`. Vertex label 2 and edge label 3 may
/// be omitted (`[4]3` is `2[4]3`, `3[]3` is `3[3]3`).
pub fn parse_symbol(text: &str) -> Result<Diagram, DiagramError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Diagram::empty());
    }
    let mut out = Diagram::empty();
    let mut offset = 0;
    for term in text.split('+') {
        let start = offset + (term.len() - term.trim_start().len());
        offset += term.len() + 1;
        let term = term.trim();
        if term.is_empty() {
            return Err(DiagramError::Syntax {
                text: text.to_string(),
                pos: start,
                msg: "empty term".to_string(),
            });
        }
        let d = if term.as_bytes()[0].is_ascii_alphabetic() {
            parse_named(term)?
        } else {
            parse_linear(text, term, start)?
        };
        out = out.union(&d);
    }
    Ok(out)
}

fn parse_linear(full: &str, term: &str, base: usize) -> Result<Diagram, DiagramError> {
    let bytes = term.as_bytes();
    let mut pos = 0;
    let err = |pos: usize, msg: &str| DiagramError::Syntax {
        text: full.to_string(),
        pos: base + pos,
        msg: msg.to_string(),
    };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Result<Option<u32>, DiagramError> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Ok(None);
        }
        term[start..*pos]
            .parse::<u32>()
            .map(Some)
            .map_err(|_| err(start, "integer out of range"))
    };
    let mut orders = Vec::new();
    let mut labels = Vec::new();
    loop {
        skip_ws(&mut pos);
        let p = read_int(&mut pos)?.unwrap_or(2);
        if p < 2 {
            return Err(DiagramError::VertexLabel(p));
        }
        orders.push(p);
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'[' {
            return Err(err(pos, "expected '[' or end of term"));
        }
        pos += 1;
        skip_ws(&mut pos);
        let q = read_int(&mut pos)?.unwrap_or(3);
        skip_ws(&mut pos);
        if pos >= bytes.len() || bytes[pos] != b']' {
            return Err(err(pos, "expected ']'"));
        }
        pos += 1;
        if q < 2 {
            return Err(DiagramError::EdgeLabel(q));
        }
        labels.push(q);
    }
    Diagram::linear(&orders, &labels)
}

fn parse_named(term: &str) -> Result<Diagram, DiagramError> {
    let name: String = term
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    let unknown = || DiagramError::UnknownName(term.to_string());
    let int = |s: &str| s.parse::<u32>().map_err(|_| unknown());
    let tuple = |s: &str| -> Result<Vec<u32>, DiagramError> {
        let inner = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(unknown)?;
        inner.split(',').map(int).collect()
    };
    let (head, rest) = name.split_at(1);
    let family = match head {
        "z" => {
            let m = int(rest)?;
            if m < 2 {
                return Err(DiagramError::VertexLabel(m));
            }
            Family::Cyclic(m)
        }
        "a" => match int(rest)? {
            0 => return Err(unknown()),
            1 => Family::Cyclic(2),
            2 => Family::Dihedral(3),
            n => Family::A(n as usize),
        },
        "b" if rest.starts_with('(') => match tuple(rest)?.as_slice() {
            &[m, n] if m >= 2 && n >= 1 => Family::monomial(m, n as usize),
            _ => return Err(unknown()),
        },
        "b" => match int(rest)? {
            0 => return Err(unknown()),
            n => Family::monomial(2, n as usize),
        },
        "d" => match int(rest)? {
            n if n >= 4 => Family::D(n as usize),
            _ => return Err(unknown()),
        },
        "e" => match int(rest)? {
            6 => Family::E6,
            7 => Family::E7,
            8 => Family::E8,
            _ => return Err(unknown()),
        },
        "f" if rest == "4" => Family::F4,
        "h" if rest == "3" => Family::H3,
        "h" if rest == "4" => Family::H4,
        "i" if rest.starts_with('2') => {
            let k = match tuple(&rest[1..])?.as_slice() {
                &[k] => k,
                _ => return Err(unknown()),
            };
            if k < 2 {
                return Err(DiagramError::EdgeLabel(k));
            }
            return Diagram::linear(&[2, 2], &[k]);
        }
        "g" if rest.starts_with('(') => match tuple(rest)?.as_slice() {
            &[m, 1, n] if m >= 2 && n >= 1 => Family::monomial(m, n as usize),
            _ => return Err(unknown()),
        },
        "g" => {
            let k = int(rest)?;
            if let Some(s) = Shephard2::ALL.iter().find(|s| s.number() == k) {
                Family::ShephardRank2(*s)
            } else {
                match k {
                    23 => Family::H3,
                    25 => Family::G25,
                    26 => Family::G26,
                    28 => Family::F4,
                    30 => Family::H4,
                    32 => Family::G32,
                    35 => Family::E6,
                    36 => Family::E7,
                    37 => Family::E8,
                    _ => return Err(unknown()),
                }
            }
        }
        _ => return Err(unknown()),
    };
    Ok(family.diagram())
}
