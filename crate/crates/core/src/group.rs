//! Finite groups from admissible presentations.
//!
//! [`GroupTable::enumerate`] runs Todd–Coxeter coset enumeration over the
//! trivial subgroup (HLT strategy with lookahead) on the relators
//! `r_i^{p_i}` and `braid(i, j) braid(j, i)^{-1}`. The finished table is
//! renumbered breadth-first from the identity with generators tried in index
//! order, so element ids and the stored words are reproducible.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagram::Diagram;

/// Default bound on the group order (admits `G32`, excludes `E6`–`E8`).
pub const DEFAULT_CAP: usize = 200_000;

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group order exceeds cap {cap} (reached {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error("malformed group cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// The right regular action of `G` on itself, one permutation per generator.
#[derive(Clone, Debug)]
pub struct GroupTable {
    gen_orders: Vec<u32>,
    right: Vec<Vec<u32>>,
    right_inv: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    parent: Vec<u32>,
    parent_gen: Vec<u8>,
    depth: Vec<u32>,
}

struct Enumerator {
    ncols: usize,
    inv: Vec<usize>,
    table: Vec<u32>,
    p: Vec<u32>,
    max_rows: usize,
    queue: Vec<u32>,
}

enum Full {
    Yes,
}

impl Enumerator {
    fn rows(&self) -> usize {
        self.p.len()
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.ncols + x] = v;
    }

    fn live(&self, c: u32) -> bool {
        self.p[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.p[r as usize] != r {
            r = self.p[r as usize];
        }
        let mut k = c;
        while self.p[k as usize] != r {
            let next = self.p[k as usize];
            self.p[k as usize] = r;
            k = next;
        }
        r
    }

    fn define(&mut self, c: u32, x: usize) -> Result<(), Full> {
        if self.rows() >= self.max_rows {
            return Err(Full::Yes);
        }
        let d = self.rows() as u32;
        self.p.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.set(c, x, d);
        self.set(d, self.inv[x], c);
        Ok(())
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (lo, hi) = if k < l { (k, l) } else { (l, k) };
        self.p[hi as usize] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                let xi = self.inv[x];
                self.set(d, xi, UNDEF);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let t = self.get(mu, x);
                if t != UNDEF {
                    self.merge(nu, t);
                } else {
                    let s = self.get(nu, xi);
                    if s != UNDEF {
                        self.merge(mu, s);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, xi, mu);
                    }
                }
            }
        }
    }

    /// Scans `rel` at coset `c`, defining new cosets when `fill` is set.
    fn scan(&mut self, c: u32, rel: &[usize], fill: bool) -> Result<(), Full> {
        let mut f = c;
        let mut b = c;
        let mut i: isize = 0;
        let mut j: isize = rel.len() as isize - 1;
        loop {
            while i <= j {
                let t = self.get(f, rel[i as usize]);
                if t == UNDEF {
                    break;
                }
                f = t;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let t = self.get(b, self.inv[rel[j as usize]]);
                if t == UNDEF {
                    break;
                }
                b = t;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = rel[i as usize];
                self.set(f, x, b);
                self.set(b, self.inv[x], f);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, rel[i as usize])?;
        }
    }

    /// Drops dead rows; returns the new index of each old live row.
    fn compact(&mut self) -> Vec<u32> {
        let n = self.rows();
        let mut new_id = vec![UNDEF; n];
        let mut next = 0u32;
        for c in 0..n {
            if self.p[c] == c as u32 {
                new_id[c] = next;
                next += 1;
            }
        }
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..n as u32 {
            if !self.live(c) {
                continue;
            }
            for x in 0..self.ncols {
                let t = self.get(c, x);
                let v = if t == UNDEF {
                    UNDEF
                } else {
                    new_id[self.rep(t) as usize]
                };
                table.push(v);
            }
        }
        self.table = table;
        self.p = (0..next).collect();
        new_id
    }
}

impl GroupTable {
    /// Enumerates `G(d)`; fails with `CapExceeded` once more than `cap`
    /// elements are forced or the working table outgrows its budget.
    pub fn enumerate(d: &Diagram, cap: usize) -> Result<GroupTable, GroupError> {
        if let Ok(order) = d.group_order() {
            if order > cap as u64 {
                return Err(GroupError::CapExceeded {
                    cap,
                    reached: order.min(usize::MAX as u64) as usize,
                });
            }
        }
        let n = d.rank();
        assert!(n <= u8::MAX as usize, "rank too large");
        let orders = d.orders().to_vec();
        // columns: forward generator columns first, then inverses of the
        // generators whose order exceeds two
        let mut fwd = Vec::with_capacity(n);
        let mut bwd = Vec::with_capacity(n);
        let mut ncols = n;
        for (i, &p) in orders.iter().enumerate() {
            fwd.push(i);
            if p == 2 {
                bwd.push(i);
            } else {
                bwd.push(ncols);
                ncols += 1;
            }
        }
        let mut inv = vec![0; ncols];
        for i in 0..n {
            inv[fwd[i]] = bwd[i];
            inv[bwd[i]] = fwd[i];
        }
        let mut relators: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            relators.push(vec![fwd[i]; orders[i] as usize]);
        }
        for i in 0..n {
            for j in i + 1..n {
                let m = d.braid(i, j) as usize;
                let alt =
                    |a: usize, b: usize| -> Vec<usize> { (0..m).map(|k| if k % 2 == 0 { a } else { b }).collect() };
                let mut rel: Vec<usize> = alt(fwd[i], fwd[j]);
                rel.extend(alt(fwd[j], fwd[i]).iter().rev().map(|&x| inv[x]));
                relators.push(rel);
            }
        }
        relators.sort_by_key(|r| r.len());

        let max_rows = cap.saturating_mul(8).max(1 << 12);
        let mut e = Enumerator {
            ncols,
            inv,
            table: vec![UNDEF; ncols],
            p: vec![0],
            max_rows,
            queue: Vec::new(),
        };
        let mut c: u32 = 0;
        'outer: while (c as usize) < e.rows() {
            if e.live(c) {
                let mut ok = true;
                for rel in &relators {
                    if e.scan(c, rel, true).is_err() {
                        ok = false;
                        break;
                    }
                    if !e.live(c) {
                        break;
                    }
                }
                if ok && e.live(c) {
                    for x in 0..ncols {
                        if e.get(c, x) == UNDEF && e.define(c, x).is_err() {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    // lookahead: scan every live coset without defining
                    for d in 0..e.rows() as u32 {
                        if !e.live(d) {
                            continue;
                        }
                        for rel in &relators {
                            let _ = e.scan(d, rel, false);
                            if !e.live(d) {
                                break;
                            }
                        }
                    }
                    let live_before_c = (0..c).filter(|&k| e.live(k)).count() as u32;
                    let before = e.rows();
                    e.compact();
                    if e.rows() * 10 > before * 9 && e.rows() + ncols > e.max_rows / 2 {
                        return Err(GroupError::CapExceeded { cap, reached: e.rows() });
                    }
                    c = live_before_c;
                    continue 'outer;
                }
            }
            c += 1;
        }
        e.compact();
        let order = e.rows();
        if order > cap {
            return Err(GroupError::CapExceeded { cap, reached: order });
        }
        // breadth-first renumbering along forward generator columns
        let mut new_id = vec![UNDEF; order];
        let mut old_of = Vec::with_capacity(order);
        let mut parent = Vec::with_capacity(order);
        let mut parent_gen = Vec::with_capacity(order);
        let mut depth = Vec::with_capacity(order);
        new_id[0] = 0;
        old_of.push(0u32);
        parent.push(0);
        parent_gen.push(u8::MAX);
        depth.push(0);
        let mut k = 0;
        while k < old_of.len() {
            let cur = old_of[k];
            for i in 0..n {
                let t = e.get(cur, fwd[i]) as usize;
                if new_id[t] == UNDEF {
                    new_id[t] = old_of.len() as u32;
                    old_of.push(t as u32);
                    parent.push(k as u32);
                    parent_gen.push(i as u8);
                    depth.push(depth[k] + 1);
                }
            }
            k += 1;
        }
        debug_assert_eq!(old_of.len(), order);
        let mut right = vec![vec![0u32; order]; n];
        let mut right_inv = vec![vec![0u32; order]; n];
        for (new, &old) in old_of.iter().enumerate() {
            for i in 0..n {
                right[i][new] = new_id[e.get(old, fwd[i]) as usize];
                right_inv[i][new] = new_id[e.get(old, bwd[i]) as usize];
            }
        }
        let mut t = GroupTable {
            gen_orders: orders,
            right,
            right_inv,
            left: Vec::new(),
            parent,
            parent_gen,
            depth,
        };
        t.left = (0..n).map(|i| t.left_multiplication(t.right[i][0])).collect();
        Ok(t)
    }

    /// Builds a table from right-multiplication permutations, renumbering
    /// breadth-first from element 0.
    pub fn from_actions(gen_orders: Vec<u32>, actions: Vec<Vec<u32>>) -> Result<GroupTable, GroupError> {
        let n = gen_orders.len();
        if actions.len() != n {
            return Err(GroupError::Cache("generator count mismatch".into()));
        }
        let order = actions.first().map_or(1, |a| a.len());
        let mut inverse = vec![vec![UNDEF; order]; n];
        for (i, a) in actions.iter().enumerate() {
            if a.len() != order {
                return Err(GroupError::Cache("permutation length mismatch".into()));
            }
            for (e, &img) in a.iter().enumerate() {
                if img as usize >= order || inverse[i][img as usize] != UNDEF {
                    return Err(GroupError::Cache(format!("generator {i} is not a permutation")));
                }
                inverse[i][img as usize] = e as u32;
            }
        }
        let mut new_id = vec![UNDEF; order];
        let mut old_of = vec![0u32];
        let mut parent = vec![0u32];
        let mut parent_gen = vec![u8::MAX];
        let mut depth = vec![0u32];
        if order > 0 {
            new_id[0] = 0;
        }
        let mut k = 0;
        while k < old_of.len() {
            let cur = old_of[k] as usize;
            for i in 0..n {
                let t = actions[i][cur] as usize;
                if new_id[t] == UNDEF {
                    new_id[t] = old_of.len() as u32;
                    old_of.push(t as u32);
                    parent.push(k as u32);
                    parent_gen.push(i as u8);
                    depth.push(depth[k] + 1);
                }
            }
            k += 1;
        }
        if old_of.len() != order {
            return Err(GroupError::Cache("action is not transitive".into()));
        }
        let mut right = vec![vec![0u32; order]; n];
        let mut right_inv = vec![vec![0u32; order]; n];
        for (new, &old) in old_of.iter().enumerate() {
            for i in 0..n {
                right[i][new] = new_id[actions[i][old as usize] as usize];
                right_inv[i][new] = new_id[inverse[i][old as usize] as usize];
            }
        }
        let mut t = GroupTable {
            gen_orders,
            right,
            right_inv,
            left: Vec::new(),
            parent,
            parent_gen,
            depth,
        };
        t.left = (0..n).map(|i| t.left_multiplication(t.right[i][0])).collect();
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn rank(&self) -> usize {
        self.gen_orders.len()
    }

    pub fn gen_orders(&self) -> &[u32] {
        &self.gen_orders
    }

    /// `e * r_i` for every element `e`.
    pub fn gen_action(&self, i: usize) -> &[u32] {
        &self.right[i]
    }

    /// `e * r_i^{-1}` for every element `e`.
    pub fn gen_inverse_action(&self, i: usize) -> &[u32] {
        &self.right_inv[i]
    }

    /// `r_i * e` for every element `e`.
    pub fn gen_left_action(&self, i: usize) -> &[u32] {
        &self.left[i]
    }

    pub fn identity(&self) -> u32 {
        0
    }

    /// Element id of the generator `r_i`.
    pub fn generator(&self, i: usize) -> u32 {
        self.right[i][0]
    }

    /// Shortest word found for `g` (generator indices, left to right).
    pub fn word(&self, g: u32) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.depth[g as usize] as usize);
        let mut e = g as usize;
        while e != 0 {
            w.push(self.parent_gen[e] as usize);
            e = self.parent[e] as usize;
        }
        w.reverse();
        w
    }

    /// Word with 1-based generator names and runs as powers, e.g. `r1^2 r2`;
    /// `1` for the identity.
    pub fn word_string(&self, g: u32) -> String {
        let w = self.word(g);
        if w.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        for run in w.chunk_by(|a, b| a == b) {
            if !s.is_empty() {
                s.push(' ');
            }
            let _ = write!(s, "r{}", run[0] + 1);
            if run.len() > 1 {
                let _ = write!(s, "^{}", run.len());
            }
        }
        s
    }

    /// Element reached from `start` by right-multiplying the letters of `word`.
    pub fn apply_word(&self, start: u32, word: &[usize]) -> u32 {
        word.iter().fold(start, |e, &i| self.right[i][e as usize])
    }

    pub fn multiply(&self, a: u32, b: u32) -> u32 {
        let mut stack = Vec::with_capacity(self.depth[b as usize] as usize);
        let mut e = b as usize;
        while e != 0 {
            stack.push(self.parent_gen[e]);
            e = self.parent[e] as usize;
        }
        stack.iter().rev().fold(a, |x, &i| self.right[i as usize][x as usize])
    }

    pub fn inverse(&self, a: u32) -> u32 {
        let mut x = 0u32;
        let mut e = a as usize;
        while e != 0 {
            x = self.right_inv[self.parent_gen[e] as usize][x as usize];
            e = self.parent[e] as usize;
        }
        x
    }

    /// `h g h^{-1}`.
    pub fn conjugate_element(&self, g: u32, h: u32) -> u32 {
        self.multiply(self.multiply(h, g), self.inverse(h))
    }

    /// The permutation `e -> h * e`.
    pub fn left_multiplication(&self, h: u32) -> Vec<u32> {
        let n = self.order();
        let mut out = vec![0u32; n];
        out[0] = h;
        for e in 1..n {
            let p = self.parent[e] as usize;
            out[e] = self.right[self.parent_gen[e] as usize][out[p] as usize];
        }
        out
    }

    pub fn power(&self, g: u32, k: u64) -> u32 {
        let k = k % self.element_order(g);
        let left = self.left_multiplication(g);
        (0..k).fold(0, |x, _| left[x as usize])
    }

    pub fn element_order(&self, g: u32) -> u64 {
        let left = self.left_multiplication(g);
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = left[x as usize];
            k += 1;
        }
        k
    }

    /// Whether the tables satisfy the relators of `d`.
    pub fn check_relations(&self, d: &Diagram) -> bool {
        let n = self.rank();
        if d.rank() != n || d.orders() != self.gen_orders.as_slice() {
            return false;
        }
        let order = self.order();
        for i in 0..n {
            for e in 0..order as u32 {
                let w = vec![i; self.gen_orders[i] as usize];
                if self.apply_word(e, &w) != e {
                    return false;
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let m = d.braid(i, j) as usize;
                let a: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
                let b: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { j } else { i }).collect();
                for e in 0..order as u32 {
                    if self.apply_word(e, &a) != self.apply_word(e, &b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let n = self.order();
        let mut class = vec![UNDEF; n];
        let mut out = Vec::new();
        for start in 0..n {
            if class[start] != UNDEF {
                continue;
            }
            let id = out.len() as u32;
            class[start] = id;
            let mut members = vec![start as u32];
            let mut k = 0;
            while k < members.len() {
                let x = members[k] as usize;
                for i in 0..self.rank() {
                    // r_i x r_i^{-1}
                    let y = self.left[i][self.right_inv[i][x] as usize] as usize;
                    if class[y] == UNDEF {
                        class[y] = id;
                        members.push(y as u32);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// All elements conjugate to a nontrivial power of a generator, sorted.
    pub fn reflections(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.reflection_classes().into_iter().flat_map(|c| c.elements).collect();
        out.sort_unstable();
        out
    }

    /// Conjugacy classes of reflections, ordered by representative (the
    /// smallest element id).
    pub fn reflection_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.order();
        let mut is_seed = vec![false; n];
        for i in 0..self.rank() {
            let mut x = 0usize;
            for _ in 1..self.gen_orders[i] {
                x = self.right[i][x] as usize;
                is_seed[x] = true;
            }
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if !is_seed[s] || seen[s] {
                continue;
            }
            let mut members = vec![s as u32];
            seen[s] = true;
            let mut k = 0;
            while k < members.len() {
                let x = members[k] as usize;
                for i in 0..self.rank() {
                    let y = self.left[i][self.right_inv[i][x] as usize] as usize;
                    if !seen[y] {
                        seen[y] = true;
                        members.push(y as u32);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            out.push(ConjugacyClass {
                rep: members[0],
                elements: members,
            });
        }
        out.sort_by_key(|c| c.rep);
        out
    }

    /// Left cosets `g G_I` as orbits of right multiplication by `I`.
    pub fn parabolic_cosets(&self, subset: &[usize]) -> CosetPartition {
        let n = self.order();
        let mut block_of = vec![UNDEF; n];
        let mut reps = Vec::new();
        let mut block_size = 0;
        let mut orbit = Vec::new();
        for start in 0..n {
            if block_of[start] != UNDEF {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(start as u32);
            block_of[start] = id;
            orbit.clear();
            orbit.push(start as u32);
            let mut k = 0;
            while k < orbit.len() {
                let x = orbit[k] as usize;
                for &i in subset {
                    let y = self.right[i][x] as usize;
                    if block_of[y] == UNDEF {
                        block_of[y] = id;
                        orbit.push(y as u32);
                    }
                }
                k += 1;
            }
            if id == 0 {
                block_size = orbit.len();
            }
        }
        let mut subset: Vec<usize> = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        CosetPartition {
            subset,
            block_of,
            reps,
            block_size,
        }
    }

    /// Writes the cache format: a header line then one line per generator.
    pub fn to_cache_string(&self, canonical_key: &str) -> String {
        let mut s = format!("MFC-GROUP v1 {} {}\n", canonical_key, self.order());
        for i in 0..self.rank() {
            let line: Vec<String> = self.right[i].iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the cache format and checks the relators of `d`.
    pub fn from_cache_string(text: &str, d: &Diagram) -> Result<GroupTable, GroupError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| GroupError::Cache("empty file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "MFC-GROUP" || parts[1] != "v1" {
            return Err(GroupError::Cache(format!("bad header {header:?}")));
        }
        if let Ok(key) = d.canonical_key() {
            if parts[2] != key {
                return Err(GroupError::Cache(format!("cache is for {} not {}", parts[2], key)));
            }
        }
        let order: usize = parts[3].parse().map_err(|_| GroupError::Cache("bad order".into()))?;
        let mut actions = Vec::new();
        for _ in 0..d.rank() {
            let line = lines
                .next()
                .ok_or_else(|| GroupError::Cache("missing generator line".into()))?;
            let perm: Result<Vec<u32>, _> = line.split_whitespace().map(|t| t.parse::<u32>()).collect();
            let perm = perm.map_err(|_| GroupError::Cache("bad element id".into()))?;
            if perm.len() != order {
                return Err(GroupError::Cache("generator line has wrong length".into()));
            }
            actions.push(perm);
        }
        let t = GroupTable::from_actions(d.orders().to_vec(), actions)?;
        if t.order() != order || !t.check_relations(d) {
            return Err(GroupError::Cache("cached table fails the relators".into()));
        }
        Ok(t)
    }
}

/// Cache file path for a diagram; keyed by its exact vertex layout.
pub fn cache_path(dir: &Path, d: &Diagram) -> PathBuf {
    let mut layout = format!("{:?}", d.orders());
    for (i, j, m) in d.edges() {
        let _ = write!(layout, ";{i}-{j}:{m}");
    }
    let digest = Sha256::digest(layout.as_bytes());
    dir.join(format!("{}.mfcgroup", hex::encode(&digest[..12])))
}

/// Enumerates `d`, reading and writing a cache in `cache_dir` when given.
pub fn enumerate_cached(d: &Diagram, cap: usize, cache_dir: Option<&Path>) -> Result<GroupTable, GroupError> {
    let Some(dir) = cache_dir else {
        return GroupTable::enumerate(d, cap);
    };
    let path = cache_path(dir, d);
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(t) = GroupTable::from_cache_string(&text, d) {
            if t.order() <= cap {
                return Ok(t);
            }
        }
    }
    let t = GroupTable::enumerate(d, cap)?;
    if let Ok(key) = d.canonical_key() {
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, t.to_cache_string(&key))?;
        fs::rename(&tmp, &path)?;
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub rep: u32,
    pub elements: Vec<u32>,
}

/// Partition of `G` into left cosets of `G_I`.
#[derive(Clone, Debug)]
pub struct CosetPartition {
    pub subset: Vec<usize>,
    pub block_of: Vec<u32>,
    /// Smallest element of each block; block 0 is `G_I`.
    pub reps: Vec<u32>,
    pub block_size: usize,
}

impl CosetPartition {
    pub fn num_blocks(&self) -> usize {
        self.reps.len()
    }

    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::with_capacity(self.block_size); self.reps.len()];
        for (e, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(e as u32);
        }
        out
    }
}
