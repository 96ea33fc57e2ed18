//! Reduced simplicial homology over the integers.
//!
//! Each boundary matrix is column-reduced over `Z` (gcd steps where a pivot
//! is not a unit), highest dimension first, with columns cleared when their
//! face is already a unit pivot row of the dimension above. When every pivot
//! is `±1` the integral Smith form is all ones; otherwise the columns with
//! non-unit pivots are reduced against the unit ones and the remainder gets
//! a dense Smith form over big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::TypedComplex;

/// Residual matrices larger than this (rows times columns) are not put in
/// Smith form; torsion is then reported as unknown.
pub const DENSE_SNF_LIMIT: usize = 250_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Torsion {
    /// Certified: every invariant factor of every boundary map is 1.
    Free,
    /// Some homology group has torsion.
    Present,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homology {
    /// Reduced Betti numbers in degrees `0..=dim`.
    pub betti: Vec<u64>,
    /// Reduced Betti number in degree -1 (1 exactly for the empty-face-only
    /// complex).
    pub betti_minus_one: u64,
    pub torsion: Torsion,
    /// Nontrivial invariant factors `(degree, factor)`, when known.
    pub torsion_factors: Vec<(isize, String)>,
}

impl Homology {
    /// Reduced Betti number in degree `k >= -1`.
    pub fn betti_at(&self, k: isize) -> u64 {
        match k {
            -1 => self.betti_minus_one,
            k if k >= 0 => self.betti.get(k as usize).copied().unwrap_or(0),
            _ => 0,
        }
    }

    /// The single nonzero reduced Betti number and its degree, if the
    /// homology is concentrated in one degree.
    pub fn concentrated(&self) -> Option<(isize, u64)> {
        let nonzero: Vec<(isize, u64)> = std::iter::once((-1, self.betti_minus_one))
            .chain(self.betti.iter().enumerate().map(|(k, &b)| (k as isize, b)))
            .filter(|&(_, b)| b != 0)
            .collect();
        match nonzero.as_slice() {
            [one] => Some(*one),
            _ => None,
        }
    }

    /// Whether the reduced homology is `Z^count` in degree `k` and zero
    /// elsewhere (count may be zero).
    pub fn is_concentrated_in(&self, k: isize, count: u64) -> bool {
        let top = self.betti.len() as isize - 1;
        (-1..=top.max(k)).all(|j| self.betti_at(j) == if j == k { count } else { 0 })
    }
}

trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn is_pm_one(&self) -> bool;
    /// `a * x + b * y`, or `None` on overflow.
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    /// `(g, s, t)` with `g = s a + t b`, `g > 0`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    /// Exact quotient when `b` divides `a`.
    fn div_exact(a: &Self, b: &Self) -> Option<Self>;
    fn negated(&self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn is_pm_one(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_add(b.checked_mul(*y)?)
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = (*a as i128).extended_gcd(&(*b as i128));
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g < 0 {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((g.to_i64()?, s.to_i64()?, t.to_i64()?))
    }
    fn div_exact(a: &Self, b: &Self) -> Option<Self> {
        if *b != 0 && a % b == 0 {
            a.checked_div(*b)
        } else {
            None
        }
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pm_one(&self) -> bool {
        self.abs().is_one()
    }
    fn lin(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x + b * y)
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn div_exact(a: &Self, b: &Self) -> Option<Self> {
        if !Zero::is_zero(b) && (a % b).is_zero() {
            Some(a / b)
        } else {
            None
        }
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Column<C> = Vec<(u32, C)>;

/// `a * x + b * y` for sorted sparse columns.
fn combine<C: Coeff>(a: &C, x: &Column<C>, b: &C, y: &Column<C>) -> Option<Column<C>> {
    let zero = C::from_i64(0);
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (row, val) = if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            let v = C::lin(a, &x[i].1, &zero, &zero)?;
            i += 1;
            (x[i - 1].0, v)
        } else if i == x.len() || y[j].0 < x[i].0 {
            let v = C::lin(&zero, &zero, b, &y[j].1)?;
            j += 1;
            (y[j - 1].0, v)
        } else {
            let v = C::lin(a, &x[i].1, b, &y[j].1)?;
            i += 1;
            j += 1;
            (x[i - 1].0, v)
        };
        if !val.vanishes() {
            out.push((row, val));
        }
    }
    Some(out)
}

fn boundary_column<C: Coeff>(c: &TypedComplex, k: usize, face: &[u32]) -> Column<C> {
    if k == 0 {
        return vec![(0, C::from_i64(1))];
    }
    let mut col: Column<C> = Vec::with_capacity(k + 1);
    let mut sub = Vec::with_capacity(k);
    for skip in 0..=k {
        sub.clear();
        sub.extend(face.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
        let row = c.index_of(&sub).expect("complex is closed under faces") as u32;
        let sign = if skip % 2 == 0 { 1 } else { -1 };
        col.push((row, C::from_i64(sign)));
    }
    col.sort_unstable_by_key(|e| e.0);
    col
}

struct Reduced<C> {
    rank: usize,
    /// Rows that carry a unit pivot.
    unit_rows: Vec<u32>,
    /// Final columns whose pivot is not a unit.
    nonunit: Vec<Column<C>>,
    /// Final columns by pivot row.
    pivots: Vec<Option<Column<C>>>,
}

/// Reduces the boundary map from k-faces; `skip[i]` marks cleared columns.
fn reduce<C: Coeff>(c: &TypedComplex, k: usize, skip: &[bool]) -> Option<Reduced<C>> {
    let rows = if k == 0 { 1 } else { c.count(k as isize - 1) as usize };
    let mut pivots: Vec<Option<Column<C>>> = vec![None; rows];
    let mut rank = 0;
    for (j, face) in c.faces(k).enumerate() {
        if skip.get(j).copied().unwrap_or(false) {
            continue;
        }
        let mut col: Column<C> = boundary_column(c, k, face);
        while let Some(&(low, _)) = col.last() {
            let low_val = col.last().unwrap().1.clone();
            match pivots[low as usize].take() {
                None => {
                    pivots[low as usize] = Some(col);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    let piv_val = piv.last().unwrap().1.clone();
                    if let Some(q) = C::div_exact(&low_val, &piv_val) {
                        let nq = q.negated()?;
                        col = combine(&C::from_i64(1), &col, &nq, &piv)?;
                        pivots[low as usize] = Some(piv);
                    } else {
                        let (g, s, t) = C::ext_gcd(&piv_val, &low_val)?;
                        let new_piv = combine(&s, &piv, &t, &col)?;
                        let a = C::div_exact(&low_val, &g)?;
                        let b = C::div_exact(&piv_val, &g)?.negated()?;
                        col = combine(&a, &piv, &b, &col)?;
                        debug_assert!(new_piv.last().map(|e| e.0) == Some(low));
                        pivots[low as usize] = Some(new_piv);
                    }
                }
            }
        }
    }
    let mut unit_rows = Vec::new();
    let mut nonunit = Vec::new();
    for (row, p) in pivots.iter().enumerate() {
        if let Some(col) = p {
            if col.last().unwrap().1.is_pm_one() {
                unit_rows.push(row as u32);
            } else {
                nonunit.push(col.clone());
            }
        }
    }
    Some(Reduced {
        rank,
        unit_rows,
        nonunit,
        pivots,
    })
}

/// Invariant factors of the non-unit part of a reduced boundary map.
fn nonunit_factors<C: Coeff>(red: &Reduced<C>) -> Option<Vec<BigInt>> {
    if red.nonunit.is_empty() {
        return Some(Vec::new());
    }
    let is_unit_row = |r: u32| red.unit_rows.binary_search(&r).is_ok();
    let mut residual: Vec<Vec<(u32, BigInt)>> = Vec::new();
    for col in &red.nonunit {
        let mut col: Vec<(u32, BigInt)> = col.iter().map(|(r, v)| (*r, v.to_big())).collect();
        // clear unit-pivot rows from the top down
        while let Some(pos) = col.iter().rposition(|&(r, _)| is_unit_row(r)) {
            let (row, val) = col[pos].clone();
            let piv: Vec<(u32, BigInt)> = red.pivots[row as usize]
                .as_ref()
                .unwrap()
                .iter()
                .map(|(r, v)| (*r, v.to_big()))
                .collect();
            let pv = piv.last().unwrap().1.clone();
            let q = -(&val * &pv);
            col = combine(&BigInt::one(), &col, &q, &piv)?;
        }
        residual.push(col);
    }
    let mut row_ids: Vec<u32> = residual.iter().flatten().map(|e| e.0).collect();
    row_ids.sort_unstable();
    row_ids.dedup();
    if row_ids.len() * residual.len() > DENSE_SNF_LIMIT {
        return None;
    }
    let mut dense = vec![vec![BigInt::zero(); residual.len()]; row_ids.len()];
    for (j, col) in residual.iter().enumerate() {
        for (r, v) in col {
            let i = row_ids.binary_search(r).unwrap();
            dense[i][j] = v.clone();
        }
    }
    Some(smith_diagonal(dense))
}

/// Nonzero invariant factors of a dense integer matrix.
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &m[t][j] * &q;
                    m[i][j] -= v;
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility: fold any entry not divisible by the pivot
                'search: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&m[i][j] % &m[t][t]).is_zero() {
                            for k in t..cols {
                                let v = m[i][k].clone();
                                m[t][k] += v;
                            }
                            dirty = true;
                            break 'search;
                        }
                    }
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

struct Pass {
    ranks: Vec<usize>,
    factors: Vec<Option<Vec<BigInt>>>,
}

fn run<C: Coeff>(c: &TypedComplex) -> Option<Pass> {
    let dim = c.dim();
    if dim < 0 {
        return Some(Pass {
            ranks: Vec::new(),
            factors: Vec::new(),
        });
    }
    let dim = dim as usize;
    let mut ranks = vec![0; dim + 1];
    let mut factors = vec![None; dim + 1];
    let mut clear: Vec<bool> = Vec::new();
    for k in (0..=dim).rev() {
        let red: Reduced<C> = reduce(c, k, &clear)?;
        ranks[k] = red.rank;
        factors[k] = nonunit_factors(&red);
        let rows = if k == 0 { 1 } else { c.count(k as isize - 1) as usize };
        clear = vec![false; rows];
        for &r in &red.unit_rows {
            clear[r as usize] = true;
        }
    }
    Some(Pass { ranks, factors })
}

/// Reduced integral homology of `c`.
pub fn reduced_homology(c: &TypedComplex) -> Homology {
    let pass = run::<i64>(c)
        .or_else(|| run::<BigInt>(c))
        .expect("big-integer reduction cannot overflow");
    let dim = c.dim();
    let f = c.f_vector();
    // rank of the map out of degree k; the map out of degree -1 is zero
    let rank_out = |k: isize| -> u64 {
        if k < 0 || k > dim {
            0
        } else {
            pass.ranks[k as usize] as u64
        }
    };
    let betti_minus_one = 1 - rank_out(0);
    let betti: Vec<u64> = (0..f.len())
        .map(|k| f[k] - rank_out(k as isize) - rank_out(k as isize + 1))
        .collect();
    let mut torsion = Torsion::Free;
    let mut torsion_factors = Vec::new();
    for (k, fac) in pass.factors.iter().enumerate() {
        match fac {
            None => {
                if torsion == Torsion::Free {
                    torsion = Torsion::Unknown;
                }
            }
            Some(list) => {
                for d in list.iter().filter(|d| !d.is_one()) {
                    torsion = Torsion::Present;
                    // the map out of degree k produces torsion in degree k - 1
                    torsion_factors.push((k as isize - 1, d.to_string()));
                }
            }
        }
    }
    Homology {
        betti,
        betti_minus_one,
        torsion,
        torsion_factors,
    }
}
