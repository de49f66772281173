//! Exact sparse linear algebra over the rationals.
//!
//! Everything here works with [`SparseVec`], a sorted list of nonzero
//! coordinates. [`Echelon`] is an incrementally built row-echelon basis that
//! also remembers, for every stored row, which combination of the inserted
//! vectors produced it. That bookkeeping gives kernels, images and solutions
//! of linear systems from a single elimination pass. [`Subspace`] is the
//! canonical (fully reduced) form used for equality and inclusion tests.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, Q::one())],
        }
    }

    /// Builds a vector from arbitrary `(index, value)` pairs, summing repeats.
    pub fn from_entries<I: IntoIterator<Item = (usize, Q)>>(it: I) -> Self {
        let mut v: Vec<(usize, Q)> = it.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Q)> = Vec::with_capacity(v.len());
        for (i, c) in v {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => entries.push((i, c)),
            }
        }
        entries.retain(|(_, c)| !c.is_zero());
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Q]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Q)> {
        self.entries.iter()
    }

    pub fn get(&self, i: usize) -> Q {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&mut self, c: &Q) {
        if c.is_zero() {
            self.entries.clear();
        } else {
            for (_, v) in &mut self.entries {
                *v *= c;
            }
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Q, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(a.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, v) = b.next().unwrap();
                    out.push((*j, v * c));
                }
                (Some(_), Some(_)) => {
                    let (i, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let s = x + y * c;
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, v) = b.next().unwrap();
                    out.push((*j, v * c));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn add(&mut self, other: &SparseVec) {
        self.add_scaled(&Q::one(), other);
    }

    /// Applies `f` to every index; `f` must be injective.
    pub fn reindex(&self, mut f: impl FnMut(usize) -> usize) -> SparseVec {
        SparseVec::from_entries(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (i, c)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}:{c}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    tag: SparseVec,
}

/// Incremental row-echelon basis with provenance tags.
///
/// Each stored row has leading coefficient one. Its tag records the
/// combination of inserted vectors (by the tag supplied at insertion) that
/// equals the row.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.vec.leading().unwrap().0)
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|r| &r.vec)
    }

    /// Reduces `v` against the stored rows. Returns the remainder and the
    /// accumulated tag, i.e. `tag - sum(c_r * tag_r)` for the subtracted rows.
    pub fn reduce(&self, mut v: SparseVec, mut tag: SparseVec) -> (SparseVec, SparseVec) {
        let mut pos = 0usize;
        loop {
            let hit = v
                .entries
                .iter()
                .find(|(i, _)| *i >= pos && self.pivot_of.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            let Some((i, c)) = hit else { break };
            let row = &self.rows[self.pivot_of[&i]];
            let neg = -c;
            v.add_scaled(&neg, &row.vec);
            tag.add_scaled(&neg, &row.tag);
            pos = i + 1;
        }
        (v, tag)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone(), SparseVec::zero()).0.is_zero()
    }

    /// Inserts `v` with provenance `tag`. Returns `None` if `v` was
    /// dependent, in which case the returned tag combination is a relation:
    /// `Err(relation)` gives the tag of the zero remainder.
    pub fn insert(&mut self, v: SparseVec, tag: SparseVec) -> Result<usize, SparseVec> {
        let (mut r, mut t) = self.reduce(v, tag);
        match r.leading() {
            None => Err(t),
            Some((p, c)) => {
                let inv = c.recip();
                r.scale(&inv);
                t.scale(&inv);
                self.pivot_of.insert(p, self.rows.len());
                self.rows.push(Row { vec: r, tag: t });
                Ok(self.rows.len() - 1)
            }
        }
    }

    /// Expresses `b` as a combination of previously inserted tags, if
    /// possible. On failure returns the nonzero remainder.
    pub fn solve(&self, b: &SparseVec) -> Result<SparseVec, SparseVec> {
        let (r, t) = self.reduce(b.clone(), SparseVec::zero());
        if r.is_zero() {
            let mut x = SparseVec::zero();
            x.add_scaled(&-Q::one(), &t);
            Ok(x)
        } else {
            Err(r)
        }
    }
}

/// Kernel basis and image echelon of the linear map whose `j`-th column is
/// `columns[j]`. Image rows are tagged by column combinations.
pub fn kernel_and_image(columns: &[SparseVec]) -> (Vec<SparseVec>, Echelon) {
    let mut image = Echelon::new();
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if let Err(rel) = image.insert(col.clone(), SparseVec::unit(j)) {
            kernel.push(normalize_leading(rel));
        }
    }
    (kernel, image)
}

/// Scales so that the entry at the largest index is one. Kernel vectors
/// produced by [`kernel_and_image`] have their "new" column there.
fn normalize_leading(mut v: SparseVec) -> SparseVec {
    if let Some((_, c)) = v.entries.last() {
        let inv = c.recip();
        v.scale(&inv);
    }
    v
}

/// A linear subspace of `Q^ambient` in reduced row-echelon form.
///
/// Two subspaces are equal iff their `rows` are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient).map(SparseVec::unit).collect(),
        }
    }

    pub fn span<'a, I: IntoIterator<Item = &'a SparseVec>>(ambient: usize, vectors: I) -> Self {
        let mut ech = Echelon::new();
        for v in vectors {
            debug_assert!(v.max_index().is_none_or(|m| m < ambient));
            let _ = ech.insert(v.clone(), SparseVec::zero());
        }
        Self::from_echelon(ambient, &ech)
    }

    fn from_echelon(ambient: usize, ech: &Echelon) -> Self {
        let mut rows: Vec<SparseVec> = ech.rows().cloned().collect();
        rows.sort_by_key(|r| r.leading().unwrap().0);
        for k in (0..rows.len()).rev() {
            let p = rows[k].leading().unwrap().0;
            let pivot_row = rows[k].clone();
            for other in rows.iter_mut().take(k) {
                let c = other.get(p);
                if !c.is_zero() {
                    other.add_scaled(&-c, &pivot_row);
                }
            }
        }
        Subspace { ambient, rows }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap().0).collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut r = v.clone();
        for row in &self.rows {
            let p = row.leading().unwrap().0;
            let c = r.get(p);
            if !c.is_zero() {
                r.add_scaled(&-c, row);
            }
        }
        r.is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.ambient.max(other.ambient),
            self.rows.iter().chain(other.rows.iter()),
        )
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Formats `c*name` the way reports print linear combinations.
pub fn fmt_combination(terms: &[(Q, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, name)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            out.push_str(&fmt_q(&abs));
            out.push('*');
        }
        out.push_str(name);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[i64]) -> SparseVec {
        SparseVec::from_dense(&v.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    #[test]
    fn add_scaled_cancels() {
        let mut a = sv(&[1, 2, 0, 3]);
        a.add_scaled(&q(-1), &sv(&[1, 2, 0, 3]));
        assert!(a.is_zero());
        let mut b = sv(&[0, 1]);
        b.add_scaled(&q(2), &sv(&[1, 0, 1]));
        assert_eq!(b, sv(&[2, 1, 2]));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        // columns (1,1), (2,2), (0,1)
        let cols = vec![sv(&[1, 1]), sv(&[2, 2]), sv(&[0, 1])];
        let (ker, img) = kernel_and_image(&cols);
        assert_eq!(img.rank(), 2);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], sv(&[-2, 1, 0]));
    }

    #[test]
    fn solve_reports_inconsistency() {
        let cols = vec![sv(&[1, 0, 1]), sv(&[0, 1, 1])];
        let (_, img) = kernel_and_image(&cols);
        let x = img.solve(&sv(&[2, 3, 5])).unwrap();
        assert_eq!(x, sv(&[2, 3]));
        assert!(img.solve(&sv(&[0, 0, 1])).is_err());
    }

    #[test]
    fn subspace_canonical_form() {
        let a = Subspace::span(3, &[sv(&[1, 1, 0]), sv(&[0, 1, 1])]);
        let b = Subspace::span(3, &[sv(&[1, 2, 1]), sv(&[1, 0, -1])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert!(a.contains(&sv(&[1, 0, -1])));
        assert!(!a.contains(&sv(&[1, 0, 0])));
        assert!(Subspace::zero(3).is_subspace_of(&a));
    }

    #[test]
    fn combination_formatting() {
        let s = fmt_combination(&[(q(1), "a".into()), (q_frac(-1, 2), "b".into())]);
        assert_eq!(s, "a - 1/2*b");
        assert_eq!(fmt_combination(&[(q(-2), "x".into())]), "-2*x");
    }
}
