//! Derivation complexes and their homology.
//!
//! [`DerivationComplex`] covers the three complexes in use: `Der(∧V; d)`,
//! the fibrewise complex `Der_{∧W}(∧W⊗∧V; D)` (only fibre generators are
//! acted on) and its based sub-complex (values in the ideal generated by
//! `∧⁺W`). Homology is computed degreewise by exact elimination.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::Range;
use std::sync::{Arc, Mutex};

use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::gca::{basis_count, Algebra, Differential, Element, Monomial, SullivanModel};
use crate::linalg::{kernel_and_image, Echelon, SparseVec, Subspace, Q};

/// Which monomials a derivation may take as values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetFilter {
    All,
    /// Monomials containing at least one generator from the range.
    Ideal(Range<usize>),
}

impl TargetFilter {
    fn admits(&self, m: &Monomial) -> bool {
        match self {
            TargetFilter::All => true,
            TargetFilter::Ideal(r) => m.word_length_in(r.clone()) > 0,
        }
    }
}

/// Ordered basis `(g, m)` of one degree of a derivation complex.
#[derive(Debug, Default)]
pub struct DegreeBasis {
    elems: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
}

impl DegreeBasis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[(usize, Monomial)] {
        &self.elems
    }

    pub fn position(&self, g: usize, m: &Monomial) -> Option<usize> {
        self.index.get(&(g, m.clone())).copied()
    }
}

pub struct DerivationComplex {
    algebra: Arc<Algebra>,
    d: Differential,
    acted: Vec<usize>,
    filter: TargetFilter,
    bases: Mutex<HashMap<i32, Arc<DegreeBasis>>>,
}

impl std::fmt::Debug for DerivationComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DerivationComplex")
            .field("algebra", &self.algebra)
            .field("acted", &self.acted)
            .field("filter", &self.filter)
            .finish()
    }
}

impl DerivationComplex {
    pub fn new(
        algebra: Arc<Algebra>,
        d: Differential,
        acted: Vec<usize>,
        filter: TargetFilter,
    ) -> Self {
        DerivationComplex {
            algebra,
            d,
            acted,
            filter,
            bases: Mutex::new(HashMap::new()),
        }
    }

    /// `Der(∧V; d)`.
    pub fn of_model(model: &SullivanModel) -> Self {
        let acted = (0..model.algebra.len()).collect();
        Self::new(
            Arc::clone(&model.algebra),
            model.d.clone(),
            acted,
            TargetFilter::All,
        )
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn differential(&self) -> &Differential {
        &self.d
    }

    pub fn acted(&self) -> &[usize] {
        &self.acted
    }

    pub fn filter(&self) -> &TargetFilter {
        &self.filter
    }

    /// Largest degree with a nonzero derivation space.
    pub fn max_degree(&self) -> i32 {
        self.acted
            .iter()
            .map(|&g| self.algebra.degree(g) as i32)
            .max()
            .unwrap_or(0)
    }

    pub fn basis(&self, n: i32) -> Arc<DegreeBasis> {
        if let Some(b) = self.bases.lock().unwrap().get(&n) {
            return Arc::clone(b);
        }
        let mut b = DegreeBasis::default();
        for &g in &self.acted {
            let target = self.algebra.degree(g) as i32 - n;
            if target < 0 {
                continue;
            }
            for m in self.algebra.monomial_basis(target as u32).iter() {
                if self.filter.admits(m) {
                    b.index.insert((g, m.clone()), b.elems.len());
                    b.elems.push((g, m.clone()));
                }
            }
        }
        let b = Arc::new(b);
        self.bases.lock().unwrap().insert(n, Arc::clone(&b));
        b
    }

    pub fn dim(&self, n: i32) -> usize {
        self.basis(n).len()
    }

    pub fn derivation_basis(&self, n: i32) -> Vec<Derivation> {
        self.basis(n)
            .elements()
            .iter()
            .map(|(g, m)| Derivation::elementary(&self.algebra, *g, m.clone()))
            .collect()
    }

    /// Coordinates of `θ` in the degree-`|θ|` basis; fails if `θ` does not
    /// belong to this complex.
    pub fn to_vector(&self, theta: &Derivation) -> Result<SparseVec> {
        let basis = self.basis(theta.degree());
        let mut entries = Vec::new();
        for (g, v) in theta.values().iter().enumerate() {
            for (m, c) in v.terms() {
                match basis.position(g, m) {
                    Some(p) => entries.push((p, c.clone())),
                    None => {
                        return Err(Error::Invalid(format!(
                            "derivation term ({},{}) lies outside the complex",
                            self.algebra.generators()[g].name,
                            self.algebra.format_monomial(m)
                        )))
                    }
                }
            }
        }
        Ok(SparseVec::from_entries(entries))
    }

    pub fn from_vector(&self, n: i32, v: &SparseVec) -> Derivation {
        let basis = self.basis(n);
        let mut values = vec![Element::zero(); self.algebra.len()];
        for (p, c) in v.iter() {
            let (g, m) = &basis.elements()[*p];
            values[*g].add_term(m.clone(), c.clone());
        }
        Derivation::from_parts(n, values)
    }

    pub fn delta(&self, theta: &Derivation) -> Derivation {
        theta.delta(&self.algebra, &self.d)
    }

    pub fn bracket(&self, a: &Derivation, b: &Derivation) -> Derivation {
        a.bracket(&self.algebra, b)
    }

    /// Columns of `δ: Der^n → Der^{n-1}`.
    pub fn delta_columns(&self, n: i32) -> Vec<SparseVec> {
        self.basis(n)
            .elements()
            .iter()
            .map(|(g, m)| {
                let theta = Derivation::elementary(&self.algebra, *g, m.clone());
                self.to_vector(&self.delta(&theta))
                    .expect("complex is closed under δ")
            })
            .collect()
    }

    /// `H_n` with representatives chosen by pivot completion.
    pub fn homology(&self, n: i32) -> HomologySlice {
        let (cycles, _) = kernel_and_image(&self.delta_columns(n));
        let (_, image) = kernel_and_image(&self.delta_columns(n + 1));
        let boundaries: Vec<SparseVec> = image.rows().cloned().collect();
        let mut quotient = Echelon::new();
        for b in &boundaries {
            let _ = quotient.insert(b.clone(), SparseVec::zero());
        }
        let mut reps = Vec::new();
        for z in &cycles {
            if quotient
                .insert(z.clone(), SparseVec::unit(reps.len()))
                .is_ok()
            {
                reps.push(z.clone());
            }
        }
        HomologySlice {
            degree: n,
            chain_dim: self.dim(n),
            cycles,
            boundaries,
            reps,
            quotient,
        }
    }

    /// Homology in every degree from 1 up to the top degree.
    pub fn homology_all(&self) -> Homology {
        self.homology_range(1..=self.max_degree())
    }

    pub fn homology_range(&self, degrees: std::ops::RangeInclusive<i32>) -> Homology {
        let slices = degrees.map(|n| (n, self.homology(n))).collect();
        Homology { slices }
    }

    pub fn rep(&self, slice: &HomologySlice, k: usize) -> Derivation {
        self.from_vector(slice.degree, &slice.reps[k])
    }

    /// Homology coordinates of a cycle. Fails for non-cycles.
    pub fn class_of(&self, h: &Homology, theta: &Derivation) -> Result<SparseVec> {
        let slice = h
            .slice(theta.degree())
            .ok_or_else(|| Error::Invalid(format!("no homology in degree {}", theta.degree())))?;
        let v = self.to_vector(theta)?;
        slice
            .coordinates(&v)
            .ok_or_else(|| Error::Invalid(format!("{} is not a cycle", theta.format(&self.algebra))))
    }

    /// Bracket of two classes in homology coordinates.
    pub fn homology_bracket(
        &self,
        h: &Homology,
        a: (i32, usize),
        b: (i32, usize),
    ) -> Result<SparseVec> {
        let sa = h.slice(a.0).ok_or(Error::Invalid(format!("degree {}", a.0)))?;
        let sb = h.slice(b.0).ok_or(Error::Invalid(format!("degree {}", b.0)))?;
        let ra = self.rep(sa, a.1);
        let rb = self.rep(sb, b.1);
        self.bracket_class(h, &ra, &rb)
    }

    fn bracket_class(&self, h: &Homology, ra: &Derivation, rb: &Derivation) -> Result<SparseVec> {
        let br = self.bracket(ra, rb);
        let n = br.degree();
        match h.slice(n) {
            Some(s) => {
                let v = self.to_vector(&br)?;
                s.coordinates(&v).ok_or_else(|| {
                    Error::InconsistentBracket(format!(
                        "bracket {} is not a cycle",
                        br.format(&self.algebra)
                    ))
                })
            }
            None if br.is_zero() || n > self.max_degree() => Ok(SparseVec::zero()),
            None => Err(Error::Invalid(format!("homology missing degree {n}"))),
        }
    }

    /// All nonzero structure constants `[α_i, α_j]` for `i ≤ j` in the
    /// ordering (degree, index). Each is recomputed with representatives
    /// shifted by boundaries and must agree.
    pub fn bracket_table(&self, h: &Homology) -> Result<BracketTable> {
        let classes = h.class_list();
        let mut entries = Vec::new();
        for (i, &a) in classes.iter().enumerate() {
            for &b in &classes[i..] {
                let value = self.homology_bracket(h, a, b)?;
                let alt = self.bracket_class(h, &self.shifted_rep(h, a), &self.shifted_rep(h, b))?;
                if alt != value {
                    return Err(Error::InconsistentBracket(format!(
                        "[{:?}, {:?}] differs between representative sets",
                        a, b
                    )));
                }
                if !value.is_zero() {
                    entries.push(BracketEntry {
                        left: a,
                        right: b,
                        value,
                    });
                }
            }
        }
        Ok(BracketTable { entries })
    }

    /// Representative plus a deterministic boundary.
    fn shifted_rep(&self, h: &Homology, c: (i32, usize)) -> Derivation {
        let s = h.slice(c.0).unwrap();
        let mut v = s.reps[c.1].clone();
        for (k, b) in s.boundaries.iter().enumerate() {
            v.add_scaled(&Q::from_integer(((k + c.1) % 3 + 1).into()), b);
        }
        self.from_vector(c.0, &v)
    }

    /// Human-readable name of a class representative.
    pub fn class_name(&self, h: &Homology, c: (i32, usize)) -> String {
        self.rep(h.slice(c.0).unwrap(), c.1).format(&self.algebra)
    }

    /// One line `[a, b] = c` per nonzero bracket.
    pub fn format_brackets(&self, h: &Homology, table: &BracketTable) -> String {
        let mut out = String::new();
        for e in &table.entries {
            let n = e.left.0 + e.right.0;
            let terms: Vec<(Q, String)> = e
                .value
                .iter()
                .map(|(k, c)| (c.clone(), self.class_name(h, (n, *k))))
                .collect();
            let _ = writeln!(
                out,
                "[{}, {}] = {}",
                self.class_name(h, e.left),
                self.class_name(h, e.right),
                crate::linalg::fmt_combination(&terms)
            );
        }
        out
    }

    /// Plain-text table: `degree | dimension | representatives`.
    pub fn format_homology(&self, h: &Homology) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "degree | dim | representatives");
        for (n, s) in h.slices.iter().rev() {
            let reps: Vec<String> = (0..s.dim()).map(|k| self.class_name(h, (*n, k))).collect();
            let _ = writeln!(out, "{:>6} | {:>3} | {}", n, s.dim(), reps.join(", "));
        }
        out
    }
}

/// Homology in one degree.
#[derive(Clone, Debug)]
pub struct HomologySlice {
    pub degree: i32,
    pub chain_dim: usize,
    pub cycles: Vec<SparseVec>,
    pub boundaries: Vec<SparseVec>,
    pub reps: Vec<SparseVec>,
    quotient: Echelon,
}

impl HomologySlice {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of `v` modulo boundaries, or `None` if `v` is not in
    /// cycles.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let x = self.quotient.solve(v).ok()?;
        Some(x)
    }

    pub fn is_cycle(&self, v: &SparseVec) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_boundary(&self, v: &SparseVec) -> bool {
        matches!(self.coordinates(v), Some(c) if c.is_zero())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Homology {
    pub slices: BTreeMap<i32, HomologySlice>,
}

impl Homology {
    pub fn slice(&self, n: i32) -> Option<&HomologySlice> {
        self.slices.get(&n)
    }

    pub fn dim(&self, n: i32) -> usize {
        self.slice(n).map_or(0, HomologySlice::dim)
    }

    /// Nonzero dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.slices
            .iter()
            .filter(|(_, s)| s.dim() > 0)
            .map(|(n, s)| (*n, s.dim()))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.slices.values().map(HomologySlice::dim).sum()
    }

    /// Classes as `(degree, index)` in increasing degree.
    pub fn class_list(&self) -> Vec<(i32, usize)> {
        self.slices
            .iter()
            .flat_map(|(n, s)| (0..s.dim()).map(move |k| (*n, k)))
            .collect()
    }

    pub fn top_degree(&self) -> Option<i32> {
        self.dims().keys().next_back().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketEntry {
    pub left: (i32, usize),
    pub right: (i32, usize),
    /// Coordinates in `H_{left.0 + right.0}`.
    pub value: SparseVec,
}

/// Nonzero homology brackets with `left ≤ right`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BracketTable {
    pub entries: Vec<BracketEntry>,
}

impl BracketTable {
    pub fn is_abelian(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A subspace of `H_*` given degreewise in homology coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedSubspace {
    pub parts: BTreeMap<i32, Subspace>,
}

impl GradedSubspace {
    pub fn part(&self, n: i32) -> Option<&Subspace> {
        self.parts.get(&n)
    }

    pub fn dim(&self, n: i32) -> usize {
        self.part(n).map_or(0, Subspace::dim)
    }

    pub fn total_dim(&self) -> usize {
        self.parts.values().map(Subspace::dim).sum()
    }

    pub fn contains(&self, n: i32, v: &SparseVec) -> bool {
        v.is_zero() || self.part(n).is_some_and(|s| s.contains(v))
    }

    /// Degreewise inclusion; both sides must share ambient spaces.
    pub fn is_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.parts.iter().all(|(n, s)| match other.part(*n) {
            Some(o) => s.is_subspace_of(o),
            None => s.dim() == 0,
        })
    }

    pub fn is_proper_subspace_of(&self, other: &GradedSubspace) -> bool {
        self.is_subspace_of(other) && self.total_dim() < other.total_dim()
    }

    /// Drops zero parts so that equal subspaces compare equal.
    pub fn normalized(mut self) -> Self {
        self.parts.retain(|_, s| s.dim() > 0);
        self
    }
}

/// Top-degree check relating `H_*(Der)` to the homotopy of `∧V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiFiniteProfile {
    /// Largest generator degree `N`.
    pub top_generator_degree: u32,
    pub top_homology_degree: Option<i32>,
    pub top_homology_dim: usize,
    /// `dim V^N`.
    pub top_generator_count: usize,
    /// `max π_*(Baut₁)` via `π_{n+1}(Baut₁) ≅ H_n(Der)`.
    pub max_pi_baut: Option<i32>,
}

impl PiFiniteProfile {
    pub fn passes(&self) -> bool {
        self.top_homology_degree == Some(self.top_generator_degree as i32)
            && self.top_homology_dim == self.top_generator_count
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        let n = self.top_generator_degree;
        let _ = writeln!(out, "N (top generator degree) = {n}");
        let _ = writeln!(out, "dim V^N = {}", self.top_generator_count);
        match self.top_homology_degree {
            Some(t) => {
                let _ = writeln!(out, "top H_*(Der) degree = {t}, dim = {}", self.top_homology_dim);
            }
            None => {
                let _ = writeln!(out, "H_*(Der) = 0");
            }
        }
        if let Some(m) = self.max_pi_baut {
            let _ = writeln!(out, "max pi_*(Baut1) = {m} (shift pi_(n+1) = H_n)");
        }
        let _ = writeln!(
            out,
            "top degree equals N: {}",
            if self.top_homology_degree == Some(n as i32) { "pass" } else { "fail" }
        );
        let _ = writeln!(
            out,
            "top dimension equals dim V^N: {}",
            if self.top_homology_dim == self.top_generator_count { "pass" } else { "fail" }
        );
        out
    }
}

pub fn pi_finite_profile(model: &SullivanModel) -> PiFiniteProfile {
    let cx = DerivationComplex::of_model(model);
    let h = cx.homology_all();
    let top = h.top_degree();
    let n = model.top_degree();
    PiFiniteProfile {
        top_generator_degree: n,
        top_homology_degree: top,
        top_homology_dim: top.map_or(0, |t| h.dim(t)),
        top_generator_count: model.algebra.generators_of_degree(n).len(),
        max_pi_baut: top.map(|t| t + 1),
    }
}

/// Dimension of `Der^n` on a free algebra, from generating functions.
pub fn derivation_space_dim(alg: &Algebra, n: i32) -> usize {
    let degrees: Vec<u32> = alg.generators().iter().map(|g| g.degree).collect();
    alg.generators()
        .iter()
        .filter(|g| g.degree as i32 >= n)
        .map(|g| basis_count(&degrees, (g.degree as i32 - n) as u32))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn s3cp2() -> SullivanModel {
        let a = Algebra::from_pairs(&[("x", 2), ("y", 3), ("z", 5)]).unwrap();
        let x3 = a.power(0, 3);
        let d = Differential::new(&a, vec![Element::zero(), Element::zero(), x3]).unwrap();
        SullivanModel::new(a, d)
    }

    #[test]
    fn basis_degree_two_is_zy() {
        let m = s3cp2();
        let cx = DerivationComplex::of_model(&m);
        // x* also has degree 2; only (z,y) survives to homology.
        let names: Vec<String> = cx
            .derivation_basis(2)
            .iter()
            .map(|t| t.format(&m.algebra))
            .collect();
        assert_eq!(names, vec!["x*", "(z,y)"]);
        let five = cx.derivation_basis(5);
        assert_eq!(five.len(), 1);
        assert_eq!(five[0].format(&m.algebra), "z*");
        assert!(cx.derivation_basis(6).is_empty());
    }

    #[test]
    fn s3cp2_homology_table() {
        let m = s3cp2();
        let cx = DerivationComplex::of_model(&m);
        let h = cx.homology_all();
        let dims: Vec<(i32, usize)> = h.dims().into_iter().collect();
        assert_eq!(dims, vec![(1, 1), (2, 1), (3, 2), (5, 1)]);
        let t = cx.bracket_table(&h).unwrap();
        assert!(!t.is_abelian());
    }

    #[test]
    fn h_space_homology_is_everything() {
        let a = Algebra::from_pairs(&[("x", 3), ("y", 5), ("z", 7)]).unwrap();
        let m = SullivanModel::free(a);
        let cx = DerivationComplex::of_model(&m);
        let h = cx.homology_all();
        assert_eq!(h.total_dim(), 6);
        for n in 1..=7 {
            assert_eq!(h.dim(n), cx.dim(n));
        }
        // [x*,(y,x)], [x*,(z,x)], [y*,(z,y)], [(y,x),(z,y)]
        assert_eq!(cx.bracket_table(&h).unwrap().entries.len(), 4);
    }

    #[test]
    fn dimension_formula_matches_basis() {
        let m = s3cp2();
        let cx = DerivationComplex::of_model(&m);
        for n in 0..7 {
            assert_eq!(cx.dim(n), derivation_space_dim(&m.algebra, n));
        }
    }

    #[test]
    fn class_coordinates() {
        let m = s3cp2();
        let cx = DerivationComplex::of_model(&m);
        let h = cx.homology_all();
        let zs = Derivation::dual(&m.algebra, 2).scaled(&q(3));
        let c = cx.class_of(&h, &zs).unwrap();
        assert_eq!(c, SparseVec::unit(0).scaled(&q(3)));
        assert!(cx.class_of(&h, &Derivation::dual(&m.algebra, 0)).is_err());
    }

    #[test]
    fn profile_on_h_space() {
        let a = Algebra::from_pairs(&[("x", 3), ("y", 5), ("z", 7)]).unwrap();
        let p = pi_finite_profile(&SullivanModel::free(a));
        assert!(p.passes());
        assert_eq!(p.top_homology_degree, Some(7));
        assert_eq!(p.max_pi_baut, Some(8));
    }
}
