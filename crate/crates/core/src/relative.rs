//! Relative Sullivan models `∧(W; d̂) → (∧W⊗∧V; D)`.
//!
//! The total algebra lists the base generators first, then the fibre
//! generators, so `P: ∧W⊗∧V → ∧V` kills every monomial with a nonzero
//! exponent in the first `|W|` slots.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::{DerivationComplex, GradedSubspace, Homology, TargetFilter};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::gca::{Algebra, Differential, Element, Generator, Monomial, SullivanModel};
use crate::linalg::{Echelon, SparseVec, Subspace, Q};

/// `Der(∧V; d)` together with its homology, shared by all relative models
/// over one fibre.
#[derive(Debug)]
pub struct FibreHomology {
    pub model: SullivanModel,
    pub complex: DerivationComplex,
    pub homology: Homology,
}

impl FibreHomology {
    pub fn new(model: &SullivanModel) -> Self {
        let complex = DerivationComplex::of_model(model);
        let homology = complex.homology_all();
        FibreHomology {
            model: model.clone(),
            complex,
            homology,
        }
    }

    /// Display names of the representatives, e.g. `z*`, `(z,x)`.
    pub fn class_names(&self) -> BTreeMap<(i32, usize), String> {
        self.homology
            .class_list()
            .into_iter()
            .map(|c| (c, self.complex.class_name(&self.homology, c)))
            .collect()
    }

    /// Names of the basis classes lying in `g`. Meaningful when `g` is
    /// spanned by basis classes, as for coordinate families.
    pub fn member_classes(&self, g: &GradedSubspace) -> Vec<String> {
        let mut out = Vec::new();
        for c in self.homology.class_list().into_iter().rev() {
            if g.contains(c.0, &SparseVec::unit(c.1)) {
                out.push(self.complex.class_name(&self.homology, c));
            }
        }
        out
    }

    /// The full graded homology as a subspace.
    pub fn everything(&self) -> GradedSubspace {
        GradedSubspace {
            parts: self
                .homology
                .slices
                .iter()
                .filter(|(_, s)| s.dim() > 0)
                .map(|(n, s)| (*n, Subspace::full(s.dim())))
                .collect(),
        }
    }
}

/// First invariant that fails in [`RelativeModel::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationWitness {
    pub generator: String,
    pub reason: &'static str,
    pub residual: String,
}

impl std::fmt::Display for ValidationWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} (residual {})", self.generator, self.reason, self.residual)
    }
}

#[derive(Clone, Debug)]
pub enum ExtensionOutcome {
    /// A cycle of the relative complex projecting to the input.
    Extends(Derivation),
    /// Remainder of `-δθ_lift` modulo `δ(based)`: nonzero, so no extension.
    Obstructed(Derivation),
}

impl ExtensionOutcome {
    pub fn extends(&self) -> bool {
        matches!(self, ExtensionOutcome::Extends(_))
    }
}

/// Which proof recipe to use in [`RelativeModel::killer_model`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KillerMode {
    /// `θ(x) ≠ 0` with `|x| < N`: `D(v) = w·x` for a top generator `v`.
    LowGenerator,
    /// `θ(x)` involves a generator `y`: `D(y) = w` with `|w| = |y| + 1`.
    AppearingGenerator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeModel {
    base: SullivanModel,
    fibre: SullivanModel,
    total: Arc<Algebra>,
    d: Differential,
}

impl RelativeModel {
    /// `fibre_values[i]` is `D(v_i)` in the total algebra
    /// (see [`RelativeModel::total_algebra_for`]).
    pub fn new(
        base: SullivanModel,
        fibre: SullivanModel,
        fibre_values: Vec<Element>,
    ) -> Result<Self> {
        let total = Self::total_algebra_for(&base, &fibre)?;
        if fibre_values.len() != fibre.algebra.len() {
            return Err(Error::AlgebraMismatch);
        }
        let nw = base.algebra.len();
        let mut values = Vec::with_capacity(total.len());
        for i in 0..nw {
            values.push(embed(base.d.value(i), 0, total.len()));
        }
        values.extend(fibre_values);
        let d = Differential::new(&total, values)?;
        Ok(RelativeModel {
            base,
            fibre,
            total: Arc::new(total),
            d,
        })
    }

    /// `D = d̂ ⊗ 1 + 1 ⊗ d`.
    pub fn product(base: SullivanModel, fibre: SullivanModel) -> Result<Self> {
        let nw = base.algebra.len();
        let n = nw + fibre.algebra.len();
        let values = fibre.d.values().iter().map(|v| embed(v, nw, n)).collect();
        Self::new(base, fibre, values)
    }

    pub fn total_algebra_for(base: &SullivanModel, fibre: &SullivanModel) -> Result<Algebra> {
        let gens = base
            .algebra
            .generators()
            .iter()
            .chain(fibre.algebra.generators())
            .cloned()
            .collect();
        Algebra::new(gens)
    }

    pub fn base(&self) -> &SullivanModel {
        &self.base
    }

    pub fn fibre(&self) -> &SullivanModel {
        &self.fibre
    }

    pub fn total(&self) -> &Algebra {
        &self.total
    }

    pub fn total_arc(&self) -> &Arc<Algebra> {
        &self.total
    }

    pub fn differential(&self) -> &Differential {
        &self.d
    }

    pub fn base_len(&self) -> usize {
        self.base.algebra.len()
    }

    /// Total-algebra index of fibre generator `i`.
    pub fn fibre_index(&self, i: usize) -> usize {
        self.base_len() + i
    }

    pub fn fibre_indices(&self) -> Vec<usize> {
        (self.base_len()..self.total.len()).collect()
    }

    /// `D(v_i)`.
    pub fn fibre_value(&self, i: usize) -> &Element {
        self.d.value(self.fibre_index(i))
    }

    pub fn embed_base(&self, a: &Element) -> Element {
        embed(a, 0, self.total.len())
    }

    pub fn embed_fibre(&self, a: &Element) -> Element {
        embed(a, self.base_len(), self.total.len())
    }

    /// `P: ∧W⊗∧V → ∧V`.
    pub fn project(&self, a: &Element) -> Element {
        let nw = self.base_len();
        a.map_monomials(|m| {
            let e = m.exponents();
            if e[..nw].iter().any(|&x| x > 0) {
                None
            } else {
                Some(Monomial::from_exponents(e[nw..].to_vec()))
            }
        })
    }

    /// Checks `D(w) = d̂(w)`, `D(v) - d(v) ∈ ∧⁺W·(∧W⊗∧V)` and `D² = 0`.
    pub fn validate(&self) -> std::result::Result<(), ValidationWitness> {
        let nw = self.base_len();
        for i in 0..nw {
            let want = self.embed_base(self.base.d.value(i));
            if self.d.value(i) != &want {
                let mut r = self.d.value(i).clone();
                r.sub(&want);
                return Err(ValidationWitness {
                    generator: self.total.generators()[i].name.clone(),
                    reason: "D differs from the base differential",
                    residual: self.total.format(&r),
                });
            }
        }
        for i in 0..self.fibre.algebra.len() {
            let mut r = self.project(self.fibre_value(i));
            r.sub(self.fibre.d.value(i));
            if !r.is_zero() {
                return Err(ValidationWitness {
                    generator: self.fibre.algebra.generators()[i].name.clone(),
                    reason: "D - d is not in the base ideal",
                    residual: self.fibre.algebra.format(&r),
                });
            }
        }
        self.d
            .check_d_squared(&self.total)
            .map_err(|w| ValidationWitness {
                generator: self.total.generators()[w.generator].name.clone(),
                reason: "D^2 is not zero",
                residual: self.total.format(&w.residual),
            })
    }

    /// `Der_{∧W}(∧W⊗∧V; D)`.
    pub fn relative_complex(&self) -> DerivationComplex {
        DerivationComplex::new(
            Arc::clone(&self.total),
            self.d.clone(),
            self.fibre_indices(),
            TargetFilter::All,
        )
    }

    /// Sub-complex with values in `∧⁺W·(∧W⊗∧V)`.
    pub fn based_complex(&self) -> DerivationComplex {
        DerivationComplex::new(
            Arc::clone(&self.total),
            self.d.clone(),
            self.fibre_indices(),
            TargetFilter::Ideal(0..self.base_len()),
        )
    }

    pub fn fibre_complex(&self) -> DerivationComplex {
        DerivationComplex::of_model(&self.fibre)
    }

    pub fn max_degree(&self) -> i32 {
        self.fibre.algebra.max_degree() as i32
    }

    pub fn rel_homology(&self) -> Homology {
        self.relative_complex().homology_range(1..=self.max_degree())
    }

    pub fn based_homology(&self) -> Homology {
        self.based_complex().homology_range(1..=self.max_degree())
    }

    /// `P_*(θ) = P ∘ θ`, as a derivation of `∧V`.
    pub fn p_star(&self, theta: &Derivation) -> Derivation {
        let values = (0..self.fibre.algebra.len())
            .map(|i| self.project(theta.value(self.fibre_index(i))))
            .collect();
        Derivation::new(&self.fibre.algebra, theta.degree(), values)
            .expect("projection preserves degrees")
    }

    /// Extends a fibre derivation by zero on `W`.
    pub fn lift(&self, theta: &Derivation) -> Derivation {
        let mut values = vec![Element::zero(); self.total.len()];
        for i in 0..self.fibre.algebra.len() {
            values[self.fibre_index(i)] = self.embed_fibre(theta.value(i));
        }
        Derivation::new(&self.total, theta.degree(), values).expect("lift preserves degrees")
    }

    /// Image of `H(P_*)` in fibre homology coordinates.
    pub fn evaluation_subgroup(&self, fibre: &FibreHomology) -> GradedSubspace {
        let cx = self.relative_complex();
        let mut parts = BTreeMap::new();
        for n in 1..=self.max_degree() {
            let ambient = fibre.homology.dim(n);
            if ambient == 0 {
                continue;
            }
            let slice = cx.homology(n);
            let images: Vec<SparseVec> = (0..slice.dim())
                .map(|k| {
                    let p = self.p_star(&cx.rep(&slice, k));
                    fibre
                        .complex
                        .class_of(&fibre.homology, &p)
                        .expect("P_* is a chain map")
                })
                .collect();
            parts.insert(n, Subspace::span(ambient, images.iter()));
        }
        GradedSubspace { parts }
    }

    /// Image of `ε* ∘ H(P_*)` in `Hom(V^n, Q)`, coordinates ordered like
    /// the degree-`n` fibre generators.
    pub fn yamaguchi_group(&self) -> GradedSubspace {
        let cx = self.relative_complex();
        let fa = &self.fibre.algebra;
        let mut parts = BTreeMap::new();
        for n in 1..=self.max_degree() {
            let gens = fa.generators_of_degree(n as u32);
            if gens.is_empty() {
                continue;
            }
            let slice = cx.homology(n);
            let rows: Vec<SparseVec> = (0..slice.dim())
                .map(|k| {
                    let p = self.p_star(&cx.rep(&slice, k));
                    SparseVec::from_entries(
                        gens.iter()
                            .enumerate()
                            .map(|(j, &g)| (j, p.value(g).augment())),
                    )
                })
                .collect();
            parts.insert(n, Subspace::span(gens.len(), rows.iter()));
        }
        GradedSubspace { parts }
    }

    /// Decides whether a cycle `θ` of `Der(∧V; d)` extends to a cycle `θ̂`
    /// of the relative complex with `P_*(θ̂) = θ`.
    pub fn extension_probe(&self, theta: &Derivation) -> Result<ExtensionOutcome> {
        let fibre_cx = self.fibre_complex();
        if !fibre_cx.delta(theta).is_zero() {
            return Err(Error::Invalid(format!(
                "{} is not a cycle",
                theta.format(&self.fibre.algebra)
            )));
        }
        let n = theta.degree();
        let lift = self.lift(theta);
        let based = self.based_complex();
        let target = lift.delta(&self.total, &self.d);
        let rhs = based
            .to_vector(&target)
            .expect("δ of a lift of a cycle is based")
            .scaled(&-Q::one());
        let mut ech = Echelon::new();
        for (j, col) in based.delta_columns(n).into_iter().enumerate() {
            let _ = ech.insert(col, SparseVec::unit(j));
        }
        match ech.solve(&rhs) {
            Ok(x) => {
                let beta = based.from_vector(n, &x);
                let mut out = lift;
                out.add_scaled(&Q::one(), &beta);
                Ok(ExtensionOutcome::Extends(out))
            }
            Err(rem) => Ok(ExtensionOutcome::Obstructed(based.from_vector(n - 1, &rem))),
        }
    }

    /// Pullback along `f*: ∧W → ∧W'` given by generator images in the new
    /// base; `f*` must commute with the differentials.
    pub fn pullback(&self, new_base: SullivanModel, images: &[Element]) -> Result<RelativeModel> {
        let nw = self.base_len();
        if images.len() != nw {
            return Err(Error::AlgebraMismatch);
        }
        let nb = &new_base.algebra;
        for (i, img) in images.iter().enumerate() {
            let lhs = new_base.apply_d(img);
            let rhs = substitute(nb, images, self.base.d.value(i), 0);
            if lhs != rhs {
                return Err(Error::Invalid(format!(
                    "base map does not commute with differentials on {}",
                    self.total.generators()[i].name
                )));
            }
        }
        let target = Self::total_algebra_for(&new_base, &self.fibre)?;
        let nv = self.fibre.algebra.len();
        let shift = nb.len();
        let mut full_images: Vec<Element> = images.iter().map(|e| embed(e, 0, target.len())).collect();
        for i in 0..nv {
            full_images.push(target.gen(shift + i));
        }
        let values = (0..nv)
            .map(|i| substitute(&target, &full_images, self.fibre_value(i), 0))
            .collect();
        RelativeModel::new(new_base, self.fibre.clone(), values)
    }

    /// Product fibration `ξ × ξ'` over `B × B'` with fibre `X × X'`.
    /// Generators of the second factor get `suffix` appended.
    pub fn fibre_product(&self, other: &RelativeModel, suffix: &str) -> Result<RelativeModel> {
        let base = tensor_models(&self.base, &other.base, suffix)?;
        let fibre = tensor_models(&self.fibre, &other.fibre, suffix)?;
        let (nw, nw2) = (self.base_len(), other.base_len());
        let (nv, nv2) = (self.fibre.algebra.len(), other.fibre.algebra.len());
        let len = nw + nw2 + nv + nv2;
        let first: Vec<usize> = (0..nw).chain(nw + nw2..nw + nw2 + nv).collect();
        let second: Vec<usize> = (nw..nw + nw2).chain(nw + nw2 + nv..len).collect();
        let mut values: Vec<Element> = (0..nv)
            .map(|i| reindex(self.fibre_value(i), &first, len))
            .collect();
        values.extend((0..nv2).map(|i| reindex(other.fibre_value(i), &second, len)));
        RelativeModel::new(base, fibre, values)
    }

    /// One-generator base relative model along which `θ` fails to extend,
    /// following the H-space recipes.
    pub fn killer_model(
        fibre: &SullivanModel,
        theta: &Derivation,
        mode: KillerMode,
    ) -> Result<RelativeModel> {
        let fa = &fibre.algebra;
        let top = fa.max_degree();
        match mode {
            KillerMode::LowGenerator => {
                let x = (0..fa.len())
                    .find(|&i| fa.degree(i) < top && !theta.value(i).is_zero())
                    .ok_or_else(|| {
                        Error::HypothesesUnmet(
                            "θ vanishes on generators below the top degree".into(),
                        )
                    })?;
                let v = fa.generators_of_degree(top)[0];
                let w_deg = top - fa.degree(x) + 1;
                let base = killer_base(fibre, w_deg)?;
                let total = Self::total_algebra_for(&base, fibre)?;
                let mut values: Vec<Element> =
                    fibre.d.values().iter().map(|e| embed(e, 1, total.len())).collect();
                let wx = total.multiply(&total.gen(0), &total.gen(1 + x));
                values[v].add(&wx);
                let rm = RelativeModel::new(base, fibre.clone(), values)?;
                rm.validate().map_err(|w| Error::Invalid(w.to_string()))?;
                Ok(rm)
            }
            KillerMode::AppearingGenerator => {
                let y = (0..fa.len())
                    .flat_map(|i| theta.value(i).terms().map(|(m, _)| m.clone()).collect::<Vec<_>>())
                    .find_map(|m| m.exponents().iter().position(|&e| e > 0))
                    .ok_or_else(|| {
                        Error::HypothesesUnmet(
                            "θ takes only constant values; no generator appears in it".into(),
                        )
                    })?;
                let base = killer_base(fibre, fa.degree(y) + 1)?;
                let total = Self::total_algebra_for(&base, fibre)?;
                let mut values: Vec<Element> =
                    fibre.d.values().iter().map(|e| embed(e, 1, total.len())).collect();
                values[y].add(&total.gen(0));
                let rm = RelativeModel::new(base, fibre.clone(), values)?;
                rm.validate().map_err(|w| Error::Invalid(w.to_string()))?;
                Ok(rm)
            }
        }
    }

    /// Tries [`KillerMode::LowGenerator`] and then
    /// [`KillerMode::AppearingGenerator`].
    pub fn killer_model_auto(fibre: &SullivanModel, theta: &Derivation) -> Result<RelativeModel> {
        match Self::killer_model(fibre, theta, KillerMode::LowGenerator) {
            Ok(rm) => Ok(rm),
            Err(Error::HypothesesUnmet(_)) => {
                Self::killer_model(fibre, theta, KillerMode::AppearingGenerator)
            }
            Err(e) => Err(e),
        }
    }

    /// Degreewise long-exact-sequence consistency for
    /// `0 → based → relative → Der(∧V) → 0`:
    /// `dim H_n(rel) = dim H_n(based) - dim H_{n+1}(fibre) + r_{n+1} + r_n`
    /// with `r_k` the rank of `H(P_*)` in degree `k`.
    pub fn les_check(&self, fibre: &FibreHomology) -> Vec<LesRow> {
        let rel = self.rel_homology();
        let based = self.based_homology();
        let ev = self.evaluation_subgroup(fibre);
        (1..=self.max_degree())
            .map(|n| {
                let predicted = based.dim(n) as i64 - fibre.homology.dim(n + 1) as i64
                    + ev.dim(n + 1) as i64
                    + ev.dim(n) as i64;
                LesRow {
                    degree: n,
                    relative: rel.dim(n),
                    based: based.dim(n),
                    fibre: fibre.homology.dim(n),
                    rank: ev.dim(n),
                    predicted,
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesRow {
    pub degree: i32,
    pub relative: usize,
    pub based: usize,
    pub fibre: usize,
    pub rank: usize,
    pub predicted: i64,
}

impl LesRow {
    pub fn holds(&self) -> bool {
        self.predicted == self.relative as i64
    }
}

fn killer_base(fibre: &SullivanModel, degree: u32) -> Result<SullivanModel> {
    let mut name = String::from("w");
    while fibre.algebra.index_of(&name).is_some() {
        name.push('_');
    }
    Ok(SullivanModel::free(Algebra::from_pairs(&[(&name, degree)])?))
}

/// Shifts an element into an algebra of `len` generators, placing its
/// generators at `offset..`.
pub fn embed(a: &Element, offset: usize, len: usize) -> Element {
    a.map_monomials(|m| {
        let mut e = vec![0u16; len];
        e[offset..offset + m.len()].copy_from_slice(m.exponents());
        Some(Monomial::from_exponents(e))
    })
}

/// `A ⊗ B`, renaming the generators of `b` with `suffix`.
pub fn tensor_models(a: &SullivanModel, b: &SullivanModel, suffix: &str) -> Result<SullivanModel> {
    let mut gens = a.algebra.generators().to_vec();
    gens.extend(
        b.algebra
            .generators()
            .iter()
            .map(|g| Generator::new(format!("{}{suffix}", g.name), g.degree)),
    );
    let alg = Algebra::new(gens)?;
    let (na, len) = (a.algebra.len(), alg.len());
    let values = a
        .d
        .values()
        .iter()
        .map(|v| embed(v, 0, len))
        .chain(b.d.values().iter().map(|v| embed(v, na, len)))
        .collect();
    let d = Differential::new(&alg, values)?;
    Ok(SullivanModel::new(alg, d))
}

/// Moves generator `i` to `map[i]`; `map` must be increasing so no signs
/// arise.
fn reindex(a: &Element, map: &[usize], len: usize) -> Element {
    a.map_monomials(|m| {
        let mut e = vec![0u16; len];
        for (i, &x) in m.exponents().iter().enumerate() {
            e[map[i]] = x;
        }
        Some(Monomial::from_exponents(e))
    })
}

/// Applies the algebra map sending generator `offset + i` to `images[i]`.
fn substitute(target: &Algebra, images: &[Element], a: &Element, offset: usize) -> Element {
    let mut out = Element::zero();
    for (m, c) in a.terms() {
        let mut acc = target.one();
        for (i, &e) in m.exponents()[offset..].iter().enumerate() {
            for _ in 0..e {
                acc = target.multiply(&acc, &images[i]);
            }
        }
        if !c.is_zero() {
            out.add_scaled(c, &acc);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h_space() -> SullivanModel {
        SullivanModel::free(Algebra::from_pairs(&[("x", 3), ("y", 5), ("z", 7)]).unwrap())
    }

    #[test]
    fn product_model_is_valid_and_everything_extends() {
        let base = SullivanModel::free(Algebra::from_pairs(&[("a", 4)]).unwrap());
        let fibre = h_space();
        let rm = RelativeModel::product(base, fibre.clone()).unwrap();
        assert!(rm.validate().is_ok());
        let fh = FibreHomology::new(&fibre);
        assert_eq!(rm.evaluation_subgroup(&fh), fh.everything());
        for th in fh.complex.derivation_basis(2) {
            assert!(rm.extension_probe(&th).unwrap().extends());
        }
    }

    #[test]
    fn killer_models_obstruct() {
        let fibre = h_space();
        let a = &fibre.algebra;
        let xs = Derivation::dual(a, 0);
        let rm = RelativeModel::killer_model(&fibre, &xs, KillerMode::LowGenerator).unwrap();
        assert_eq!(rm.base().algebra.degree(0), 5);
        assert!(!rm.extension_probe(&xs).unwrap().extends());
        let zs = Derivation::dual(a, 2);
        assert!(matches!(
            RelativeModel::killer_model_auto(&fibre, &zs),
            Err(Error::HypothesesUnmet(_))
        ));
    }

    #[test]
    fn projection_kills_base_terms() {
        let base = SullivanModel::free(Algebra::from_pairs(&[("b", 4)]).unwrap());
        let fibre = h_space();
        let rm = RelativeModel::product(base, fibre).unwrap();
        let t = rm.total();
        let mut e = t.multiply(&t.gen(0), &t.gen(1));
        e.add(&t.gen(2));
        assert_eq!(rm.project(&e), rm.fibre().algebra.gen(1));
    }

    #[test]
    fn validate_rejects_fibre_mismatch() {
        let base = SullivanModel::free(Algebra::from_pairs(&[("b", 4)]).unwrap());
        let fibre = SullivanModel::free(Algebra::from_pairs(&[("x", 3), ("y", 4)]).unwrap());
        let t = RelativeModel::total_algebra_for(&base, &fibre).unwrap();
        // D(y) = x·? no; D(x) = y has no base factor
        let values = vec![t.gen(2), Element::zero()];
        let rm = RelativeModel::new(base, fibre, values).unwrap();
        let w = rm.validate().unwrap_err();
        assert_eq!(w.generator, "x");
    }
}
