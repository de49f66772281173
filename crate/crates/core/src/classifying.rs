//! Finite DG Lie algebras, their cochain algebras, and the universal
//! relative model `∧(Z; d∞) → (∧Z⊗∧V; D∞)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::One;

use crate::complex::{BracketTable, DerivationComplex, Homology};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::gca::{Algebra, Differential, Element, Generator, Monomial, SullivanModel};
use crate::linalg::{q_frac, Echelon, SparseVec, Subspace, Q};
use crate::relative::{embed, FibreHomology, RelativeModel};

/// A finite-dimensional connected DG Lie algebra given by structure
/// constants: `[e_i, e_j] = Σ c^k_{ij} e_k` and `∂e_i = Σ ∂^k_i e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDgla {
    names: Vec<String>,
    degrees: Vec<i32>,
    brackets: BTreeMap<(usize, usize), SparseVec>,
    differential: Vec<SparseVec>,
}

impl FiniteDgla {
    /// Checks degrees, graded antisymmetry, Jacobi, `∂² = 0` and that `∂`
    /// is a derivation of the bracket. `brackets` may list either order of
    /// each pair; the other is filled in by antisymmetry.
    pub fn new(
        names: Vec<String>,
        degrees: Vec<i32>,
        brackets: BTreeMap<(usize, usize), SparseVec>,
        differential: Vec<SparseVec>,
    ) -> Result<Self> {
        let l = Self::new_unchecked(names, degrees, brackets, differential)?;
        l.check()?;
        Ok(l)
    }

    /// Fills in antisymmetry but skips the Lie and differential identities.
    pub fn new_unchecked(
        names: Vec<String>,
        degrees: Vec<i32>,
        brackets: BTreeMap<(usize, usize), SparseVec>,
        differential: Vec<SparseVec>,
    ) -> Result<Self> {
        let n = names.len();
        if degrees.len() != n || differential.len() != n {
            return Err(Error::Invalid("structure constant sizes disagree".into()));
        }
        if let Some(i) = degrees.iter().position(|&d| d < 1) {
            return Err(Error::Invalid(format!("{} has degree below 1", names[i])));
        }
        let mut full = BTreeMap::new();
        for ((i, j), v) in brackets {
            if i >= n || j >= n {
                return Err(Error::Invalid("bracket index out of range".into()));
            }
            if v.is_zero() {
                continue;
            }
            let sign = if degrees[i] * degrees[j] % 2 == 0 { -Q::one() } else { Q::one() };
            let swapped = v.scaled(&sign);
            if let Some(prev) = full.get(&(j, i)) {
                if prev != &swapped {
                    return Err(Error::Invalid(format!(
                        "[{}, {}] violates graded antisymmetry",
                        names[i], names[j]
                    )));
                }
            }
            full.insert((j, i), swapped);
            full.insert((i, j), v);
        }
        Ok(FiniteDgla {
            names,
            degrees,
            brackets: full,
            differential,
        })
    }

    /// The homology Lie algebra `H_*(L)` with zero differential.
    pub fn from_homology(cx: &DerivationComplex, h: &Homology, table: &BracketTable) -> Result<Self> {
        let classes = h.class_list();
        let index: HashMap<(i32, usize), usize> =
            classes.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        let names = classes.iter().map(|c| cx.class_name(h, *c)).collect();
        let degrees = classes.iter().map(|c| c.0).collect();
        let mut brackets = BTreeMap::new();
        for e in &table.entries {
            let n = e.left.0 + e.right.0;
            let v = e.value.reindex(|k| index[&(n, k)]);
            brackets.insert((index[&e.left], index[&e.right]), v);
        }
        let differential = vec![SparseVec::zero(); classes.len()];
        Self::new(names, degrees, brackets, differential)
    }

    /// The truncated DG Lie algebra `Der(∧V; d)` in degrees `1..=max`, with
    /// degree one replaced by the δ-cycles and degree `max` taken modulo
    /// `δ(Der_{max+1})`, so that the truncation is a quotient DGLA.
    pub fn from_derivations(cx: &DerivationComplex, max: i32) -> Result<Self> {
        let alg = cx.algebra();
        let mut elems: Vec<Derivation> = Vec::new();
        let mut offsets = BTreeMap::new();
        let mut solvers: BTreeMap<i32, Echelon> = BTreeMap::new();
        for n in 1..=max {
            let dim = cx.dim(n);
            let span: Vec<SparseVec> = if n == 1 {
                crate::linalg::kernel_and_image(&cx.delta_columns(1)).0
            } else {
                (0..dim).map(SparseVec::unit).collect()
            };
            let mut ech = Echelon::new();
            if n == max {
                for b in cx.delta_columns(n + 1) {
                    let _ = ech.insert(b, SparseVec::zero());
                }
            }
            offsets.insert(n, elems.len());
            let mut k = 0;
            for v in span {
                if ech.insert(v.clone(), SparseVec::unit(k)).is_ok() {
                    elems.push(cx.from_vector(n, &v));
                    k += 1;
                }
            }
            solvers.insert(n, ech);
        }
        let coords = |theta: &Derivation| -> Option<SparseVec> {
            let n = theta.degree();
            if n < 1 || n > max {
                return if theta.is_zero() { Some(SparseVec::zero()) } else { None };
            }
            let v = cx.to_vector(theta).ok()?;
            let local = solvers[&n].solve(&v).ok()?;
            let off = offsets[&n];
            Some(local.reindex(|k| k + off))
        };
        let mut brackets = BTreeMap::new();
        for i in 0..elems.len() {
            for j in i..elems.len() {
                let br = elems[i].bracket(alg, &elems[j]);
                if br.is_zero() || br.degree() > max {
                    continue;
                }
                let v = coords(&br).ok_or_else(|| Error::Invalid("bracket outside range".into()))?;
                brackets.insert((i, j), v);
            }
        }
        let differential = elems
            .iter()
            .map(|t| {
                let dt = cx.delta(t);
                if t.degree() == 1 {
                    Ok(SparseVec::zero())
                } else {
                    coords(&dt).ok_or_else(|| Error::Invalid("δ leaves the cycles".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let names = elems.iter().map(|t| t.format(alg)).collect();
        let degrees = elems.iter().map(Derivation::degree).collect();
        Self::new(names, degrees, brackets, differential)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> SparseVec {
        self.brackets.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                if let Some(v) = self.brackets.get(&(*i, *j)) {
                    out.add_scaled(&(ca * cb), v);
                }
            }
        }
        out
    }

    pub fn apply_differential(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (i, c) in a.iter() {
            out.add_scaled(c, &self.differential[*i]);
        }
        out
    }

    fn check(&self) -> Result<()> {
        let n = self.len();
        let sgn = |e: i32| if e.rem_euclid(2) == 0 { Q::one() } else { -Q::one() };
        for i in 0..n {
            if self.degrees[i] % 2 == 0 && !self.bracket_basis(i, i).is_zero() {
                return Err(Error::Invalid(format!(
                    "[{0}, {0}] must vanish in even degree",
                    self.names[i]
                )));
            }
            for (k, _) in self.differential[i].iter() {
                if self.degrees[*k] != self.degrees[i] - 1 {
                    return Err(Error::Invalid(format!("∂{} has wrong degree", self.names[i])));
                }
            }
            let dd = self.apply_differential(&self.differential[i]);
            if !dd.is_zero() {
                return Err(Error::Invalid(format!("∂² ≠ 0 on {}", self.names[i])));
            }
        }
        for (&(i, j), v) in &self.brackets {
            for (k, _) in v.iter() {
                if self.degrees[*k] != self.degrees[i] + self.degrees[j] {
                    return Err(Error::Invalid(format!(
                        "[{}, {}] has wrong degree",
                        self.names[i], self.names[j]
                    )));
                }
            }
        }
        for i in 0..n {
            let ei = SparseVec::unit(i);
            for j in 0..n {
                let ej = SparseVec::unit(j);
                // ∂[a,b] = [∂a,b] + (-1)^{|a|}[a,∂b]
                let lhs = self.apply_differential(&self.bracket_basis(i, j));
                let mut rhs = self.bracket(&self.differential[i], &ej);
                rhs.add_scaled(&sgn(self.degrees[i]), &self.bracket(&ei, &self.differential[j]));
                if lhs != rhs {
                    return Err(Error::Invalid(format!(
                        "∂ is not a derivation on [{}, {}]",
                        self.names[i], self.names[j]
                    )));
                }
                for k in 0..n {
                    let ek = SparseVec::unit(k);
                    // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]
                    let lhs = self.bracket(&ei, &self.bracket_basis(j, k));
                    let mut rhs = self.bracket(&self.bracket_basis(i, j), &ek);
                    rhs.add_scaled(
                        &sgn(self.degrees[i] * self.degrees[j]),
                        &self.bracket(&ej, &self.bracket_basis(i, k)),
                    );
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `C*(L) = ∧(sL; d₀ + d₁)` on generators named `names`, with
    /// `|z_k| = |e_k| + 1` and
    ///
    /// `d(z_k) = -Σ_i (-1)^{|z_i|} ∂^k_i z_i
    ///          - Σ_{i<j} (-1)^{(|z_i|-1)|z_j|} c^k_{ij} z_i z_j
    ///          - ½ Σ_i c^k_{ii} z_i²`.
    ///
    /// With this convention `D(v) = d(v) + Σ z_i θ_i(v)` squares to zero on
    /// linear and quadratic terms when `θ_i` runs over a basis of a sub-DGLA
    /// of derivations.
    pub fn cochains(&self, names: &[String]) -> Result<SullivanModel> {
        let n = self.len();
        if names.len() != n {
            return Err(Error::Invalid("one name per basis element required".into()));
        }
        let gens = (0..n)
            .map(|k| Generator::new(names[k].clone(), (self.degrees[k] + 1) as u32))
            .collect();
        let alg = Algebra::new(gens)?;
        let zdeg = |i: usize| self.degrees[i] + 1;
        let sgn = |e: i32| if e.rem_euclid(2) == 0 { Q::one() } else { -Q::one() };
        let mut values = vec![Element::zero(); n];
        for i in 0..n {
            for (k, c) in self.differential[i].iter() {
                let coeff = -(sgn(zdeg(i)) * c);
                values[*k].add_scaled(&coeff, &alg.gen(i));
            }
        }
        for (&(i, j), v) in &self.brackets {
            if i > j {
                continue;
            }
            let prod = alg.multiply(&alg.gen(i), &alg.gen(j));
            let factor = if i == j {
                -q_frac(1, 2)
            } else {
                -sgn((zdeg(i) - 1) * zdeg(j))
            };
            for (k, c) in v.iter() {
                values[*k].add_scaled(&(c * &factor), &prod);
            }
        }
        let d = Differential::new(&alg, values)?;
        let model = SullivanModel::new(alg, d);
        if let Err(w) = model.check_d_squared() {
            return Err(Error::Invalid(format!(
                "cochain differential squares to {} on {}",
                model.algebra.format(&w.residual),
                model.algebra.generators()[w.generator].name
            )));
        }
        Ok(model)
    }

    /// Cochains with generators `z1, z2, …`, renamed to avoid `avoid`.
    pub fn cochains_default(&self, avoid: &Algebra) -> Result<SullivanModel> {
        self.cochains(&fresh_names("z", self.len(), avoid))
    }
}

fn fresh_names(prefix: &str, count: usize, avoid: &Algebra) -> Vec<String> {
    let mut p = prefix.to_string();
    loop {
        let names: Vec<String> = (1..=count).map(|k| format!("{p}{k}")).collect();
        if names.iter().all(|n| avoid.index_of(n).is_none()) {
            return names;
        }
        p.push('_');
    }
}

/// Output of [`build_universal`].
#[derive(Clone, Debug)]
pub struct UniversalModel {
    pub model: RelativeModel,
    /// `(degree, index)` of the homology class dual to each base generator.
    pub classes: Vec<(i32, usize)>,
    /// Number of correction coefficients solved at each stage.
    pub stages: Vec<(u32, usize)>,
}

/// Builds `∧(Z; d∞) → (∧Z⊗∧V; D∞)` with `∧(Z; d∞)` seeded by the cochains
/// of `H_*(Der(∧V; d))` and corrections solved by increasing Z-word length.
pub fn build_universal(fibre: &SullivanModel) -> Result<UniversalModel> {
    let fh = FibreHomology::new(fibre);
    let table = fh.complex.bracket_table(&fh.homology)?;
    let lie = FiniteDgla::from_homology(&fh.complex, &fh.homology, &table)?;
    let base = lie.cochains_default(&fibre.algebra)?;
    build_over(&fh, base, true)
}

/// Uses `base` as `∧(Z; d∞)`, matching its generators to homology classes in
/// degree order, and solves only for the fibre corrections.
pub fn build_universal_with_base(fibre: &SullivanModel, base: SullivanModel) -> Result<UniversalModel> {
    let fh = FibreHomology::new(fibre);
    build_over(&fh, base, false)
}

fn build_over(fh: &FibreHomology, base: SullivanModel, correct_base: bool) -> Result<UniversalModel> {
    let classes = fh.homology.class_list();
    let fibre = &fh.model;
    let nz = base.algebra.len();
    let mut order: Vec<usize> = (0..nz).collect();
    order.sort_by_key(|&i| (base.algebra.degree(i), i));
    let mut want: Vec<u32> = classes.iter().map(|c| (c.0 + 1) as u32).collect();
    want.sort();
    let have: Vec<u32> = order.iter().map(|&i| base.algebra.degree(i)).collect();
    if want != have {
        return Err(Error::Invalid(format!(
            "base generator degrees {have:?} do not match shifted homology degrees {want:?}"
        )));
    }
    let mut assigned = vec![(0, 0); nz];
    let mut sorted_classes = classes.clone();
    sorted_classes.sort();
    for (k, &i) in order.iter().enumerate() {
        assigned[i] = sorted_classes[k];
    }
    let total = RelativeModel::total_algebra_for(&base, fibre)?;
    let nt = total.len();
    let mut dvals: Vec<Element> = Vec::with_capacity(nt);
    for i in 0..nz {
        dvals.push(embed(base.d.value(i), 0, nt));
    }
    for v in 0..fibre.algebra.len() {
        let mut e = embed(fibre.d.value(v), nz, nt);
        for (i, &(n, k)) in assigned.iter().enumerate().take(nz) {
            let theta = fh.complex.rep(fh.homology.slice(n).unwrap(), k);
            let tv = embed(theta.value(v), nz, nt);
            e.add(&total.multiply(&total.gen(i), &tv));
        }
        dvals.push(e);
    }
    let mut d = Differential::new(&total, dvals)?;
    let zwl = |m: &Monomial| m.word_length_in(0..nz);
    let max_k = (0..nt)
        .map(|g| (total.degree(g) + 2) / 2)
        .max()
        .unwrap_or(0);
    let mut stages = Vec::new();
    for k in 2..=max_k {
        let gen_wl = |g: usize| u32::from(g < nz);
        // residual: order-k part of D² on every generator
        let mut rows: HashMap<(usize, Monomial), usize> = HashMap::new();
        let order_part = |g: usize, e: &Element, rows: &mut HashMap<(usize, Monomial), usize>| {
            let mut entries = Vec::new();
            for (m, c) in e.terms() {
                if zwl(m) == k + gen_wl(g) {
                    let len = rows.len();
                    let r = *rows.entry((g, m.clone())).or_insert(len);
                    entries.push((r, c.clone()));
                }
            }
            SparseVec::from_entries(entries)
        };
        let dd: Vec<Element> = (0..nt).map(|g| d.apply(&total, d.value(g))).collect();
        let mut rhs = SparseVec::zero();
        for (g, e) in dd.iter().enumerate() {
            rhs.add(&order_part(g, e, &mut rows));
        }
        rhs.scale(&-Q::one());
        let mut slots: Vec<(usize, Monomial)> = Vec::new();
        for g in nz..nt {
            for m in total.monomial_basis(total.degree(g) + 1).iter() {
                if zwl(m) == k {
                    slots.push((g, m.clone()));
                }
            }
        }
        if correct_base && k >= 3 {
            for g in 0..nz {
                for m in total.monomial_basis(total.degree(g) + 1).iter() {
                    if zwl(m) == k && m.word_length() == k {
                        slots.push((g, m.clone()));
                    }
                }
            }
        }
        if rhs.is_zero() {
            continue;
        }
        let dder = Derivation::from_differential(&d);
        let mut ech = Echelon::new();
        for (s, (g, m)) in slots.iter().enumerate() {
            let mut vals = vec![Element::zero(); nt];
            vals[*g] = Element::from_monomial(m.clone(), Q::one());
            let es = Derivation::from_parts(-1, vals);
            let comm = dder.bracket(&total, &es);
            let mut col = SparseVec::zero();
            for (h, e) in comm.values().iter().enumerate() {
                col.add(&order_part(h, e, &mut rows));
            }
            let _ = ech.insert(col, SparseVec::unit(s));
        }
        match ech.solve(&rhs) {
            Ok(x) => {
                let mut vals = d.values().to_vec();
                for (s, c) in x.iter() {
                    let (g, m) = &slots[*s];
                    vals[*g].add_term(m.clone(), c.clone());
                }
                d = Differential::new(&total, vals)?;
                stages.push((k, x.nnz()));
            }
            Err(rem) => {
                let inv: HashMap<usize, &(usize, Monomial)> = rows.iter().map(|(k, v)| (*v, k)).collect();
                let mut parts = Vec::new();
                for (r, c) in rem.iter() {
                    let (g, m) = inv[r];
                    parts.push(format!(
                        "{}: {}",
                        total.generators()[*g].name,
                        total.format(&Element::from_monomial(m.clone(), c.clone()))
                    ));
                }
                return Err(Error::Obstruction(format!(
                    "word length {k}: residual {}",
                    parts.join("; ")
                )));
            }
        }
    }
    if let Err(w) = d.check_d_squared(&total) {
        return Err(Error::Obstruction(format!(
            "D² = {} on {}",
            total.format(&w.residual),
            total.generators()[w.generator].name
        )));
    }
    let base_vals = (0..nz)
        .map(|g| {
            d.value(g).map_monomials(|m| Some(Monomial::from_exponents(m.exponents()[..nz].to_vec())))
        })
        .collect();
    let base_alg = (*base.algebra).clone();
    let new_base = SullivanModel::new(base_alg.clone(), Differential::new(&base_alg, base_vals)?);
    let fibre_vals = (nz..nt).map(|g| d.value(g).clone()).collect();
    let model = RelativeModel::new(new_base, fibre.clone(), fibre_vals)?;
    model
        .validate()
        .map_err(|w| Error::Obstruction(w.to_string()))?;
    Ok(UniversalModel {
        model,
        classes: assigned,
        stages,
    })
}

/// Per-degree outcome of [`verify_universal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalityRow {
    pub degree: i32,
    pub homology_dim: usize,
    pub base_generators: usize,
    pub rank: usize,
}

impl UniversalityRow {
    pub fn passes(&self) -> bool {
        self.homology_dim == self.base_generators && self.rank == self.homology_dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalityReport {
    /// Base generators whose coefficient derivation is not a δ-cycle.
    pub non_cycles: Vec<String>,
    pub rows: Vec<UniversalityRow>,
}

impl UniversalityReport {
    pub fn passes(&self) -> bool {
        self.non_cycles.is_empty() && self.rows.iter().all(UniversalityRow::passes)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "degree | dim H | base gens | rank | status");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>6} | {:>5} | {:>9} | {:>4} | {}",
                r.degree,
                r.homology_dim,
                r.base_generators,
                r.rank,
                if r.passes() { "ok" } else { "FAIL" }
            );
        }
        if !self.non_cycles.is_empty() {
            let _ = writeln!(out, "non-cycle coefficients: {}", self.non_cycles.join(", "));
        }
        let _ = writeln!(out, "universal: {}", if self.passes() { "yes" } else { "no" });
        out
    }
}

/// Coefficient derivation `θ_w` of a base generator: `D(v) ∋ w·θ_w(v)`.
pub fn linear_coefficient(rm: &RelativeModel, w: usize) -> Derivation {
    let nz = rm.base_len();
    let fa = &rm.fibre().algebra;
    let values = (0..fa.len())
        .map(|v| {
            rm.fibre_value(v).map_monomials(|m| {
                let e = m.exponents();
                let only_w = e[..nz].iter().enumerate().all(|(i, &x)| if i == w { x == 1 } else { x == 0 });
                only_w.then(|| Monomial::from_exponents(e[nz..].to_vec()))
            })
        })
        .collect();
    let degree = rm.base().algebra.degree(w) as i32 - 1;
    Derivation::new(fa, degree, values).expect("coefficient degrees follow from D")
}

/// Checks that `W^{n+1} → H_n(Der(∧V; d))`, `w ↦ [θ_w]`, is an isomorphism.
pub fn verify_universal(rm: &RelativeModel) -> UniversalityReport {
    let fh = FibreHomology::new(rm.fibre());
    let ba = &rm.base().algebra;
    let mut non_cycles = Vec::new();
    let mut by_degree: BTreeMap<i32, Vec<SparseVec>> = BTreeMap::new();
    for w in 0..ba.len() {
        let theta = linear_coefficient(rm, w);
        let n = theta.degree();
        if n < 1 {
            continue;
        }
        match fh.complex.class_of(&fh.homology, &theta) {
            Ok(c) => by_degree.entry(n).or_default().push(c),
            Err(_) => {
                if theta.degree() <= fh.complex.max_degree() || !theta.is_zero() {
                    non_cycles.push(ba.generators()[w].name.clone());
                }
            }
        }
    }
    let top = fh.complex.max_degree().max(by_degree.keys().copied().max().unwrap_or(0));
    let rows = (1..=top)
        .filter_map(|n| {
            let dim = fh.homology.dim(n);
            let vecs = by_degree.get(&n).cloned().unwrap_or_default();
            let count = ba.generators_of_degree((n + 1) as u32).len();
            if dim == 0 && count == 0 {
                return None;
            }
            let rank = Subspace::span(dim, vecs.iter()).dim();
            Some(UniversalityRow {
                degree: n,
                homology_dim: dim,
                base_generators: count,
                rank,
            })
        })
        .collect();
    UniversalityReport { non_cycles, rows }
}

/// Gottlieb group of the classifying space: the evaluation subgroup of a
/// verified universal model.
pub fn gottlieb_group(rm: &RelativeModel, fh: &FibreHomology) -> Result<crate::complex::GradedSubspace> {
    let report = verify_universal(rm);
    if !report.passes() {
        return Err(Error::Invalid(format!(
            "model is not universal:\n{}",
            report.render()
        )));
    }
    Ok(rm.evaluation_subgroup(fh))
}

/// `dim G_n` of the space modeled by `model`, from the image of
/// `H_n(Der(∧Z; d)) → Hom(Z^n, Q)`. Independent of any fibre.
pub fn model_gottlieb_dims(model: &SullivanModel) -> Result<BTreeMap<i32, usize>> {
    let point = SullivanModel::free(Algebra::new(Vec::new())?);
    let rm = RelativeModel::product(point, model.clone())?;
    Ok(rm
        .yamaguchi_group()
        .parts
        .into_iter()
        .filter(|(_, s)| s.dim() > 0)
        .map(|(n, s)| (n, s.dim()))
        .collect())
}

/// Shift and abelian checks relating the universal relative complex to the
/// derivations of its base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftReport {
    /// `(n, dim H_n(Der_{∧Z}), dim H_{n+1}(Der(∧Z; d∞)))`.
    pub rows: Vec<(i32, usize, usize)>,
    pub relative_abelian: bool,
}

impl ShiftReport {
    pub fn passes(&self) -> bool {
        self.relative_abelian && self.rows.iter().all(|(_, a, b)| a == b)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n | dim H_n(relative) | dim H_(n+1)(Der base)");
        for (n, a, b) in &self.rows {
            let _ = writeln!(out, "{n} | {a} | {b}{}", if a == b { "" } else { "  MISMATCH" });
        }
        let _ = writeln!(
            out,
            "relative brackets vanish: {}",
            if self.relative_abelian { "yes" } else { "no" }
        );
        out
    }
}

pub fn shift_check(um: &RelativeModel) -> Result<ShiftReport> {
    let rel_cx = um.relative_complex();
    let rel_h = rel_cx.homology_range(1..=um.max_degree());
    let base_cx = DerivationComplex::of_model(um.base());
    let top = base_cx.max_degree().max(um.max_degree() + 1);
    let base_h = base_cx.homology_range(1..=top);
    let rows = (1..top)
        .filter_map(|n| {
            let a = rel_h.dim(n);
            let b = base_h.dim(n + 1);
            (a > 0 || b > 0).then_some((n, a, b))
        })
        .collect();
    let relative_abelian = rel_cx.bracket_table(&rel_h)?.is_abelian();
    Ok(ShiftReport {
        rows,
        relative_abelian,
    })
}

/// Renders the base and fibre differentials of a relative model.
pub fn render_relative(rm: &RelativeModel) -> String {
    let mut out = String::new();
    let ba = &rm.base().algebra;
    for (i, g) in ba.generators().iter().enumerate() {
        let _ = writeln!(out, "d {} = {}", g.name, ba.format(rm.base().d.value(i)));
    }
    let t = rm.total();
    for (i, g) in rm.fibre().algebra.generators().iter().enumerate() {
        let _ = writeln!(out, "D {} = {}", g.name, t.format(rm.fibre_value(i)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3cp2() -> SullivanModel {
        let a = Algebra::from_pairs(&[("x", 2), ("y", 3), ("z", 5)]).unwrap();
        let x3 = a.power(0, 3);
        let d = Differential::new(&a, vec![Element::zero(), Element::zero(), x3]).unwrap();
        SullivanModel::new(a, d)
    }

    #[test]
    fn homology_dgla_of_s3cp2() {
        let m = s3cp2();
        let fh = FibreHomology::new(&m);
        let t = fh.complex.bracket_table(&fh.homology).unwrap();
        let l = FiniteDgla::from_homology(&fh.complex, &fh.homology, &t).unwrap();
        assert_eq!(l.degrees(), &[1, 2, 3, 3, 5]);
        let c = l.cochains_default(&m.algebra).unwrap();
        let degs: Vec<u32> = c.algebra.generators().iter().map(|g| g.degree).collect();
        assert_eq!(degs, vec![2, 3, 4, 4, 6]);
    }

    #[test]
    fn cochains_of_truncated_derivations_square_to_zero() {
        let m = s3cp2();
        let cx = DerivationComplex::of_model(&m);
        let l = FiniteDgla::from_derivations(&cx, 5).unwrap();
        assert!(l.cochains(&fresh_names("e", l.len(), &m.algebra)).is_ok());
    }

    #[test]
    fn jacobi_violation_rejected() {
        // [a,a] = c and [a,c] = e force [a,[a,a]] ≠ 0 for odd a
        let names = vec!["a".into(), "c".into(), "e".into()];
        let mut br = BTreeMap::new();
        br.insert((0, 0), SparseVec::unit(1));
        br.insert((0, 1), SparseVec::unit(2));
        let zero = vec![SparseVec::zero(); 3];
        let l = FiniteDgla::new_unchecked(names.clone(), vec![1, 2, 3], br.clone(), zero.clone());
        assert!(l.is_ok());
        let err = FiniteDgla::new(names, vec![1, 2, 3], br, zero).unwrap_err();
        assert!(err.to_string().contains("Jacobi"));
        assert!(l.unwrap().cochains(&["p".into(), "q".into(), "r".into()]).is_err());
    }

    #[test]
    fn universal_s3cp2() {
        let m = s3cp2();
        let um = build_universal(&m).unwrap();
        assert!(um.model.validate().is_ok());
        let rep = verify_universal(&um.model);
        assert!(rep.passes(), "{}", rep.render());
    }

    #[test]
    fn universal_s3() {
        let m = SullivanModel::free(Algebra::from_pairs(&[("x", 3)]).unwrap());
        let um = build_universal(&m).unwrap();
        assert_eq!(um.model.base().algebra.degree(0), 4);
        assert!(verify_universal(&um.model).passes());
    }
}
