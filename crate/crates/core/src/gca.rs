//! Free graded-commutative algebras over Q.
//!
//! An [`Algebra`] is `∧U` on an ordered list of generators. Monomials are
//! exponent vectors in that order, so a canonical monomial is
//! `g_0^{e_0} g_1^{e_1} ...`. Multiplying two canonical monomials moves odd
//! factors past each other and collects one `-1` per odd/odd transposition.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{fmt_q, q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Exponent vector in generator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len].into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn generator(len: usize, i: usize) -> Self {
        let mut e = vec![0; len];
        e[i] = 1;
        Monomial::from_exponents(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Number of generator factors counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Word length restricted to generators `range`.
    pub fn word_length_in(&self, range: std::ops::Range<usize>) -> u32 {
        self.0[range].iter().map(|&e| e as u32).sum()
    }
}

/// Homogeneous or inhomogeneous element: a finite map monomial -> coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, Q>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_monomial(m: Monomial, c: Q) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &Element) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn add(&mut self, other: &Element) {
        self.add_scaled(&Q::one(), other);
    }

    pub fn sub(&mut self, other: &Element) {
        self.add_scaled(&-Q::one(), other);
    }

    pub fn scaled(&self, c: &Q) -> Element {
        let mut out = Element::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn negated(&self) -> Element {
        self.scaled(&-Q::one())
    }

    /// Coefficient of the unit monomial.
    pub fn augment(&self) -> Q {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    /// True iff every monomial has word length at least two.
    pub fn is_decomposable(&self) -> bool {
        self.terms.keys().all(|m| m.word_length() >= 2)
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a monomial map (e.g. reindexing into a larger algebra).
    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> Option<Monomial>) -> Element {
        let mut out = Element::zero();
        for (m, c) in &self.terms {
            if let Some(m2) = f(m) {
                out.add_term(m2, c.clone());
            }
        }
        out
    }
}

impl FromIterator<(Monomial, Q)> for Element {
    fn from_iter<T: IntoIterator<Item = (Monomial, Q)>>(iter: T) -> Self {
        let mut e = Element::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

/// The free graded-commutative algebra on an ordered set of generators.
pub struct Algebra {
    gens: Vec<Generator>,
    index: HashMap<String, usize>,
    basis_cache: Mutex<HashMap<u32, Arc<Vec<Monomial>>>>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra {
            gens: self.gens.clone(),
            index: self.index.clone(),
            basis_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra").field("gens", &self.gens).finish()
    }
}

impl Algebra {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if g.degree < 2 {
                return Err(Error::LowDegree {
                    name: g.name.clone(),
                    degree: g.degree,
                });
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Algebra {
            gens,
            index,
            basis_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Shorthand for tests and fixtures: `[("x", 2), ("y", 3)]`.
    pub fn from_pairs(pairs: &[(&str, u32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|(n, d)| Generator::new(*n, *d)).collect())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.gens[i].degree
    }

    pub fn max_degree(&self) -> u32 {
        self.gens.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// Generator indices of degree `n`.
    pub fn generators_of_degree(&self, n: u32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == n).collect()
    }

    pub fn one(&self) -> Element {
        Element::from_monomial(Monomial::one(self.len()), Q::one())
    }

    pub fn scalar(&self, c: Q) -> Element {
        Element::from_monomial(Monomial::one(self.len()), c)
    }

    pub fn gen(&self, i: usize) -> Element {
        Element::from_monomial(Monomial::generator(self.len(), i), Q::one())
    }

    pub fn gen_named(&self, name: &str) -> Result<Element> {
        self.index_of(name)
            .map(|i| self.gen(i))
            .ok_or_else(|| Error::UnknownGenerator(name.into()))
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.exponents()
            .iter()
            .zip(&self.gens)
            .map(|(&e, g)| e as u32 * g.degree)
            .sum()
    }

    fn check_monomial(&self, m: &Monomial) -> Result<()> {
        if m.len() != self.len() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Degree of a homogeneous element; `None` for zero.
    pub fn degree_of(&self, a: &Element) -> Result<Option<u32>> {
        let mut deg = None;
        for (m, _) in a.terms() {
            self.check_monomial(m)?;
            let d = self.monomial_degree(m);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::Inhomogeneous(self.format(a)));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Product of canonical monomials with its Koszul sign, or `None` when an
    /// odd generator would appear squared.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let ea = a.exponents();
        let eb = b.exponents();
        let mut out = Vec::with_capacity(ea.len());
        // odd factors of `a` strictly after position i
        let mut odd_after = 0u32;
        for (i, g) in self.gens.iter().enumerate() {
            if g.is_odd() && ea[i] > 0 {
                odd_after += 1;
            }
        }
        let mut parity = 0u32;
        for (i, g) in self.gens.iter().enumerate() {
            if g.is_odd() {
                if ea[i] > 0 && eb[i] > 0 {
                    return None;
                }
                if ea[i] > 0 {
                    odd_after -= 1;
                }
                if eb[i] > 0 {
                    parity += odd_after;
                }
            }
            out.push(ea[i] + eb[i]);
        }
        Some((Monomial::from_exponents(out), parity % 2 == 1))
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((m, neg)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Checked product: both operands must be monomials of this algebra.
    pub fn try_multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        for (m, _) in a.terms().chain(b.terms()) {
            self.check_monomial(m)?;
        }
        Ok(self.multiply(a, b))
    }

    pub fn product(&self, factors: &[Element]) -> Element {
        factors
            .iter()
            .fold(self.one(), |acc, f| self.multiply(&acc, f))
    }

    /// `g_i^e` as an element (zero for odd `g_i` with `e > 1`).
    pub fn power(&self, i: usize, e: u16) -> Element {
        if e > 1 && self.gens[i].is_odd() {
            return Element::zero();
        }
        let mut exps = vec![0u16; self.len()];
        exps[i] = e;
        Element::from_monomial(Monomial::from_exponents(exps), Q::one())
    }

    /// Extends generator values to a derivation and applies it.
    ///
    /// `values[i]` is the image of generator `i`; `odd` is the parity of the
    /// derivation's degree, which controls the sign
    /// `θ(ab) = θ(a)b + (-1)^{|θ||a|} a θ(b)`.
    pub fn apply_derivation(&self, values: &[Element], odd: bool, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in a.terms() {
            let term = self.apply_derivation_monomial(values, odd, m);
            out.add_scaled(c, &term);
        }
        out
    }

    fn apply_derivation_monomial(&self, values: &[Element], odd: bool, m: &Monomial) -> Element {
        let exps = m.exponents();
        let n = self.len();
        let mut out = Element::zero();
        let mut prefix_deg = 0u32;
        for i in 0..n {
            let e = exps[i];
            if e == 0 {
                continue;
            }
            if !values[i].is_zero() {
                let mut left = vec![0u16; n];
                left[..i].copy_from_slice(&exps[..i]);
                let mut right = vec![0u16; n];
                right[i + 1..].copy_from_slice(&exps[i + 1..]);
                right[i] = e - 1;
                let left = Element::from_monomial(Monomial::from_exponents(left), Q::one());
                let right = Element::from_monomial(Monomial::from_exponents(right), Q::one());
                let mid = self.multiply(&left, &values[i]);
                let mut t = self.multiply(&mid, &right);
                let mut coeff = q(e as i64);
                if odd && prefix_deg % 2 == 1 {
                    coeff = -coeff;
                }
                t = t.scaled(&coeff);
                out.add(&t);
            }
            prefix_deg += e as u32 * self.gens[i].degree;
        }
        out
    }

    /// Canonically ordered monomial basis of the degree-`degree` part.
    pub fn monomial_basis(&self, degree: u32) -> Arc<Vec<Monomial>> {
        if let Some(b) = self.basis_cache.lock().unwrap().get(&degree) {
            return Arc::clone(b);
        }
        let mut out = Vec::new();
        let mut exps = vec![0u16; self.len()];
        self.enumerate(0, degree, &mut exps, &mut out);
        out.sort();
        let out = Arc::new(out);
        self.basis_cache
            .lock()
            .unwrap()
            .insert(degree, Arc::clone(&out));
        out
    }

    fn enumerate(&self, i: usize, remaining: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == self.len() {
            if remaining == 0 {
                out.push(Monomial::from_exponents(exps.clone()));
            }
            return;
        }
        let d = self.gens[i].degree;
        let max = if self.gens[i].is_odd() {
            (remaining / d).min(1)
        } else {
            remaining / d
        };
        for e in 0..=max {
            exps[i] = e as u16;
            self.enumerate(i + 1, remaining - e * d, exps, out);
        }
        exps[i] = 0;
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.gens[i].name.clone()),
                _ => parts.push(format!("{}^{}", self.gens[i].name, e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Terms in descending canonical order, e.g. `x^3 - 1/2*x*y`.
    pub fn format(&self, a: &Element) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in a.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&fmt_q(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&fmt_q(&abs));
                    out.push('*');
                }
                out.push_str(&self.format_monomial(m));
            }
        }
        out
    }
}

/// Coefficient of `t^degree` in `∏_even 1/(1-t^d) ∏_odd (1+t^d)`.
pub fn basis_count(degrees: &[u32], degree: u32) -> usize {
    let n = degree as usize;
    let mut series = vec![0usize; n + 1];
    series[0] = 1;
    for &d in degrees {
        let d = d as usize;
        if d % 2 == 1 {
            for k in (d..=n).rev() {
                series[k] += series[k - d];
            }
        } else {
            for k in d..=n {
                series[k] += series[k - d];
            }
        }
    }
    series[n]
}

/// A degree +1 derivation given by its values on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    values: Vec<Element>,
}

/// Outcome of [`Differential::check_d_squared`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredWitness {
    pub generator: usize,
    pub residual: Element,
}

impl Differential {
    /// Rejects values that are not homogeneous of degree `|g| + 1`.
    pub fn new(alg: &Algebra, values: Vec<Element>) -> Result<Self> {
        if values.len() != alg.len() {
            return Err(Error::AlgebraMismatch);
        }
        for (i, v) in values.iter().enumerate() {
            let deg = alg.degree_of(v)?;
            if let Some(deg) = deg {
                if deg != alg.degree(i) + 1 {
                    return Err(Error::DegreeMismatch {
                        what: format!("d({})", alg.generators()[i].name),
                        expected: alg.degree(i) + 1,
                        found: deg,
                    });
                }
            }
        }
        Ok(Differential { values })
    }

    pub fn zero(alg: &Algebra) -> Self {
        Differential {
            values: vec![Element::zero(); alg.len()],
        }
    }

    pub fn value(&self, i: usize) -> &Element {
        &self.values[i]
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Element::is_zero)
    }

    pub fn apply(&self, alg: &Algebra, a: &Element) -> Element {
        alg.apply_derivation(&self.values, true, a)
    }

    /// Checks `d(d(g)) = 0` on every generator; returns the first failure.
    pub fn check_d_squared(&self, alg: &Algebra) -> std::result::Result<(), DSquaredWitness> {
        for i in 0..alg.len() {
            let r = self.apply(alg, &self.values[i]);
            if !r.is_zero() {
                return Err(DSquaredWitness {
                    generator: i,
                    residual: r,
                });
            }
        }
        Ok(())
    }

    /// Every value lies in `∧⁺·∧⁺`.
    pub fn is_minimal(&self) -> bool {
        self.values.iter().all(Element::is_decomposable)
    }
}

/// A free model `∧(V; d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanModel {
    pub algebra: Arc<Algebra>,
    pub d: Differential,
}

impl SullivanModel {
    pub fn new(algebra: Algebra, d: Differential) -> Self {
        SullivanModel {
            algebra: Arc::new(algebra),
            d,
        }
    }

    /// Model with zero differential.
    pub fn free(algebra: Algebra) -> Self {
        let d = Differential::zero(&algebra);
        Self::new(algebra, d)
    }

    /// Builds a model from generator pairs and `(generator, value)` strings
    /// already converted to elements by the caller's closure.
    pub fn with_differential(
        algebra: Algebra,
        values: impl FnOnce(&Algebra) -> Vec<(usize, Element)>,
    ) -> Result<Self> {
        let mut vals = vec![Element::zero(); algebra.len()];
        for (i, v) in values(&algebra) {
            vals[i] = v;
        }
        let d = Differential::new(&algebra, vals)?;
        Ok(Self::new(algebra, d))
    }

    pub fn apply_d(&self, a: &Element) -> Element {
        self.d.apply(&self.algebra, a)
    }

    pub fn check_d_squared(&self) -> std::result::Result<(), DSquaredWitness> {
        self.d.check_d_squared(&self.algebra)
    }

    pub fn is_minimal(&self) -> bool {
        self.d.is_minimal()
    }

    /// Largest generator degree (the `N` of a π-finite model).
    pub fn top_degree(&self) -> u32 {
        self.algebra.max_degree()
    }
}
