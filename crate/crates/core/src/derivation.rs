//! Derivations of a free graded-commutative algebra.
//!
//! A derivation of degree `n` lowers degree by `n` and is determined by its
//! values on generators. `(v, P)` denotes the derivation sending `v` to `P`
//! and every other generator to zero; `v*` is `(v, 1)`.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::gca::{Algebra, Differential, Element, Monomial};
use crate::linalg::{fmt_q, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    degree: i32,
    values: Vec<Element>,
}

impl Derivation {
    /// Checks that each value is homogeneous of degree `|g| - degree`.
    pub fn new(alg: &Algebra, degree: i32, values: Vec<Element>) -> Result<Self> {
        if values.len() != alg.len() {
            return Err(Error::AlgebraMismatch);
        }
        for (i, v) in values.iter().enumerate() {
            if let Some(d) = alg.degree_of(v)? {
                let expected = alg.degree(i) as i32 - degree;
                if d as i32 != expected {
                    return Err(Error::DegreeMismatch {
                        what: format!("value on {}", alg.generators()[i].name),
                        expected: expected.max(0) as u32,
                        found: d,
                    });
                }
            }
        }
        Ok(Derivation { degree, values })
    }

    pub(crate) fn from_parts(degree: i32, values: Vec<Element>) -> Self {
        Derivation { degree, values }
    }

    pub fn zero(alg: &Algebra, degree: i32) -> Self {
        Derivation {
            degree,
            values: vec![Element::zero(); alg.len()],
        }
    }

    /// `(g, m)` with coefficient one.
    pub fn elementary(alg: &Algebra, g: usize, m: Monomial) -> Self {
        let degree = alg.degree(g) as i32 - alg.monomial_degree(&m) as i32;
        let mut d = Derivation::zero(alg, degree);
        d.values[g] = Element::from_monomial(m, Q::one());
        d
    }

    /// The dual derivation `g*`.
    pub fn dual(alg: &Algebra, g: usize) -> Self {
        Self::elementary(alg, g, Monomial::one(alg.len()))
    }

    /// The differential viewed as a derivation of degree -1.
    pub fn from_differential(d: &Differential) -> Self {
        Derivation {
            degree: -1,
            values: d.values().to_vec(),
        }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn value(&self, g: usize) -> &Element {
        &self.values[g]
    }

    pub fn set_value(&mut self, g: usize, v: Element) {
        self.values[g] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Element::is_zero)
    }

    pub fn apply(&self, alg: &Algebra, a: &Element) -> Element {
        alg.apply_derivation(&self.values, self.is_odd(), a)
    }

    pub fn add_scaled(&mut self, c: &Q, other: &Derivation) {
        debug_assert_eq!(self.values.len(), other.values.len());
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            a.add_scaled(c, b);
        }
    }

    pub fn scaled(&self, c: &Q) -> Derivation {
        Derivation {
            degree: self.degree,
            values: self.values.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    /// Values of the composite `self ∘ other` on generators. The composite
    /// is not itself a derivation.
    pub fn compose_on_generators(&self, alg: &Algebra, other: &Derivation) -> Vec<Element> {
        other.values.iter().map(|v| self.apply(alg, v)).collect()
    }

    /// `[θ₁, θ₂] = θ₁θ₂ - (-1)^{|θ₁||θ₂|} θ₂θ₁`.
    pub fn bracket(&self, alg: &Algebra, other: &Derivation) -> Derivation {
        let ab = self.compose_on_generators(alg, other);
        let ba = other.compose_on_generators(alg, self);
        let sign_neg = !(self.is_odd() && other.is_odd());
        let values = ab
            .into_iter()
            .zip(ba)
            .map(|(mut x, y)| {
                if sign_neg {
                    x.sub(&y);
                } else {
                    x.add(&y);
                }
                x
            })
            .collect();
        Derivation {
            degree: self.degree + other.degree,
            values,
        }
    }

    /// `δθ = [d, θ] = dθ - (-1)^{|θ|} θd`, of degree `|θ| - 1`.
    pub fn delta(&self, alg: &Algebra, d: &Differential) -> Derivation {
        Derivation::from_differential(d).bracket(alg, self)
    }

    /// Kills every monomial that involves a generator with index in `range`.
    pub fn project_away(&self, range: std::ops::Range<usize>) -> Derivation {
        Derivation {
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|v| v.filter(|m| m.word_length_in(range.clone()) == 0))
                .collect(),
        }
    }

    /// Renders as a sum of `(v,P)` terms, with `v*` for unit values.
    pub fn format(&self, alg: &Algebra) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            let name = &alg.generators()[i].name;
            for (m, c) in v.terms().rev() {
                let body = if m.is_one() {
                    format!("{name}*")
                } else {
                    format!("({name},{})", alg.format_monomial(m))
                };
                let abs = c.abs();
                let s = if abs.is_one() {
                    body
                } else {
                    format!("{}*{body}", fmt_q(&abs))
                };
                parts.push((c.is_negative(), s));
            }
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (neg, s)) in parts.into_iter().enumerate() {
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&s);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn s3cp2() -> (Algebra, Differential) {
        let a = Algebra::from_pairs(&[("x", 2), ("y", 3), ("z", 5)]).unwrap();
        let d = Differential::new(&a, vec![Element::zero(), Element::zero(), a.power(0, 3)])
            .unwrap();
        (a, d)
    }

    fn mono(a: &Algebra, exps: &[u16]) -> Monomial {
        assert_eq!(exps.len(), a.len());
        Monomial::from_exponents(exps.to_vec())
    }

    #[test]
    fn bracket_of_zy_and_ystar_is_zstar() {
        let (a, _) = s3cp2();
        let zy = Derivation::elementary(&a, 2, mono(&a, &[0, 1, 0]));
        let ys = Derivation::dual(&a, 1);
        let br = zy.bracket(&a, &ys);
        // [θ₁,θ₂](z) = θ₁(θ₂ z) - θ₂(θ₁ z) = 0 - y*(y) = -1
        assert_eq!(br, Derivation::dual(&a, 2).scaled(&-q(1)));
        assert_eq!(br.degree(), 5);
    }

    #[test]
    fn delta_of_xstar() {
        let (a, d) = s3cp2();
        let xs = Derivation::dual(&a, 0);
        let dx = xs.delta(&a, &d);
        // dθ - θd with |θ| = 2: on z, -x*(x^3) = -3x^2
        assert_eq!(dx.value(2), &a.power(0, 2).scaled(&q(-3)));
        assert!(dx.value(0).is_zero() && dx.value(1).is_zero());
        assert_eq!(dx.format(&a), "-3*(z,x^2)");
    }

    #[test]
    fn delta_of_zstar_vanishes() {
        let (a, d) = s3cp2();
        assert!(Derivation::dual(&a, 2).delta(&a, &d).is_zero());
    }

    #[test]
    fn even_self_bracket_vanishes() {
        let (a, _) = s3cp2();
        let zy = Derivation::elementary(&a, 2, mono(&a, &[0, 1, 0]));
        assert!(zy.bracket(&a, &zy).is_zero());
    }

    #[test]
    fn xstar_with_zx() {
        let (a, _) = s3cp2();
        let xs = Derivation::dual(&a, 0);
        let zx = Derivation::elementary(&a, 2, mono(&a, &[1, 0, 0]));
        // [x*, (z,x)](z) = x*(x) - (z,x)(0) = 1, so the bracket is z*
        assert_eq!(xs.bracket(&a, &zx), Derivation::dual(&a, 2));
    }

    #[test]
    fn degree_checked() {
        let (a, _) = s3cp2();
        let bad = Derivation::new(&a, 2, vec![Element::zero(), Element::zero(), a.gen(0)]);
        assert!(bad.is_err());
        let ok = Derivation::new(&a, 2, vec![Element::zero(), Element::zero(), a.gen(1)]);
        assert!(ok.is_ok());
    }
}
