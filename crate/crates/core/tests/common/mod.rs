#![allow(dead_code)]

use baut_core::classifying::FiniteDgla;
use baut_core::complex::DerivationComplex;
use baut_core::cpn::{d_squared_components, extract_theta_series, gauge};
use baut_core::derivation::Derivation;
use baut_core::format::{parse, print_model};
use baut_core::gca::basis_count;
use baut_core::poset::SubgroupPoset;
use baut_core::{fixtures, q, Algebra, Element, Generator, SullivanModel, Q};
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Deterministic stream of small integers drawn by proptest.
#[derive(Clone, Debug)]
pub struct Pool {
    vals: Vec<u32>,
    i: usize,
}

impl Pool {
    pub fn next(&mut self, m: u32) -> u32 {
        let v = self.vals[self.i % self.vals.len()];
        self.i += 1;
        v % m.max(1)
    }

    pub fn coef(&mut self) -> Q {
        q(self.next(7) as i64 - 3)
    }

    pub fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs[self.next(xs.len() as u32) as usize].clone()
    }
}

pub fn pool() -> impl Strategy<Value = Pool> {
    prop::collection::vec(any::<u32>(), 64).prop_map(|vals| Pool { vals, i: 0 })
}

pub fn cases() -> ProptestConfig {
    ProptestConfig::with_cases(128)
}

fn random_algebra(p: &mut Pool) -> Algebra {
    let n = 1 + p.next(4) as usize;
    let gens = (0..n)
        .map(|i| Generator::new(format!("g{i}"), 2 + p.next(6)))
        .collect();
    Algebra::new(gens).unwrap()
}

fn random_element(a: &Algebra, degree: u32, p: &mut Pool) -> Element {
    let mut e = Element::zero();
    for m in a.monomial_basis(degree).iter() {
        if p.next(2) == 0 {
            e.add_term(m.clone(), p.coef());
        }
    }
    e
}

/// A random degree with a nonempty basis, and an element of that degree.
fn random_homogeneous(a: &Algebra, p: &mut Pool) -> (u32, Element) {
    for _ in 0..8 {
        let d = 2 + p.next(11);
        if !a.monomial_basis(d).is_empty() {
            return (d, random_element(a, d, p));
        }
    }
    (0, a.scalar(p.coef()))
}

/// Closed generators followed by generators whose differentials are
/// decomposables in the closed ones, so `d² = 0`.
fn random_model(p: &mut Pool) -> SullivanModel {
    let nc = 1 + p.next(3) as usize;
    let closed: Vec<u32> = (0..nc).map(|_| 2 + p.next(4)).collect();
    let a0 = Algebra::new(
        closed
            .iter()
            .enumerate()
            .map(|(i, d)| Generator::new(format!("c{i}"), *d))
            .collect(),
    )
    .unwrap();
    let mut targets = Vec::new();
    for _ in 0..p.next(3) {
        let i = p.next(nc as u32) as usize;
        let j = p.next(nc as u32) as usize;
        let prod = a0.multiply(&a0.gen(i), &a0.gen(j));
        let deg = closed[i] + closed[j];
        if !prod.is_zero() && deg >= 3 {
            let mut v = prod;
            for m in a0.monomial_basis(deg).iter() {
                if m.word_length() >= 2 && p.next(3) == 0 {
                    v.add_term(m.clone(), p.coef());
                }
            }
            if !v.is_zero() {
                targets.push((deg - 1, v));
            }
        }
    }
    let mut gens = a0.generators().to_vec();
    for (k, (deg, _)) in targets.iter().enumerate() {
        gens.push(Generator::new(format!("v{k}"), *deg));
    }
    if p.next(2) == 0 {
        gens.push(Generator::new("f", 3 + 2 * p.next(3)));
    }
    let alg = Algebra::new(gens).unwrap();
    let len = alg.len();
    let mut values = vec![Element::zero(); len];
    for (k, (_, v)) in targets.iter().enumerate() {
        values[nc + k] = baut_core::relative::embed(v, 0, len);
    }
    let d = baut_core::Differential::new(&alg, values).unwrap();
    SullivanModel::new(alg, d)
}

fn random_derivation(a: &Algebra, degree: i32, p: &mut Pool) -> Derivation {
    let values = a
        .generators()
        .iter()
        .map(|g| {
            let t = g.degree as i32 - degree;
            if t < 0 {
                Element::zero()
            } else {
                random_element(a, t as u32, p)
            }
        })
        .collect();
    Derivation::new(a, degree, values).unwrap()
}

fn sign(a: u32, b: u32) -> Q {
    if a % 2 == 1 && b % 2 == 1 {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Rebuilds `m` with its generators listed in the order `perm`.
fn permuted(m: &SullivanModel, perm: &[usize]) -> SullivanModel {
    let a = &m.algebra;
    let gens: Vec<Generator> = perm.iter().map(|&i| a.generators()[i].clone()).collect();
    let b = Algebra::new(gens).unwrap();
    let pos = |i: usize| perm.iter().position(|&j| j == i).unwrap();
    let image = |e: &Element| {
        let mut out = Element::zero();
        for (mono, c) in e.terms() {
            let mut acc = b.one();
            for (i, &x) in mono.exponents().iter().enumerate() {
                if x > 0 {
                    acc = b.multiply(&acc, &b.power(pos(i), x));
                }
            }
            out.add_scaled(c, &acc);
        }
        out
    };
    let values = perm.iter().map(|&i| image(m.d.value(i))).collect();
    SullivanModel::new(b.clone(), baut_core::Differential::new(&b, values).unwrap())
}


fn relative_fixtures() -> Vec<baut_core::relative::RelativeModel> {
    let mut out: Vec<_> = fixtures::exh1_family()
        .members()
        .iter()
        .map(|m| m.model.clone())
        .collect();
    out.extend(fixtures::exh2_family().members().iter().step_by(5).map(|m| m.model.clone()));
    for n in 2..=4 {
        out.push(fixtures::cpn_candidate(n));
    }
    out.push(fixtures::cp2_boundary());
    out
}

pub fn graded_commutativity(p: &mut Pool) -> Result<(), TestCaseError> {
    let a = random_algebra(p);
    let (da, x) = random_homogeneous(&a, p);
    let (db, y) = random_homogeneous(&a, p);
    let xy = a.multiply(&x, &y);
    let yx = a.multiply(&y, &x).scaled(&sign(da, db));
    prop_assert_eq!(xy, yx);
    Ok(())
}

pub fn associativity(p: &mut Pool) -> Result<(), TestCaseError> {
    let a = random_algebra(p);
    let (_, x) = random_homogeneous(&a, p);
    let (_, y) = random_homogeneous(&a, p);
    let (_, z) = random_homogeneous(&a, p);
    let l = a.multiply(&a.multiply(&x, &y), &z);
    let r = a.multiply(&x, &a.multiply(&y, &z));
    prop_assert_eq!(l, r);
    Ok(())
}

pub fn leibniz(p: &mut Pool) -> Result<(), TestCaseError> {
    let a = random_algebra(p);
    let k = p.next(5) as i32 - 1;
    let th = random_derivation(&a, k, p);
    let (da, x) = random_homogeneous(&a, p);
    let (_, y) = random_homogeneous(&a, p);
    let lhs = th.apply(&a, &a.multiply(&x, &y));
    let mut rhs = a.multiply(&th.apply(&a, &x), &y);
    let s = if th.is_odd() && da % 2 == 1 { -Q::one() } else { Q::one() };
    rhs.add_scaled(&s, &a.multiply(&x, &th.apply(&a, &y)));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn d_squared_vanishes(p: &mut Pool) -> Result<(), TestCaseError> {
    let m = random_model(p);
    prop_assert!(m.check_d_squared().is_ok());
    let (_, x) = random_homogeneous(&m.algebra, p);
    prop_assert!(m.apply_d(&m.apply_d(&x)).is_zero());
    Ok(())
}

pub fn basis_matches_generating_function(p: &mut Pool) -> Result<(), TestCaseError> {
    let a = random_algebra(p);
    let degrees: Vec<u32> = a.generators().iter().map(|g| g.degree).collect();
    for n in 0..16 {
        prop_assert_eq!(a.monomial_basis(n).len(), basis_count(&degrees, n));
    }
    Ok(())
}

pub fn bracket_antisymmetry_and_jacobi(p: &mut Pool) -> Result<(), TestCaseError> {
    let a = random_algebra(p);
    let ks: Vec<i32> = (0..3).map(|_| p.next(4) as i32 - 1).collect();
    let x = random_derivation(&a, ks[0], p);
    let y = random_derivation(&a, ks[1], p);
    let z = random_derivation(&a, ks[2], p);
    let s = |i: i32, j: i32| if (i * j).rem_euclid(2) == 1 { -Q::one() } else { Q::one() };
    prop_assert_eq!(x.bracket(&a, &y), y.bracket(&a, &x).scaled(&(-s(ks[0], ks[1]))));
    // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    let lhs = x.bracket(&a, &y.bracket(&a, &z));
    let mut rhs = x.bracket(&a, &y).bracket(&a, &z);
    rhs.add_scaled(&s(ks[0], ks[1]), &y.bracket(&a, &x.bracket(&a, &z)));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn delta_squares_to_zero_and_is_a_derivation(p: &mut Pool) -> Result<(), TestCaseError> {
    let m = random_model(p);
    let a = &m.algebra;
    let (k1, k2) = (p.next(4) as i32, p.next(4) as i32);
    let x = random_derivation(a, k1, p);
    let y = random_derivation(a, k2, p);
    prop_assert!(x.delta(a, &m.d).delta(a, &m.d).is_zero());
    let lhs = x.bracket(a, &y).delta(a, &m.d);
    let mut rhs = x.delta(a, &m.d).bracket(a, &y);
    let s = if k1 % 2 == 1 { -Q::one() } else { Q::one() };
    rhs.add_scaled(&s, &x.bracket(a, &y.delta(a, &m.d)));
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn homology_is_independent_of_generator_order(p: &mut Pool) -> Result<(), TestCaseError> {
    let m = random_model(p);
    let n = m.algebra.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = p.next(i as u32 + 1) as usize;
        perm.swap(i, j);
    }
    let m2 = permuted(&m, &perm);
    prop_assert!(m2.check_d_squared().is_ok());
    let h1 = DerivationComplex::of_model(&m).homology_all().dims();
    let h2 = DerivationComplex::of_model(&m2).homology_all().dims();
    prop_assert_eq!(h1, h2);
    Ok(())
}

pub fn cochains_of_truncated_derivations(p: &mut Pool) -> Result<(), TestCaseError> {
    let m = random_model(p);
    let cx = DerivationComplex::of_model(&m);
    let max = 1 + p.next(4) as i32;
    let lie = FiniteDgla::from_derivations(&cx, max).unwrap();
    let c = lie.cochains_default(&m.algebra).unwrap();
    prop_assert!(c.check_d_squared().is_ok());
    Ok(())
}

pub fn parser_round_trip(p: &mut Pool) -> Result<(), TestCaseError> {
    let a = random_algebra(p);
    let values = a
        .generators()
        .iter()
        .map(|g| random_element(&a, g.degree + 1, p))
        .collect();
    let m = SullivanModel::new(a.clone(), baut_core::Differential::new(&a, values).unwrap());
    let text = print_model("m", &m);
    let f = parse(&text).unwrap();
    prop_assert_eq!(f.model("m").unwrap(), &m);
    prop_assert_eq!(f.print(), text);
    Ok(())
}

pub fn poset_output_is_deterministic(p: &mut Pool) -> Result<(), TestCaseError> {
    let k = 1 + p.next(4) as usize;
    let mut vs: Vec<Vec<bool>> = (0..1 + p.next(12))
        .map(|_| (0..k).map(|_| p.next(2) == 1).collect())
        .collect();
    vs.sort();
    vs.dedup();
    let a = SubgroupPoset::coordinate_lattice(&vs);
    let mut shuffled = vs.clone();
    for i in (1..shuffled.len()).rev() {
        let j = p.next(i as u32 + 1) as usize;
        shuffled.swap(i, j);
    }
    let b = SubgroupPoset::coordinate_lattice(&shuffled);
    prop_assert_eq!(a.hasse_dot(), b.hasse_dot());
    prop_assert_eq!(a.depth(), b.depth());
    Ok(())
}

pub fn p_star_is_a_chain_map_and_a_bracket_map(p: &mut Pool) -> Result<(), TestCaseError> {
    let models = relative_fixtures();
    let rm = p.pick(&models);
    let rel = rm.relative_complex();
    let fib = rm.fibre_complex();
    let combo = |p: &mut Pool, n: i32| {
        let mut th = Derivation::zero(rm.total(), n);
        for b in rel.derivation_basis(n) {
            th.add_scaled(&p.coef(), &b);
        }
        th
    };
    let (n1, n2) = (1 + p.next(4) as i32, 1 + p.next(4) as i32);
    let a = combo(p, n1);
    let b = combo(p, n2);
    prop_assert_eq!(rm.p_star(&rel.delta(&a)), fib.delta(&rm.p_star(&a)));
    prop_assert_eq!(
        rm.p_star(&rel.bracket(&a, &b)),
        fib.bracket(&rm.p_star(&a), &rm.p_star(&b))
    );
    Ok(())
}

pub fn cpn_identities_on_gauged_candidates(p: &mut Pool) -> Result<(), TestCaseError> {
    let n = 2 + p.next(3);
    let rm = if n == 2 && p.next(2) == 0 { fixtures::cp2_boundary() } else { fixtures::cpn_candidate(n) };
    let fa = rm.fibre().algebra.clone();
    let cx = DerivationComplex::of_model(rm.fibre());
    let mut alpha = Derivation::zero(&fa, 2);
    for b in cx.derivation_basis(2) {
        alpha.add_scaled(&p.coef(), &b);
    }
    let g = gauge(&rm, &alpha).unwrap();
    prop_assert!(g.validate().is_ok());
    let report = baut_core::cpn::cpn_identities(&g).unwrap();
    prop_assert!(report.d_squared_zero());
    prop_assert!(report.u_components_match && report.v_component_matches);
    // The u-linear part of D² is δθ_u.
    let series = extract_theta_series(&g).unwrap();
    let du = series.theta_u(1, &fa).delta(&fa, &g.fibre().d);
    let comps = d_squared_components(&g);
    let zero = vec![Element::zero(); fa.len()];
    let u1 = comps.get(&(1, 0)).unwrap_or(&zero);
    prop_assert_eq!(u1.as_slice(), du.values());
    Ok(())
}
