//! Relative models over `∧(u₂, v_{2n+1}; d̂v = u^{n+1})` and the θ-series
//! expansion `D = d + Σ u^k θ_{u^k} + v θ_v + Σ v u^k θ_{vu^k}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::complex::DerivationComplex;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::gca::{Algebra, Differential, Element, Monomial, SullivanModel};
use crate::linalg::{q_frac, Echelon, SparseVec, Q};
use crate::relative::{embed, RelativeModel};

/// `∧(u, v; d̂v = u^{n+1})`.
pub fn cpn_base(n: u32) -> SullivanModel {
    let a = Algebra::from_pairs(&[("u", 2), ("v", 2 * n + 1)]).expect("fixed generators");
    let d = Differential::new(&a, vec![Element::zero(), a.power(0, (n + 1) as u16)])
        .expect("degrees match");
    SullivanModel::new(a, d)
}

/// Returns `n` if `base` is the model of `CPⁿ` with generators `u, v`.
pub fn cpn_degree(base: &SullivanModel) -> Option<u32> {
    let a = &base.algebra;
    if a.len() != 2 || a.degree(0) != 2 || a.degree(1).is_multiple_of(2) || a.degree(1) < 3 {
        return None;
    }
    let n = (a.degree(1) - 1) / 2;
    let want = a.power(0, (n + 1) as u16);
    (base.d.value(0).is_zero() && base.d.value(1) == &want).then_some(n)
}

/// Coefficient derivations of a relative model over the `CPⁿ` model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    pub n: u32,
    /// `θ_{u^k}` for `k ≥ 1`; key `k`.
    pub u_powers: BTreeMap<u32, Derivation>,
    /// `θ_{vu^k}` for `k ≥ 0`; key `k` (`k = 0` is `θ_v`).
    pub v_powers: BTreeMap<u32, Derivation>,
}

impl ThetaSeries {
    pub fn theta_u(&self, k: u32, fibre: &Algebra) -> Derivation {
        self.u_powers
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Derivation::zero(fibre, 2 * k as i32 - 1))
    }

    pub fn theta_v(&self, fibre: &Algebra) -> Derivation {
        self.v_powers
            .get(&0)
            .cloned()
            .unwrap_or_else(|| Derivation::zero(fibre, 2 * self.n as i32))
    }
}

pub fn extract_theta_series(rm: &RelativeModel) -> Result<ThetaSeries> {
    let n = cpn_degree(rm.base())
        .ok_or_else(|| Error::Invalid("base is not the CP^n model ∧(u, v; dv = u^(n+1))".into()))?;
    let fa = &rm.fibre().algebra;
    let mut raw: BTreeMap<(u16, u16), Vec<Element>> = BTreeMap::new();
    for x in 0..fa.len() {
        for (m, c) in rm.fibre_value(x).terms() {
            let e = m.exponents();
            if e[0] == 0 && e[1] == 0 {
                continue;
            }
            let vals = raw
                .entry((e[0], e[1]))
                .or_insert_with(|| vec![Element::zero(); fa.len()]);
            vals[x].add_term(Monomial::from_exponents(e[2..].to_vec()), c.clone());
        }
    }
    let mut series = ThetaSeries {
        n,
        u_powers: BTreeMap::new(),
        v_powers: BTreeMap::new(),
    };
    for ((k, e), vals) in raw {
        let deg = 2 * k as i32 + e as i32 * (2 * n as i32 + 1) - 1;
        let theta = Derivation::new(fa, deg, vals)?;
        if theta.is_zero() {
            continue;
        }
        if e == 0 {
            series.u_powers.insert(k as u32, theta);
        } else {
            series.v_powers.insert(k as u32, theta);
        }
    }
    Ok(series)
}

/// Inverse of [`extract_theta_series`].
pub fn assemble(fibre: &SullivanModel, series: &ThetaSeries) -> Result<RelativeModel> {
    let base = cpn_base(series.n);
    let total = RelativeModel::total_algebra_for(&base, fibre)?;
    let nt = total.len();
    let mut values: Vec<Element> = fibre.d.values().iter().map(|e| embed(e, 2, nt)).collect();
    let mut add = |prefix: Element, theta: &Derivation| {
        for (x, val) in values.iter_mut().enumerate() {
            let t = embed(theta.value(x), 2, nt);
            val.add(&total.multiply(&prefix, &t));
        }
    };
    for (k, th) in &series.u_powers {
        add(total.power(0, *k as u16), th);
    }
    for (k, th) in &series.v_powers {
        add(total.multiply(&total.gen(1), &total.power(0, *k as u16)), th);
    }
    RelativeModel::new(base, fibre.clone(), values)
}

/// Components of `D²` on fibre generators, keyed by base monomial
/// `(power of u, power of v)`, each given as a map on generators.
pub fn d_squared_components(rm: &RelativeModel) -> BTreeMap<(u16, u16), Vec<Element>> {
    let fa = &rm.fibre().algebra;
    let t = rm.total();
    let mut out: BTreeMap<(u16, u16), Vec<Element>> = BTreeMap::new();
    for x in 0..fa.len() {
        let dd = rm.differential().apply(t, rm.fibre_value(x));
        for (m, c) in dd.terms() {
            let e = m.exponents();
            let vals = out
                .entry((e[0], e[1]))
                .or_insert_with(|| vec![Element::zero(); fa.len()]);
            vals[x].add_term(Monomial::from_exponents(e[2..].to_vec()), c.clone());
        }
    }
    out.retain(|_, v| v.iter().any(|e| !e.is_zero()));
    out
}

/// Predicted `u^m` component of `D²`:
/// `δθ_m + Σ_{i<j, i+j=m} [θ_i, θ_j] + ½[θ_{m/2}, θ_{m/2}]`, plus `θ_v`
/// when `m = n + 1`.
pub fn predicted_u_component(
    fibre: &SullivanModel,
    series: &ThetaSeries,
    m: u32,
) -> Derivation {
    let fa = &fibre.algebra;
    let mut out = series.theta_u(m, fa).delta(fa, &fibre.d);
    out.add_scaled(&Q::one(), &bracket_sum(fa, m, |k| series.theta_u(k, fa)));
    if m == series.n + 1 {
        out.add_scaled(&Q::one(), &series.theta_v(fa));
    }
    out
}

/// `Σ_{i<j, i+j=m} [θ_i, θ_j] + ½[θ_{m/2}, θ_{m/2}]` over `i, j ≥ 1`.
fn bracket_sum(fa: &Algebra, m: u32, theta: impl Fn(u32) -> Derivation) -> Derivation {
    let mut out = Derivation::zero(fa, 2 * m as i32 - 2);
    for i in 1..m {
        let j = m - i;
        if i < j {
            out.add_scaled(&Q::one(), &theta(i).bracket(fa, &theta(j)));
        } else if i == j {
            out.add_scaled(&q_frac(1, 2), &theta(i).bracket(fa, &theta(i)));
        }
    }
    out
}

/// Result of [`cpn_identities`].
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub n: u32,
    /// Nonzero `D²` components, rendered.
    pub residuals: Vec<(String, String)>,
    /// `u^m` components agree with [`predicted_u_component`] for all `m`.
    pub u_components_match: bool,
    /// The `v` component equals `-δθ_v`.
    pub v_component_matches: bool,
}

impl IdentityReport {
    pub fn d_squared_zero(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "CP^{} base", self.n);
        if self.residuals.is_empty() {
            let _ = writeln!(out, "D^2 = 0: all components vanish");
        }
        for (k, r) in &self.residuals {
            let _ = writeln!(out, "{k}-component: {r}");
        }
        let _ = writeln!(
            out,
            "u-power components match derived identities: {}",
            self.u_components_match
        );
        let _ = writeln!(out, "v-component equals -delta(theta_v): {}", self.v_component_matches);
        out
    }
}

pub fn cpn_identities(rm: &RelativeModel) -> Result<IdentityReport> {
    let series = extract_theta_series(rm)?;
    let fibre = rm.fibre();
    let fa = &fibre.algebra;
    let comps = d_squared_components(rm);
    let get = |k: (u16, u16)| comps.get(&k).cloned().unwrap_or_else(|| vec![Element::zero(); fa.len()]);
    let max_u = comps.keys().map(|k| k.0 as u32).max().unwrap_or(0).max(series.n + 1);
    let mut u_ok = true;
    for m in 1..=max_u {
        let pred = predicted_u_component(fibre, &series, m);
        if pred.values() != get((m as u16, 0)).as_slice() {
            u_ok = false;
        }
    }
    let v_pred = series.theta_v(fa).delta(fa, &fibre.d).scaled(&-Q::one());
    let v_ok = v_pred.values() == get((0, 1)).as_slice();
    let residuals = comps
        .iter()
        .map(|(&(a, b), vals)| {
            let name = base_monomial_name(a, b);
            let th = Derivation::from_parts(0, vals.clone());
            (name, th.format(fa))
        })
        .collect();
    Ok(IdentityReport {
        n: series.n,
        residuals,
        u_components_match: u_ok,
        v_component_matches: v_ok,
    })
}

fn base_monomial_name(a: u16, b: u16) -> String {
    let mut parts = Vec::new();
    if b > 0 {
        parts.push("v".to_string());
    }
    match a {
        0 => {}
        1 => parts.push("u".into()),
        _ => parts.push(format!("u^{a}")),
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Outcome of [`cp_nonrealization_probe`].
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub n: u32,
    /// `d(y)` pairs `V²` with `V^{2n-1}` through an invertible matrix.
    pub pairing_ok: bool,
    pub pairing_note: String,
    /// `θ_u` after normalization by a boundary.
    pub theta_u: String,
    pub theta_u_y_decomposable: bool,
    pub theta_u2_vanishes_on_v3: bool,
    /// Derived `θ_v` evaluated on the top generator.
    pub theta_v_on_y: Q,
    /// Rebuilt series, rendered as `(name, derivation)`.
    pub series: Vec<(String, String)>,
}

impl ProbeReport {
    /// `θ_v` is forced to vanish, contradicting `θ_v ≠ 0`.
    pub fn refutes_realization(&self) -> bool {
        self.theta_u_y_decomposable && self.theta_u2_vanishes_on_v3 && self.theta_v_on_y.is_zero()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "pairing: {} ({})", if self.pairing_ok { "ok" } else { "not of paired form" }, self.pairing_note);
        let _ = writeln!(out, "normalized theta_u = {}", self.theta_u);
        for (k, s) in &self.series {
            let _ = writeln!(out, "{k} = {s}");
        }
        let _ = writeln!(out, "theta_u(y) decomposable: {}", self.theta_u_y_decomposable);
        let _ = writeln!(out, "theta_u^2 vanishes on V^3: {}", self.theta_u2_vanishes_on_v3);
        let _ = writeln!(out, "theta_v(y) = {}", crate::linalg::fmt_q(&self.theta_v_on_y));
        let _ = writeln!(
            out,
            "realization refuted: {}",
            if self.refutes_realization() { "yes (theta_v = 0)" } else { "no" }
        );
        out
    }
}

/// Normalizes `θ_u` so that `θ_u(y)` is decomposable, rebuilds the series
/// from the derived identities and evaluates the forced `θ_v` on `y`.
pub fn cp_nonrealization_probe(rm: &RelativeModel, n: u32) -> Result<ProbeReport> {
    let series = extract_theta_series(rm)?;
    if series.n != n {
        return Err(Error::HypothesesUnmet(format!(
            "base is CP^{} but n = {n} was requested",
            series.n
        )));
    }
    let fibre = rm.fibre();
    let fa = &fibre.algebra;
    let top = fa.max_degree();
    let tops = fa.generators_of_degree(2 * n);
    if top != 2 * n || tops.len() != 1 {
        return Err(Error::HypothesesUnmet(format!(
            "need V^{} one-dimensional and V^q = 0 above it",
            2 * n
        )));
    }
    let y = tops[0];
    let cx = DerivationComplex::of_model(fibre);
    let theta_u = series.theta_u(1, fa);
    if !cx.delta(&theta_u).is_zero() {
        return Err(Error::HypothesesUnmet("theta_u is not a delta-cycle".into()));
    }
    let h1 = cx.homology(1);
    let tv = cx.to_vector(&theta_u)?;
    if h1.is_boundary(&tv) {
        return Err(Error::HypothesesUnmet(
            "theta_u is a delta-boundary, so it cannot come from the universal fibration".into(),
        ));
    }
    let (pairing_ok, pairing_note) = pairing(fibre, y, n);

    // choose φ ∈ Der² with (θ_u + δφ)(y) decomposable
    let linear_part = |e: &Element| -> SparseVec {
        SparseVec::from_entries(e.terms().filter(|(m, _)| m.word_length() == 1).map(|(m, c)| {
            let g = m.exponents().iter().position(|&x| x > 0).unwrap();
            (g, c.clone())
        }))
    };
    let phis = cx.derivation_basis(2);
    let mut ech = Echelon::new();
    for (j, phi) in phis.iter().enumerate() {
        let _ = ech.insert(linear_part(cx.delta(phi).value(y)), SparseVec::unit(j));
    }
    let target = linear_part(theta_u.value(y)).scaled(&-Q::one());
    let coeffs = ech.solve(&target).map_err(|_| {
        Error::HypothesesUnmet("no boundary makes theta_u(y) decomposable".into())
    })?;
    let mut phi = Derivation::zero(fa, 2);
    for (j, c) in coeffs.iter() {
        phi.add_scaled(c, &phis[*j]);
    }
    let mut t1 = theta_u.clone();
    t1.add_scaled(&Q::one(), &cx.delta(&phi));

    // rebuild θ'_k: δθ'_k = -(Σ_{i<j} [θ'_i, θ'_j] + ½[θ'_{k/2}, θ'_{k/2}])
    let mut rebuilt: BTreeMap<u32, Derivation> = BTreeMap::new();
    rebuilt.insert(1, t1.clone());
    for k in 2..=n {
        let snapshot = rebuilt.clone();
        let get = |i: u32| snapshot.get(&i).cloned().unwrap_or_else(|| Derivation::zero(fa, 2 * i as i32 - 1));
        let mut rhs = bracket_sum(fa, k, get).scaled(&-Q::one());
        let old = series.theta_u(k, fa);
        rhs.add_scaled(&-Q::one(), &cx.delta(&old));
        let deg = 2 * k as i32 - 1;
        let mut ech = Echelon::new();
        for (j, col) in cx.delta_columns(deg).into_iter().enumerate() {
            let _ = ech.insert(col, SparseVec::unit(j));
        }
        let x = ech.solve(&cx.to_vector(&rhs)?).map_err(|_| {
            Error::Obstruction(format!("no theta_u^{k} solves its identity after normalization"))
        })?;
        let mut tk = old;
        tk.add_scaled(&Q::one(), &cx.from_vector(deg, &x));
        rebuilt.insert(k, tk);
    }
    let get = |i: u32| rebuilt.get(&i).cloned().unwrap_or_else(|| Derivation::zero(fa, 2 * i as i32 - 1));
    let theta_v = bracket_sum(fa, n + 1, get).scaled(&-Q::one());

    let v3 = fa.generators_of_degree(3);
    let t2 = rebuilt.get(&2).cloned().unwrap_or_else(|| Derivation::zero(fa, 3));
    let mut rendered: Vec<(String, String)> = rebuilt
        .iter()
        .map(|(k, t)| (if *k == 1 { "theta_u".into() } else { format!("theta_u^{k}") }, t.format(fa)))
        .collect();
    rendered.push(("theta_v".into(), theta_v.format(fa)));
    Ok(ProbeReport {
        n,
        pairing_ok,
        pairing_note,
        theta_u: t1.format(fa),
        theta_u_y_decomposable: t1.value(y).is_decomposable(),
        theta_u2_vanishes_on_v3: v3.iter().all(|&w| t2.value(w).is_zero()),
        theta_v_on_y: theta_v.value(y).augment(),
        series: rendered,
    })
}

/// Checks that the `V²·V^{2n-1}` part of `d(y)` is a nondegenerate pairing.
fn pairing(fibre: &SullivanModel, y: usize, n: u32) -> (bool, String) {
    let fa = &fibre.algebra;
    let xs = fa.generators_of_degree(2);
    let zs = fa.generators_of_degree(2 * n - 1);
    let dy = fibre.d.value(y);
    let mut rows = Vec::new();
    for &x in &xs {
        let row: Vec<Q> = zs
            .iter()
            .map(|&z| {
                // x·z is a single canonical monomial, possibly with a sign
                let xz = fa.multiply(&fa.gen(x), &fa.gen(z));
                let (m, c) = xz.terms().next().expect("x has even degree");
                dy.coefficient(m) * c
            })
            .collect();
        rows.push(SparseVec::from_dense(&row));
    }
    let rank = crate::linalg::Subspace::span(zs.len(), rows.iter()).dim();
    let ok = xs.len() == zs.len() && xs.len() == n as usize && rank == xs.len();
    (
        ok,
        format!(
            "dim V^2 = {}, dim V^{} = {}, pairing rank {}",
            xs.len(),
            2 * n - 1,
            zs.len(),
            rank
        ),
    )
}

/// Conjugates `D` by `exp(ψ)` where `ψ(x) = u·α(x)` for a degree-2
/// derivation `α` of the fibre. The result is again a relative model.
pub fn gauge(rm: &RelativeModel, alpha: &Derivation) -> Result<RelativeModel> {
    let t = rm.total();
    let nt = t.len();
    let nb = rm.base_len();
    let u = t.gen(0);
    let mut psi_vals = vec![Element::zero(); nt];
    for x in 0..rm.fibre().algebra.len() {
        psi_vals[nb + x] = t.multiply(&u, &embed(alpha.value(x), nb, nt));
    }
    let psi = Derivation::from_parts(0, psi_vals);
    let d0 = Derivation::from_differential(rm.differential());
    let mut acc = d0.clone();
    let mut term = d0;
    let mut k = 1i64;
    loop {
        term = psi.bracket(t, &term).scaled(&q_frac(1, k));
        if term.is_zero() {
            break;
        }
        acc.add_scaled(&Q::one(), &term);
        k += 1;
    }
    let values = (0..rm.fibre().algebra.len())
        .map(|x| acc.value(nb + x).clone())
        .collect();
    RelativeModel::new(rm.base().clone(), rm.fibre().clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn candidate_n2() -> RelativeModel {
        let fa = Algebra::from_pairs(&[("x", 2), ("z", 3), ("w", 3), ("y", 4)]).unwrap();
        let xz = fa.multiply(&fa.gen(0), &fa.gen(1));
        let d = Differential::new(&fa, vec![Element::zero(), Element::zero(), Element::zero(), xz]).unwrap();
        let fibre = SullivanModel::new(fa, d);
        let base = cpn_base(2);
        let t = RelativeModel::total_algebra_for(&base, &fibre).unwrap();
        let u = t.gen(0);
        let (x, z) = (t.gen(2), t.gen(3));
        let mut dy = t.multiply(&x, &z);
        dy.add(&t.multiply(&u, &z));
        let values = vec![Element::zero(), Element::zero(), t.multiply(&u, &x), dy];
        RelativeModel::new(base, fibre, values).unwrap()
    }

    #[test]
    fn candidate_is_valid_and_refuted() {
        let rm = candidate_n2();
        assert!(rm.validate().is_ok());
        let rep = cp_nonrealization_probe(&rm, 2).unwrap();
        assert!(rep.theta_u_y_decomposable);
        assert!(rep.refutes_realization(), "{}", rep.render());
        assert_eq!(rep.theta_u, "(w,x)");
    }

    #[test]
    fn round_trip_series() {
        let rm = candidate_n2();
        let s = extract_theta_series(&rm).unwrap();
        assert_eq!(s.u_powers.len(), 1);
        let back = assemble(rm.fibre(), &s).unwrap();
        assert_eq!(back, rm);
    }

    #[test]
    fn identities_on_candidate() {
        let rm = candidate_n2();
        let r = cpn_identities(&rm).unwrap();
        assert!(r.d_squared_zero());
        assert!(r.u_components_match && r.v_component_matches);
    }

    #[test]
    fn gauge_preserves_validity() {
        let rm = candidate_n2();
        let fa = &rm.fibre().algebra;
        let cx = DerivationComplex::of_model(rm.fibre());
        let mut alpha = Derivation::zero(fa, 2);
        for b in cx.derivation_basis(2) {
            alpha.add_scaled(&Q::one(), &b);
        }
        let g = gauge(&rm, &alpha).unwrap();
        assert!(g.validate().is_ok());
        let r = cpn_identities(&g).unwrap();
        assert!(r.d_squared_zero() && r.u_components_match && r.v_component_matches);
    }
}
