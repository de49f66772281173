//! Plain-text model files.
//!
//! ```text
//! # S^3 x CP^2
//! model s3xcp2 {
//!   gen x : 2;
//!   gen y : 3;
//!   gen z : 5;
//!   d z = x^3;
//! }
//!
//! relative xi {
//!   base b;
//!   fibre s3xcp2;
//!   D y = u + a*x;
//! }
//!
//! family f {
//!   base b;
//!   fibre s3xcp2;
//!   param q1 q2;
//!   D y = q1*u + q2*a*x;
//! }
//! ```
//!
//! Fibre generators without a `D` line keep their fibre differential.
//! A `family` with parameters `q1 … qk` stands for the `2^k` relative models
//! obtained by setting every parameter to 0 or 1.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gca::{Algebra, Element, Generator, Monomial, SullivanModel};
use crate::linalg::{fmt_q, Q};
use crate::poset::{vector_label, FibrationFamily};
use crate::relative::{embed, RelativeModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDecl {
    pub name: String,
    pub model: SullivanModel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeDecl {
    pub name: String,
    pub base: String,
    pub fibre: String,
    pub model: RelativeModel,
}

/// One summand `c * q_i * … * m` of a templated differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateTerm {
    pub coefficient: Q,
    pub params: Vec<usize>,
    pub monomial: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDecl {
    pub name: String,
    pub base: String,
    pub fibre: String,
    pub params: Vec<String>,
    /// `(fibre generator, terms)` for each `D` line.
    pub lines: Vec<(usize, Vec<TemplateTerm>)>,
    pub family: FibrationFamily,
}

impl FamilyDecl {
    /// Parameter vectors in member order.
    pub fn assignments(&self) -> Vec<Vec<bool>> {
        assignments(self.params.len())
    }
}

fn assignments(k: usize) -> Vec<Vec<bool>> {
    (0..1usize << k)
        .map(|m| (0..k).map(|i| m >> (k - 1 - i) & 1 == 1).collect())
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct ModelFile {
    pub models: Vec<ModelDecl>,
    pub relatives: Vec<RelativeDecl>,
    pub families: Vec<FamilyDecl>,
}

impl ModelFile {
    pub fn model(&self, name: &str) -> Option<&SullivanModel> {
        self.models.iter().find(|m| m.name == name).map(|m| &m.model)
    }

    pub fn relative(&self, name: &str) -> Option<&RelativeModel> {
        self.relatives
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.model)
    }

    pub fn family(&self, name: &str) -> Option<&FibrationFamily> {
        self.families
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.family)
    }

    /// The last `model` block.
    pub fn primary_model(&self) -> Option<&ModelDecl> {
        self.models.last()
    }

    pub fn primary_relative(&self) -> Option<&RelativeDecl> {
        self.relatives.last()
    }

    pub fn primary_family(&self) -> Option<&FamilyDecl> {
        self.families.last()
    }

    pub fn print(&self) -> String {
        let mut blocks = Vec::new();
        for m in &self.models {
            blocks.push(print_model(&m.name, &m.model));
        }
        for r in &self.relatives {
            blocks.push(print_relative(&r.name, &r.base, &r.fibre, &r.model));
        }
        for f in &self.families {
            blocks.push(print_family(f));
        }
        blocks.join("\n")
    }
}

pub fn print_model(name: &str, m: &SullivanModel) -> String {
    let a = &m.algebra;
    let mut out = format!("model {name} {{\n");
    for g in a.generators() {
        let _ = writeln!(out, "  gen {} : {};", g.name, g.degree);
    }
    for (i, g) in a.generators().iter().enumerate() {
        let v = m.d.value(i);
        if !v.is_zero() {
            let _ = writeln!(out, "  d {} = {};", g.name, a.format(v));
        }
    }
    out.push_str("}\n");
    out
}

pub fn print_relative(name: &str, base: &str, fibre: &str, rm: &RelativeModel) -> String {
    let t = rm.total();
    let mut out = format!("relative {name} {{\n  base {base};\n  fibre {fibre};\n");
    for (i, g) in rm.fibre().algebra.generators().iter().enumerate() {
        let v = rm.fibre_value(i);
        if *v != rm.embed_fibre(rm.fibre().d.value(i)) {
            let _ = writeln!(out, "  D {} = {};", g.name, t.format(v));
        }
    }
    out.push_str("}\n");
    out
}

fn print_family(f: &FamilyDecl) -> String {
    let base = f.family.members()[0].model.base().clone();
    let t = RelativeModel::total_algebra_for(&base, f.family.fibre()).expect("checked at parse");
    let fa = &f.family.fibre().algebra;
    let mut out = format!(
        "family {} {{\n  base {};\n  fibre {};\n",
        f.name, f.base, f.fibre
    );
    if !f.params.is_empty() {
        let _ = writeln!(out, "  param {};", f.params.join(" "));
    }
    for (g, terms) in &f.lines {
        let mut line = String::new();
        for (k, term) in terms.iter().enumerate() {
            let neg = term.coefficient < Q::zero();
            let abs = if neg { -term.coefficient.clone() } else { term.coefficient.clone() };
            if k == 0 {
                if neg {
                    line.push('-');
                }
            } else {
                line.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !abs.is_one() || (term.params.is_empty() && term.monomial.is_one()) {
                factors.push(fmt_q(&abs));
            }
            factors.extend(term.params.iter().map(|&p| f.params[p].clone()));
            if !term.monomial.is_one() {
                factors.push(t.format_monomial(&term.monomial));
            }
            line.push_str(&factors.join("*"));
        }
        if terms.is_empty() {
            line.push('0');
        }
        let _ = writeln!(out, "  D {} = {};", fa.generators()[*g].name, line);
    }
    out.push_str("}\n");
    out
}

pub fn parse(text: &str) -> Result<ModelFile> {
    let tokens = lex(text)?;
    Parser {
        tokens,
        pos: 0,
        file: ModelFile::default(),
    }
    .file()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: ln + 1,
                    col,
                });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Int(s.parse().expect("digits")),
                    line: ln + 1,
                    col,
                });
            } else if "{};:=+-*/^".contains(c) {
                out.push(Token {
                    tok: Tok::Sym(c),
                    line: ln + 1,
                    col,
                });
                i += 1;
            } else {
                return Err(err(ln + 1, col, format!("unexpected character `{c}`")));
            }
        }
    }
    let line = text.lines().count() + 1;
    out.push(Token {
        tok: Tok::Eof,
        line,
        col: 1,
    });
    Ok(out)
}

/// Names that may appear as scalar factors in a term.
struct Scope<'a> {
    algebra: &'a Algebra,
    params: &'a [String],
}

/// A parsed summand: coefficient, parameters, algebra element.
type Term = (Q, Vec<usize>, Element);

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    file: ModelFile,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(err(t.line, t.col, format!("expected {what}"))),
        }
    }

    fn sym(&mut self, c: char) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(err(t.line, t.col, format!("expected `{c}`")))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Token> {
        let (s, t) = self.ident(&format!("`{kw}`"))?;
        if s == kw {
            Ok(t)
        } else {
            Err(err(t.line, t.col, format!("expected `{kw}`, found `{s}`")))
        }
    }

    fn uint(&mut self) -> Result<(BigInt, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => Ok((n.clone(), t.clone())),
            _ => Err(err(t.line, t.col, "expected an integer")),
        }
    }

    fn file(mut self) -> Result<ModelFile> {
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(self.file),
                Tok::Ident(kw) if kw == "model" => self.model_block()?,
                Tok::Ident(kw) if kw == "relative" => self.relative_block()?,
                Tok::Ident(kw) if kw == "family" => self.family_block()?,
                _ => return Err(err(t.line, t.col, "expected `model`, `relative` or `family`")),
            }
        }
    }

    fn check_fresh(&self, name: &str, t: &Token) -> Result<()> {
        let f = &self.file;
        let taken = f.models.iter().any(|m| m.name == name)
            || f.relatives.iter().any(|m| m.name == name)
            || f.families.iter().any(|m| m.name == name);
        if taken {
            Err(err(t.line, t.col, format!("block `{name}` defined twice")))
        } else {
            Ok(())
        }
    }

    fn model_block(&mut self) -> Result<()> {
        self.next();
        let (name, nt) = self.ident("a block name")?;
        self.check_fresh(&name, &nt)?;
        self.sym('{')?;
        let mut gens: Vec<Generator> = Vec::new();
        let mut algebra: Option<Algebra> = None;
        let mut values: Vec<Option<Element>> = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Sym('}') => {
                    self.next();
                    break;
                }
                Tok::Ident(kw) if kw == "gen" => {
                    if algebra.is_some() {
                        return Err(err(t.line, t.col, "`gen` after a differential line"));
                    }
                    self.next();
                    let (g, gt) = self.ident("a generator name")?;
                    self.sym(':')?;
                    let (deg, dt) = self.uint()?;
                    self.sym(';')?;
                    let degree = u32::try_from(&deg)
                        .map_err(|_| err(dt.line, dt.col, "degree out of range"))?;
                    if degree < 2 {
                        return Err(err(
                            dt.line,
                            dt.col,
                            format!("generator `{g}` has degree {degree}; generators must have degree at least 2"),
                        ));
                    }
                    if gens.iter().any(|x| x.name == g) {
                        return Err(err(gt.line, gt.col, format!("duplicate generator `{g}`")));
                    }
                    gens.push(Generator::new(g, degree));
                }
                Tok::Ident(kw) if kw == "d" => {
                    self.next();
                    let alg = algebra.get_or_insert_with(|| {
                        Algebra::new(gens.clone()).expect("generators checked")
                    });
                    values.resize(alg.len(), None);
                    let (g, gt) = self.ident("a generator name")?;
                    let i = alg
                        .index_of(&g)
                        .ok_or_else(|| err(gt.line, gt.col, format!("unknown generator `{g}`")))?;
                    if values[i].is_some() {
                        return Err(err(gt.line, gt.col, format!("second differential for `{g}`")));
                    }
                    self.sym('=')?;
                    let alg = alg.clone();
                    let scope = Scope {
                        algebra: &alg,
                        params: &[],
                    };
                    let (value, et) = self.element(&scope)?;
                    self.sym(';')?;
                    check_degree(&alg, &value, alg.degree(i) + 1, &format!("d {g}"), &et)?;
                    values[i] = Some(value);
                }
                _ => return Err(err(t.line, t.col, "expected `gen`, `d` or `}`")),
            }
        }
        let algebra = match algebra {
            Some(a) => a,
            None => Algebra::new(gens).expect("generators checked"),
        };
        let values: Vec<Element> = (0..algebra.len())
            .map(|i| values.get(i).cloned().flatten().unwrap_or_else(Element::zero))
            .collect();
        let d = crate::gca::Differential::new(&algebra, values)
            .map_err(|e| err(nt.line, nt.col, e.to_string()))?;
        self.file.models.push(ModelDecl {
            name,
            model: SullivanModel::new(algebra, d),
        });
        Ok(())
    }

    fn model_ref(&mut self, kw: &str) -> Result<(String, SullivanModel)> {
        self.keyword(kw)?;
        let (name, t) = self.ident("a model name")?;
        self.sym(';')?;
        let m = self
            .file
            .model(&name)
            .cloned()
            .ok_or_else(|| err(t.line, t.col, format!("unknown model `{name}`")))?;
        Ok((name, m))
    }

    fn header(&mut self) -> Result<(String, Token, String, SullivanModel, String, SullivanModel, Algebra)> {
        self.next();
        let (name, nt) = self.ident("a block name")?;
        self.check_fresh(&name, &nt)?;
        self.sym('{')?;
        let (bn, base) = self.model_ref("base")?;
        let (fname, fibre) = self.model_ref("fibre")?;
        let total = RelativeModel::total_algebra_for(&base, &fibre)
            .map_err(|e| err(nt.line, nt.col, e.to_string()))?;
        Ok((name, nt, bn, base, fname, fibre, total))
    }

    /// `D g = expr;` lines up to the closing brace.
    fn d_lines(&mut self, fibre: &SullivanModel, scope: &Scope) -> Result<Vec<(usize, Vec<Term>, Token)>> {
        let mut lines: Vec<(usize, Vec<Term>, Token)> = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Sym('}') => {
                    self.next();
                    return Ok(lines);
                }
                Tok::Ident(kw) if kw == "D" => {
                    self.next();
                    let (g, gt) = self.ident("a fibre generator name")?;
                    let i = fibre.algebra.index_of(&g).ok_or_else(|| {
                        err(gt.line, gt.col, format!("unknown fibre generator `{g}`"))
                    })?;
                    if lines.iter().any(|l| l.0 == i) {
                        return Err(err(gt.line, gt.col, format!("second differential for `{g}`")));
                    }
                    self.sym('=')?;
                    let et = self.peek().clone();
                    let terms = self.terms(scope)?;
                    self.sym(';')?;
                    let expected = fibre.algebra.degree(i) + 1;
                    for (_, _, e) in &terms {
                        check_degree(scope.algebra, e, expected, &format!("D {g}"), &et)?;
                    }
                    lines.push((i, terms, et));
                }
                _ => return Err(err(t.line, t.col, "expected `D` or `}`")),
            }
        }
    }

    fn relative_block(&mut self) -> Result<()> {
        let (name, nt, bn, base, fname, fibre, total) = self.header()?;
        let scope = Scope {
            algebra: &total,
            params: &[],
        };
        let lines = self.d_lines(&fibre, &scope)?;
        let mut values = fibre_defaults(&base, &fibre);
        for (i, terms, _) in lines {
            values[i] = sum_terms(&terms, &[]);
        }
        let model = RelativeModel::new(base, fibre, values)
            .map_err(|e| err(nt.line, nt.col, e.to_string()))?;
        self.file.relatives.push(RelativeDecl {
            name,
            base: bn,
            fibre: fname,
            model,
        });
        Ok(())
    }

    fn family_block(&mut self) -> Result<()> {
        let (name, nt, bn, base, fname, fibre, total) = self.header()?;
        let mut params: Vec<String> = Vec::new();
        if matches!(&self.peek().tok, Tok::Ident(k) if k == "param") {
            self.next();
            while let Tok::Ident(p) = self.peek().tok.clone() {
                let t = self.next();
                if total.index_of(&p).is_some() || params.contains(&p) {
                    return Err(err(t.line, t.col, format!("parameter `{p}` clashes with another name")));
                }
                params.push(p);
            }
            self.sym(';')?;
        }
        let scope = Scope {
            algebra: &total,
            params: &params,
        };
        let lines = self.d_lines(&fibre, &scope)?;
        let mut members = Vec::new();
        for a in assignments(params.len()) {
            let mut values = fibre_defaults(&base, &fibre);
            for (i, terms, _) in &lines {
                values[*i] = sum_terms(terms, &a);
            }
            let model = RelativeModel::new(base.clone(), fibre.clone(), values)
                .map_err(|e| err(nt.line, nt.col, e.to_string()))?;
            members.push((vector_label(&a), model));
        }
        let family = FibrationFamily::new(name.clone(), fibre, members)
            .map_err(|e| err(nt.line, nt.col, e.to_string()))?;
        let lines = lines
            .into_iter()
            .map(|(i, terms, _)| {
                let terms = terms
                    .into_iter()
                    .filter_map(|(c, ps, e)| {
                        let (m, k) = e.terms().next()?;
                        Some(TemplateTerm {
                            coefficient: c * k,
                            params: ps,
                            monomial: m.clone(),
                        })
                    })
                    .collect();
                (i, terms)
            })
            .collect();
        self.file.families.push(FamilyDecl {
            name,
            base: bn,
            fibre: fname,
            params,
            lines,
            family,
        });
        Ok(())
    }

    fn element(&mut self, scope: &Scope) -> Result<(Element, Token)> {
        let t = self.peek().clone();
        let terms = self.terms(scope)?;
        Ok((sum_terms(&terms, &[]), t))
    }

    fn terms(&mut self, scope: &Scope) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        let mut sign = Q::one();
        if self.eat_sym('-') {
            sign = -sign;
        } else {
            self.eat_sym('+');
        }
        loop {
            let (c, ps, e) = self.term(scope)?;
            out.push((c * &sign, ps, e));
            if self.eat_sym('+') {
                sign = Q::one();
            } else if self.eat_sym('-') {
                sign = -Q::one();
            } else {
                return Ok(out);
            }
        }
    }

    fn term(&mut self, scope: &Scope) -> Result<Term> {
        let a = scope.algebra;
        let mut coef = Q::one();
        let mut params = Vec::new();
        let mut elem = a.one();
        loop {
            let t = self.next();
            match &t.tok {
                Tok::Int(n) => {
                    let mut c = Q::from_integer(n.clone());
                    if self.eat_sym('/') {
                        let (d, dt) = self.uint()?;
                        if d.is_zero() {
                            return Err(err(dt.line, dt.col, "division by zero"));
                        }
                        c /= Q::from_integer(d);
                    }
                    coef *= c;
                }
                Tok::Ident(s) => {
                    if let Some(p) = scope.params.iter().position(|q| q == s) {
                        params.push(p);
                    } else {
                        let i = a
                            .index_of(s)
                            .ok_or_else(|| err(t.line, t.col, format!("unknown generator `{s}`")))?;
                        let mut exp = 1u16;
                        if self.eat_sym('^') {
                            let (e, et) = self.uint()?;
                            exp = u16::try_from(&e)
                                .map_err(|_| err(et.line, et.col, "exponent out of range"))?;
                            if a.degree(i) % 2 == 1 && exp > 1 {
                                return Err(err(
                                    et.line,
                                    et.col,
                                    format!("odd generator `{s}` raised to power {exp}"),
                                ));
                            }
                        }
                        elem = a.multiply(&elem, &a.power(i, exp));
                    }
                }
                _ => return Err(err(t.line, t.col, "expected a number or a name")),
            }
            if !self.eat_sym('*') {
                break;
            }
        }
        if coef.is_zero() {
            elem = Element::zero();
        }
        Ok((coef, params, elem))
    }
}

/// `D v = d v` for fibre generators without a `D` line.
fn fibre_defaults(base: &SullivanModel, fibre: &SullivanModel) -> Vec<Element> {
    let nw = base.algebra.len();
    let len = nw + fibre.algebra.len();
    fibre.d.values().iter().map(|v| embed(v, nw, len)).collect()
}

/// `Σ c · e` over the terms whose parameters are all set.
fn sum_terms(terms: &[Term], assignment: &[bool]) -> Element {
    let mut out = Element::zero();
    for (c, ps, e) in terms {
        if ps.iter().all(|&p| assignment[p]) {
            out.add_scaled(c, e);
        }
    }
    out
}

fn check_degree(a: &Algebra, e: &Element, expected: u32, what: &str, at: &Token) -> Result<()> {
    match a.degree_of(e) {
        Err(_) => Err(err(at.line, at.col, format!("{what}: value is not homogeneous"))),
        Ok(Some(found)) if found != expected => Err(err(
            at.line,
            at.col,
            format!("degree mismatch for {what}: expected {expected}, found {found}"),
        )),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S3XCP2: &str = "# S^3 x CP^2\nmodel s3xcp2 {\n  gen x : 2;\n  gen y : 3;\n  gen z : 5;\n  d z = x^3;\n}\n";

    #[test]
    fn parses_model() {
        let f = parse(S3XCP2).unwrap();
        let m = f.model("s3xcp2").unwrap();
        assert_eq!(m.algebra.len(), 3);
        let a = &m.algebra;
        assert_eq!(m.d.value(2), &a.power(0, 3));
        assert!(m.check_d_squared().is_ok());
    }

    #[test]
    fn empty_model_is_the_ground_field() {
        let f = parse("model q {\n}\n").unwrap();
        assert_eq!(f.model("q").unwrap().algebra.len(), 0);
    }

    #[test]
    fn degree_mismatch_reports_position() {
        let text = "model m {\n  gen x : 2;\n  gen y : 3;\n  gen z : 5;\n  d z = x^2;\n}\n";
        match parse(text) {
            Err(Error::Parse { line, col, msg }) => {
                assert_eq!((line, col), (5, 9));
                assert!(msg.contains("expected 6, found 4"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn guards() {
        let bad = [
            ("model m {\n gen x : 1;\n}", "degree at least 2"),
            ("model m {\n gen y : 3;\n gen z : 7;\n d z = y^2;\n}", "odd generator"),
            ("model m {\n gen x : 2;\n d w = x;\n}", "unknown generator"),
            ("model m {\n gen x : 2 \n}", "expected `;`"),
            ("model m {\n gen x : 2;\n d x = ?;\n}", "unexpected character"),
        ];
        for (text, needle) in bad {
            let e = parse(text).unwrap_err().to_string();
            assert!(e.contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn relative_and_family_round_trip() {
        let text = format!(
            "{S3XCP2}model b {{\n  gen u : 4;\n  gen a : 2;\n}}\n\
             relative xi {{\n  base b;\n  fibre s3xcp2;\n  D y = u + a*x;\n}}\n\
             family f {{\n  base b;\n  fibre s3xcp2;\n  param q1 q2;\n  D y = q1*u - 1/2*q2*a*x;\n}}\n"
        );
        let f = parse(&text).unwrap();
        let rm = f.relative("xi").unwrap();
        assert!(rm.validate().is_ok());
        let fam = f.family("f").unwrap();
        assert_eq!(fam.len(), 4);
        assert_eq!(fam.members()[3].label, "(1,1)");
        let printed = f.print();
        let again = parse(&printed).unwrap();
        assert_eq!(again.print(), printed);
        assert_eq!(again.relative("xi"), f.relative("xi"));
        assert_eq!(again.families[0].lines, f.families[0].lines);
        assert!(printed.contains("D y = q1*u - 1/2*q2*a*x;"), "{printed}");
    }
}
