//! Command-line surface over `baut_core`.
//!
//! [`run`] takes the full argument vector and returns the exit status with
//! the report text, so the binary and the integration tests share one path.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use baut_core::classifying::{
    build_universal, build_universal_with_base, gottlieb_group, model_gottlieb_dims, verify_universal,
    FiniteDgla,
};
use baut_core::complex::{pi_finite_profile, DerivationComplex, GradedSubspace};
use baut_core::cpn::{cp_nonrealization_probe, cpn_identities};
use baut_core::format::{parse, print_model, print_relative, ModelFile};
use baut_core::linalg::fmt_combination;
use baut_core::poset::build_poset;
use baut_core::relative::{FibreHomology, RelativeModel};
use baut_core::{Error, SullivanModel};
use clap::{Parser, Subcommand};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "baut", version, about = "Derivation Lie models, evaluation subgroups and fibration posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a file and verify d² = 0 and every relative model.
    Check { file: PathBuf },
    /// Homology of the derivation complex, with its brackets.
    Homology {
        file: PathBuf,
        /// Use the derivations of a relative model that vanish on the base.
        #[arg(long, conflicts_with = "based")]
        relative: bool,
        /// Use the derivations of the total space that vanish on the base
        /// generators, valued in the whole algebra.
        #[arg(long)]
        based: bool,
        /// Degree range `a..b`, inclusive.
        #[arg(long, value_parser = parse_range)]
        degrees: Option<RangeInclusive<i32>>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Gottlieb group of the classifying space of fibrations with the given fibre.
    Gottlieb {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Evaluation subgroup of a relative model, or of each family member,
    /// in fibre derivation homology.
    EvalSubgroup {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Image of the evaluation subgroup in the dual of the fibre generators.
    Yamaguchi {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Cochain model of the homology Lie algebra of derivations.
    Cochains {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Universal relative model with the given fibre.
    Universal {
        file: PathBuf,
        /// Base model to use in place of the computed one.
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Poset of evaluation subgroups over a family.
    Poset {
        file: PathBuf,
        /// Write the Hasse diagram in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Length of the longest chain in the poset of a family.
    Depth {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
    },
    /// Realization identities and probe for a relative model over CP^n.
    CpnCheck {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4))]
        n: u32,
        #[arg(long)]
        name: Option<String>,
    },
    /// Top-degree derivations and finiteness of every model in a file.
    PiFiniteProfile { file: PathBuf },
}

fn parse_range(s: &str) -> Result<RangeInclusive<i32>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, found `{s}`"))?;
    let a: i32 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: i32 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

/// Exit status and the text written to stdout and stderr.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Output { code: EXIT_USAGE, stdout: String::new(), stderr: msg.into() }
    }

    fn invalid(stdout: String, witness: impl Into<String>) -> Self {
        Output { code: EXIT_INVALID, stdout, stderr: witness.into() }
    }
}

/// Failure inside a command, classified by exit status.
enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::LowDegree { .. }
            | Error::DuplicateGenerator(_)
            | Error::UnknownGenerator(_)
            | Error::OddPower { .. }
            | Error::DegreeMismatch { .. }
            | Error::Inhomogeneous(_) => Failure::Usage(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type CmdResult = Result<Output, Failure>;

/// Runs one command. `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output::usage(text)
            } else {
                Output::ok(text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(Failure::Usage(m)) => Output::usage(format!("error: {m}\n")),
        Err(Failure::Invalid(m)) => Output::invalid(String::new(), format!("error: {m}\n")),
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Check { file } => check(&load(&file)?),
        Command::Homology { file, relative, based, degrees, name } => {
            homology(&load(&file)?, relative, based, degrees, name.as_deref())
        }
        Command::Gottlieb { file, name } => gottlieb(&load(&file)?, name.as_deref()),
        Command::EvalSubgroup { file, name } => eval_subgroup(&load(&file)?, name.as_deref()),
        Command::Yamaguchi { file, name } => yamaguchi(&load(&file)?, name.as_deref()),
        Command::Cochains { file, name } => cochains(&load(&file)?, name.as_deref()),
        Command::Universal { file, base, name } => {
            let base = base.map(|b| load(&b)).transpose()?;
            universal(&load(&file)?, base.as_ref(), name.as_deref())
        }
        Command::Poset { file, dot, name } => poset(&load(&file)?, dot.as_deref(), name.as_deref()),
        Command::Depth { file, name } => depth(&load(&file)?, name.as_deref()),
        Command::CpnCheck { file, n, name } => cpn_check(&load(&file)?, n, name.as_deref()),
        Command::PiFiniteProfile { file } => pi_finite(&load(&file)?),
    }
}

fn load(path: &Path) -> Result<ModelFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match Failure::from(e) {
        Failure::Usage(m) | Failure::Invalid(m) => Failure::Usage(format!("{}:{m}", path.display())),
    })
}

fn pick_model<'a>(f: &'a ModelFile, name: Option<&str>) -> Result<(&'a str, &'a SullivanModel), Failure> {
    let decl = match name {
        Some(n) => f.models.iter().find(|m| m.name == n),
        None => f.primary_model(),
    };
    decl.map(|d| (d.name.as_str(), &d.model))
        .ok_or_else(|| Failure::Usage(missing("model", name)))
}

fn pick_relative<'a>(f: &'a ModelFile, name: Option<&str>) -> Result<&'a baut_core::format::RelativeDecl, Failure> {
    match name {
        Some(n) => f.relatives.iter().find(|r| r.name == n),
        None => f.primary_relative(),
    }
    .ok_or_else(|| Failure::Usage(missing("relative", name)))
}

fn pick_family<'a>(f: &'a ModelFile, name: Option<&str>) -> Result<&'a baut_core::format::FamilyDecl, Failure> {
    match name {
        Some(n) => f.families.iter().find(|r| r.name == n),
        None => f.primary_family(),
    }
    .ok_or_else(|| Failure::Usage(missing("family", name)))
}

fn missing(kind: &str, name: Option<&str>) -> String {
    match name {
        Some(n) => format!("no {kind} block named `{n}`"),
        None => format!("file has no {kind} block"),
    }
}

fn check(f: &ModelFile) -> CmdResult {
    let mut out = String::new();
    for m in &f.models {
        if let Err(w) = m.model.check_d_squared() {
            let a = &m.model.algebra;
            let witness = format!(
                "model {}: d^2({}) = {}\n",
                m.name,
                a.generators()[w.generator].name,
                a.format(&w.residual)
            );
            return Ok(Output::invalid(out, witness));
        }
        let _ = writeln!(out, "model {}: ok ({} generators)", m.name, m.model.algebra.len());
    }
    for r in &f.relatives {
        if let Err(w) = r.model.validate() {
            return Ok(Output::invalid(out, format!("relative {}: {w}\n", r.name)));
        }
        let _ = writeln!(out, "relative {}: ok", r.name);
    }
    for fam in &f.families {
        let _ = writeln!(out, "family {}: ok ({} members)", fam.name, fam.family.len());
    }
    Ok(Output::ok(out))
}

fn homology(
    f: &ModelFile,
    relative: bool,
    based: bool,
    degrees: Option<RangeInclusive<i32>>,
    name: Option<&str>,
) -> CmdResult {
    let cx: DerivationComplex = if relative || based {
        let r = &pick_relative(f, name)?.model;
        if relative {
            r.relative_complex()
        } else {
            r.based_complex()
        }
    } else {
        DerivationComplex::of_model(pick_model(f, name)?.1)
    };
    let h = match degrees {
        Some(r) => cx.homology_range(r),
        None => cx.homology_all(),
    };
    let table = cx.bracket_table(&h)?;
    let mut out = cx.format_homology(&h);
    out.push_str("brackets:\n");
    if table.is_abelian() {
        out.push_str("all brackets vanish\n");
    } else {
        out.push_str(&cx.format_brackets(&h, &table));
    }
    Ok(Output::ok(out))
}

fn render_subgroup(fh: &FibreHomology, g: &GradedSubspace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "degree | dim | basis");
    for (n, s) in g.parts.iter().rev() {
        if s.dim() == 0 {
            continue;
        }
        let rows: Vec<String> = s
            .rows()
            .iter()
            .map(|v| {
                let terms: Vec<_> = v
                    .iter()
                    .map(|(k, c)| (c.clone(), fh.complex.class_name(&fh.homology, (*n, *k))))
                    .collect();
                fmt_combination(&terms)
            })
            .collect();
        let _ = writeln!(out, "{n:>6} | {:>3} | {}", s.dim(), rows.join(", "));
    }
    let _ = writeln!(out, "total dimension {}", g.total_dim());
    out
}

fn gottlieb(f: &ModelFile, name: Option<&str>) -> CmdResult {
    let (_, fibre) = pick_model(f, name)?;
    let fh = FibreHomology::new(fibre);
    let um = build_universal(fibre)?;
    let g = gottlieb_group(&um.model, &fh)?;
    let mut out = String::from("evaluation subgroup of the universal fibration:\n");
    out.push_str(&render_subgroup(&fh, &g));
    let dims = model_gottlieb_dims(um.model.base())?;
    out.push_str("Gottlieb group of the classifying space, by homotopy degree:\n");
    for (n, d) in &dims {
        let _ = writeln!(out, "{n:>6} | {d}");
    }
    Ok(Output::ok(out))
}

/// The named or last relative block, or else every member of the last family.
fn relatives<'a>(f: &'a ModelFile, name: Option<&str>) -> Result<Vec<(String, &'a RelativeModel)>, Failure> {
    if name.is_none() && f.relatives.is_empty() {
        if let Some(fam) = f.primary_family() {
            return Ok(fam
                .family
                .members()
                .iter()
                .map(|m| (format!("{} {}", fam.name, m.label), &m.model))
                .collect());
        }
    }
    let r = pick_relative(f, name)?;
    Ok(vec![(r.name.clone(), &r.model)])
}

fn per_relative(
    f: &ModelFile,
    name: Option<&str>,
    report: impl Fn(&RelativeModel) -> String,
) -> CmdResult {
    let rs = relatives(f, name)?;
    if rs.len() == 1 {
        return Ok(Output::ok(report(rs[0].1)));
    }
    let mut out = String::new();
    for (label, r) in rs {
        let _ = writeln!(out, "== {label}");
        out.push_str(&report(r));
    }
    Ok(Output::ok(out))
}

fn eval_subgroup(f: &ModelFile, name: Option<&str>) -> CmdResult {
    per_relative(f, name, |r| {
        let fh = FibreHomology::new(r.fibre());
        render_subgroup(&fh, &r.evaluation_subgroup(&fh))
    })
}

fn yamaguchi(f: &ModelFile, name: Option<&str>) -> CmdResult {
    per_relative(f, name, render_yamaguchi)
}

fn render_yamaguchi(r: &RelativeModel) -> String {
    let fa = &r.fibre().algebra;
    let g = r.yamaguchi_group();
    let mut out = String::from("degree | dim | basis\n");
    for (n, s) in g.parts.iter().rev() {
        let gens = fa.generators_of_degree(*n as u32);
        let rows: Vec<String> = s
            .rows()
            .iter()
            .map(|v| {
                let terms: Vec<_> = v
                    .iter()
                    .map(|(j, c)| (c.clone(), format!("{}*", fa.generators()[gens[*j]].name)))
                    .collect();
                fmt_combination(&terms)
            })
            .collect();
        let _ = writeln!(out, "{n:>6} | {:>3} | {}", s.dim(), rows.join(", "));
    }
    let _ = writeln!(out, "total dimension {}", g.total_dim());
    out
}

fn cochains(f: &ModelFile, name: Option<&str>) -> CmdResult {
    let (n, m) = pick_model(f, name)?;
    let fh = FibreHomology::new(m);
    let table = fh.complex.bracket_table(&fh.homology)?;
    let lie = FiniteDgla::from_homology(&fh.complex, &fh.homology, &table)?;
    let c = lie.cochains_default(&m.algebra)?;
    let mut out = String::new();
    for (name, deg) in lie.names().iter().zip(lie.degrees()) {
        let _ = writeln!(out, "# {name} : Lie degree {deg}");
    }
    out.push_str(&print_model(&format!("{n}_cochains"), &c));
    Ok(Output::ok(out))
}

fn universal(f: &ModelFile, base: Option<&ModelFile>, name: Option<&str>) -> CmdResult {
    let (n, fibre) = pick_model(f, name)?;
    let um = match base {
        Some(b) => build_universal_with_base(fibre, pick_model(b, None)?.1.clone())?,
        None => build_universal(fibre)?,
    };
    let base_name = format!("{n}_base");
    let mut out = print_model(&base_name, um.model.base());
    out.push('\n');
    out.push_str(&print_model(n, fibre));
    out.push('\n');
    out.push_str(&print_relative(&format!("{n}_universal"), &base_name, n, &um.model));
    let report = verify_universal(&um.model);
    let rendered: String = report.render().lines().map(|l| format!("# {l}\n")).collect();
    out.push_str(&rendered);
    if report.passes() {
        Ok(Output::ok(out))
    } else {
        Ok(Output::invalid(out, "error: universality check failed\n"))
    }
}

fn poset(f: &ModelFile, dot: Option<&Path>, name: Option<&str>) -> CmdResult {
    let fam = &pick_family(f, name)?.family;
    let p = build_poset(fam);
    let mut out = p.render();
    out.push_str("maximal chain:\n");
    out.push_str(&p.render_chain(&p.maximal_chain()));
    if let Some(path) = dot {
        std::fs::write(path, p.hasse_dot())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(Output::ok(out))
}

fn depth(f: &ModelFile, name: Option<&str>) -> CmdResult {
    let fam = &pick_family(f, name)?.family;
    Ok(Output::ok(format!("{}\n", build_poset(fam).depth())))
}

fn cpn_check(f: &ModelFile, n: u32, name: Option<&str>) -> CmdResult {
    let r = &pick_relative(f, name)?.model;
    if let Err(w) = r.validate() {
        return Ok(Output::invalid(String::new(), format!("error: {w}\n")));
    }
    let ids = cpn_identities(r)?;
    let mut out = ids.render();
    out.push_str(&cp_nonrealization_probe(r, n)?.render());
    if ids.d_squared_zero() && ids.u_components_match && ids.v_component_matches {
        Ok(Output::ok(out))
    } else {
        Ok(Output::invalid(out, "error: identities fail\n"))
    }
}

fn pi_finite(f: &ModelFile) -> CmdResult {
    let mut out = String::new();
    let mut ok = true;
    for m in &f.models {
        let p = pi_finite_profile(&m.model);
        ok &= p.passes();
        let _ = writeln!(out, "model {}:", m.name);
        out.push_str(&p.report());
    }
    if ok {
        Ok(Output::ok(out))
    } else {
        Ok(Output::invalid(out, "error: profile check failed\n"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..5"), Ok(1..=5));
        assert_eq!(parse_range(" 2 .. 2"), Ok(2..=2));
        assert!(parse_range("5..1").is_err());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn help_exits_zero() {
        let out = run(["baut", "--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("pi-finite-profile"));
    }
}
