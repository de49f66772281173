use std::path::PathBuf;

use baut_cli::{run, Output, EXIT_INVALID, EXIT_OK, EXIT_USAGE};

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn baut(args: &[&str]) -> Output {
    run(std::iter::once("baut").chain(args.iter().copied()))
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("baut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn homology_table_matches_golden() {
    let out = baut(&["homology", &fixture("s3xcp2.rht")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout, include_str!("golden/s3xcp2-homology.txt"));
}

#[test]
fn universal_model_matches_golden() {
    let out = baut(&["universal", &fixture("s3xcp2.rht")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout, include_str!("golden/s3xcp2-universal.txt"));
    let d_z = out.stdout.lines().find(|l| l.trim_start().starts_with("D z =")).unwrap();
    assert_eq!(d_z.matches(['+', '-']).count(), 3, "{d_z}");
}

#[test]
fn universal_output_reparses() {
    let out = baut(&["universal", &fixture("s3xcp2.rht")]);
    let f = baut_core::format::parse(&out.stdout).unwrap();
    assert!(f.primary_relative().unwrap().model.validate().is_ok());
}

#[test]
fn universal_accepts_explicit_base() {
    let printed = baut(&["cochains", &fixture("s3xcp2.rht")]).stdout;
    let base = temp_file("base.rht", &printed);
    let out = baut(&["universal", &fixture("s3xcp2.rht"), "--base", base.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.contains("# universal: yes"));
}

#[test]
fn gottlieb_matches_golden() {
    let out = baut(&["gottlieb", &fixture("exfh.rht")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout, include_str!("golden/exfh-gottlieb.txt"));
}

#[test]
fn depth_of_exh1_family_is_four() {
    let out = baut(&["depth", &fixture("exh1-family.rht")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout, "4\n");
}

#[test]
fn poset_writes_dot() {
    let dir = std::env::temp_dir().join(format!("baut-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dot = dir.join("exh1.dot");
    let out = baut(&["poset", &fixture("exh1-family.rht"), "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("nodes: 16\ncovers: 32\ndepth: 4\n"));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches(" -> ").count(), 32);
}

#[test]
fn reports_are_deterministic() {
    for args in [
        vec!["poset", "exh2-family.rht"],
        vec!["eval-subgroup", "exh1-family.rht"],
        vec!["homology", "exfh.rht"],
    ] {
        let path = fixture(args[1]);
        let a = baut(&[args[0], &path]);
        let b = baut(&[args[0], &path]);
        assert_eq!(a, b);
    }
}

#[test]
fn check_passes_on_every_fixture() {
    for name in ["s3xcp2.rht", "s3.rht", "exh1.rht", "exh1-family.rht", "exh2-family.rht", "exfh.rht"] {
        let out = baut(&["check", &fixture(name)]);
        assert_eq!(out.code, EXIT_OK, "{name}: {}", out.stderr);
    }
}

#[test]
fn check_reports_d_squared_witness() {
    let p = temp_file(
        "bad.rht",
        "model bad {\n  gen a : 2;\n  gen b : 3;\n  gen c : 4;\n  d b = a^2;\n  d c = a*b;\n}\n",
    );
    let out = baut(&["check", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INVALID);
    assert!(out.stderr.contains("d^2(c) = a^3"), "{}", out.stderr);
}

#[test]
fn check_reports_invalid_relative_model() {
    let p = temp_file(
        "badrel.rht",
        "model b {\n  gen u : 2;\n  gen v : 3;\n  d v = u^2;\n}\nmodel f {\n  gen x : 3;\n  gen y : 5;\n}\n\
         relative r {\n  base b;\n  fibre f;\n  D y = v*x;\n}\n",
    );
    let out = baut(&["check", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INVALID, "{}", out.stdout);
    assert!(out.stderr.starts_with("relative r: y"), "{}", out.stderr);
}

#[test]
fn degree_mismatch_is_a_usage_error() {
    let p = temp_file("mismatch.rht", "model m {\n  gen x : 2;\n  gen y : 3;\n  gen z : 5;\n  d z = x^2;\n}\n");
    let out = baut(&["check", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("expected 6, found 4"), "{}", out.stderr);
}

#[test]
fn missing_file_and_unknown_command() {
    assert_eq!(baut(&["check", "/nonexistent/x.rht"]).code, EXIT_USAGE);
    assert_eq!(baut(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(baut(&["cpn-check", &fixture("cp2-candidate.rht"), "--n", "7"]).code, EXIT_USAGE);
}

#[test]
fn cpn_check_runs_on_candidates() {
    for (n, name) in [("2", "cp2-candidate.rht"), ("3", "cp3-candidate.rht"), ("4", "cp4-candidate.rht")] {
        let out = baut(&["cpn-check", &fixture(name), "--n", n]);
        assert_eq!(out.code, EXIT_OK, "{name}: {}", out.stderr);
        assert!(out.stdout.contains("realization refuted: yes"), "{}", out.stdout);
    }
}

#[test]
fn homology_flags() {
    let rel = baut(&["homology", &fixture("cp2-candidate.rht"), "--relative", "--degrees", "1..3"]);
    assert_eq!(rel.code, EXIT_OK, "{}", rel.stderr);
    assert!(rel.stdout.starts_with("degree | dim | representatives\n     3 |"));
    let based = baut(&["homology", &fixture("cp2-candidate.rht"), "--based"]);
    assert_eq!(based.code, EXIT_OK, "{}", based.stderr);
    assert_eq!(baut(&["homology", &fixture("s3.rht"), "--degrees", "3..1"]).code, EXIT_USAGE);
}

#[test]
fn yamaguchi_over_a_family() {
    let out = baut(&["yamaguchi", &fixture("exh1-family.rht")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout.matches("== exh1").count(), 16);
}

#[test]
fn pi_finite_profile_passes() {
    let out = baut(&["pi-finite-profile", &fixture("exfh.rht")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
}
