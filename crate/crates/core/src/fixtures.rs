//! Bundled example models.

use crate::format::{parse, ModelFile};
use crate::gca::{Element, SullivanModel};
use crate::poset::FibrationFamily;
use crate::relative::RelativeModel;

pub const S3XCP2: &str = include_str!("../../../fixtures/s3xcp2.rht");
pub const S3: &str = include_str!("../../../fixtures/s3.rht");
pub const EXH1: &str = include_str!("../../../fixtures/exh1.rht");
pub const EXH1_FAMILY: &str = include_str!("../../../fixtures/exh1-family.rht");
pub const EXH2_FAMILY: &str = include_str!("../../../fixtures/exh2-family.rht");
pub const EXFH: &str = include_str!("../../../fixtures/exfh.rht");
pub const CP2_CANDIDATE: &str = include_str!("../../../fixtures/cp2-candidate.rht");
pub const CP3_CANDIDATE: &str = include_str!("../../../fixtures/cp3-candidate.rht");
pub const CP4_CANDIDATE: &str = include_str!("../../../fixtures/cp4-candidate.rht");
pub const CP2_BOUNDARY: &str = include_str!("../../../fixtures/cp2-boundary.rht");

/// `(file name, contents)` of every bundled fixture.
pub const ALL: [(&str, &str); 10] = [
    ("s3xcp2.rht", S3XCP2),
    ("s3.rht", S3),
    ("exh1.rht", EXH1),
    ("exh1-family.rht", EXH1_FAMILY),
    ("exh2-family.rht", EXH2_FAMILY),
    ("exfh.rht", EXFH),
    ("cp2-candidate.rht", CP2_CANDIDATE),
    ("cp3-candidate.rht", CP3_CANDIDATE),
    ("cp4-candidate.rht", CP4_CANDIDATE),
    ("cp2-boundary.rht", CP2_BOUNDARY),
];

pub fn load(text: &str) -> ModelFile {
    parse(text).expect("bundled fixture parses")
}

fn model(text: &str) -> SullivanModel {
    load(text).primary_model().expect("fixture has a model").model.clone()
}

pub fn s3xcp2() -> SullivanModel {
    model(S3XCP2)
}

pub fn s3() -> SullivanModel {
    model(S3)
}

/// `∧(x₃, y₅, z₇; 0)`.
pub fn exh1() -> SullivanModel {
    model(EXH1)
}

pub fn exfh() -> SullivanModel {
    model(EXFH)
}

/// Members labeled `(q1,q2,q3,q4)`.
pub fn exh1_family() -> FibrationFamily {
    load(EXH1_FAMILY).primary_family().unwrap().family.clone()
}

/// Members labeled `(p1,…,p5)`.
pub fn exh2_family() -> FibrationFamily {
    load(EXH2_FAMILY).primary_family().unwrap().family.clone()
}

/// Candidate relative model over the `CPⁿ` model, `n ∈ {2, 3, 4}`.
pub fn cpn_candidate(n: u32) -> RelativeModel {
    let text = match n {
        2 => CP2_CANDIDATE,
        3 => CP3_CANDIDATE,
        4 => CP4_CANDIDATE,
        _ => panic!("no candidate for n = {n}"),
    };
    load(text).primary_relative().unwrap().model.clone()
}

pub fn cp2_boundary() -> RelativeModel {
    load(CP2_BOUNDARY).primary_relative().unwrap().model.clone()
}

/// Images of `w1 … w6` under the base map pulling the `(1,1,1,1)` member
/// of the exH1 family back to the member `q`.
pub fn exh1_pullback_images(base: &SullivanModel, q: [bool; 4]) -> Vec<Element> {
    let a = &base.algebra;
    let on = |b: bool, i: usize| if b { a.gen(i) } else { Element::zero() };
    vec![
        on(q[0], 0),
        on(q[1], 1),
        on(q[2], 2),
        on(q[3], 3),
        on(q[0] && q[2], 4),
        on(q[1] && q[3], 5),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses_and_round_trips() {
        for (name, text) in ALL {
            let f = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let printed = f.print();
            let again = parse(&printed).unwrap();
            assert_eq!(again.print(), printed, "{name}");
            for m in &f.models {
                assert!(m.model.check_d_squared().is_ok(), "{name}: {}", m.name);
            }
            for r in &f.relatives {
                assert!(r.model.validate().is_ok(), "{name}: {}", r.name);
            }
        }
    }

    #[test]
    fn families_have_all_members() {
        assert_eq!(exh1_family().len(), 16);
        assert_eq!(exh2_family().len(), 32);
    }

    #[test]
    fn pullback_recovers_members() {
        let fam = exh1_family();
        let top = &fam.get("(1,1,1,1)").unwrap().model;
        for m in fam.members() {
            let q: Vec<bool> = m.label[1..m.label.len() - 1].split(',').map(|s| s == "1").collect();
            let images = exh1_pullback_images(top.base(), [q[0], q[1], q[2], q[3]]);
            let pulled = top.pullback(top.base().clone(), &images).unwrap();
            assert_eq!(pulled, m.model, "{}", m.label);
        }
    }
}
