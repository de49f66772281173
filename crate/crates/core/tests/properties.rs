mod common;

use common::{cases, pool};
use baut_core::{Algebra, Monomial};
use proptest::prelude::*;

proptest! {
    #![proptest_config(cases())]

    #[test]
    fn graded_commutativity(mut p in pool()) {
        common::graded_commutativity(&mut p)?;
    }

    #[test]
    fn associativity(mut p in pool()) {
        common::associativity(&mut p)?;
    }

    #[test]
    fn leibniz(mut p in pool()) {
        common::leibniz(&mut p)?;
    }

    #[test]
    fn d_squared_vanishes(mut p in pool()) {
        common::d_squared_vanishes(&mut p)?;
    }

    #[test]
    fn basis_matches_generating_function(mut p in pool()) {
        common::basis_matches_generating_function(&mut p)?;
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi(mut p in pool()) {
        common::bracket_antisymmetry_and_jacobi(&mut p)?;
    }

    #[test]
    fn delta_squares_to_zero_and_is_a_derivation(mut p in pool()) {
        common::delta_squares_to_zero_and_is_a_derivation(&mut p)?;
    }

    #[test]
    fn homology_is_independent_of_generator_order(mut p in pool()) {
        common::homology_is_independent_of_generator_order(&mut p)?;
    }

    #[test]
    fn cochains_of_truncated_derivations(mut p in pool()) {
        common::cochains_of_truncated_derivations(&mut p)?;
    }

    #[test]
    fn parser_round_trip(mut p in pool()) {
        common::parser_round_trip(&mut p)?;
    }

    #[test]
    fn poset_output_is_deterministic(mut p in pool()) {
        common::poset_output_is_deterministic(&mut p)?;
    }

    #[test]
    fn p_star_is_a_chain_map_and_a_bracket_map(mut p in pool()) {
        common::p_star_is_a_chain_map_and_a_bracket_map(&mut p)?;
    }

    #[test]
    fn cpn_identities_on_gauged_candidates(mut p in pool()) {
        common::cpn_identities_on_gauged_candidates(&mut p)?;
    }
}

#[test]
fn monomial_helpers_agree() {
    let a = Algebra::from_pairs(&[("x", 2), ("y", 3)]).unwrap();
    let m = Monomial::from_exponents(vec![2, 1]);
    assert_eq!(a.monomial_degree(&m), 7);
    assert_eq!(m.word_length(), 3);
}
