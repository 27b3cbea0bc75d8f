//! Cross-checks of the library against independent brute-force oracles.

mod common;

use kgroup_core::automata::{
    membership_test, run, wp_prefix, AutomatonSpec, ExactOracle, Membership, Pos, PrefixOracle, SimError,
};
use kgroup_core::groups::{GroupCtx, GroupElement};
use kgroup_core::subshift::{enumerate_language, OraclePrefix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grig_word(letters: &[u8]) -> String {
    letters.iter().map(|&l| (b'a' + l) as char).collect()
}

#[test]
fn grigorchuk_word_problem_matches_tree_action_up_to_length_8() {
    let g = GroupCtx::grigorchuk();
    for w in common::grig_words(8) {
        let parsed = g.parse_word(if w.is_empty() { "ε" } else { &w }).unwrap();
        assert_eq!(g.is_identity(&parsed).unwrap(), common::grig_tree_trivial(&w, 10), "{w}");
    }
}

#[test]
fn grigorchuk_generator_products_have_known_orders() {
    let g = GroupCtx::grigorchuk();
    for (w, k) in [("ab", 16), ("ac", 8), ("ad", 4), ("bc", 2), ("a", 2)] {
        let e = g.eval(&g.parse_word(w).unwrap()).unwrap();
        assert_eq!(g.element_order(&e, 64).unwrap(), kgroup_core::groups::Order::Finite(k), "{w}");
        assert_eq!(common::grig_tree_order(w, 10, 64), Some(k as usize), "{w}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trivial_words_act_trivially(letters in prop::collection::vec(0u8..4, 0..24)) {
        let g = GroupCtx::grigorchuk();
        let w = grig_word(&letters);
        let parsed = g.parse_word(if w.is_empty() { "ε" } else { &w }).unwrap();
        if g.is_identity(&parsed).unwrap() {
            prop_assert!(common::grig_tree_trivial(&w, 12));
        }
        if !common::grig_tree_trivial(&w, 12) {
            prop_assert!(!g.is_identity(&parsed).unwrap());
        }
    }

    #[test]
    fn integer_language_matches_brute_force(bits in prop::collection::vec(any::<bool>(), 11), n in 0usize..=5) {
        let prefix = OraclePrefix::new(bits);
        let patterns = enumerate_language(&GroupCtx::z(), &prefix, n).unwrap();
        let ours: std::collections::BTreeSet<std::collections::BTreeSet<i64>> = patterns
            .iter()
            .map(|p| p.ones().into_iter().map(|i| match p.domain().elements()[i] {
                GroupElement::Int(x) => x,
                _ => unreachable!(),
            }).collect())
            .collect();
        prop_assert_eq!(ours.len(), patterns.len());
        prop_assert_eq!(ours, common::brute_force_language(prefix.bits(), n as i64));
    }

    #[test]
    fn random_automata_are_shift_covariant(seed in any::<u64>(), t in -8i64..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = AutomatonSpec::compile(common::random_automaton(&mut rng)).unwrap();
        let oracle = ExactOracle(spec.g());
        for p in 1..=3u64 {
            let cfg = kgroup_core::automata::make_xp(p).unwrap();
            let a = run(&spec, &cfg, &Pos::at_z(t), 40, &oracle).unwrap();
            let b = run(&spec, &cfg, &Pos::at_z(t.rem_euclid(p as i64)), 40, &oracle).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn prefix_oracle_agrees_when_long_enough(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = AutomatonSpec::compile(common::random_automaton(&mut rng)).unwrap();
        let wp = wp_prefix(spec.g(), 1 << 12).unwrap();
        let exact = ExactOracle(spec.g());
        let prefix = PrefixOracle { ctx: spec.g(), bits: &wp };
        for p in 1..=3u64 {
            let truth = membership_test(&spec, p, 30, &exact).unwrap();
            match membership_test(&spec, p, 30, &prefix) {
                Ok(m) => prop_assert_eq!(m, truth),
                Err(SimError::OracleExhausted { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}

#[test]
fn empty_rejecting_set_never_rejects() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut file = common::random_automaton(&mut rng);
        file.reject.clear();
        let spec = AutomatonSpec::compile(file).unwrap();
        let oracle = ExactOracle(spec.g());
        for p in 1..=4 {
            assert_eq!(membership_test(&spec, p, 50, &oracle).unwrap(), Membership::InS { steps: 50 });
        }
    }
}
