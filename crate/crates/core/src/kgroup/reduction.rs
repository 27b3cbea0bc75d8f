//! Reductions between `A` and the word problem of `K(G, A, H)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::action::{compile, ReducedSweep};
use super::{KError, KGenerator, KTemplate, KWord};
use crate::groups::{words_shorter_than, LengthLex};
use crate::subshift::{oracle_bound, OraclePrefix, Support};

/// Length-lex index of `embed_element(n)`: `n ∈ A` iff this index is in `WP(K)`.
pub fn many_one_index(t: &KTemplate, n: usize) -> Result<BigUint, KError> {
    Ok(t.index_of(&t.embed_element(n)?))
}

/// [`many_one_index`] extended to `n = 0` by the index of the single shift
/// `Ŝ_0`, which is never trivial. Correct for every `A` with `0 ∉ A`.
pub fn many_one_total(t: &KTemplate, n: usize) -> Result<BigUint, KError> {
    if n == 0 {
        return Ok(t.index_of(&KWord(vec![KGenerator::Shift(0)])));
    }
    many_one_index(t, n)
}

/// Longest word length decidable from `m` bits of `A`.
fn decidable_len(m: usize) -> Option<usize> {
    m.checked_sub(1).map(|x| x / 2)
}

/// `β(m)`: the number of K-words decidable from an `m`-bit prefix of `A`.
pub fn beta(t: &KTemplate, m: usize) -> BigUint {
    match decidable_len(m) {
        None => BigUint::default(),
        Some(l) => words_shorter_than(t.alphabet_size(), l + 1),
    }
}

/// The conjunctive query deciding one bit of the word problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConjQuery {
    /// The word moves some window with at most one 1, whatever `A` is.
    AlwaysZero,
    /// The word is trivial iff all these distances lie in `A`.
    BadDistances { distances: BTreeSet<usize> },
}

impl ConjQuery {
    pub fn evaluate(&self, u: &OraclePrefix) -> bool {
        match self {
            ConjQuery::AlwaysZero => false,
            ConjQuery::BadDistances { distances } => distances.iter().all(|&d| u.get(d) == Some(true)),
        }
    }
}

pub(crate) fn query_for_word(t: &KTemplate, w: &KWord) -> Result<ConjQuery, KError> {
    let sched = compile(t, w)?;
    if !sched.gamma_trivial() {
        return Ok(ConjQuery::AlwaysZero);
    }
    let sweep = ReducedSweep::new(t, sched)?;
    let hctx = t.h();
    let mut distances = BTreeSet::new();
    for s in sweep.supports() {
        let m = sweep.schedule().multiplier(hctx, &s.ones())?;
        if hctx.element_is_identity(&m)? {
            continue;
        }
        match s {
            Support::Two(i, j) => {
                distances.insert(sweep.distance(i, j));
            }
            _ => return Ok(ConjQuery::AlwaysZero),
        }
    }
    Ok(ConjQuery::BadDistances { distances })
}

/// The query for the `i`-th K-word, which must be decidable from `m` bits.
pub fn conj_witness(t: &KTemplate, i: &BigUint, m: usize) -> Result<ConjQuery, KError> {
    let w = t.word_at(i);
    if oracle_bound(w.len()) > m {
        return Err(KError::Undecidable { index: i.to_string(), prefix_len: m });
    }
    query_for_word(t, &w)
}

/// Bit `i` of the word-problem prefix computed from `u`.
pub fn conj_bit(t: &KTemplate, u: &OraclePrefix, i: &BigUint) -> Result<bool, KError> {
    Ok(conj_witness(t, i, u.len())?.evaluate(u))
}

/// The reduction `g(u)`: the first `β(|u|)` bits of `WP(K)` for any `A`
/// whose characteristic sequence starts with `u`.
pub fn conj_reduction(t: &KTemplate, u: &OraclePrefix) -> Result<Vec<bool>, KError> {
    let Some(l) = decidable_len(u.len()) else {
        return Ok(Vec::new());
    };
    let total = beta(t, u.len())
        .to_usize()
        .filter(|&n| n <= 1 << 26)
        .ok_or(KError::Undecidable { index: "β(|u|)".into(), prefix_len: u.len() })?;
    let words: Vec<Vec<usize>> = LengthLex::new(t.alphabet_size(), l).collect();
    debug_assert_eq!(words.len(), total);
    words
        .into_par_iter()
        .map(|v| {
            let w = KWord(v.into_iter().map(|i| t.letter(i)).collect());
            Ok(query_for_word(t, &w)?.evaluate(u))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupCtx;
    use crate::kgroup::{wp_k, WpResult};

    fn zs3() -> KTemplate {
        KTemplate::new(GroupCtx::z(), GroupCtx::s3())
    }

    #[test]
    fn witness_examples() {
        let t = zs3();
        let zero = BigUint::from(0u32);
        assert_eq!(
            conj_witness(&t, &zero, 1).unwrap(),
            ConjQuery::BadDistances { distances: BTreeSet::new() }
        );
        let e2 = many_one_index(&t, 2).unwrap();
        assert_eq!(
            conj_witness(&t, &e2, 25).unwrap(),
            ConjQuery::BadDistances { distances: BTreeSet::from([2]) }
        );
        let s = t.index_of(&t.parse_body("S:+1").unwrap());
        assert_eq!(conj_witness(&t, &s, 3).unwrap(), ConjQuery::AlwaysZero);
        assert!(conj_witness(&t, &e2, 24).is_err());
    }

    #[test]
    fn beta_values() {
        let t = zs3();
        assert_eq!(beta(&t, 0), BigUint::from(0u32));
        assert_eq!(beta(&t, 1), BigUint::from(1u32));
        assert_eq!(beta(&t, 3), BigUint::from(9u32));
        assert_eq!(beta(&t, 5), BigUint::from(73u32));
    }

    #[test]
    fn many_one_indices() {
        let t = zs3();
        let mut prev = BigUint::from(0u32);
        for n in 1..=5 {
            let i = many_one_index(&t, n).unwrap();
            assert!(i > prev);
            assert_eq!(t.word_at(&i), t.embed_element(n).unwrap());
            prev = i;
        }
        assert_eq!(t.word_at(&many_one_index(&t, 1).unwrap()).len(), 8);
        assert_eq!(many_one_total(&t, 0).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn reduction_matches_wp_on_small_prefixes() {
        let t = zs3();
        for bits in ["00000", "01100", "11111", "0101010"] {
            let u = OraclePrefix::parse(bits).unwrap();
            let g = conj_reduction(&t, &u).unwrap();
            assert_eq!(BigUint::from(g.len()), beta(&t, u.len()));
            assert!(g[0]);
            let ctx = t.with_oracle(u.clone());
            for (i, &bit) in g.iter().enumerate() {
                let w = t.word_at(&BigUint::from(i));
                let r = wp_k(&ctx, &w).unwrap();
                assert_ne!(r, WpResult::NeedsOracle { bound: oracle_bound(w.len()) });
                assert_eq!(r.is_identity(), Some(bit), "{bits} word {i}");
            }
        }
    }
}
