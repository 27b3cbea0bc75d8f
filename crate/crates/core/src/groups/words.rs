//! Words over a finite ordered alphabet and their length-lex linearization.
//!
//! Index 0 is the empty word, then all words of length 1 in alphabet order,
//! then length 2 lexicographically, and so on. Indices grow exponentially with
//! word length, so they are [`BigUint`]s.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A sequence of generator indices of some group context (or any alphabet).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorWord(pub Vec<usize>);

impl GeneratorWord {
    pub fn empty() -> Self {
        GeneratorWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &GeneratorWord) -> GeneratorWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GeneratorWord(v)
    }

    /// Formal inverse given the generator inversion table.
    pub fn inverse(&self, inverses: &[usize]) -> GeneratorWord {
        GeneratorWord(self.0.iter().rev().map(|&s| inverses[s]).collect())
    }

    /// Cancels adjacent `s s⁻¹` pairs. Valid in every group.
    pub fn freely_reduced(&self, inverses: &[usize]) -> GeneratorWord {
        let mut out: Vec<usize> = Vec::with_capacity(self.0.len());
        for &s in &self.0 {
            if out.last().is_some_and(|&t| inverses[t] == s) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        GeneratorWord(out)
    }
}

/// Number of words of length `< len` over `k` letters.
pub fn words_shorter_than(k: usize, len: usize) -> BigUint {
    if k == 1 {
        return BigUint::from(len);
    }
    let k = BigUint::from(k);
    // (k^len - 1) / (k - 1)
    (k.pow(len as u32) - BigUint::one()) / (k - BigUint::one())
}

/// Length-lex index of a word over an alphabet of size `k`.
pub fn word_index(k: usize, letters: &[usize]) -> BigUint {
    assert!(k >= 1, "empty alphabet");
    let mut rank = BigUint::zero();
    let kb = BigUint::from(k);
    for &s in letters {
        debug_assert!(s < k);
        rank = rank * &kb + BigUint::from(s);
    }
    words_shorter_than(k, letters.len()) + rank
}

/// Inverse of [`word_index`].
pub fn word_at(k: usize, index: &BigUint) -> Vec<usize> {
    assert!(k >= 1, "empty alphabet");
    if k == 1 {
        let n = index.to_usize().expect("unary word index too large");
        return vec![0; n];
    }
    let kb = BigUint::from(k);
    let mut len = 0usize;
    let mut block = BigUint::one(); // k^len
    let mut rest = index.clone();
    while rest >= block {
        rest -= &block;
        block *= &kb;
        len += 1;
    }
    let mut out: Vec<usize> = if k <= 256 {
        rest.to_radix_le(k as u32).into_iter().map(usize::from).collect()
    } else {
        let mut digits = Vec::with_capacity(len);
        while digits.len() < len {
            let d = &rest % &kb;
            digits.push(d.to_usize().unwrap_or(0));
            rest /= &kb;
        }
        digits
    };
    out.resize(len, 0);
    out.reverse();
    out
}

/// Iterates all words over `k` letters in length-lex order, up to `max_len`.
#[derive(Clone, Debug)]
pub struct LengthLex {
    k: usize,
    max_len: usize,
    current: Option<Vec<usize>>,
}

impl LengthLex {
    pub fn new(k: usize, max_len: usize) -> Self {
        LengthLex {
            k,
            max_len,
            current: Some(Vec::new()),
        }
    }
}

impl Iterator for LengthLex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let mut carried = true;
        for slot in next.iter_mut().rev() {
            if *slot + 1 < self.k {
                *slot += 1;
                carried = false;
                break;
            }
            *slot = 0;
        }
        if carried {
            if next.len() < self.max_len && self.k > 0 {
                next = vec![0; next.len() + 1];
                self.current = Some(next);
            }
        } else {
            self.current = Some(next);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_indices_binary() {
        assert_eq!(word_at(2, &BigUint::from(0u32)), Vec::<usize>::new());
        assert_eq!(word_at(2, &BigUint::from(1u32)), vec![0]);
        assert_eq!(word_at(2, &BigUint::from(2u32)), vec![1]);
        assert_eq!(word_at(2, &BigUint::from(3u32)), vec![0, 0]);
        assert_eq!(word_at(2, &BigUint::from(6u32)), vec![1, 1]);
    }

    #[test]
    fn iterator_matches_index() {
        for (i, w) in LengthLex::new(3, 4).enumerate() {
            assert_eq!(word_index(3, &w), BigUint::from(i));
        }
        assert_eq!(LengthLex::new(3, 4).count(), 1 + 3 + 9 + 27 + 81);
    }

    #[test]
    fn free_reduction() {
        let inv = [1, 0, 2];
        let w = GeneratorWord(vec![0, 2, 2, 1, 0]);
        assert_eq!(w.freely_reduced(&inv), GeneratorWord(vec![0]));
        let w = GeneratorWord(vec![0, 1, 2, 0, 1]);
        assert_eq!(w.freely_reduced(&inv), GeneratorWord(vec![2]));
    }

    proptest! {
        #[test]
        fn round_trip(k in 1usize..9, idx in 0u64..10_000) {
            let i = BigUint::from(idx);
            prop_assert_eq!(word_index(k, &word_at(k, &i)), i);
        }
    }
}
