//! The group `K(G, A, H)` generated by shifts `ĝ` and conditional multipliers
//! `h_b` acting on `X_A × H`.
//!
//! Words act right to left: the rightmost generator is applied first. A shift
//! `ĝ` translates the configuration by `g`. A multiplier `h_b` left-multiplies
//! the `H` component by `h` exactly when the origin cell holds the bit `b`.

mod action;
mod reduction;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::groups::{
    word_at, word_index, Cayley, GeneratorWord, GroupCtx, GroupError,
};
use crate::subshift::{OraclePrefix, SubshiftError};

pub use action::{
    act, compile, order_k, quotient_check, wp_k, KPoint, KWitness, ReducedSweep, Schedule, WpResult,
};
pub use reduction::{
    beta, conj_bit, conj_reduction, conj_witness, many_one_index, many_one_total, ConjQuery,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Subshift(#[from] SubshiftError),
    #[error("oracle prefix too short: {needed} bits required")]
    NeedsOracle { needed: usize },
    #[error("embedding needs n ≥ 1")]
    ZeroIndex,
    #[error("embedding needs a nonabelian H, but every pair of generators of {0} commutes")]
    AbelianH(String),
    #[error("malformed K-word: {0}")]
    Parse(String),
    #[error("K-word index {index} is not decidable from a prefix of length {prefix_len}")]
    Undecidable { index: String, prefix_len: usize },
    #[error("prefixes are not nested letterwise")]
    NotNested,
}

/// A generator of `K`: a shift by a generator of `G`, or a multiplier by a
/// generator of `H` guarded by a bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KGenerator {
    Shift(usize),
    Mult { h: usize, bit: u8 },
}

/// A word over the generators of `K`. The empty word is `e_K`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KWord(pub Vec<KGenerator>);

impl KWord {
    pub fn empty() -> KWord {
        KWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &KWord) -> KWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        KWord(v)
    }

    pub fn pow(&self, k: usize) -> KWord {
        KWord(self.0.iter().copied().cycle().take(self.0.len() * k).collect())
    }
}

/// The pair of groups `(G, H)` that fixes the alphabet of `K(G, ·, H)`.
///
/// The alphabet lists every shift first, then for each generator `h` of `H`
/// the multipliers `h_0`, `h_1`.
#[derive(Clone, Debug)]
pub struct KTemplate {
    g: GroupCtx,
    h: GroupCtx,
    cayley: Arc<Cayley>,
}

impl PartialEq for KTemplate {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g && self.h == other.h
    }
}

impl Eq for KTemplate {}

impl KTemplate {
    pub fn new(g: GroupCtx, h: GroupCtx) -> KTemplate {
        let cayley = Arc::new(Cayley::new(g.clone()));
        KTemplate { g, h, cayley }
    }

    pub fn g(&self) -> &GroupCtx {
        &self.g
    }

    pub fn h(&self) -> &GroupCtx {
        &self.h
    }

    /// Shared ball cache of `G`.
    pub fn cayley(&self) -> &Cayley {
        &self.cayley
    }

    pub fn alphabet_size(&self) -> usize {
        self.g.num_generators() + 2 * self.h.num_generators()
    }

    pub fn letter_index(&self, x: KGenerator) -> usize {
        match x {
            KGenerator::Shift(s) => s,
            KGenerator::Mult { h, bit } => self.g.num_generators() + 2 * h + bit as usize,
        }
    }

    pub fn letter(&self, i: usize) -> KGenerator {
        let ng = self.g.num_generators();
        if i < ng {
            KGenerator::Shift(i)
        } else {
            let j = i - ng;
            KGenerator::Mult { h: j / 2, bit: (j % 2) as u8 }
        }
    }

    pub fn alphabet(&self) -> Vec<KGenerator> {
        (0..self.alphabet_size()).map(|i| self.letter(i)).collect()
    }

    pub fn generator_inverse(&self, x: KGenerator) -> KGenerator {
        match x {
            KGenerator::Shift(s) => KGenerator::Shift(self.g.inverse_generator(s)),
            KGenerator::Mult { h, bit } => KGenerator::Mult { h: self.h.inverse_generator(h), bit },
        }
    }

    pub fn inverse(&self, w: &KWord) -> KWord {
        KWord(w.0.iter().rev().map(|&x| self.generator_inverse(x)).collect())
    }

    /// Length-lex index of `w` over the alphabet of `K`.
    pub fn index_of(&self, w: &KWord) -> BigUint {
        let letters: Vec<usize> = w.0.iter().map(|&x| self.letter_index(x)).collect();
        word_index(self.alphabet_size(), &letters)
    }

    pub fn word_at(&self, index: &BigUint) -> KWord {
        KWord(word_at(self.alphabet_size(), index).into_iter().map(|i| self.letter(i)).collect())
    }

    pub fn check(&self, w: &KWord) -> Result<(), KError> {
        for &x in &w.0 {
            let ok = match x {
                KGenerator::Shift(s) => s < self.g.num_generators(),
                KGenerator::Mult { h, bit } => h < self.h.num_generators() && bit <= 1,
            };
            if !ok {
                return Err(KError::Parse(format!("generator {x:?} outside the alphabet")));
            }
        }
        Ok(())
    }

    pub fn format_generator(&self, x: KGenerator) -> String {
        match x {
            KGenerator::Shift(s) => format!("S:{}", self.g.generators()[s]),
            KGenerator::Mult { h, bit } => format!("M:{}:{bit}", self.h.generators()[h]),
        }
    }

    /// `K(<G>,<H>): S:g M:h:b ...`
    pub fn format_word(&self, w: &KWord) -> String {
        let mut s = format!("K({},{}):", self.g.name(), self.h.name());
        if w.is_empty() {
            s.push_str(" ε");
        }
        for &x in &w.0 {
            s.push(' ');
            s.push_str(&self.format_generator(x));
        }
        s
    }

    /// Parses the body of a K-word (tokens only, no header).
    pub fn parse_body(&self, text: &str) -> Result<KWord, KError> {
        let mut out = Vec::new();
        for tok in text.replace('−', "-").split_whitespace() {
            if tok == "ε" {
                continue;
            }
            if let Some(sym) = tok.strip_prefix("S:") {
                let s = self
                    .g
                    .symbol_index(sym)
                    .ok_or_else(|| KError::Parse(format!("unknown G generator `{sym}`")))?;
                out.push(KGenerator::Shift(s));
            } else if let Some(rest) = tok.strip_prefix("M:") {
                let (sym, bit) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| KError::Parse(format!("multiplier `{tok}` needs `M:h:b`")))?;
                let h = self
                    .h
                    .symbol_index(sym)
                    .ok_or_else(|| KError::Parse(format!("unknown H generator `{sym}`")))?;
                let bit = match bit {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(KError::Parse(format!("bit must be 0 or 1 in `{tok}`"))),
                };
                out.push(KGenerator::Mult { h, bit });
            } else {
                return Err(KError::Parse(format!("unexpected token `{tok}`")));
            }
        }
        Ok(KWord(out))
    }

    /// Parses `K(<G>,<H>): ...`, returning the template named by the header.
    pub fn parse_word(text: &str) -> Result<(KTemplate, KWord), KError> {
        let text = text.trim();
        let inner = text
            .strip_prefix("K(")
            .ok_or_else(|| KError::Parse("missing `K(` header".into()))?;
        let close = inner.find("):").ok_or_else(|| KError::Parse("missing `):`".into()))?;
        let header = &inner[..close];
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in header.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let split = split.ok_or_else(|| KError::Parse("header needs `<G>,<H>`".into()))?;
        let t = KTemplate::new(GroupCtx::parse(&header[..split])?, GroupCtx::parse(&header[split + 1..])?);
        let w = t.parse_body(&inner[close + 2..])?;
        Ok((t, w))
    }

    /// The natural epimorphism `γ : K → G` on words.
    pub fn gamma(&self, w: &KWord) -> GeneratorWord {
        GeneratorWord(
            w.0.iter()
                .filter_map(|x| match *x {
                    KGenerator::Shift(s) => Some(s),
                    KGenerator::Mult { .. } => None,
                })
                .collect(),
        )
    }

    /// The section `g ↦ ĝ` on words.
    pub fn section(&self, v: &GeneratorWord) -> KWord {
        KWord(v.letters().iter().map(|&s| KGenerator::Shift(s)).collect())
    }

    /// First pair `(h, h')` of generators of `H`, in generator order, with `[h', h] ≠ e`.
    pub fn noncommuting_pair(&self) -> Result<(usize, usize), KError> {
        let n = self.h.num_generators();
        for i in 0..n {
            for j in i + 1..n {
                let a = self.h.generator(i);
                let b = self.h.generator(j);
                if !self.h.equal(&self.h.multiply(&a, &b)?, &self.h.multiply(&b, &a)?)? {
                    return Ok((i, j));
                }
            }
        }
        Err(KError::AbelianH(self.h.name().to_string()))
    }

    /// `g_n`: the first element of norm exactly `n` in canonical ball order,
    /// returned as its length-lex least geodesic.
    pub fn norm_representative(&self, n: usize) -> Result<GeneratorWord, KError> {
        let ball = self.cayley.ball(n)?;
        let layer = ball.layer(n);
        if layer.is_empty() {
            return Err(GroupError::NoElementOfNorm(n).into());
        }
        Ok(ball.words()[layer.start].clone())
    }

    /// The commutator `[h'_1, (h_1)^{g_n}]` whose triviality in `K` is
    /// equivalent to `n ∈ A`. Its length is `4n + 4`.
    pub fn embed_element(&self, n: usize) -> Result<KWord, KError> {
        if n == 0 {
            return Err(KError::ZeroIndex);
        }
        let (h, h2) = self.noncommuting_pair()?;
        let g = self.section(&self.norm_representative(n)?);
        let g_inv = self.inverse(&g);
        let conj = |x: usize| {
            let mut v = g.0.clone();
            v.push(KGenerator::Mult { h: x, bit: 1 });
            v.extend_from_slice(&g_inv.0);
            v
        };
        let mut out = vec![KGenerator::Mult { h: h2, bit: 1 }];
        out.extend(conj(h));
        out.push(KGenerator::Mult { h: self.h.inverse_generator(h2), bit: 1 });
        out.extend(conj(self.h.inverse_generator(h)));
        Ok(KWord(out))
    }

    pub fn with_oracle(&self, oracle: OraclePrefix) -> KContext {
        KContext { template: self.clone(), oracle }
    }
}

/// A template together with a finite prefix of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KContext {
    pub template: KTemplate,
    pub oracle: OraclePrefix,
}

impl KContext {
    pub fn new(g: GroupCtx, h: GroupCtx, oracle: OraclePrefix) -> KContext {
        KTemplate::new(g, h).with_oracle(oracle)
    }
}

impl fmt::Display for KTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K({},{})", self.g.name(), self.h.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zs3() -> KTemplate {
        KTemplate::new(GroupCtx::z(), GroupCtx::s3())
    }

    #[test]
    fn alphabet_layout() {
        let t = zs3();
        assert_eq!(t.alphabet_size(), 8);
        assert_eq!(t.letter(0), KGenerator::Shift(0));
        assert_eq!(t.letter(3), KGenerator::Mult { h: 0, bit: 1 });
        for i in 0..8 {
            assert_eq!(t.letter_index(t.letter(i)), i);
        }
        assert_eq!(KTemplate::new(GroupCtx::grigorchuk(), GroupCtx::s3()).alphabet_size(), 10);
    }

    #[test]
    fn text_round_trip() {
        let t = zs3();
        let w = t.parse_body("S:+1 M:(12):1 S:-1").unwrap();
        let text = t.format_word(&w);
        assert_eq!(text, "K(Z,S3): S:+1 M:(12):1 S:-1");
        let (t2, w2) = KTemplate::parse_word(&text).unwrap();
        assert_eq!(t2, t);
        assert_eq!(w2, w);
        let (_, e) = KTemplate::parse_word("K(Z,S3): ε").unwrap();
        assert!(e.is_empty());
        for bad in ["K(Z,S3) S:+1", "K(Z): S:+1", "K(Z,S3): S:+2", "K(Z,S3): M:(12):2", "K(Z,S3): X"] {
            assert!(KTemplate::parse_word(bad).is_err(), "{bad}");
        }
        let (tp, _) = KTemplate::parse_word("K(Z x (S3 x Z),S3): S:l.+1").unwrap();
        assert_eq!(tp.g().num_generators(), 2 + 3 + 2);
    }

    #[test]
    fn gamma_and_section() {
        let t = zs3();
        assert!(t.gamma(&KWord::empty()).is_empty());
        let w = t.parse_body("S:+1 M:(12):1").unwrap();
        assert_eq!(t.gamma(&w), GeneratorWord(vec![0]));
        let v = GeneratorWord(vec![0, 1]);
        assert_eq!(t.section(&v), t.parse_body("S:+1 S:-1").unwrap());
    }

    #[test]
    fn embedding_shape() {
        let t = zs3();
        assert_eq!(t.noncommuting_pair().unwrap(), (0, 1));
        for n in 1..6 {
            let w = t.embed_element(n).unwrap();
            assert_eq!(w.len(), 4 * n + 4);
            assert!(t.g().is_identity(&t.gamma(&w)).unwrap());
        }
        assert_eq!(t.embed_element(0), Err(KError::ZeroIndex));
        let abelian = KTemplate::new(GroupCtx::z(), GroupCtx::z());
        assert!(matches!(abelian.embed_element(1), Err(KError::AbelianH(_))));
        let g = KTemplate::new(GroupCtx::grigorchuk(), GroupCtx::s3());
        let w = g.embed_element(3).unwrap();
        assert!(g.g().is_identity(&g.gamma(&w)).unwrap());
    }

    proptest! {
        #[test]
        fn section_is_split(v in proptest::collection::vec(0usize..2, 0..=8)) {
            let t = zs3();
            let v = GeneratorWord(v);
            prop_assert_eq!(t.gamma(&t.section(&v)), v);
        }

        #[test]
        fn gamma_is_multiplicative(a in proptest::collection::vec(0usize..8, 0..6),
                                   b in proptest::collection::vec(0usize..8, 0..6)) {
            let t = zs3();
            let u = KWord(a.into_iter().map(|i| t.letter(i)).collect());
            let v = KWord(b.into_iter().map(|i| t.letter(i)).collect());
            prop_assert_eq!(t.gamma(&u.concat(&v)), t.gamma(&u).concat(&t.gamma(&v)));
        }

        #[test]
        fn index_round_trip(i in 0u64..100_000) {
            let t = zs3();
            let i = BigUint::from(i);
            prop_assert_eq!(t.index_of(&t.word_at(&i)), i);
        }
    }
}
