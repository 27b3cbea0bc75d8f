//! Finitely generated groups with decidable word problem.
//!
//! Supported kinds are ℤ, S₃, the Grigorchuk group and direct products of
//! those. Every context carries an ordered symmetric generating set; that order
//! fixes the length-lex enumeration of words and the canonical ball order.

mod ball;
pub mod grigorchuk;
mod words;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ball::{ball, Ball, Cayley, DEFAULT_BALL_CAP};
pub use grigorchuk::{GrigKey, GrigWord, Letter};
pub use words::{word_at, word_index, words_shorter_than, GeneratorWord, LengthLex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("elements belong to different group contexts")]
    ContextMismatch,
    #[error("unknown generator symbol `{0}`")]
    UnknownSymbol(String),
    #[error("cannot parse group id `{0}`")]
    UnknownGroup(String),
    #[error("ball capacity of {cap} elements exceeded (attained radius {radius})")]
    Capacity { cap: usize, radius: usize },
    #[error("element order exceeds cap {0}")]
    CapExceeded(u64),
    #[error("group {0} is not a torsion kind")]
    NotTorsion(String),
    #[error("group has no element of norm {0}")]
    NoElementOfNorm(usize),
}

/// A permutation of `{1, 2, 3}` stored as the images of `0, 1, 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm3(pub [u8; 3]);

impl Perm3 {
    pub const ID: Perm3 = Perm3([0, 1, 2]);

    pub fn transposition(i: u8, j: u8) -> Perm3 {
        let mut p = [0, 1, 2];
        p.swap(i as usize, j as usize);
        Perm3(p)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm3) -> Perm3 {
        let Perm3(a) = self;
        let Perm3(b) = other;
        Perm3([a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]])
    }

    pub fn inverse(self) -> Perm3 {
        let mut out = [0u8; 3];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize] = i as u8;
        }
        Perm3(out)
    }
}

impl fmt::Display for Perm3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        if *self == Perm3::ID {
            return f.write_str("()");
        }
        let fixed = (0..3).filter(|&i| p[i] == i as u8).count();
        if fixed == 1 {
            let moved: Vec<usize> = (0..3).filter(|&i| p[i] != i as u8).collect();
            write!(f, "({}{})", moved[0] + 1, moved[1] + 1)
        } else {
            write!(f, "(1{}{})", p[0] + 1, p[p[0] as usize] + 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Z,
    S3,
    Grigorchuk,
    Product(Box<GroupCtx>, Box<GroupCtx>),
}

/// A group together with its ordered symmetric generating set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupCtx {
    kind: GroupKind,
    generators: Vec<String>,
    inverses: Vec<usize>,
    name: String,
}

/// Group elements in per-kind canonical form.
///
/// Structural equality is group equality for every kind except Grigorchuk,
/// whose words are only length-reduced; compare those with
/// [`GroupCtx::equal`] or [`GroupCtx::key`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Int(i64),
    Perm(Perm3),
    Grig(GrigWord),
    Pair(Box<GroupElement>, Box<GroupElement>),
}

/// Hashable value that is equal for two elements iff they are equal in the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementKey {
    Int(i64),
    Perm(Perm3),
    Grig(GrigKey),
    Pair(Box<ElementKey>, Box<ElementKey>),
}

/// Result of an order computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl GroupCtx {
    pub fn z() -> GroupCtx {
        GroupCtx {
            kind: GroupKind::Z,
            generators: vec!["+1".into(), "-1".into()],
            inverses: vec![1, 0],
            name: "Z".into(),
        }
    }

    pub fn s3() -> GroupCtx {
        GroupCtx {
            kind: GroupKind::S3,
            generators: vec!["(12)".into(), "(23)".into(), "(13)".into()],
            inverses: vec![0, 1, 2],
            name: "S3".into(),
        }
    }

    pub fn grigorchuk() -> GroupCtx {
        GroupCtx {
            kind: GroupKind::Grigorchuk,
            generators: Letter::ALL.iter().map(|l| l.symbol().to_string()).collect(),
            inverses: vec![0, 1, 2, 3],
            name: "grigorchuk".into(),
        }
    }

    /// Direct product; generators are `l.<s>` for the left factor then `r.<s>` for the right.
    pub fn product(left: GroupCtx, right: GroupCtx) -> GroupCtx {
        let nl = left.generators.len();
        let mut generators: Vec<String> = left.generators.iter().map(|s| format!("l.{s}")).collect();
        generators.extend(right.generators.iter().map(|s| format!("r.{s}")));
        let mut inverses = left.inverses.clone();
        inverses.extend(right.inverses.iter().map(|&i| i + nl));
        let rname = if matches!(right.kind, GroupKind::Product(..)) {
            format!("({})", right.name)
        } else {
            right.name.clone()
        };
        let name = format!("{} x {}", left.name, rname);
        GroupCtx {
            kind: GroupKind::Product(Box::new(left), Box::new(right)),
            generators,
            inverses,
            name,
        }
    }

    /// Parses ids such as `Z`, `S3`, `grigorchuk`, `Z x grigorchuk`, `(Z x Z) x S3`.
    /// Products associate to the left.
    pub fn parse(id: &str) -> Result<GroupCtx, GroupError> {
        let err = || GroupError::UnknownGroup(id.to_string());
        let mut tokens = Vec::new();
        let mut chars = id.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if c == '(' || c == ')' || c == '×' {
                tokens.push(c.to_string());
                chars.next();
            } else if c.is_ascii_alphanumeric() {
                let mut t = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() {
                        t.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(t);
            } else {
                return Err(err());
            }
        }
        let mut pos = 0;
        let ctx = parse_product(&tokens, &mut pos).ok_or_else(err)?;
        if pos != tokens.len() {
            return Err(err());
        }
        Ok(ctx)
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverses
    }

    pub fn inverse_generator(&self, s: usize) -> usize {
        self.inverses[s]
    }

    pub fn symbol_index(&self, sym: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == sym)
    }

    /// True when every element has finite order.
    pub fn is_torsion_kind(&self) -> bool {
        match &self.kind {
            GroupKind::Z => false,
            GroupKind::S3 | GroupKind::Grigorchuk => true,
            GroupKind::Product(l, r) => l.is_torsion_kind() && r.is_torsion_kind(),
        }
    }

    pub fn is_abelian_kind(&self) -> bool {
        match &self.kind {
            GroupKind::Z => true,
            GroupKind::S3 | GroupKind::Grigorchuk => false,
            GroupKind::Product(l, r) => l.is_abelian_kind() && r.is_abelian_kind(),
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            GroupKind::Z => GroupElement::Int(0),
            GroupKind::S3 => GroupElement::Perm(Perm3::ID),
            GroupKind::Grigorchuk => GroupElement::Grig(GrigWord::identity()),
            GroupKind::Product(l, r) => {
                GroupElement::Pair(Box::new(l.identity()), Box::new(r.identity()))
            }
        }
    }

    pub fn generator(&self, s: usize) -> GroupElement {
        match &self.kind {
            GroupKind::Z => GroupElement::Int(if s == 0 { 1 } else { -1 }),
            GroupKind::S3 => GroupElement::Perm(match s {
                0 => Perm3::transposition(0, 1),
                1 => Perm3::transposition(1, 2),
                _ => Perm3::transposition(0, 2),
            }),
            GroupKind::Grigorchuk => GroupElement::Grig(GrigWord::from_letters([Letter::ALL[s]])),
            GroupKind::Product(l, r) => {
                let nl = l.num_generators();
                if s < nl {
                    GroupElement::Pair(Box::new(l.generator(s)), Box::new(r.identity()))
                } else {
                    GroupElement::Pair(Box::new(l.identity()), Box::new(r.generator(s - nl)))
                }
            }
        }
    }

    pub fn belongs(&self, g: &GroupElement) -> bool {
        match (&self.kind, g) {
            (GroupKind::Z, GroupElement::Int(_))
            | (GroupKind::S3, GroupElement::Perm(_))
            | (GroupKind::Grigorchuk, GroupElement::Grig(_)) => true,
            (GroupKind::Product(l, r), GroupElement::Pair(a, b)) => l.belongs(a) && r.belongs(b),
            _ => false,
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        use GroupElement::*;
        Ok(match (&self.kind, a, b) {
            (GroupKind::Z, Int(x), Int(y)) => Int(x + y),
            (GroupKind::S3, Perm(x), Perm(y)) => Perm(x.compose(*y)),
            (GroupKind::Grigorchuk, Grig(x), Grig(y)) => Grig(x.mul(y)),
            (GroupKind::Product(l, r), Pair(a1, a2), Pair(b1, b2)) => {
                Pair(Box::new(l.multiply(a1, b1)?), Box::new(r.multiply(a2, b2)?))
            }
            _ => return Err(GroupError::ContextMismatch),
        })
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        use GroupElement::*;
        Ok(match (&self.kind, a) {
            (GroupKind::Z, Int(x)) => Int(-x),
            (GroupKind::S3, Perm(x)) => Perm(x.inverse()),
            (GroupKind::Grigorchuk, Grig(x)) => Grig(x.inverse()),
            (GroupKind::Product(l, r), Pair(a1, a2)) => {
                Pair(Box::new(l.inverse(a1)?), Box::new(r.inverse(a2)?))
            }
            _ => return Err(GroupError::ContextMismatch),
        })
    }

    pub fn power(&self, a: &GroupElement, k: u64) -> Result<GroupElement, GroupError> {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn element_is_identity(&self, a: &GroupElement) -> Result<bool, GroupError> {
        use GroupElement::*;
        Ok(match (&self.kind, a) {
            (GroupKind::Z, Int(x)) => *x == 0,
            (GroupKind::S3, Perm(x)) => *x == Perm3::ID,
            (GroupKind::Grigorchuk, Grig(x)) => grigorchuk::is_identity(x),
            (GroupKind::Product(l, r), Pair(a1, a2)) => {
                l.element_is_identity(a1)? && r.element_is_identity(a2)?
            }
            _ => return Err(GroupError::ContextMismatch),
        })
    }

    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool, GroupError> {
        let q = self.multiply(&self.inverse(a)?, b)?;
        self.element_is_identity(&q)
    }

    pub fn key(&self, a: &GroupElement) -> Result<ElementKey, GroupError> {
        use GroupElement::*;
        Ok(match (&self.kind, a) {
            (GroupKind::Z, Int(x)) => ElementKey::Int(*x),
            (GroupKind::S3, Perm(x)) => ElementKey::Perm(*x),
            (GroupKind::Grigorchuk, Grig(x)) => ElementKey::Grig(grigorchuk::canonical_key(x)),
            (GroupKind::Product(l, r), Pair(a1, a2)) => {
                ElementKey::Pair(Box::new(l.key(a1)?), Box::new(r.key(a2)?))
            }
            _ => return Err(GroupError::ContextMismatch),
        })
    }

    pub fn check_word(&self, w: &GeneratorWord) -> Result<(), GroupError> {
        match w.letters().iter().find(|&&s| s >= self.num_generators()) {
            Some(s) => Err(GroupError::UnknownSymbol(format!("#{s}"))),
            None => Ok(()),
        }
    }

    /// Evaluates a generator word (leftmost letter is the leftmost factor).
    pub fn eval(&self, w: &GeneratorWord) -> Result<GroupElement, GroupError> {
        self.check_word(w)?;
        let mut acc = self.identity();
        for &s in w.letters() {
            acc = self.multiply(&acc, &self.generator(s))?;
        }
        Ok(acc)
    }

    /// Word problem: does `w` evaluate to the identity?
    pub fn is_identity(&self, w: &GeneratorWord) -> Result<bool, GroupError> {
        let g = self.eval(w)?;
        self.element_is_identity(&g)
    }

    /// A word spelling `g`; geodesic for ℤ, S₃ and products of those.
    pub fn normal_word(&self, g: &GroupElement) -> Result<GeneratorWord, GroupError> {
        use GroupElement::*;
        Ok(match (&self.kind, g) {
            (GroupKind::Z, Int(x)) => {
                GeneratorWord(vec![if *x >= 0 { 0 } else { 1 }; x.unsigned_abs() as usize])
            }
            (GroupKind::S3, Perm(p)) => {
                let t = |i| Perm3::transposition(i, i + 1);
                let candidates: [(Perm3, &[usize]); 6] = [
                    (Perm3::ID, &[]),
                    (t(0), &[0]),
                    (t(1), &[1]),
                    (Perm3::transposition(0, 2), &[2]),
                    (t(0).compose(t(1)), &[0, 1]),
                    (t(1).compose(t(0)), &[1, 0]),
                ];
                let (_, w) = candidates.iter().find(|(q, _)| q == p).expect("all of S3 listed");
                GeneratorWord(w.to_vec())
            }
            (GroupKind::Grigorchuk, Grig(x)) => {
                GeneratorWord(x.letters().iter().map(|&l| l as usize).collect())
            }
            (GroupKind::Product(l, r), Pair(a, b)) => {
                let nl = l.num_generators();
                let mut w = l.normal_word(a)?.0;
                w.extend(r.normal_word(b)?.0.into_iter().map(|s| s + nl));
                GeneratorWord(w)
            }
            _ => return Err(GroupError::ContextMismatch),
        })
    }

    /// True when `g` provably has infinite order (a nonzero ℤ coordinate).
    fn provably_infinite(&self, g: &GroupElement) -> bool {
        match (&self.kind, g) {
            (GroupKind::Z, GroupElement::Int(x)) => *x != 0,
            (GroupKind::Product(l, r), GroupElement::Pair(a, b)) => {
                l.provably_infinite(a) || r.provably_infinite(b)
            }
            _ => false,
        }
    }

    /// Least `k ≥ 1` with `gᵏ = e`, searching up to `cap`.
    pub fn element_order(&self, g: &GroupElement, cap: u64) -> Result<Order, GroupError> {
        if !self.belongs(g) {
            return Err(GroupError::ContextMismatch);
        }
        if self.provably_infinite(g) {
            return Ok(Order::Infinite);
        }
        let mut acc = g.clone();
        for k in 1..=cap {
            if self.element_is_identity(&acc)? {
                return Ok(Order::Finite(k));
            }
            acc = self.multiply(&acc, g)?;
        }
        Err(GroupError::CapExceeded(cap))
    }

    /// Word norm by breadth-first search from the identity.
    pub fn word_norm(&self, g: &GroupElement) -> Result<usize, GroupError> {
        Cayley::new(self.clone()).norm(g)
    }

    /// Left-invariant word metric `|g⁻¹h|`.
    pub fn distance(&self, g: &GroupElement, h: &GroupElement) -> Result<usize, GroupError> {
        let q = self.multiply(&self.inverse(g)?, h)?;
        self.word_norm(&q)
    }

    /// `T_G(n)`: the largest element order over the radius-`n` ball.
    pub fn torsion_function(&self, n: usize, cap: u64) -> Result<u64, GroupError> {
        if !self.is_torsion_kind() {
            return Err(GroupError::NotTorsion(self.name.clone()));
        }
        let b = ball(self, n)?;
        let mut best = 1;
        for g in b.elements() {
            match self.element_order(g, cap)? {
                Order::Finite(k) => best = best.max(k),
                Order::Infinite => return Err(GroupError::NotTorsion(self.name.clone())),
            }
        }
        Ok(best)
    }

    pub fn enumerate_words(&self, index: &BigUint) -> GeneratorWord {
        GeneratorWord(word_at(self.num_generators(), index))
    }

    pub fn word_index(&self, w: &GeneratorWord) -> BigUint {
        word_index(self.num_generators(), w.letters())
    }

    /// Parses whitespace-separated generator symbols. Tokens that are not a
    /// symbol are split greedily into symbols, so `abab` and `(12)(23)` work;
    /// `ε` denotes the empty word and `−` is accepted for `-`.
    pub fn parse_word(&self, text: &str) -> Result<GeneratorWord, GroupError> {
        let text = text.replace('−', "-");
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            if token == "ε" {
                continue;
            }
            if let Some(i) = self.symbol_index(token) {
                out.push(i);
                continue;
            }
            let mut rest = token;
            while !rest.is_empty() {
                let best = self
                    .generators
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| rest.starts_with(g.as_str()))
                    .max_by_key(|(_, g)| g.len());
                match best {
                    Some((i, g)) => {
                        out.push(i);
                        rest = &rest[g.len()..];
                    }
                    None => return Err(GroupError::UnknownSymbol(rest.to_string())),
                }
            }
        }
        Ok(GeneratorWord(out))
    }

    pub fn format_word(&self, w: &GeneratorWord) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.letters()
            .iter()
            .map(|&s| self.generators.get(s).map(String::as_str).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn format_element(&self, g: &GroupElement) -> String {
        match g {
            GroupElement::Int(x) => x.to_string(),
            GroupElement::Perm(p) => p.to_string(),
            GroupElement::Grig(w) => w.to_string(),
            GroupElement::Pair(a, b) => match &self.kind {
                GroupKind::Product(l, r) => {
                    format!("({}, {})", l.format_element(a), r.format_element(b))
                }
                _ => "?".to_string(),
            },
        }
    }

    /// Parses an element written as a generator word.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        if let (GroupKind::Z, Ok(n)) = (&self.kind, text.trim().parse::<i64>()) {
            return Ok(GroupElement::Int(n));
        }
        self.eval(&self.parse_word(text)?)
    }
}

impl fmt::Display for GroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn parse_product(tokens: &[String], pos: &mut usize) -> Option<GroupCtx> {
    let mut acc = parse_atom(tokens, pos)?;
    while *pos < tokens.len() && (tokens[*pos] == "x" || tokens[*pos] == "×") {
        *pos += 1;
        let rhs = parse_atom(tokens, pos)?;
        acc = GroupCtx::product(acc, rhs);
    }
    Some(acc)
}

fn parse_atom(tokens: &[String], pos: &mut usize) -> Option<GroupCtx> {
    let t = tokens.get(*pos)?;
    *pos += 1;
    match t.to_ascii_lowercase().as_str() {
        "(" => {
            let inner = parse_product(tokens, pos)?;
            if tokens.get(*pos).map(String::as_str) != Some(")") {
                return None;
            }
            *pos += 1;
            Some(inner)
        }
        "z" => Some(GroupCtx::z()),
        "s3" => Some(GroupCtx::s3()),
        "grigorchuk" | "grig" => Some(GroupCtx::grigorchuk()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_ids() {
        assert_eq!(GroupCtx::parse("Z").unwrap(), GroupCtx::z());
        let p = GroupCtx::parse("Z x grigorchuk").unwrap();
        assert_eq!(p.name(), "Z x grigorchuk");
        assert_eq!(p.num_generators(), 6);
        assert_eq!(p.generators()[2], "r.a");
        let q = GroupCtx::parse("Z x (S3 x Z)").unwrap();
        assert_eq!(GroupCtx::parse(q.name()).unwrap(), q);
        assert!(GroupCtx::parse("Z x").is_err());
        assert!(GroupCtx::parse("(Z").is_err());
        assert!(GroupCtx::parse("Q8").is_err());
    }

    #[test]
    fn multiply_examples() {
        let z = GroupCtx::z();
        assert_eq!(z.multiply(&GroupElement::Int(3), &GroupElement::Int(-1)).unwrap(), GroupElement::Int(2));
        let s3 = GroupCtx::s3();
        let t = s3.generator(0);
        assert_eq!(s3.multiply(&t, &t).unwrap(), s3.identity());
        let g = GroupCtx::grigorchuk();
        let a = g.generator(0);
        assert_eq!(g.multiply(&a, &a).unwrap(), g.identity());
        assert_eq!(z.multiply(&a, &a), Err(GroupError::ContextMismatch));
    }

    #[test]
    fn word_parsing() {
        let z = GroupCtx::z();
        assert!(z.is_identity(&z.parse_word("+1 −1").unwrap()).unwrap());
        let g = GroupCtx::grigorchuk();
        // (ab)^8 is not trivial: ab has order 16 (tree-action brute force)
        let w = g.parse_word("abababab abababab").unwrap();
        assert_eq!(w.len(), 16);
        assert!(!g.is_identity(&w).unwrap());
        let w = g.parse_word(&"ab".repeat(16)).unwrap();
        assert!(g.is_identity(&w).unwrap());
        assert!(!g.is_identity(&g.parse_word("ab").unwrap()).unwrap());
        assert!(matches!(g.parse_word("abx"), Err(GroupError::UnknownSymbol(_))));
        let s3 = GroupCtx::s3();
        assert_eq!(s3.parse_word("(12)(23)").unwrap(), GeneratorWord(vec![0, 1]));
        assert_eq!(s3.format_word(&GeneratorWord(vec![0, 1])), "(12) (23)");
        assert_eq!(g.parse_word("ε").unwrap(), GeneratorWord::empty());
    }

    #[test]
    fn norms_and_distances() {
        let z = GroupCtx::z();
        assert_eq!(z.word_norm(&GroupElement::Int(5)).unwrap(), 5);
        assert_eq!(z.distance(&GroupElement::Int(2), &GroupElement::Int(5)).unwrap(), 3);
        let g = GroupCtx::grigorchuk();
        let ad = g.parse_element("ad").unwrap();
        assert_eq!(g.word_norm(&ad).unwrap(), 2);
        let a = g.parse_element("a").unwrap();
        let d = g.parse_element("d").unwrap();
        assert_eq!(g.distance(&a, &d).unwrap(), 2);
        assert_eq!(g.distance(&d, &d).unwrap(), 0);
        assert_eq!(g.word_norm(&g.identity()).unwrap(), 0);
    }

    #[test]
    fn orders() {
        let s3 = GroupCtx::s3();
        let c = s3.multiply(&s3.generator(0), &s3.generator(1)).unwrap();
        assert_eq!(s3.element_order(&c, 10).unwrap(), Order::Finite(3));
        let g = GroupCtx::grigorchuk();
        let ab = g.parse_element("ab").unwrap();
        assert_eq!(g.element_order(&ab, 100).unwrap(), Order::Finite(16));
        assert_eq!(g.element_order(&ab, 15), Err(GroupError::CapExceeded(15)));
        let ac = g.parse_element("ac").unwrap();
        assert_eq!(g.element_order(&ac, 100).unwrap(), Order::Finite(8));
        let z = GroupCtx::z();
        assert_eq!(z.element_order(&GroupElement::Int(1), 10).unwrap(), Order::Infinite);
        assert_eq!(z.element_order(&GroupElement::Int(0), 10).unwrap(), Order::Finite(1));
        let p = GroupCtx::parse("Z x grigorchuk").unwrap();
        let x = p.parse_element("r.a").unwrap();
        assert_eq!(p.element_order(&x, 10).unwrap(), Order::Finite(2));
        let y = p.parse_element("l.+1 r.a").unwrap();
        assert_eq!(p.element_order(&y, 10).unwrap(), Order::Infinite);
    }

    #[test]
    fn torsion_function_values() {
        assert_eq!(GroupCtx::s3().torsion_function(5, 100).unwrap(), 3);
        assert_eq!(GroupCtx::s3().torsion_function(0, 100).unwrap(), 1);
        let g = GroupCtx::grigorchuk();
        assert_eq!(g.torsion_function(0, 100).unwrap(), 1);
        assert_eq!(g.torsion_function(1, 100).unwrap(), 2);
        assert!(matches!(GroupCtx::z().torsion_function(1, 10), Err(GroupError::NotTorsion(_))));
    }

    #[test]
    fn perm_display() {
        let s3 = GroupCtx::s3();
        for (i, sym) in s3.generators().iter().enumerate() {
            assert_eq!(&s3.format_element(&s3.generator(i)), sym);
        }
        let c = Perm3::transposition(0, 1).compose(Perm3::transposition(1, 2));
        assert!(c.to_string() == "(123)" || c.to_string() == "(132)");
        assert_eq!(c.compose(c).compose(c), Perm3::ID);
    }

    #[test]
    fn enumerate_words_z() {
        let z = GroupCtx::z();
        assert_eq!(z.enumerate_words(&BigUint::from(0u32)), GeneratorWord::empty());
        assert_eq!(z.format_word(&z.enumerate_words(&BigUint::from(1u32))), "+1");
        assert_eq!(z.format_word(&z.enumerate_words(&BigUint::from(2u32))), "-1");
    }
}
