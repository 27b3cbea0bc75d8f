//! The first Grigorchuk group acting on the rooted binary tree.
//!
//! Elements are stored as reduced words over `{a, b, c, d}`: `a` alternates with
//! letters from the Klein four-group `{e, b, c, d}`. Equality is decided by the
//! usual wreath recursion
//!
//! ```text
//! a = swap,  b = (a, c),  c = (a, d),  d = (e, b)
//! ```
//!
//! which strictly shortens words, so both [`is_identity`] and [`canonical_key`]
//! terminate on every input.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
    C,
    D,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::B, Letter::C, Letter::D];

    pub fn symbol(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
        }
    }

    /// Level-one sections `(left, right)` of `b`, `c`, `d`. `None` stands for `e`.
    fn sections(self) -> (Option<Letter>, Option<Letter>) {
        match self {
            Letter::A => (None, None),
            Letter::B => (Some(Letter::A), Some(Letter::C)),
            Letter::C => (Some(Letter::A), Some(Letter::D)),
            Letter::D => (None, Some(Letter::B)),
        }
    }
}

/// Product inside the Klein four-group `{e, b, c, d}`.
fn klein(x: Letter, y: Letter) -> Option<Letter> {
    use Letter::*;
    match (x, y) {
        (p, q) if p == q => None,
        (B, C) | (C, B) => Some(D),
        (B, D) | (D, B) => Some(C),
        (C, D) | (D, C) => Some(B),
        _ => unreachable!("klein product only defined on b, c, d"),
    }
}

/// A word over `{a, b, c, d}` kept in reduced (alternating) form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GrigWord(Vec<Letter>);

impl GrigWord {
    pub fn identity() -> Self {
        GrigWord(Vec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = GrigWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Right-multiplies by one letter, keeping the word reduced.
    pub fn push(&mut self, l: Letter) {
        match (self.0.last().copied(), l) {
            (Some(Letter::A), Letter::A) => {
                self.0.pop();
            }
            (Some(top), l) if top != Letter::A && l != Letter::A => {
                self.0.pop();
                if let Some(z) = klein(top, l) {
                    self.0.push(z);
                }
            }
            _ => self.0.push(l),
        }
    }

    pub fn mul(&self, other: &GrigWord) -> GrigWord {
        let mut out = self.clone();
        for &l in &other.0 {
            out.push(l);
        }
        out
    }

    /// Every generator is an involution, so the inverse is the reversal.
    pub fn inverse(&self) -> GrigWord {
        GrigWord::from_letters(self.0.iter().rev().copied())
    }

    fn odd_a(&self) -> bool {
        self.0.iter().filter(|&&l| l == Letter::A).count() % 2 == 1
    }

    /// Sections of an element in the level-one stabilizer (even number of `a`s).
    fn stabilizer_sections(&self) -> (GrigWord, GrigWord) {
        debug_assert!(!self.odd_a());
        let mut left = GrigWord::identity();
        let mut right = GrigWord::identity();
        let mut swapped = false;
        for &l in &self.0 {
            if l == Letter::A {
                swapped = !swapped;
                continue;
            }
            let (s0, s1) = l.sections();
            let (to_left, to_right) = if swapped { (s1, s0) } else { (s0, s1) };
            if let Some(x) = to_left {
                left.push(x);
            }
            if let Some(x) = to_right {
                right.push(x);
            }
        }
        (left, right)
    }
}

impl fmt::Display for GrigWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

/// Word problem via wreath recursion.
pub fn is_identity(w: &GrigWord) -> bool {
    match w.len() {
        0 => true,
        1 => false,
        _ if w.odd_a() => false,
        _ => {
            let (l, r) = w.stabilizer_sections();
            is_identity(&l) && is_identity(&r)
        }
    }
}

/// Portrait of an element, cut off at the nucleus `{e, a, b, c, d}`.
///
/// Two words have the same key iff they are equal in the group, so keys can be
/// hashed for Cayley-graph deduplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GrigKey {
    Leaf(Option<Letter>),
    Node(bool, Box<GrigKey>, Box<GrigKey>),
}

pub fn canonical_key(w: &GrigWord) -> GrigKey {
    match w.letters() {
        [] => return GrigKey::Leaf(None),
        [l] => return GrigKey::Leaf(Some(*l)),
        _ => {}
    }
    let swap = w.odd_a();
    let stab = if swap {
        let mut s = w.clone();
        s.push(Letter::A);
        s
    } else {
        w.clone()
    };
    let (l, r) = stab.stabilizer_sections();
    let kl = canonical_key(&l);
    let kr = canonical_key(&r);
    collapse(swap, kl, kr)
}

fn collapse(swap: bool, l: GrigKey, r: GrigKey) -> GrigKey {
    use GrigKey::Leaf;
    use Letter::*;
    let nucleus = match (swap, &l, &r) {
        (false, Leaf(None), Leaf(None)) => Some(None),
        (true, Leaf(None), Leaf(None)) => Some(Some(A)),
        (false, Leaf(Some(A)), Leaf(Some(C))) => Some(Some(B)),
        (false, Leaf(Some(A)), Leaf(Some(D))) => Some(Some(C)),
        (false, Leaf(None), Leaf(Some(B))) => Some(Some(D)),
        _ => None,
    };
    match nucleus {
        Some(x) => Leaf(x),
        None => GrigKey::Node(swap, Box::new(l), Box::new(r)),
    }
}
