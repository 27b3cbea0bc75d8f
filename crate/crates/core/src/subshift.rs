//! The subshift `X_A`: 0/1 configurations with at most two 1s whose mutual
//! distance avoids `A`. Everything here works on finite windows over canonical
//! balls, with `A` known only through a finite [`OraclePrefix`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::groups::{Ball, Cayley, GroupCtx, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubshiftError {
    #[error("oracle prefix too short: need {needed} bits (all distances up to {max_distance}), have {have}")]
    PrefixTooShort { needed: usize, have: usize, max_distance: usize },
    #[error("malformed oracle prefix: {0}")]
    BadOracle(String),
    #[error("malformed pattern: {0}")]
    BadPattern(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A finite initial segment of the characteristic sequence of a set `A ⊆ ℕ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OraclePrefix {
    bits: Vec<bool>,
}

impl OraclePrefix {
    pub fn new(bits: Vec<bool>) -> Self {
        OraclePrefix { bits }
    }

    pub fn zeros(len: usize) -> Self {
        OraclePrefix { bits: vec![false; len] }
    }

    /// Prefix of length `len` of the set `members`.
    pub fn from_members<I: IntoIterator<Item = usize>>(len: usize, members: I) -> Self {
        let mut bits = vec![false; len];
        for m in members {
            if m < len {
                bits[m] = true;
            }
        }
        OraclePrefix { bits }
    }

    /// Parses a 0/1 string; whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self, SubshiftError> {
        let mut bits = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(SubshiftError::BadOracle(format!("unexpected character {c:?}"))),
            }
        }
        Ok(OraclePrefix { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    /// Letterwise `self ≤ other` on a common length.
    pub fn le(&self, other: &OraclePrefix) -> bool {
        self.len() == other.len() && self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    pub fn truncated(&self, len: usize) -> OraclePrefix {
        OraclePrefix { bits: self.bits[..len.min(self.len())].to_vec() }
    }

    /// Truncates or pads with zeros to exactly `len` bits.
    pub fn resized(&self, len: usize) -> OraclePrefix {
        let mut bits = self.bits.clone();
        bits.resize(len, false);
        OraclePrefix { bits }
    }

    pub fn is_prefix_of(&self, other: &OraclePrefix) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }
}

impl fmt::Display for OraclePrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for OraclePrefix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for OraclePrefix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        OraclePrefix::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Positions of the 1s of a pattern with at most two 1s, as ball indices (`i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Support {
    Empty,
    One(usize),
    Two(usize, usize),
}

impl Support {
    pub fn contains(&self, k: usize) -> bool {
        match *self {
            Support::Empty => false,
            Support::One(i) => i == k,
            Support::Two(i, j) => i == k || j == k,
        }
    }

    pub fn ones(&self) -> Vec<usize> {
        match *self {
            Support::Empty => vec![],
            Support::One(i) => vec![i],
            Support::Two(i, j) => vec![i, j],
        }
    }
}

/// A 0/1 window over the canonical ball `B_radius`, stored densely.
#[derive(Clone, Debug)]
pub struct Pattern {
    domain: Arc<Ball>,
    radius: usize,
    values: Vec<u8>,
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.radius == other.radius
            && self.values == other.values
            && self.domain.ctx() == other.domain.ctx()
    }
}

impl Eq for Pattern {}

impl Pattern {
    pub fn new(domain: Arc<Ball>, radius: usize, values: Vec<u8>) -> Result<Pattern, SubshiftError> {
        if radius > domain.radius() {
            return Err(SubshiftError::BadPattern(format!(
                "radius {radius} exceeds the ball radius {}",
                domain.radius()
            )));
        }
        let n = domain.size_at(radius);
        if values.len() != n {
            return Err(SubshiftError::BadPattern(format!("expected {n} values, got {}", values.len())));
        }
        if values.iter().any(|&v| v > 1) {
            return Err(SubshiftError::BadPattern("values must be 0 or 1".into()));
        }
        Ok(Pattern { domain, radius, values })
    }

    pub fn zeros(domain: Arc<Ball>, radius: usize) -> Pattern {
        let n = domain.size_at(radius);
        Pattern { domain, radius, values: vec![0; n] }
    }

    pub fn from_support(domain: Arc<Ball>, radius: usize, support: Support) -> Pattern {
        let mut p = Pattern::zeros(domain, radius);
        for i in support.ones() {
            p.values[i] = 1;
        }
        p
    }

    pub fn domain(&self) -> &Arc<Ball> {
        &self.domain
    }

    pub fn ctx(&self) -> &GroupCtx {
        self.domain.ctx()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn value(&self, i: usize) -> Option<u8> {
        self.values.get(i).copied()
    }

    pub fn ones(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|(_, &v)| v == 1).map(|(i, _)| i).collect()
    }

    /// The support, or `None` when there are more than two 1s.
    pub fn support(&self) -> Option<Support> {
        match self.ones()[..] {
            [] => Some(Support::Empty),
            [i] => Some(Support::One(i)),
            [i, j] => Some(Support::Two(i, j)),
            _ => None,
        }
    }

    /// `ball(<ctx>,<radius>): (0,0) (1,1) ...`
    pub fn to_text(&self) -> String {
        let mut s = format!("ball({},{}):", self.ctx().name(), self.radius);
        for (i, v) in self.values.iter().enumerate() {
            s.push_str(&format!(" ({i},{v})"));
        }
        s
    }

    /// Inverse of [`Pattern::to_text`]. Unlisted positions default to 0.
    pub fn parse(text: &str) -> Result<Pattern, SubshiftError> {
        let bad = |m: &str| SubshiftError::BadPattern(m.to_string());
        let text = text.trim();
        let body = text.strip_prefix("ball(").ok_or_else(|| bad("missing `ball(` header"))?;
        let close = body.find("):").ok_or_else(|| bad("missing `):` after the header"))?;
        let (header, entries) = (&body[..close], &body[close + 2..]);
        let comma = header.rfind(',').ok_or_else(|| bad("header needs `<ctx>,<radius>`"))?;
        let ctx = GroupCtx::parse(&header[..comma])?;
        let radius: usize = header[comma + 1..].trim().parse().map_err(|_| bad("bad radius"))?;
        if radius > 64 {
            return Err(bad("radius too large"));
        }
        let domain = Arc::new(Ball::with_radius(&ctx, radius, 1 << 20)?);
        let n = domain.size_at(radius);
        let mut values = vec![0u8; n];
        let mut seen = vec![false; n];
        let mut rest = entries.trim();
        while !rest.is_empty() {
            let inner_end = rest.find(')').ok_or_else(|| bad("unterminated entry"))?;
            let entry = rest[..inner_end].trim().strip_prefix('(').ok_or_else(|| bad("entry must start with `(`"))?;
            let (i, b) = entry.split_once(',').ok_or_else(|| bad("entry must be `(index,bit)`"))?;
            let i: usize = i.trim().parse().map_err(|_| bad("bad index"))?;
            let b: u8 = b.trim().parse().map_err(|_| bad("bad bit"))?;
            if i >= n || b > 1 {
                return Err(bad("entry out of range"));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(bad("duplicate index"));
            }
            values[i] = b;
            rest = rest[inner_end + 1..].trim_start();
        }
        Pattern::new(domain, radius, values)
    }
}

/// Outcome of checking one window against a finite prefix of `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Legality {
    Legal,
    Illegal,
    /// The two 1s sit at this distance, which the prefix does not cover.
    Unknown(usize),
}

pub fn pattern_legal(ctx: &GroupCtx, prefix: &OraclePrefix, p: &Pattern) -> Result<Legality, SubshiftError> {
    if p.ctx() != ctx {
        return Err(GroupError::ContextMismatch.into());
    }
    legality_with(&Cayley::new(ctx.clone()), prefix, p)
}

pub fn legality_with(cayley: &Cayley, prefix: &OraclePrefix, p: &Pattern) -> Result<Legality, SubshiftError> {
    let Some(support) = p.support() else {
        return Ok(Legality::Illegal);
    };
    match support {
        Support::Empty | Support::One(_) => Ok(Legality::Legal),
        Support::Two(i, j) => {
            let d = pair_distance(cayley, p.domain(), i, j)?;
            Ok(match prefix.get(d) {
                Some(true) => Legality::Illegal,
                Some(false) => Legality::Legal,
                None => Legality::Unknown(d),
            })
        }
    }
}

pub(crate) fn pair_distance(cayley: &Cayley, ball: &Ball, i: usize, j: usize) -> Result<usize, GroupError> {
    cayley.distance(&ball.elements()[i], &ball.elements()[j])
}

/// Bits of `A` needed to decide legality of every window over `B_n`.
pub fn oracle_bound(n: usize) -> usize {
    2 * n + 1
}

/// Supports of all legal windows over `B_n`, in canonical order: the empty
/// support, single 1s by position, then pairs lexicographically.
pub fn legal_supports(cayley: &Cayley, prefix: &OraclePrefix, n: usize) -> Result<Vec<Support>, SubshiftError> {
    let needed = oracle_bound(n);
    if prefix.len() < needed {
        return Err(SubshiftError::PrefixTooShort { needed, have: prefix.len(), max_distance: 2 * n });
    }
    let ball = cayley.ball(n)?;
    let size = ball.size_at(n);
    let any_member = prefix.bits()[..needed].iter().any(|&b| b);
    let mut out = Vec::with_capacity(1 + size + size * size.saturating_sub(1) / 2);
    out.push(Support::Empty);
    out.extend((0..size).map(Support::One));
    for i in 0..size {
        for j in i + 1..size {
            if any_member && prefix.bits()[pair_distance(cayley, &ball, i, j)?] {
                continue;
            }
            out.push(Support::Two(i, j));
        }
    }
    Ok(out)
}

/// All legal windows of `X_A` over `B_n`.
pub fn enumerate_language(ctx: &GroupCtx, prefix: &OraclePrefix, n: usize) -> Result<Vec<Pattern>, SubshiftError> {
    let cayley = Cayley::new(ctx.clone());
    let supports = legal_supports(&cayley, prefix, n)?;
    let ball = cayley.ball(n)?;
    Ok(supports.into_iter().map(|s| Pattern::from_support(Arc::clone(&ball), n, s)).collect())
}

/// One emitted forbidden window: two 1s at distance `distance`, over `B_radius`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenWindow {
    pub radius: usize,
    pub distance: usize,
    pub pattern: Pattern,
}

/// Enumerates forbidden two-1 windows of `X_A` from an enumeration of `A`.
///
/// At radius `r` the stream pulls up to `r + 1` further elements of `A`, then
/// emits every pair in `B_r` at a known forbidden distance that was not emitted
/// at a smaller radius. Each window appears exactly once, at the least radius
/// whose ball contains it and by which its distance has been enumerated. The
/// consumer bounds the stream with `max_radius`.
pub struct ForbiddenPatternStream<I> {
    cayley: Cayley,
    source: I,
    source_done: bool,
    known: Vec<usize>,
    radius: usize,
    max_radius: usize,
    pending: std::collections::VecDeque<ForbiddenWindow>,
    finished: bool,
}

pub fn forbidden_pattern_stream<I>(ctx: &GroupCtx, enumerator: I, max_radius: usize) -> ForbiddenPatternStream<I::IntoIter>
where
    I: IntoIterator<Item = usize>,
{
    ForbiddenPatternStream {
        cayley: Cayley::new(ctx.clone()),
        source: enumerator.into_iter(),
        source_done: false,
        known: Vec::new(),
        radius: 0,
        max_radius,
        pending: Default::default(),
        finished: false,
    }
}

impl<I: Iterator<Item = usize>> ForbiddenPatternStream<I> {
    fn fill_radius(&mut self) -> Result<(), SubshiftError> {
        let r = self.radius;
        let old = self.known.len();
        for _ in 0..=r {
            if self.source_done {
                break;
            }
            match self.source.next() {
                Some(a) if !self.known.contains(&a) => self.known.push(a),
                Some(_) => {}
                None => self.source_done = true,
            }
        }
        let ball = self.cayley.ball(r)?;
        let size = ball.size_at(r);
        let fresh_from = if r == 0 { 0 } else { ball.size_at(r - 1) };
        for i in 0..size {
            for j in i + 1..size {
                let d = pair_distance(&self.cayley, &ball, i, j)?;
                let Some(pos) = self.known.iter().position(|&a| a == d) else {
                    continue;
                };
                // old distances only contribute pairs touching the new layer
                if pos < old && j < fresh_from {
                    continue;
                }
                self.pending.push_back(ForbiddenWindow {
                    radius: r,
                    distance: d,
                    pattern: Pattern::from_support(Arc::clone(&ball), r, Support::Two(i, j)),
                });
            }
        }
        Ok(())
    }
}

impl<I: Iterator<Item = usize>> Iterator for ForbiddenPatternStream<I> {
    type Item = Result<ForbiddenWindow, SubshiftError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(w) = self.pending.pop_front() {
                return Some(Ok(w));
            }
            if self.finished || self.radius > self.max_radius {
                return None;
            }
            if self.source_done && self.known.is_empty() {
                self.finished = true;
                return None;
            }
            if let Err(e) = self.fill_radius() {
                self.finished = true;
                return Some(Err(e));
            }
            self.radius += 1;
        }
    }
}
