use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{ElementKey, GeneratorWord, GroupCtx, GroupElement, GroupError};

/// Default element budget for ball enumeration.
pub const DEFAULT_BALL_CAP: usize = 4_000_000;

/// The ball `B_n(G)` in canonical order: BFS layer, then length-lex order of
/// the first word that reached each element. Index 0 is the identity, and the
/// recorded word of every element is its length-lex least geodesic.
#[derive(Clone, Debug)]
pub struct Ball {
    ctx: GroupCtx,
    elements: Vec<GroupElement>,
    words: Vec<GeneratorWord>,
    index: HashMap<ElementKey, usize>,
    // layer_ends[r] = |B_r|
    layer_ends: Vec<usize>,
    // right Cayley neighbours, row-major with stride = number of generators;
    // complete for every element of norm < radius
    neighbors: Vec<Option<usize>>,
}

/// `B_n(ctx)` with the default capacity.
pub fn ball(ctx: &GroupCtx, n: usize) -> Result<Ball, GroupError> {
    let mut b = Ball::new(ctx.clone());
    b.extend_to(n, DEFAULT_BALL_CAP)?;
    Ok(b)
}

impl Ball {
    pub fn new(ctx: GroupCtx) -> Ball {
        let e = ctx.identity();
        let key = ctx.key(&e).expect("identity belongs to its context");
        let ngens = ctx.num_generators();
        Ball {
            elements: vec![e],
            words: vec![GeneratorWord::empty()],
            index: HashMap::from([(key, 0)]),
            layer_ends: vec![1],
            neighbors: vec![None; ngens],
            ctx,
        }
    }

    pub fn with_radius(ctx: &GroupCtx, n: usize, cap: usize) -> Result<Ball, GroupError> {
        let mut b = Ball::new(ctx.clone());
        b.extend_to(n, cap)?;
        Ok(b)
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    pub fn radius(&self) -> usize {
        self.layer_ends.len() - 1
    }

    /// All elements up to the current radius.
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn words(&self) -> &[GeneratorWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `|B_r|` for `r ≤ radius`.
    pub fn size_at(&self, r: usize) -> usize {
        self.layer_ends[r.min(self.radius())]
    }

    /// The last layer added nothing: the group is finite and exhausted.
    pub fn is_saturated(&self) -> bool {
        let n = self.layer_ends.len();
        n >= 2 && self.layer_ends[n - 1] == self.layer_ends[n - 2]
    }

    pub fn norm_of_index(&self, i: usize) -> usize {
        self.layer_ends.partition_point(|&end| end <= i)
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        let key = self.ctx.key(g).ok()?;
        self.index.get(&key).copied()
    }

    pub fn position_of_key(&self, key: &ElementKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Index of `g_i · s`, when known.
    pub fn right_neighbor(&self, i: usize, s: usize) -> Option<usize> {
        self.neighbors[i * self.ctx.num_generators() + s]
    }

    /// Adds one BFS layer.
    pub fn grow(&mut self, cap: usize) -> Result<(), GroupError> {
        let r = self.radius();
        let start = if r == 0 { 0 } else { self.layer_ends[r - 1] };
        let end = self.layer_ends[r];
        let ngens = self.ctx.num_generators();
        for i in start..end {
            for s in 0..ngens {
                let prod = self.ctx.multiply(&self.elements[i], &self.ctx.generator(s))?;
                let key = self.ctx.key(&prod)?;
                let j = match self.index.get(&key) {
                    Some(&j) => j,
                    None => {
                        let j = self.elements.len();
                        if j >= cap {
                            return Err(GroupError::Capacity { cap, radius: r });
                        }
                        let mut w = self.words[i].0.clone();
                        w.push(s);
                        self.elements.push(prod);
                        self.words.push(GeneratorWord(w));
                        self.index.insert(key, j);
                        self.neighbors.extend(std::iter::repeat(None).take(ngens));
                        j
                    }
                };
                self.neighbors[i * ngens + s] = Some(j);
            }
        }
        self.layer_ends.push(self.elements.len());
        Ok(())
    }

    pub fn extend_to(&mut self, n: usize, cap: usize) -> Result<(), GroupError> {
        while self.radius() < n {
            self.grow(cap)?;
        }
        Ok(())
    }

    /// Elements of norm exactly `n`, as an index range.
    pub fn layer(&self, n: usize) -> std::ops::Range<usize> {
        let lo = if n == 0 { 0 } else { self.size_at(n - 1) };
        lo..self.size_at(n)
    }
}

/// A shared, lazily growing ball used for norm and distance queries.
#[derive(Debug)]
pub struct Cayley {
    ctx: GroupCtx,
    cap: usize,
    ball: Mutex<Arc<Ball>>,
}

impl Cayley {
    pub fn new(ctx: GroupCtx) -> Cayley {
        Cayley::with_cap(ctx, DEFAULT_BALL_CAP)
    }

    pub fn with_cap(ctx: GroupCtx, cap: usize) -> Cayley {
        let ball = Mutex::new(Arc::new(Ball::new(ctx.clone())));
        Cayley { ctx, cap, ball }
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    /// A ball of radius at least `n`; its first `size_at(n)` elements are `B_n`.
    pub fn ball(&self, n: usize) -> Result<Arc<Ball>, GroupError> {
        let mut guard = self.ball.lock().expect("ball lock poisoned");
        if guard.radius() < n {
            Arc::make_mut(&mut guard).extend_to(n, self.cap)?;
        }
        Ok(Arc::clone(&guard))
    }

    pub fn norm(&self, g: &GroupElement) -> Result<usize, GroupError> {
        let key = self.ctx.key(g)?;
        let mut guard = self.ball.lock().expect("ball lock poisoned");
        loop {
            if let Some(i) = guard.position_of_key(&key) {
                return Ok(guard.norm_of_index(i));
            }
            if guard.is_saturated() {
                // unreachable for elements of the group; treat as a capacity failure
                return Err(GroupError::Capacity { cap: self.cap, radius: guard.radius() });
            }
            Arc::make_mut(&mut guard).grow(self.cap)?;
        }
    }

    pub fn distance(&self, g: &GroupElement, h: &GroupElement) -> Result<usize, GroupError> {
        let q = self.ctx.multiply(&self.ctx.inverse(g)?, h)?;
        self.norm(&q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupElement::Int;

    #[test]
    fn z_ball_order() {
        let b = ball(&GroupCtx::z(), 2).unwrap();
        assert_eq!(b.elements(), &[Int(0), Int(1), Int(-1), Int(2), Int(-2)]);
        assert_eq!(b.size_at(1), 3);
        assert_eq!(b.norm_of_index(0), 0);
        assert_eq!(b.norm_of_index(2), 1);
        assert_eq!(b.norm_of_index(3), 2);
        assert_eq!(b.right_neighbor(1, 0), Some(3));
        assert_eq!(b.right_neighbor(1, 1), Some(0));
        assert_eq!(b.right_neighbor(3, 0), None);
    }

    #[test]
    fn grigorchuk_first_ball() {
        let g = GroupCtx::grigorchuk();
        let b = ball(&g, 1).unwrap();
        assert_eq!(b.len(), 5);
        let b0 = ball(&g, 0).unwrap();
        assert_eq!(b0.len(), 1);
    }

    #[test]
    fn s3_saturates() {
        let b = ball(&GroupCtx::s3(), 6).unwrap();
        assert_eq!(b.len(), 6);
        assert!(b.is_saturated());
        assert_eq!(b.layer(5), 6..6);
    }

    #[test]
    fn capacity_reports_radius() {
        let err = Ball::with_radius(&GroupCtx::grigorchuk(), 10, 20).unwrap_err();
        assert!(matches!(err, GroupError::Capacity { cap: 20, .. }));
    }
}
