use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{KContext, KError, KGenerator, KTemplate, KWord};
use crate::groups::{GroupCtx, GroupElement, GroupError, Order};
use crate::subshift::{legal_supports, oracle_bound, OraclePrefix, Pattern, Support};

/// The configuration `translate · pattern` together with an `H` element.
///
/// Cells outside the pattern's domain are unknown; multipliers reading them
/// act trivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPoint {
    pub pattern: Pattern,
    pub translate: GroupElement,
    pub h: GroupElement,
}

impl KPoint {
    pub fn at_origin(pattern: Pattern, h: GroupElement) -> KPoint {
        let translate = pattern.ctx().identity();
        KPoint { pattern, translate, h }
    }
}

/// Applies `w` to a point, rightmost generator first.
pub fn act(t: &KTemplate, w: &KWord, point: &KPoint) -> Result<KPoint, KError> {
    let g = t.g();
    if point.pattern.ctx() != g {
        return Err(GroupError::ContextMismatch.into());
    }
    let mut out = point.clone();
    for &x in w.0.iter().rev() {
        match x {
            KGenerator::Shift(s) => {
                out.translate = g.multiply(&g.generator(s), &out.translate)?;
            }
            KGenerator::Mult { h, bit } => {
                // (t·P)_e = P_{t⁻¹}
                let origin = g.inverse(&out.translate)?;
                let value = out
                    .pattern
                    .domain()
                    .position(&origin)
                    .filter(|&i| i < out.pattern.len())
                    .and_then(|i| out.pattern.value(i));
                if value == Some(bit) {
                    out.h = t.h().multiply(&t.h().generator(h), &out.h)?;
                }
            }
        }
    }
    Ok(out)
}

/// The cells a word reads and the multipliers it applies, in application
/// order. The schedule does not depend on the configuration.
#[derive(Clone, Debug)]
pub struct Schedule {
    cells: Vec<GroupElement>,
    reads: Vec<(usize, GroupElement, u8)>,
    gamma: GroupElement,
    gamma_trivial: bool,
    word_len: usize,
}

/// Compiles `w`. Cell `c` is read when the configuration has been translated
/// by `c⁻¹`; cells are numbered in order of first read.
pub fn compile(t: &KTemplate, w: &KWord) -> Result<Schedule, KError> {
    t.check(w)?;
    let g = t.g();
    let mut ids: HashMap<_, usize> = HashMap::new();
    let mut cells = Vec::new();
    let mut reads = Vec::new();
    // u = (current translate)⁻¹
    let mut u = g.identity();
    for &x in w.0.iter().rev() {
        match x {
            KGenerator::Shift(s) => {
                u = g.multiply(&u, &g.generator(g.inverse_generator(s)))?;
            }
            KGenerator::Mult { h, bit } => {
                let key = g.key(&u)?;
                let id = *ids.entry(key).or_insert_with(|| {
                    cells.push(u.clone());
                    cells.len() - 1
                });
                reads.push((id, t.h().generator(h), bit));
            }
        }
    }
    let gamma = g.inverse(&u)?;
    let gamma_trivial = g.element_is_identity(&gamma)?;
    Ok(Schedule { cells, reads, gamma, gamma_trivial, word_len: w.len() })
}

impl Schedule {
    pub fn cells(&self) -> &[GroupElement] {
        &self.cells
    }

    pub fn gamma(&self) -> &GroupElement {
        &self.gamma
    }

    pub fn gamma_trivial(&self) -> bool {
        self.gamma_trivial
    }

    pub fn word_len(&self) -> usize {
        self.word_len
    }

    /// The element `h_P` with `w·(P, h) = (γ(w)·P, h_P·h)`, where `P` has 1s
    /// exactly at the listed cells among those the word reads.
    pub fn multiplier(&self, hctx: &GroupCtx, ones: &[usize]) -> Result<GroupElement, GroupError> {
        let mut acc = hctx.identity();
        for (cell, h, bit) in &self.reads {
            if ones.contains(cell) as u8 == *bit {
                acc = hctx.multiply(h, &acc)?;
            }
        }
        Ok(acc)
    }
}

/// Why a word is not the identity of `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KWitness {
    /// The image under `γ` is not trivial.
    Gamma { image: String },
    /// The word moves `(P, e_H)` for this legal window over `B_radius`.
    Pattern { radius: usize, ones: Vec<usize>, cells: Vec<String>, multiplier: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum WpResult {
    Identity,
    NonIdentity { witness: KWitness },
    NeedsOracle { bound: usize },
}

impl WpResult {
    pub fn is_identity(&self) -> Option<bool> {
        match self {
            WpResult::Identity => Some(true),
            WpResult::NonIdentity { .. } => Some(false),
            WpResult::NeedsOracle { .. } => None,
        }
    }
}

/// Decides `w = e_K` from the oracle prefix by sweeping the whole language of
/// `X_A` over `B_{|w|}`. The reported witness is the first moving window in
/// canonical order.
pub fn wp_k(ctx: &KContext, w: &KWord) -> Result<WpResult, KError> {
    let t = &ctx.template;
    let n = w.len();
    let bound = oracle_bound(n);
    if ctx.oracle.len() < bound {
        return Ok(WpResult::NeedsOracle { bound });
    }
    let sched = compile(t, w)?;
    if !sched.gamma_trivial {
        let image = t.g().format_element(&sched.gamma);
        return Ok(WpResult::NonIdentity { witness: KWitness::Gamma { image } });
    }
    let cayley = t.cayley();
    let ball = cayley.ball(n)?;
    let mut cell_of_index: HashMap<usize, usize> = HashMap::new();
    for (id, c) in sched.cells.iter().enumerate() {
        let pos = ball
            .position(c)
            .filter(|&p| p < ball.size_at(n))
            .expect("every read cell lies in the ball of radius |w|");
        cell_of_index.insert(pos, id);
    }
    let supports = legal_supports(cayley, &ctx.oracle, n)?;
    let hctx = t.h();
    let found = supports
        .par_iter()
        .map(|s| -> Result<Option<(Support, GroupElement)>, GroupError> {
            let ones: Vec<usize> = s.ones().iter().filter_map(|i| cell_of_index.get(i).copied()).collect();
            let m = sched.multiplier(hctx, &ones)?;
            Ok((!hctx.element_is_identity(&m)?).then_some((*s, m)))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(WpResult::Identity),
        Some(Err(e)) => Err(e.into()),
        Some(Ok(None)) => unreachable!(),
        Some(Ok(Some((s, m)))) => {
            let ones = s.ones();
            let cells = ones.iter().map(|&i| t.g().format_element(&ball.elements()[i])).collect();
            Ok(WpResult::NonIdentity {
                witness: KWitness::Pattern { radius: n, ones, cells, multiplier: hctx.format_element(&m) },
            })
        }
    }
}

/// Sweep restricted to the cells a word reads. A window's effect only
/// depends on its restriction to those cells, so supports inside the read set
/// cover every window.
#[derive(Clone, Debug)]
pub struct ReducedSweep {
    schedule: Schedule,
    // distances[i][j - i - 1] = d(cell_i, cell_j) for i < j
    distances: Vec<Vec<usize>>,
}

impl ReducedSweep {
    pub fn new(t: &KTemplate, schedule: Schedule) -> Result<ReducedSweep, KError> {
        let cells = schedule.cells();
        let distances = (0..cells.len())
            .into_par_iter()
            .map(|i| {
                (i + 1..cells.len())
                    .map(|j| t.cayley().distance(&cells[i], &cells[j]))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReducedSweep { schedule, distances })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn distance(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.distances[i][j - i - 1]
    }

    pub fn max_distance(&self) -> usize {
        self.distances.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Supports over read cells with at most two 1s: empty, singles, pairs.
    pub fn supports(&self) -> Vec<Support> {
        let n = self.schedule.cells.len();
        let mut out = vec![Support::Empty];
        out.extend((0..n).map(Support::One));
        for i in 0..n {
            out.extend((i + 1..n).map(|j| Support::Two(i, j)));
        }
        out
    }

    /// Multipliers `h_P` of every window legal for `prefix`, in support order.
    pub fn legal_multipliers(
        &self,
        hctx: &GroupCtx,
        prefix: &OraclePrefix,
    ) -> Result<Vec<(Support, GroupElement)>, KError> {
        let needed = self.max_distance() + 1;
        if self.schedule.cells.len() >= 2 && prefix.len() < needed {
            return Err(KError::NeedsOracle { needed });
        }
        self.supports()
            .into_par_iter()
            .filter(|s| match *s {
                Support::Two(i, j) => !prefix.bits()[self.distance(i, j)],
                _ => true,
            })
            .map(|s| Ok((s, self.schedule.multiplier(hctx, &s.ones())?)))
            .collect()
    }
}

/// Order of `w` in `K`: `k · lcm(ord h_P)` where `k = ord γ(w)` and `h_P`
/// ranges over the multipliers of `wᵏ` on legal windows.
pub fn order_k(ctx: &KContext, w: &KWord, cap: u64) -> Result<u64, KError> {
    let t = &ctx.template;
    let g = t.g();
    let gamma = g.eval(&t.gamma(w))?;
    let k = match g.element_order(&gamma, cap)? {
        Order::Finite(k) => k,
        Order::Infinite => return Err(GroupError::NotTorsion(g.name().to_string()).into()),
    };
    let wk = w.pow(k as usize);
    let needed = oracle_bound(wk.len());
    if ctx.oracle.len() < needed {
        return Err(KError::NeedsOracle { needed });
    }
    let sweep = ReducedSweep::new(t, compile(t, &wk)?)?;
    let hctx = t.h();
    let mut seen = HashMap::new();
    for (_, m) in sweep.legal_multipliers(hctx, &ctx.oracle)? {
        seen.entry(hctx.key(&m)?).or_insert(m);
    }
    let mut ell: u64 = 1;
    for m in seen.values() {
        let o = match hctx.element_order(m, cap)? {
            Order::Finite(o) => o,
            Order::Infinite => return Err(GroupError::NotTorsion(hctx.name().to_string()).into()),
        };
        ell = lcm(ell, o);
        if ell.saturating_mul(k) > cap {
            return Err(GroupError::CapExceeded(cap).into());
        }
    }
    Ok(k * ell)
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// False exactly when `w` is trivial under the smaller set `A'` but not under
/// `A`, which the quotient map from `K(G,A',H)` onto `K(G,A,H)` forbids.
pub fn quotient_check(sub: &KContext, sup: &KContext, w: &KWord) -> Result<bool, KError> {
    if sub.template != sup.template {
        return Err(GroupError::ContextMismatch.into());
    }
    if !sub.oracle.le(&sup.oracle) {
        return Err(KError::NotNested);
    }
    let under_sub = decided(wp_k(sub, w)?)?;
    let under_sup = decided(wp_k(sup, w)?)?;
    Ok(!(under_sub && !under_sup))
}

fn decided(r: WpResult) -> Result<bool, KError> {
    match r {
        WpResult::NeedsOracle { bound } => Err(KError::NeedsOracle { needed: bound }),
        r => Ok(r.is_identity().expect("decided")),
    }
}
