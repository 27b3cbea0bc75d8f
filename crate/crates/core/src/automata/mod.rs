//! Multi-head automata walking `G × ℤ` over the configurations `x^p`, and a
//! predictor that replaces group equality by a prefix of the word problem.
//!
//! Heads move simultaneously. Each step, head `i` in state `q` fires the
//! first table entry for `(i, q)` whose constraints hold at its radius-`r`
//! neighbourhood, moves by the entry's generator and takes its next state.
//! A run rejects at the first step whose arrangement matches an entry of `F`.

mod spec;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{Cayley, GeneratorWord, GroupCtx, GroupError};
use crate::recursion::PsiHandle;
use crate::subshift::OraclePrefix;

pub use spec::{
    Arrangement, AutomatonFile, AutomatonSpec, CellSpec, HeadSpec, Move, Offset, Pos, Rule, RuleSpec,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid automaton: {0}")]
    Spec(String),
    #[error("no rule for head {head} in state {state} at step {step}")]
    RuleGap { head: usize, state: u32, step: u64 },
    #[error("word-problem oracle exhausted: bit {index} needed")]
    OracleExhausted { index: String },
    #[error("{0}")]
    Domain(String),
}

/// Decides equality of `G` coordinates.
pub trait GroupOracle: Sync {
    fn equal(&self, a: &GeneratorWord, b: &GeneratorWord) -> Result<bool, SimError>;
}

/// Equality computed in the group itself.
pub struct ExactOracle<'a>(pub &'a GroupCtx);

impl GroupOracle for ExactOracle<'_> {
    fn equal(&self, a: &GeneratorWord, b: &GeneratorWord) -> Result<bool, SimError> {
        let q = a.inverse(self.0.inverses()).concat(b);
        Ok(self.0.is_identity(&q)?)
    }
}

/// Equality read from a prefix of the word problem: `a = b` iff bit
/// `index(reduce(a⁻¹b))` is 1.
pub struct PrefixOracle<'a> {
    pub ctx: &'a GroupCtx,
    pub bits: &'a OraclePrefix,
}

impl GroupOracle for PrefixOracle<'_> {
    fn equal(&self, a: &GeneratorWord, b: &GeneratorWord) -> Result<bool, SimError> {
        let q = a.inverse(self.ctx.inverses()).concat(b).freely_reduced(self.ctx.inverses());
        let index = self.ctx.word_index(&q);
        let i: Option<usize> = index.clone().try_into().ok();
        i.and_then(|i| self.bits.get(i)).ok_or(SimError::OracleExhausted { index: index.to_string() })
    }
}

/// The first `len` bits of the word problem of `G` in length-lex order.
pub fn wp_prefix(ctx: &GroupCtx, len: usize) -> Result<OraclePrefix, SimError> {
    let bits = (0..len)
        .into_par_iter()
        .map(|i| ctx.is_identity(&ctx.enumerate_words(&BigUint::from(i))))
        .collect::<Result<Vec<bool>, _>>()?;
    Ok(OraclePrefix::new(bits))
}

/// A configuration of `{0,1}^(G×ℤ)` that is constant along `G`-cosets or has finite support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Configuration {
    /// `x^p`: cell `(g, z)` holds 1 iff `p | z`.
    Periodic(u64),
    /// The listed cells hold 1.
    Finite(Vec<Pos>),
}

impl Configuration {
    pub fn read(&self, cell: &Pos, oracle: &dyn GroupOracle) -> Result<u8, SimError> {
        match self {
            Configuration::Periodic(p) => Ok(u8::from(cell.z.rem_euclid(*p as i64) == 0)),
            Configuration::Finite(ones) => {
                for one in ones {
                    if one.z == cell.z && oracle.equal(&one.g, &cell.g)? {
                        return Ok(1);
                    }
                }
                Ok(0)
            }
        }
    }
}

/// `x^p`; `p ≥ 1`.
pub fn make_xp(p: u64) -> Result<Configuration, SimError> {
    if p == 0 {
        return Err(SimError::Domain("the period must be positive".into()));
    }
    Ok(Configuration::Periodic(p))
}

/// Positions and states of all heads.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunState {
    pub heads: Vec<(Pos, u32)>,
    pub step: u64,
}

impl RunState {
    /// Heads of `arrangement` placed relative to `start`.
    pub fn place(spec: &AutomatonSpec, arrangement: &Arrangement, start: &Pos) -> RunState {
        let inv = spec.g.inverses();
        RunState { heads: arrangement.iter().map(|(_, o, q)| (start.offset(o, inv), *q)).collect(), step: 0 }
    }
}

fn head_at(state: &RunState, j: usize, cell: &Pos, q: u32, oracle: &dyn GroupOracle) -> Result<bool, SimError> {
    let (pos, s) = &state.heads[j];
    Ok(*s == q && pos.z == cell.z && oracle.equal(&pos.g, &cell.g)?)
}

/// One synchronous step.
pub fn step(
    spec: &AutomatonSpec,
    config: &Configuration,
    state: &RunState,
    oracle: &dyn GroupOracle,
) -> Result<RunState, SimError> {
    let inv = spec.g.inverses();
    let mut next = Vec::with_capacity(state.heads.len());
    'heads: for (i, (pos, q)) in state.heads.iter().enumerate() {
        'rules: for rule in spec.rules.iter().filter(|r| r.head == i && r.state == *q) {
            for (o, v) in &rule.cells {
                if config.read(&pos.offset(o, inv), oracle)? != *v {
                    continue 'rules;
                }
            }
            for (j, o, s) in &rule.heads {
                if !head_at(state, *j, &pos.offset(o, inv), *s, oracle)? {
                    continue 'rules;
                }
            }
            let moved = match rule.mv {
                Move::Stay => pos.clone(),
                Move::G(x) => Pos { g: pos.g.concat(&GeneratorWord(vec![x])).freely_reduced(inv), z: pos.z },
                Move::Z(d) => Pos { g: pos.g.clone(), z: pos.z + d },
            };
            next.push((moved, rule.next));
            continue 'heads;
        }
        return Err(SimError::RuleGap { head: i, state: *q, step: state.step });
    }
    Ok(RunState { heads: next, step: state.step + 1 })
}

/// Index of the first entry of `F` matching the arrangement.
pub fn rejecting(spec: &AutomatonSpec, state: &RunState, oracle: &dyn GroupOracle) -> Result<Option<usize>, SimError> {
    let inv = spec.g.inverses();
    'entries: for (n, entry) in spec.reject.iter().enumerate() {
        let (h0, o0, _) = &entry[0];
        let anchor = state.heads[*h0].0.offset(&o0.inverse(inv), inv);
        for (h, o, q) in entry {
            if !head_at(state, *h, &anchor.offset(o, inv), *q, oracle)? {
                continue 'entries;
            }
        }
        return Ok(Some(n));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RunOutcome {
    Rejected { step: u64, initial: usize, reject: usize },
    Survived { steps: u64 },
}

impl RunOutcome {
    pub fn rejected(&self) -> bool {
        matches!(self, RunOutcome::Rejected { .. })
    }
}

/// Runs every initial arrangement from `start` for at most `steps` steps;
/// reports the first arrangement, in `I` order, that rejects.
pub fn run(
    spec: &AutomatonSpec,
    config: &Configuration,
    start: &Pos,
    steps: u64,
    oracle: &dyn GroupOracle,
) -> Result<RunOutcome, SimError> {
    for (a, arrangement) in spec.initial.iter().enumerate() {
        let mut state = RunState::place(spec, arrangement, start);
        for n in 0..=steps {
            if let Some(f) = rejecting(spec, &state, oracle)? {
                return Ok(RunOutcome::Rejected { step: n, initial: a, reject: f });
            }
            if n < steps {
                state = step(spec, config, &state, oracle)?;
            }
        }
    }
    Ok(RunOutcome::Survived { steps })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// No run rejected within the step cap.
    InS { steps: u64 },
    RejectedWitness { phase: u64, initial: usize, step: u64 },
}

impl Membership {
    pub fn in_s(&self) -> bool {
        matches!(self, Membership::InS { .. })
    }
}

/// Whether `x^p` survives every run; runs start at `(e, phase)` for each
/// `phase < p`, which covers every start cell up to translation.
pub fn membership_test(
    spec: &AutomatonSpec,
    p: u64,
    steps: u64,
    oracle: &dyn GroupOracle,
) -> Result<Membership, SimError> {
    let config = make_xp(p)?;
    let found = (0..p)
        .into_par_iter()
        .map(|phase| match run(spec, &config, &Pos::at_z(phase as i64), steps, oracle) {
            Ok(RunOutcome::Rejected { step, initial, .. }) => Some(Ok(Membership::RejectedWitness { phase, initial, step })),
            Ok(RunOutcome::Survived { .. }) => None,
            Err(e) => Some(Err(e)),
        })
        .find_map_first(|x| x);
    found.unwrap_or(Ok(Membership::InS { steps }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "prediction", rename_all = "snake_case")]
pub enum Prediction {
    /// Some run rejected within the step cap.
    Halted { phase: u64, initial: usize, step: u64 },
    Running { steps: u64 },
}

/// `membership_test` with equality read from a word-problem prefix of `G`.
/// Requires a three-headed automaton.
pub fn predictor(
    spec: &AutomatonSpec,
    p: u64,
    wp: &OraclePrefix,
    steps: u64,
) -> Result<Prediction, SimError> {
    if spec.heads() != 3 {
        return Err(SimError::Spec(format!("the predictor needs 3 heads, found {}", spec.heads())));
    }
    Ok(match membership_test(spec, p, steps, &PrefixOracle { ctx: &spec.g, bits: wp })? {
        Membership::InS { steps } => Prediction::Running { steps },
        Membership::RejectedWitness { phase, initial, step } => Prediction::Halted { phase, initial, step },
    })
}

impl Prediction {
    /// The membership verdict this prediction stands for.
    pub fn membership(&self) -> Membership {
        match *self {
            Prediction::Running { steps } => Membership::InS { steps },
            Prediction::Halted { phase, initial, step } => Membership::RejectedWitness { phase, initial, step },
        }
    }
}

/// One line of a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub step: u64,
    pub head: usize,
    pub g: String,
    pub z: i64,
    pub state: u32,
    pub separation: u64,
}

/// Largest pairwise `G`-distance between heads.
fn separation(cayley: &Cayley, state: &RunState) -> Result<u64, SimError> {
    let ctx = cayley.ctx();
    let elems = state.heads.iter().map(|(p, _)| ctx.eval(&p.g)).collect::<Result<Vec<_>, _>>()?;
    let mut best = 0;
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            best = best.max(cayley.distance(&elems[i], &elems[j])? as u64);
        }
    }
    Ok(best)
}

/// Separation after each of the steps `0..=steps` of the first initial
/// arrangement. Stops early when the run rejects.
pub fn separation_trace(
    spec: &AutomatonSpec,
    config: &Configuration,
    start: &Pos,
    steps: u64,
) -> Result<Vec<u64>, SimError> {
    Ok(trace_states(spec, config, 0, start, steps)?
        .into_iter()
        .map(|(_, sep)| sep)
        .collect())
}

/// Line records of one run: one per head per step.
pub fn trace(
    spec: &AutomatonSpec,
    config: &Configuration,
    initial: usize,
    start: &Pos,
    steps: u64,
) -> Result<Vec<TraceRecord>, SimError> {
    let mut out = Vec::new();
    for (n, (state, sep)) in trace_states(spec, config, initial, start, steps)?.into_iter().enumerate() {
        for (h, (pos, q)) in state.heads.iter().enumerate() {
            out.push(TraceRecord {
                step: n as u64,
                head: h,
                g: spec.g.format_word(&pos.g),
                z: pos.z,
                state: *q,
                separation: sep,
            });
        }
    }
    Ok(out)
}

fn trace_states(
    spec: &AutomatonSpec,
    config: &Configuration,
    initial: usize,
    start: &Pos,
    steps: u64,
) -> Result<Vec<(RunState, u64)>, SimError> {
    let arrangement = spec
        .initial
        .get(initial)
        .ok_or_else(|| SimError::Domain(format!("no initial arrangement {initial}")))?;
    let oracle = ExactOracle(&spec.g);
    let cayley = Cayley::new(spec.g.clone());
    let mut state = RunState::place(spec, arrangement, start);
    let mut out = Vec::new();
    for n in 0..=steps {
        out.push((state.clone(), separation(&cayley, &state)?));
        if n == steps || rejecting(spec, &state, &oracle)?.is_some() {
            break;
        }
        state = step(spec, config, &state, &oracle)?;
    }
    Ok(out)
}

/// `x^p ∈ Y_B`, where `B = {ψ(p)}` indexes words of `G`: holds iff word
/// `ψ(p)` is trivial.
pub fn yb_membership(handle: &PsiHandle, ctx: &GroupCtx, p: u64) -> Result<bool, SimError> {
    Ok(ctx.is_identity(&ctx.enumerate_words(&handle.get(p)))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> GroupCtx {
        GroupCtx::z()
    }

    #[test]
    fn eleven_detector_membership() {
        let det = AutomatonSpec::eleven_detector("Z", 0);
        let ctx = z();
        let oracle = ExactOracle(&ctx);
        assert!(!membership_test(&det, 1, 100, &oracle).unwrap().in_s());
        for p in 2..6 {
            assert!(membership_test(&det, p, 100, &oracle).unwrap().in_s(), "p = {p}");
        }
        assert_eq!(
            membership_test(&det, 1, 100, &oracle).unwrap(),
            Membership::RejectedWitness { phase: 0, initial: 0, step: 1 }
        );
        assert!(make_xp(0).is_err());
    }

    #[test]
    fn eleven_detector_on_finite_support() {
        let det = AutomatonSpec::eleven_detector("Z", 0);
        let ctx = z();
        let cfg = Configuration::Finite(vec![Pos::at_z(4), Pos::at_z(5)]);
        let out = run(&det, &cfg, &Pos::origin(), 10, &ExactOracle(&ctx)).unwrap();
        assert_eq!(out, RunOutcome::Rejected { step: 5, initial: 0, reject: 0 });
        let cfg = Configuration::Finite(vec![Pos::at_z(4), Pos::at_z(6)]);
        assert!(!run(&det, &cfg, &Pos::origin(), 10, &ExactOracle(&ctx)).unwrap().rejected());
    }

    #[test]
    fn single_head_separation_is_zero() {
        let det = AutomatonSpec::eleven_detector("grigorchuk", 0);
        let t = separation_trace(&det, &Configuration::Periodic(3), &Pos::origin(), 20).unwrap();
        assert_eq!(t, vec![0; 21]);
    }

    #[test]
    fn separation_of_walking_heads() {
        let file: AutomatonFile = serde_json::from_str(
            r#"{
              "group": "Z", "states": [1, 1], "radius": 1,
              "rules": [
                {"head": 0, "state": 1, "move": "l.+1", "next": 1},
                {"head": 1, "state": 1, "move": "l.-1", "next": 1}
              ],
              "initial": [[{"head": 0, "offset": "ε", "state": 1}, {"head": 1, "offset": "ε", "state": 1}]]
            }"#,
        )
        .unwrap();
        let a = AutomatonSpec::compile(file).unwrap();
        let t = separation_trace(&a, &Configuration::Periodic(2), &Pos::origin(), 4).unwrap();
        assert_eq!(t, vec![0, 2, 4, 6, 8]);
        let recs = trace(&a, &Configuration::Periodic(2), 0, &Pos::origin(), 1).unwrap();
        assert_eq!(recs.len(), 4);
        assert_eq!(recs[2].g, "+1");
    }

    #[test]
    fn rule_gaps_are_reported() {
        let mut f = AutomatonSpec::eleven_detector("Z", 0).file().clone();
        f.rules.remove(1);
        let a = AutomatonSpec::compile(f).unwrap();
        let err = membership_test(&a, 3, 10, &ExactOracle(&z())).unwrap_err();
        assert_eq!(err, SimError::RuleGap { head: 0, state: 1, step: 0 });
    }

    #[test]
    fn head_constraints_use_the_oracle() {
        // head 0 walks in G; head 1 waits for it to come back to its cell
        let file: AutomatonFile = serde_json::from_str(
            r#"{
              "group": "Z", "states": [2, 2], "radius": 1,
              "rules": [
                {"head": 0, "state": 1, "move": "l.+1", "next": 2},
                {"head": 0, "state": 2, "move": "l.-1", "next": 2},
                {"head": 1, "state": 1, "heads": [{"head": 0, "offset": "ε", "state": 2}], "move": "stay", "next": 2},
                {"head": 1, "state": 1, "move": "stay", "next": 1},
                {"head": 1, "state": 2, "move": "stay", "next": 2}
              ],
              "initial": [[{"head": 0, "offset": "ε", "state": 1}, {"head": 1, "offset": "ε", "state": 1}]],
              "reject": [[{"head": 1, "offset": "ε", "state": 2}]]
            }"#,
        )
        .unwrap();
        let a = AutomatonSpec::compile(file).unwrap();
        let ctx = z();
        let out = run(&a, &Configuration::Periodic(1), &Pos::origin(), 5, &ExactOracle(&ctx)).unwrap();
        assert_eq!(out, RunOutcome::Rejected { step: 3, initial: 0, reject: 0 });
        let wp = wp_prefix(&ctx, 64).unwrap();
        let po = PrefixOracle { ctx: &ctx, bits: &wp };
        assert_eq!(run(&a, &Configuration::Periodic(1), &Pos::origin(), 5, &po).unwrap(), out);
        let short = wp_prefix(&ctx, 1).unwrap();
        let po = PrefixOracle { ctx: &ctx, bits: &short };
        assert!(matches!(
            run(&a, &Configuration::Periodic(1), &Pos::origin(), 5, &po),
            Err(SimError::OracleExhausted { .. })
        ));
    }

    #[test]
    fn predictor_matches_exact_membership() {
        let det = AutomatonSpec::eleven_detector("Z", 2);
        let ctx = z();
        let wp = wp_prefix(&ctx, 16).unwrap();
        for p in 1..=3 {
            let exact = membership_test(&det, p, 50, &ExactOracle(&ctx)).unwrap();
            assert_eq!(predictor(&det, p, &wp, 50).unwrap().membership(), exact);
        }
        assert!(predictor(&AutomatonSpec::eleven_detector("Z", 0), 1, &wp, 5).is_err());
    }

    #[test]
    fn wp_prefix_values() {
        let g = GroupCtx::grigorchuk();
        let wp = wp_prefix(&g, 21).unwrap();
        // ε, then the four letters, then the sixteen words of length 2
        let ones: Vec<usize> = wp.members().collect();
        assert_eq!(ones, vec![0, 5, 10, 15, 20]);
        let z = wp_prefix(&z(), 7).unwrap();
        assert_eq!(z.members().collect::<Vec<_>>(), vec![0, 4, 5]);
    }

    #[test]
    fn orbiting_head_stays_close() {
        // head 1 repeats `ab`, an element of order 16, so it returns every 32 steps
        let file: AutomatonFile = serde_json::from_str(
            r#"{
              "group": "grigorchuk", "states": [1, 2], "radius": 1,
              "rules": [
                {"head": 0, "state": 1, "move": "stay", "next": 1},
                {"head": 1, "state": 1, "move": "l.a", "next": 2},
                {"head": 1, "state": 2, "move": "l.b", "next": 1}
              ],
              "initial": [[{"head": 0, "offset": "ε", "state": 1}, {"head": 1, "offset": "ε", "state": 1}]]
            }"#,
        )
        .unwrap();
        let a = AutomatonSpec::compile(file).unwrap();
        let t = separation_trace(&a, &Configuration::Periodic(2), &Pos::origin(), 64).unwrap();
        assert_eq!(t.len(), 65);
        assert!(t.iter().all(|&d| d <= 16));
        assert_eq!(t[32], 0);
        assert_eq!(t[64], 0);
        assert_eq!(t[16], 16);
    }

    #[test]
    fn shift_covariance() {
        let det = AutomatonSpec::eleven_detector("Z", 0);
        let ctx = z();
        let o = ExactOracle(&ctx);
        for p in 1..5u64 {
            let cfg = make_xp(p).unwrap();
            for t in -6i64..6 {
                let shifted = run(&det, &cfg, &Pos::at_z(t), 30, &o).unwrap();
                let phase = run(&det, &cfg, &Pos::at_z(t.rem_euclid(p as i64)), 30, &o).unwrap();
                assert_eq!(shifted, phase);
            }
        }
    }

    #[test]
    fn yb_membership_examples() {
        use crate::recursion::{PsiHandle, RateFunction};
        use std::collections::BTreeMap;
        let ctx = z();
        let zero = PsiHandle { rate: RateFunction::Identity, values: BTreeMap::new(), default: BigUint::from(0u8) };
        assert!((0..10).all(|p| yb_membership(&zero, &ctx, p).unwrap()));
        let plus = PsiHandle { rate: RateFunction::Identity, values: BTreeMap::new(), default: BigUint::from(1u8) };
        assert!((0..10).all(|p| !yb_membership(&plus, &ctx, p).unwrap()));
        let values = (0..30u64).map(|p| (p, BigUint::from(p * 3))).collect();
        let h = PsiHandle { rate: RateFunction::Identity, values, default: BigUint::from(0u8) };
        let wp = wp_prefix(&ctx, 100).unwrap();
        for p in 0..30 {
            assert_eq!(yb_membership(&h, &ctx, p).unwrap(), wp.get(3 * p as usize).unwrap());
        }
    }
}
