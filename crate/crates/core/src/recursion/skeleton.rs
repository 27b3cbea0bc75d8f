//! The stage-by-stage construction of a `φ`-impredictable r.e. set.
//!
//! Stage `t` starts with `[0, m)` determined. It pairs each of the `2^m`
//! candidate prefixes `w_i` with a fresh input `p_i` satisfying `φ(p_i) ≥ m`,
//! keeps `[m, M]` out of `A` for `M = max φ(p_i)`, and places
//! `ψ(p_i) = M + 1 + i` in `A` iff the stage program halts on
//! `(p_i, w_i·0^(φ(p_i)−m))`. The stage determines `[m, M + 2^m]`.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::program::{run_program, OracleBits, Padded, ToyProgram};
use super::rate::RateFunction;
use super::RecursionError;
use crate::subshift::OraclePrefix;
use num_bigint::BigUint;

/// Where stage programs come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChiSource {
    /// Stage `t` uses `roster[t mod len]`.
    Roster(Vec<ToyProgram>),
    /// Stage `t` uses program `t` of [`super::MachineEnumeration`].
    Enumeration,
}

impl ChiSource {
    pub fn program(&self, t: usize) -> Option<ToyProgram> {
        match self {
            ChiSource::Roster(r) if r.is_empty() => None,
            ChiSource::Roster(r) => Some(r[t % r.len()].clone()),
            ChiSource::Enumeration => Some(super::MachineEnumeration::program(&BigUint::from(t))),
        }
    }
}

/// One assigned position: `ψ(p) ∈ A` iff the stage program halts on `(p, word·0^(pad_len−|word|))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub p: u64,
    pub psi: u64,
    pub word: OraclePrefix,
    pub pad_len: u64,
}

impl Rule {
    pub fn oracle(&self) -> Padded<'_> {
        Padded { word: self.word.bits(), len: self.pad_len }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub index: usize,
    /// Length of the prefix determined before the stage.
    pub m: u64,
    /// `max φ(p_i)`; `[m, M]` is kept out of `A`.
    #[serde(rename = "M")]
    pub big_m: u64,
    /// Last position determined by the stage.
    #[serde(rename = "M_prime")]
    pub m_prime: u64,
    #[serde(serialize_with = "super::program::serialize_program")]
    pub program: ToyProgram,
    pub rules: Vec<Rule>,
}

impl Stage {
    /// The rule whose word is `w`; rules are in binary counting order, most
    /// significant bit first.
    pub fn rule_for(&self, w: &OraclePrefix) -> Option<&Rule> {
        if w.len() as u64 != self.m {
            return None;
        }
        let i = w.bits().iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        self.rules.get(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    pub phi: RateFunction,
    pub stages: Vec<Stage>,
    #[serde(skip)]
    psi: BTreeMap<u64, u64>,
}

/// Cap on positions scanned when looking for fresh inputs.
const SCAN_LIMIT: u64 = 1 << 24;
/// Cap on the materialized length of `approx_A`.
const PREFIX_LIMIT: u64 = 1 << 28;

/// Builds `stages` stages; a stage needing more than `budget` rules fails.
pub fn build_skeleton(
    phi: &RateFunction,
    chi: &ChiSource,
    stages: usize,
    budget: u64,
) -> Result<Skeleton, RecursionError> {
    let mut out = Skeleton { phi: phi.clone(), stages: Vec::new(), psi: BTreeMap::new() };
    let mut used: HashSet<u64> = HashSet::new();
    let mut m: u64 = 0;
    for t in 0..stages {
        let Some(program) = chi.program(t) else { break };
        let count = if m >= 63 { u64::MAX } else { 1u64 << m };
        if count > budget {
            return Err(RecursionError::Capacity { stage: t, needed: count, budget });
        }
        let start = if phi.is_monotone() { first_reaching(phi, m)? } else { 0 };
        let mut ps = Vec::with_capacity(count as usize);
        let mut p = start;
        while (ps.len() as u64) < count {
            if p - start > SCAN_LIMIT + count + used.len() as u64 {
                return Err(RecursionError::Rate(format!("φ does not reach {m} on fresh inputs")));
            }
            if !used.contains(&p) && phi.eval(p) >= m {
                ps.push(p);
            }
            p += 1;
        }
        let big_m = ps.iter().map(|&p| phi.eval(p)).max().expect("at least one input");
        let m_prime = big_m
            .checked_add(count)
            .filter(|&x| x < u64::MAX)
            .ok_or(RecursionError::Capacity { stage: t, needed: u64::MAX, budget })?;
        let rules: Vec<Rule> = ps
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let word: Vec<bool> = (0..m).rev().map(|bit| bit < 64 && (i as u64 >> bit) & 1 == 1).collect();
                Rule { p, psi: big_m + 1 + i as u64, word: OraclePrefix::new(word), pad_len: phi.eval(p) }
            })
            .collect();
        for r in &rules {
            used.insert(r.p);
            out.psi.insert(r.p, r.psi);
        }
        out.stages.push(Stage { index: t, m, big_m, m_prime, program, rules });
        m = m_prime + 1;
    }
    Ok(out)
}

/// Least `p` with `φ(p) ≥ m` for a nondecreasing `φ`.
fn first_reaching(phi: &RateFunction, m: u64) -> Result<u64, RecursionError> {
    if phi.eval(u64::MAX) < m {
        return Err(RecursionError::Rate(format!("φ never reaches {m}")));
    }
    let (mut lo, mut hi) = (0u64, u64::MAX);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if phi.eval(mid) >= m {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

impl Skeleton {
    /// `ψ(p)`; unassigned inputs map to 0, which stage 0 always keeps out of `A`.
    pub fn psi(&self, p: u64) -> u64 {
        self.psi.get(&p).copied().unwrap_or(0)
    }

    pub fn is_assigned(&self, p: u64) -> bool {
        self.psi.contains_key(&p)
    }

    pub fn assignments(&self) -> &BTreeMap<u64, u64> {
        &self.psi
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Stage, &Rule)> {
        self.stages.iter().flat_map(|s| s.rules.iter().map(move |r| (s, r)))
    }

    /// Number of positions the stages determine.
    pub fn determined_len(&self) -> u64 {
        self.stages.last().map_or(0, |s| s.m_prime + 1)
    }

    /// Every position below this bound is determined once the current stages
    /// have run: the next stage keeps `[m, max(m, φ(2^m − 1))]` out of `A`,
    /// since its `2^m` distinct inputs include one at least `2^m − 1`.
    /// Requires a nondecreasing `φ`.
    pub fn forced_len(&self) -> Option<u64> {
        if self.stages.is_empty() {
            return None;
        }
        if !self.phi.is_monotone() {
            return Some(self.determined_len());
        }
        let m = self.determined_len();
        let top = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
        Some(m.max(self.phi.eval(top)).saturating_add(1))
    }

    /// `A` approximated by running every rule for `step_cap` steps.
    pub fn approx_a(&self, step_cap: u64) -> Result<OraclePrefix, RecursionError> {
        let len = self.determined_len();
        if len > PREFIX_LIMIT {
            return Err(RecursionError::Capacity { stage: self.stages.len(), needed: len, budget: PREFIX_LIMIT });
        }
        let members: Vec<u64> = self
            .stages
            .par_iter()
            .flat_map_iter(|s| s.rules.iter().map(move |r| (s, r)))
            .filter(|(s, r)| run_program(&s.program, r.p, &r.oracle(), step_cap).halted())
            .map(|(_, r)| r.psi)
            .collect();
        Ok(OraclePrefix::from_members(len as usize, members.into_iter().map(|x| x as usize)))
    }

    /// The first `len` bits of `A`, at precision `step_cap`.
    pub fn known_prefix(&self, step_cap: u64, len: u64) -> Result<OraclePrefix, RecursionError> {
        let a = self.approx_a(step_cap)?;
        KnownA::new(self, a).prefix(len)
    }
}

/// `approx_A` followed by the zeros forced by the next stage.
#[derive(Clone, Debug)]
pub struct KnownA {
    pub approx: OraclePrefix,
    /// Bits below this are known; `None` means all bits are known (no stages, `A = ∅`).
    pub known_len: Option<u64>,
}

impl KnownA {
    pub fn new(skel: &Skeleton, approx: OraclePrefix) -> KnownA {
        KnownA { known_len: skel.forced_len(), approx }
    }

    pub fn covers(&self, len: u64) -> bool {
        self.known_len.map_or(true, |k| len <= k)
    }

    pub fn prefix(&self, len: u64) -> Result<OraclePrefix, RecursionError> {
        if !self.covers(len) {
            return Err(RecursionError::NeedsMoreStages { requested: len, known: self.known_len.unwrap_or(0) });
        }
        if len > PREFIX_LIMIT {
            return Err(RecursionError::Capacity { stage: 0, needed: len, budget: PREFIX_LIMIT });
        }
        Ok(self.approx.resized(len as usize))
    }

    pub fn bit(&self, i: u64) -> Option<bool> {
        self.covers(i + 1).then(|| self.approx.read(i).unwrap_or(false))
    }

    /// `A ↾ len` without materializing it.
    pub fn window(&self, len: u64) -> Option<Window<'_>> {
        self.covers(len).then_some(Window { known: self, len })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Window<'a> {
    known: &'a KnownA,
    len: u64,
}

impl OracleBits for Window<'_> {
    fn read(&self, i: u64) -> Option<bool> {
        if i >= self.len {
            return None;
        }
        Some(self.known.approx.read(i).unwrap_or(false))
    }
}

/// Witnesses of one roster program: inputs `p` where
/// `ψ(p) ∈ A ⟺ χ(p, A ↾ φ(p))` halts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgramReport {
    pub program: String,
    pub witnesses: Vec<u64>,
    /// Witnesses with `ψ(p) ∈ A`.
    pub member_witnesses: Vec<u64>,
    /// Inputs skipped because `A ↾ φ(p)` is not determined by the stages built.
    pub undecided: u64,
}

pub fn check_impredictability(
    skel: &Skeleton,
    roster: &[ToyProgram],
    step_cap: u64,
    max_p: u64,
) -> Result<Vec<ProgramReport>, RecursionError> {
    let known = KnownA::new(skel, skel.approx_a(step_cap)?);
    Ok(roster
        .par_iter()
        .map(|chi| {
            let rows: Vec<Option<(u64, bool, bool)>> = (0..=max_p)
                .into_par_iter()
                .map(|p| {
                    let window = known.window(skel.phi.eval(p))?;
                    let member = known.approx.get(skel.psi(p) as usize).unwrap_or(false);
                    let halted = run_program(chi, p, &window, step_cap).halted();
                    Some((p, member, halted))
                })
                .collect();
            let mut report = ProgramReport {
                program: chi.to_text(),
                witnesses: Vec::new(),
                member_witnesses: Vec::new(),
                undecided: 0,
            };
            for row in rows {
                match row {
                    None => report.undecided += 1,
                    Some((p, member, halted)) if member == halted => {
                        report.witnesses.push(p);
                        if member {
                            report.member_witnesses.push(p);
                        }
                    }
                    Some(_) => {}
                }
            }
            report
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roster() -> Vec<ToyProgram> {
        vec![ToyProgram::halt(), ToyProgram::looping(), ToyProgram::oracle_echo()]
    }

    fn id_skeleton(stages: usize) -> Skeleton {
        build_skeleton(&RateFunction::Identity, &ChiSource::Roster(roster()), stages, 1 << 12).unwrap()
    }

    #[test]
    fn identity_rate_stage_values() {
        let s = id_skeleton(3);
        let summary: Vec<(u64, u64, u64)> = s.stages.iter().map(|st| (st.m, st.big_m, st.m_prime)).collect();
        assert_eq!(summary, vec![(0, 0, 1), (2, 5, 9), (10, 1033, 2057)]);
        let ps: Vec<u64> = s.stages[1].rules.iter().map(|r| r.p).collect();
        assert_eq!(ps, vec![2, 3, 4, 5]);
        let psis: Vec<u64> = s.stages[1].rules.iter().map(|r| r.psi).collect();
        assert_eq!(psis, vec![6, 7, 8, 9]);
        assert_eq!(s.stages[0].rules.len(), 1);
        assert!(s.stages[0].rules[0].word.is_empty());
        assert_eq!(s.stages[1].rules[2].word.to_string(), "10");
        assert_eq!(s.psi(0), 1);
        assert_eq!(s.psi(1), 0);
        assert_eq!(s.psi(1033), 2057);
    }

    #[test]
    fn stages_tile_an_initial_segment() {
        for phi in [RateFunction::Identity, RateFunction::Square, RateFunction::Linear { factor: 2, offset: 3 }] {
            let s = build_skeleton(&phi, &ChiSource::Roster(roster()), 2, 1 << 14).unwrap();
            let mut next = 0;
            for st in &s.stages {
                assert_eq!(st.m, next);
                assert!(st.big_m >= st.m);
                for r in &st.rules {
                    assert!(r.psi > st.big_m && r.psi <= st.m_prime);
                    assert!(phi.eval(r.p) >= st.m);
                }
                next = st.m_prime + 1;
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = build_skeleton(&RateFunction::Identity, &ChiSource::Roster(roster()), 4, 1 << 12).unwrap_err();
        assert!(matches!(err, RecursionError::Capacity { stage: 3, .. }));
        let err = build_skeleton(&RateFunction::Constant(0), &ChiSource::Roster(roster()), 2, 1 << 12).unwrap_err();
        assert!(matches!(err, RecursionError::Rate(_)));
    }

    #[test]
    fn approximations() {
        let halts = build_skeleton(&RateFunction::Identity, &ChiSource::Roster(vec![ToyProgram::halt()]), 3, 1 << 12).unwrap();
        let a = halts.approx_a(10).unwrap();
        for (_, r) in halts.rules() {
            assert_eq!(a.get(r.psi as usize), Some(true));
        }
        assert_eq!(a.members().count(), halts.assignments().len());
        let loops = build_skeleton(&RateFunction::Identity, &ChiSource::Roster(vec![ToyProgram::looping()]), 3, 1 << 12).unwrap();
        assert_eq!(loops.approx_a(1000).unwrap().members().count(), 0);
        let s = id_skeleton(3);
        let mut prev = OraclePrefix::zeros(s.determined_len() as usize);
        for cap in [0, 1, 2, 5, 100] {
            let a = s.approx_a(cap).unwrap();
            assert!(prev.le(&a));
            prev = a;
        }
    }

    #[test]
    fn stage_rules_match_the_true_prefix() {
        let s = id_skeleton(3);
        let a = s.approx_a(100).unwrap();
        for st in &s.stages {
            let w = a.truncated(st.m as usize);
            let r = st.rule_for(&w).unwrap();
            assert_eq!(r.word, w);
            for i in st.m..r.pad_len {
                assert_eq!(a.get(i as usize), Some(false));
            }
        }
    }

    #[test]
    fn known_prefix_extends_with_forced_zeros() {
        let s = id_skeleton(2);
        assert_eq!(s.determined_len(), 10);
        // next stage: m = 10, inputs reach 1023, so [10, 1023] is out of A
        assert_eq!(s.forced_len(), Some(1024));
        let k = s.known_prefix(100, 1024).unwrap();
        assert_eq!(k.truncated(10), s.approx_a(100).unwrap());
        assert!(k.bits()[10..].iter().all(|b| !b));
        assert!(s.known_prefix(100, 1025).is_err());
    }

    #[test]
    fn impredictability_witnesses() {
        let s = id_skeleton(3);
        let reports = check_impredictability(&s, &roster(), 10_000, 2100).unwrap();
        assert!(!reports[0].member_witnesses.is_empty());
        assert!(!reports[1].witnesses.is_empty());
        assert!(reports[1].member_witnesses.is_empty());
        assert!(check_impredictability(&s, &[], 10, 10).unwrap().is_empty());
        assert_eq!(s, id_skeleton(3));
    }
}
