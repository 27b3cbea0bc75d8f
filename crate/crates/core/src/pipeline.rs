//! The end-to-end chain: build a `φ`-impredictable `A`, form `K(G, A, S₃)`,
//! carry `ψ` to `ψ' = many_one_total ∘ ψ`, and check every transported
//! witness against the word problem of `K` decided from a known prefix of `A`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{GroupCtx, GroupError};
use crate::kgroup::{conj_bit, conj_reduction, many_one_total, KError, KTemplate};
use crate::recursion::{
    build_skeleton, check_impredictability, run_program, transport_impredictability, ChiSource, KnownA, PsiHandle,
    RateFunction, RecursionError, Skeleton, ToyProgram,
};
use crate::subshift::{oracle_bound, OraclePrefix};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    K(#[from] KError),
    #[error(transparent)]
    Recursion(#[from] RecursionError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineConfig {
    pub group: String,
    pub phi: RateFunction,
    #[serde(serialize_with = "serialize_roster")]
    pub roster: Vec<ToyProgram>,
    pub stages: usize,
    /// Largest number of rules a stage may have.
    pub budget: u64,
    pub step_cap: u64,
    /// Inputs `0..=max_p` are searched for witnesses.
    pub max_p: u64,
    /// The reducer is probed on the known prefixes of lengths `0..=probe_len`.
    pub probe_len: usize,
}

fn serialize_roster<S: serde::Serializer>(roster: &[ToyProgram], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(roster.iter().map(ToyProgram::to_text))
}

impl PipelineConfig {
    pub fn new(group: &str, roster: Vec<ToyProgram>) -> PipelineConfig {
        PipelineConfig {
            group: group.into(),
            phi: RateFunction::Identity,
            roster,
            stages: 3,
            budget: 1 << 12,
            step_cap: 10_000,
            max_p: 1100,
            probe_len: 9,
        }
    }
}

/// One witness `p` of `A`, carried to `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transported {
    pub p: u64,
    pub psi: u64,
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub psi_prime: BigUint,
    pub word_len: usize,
    /// `ψ(p) ∈ A`.
    pub member: bool,
    /// The program halts on `(p, A ↾ φ(p))`.
    pub halted: bool,
    /// Bit `ψ'(p)` of `WP(K)`.
    pub wp_bit: bool,
}

impl Transported {
    pub fn holds(&self) -> bool {
        self.wp_bit == self.halted && self.wp_bit == self.member
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProgramTransport {
    pub program: String,
    pub witnesses: usize,
    pub member_witnesses: usize,
    /// Inputs whose `A ↾ φ(p)` the stages do not determine.
    pub undecided: u64,
    pub verified: usize,
    /// Witnesses whose `K`-word needs more of `A` than is known.
    pub unverifiable: usize,
    pub mismatches: Vec<Transported>,
    /// The first few transported witnesses.
    pub sample: Vec<Transported>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageSummary {
    pub m: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    #[serde(rename = "M_prime")]
    pub m_prime: u64,
    pub rules: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub k_group: String,
    pub stages: Vec<StageSummary>,
    pub members_of_a: usize,
    /// Rate of the reducer from prefixes of `A` to prefixes of `WP(K)`.
    pub beta: RateFunction,
    /// Rate at which `WP(K)` is impredictable: `β ∘ φ`.
    pub transported_rate: RateFunction,
    pub programs: Vec<ProgramTransport>,
}

impl PipelineReport {
    pub fn all_verified(&self) -> bool {
        self.programs.iter().all(|p| p.mismatches.is_empty() && p.unverifiable == 0)
    }
}

const SAMPLE: usize = 8;

/// `ψ' = many_one_total ∘ ψ` on every assigned input, checked against `β`.
pub fn transport_to_k(
    t: &KTemplate,
    skel: &Skeleton,
    known: &KnownA,
    probe_len: usize,
) -> Result<(PsiHandle, RateFunction), PipelineError> {
    let handle = PsiHandle::from_skeleton(skel);
    let beta = RateFunction::WordCount { alphabet: t.alphabet_size() as u64 };
    let probes = (0..=probe_len as u64).map(|l| known.prefix(l)).collect::<Result<Vec<_>, _>>()?;
    let distinct: BTreeSet<&BigUint> = handle.values.values().chain([&handle.default]).collect();
    let images: BTreeMap<BigUint, BigUint> = distinct
        .into_par_iter()
        .map(|v| {
            let n = v.to_usize().ok_or_else(|| KError::Parse(format!("ψ value {v} out of range")))?;
            Ok((v.clone(), many_one_total(t, n)?))
        })
        .collect::<Result<_, KError>>()?;
    let f = |x: &BigUint| images.get(x).cloned().ok_or_else(|| format!("no image for {x}"));
    let g = |u: &OraclePrefix| conj_reduction(t, u).map_err(|e| e.to_string());
    let out = transport_impredictability(f, g, &beta, &handle, &probes, probe_len as u64)?;
    Ok((out, beta))
}

/// Decides bit `ψ'(p)` of `WP(K)` from the known part of `A`; `None` when
/// the stages do not determine enough of `A`.
pub fn transported_bit(t: &KTemplate, known: &KnownA, index: &BigUint) -> Result<Option<(bool, usize)>, PipelineError> {
    let w = t.word_at(index);
    let need = oracle_bound(w.len()) as u64;
    if !known.covers(need) {
        return Ok(None);
    }
    let u = known.prefix(need)?;
    Ok(Some((conj_bit(t, &u, index)?, w.len())))
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport, PipelineError> {
    let g = GroupCtx::parse(&cfg.group)?;
    let t = KTemplate::new(g, GroupCtx::s3());
    let skel = build_skeleton(&cfg.phi, &ChiSource::Roster(cfg.roster.clone()), cfg.stages, cfg.budget)?;
    let known = KnownA::new(&skel, skel.approx_a(cfg.step_cap)?);
    let (psi_prime, beta) = transport_to_k(&t, &skel, &known, cfg.probe_len)?;
    let reports = check_impredictability(&skel, &cfg.roster, cfg.step_cap, cfg.max_p)?;
    let mut programs = Vec::with_capacity(cfg.roster.len());
    for (chi, report) in cfg.roster.iter().zip(reports) {
        let rows = report
            .witnesses
            .par_iter()
            .map(|&p| -> Result<Option<Transported>, PipelineError> {
                let psi = skel.psi(p);
                let index = psi_prime.get(p).clone();
                let Some((wp_bit, word_len)) = transported_bit(&t, &known, &index)? else { return Ok(None) };
                let window = known.window(cfg.phi.eval(p)).expect("witnesses have a known window");
                Ok(Some(Transported {
                    p,
                    psi,
                    psi_prime: index,
                    word_len,
                    member: known.approx.get(psi as usize).unwrap_or(false),
                    halted: run_program(chi, p, &window, cfg.step_cap).halted(),
                    wp_bit,
                }))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let unverifiable = rows.iter().filter(|r| r.is_none()).count();
        let rows: Vec<Transported> = rows.into_iter().flatten().collect();
        programs.push(ProgramTransport {
            program: report.program,
            witnesses: report.witnesses.len(),
            member_witnesses: report.member_witnesses.len(),
            undecided: report.undecided,
            verified: rows.iter().filter(|r| r.holds()).count(),
            unverifiable,
            mismatches: rows.iter().filter(|r| !r.holds()).cloned().collect(),
            sample: rows.iter().take(SAMPLE).cloned().collect(),
        });
    }
    Ok(PipelineReport {
        k_group: format!("K({},S3)", cfg.group),
        stages: skel
            .stages
            .iter()
            .map(|s| StageSummary { m: s.m, big_m: s.big_m, m_prime: s.m_prime, rules: s.rules.len() })
            .collect(),
        members_of_a: known.approx.members().count(),
        beta: beta.clone(),
        transported_rate: psi_prime.rate.clone(),
        programs,
    })
}
