//! `kgroup`: batch front end. Every report is JSON holding the manifest that
//! produced it and the result; `kgroup replay` re-runs a manifest.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage, 3 oracle shortage, 4 capacity.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use kgroup_core::automata::{
    self, membership_test, predictor, run, trace, wp_prefix, AutomatonSpec, ExactOracle, Pos, SimError,
};
use kgroup_core::groups::{ball, GroupCtx, GroupError};
use kgroup_core::kgroup::{
    compile, conj_reduction, order_k, quotient_check, wp_k, KContext, KError, KTemplate, KWord, ReducedSweep,
    WpResult,
};
use kgroup_core::pipeline::{run_pipeline, PipelineConfig, PipelineError};
use kgroup_core::recursion::{
    build_skeleton, check_impredictability, ChiSource, KnownA, MachineEnumeration, RateFunction, RecursionError,
    Skeleton, ToyProgram,
};
use kgroup_core::subshift::{OraclePrefix, SubshiftError};

#[derive(Parser, Debug, Clone, Serialize, Deserialize)]
#[command(name = "kgroup", version, about = "Word problems of K(G,A,H), impredictable sets and group-walking automata")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
enum Command {
    /// Norms, balls, element orders and torsion functions of a base group.
    Group(GroupArgs),
    /// Word problem, embeddings, reductions and orders in K(G,A,H).
    Kgroup(KgroupArgs),
    /// Stage-by-stage construction of an impredictable set.
    Impred(ImpredArgs),
    /// Group-walking automata on the configurations x^p.
    Simulate(SimulateArgs),
    /// Impredictable A, then K(G,A,S3), then transported witnesses.
    Pipeline(PipelineArgs),
    /// Re-runs the manifest stored in a report.
    Replay {
        /// A report or a bare manifest.
        report: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct GroupArgs {
    /// Group id: Z, S3, grigorchuk, or products such as "Z x S3".
    #[arg(long)]
    ctx: String,
    /// List the ball of this radius.
    #[arg(long)]
    ball: Option<usize>,
    /// Word norm of an element given as a generator word (an integer for Z).
    #[arg(long, allow_hyphen_values = true)]
    norm: Option<String>,
    /// Order of an element given as a generator word.
    #[arg(long)]
    order: Option<String>,
    /// Largest element order over the ball of this radius.
    #[arg(long)]
    torsion: Option<usize>,
    /// Cap on element orders.
    #[arg(long, default_value_t = 1 << 16)]
    cap: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct OracleArgs {
    /// Prefix of A as a 0/1 string.
    #[arg(long, conflicts_with_all = ["oracle_file", "build_phi"])]
    oracle: Option<String>,
    /// File holding the prefix of A as a 0/1 string.
    #[arg(long, conflicts_with = "build_phi")]
    oracle_file: Option<PathBuf>,
    /// Take A from the impredictable-set builder at this rate.
    #[arg(long)]
    build_phi: Option<RateFunction>,
    #[arg(long, default_value_t = 2)]
    build_stages: usize,
    #[arg(long, default_value_t = 10_000)]
    build_cap: u64,
    /// Programs for the builder: halt, loop, echo, enum:N, file:PATH or inline text.
    #[arg(long, value_delimiter = ',', default_value = "halt,loop,echo")]
    build_roster: Vec<String>,
    /// Length of the prefix taken from the builder.
    #[arg(long, default_value_t = 64)]
    oracle_len: u64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct KgroupArgs {
    #[arg(long, default_value = "Z")]
    g: String,
    #[arg(long, default_value = "S3")]
    h: String,
    #[command(flatten)]
    oracle: OracleArgs,
    #[command(subcommand)]
    action: KAction,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
enum KAction {
    /// Decide whether a K-word is the identity.
    Wp {
        /// Letters such as "S:+1 M:(12):1", or a full "K(G,H): ..." word.
        word: String,
    },
    /// The embedded words g'_n for n = 1..=max_n and their word problem.
    Embed {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
    /// The prefix of WP(K) decided by the conjunctive reduction.
    Conj {
        /// Compare against the reduction of this second prefix.
        #[arg(long)]
        against: Option<String>,
    },
    /// Order of a K-word.
    Order {
        word: String,
        #[arg(long, default_value_t = 1 << 16)]
        cap: u64,
    },
    /// Checks that identity under A implies identity under a larger A'.
    Quotient {
        word: String,
        /// The larger prefix.
        #[arg(long)]
        sup: String,
    },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct ImpredArgs {
    #[arg(long, default_value = "identity")]
    phi: RateFunction,
    #[arg(long, default_value_t = 2)]
    stages: usize,
    /// Programs: halt, loop, echo, enum:N, file:PATH or inline text; "enum" alone
    /// takes stage programs from the machine enumeration.
    #[arg(long, value_delimiter = ',', default_value = "halt,loop,echo")]
    roster: Vec<String>,
    #[arg(long, default_value_t = 1 << 12)]
    budget: u64,
    #[arg(long, default_value_t = 10_000)]
    step_cap: u64,
    #[command(subcommand)]
    action: ImpredAction,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
enum ImpredAction {
    /// The stage table.
    Stages,
    /// approx_A at the step cap, with the forced-zero extension length.
    Approx,
    /// ψ on 0..=max_p.
    Psi {
        #[arg(long, default_value_t = 16)]
        max_p: u64,
    },
    /// Witnesses of every roster program on 0..=max_p.
    Check {
        #[arg(long, default_value_t = 100)]
        max_p: u64,
    },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SimulateArgs {
    /// Automaton file (JSON), or builtin:eleven[:GROUP[:IDLE]].
    #[arg(long)]
    spec: String,
    #[command(subcommand)]
    action: SimAction,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
enum SimAction {
    /// One run from the cell (e, phase).
    Run {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        phase: i64,
        #[arg(long, default_value_t = 100)]
        steps: u64,
    },
    /// Runs from every phase.
    Membership {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        steps: u64,
    },
    /// Line records (step, head, g, z, state, separation) of one run.
    Trace {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        phase: i64,
        #[arg(long, default_value_t = 0)]
        initial: usize,
        #[arg(long, default_value_t = 100)]
        steps: u64,
    },
    /// Membership with equality read from a word-problem prefix of this length.
    Predictor {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 100)]
        steps: u64,
        #[arg(long, default_value_t = 1024)]
        wp_len: usize,
    },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct PipelineArgs {
    #[arg(long, default_value = "Z")]
    group: String,
    #[arg(long, default_value = "identity")]
    phi: RateFunction,
    #[arg(long, default_value_t = 3)]
    stages: usize,
    #[arg(long, value_delimiter = ',', default_value = "halt,loop,echo")]
    roster: Vec<String>,
    #[arg(long, default_value_t = 1 << 12)]
    budget: u64,
    #[arg(long, default_value_t = 10_000)]
    step_cap: u64,
    #[arg(long, default_value_t = 1100)]
    max_p: u64,
    #[arg(long, default_value_t = 9)]
    probe_len: usize,
}

// ---------- errors ----------

#[derive(Debug)]
enum CliError {
    Usage(String),
    Oracle(String),
    Capacity(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Oracle(_) => 3,
            CliError::Capacity(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Oracle(m) | CliError::Capacity(m) | CliError::Other(m) => m,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        let m = e.to_string();
        match e {
            GroupError::Capacity { .. } | GroupError::CapExceeded(_) => CliError::Capacity(m),
            GroupError::UnknownGroup(_) | GroupError::UnknownSymbol(_) | GroupError::NotTorsion(_) => CliError::Usage(m),
            _ => CliError::Other(m),
        }
    }
}

impl From<SubshiftError> for CliError {
    fn from(e: SubshiftError) -> Self {
        let m = e.to_string();
        match e {
            SubshiftError::Group(g) => g.into(),
            SubshiftError::PrefixTooShort { .. } => CliError::Oracle(m),
            SubshiftError::BadOracle(_) | SubshiftError::BadPattern(_) => CliError::Usage(m),
        }
    }
}

impl From<KError> for CliError {
    fn from(e: KError) -> Self {
        let m = e.to_string();
        match e {
            KError::Group(g) => g.into(),
            KError::Subshift(s) => s.into(),
            KError::NeedsOracle { .. } | KError::Undecidable { .. } => CliError::Oracle(m),
            KError::Parse(_) | KError::ZeroIndex | KError::AbelianH(_) | KError::NotNested => CliError::Usage(m),
        }
    }
}

impl From<RecursionError> for CliError {
    fn from(e: RecursionError) -> Self {
        let m = e.to_string();
        match e {
            RecursionError::Capacity { .. } => CliError::Capacity(m),
            RecursionError::NeedsMoreStages { .. } => CliError::Oracle(m),
            RecursionError::Program(_) | RecursionError::Rate(_) => CliError::Usage(m),
            RecursionError::Transport(_) => CliError::Other(m),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        let m = e.to_string();
        match e {
            SimError::Group(g) => g.into(),
            SimError::OracleExhausted { .. } => CliError::Oracle(m),
            SimError::Spec(_) | SimError::Domain(_) => CliError::Usage(m),
            SimError::RuleGap { .. } => CliError::Other(m),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Group(g) => g.into(),
            PipelineError::K(k) => k.into(),
            PipelineError::Recursion(r) => r.into(),
        }
    }
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

// ---------- reports ----------

/// A result and the exit code it calls for.
struct Outcome {
    result: Value,
    code: u8,
}

impl Outcome {
    fn ok(result: Value) -> Outcome {
        Outcome { result, code: 0 }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn manifest(cli: &Cli) -> Value {
    json!({
        "tool": "kgroup",
        "versions": {
            "kgroup-cli": env!("CARGO_PKG_VERSION"),
            "kgroup-core": kgroup_core::VERSION,
        },
        "invocation": to_value(cli),
    })
}

fn report(cli: &Cli, result: Value) -> String {
    let mut text = serde_json::to_string_pretty(&json!({ "manifest": manifest(cli), "result": result }))
        .expect("reports serialize");
    text.push('\n');
    text
}

// ---------- inputs ----------

fn program_from(name: &str) -> Result<ToyProgram, CliError> {
    let name = name.trim();
    Ok(match name {
        "halt" => ToyProgram::halt(),
        "loop" => ToyProgram::looping(),
        "echo" => ToyProgram::oracle_echo(),
        _ => {
            if let Some(n) = name.strip_prefix("enum:") {
                let n: BigUint = n.parse().map_err(|_| CliError::Usage(format!("bad program index `{n}`")))?;
                MachineEnumeration::program(&n)
            } else if let Some(path) = name.strip_prefix("file:") {
                let path = PathBuf::from(path);
                let text = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
                ToyProgram::parse(&text)?
            } else {
                ToyProgram::parse(name)?
            }
        }
    })
}

fn chi_source(roster: &[String]) -> Result<(ChiSource, Vec<ToyProgram>), CliError> {
    if roster.len() == 1 && roster[0].trim() == "enum" {
        return Ok((ChiSource::Enumeration, Vec::new()));
    }
    let programs = roster
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| program_from(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((ChiSource::Roster(programs.clone()), programs))
}

fn oracle_from(args: &OracleArgs) -> Result<OraclePrefix, CliError> {
    if let Some(bits) = &args.oracle {
        return Ok(OraclePrefix::parse(bits)?);
    }
    if let Some(path) = &args.oracle_file {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        return Ok(OraclePrefix::parse(&text)?);
    }
    if let Some(phi) = &args.build_phi {
        let (chi, _) = chi_source(&args.build_roster)?;
        let skel = build_skeleton(phi, &chi, args.build_stages, 1 << 16)?;
        return Ok(skel.known_prefix(args.build_cap, args.oracle_len)?);
    }
    Ok(OraclePrefix::default())
}

fn k_word(t: &KTemplate, text: &str) -> Result<KWord, CliError> {
    if text.trim_start().starts_with("K(") {
        let (other, w) = KTemplate::parse_word(text)?;
        if other != *t {
            return Err(CliError::Usage(format!("word is over {other}, expected {t}")));
        }
        return Ok(w);
    }
    Ok(t.parse_body(text)?)
}

fn automaton_from(spec: &str) -> Result<AutomatonSpec, CliError> {
    if let Some(rest) = spec.strip_prefix("builtin:eleven") {
        let mut parts = rest.trim_start_matches(':').split(':').filter(|s| !s.is_empty());
        let group = parts.next().unwrap_or("Z");
        let idle = match parts.next() {
            Some(n) => n.parse().map_err(|_| CliError::Usage(format!("bad idle head count `{n}`")))?,
            None => 0,
        };
        GroupCtx::parse(group)?;
        return Ok(AutomatonSpec::eleven_detector(group, idle));
    }
    let path = PathBuf::from(spec);
    let text = fs::read_to_string(&path).map_err(|e| io_error(&path, e))?;
    Ok(AutomatonSpec::from_json(&text)?)
}

// ---------- commands ----------

fn cmd_group(a: &GroupArgs) -> Result<Outcome, CliError> {
    let ctx = GroupCtx::parse(&a.ctx)?;
    let mut out = serde_json::Map::new();
    out.insert("group".into(), json!(ctx.name()));
    if let Some(n) = a.ball {
        let b = ball(&ctx, n)?;
        let elements: Vec<Value> = (0..b.len())
            .map(|i| {
                json!({
                    "element": ctx.format_element(&b.elements()[i]),
                    "word": ctx.format_word(&b.words()[i]),
                    "norm": b.norm_of_index(i),
                })
            })
            .collect();
        let spheres: Vec<usize> = (0..=n).map(|r| b.size_at(r)).collect();
        out.insert("ball".into(), json!({ "radius": n, "size": b.len(), "spheres": spheres, "elements": elements }));
    }
    if let Some(text) = &a.norm {
        let g = ctx.parse_element(text)?;
        out.insert("norm".into(), json!({ "element": ctx.format_element(&g), "norm": ctx.word_norm(&g)? }));
    }
    if let Some(text) = &a.order {
        let g = ctx.parse_element(text)?;
        out.insert("order".into(), json!({ "element": ctx.format_element(&g), "order": ctx.element_order(&g, a.cap)? }));
    }
    if let Some(n) = a.torsion {
        let table = (0..=n)
            .map(|r| Ok(json!({ "radius": r, "max_order": ctx.torsion_function(r, a.cap)? })))
            .collect::<Result<Vec<_>, CliError>>()?;
        out.insert("torsion".into(), json!({ "radius": n, "value": table.last().unwrap()["max_order"], "table": table }));
    }
    if out.len() == 1 {
        return Err(CliError::Usage("group: pass at least one of --ball, --norm, --order, --torsion".into()));
    }
    Ok(Outcome::ok(Value::Object(out)))
}

fn wp_outcome(t: &KTemplate, w: &KWord, r: &WpResult) -> Outcome {
    let code = if matches!(r, WpResult::NeedsOracle { .. }) { 3 } else { 0 };
    Outcome { result: json!({ "word": t.format_word(w), "length": w.len(), "wp": r }), code }
}

fn cmd_kgroup(a: &KgroupArgs) -> Result<Outcome, CliError> {
    let t = KTemplate::new(GroupCtx::parse(&a.g)?, GroupCtx::parse(&a.h)?);
    let oracle = oracle_from(&a.oracle)?;
    let ctx = t.with_oracle(oracle.clone());
    let with_oracle = |mut o: Outcome| {
        if let Value::Object(m) = &mut o.result {
            m.insert("oracle".into(), json!(oracle.to_string()));
        }
        o
    };
    Ok(with_oracle(match &a.action {
        KAction::Wp { word } => {
            let w = k_word(&t, word)?;
            wp_outcome(&t, &w, &wp_k(&ctx, &w)?)
        }
        KAction::Embed { max_n } => {
            let mut rows = Vec::new();
            let mut code = 0;
            for n in 1..=*max_n {
                let w = t.embed_element(n)?;
                let r = wp_k(&ctx, &w)?;
                if matches!(r, WpResult::NeedsOracle { .. }) {
                    code = 3;
                }
                rows.push(json!({
                    "n": n,
                    "in_prefix": oracle.get(n),
                    "word": t.format_word(&w),
                    "wp": r,
                }));
            }
            Outcome { result: json!({ "embeddings": rows }), code }
        }
        KAction::Conj { against } => {
            let out = conj_reduction(&t, &oracle)?;
            let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
            let mut result = json!({ "prefix_len": oracle.len(), "wp_prefix": bits(&out) });
            if let Some(v) = against {
                let v = OraclePrefix::parse(v)?;
                let nested = oracle.le(&v);
                let other = conj_reduction(&t, &v)?;
                let monotone = out.len() == other.len() && out.iter().zip(&other).all(|(a, b)| !a || *b);
                result["against"] = json!({ "prefix": v.to_string(), "nested": nested, "wp_prefix": bits(&other), "monotone": monotone });
            }
            Outcome::ok(result)
        }
        KAction::Order { word, cap } => {
            let w = k_word(&t, word)?;
            let order = order_k(&ctx, &w, *cap)?;
            let sweep = ReducedSweep::new(&t, compile(&t, &w)?)?;
            Outcome::ok(json!({ "word": t.format_word(&w), "order": order, "read_cells": sweep.schedule().cells().len() }))
        }
        KAction::Quotient { word, sup } => {
            let w = k_word(&t, word)?;
            let sup = KContext { template: t.clone(), oracle: OraclePrefix::parse(sup)? };
            let holds = quotient_check(&ctx, &sup, &w)?;
            Outcome { result: json!({ "word": t.format_word(&w), "holds": holds }), code: if holds { 0 } else { 1 } }
        }
    }))
}

fn impred_skeleton(a: &ImpredArgs) -> Result<(Skeleton, Vec<ToyProgram>), CliError> {
    let (chi, roster) = chi_source(&a.roster)?;
    Ok((build_skeleton(&a.phi, &chi, a.stages, a.budget)?, roster))
}

fn cmd_impred(a: &ImpredArgs) -> Result<Outcome, CliError> {
    let (skel, roster) = impred_skeleton(a)?;
    Ok(Outcome::ok(match &a.action {
        ImpredAction::Stages => {
            let stages: Vec<Value> = skel
                .stages
                .iter()
                .map(|s| {
                    json!({
                        "index": s.index, "m": s.m, "M": s.big_m, "M_prime": s.m_prime,
                        "program": s.program.to_text(), "rules": s.rules.len(),
                    })
                })
                .collect();
            json!({ "phi": a.phi, "stages": stages, "determined_len": skel.determined_len(), "forced_len": skel.forced_len() })
        }
        ImpredAction::Approx => {
            let approx = skel.approx_a(a.step_cap)?;
            let members: Vec<usize> = approx.members().collect();
            json!({
                "step_cap": a.step_cap,
                "approx_a": approx.to_string(),
                "members": members,
                "known_len": KnownA::new(&skel, approx).known_len,
            })
        }
        ImpredAction::Psi { max_p } => {
            let rows: Vec<Value> = (0..=*max_p)
                .map(|p| json!({ "p": p, "psi": skel.psi(p), "assigned": skel.is_assigned(p) }))
                .collect();
            let assigned: Vec<u64> = skel.assignments().values().copied().collect();
            let mut distinct = assigned.clone();
            distinct.sort_unstable();
            distinct.dedup();
            json!({ "psi": rows, "assigned": assigned.len(), "injective": distinct.len() == assigned.len() })
        }
        ImpredAction::Check { max_p } => {
            json!({ "step_cap": a.step_cap, "max_p": max_p, "programs": check_impredictability(&skel, &roster, a.step_cap, *max_p)? })
        }
    }))
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let spec = automaton_from(&a.spec)?;
    let oracle = ExactOracle(spec.g());
    let result = match &a.action {
        SimAction::Run { p, phase, steps } => {
            let out = run(&spec, &automata::make_xp(*p)?, &Pos::at_z(*phase), *steps, &oracle)?;
            json!({ "p": p, "phase": phase, "run": out })
        }
        SimAction::Membership { p, steps } => json!({ "p": p, "membership": membership_test(&spec, *p, *steps, &oracle)? }),
        SimAction::Trace { p, phase, initial, steps } => {
            let records = trace(&spec, &automata::make_xp(*p)?, *initial, &Pos::at_z(*phase), *steps)?;
            let lines: Vec<String> = records
                .iter()
                .map(|r| format!("{} {} {} {} {} {}", r.step, r.head, r.g.replace(' ', "."), r.z, r.state, r.separation))
                .collect();
            json!({ "p": p, "phase": phase, "columns": "step head g z state separation", "records": lines })
        }
        SimAction::Predictor { p, steps, wp_len } => {
            let wp = wp_prefix(spec.g(), *wp_len)?;
            json!({ "p": p, "wp_len": wp_len, "prediction": predictor(&spec, *p, &wp, *steps)? })
        }
    };
    Ok(Outcome::ok(json!({ "automaton": serde_json::from_str::<Value>(&spec.to_json()).expect("valid JSON"), "simulation": result })))
}

fn cmd_pipeline(a: &PipelineArgs) -> Result<Outcome, CliError> {
    let (_, roster) = chi_source(&a.roster)?;
    let cfg = PipelineConfig {
        group: a.group.clone(),
        phi: a.phi.clone(),
        roster,
        stages: a.stages,
        budget: a.budget,
        step_cap: a.step_cap,
        max_p: a.max_p,
        probe_len: a.probe_len,
    };
    let r = run_pipeline(&cfg)?;
    let code = if r.all_verified() { 0 } else { 1 };
    Ok(Outcome { result: to_value(&r), code })
}

fn execute(cli: &Cli) -> Result<(String, u8), CliError> {
    let outcome = match &cli.command {
        Command::Group(a) => cmd_group(a)?,
        Command::Kgroup(a) => cmd_kgroup(a)?,
        Command::Impred(a) => cmd_impred(a)?,
        Command::Simulate(a) => cmd_simulate(a)?,
        Command::Pipeline(a) => cmd_pipeline(a)?,
        Command::Replay { report: path } => {
            let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let manifest = v.get("manifest").unwrap_or(&v);
            let command = manifest.get("invocation").ok_or_else(|| CliError::Usage("no invocation in manifest".into()))?;
            let inner: Cli =
                serde_json::from_value(command.clone()).map_err(|e| CliError::Usage(format!("bad manifest: {e}")))?;
            if matches!(inner.command, Command::Replay { .. }) {
                return Err(CliError::Usage("a manifest cannot replay another report".into()));
            }
            return execute(&inner);
        }
    };
    Ok((report(cli, outcome.result), outcome.code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &text) {
                        eprintln!("error: {}", io_error(path, e).message());
                        return ExitCode::from(2);
                    }
                }
                None => {
                    // a closed pipe downstream is not an error of ours
                    let _ = std::io::stdout().lock().write_all(text.as_bytes());
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
