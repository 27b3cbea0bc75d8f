//! Counter machines, rate functions, and the diagonal construction of a
//! `φ`-impredictable r.e. set together with its transport combinators.

mod program;
mod rate;
mod skeleton;
mod transport;

use thiserror::Error;

pub use program::{run_program, Instr, MachineEnumeration, OracleBits, Outcome, Padded, RunResult, ToyProgram, MAX_REGISTERS};
pub use rate::RateFunction;
pub use skeleton::{build_skeleton, check_impredictability, ChiSource, KnownA, ProgramReport, Rule, Skeleton, Stage, Window};
pub use transport::{restrict_rate, transport_impredictability, PsiHandle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecursionError {
    #[error("malformed program: {0}")]
    Program(String),
    #[error("rate error: {0}")]
    Rate(String),
    #[error("stage {stage} needs {needed} entries, budget is {budget}")]
    Capacity { stage: usize, needed: u64, budget: u64 },
    #[error("{requested} bits of A requested, but only {known} are determined by the stages built")]
    NeedsMoreStages { requested: u64, known: u64 },
    #[error("transport failed: {0}")]
    Transport(String),
}
