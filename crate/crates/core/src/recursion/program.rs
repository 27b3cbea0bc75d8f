//! A counter machine with read access to a finite oracle prefix.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::RecursionError;
use crate::subshift::OraclePrefix;

/// Registers available to a program.
pub const MAX_REGISTERS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instr {
    Inc(usize),
    /// Jump to the label if the register is zero, otherwise decrement it.
    DecJz(usize, usize),
    /// Load the oracle bit addressed by `r0` into the register.
    Oracle(usize),
    Halt,
}

/// A program over registers `r0..r7`. The input is loaded into `r0`, every
/// other register starts at 0, and running past the last instruction halts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToyProgram {
    instrs: Vec<Instr>,
}

impl ToyProgram {
    pub fn new(instrs: Vec<Instr>) -> Result<ToyProgram, RecursionError> {
        for (i, ins) in instrs.iter().enumerate() {
            let (reg, label) = match *ins {
                Instr::Inc(r) | Instr::Oracle(r) => (Some(r), None),
                Instr::DecJz(r, l) => (Some(r), Some(l)),
                Instr::Halt => (None, None),
            };
            if reg.is_some_and(|r| r >= MAX_REGISTERS) {
                return Err(RecursionError::Program(format!("line {i}: register out of range")));
            }
            if label.is_some_and(|l| l >= instrs.len()) {
                return Err(RecursionError::Program(format!("line {i}: label out of range")));
            }
        }
        Ok(ToyProgram { instrs })
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn halt() -> ToyProgram {
        ToyProgram { instrs: vec![Instr::Halt] }
    }

    /// `r1` is never nonzero, so the first instruction jumps to itself forever.
    pub fn looping() -> ToyProgram {
        ToyProgram { instrs: vec![Instr::DecJz(1, 0)] }
    }

    /// Halts iff the oracle bit at the input position is 1.
    pub fn oracle_echo() -> ToyProgram {
        ToyProgram {
            instrs: vec![Instr::Oracle(1), Instr::DecJz(1, 3), Instr::Halt, Instr::DecJz(2, 3)],
        }
    }

    /// Line-oriented text: `INC r`, `DECJZ r label`, `ORACLE r`, `HALT`.
    /// Blank lines, `#` comments and `;` separators are accepted; registers
    /// may be written `r3` or `3`.
    pub fn parse(text: &str) -> Result<ToyProgram, RecursionError> {
        let mut instrs = Vec::new();
        for raw in text.lines().flat_map(|l| l.split(';')) {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || RecursionError::Program(format!("cannot parse `{line}`"));
            let num = |s: &str| -> Result<usize, RecursionError> {
                let s = s.strip_prefix('r').or_else(|| s.strip_prefix('R')).unwrap_or(s);
                s.parse().map_err(|_| bad())
            };
            let ins = match (toks[0].to_ascii_uppercase().as_str(), &toks[1..]) {
                ("INC", [r]) => Instr::Inc(num(r)?),
                ("DECJZ", [r, l]) => Instr::DecJz(num(r)?, l.parse().map_err(|_| bad())?),
                ("ORACLE", [r]) => Instr::Oracle(num(r)?),
                ("HALT", []) => Instr::Halt,
                _ => return Err(bad()),
            };
            instrs.push(ins);
        }
        ToyProgram::new(instrs)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ToyProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ins) in self.instrs.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            match ins {
                Instr::Inc(r) => write!(f, "INC {r}")?,
                Instr::DecJz(r, l) => write!(f, "DECJZ {r} {l}")?,
                Instr::Oracle(r) => write!(f, "ORACLE {r}")?,
                Instr::Halt => f.write_str("HALT")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn serialize_program<S: serde::Serializer>(p: &ToyProgram, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text())
}

/// Read access to a finite initial segment of a set.
pub trait OracleBits: Sync {
    /// The bit at `i`, or `None` past the end of the segment.
    fn read(&self, i: u64) -> Option<bool>;
}

impl OracleBits for OraclePrefix {
    fn read(&self, i: u64) -> Option<bool> {
        usize::try_from(i).ok().and_then(|i| self.get(i))
    }
}

/// `word · 0^(len − |word|)` without materializing the padding.
#[derive(Clone, Copy, Debug)]
pub struct Padded<'a> {
    pub word: &'a [bool],
    pub len: u64,
}

impl OracleBits for Padded<'_> {
    fn read(&self, i: u64) -> Option<bool> {
        if i >= self.len {
            return None;
        }
        Some(usize::try_from(i).ok().and_then(|i| self.word.get(i).copied()).unwrap_or(false))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Halted { steps: u64 },
    Running,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RunResult {
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Some oracle read fell past the end of the prefix and returned 0.
    pub tainted: bool,
}

impl RunResult {
    pub fn halted(&self) -> bool {
        matches!(self.outcome, Outcome::Halted { .. })
    }
}

/// Runs at most `step_cap` instructions.
pub fn run_program(prog: &ToyProgram, input: u64, oracle: &dyn OracleBits, step_cap: u64) -> RunResult {
    let mut regs = [0u64; MAX_REGISTERS];
    regs[0] = input;
    let mut pc = 0usize;
    let mut tainted = false;
    let mut steps = 0u64;
    while steps < step_cap {
        let Some(&ins) = prog.instrs.get(pc) else {
            return RunResult { outcome: Outcome::Halted { steps }, tainted };
        };
        steps += 1;
        pc = match ins {
            Instr::Inc(r) => {
                regs[r] = regs[r].saturating_add(1);
                pc + 1
            }
            Instr::DecJz(r, l) => {
                if regs[r] == 0 {
                    l
                } else {
                    regs[r] -= 1;
                    pc + 1
                }
            }
            Instr::Oracle(r) => {
                let bit = oracle.read(regs[0]).unwrap_or_else(|| {
                    tainted = true;
                    false
                });
                regs[r] = bit as u64;
                pc + 1
            }
            Instr::Halt => return RunResult { outcome: Outcome::Halted { steps }, tainted },
        };
    }
    if pc >= prog.instrs.len() {
        return RunResult { outcome: Outcome::Halted { steps }, tainted };
    }
    RunResult { outcome: Outcome::Running, tainted }
}

/// Infinite-to-one enumeration of programs: index `n` unpairs to `(i, j)`,
/// `j` is discarded and `i` is read as a bijective base-73 numeral over the
/// instruction symbols on registers `r0..r3` with labels below 16.
#[derive(Clone, Copy, Debug, Default)]
pub struct MachineEnumeration;

const ENUM_REGISTERS: usize = 4;
const ENUM_LABELS: usize = 16;
const SYMBOLS: usize = 2 * ENUM_REGISTERS + 1 + ENUM_REGISTERS * ENUM_LABELS;

impl MachineEnumeration {
    pub const SYMBOLS: usize = SYMBOLS;

    /// Inverse of the Cantor pairing `(i, j) ↦ (i + j)(i + j + 1)/2 + j`.
    pub fn unpair(n: &BigUint) -> (BigUint, BigUint) {
        // largest s with s(s+1)/2 ≤ n
        let eight_n_plus_1 = n * 8u32 + 1u32;
        let s = (eight_n_plus_1.sqrt() - 1u32) / 2u32;
        let tri = &s * (&s + 1u32) / 2u32;
        let j = n - tri;
        let i = &s - &j;
        (i, j)
    }

    pub fn pair(i: &BigUint, j: &BigUint) -> BigUint {
        let s = i + j;
        &s * (&s + 1u32) / 2u32 + j
    }

    fn symbol(d: usize) -> Instr {
        match d {
            d if d < ENUM_REGISTERS => Instr::Inc(d),
            d if d < 2 * ENUM_REGISTERS => Instr::Oracle(d - ENUM_REGISTERS),
            d if d == 2 * ENUM_REGISTERS => Instr::Halt,
            d => {
                let k = d - 2 * ENUM_REGISTERS - 1;
                Instr::DecJz(k / ENUM_LABELS, k % ENUM_LABELS)
            }
        }
    }

    /// Program for a first coordinate; undecodable values give [`ToyProgram::looping`].
    pub fn decode_first(i: &BigUint) -> ToyProgram {
        let base = BigUint::from(SYMBOLS);
        let mut rest = i.clone();
        let mut instrs = Vec::new();
        while !rest.is_zero() && instrs.len() <= ENUM_LABELS {
            rest -= 1u32;
            let (q, r) = rest.div_rem(&base);
            instrs.push(Self::symbol(r.to_usize().expect("digit below base")));
            rest = q;
        }
        if !rest.is_zero() {
            return ToyProgram::looping();
        }
        ToyProgram::new(instrs)
            .ok()
            .filter(|p| !p.instrs.is_empty())
            .unwrap_or_else(ToyProgram::looping)
    }

    pub fn program(n: &BigUint) -> ToyProgram {
        Self::decode_first(&Self::unpair(n).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_runs() {
        let empty = OraclePrefix::default();
        for input in [0, 5] {
            assert_eq!(run_program(&ToyProgram::halt(), input, &empty, 10).outcome, Outcome::Halted { steps: 1 });
        }
        let lp = ToyProgram::parse("DECJZ r0 0").unwrap();
        assert_eq!(run_program(&lp, 0, &empty, 1000).outcome, Outcome::Running);
        assert_eq!(run_program(&ToyProgram::looping(), 7, &empty, 1000).outcome, Outcome::Running);
        let off_end = ToyProgram::parse("INC 0\nINC 0").unwrap();
        assert_eq!(run_program(&off_end, 0, &empty, 10).outcome, Outcome::Halted { steps: 2 });
        assert_eq!(run_program(&off_end, 0, &empty, 2).outcome, Outcome::Halted { steps: 2 });
        assert_eq!(run_program(&off_end, 0, &empty, 1).outcome, Outcome::Running);
    }

    #[test]
    fn echo_follows_the_oracle() {
        let echo = ToyProgram::oracle_echo();
        let a = OraclePrefix::parse("0110").unwrap();
        for p in 0..4u64 {
            let r = run_program(&echo, p, &a, 100);
            assert_eq!(r.halted(), a.get(p as usize).unwrap(), "p={p}");
            assert!(!r.tainted);
        }
        let r = run_program(&echo, 9, &a, 100);
        assert!(!r.halted());
        assert!(r.tainted);
        let padded = Padded { word: &[true], len: 5 };
        assert!(run_program(&echo, 0, &padded, 100).halted());
        let r = run_program(&echo, 3, &padded, 100);
        assert!(!r.halted() && !r.tainted);
    }

    #[test]
    fn text_round_trip() {
        let text = "ORACLE 1\nDECJZ 1 3\nHALT\nDECJZ 2 3";
        let p = ToyProgram::parse(text).unwrap();
        assert_eq!(p, ToyProgram::oracle_echo());
        assert_eq!(p.to_text(), text);
        assert_eq!(ToyProgram::parse("oracle r1; decjz r1 3 # c\nhalt\nDECJZ 2 3").unwrap(), p);
        for bad in ["JMP 1", "INC", "DECJZ 0 5", "INC 9", "HALT 1"] {
            assert!(ToyProgram::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn enumeration_is_infinite_to_one() {
        let i = BigUint::from(9u32); // bijective digit 8 = HALT
        assert_eq!(MachineEnumeration::decode_first(&i), ToyProgram::halt());
        for j in 0..20u32 {
            let n = MachineEnumeration::pair(&i, &BigUint::from(j));
            assert_eq!(MachineEnumeration::program(&n), ToyProgram::halt());
        }
        assert_eq!(MachineEnumeration::decode_first(&BigUint::zero()), ToyProgram::looping());
    }

    proptest! {
        #[test]
        fn unpair_inverts_pair(i in 0u64..1_000_000, j in 0u64..1_000_000) {
            let (a, b) = MachineEnumeration::unpair(&MachineEnumeration::pair(&BigUint::from(i), &BigUint::from(j)));
            prop_assert_eq!((a, b), (BigUint::from(i), BigUint::from(j)));
        }

        #[test]
        fn decoded_programs_round_trip(i in 0u64..10_000_000) {
            let p = MachineEnumeration::decode_first(&BigUint::from(i));
            prop_assert_eq!(ToyProgram::parse(&p.to_text()).unwrap(), p);
        }
    }
}
