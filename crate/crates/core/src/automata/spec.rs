//! Automaton specifications: the JSON file format and its compiled form.

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::groups::{GeneratorWord, GroupCtx};

/// A cell of `G × ℤ`. The `G` coordinate is a freely reduced generator word;
/// equality of `G` coordinates goes through a [`super::GroupOracle`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Pos {
    pub g: GeneratorWord,
    pub z: i64,
}

impl Pos {
    pub fn origin() -> Pos {
        Pos { g: GeneratorWord::empty(), z: 0 }
    }

    pub fn at_z(z: i64) -> Pos {
        Pos { g: GeneratorWord::empty(), z }
    }

    /// Right translation by an offset.
    pub fn offset(&self, o: &Offset, inverses: &[usize]) -> Pos {
        Pos { g: self.g.concat(&o.g).freely_reduced(inverses), z: self.z + o.z }
    }
}

/// A word of `G × ℤ`, split into its commuting `G` and `ℤ` parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Offset {
    pub g: GeneratorWord,
    pub z: i64,
}

impl Offset {
    pub fn len(&self) -> usize {
        self.g.len() + self.z.unsigned_abs() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inverse(&self, inverses: &[usize]) -> Offset {
        Offset { g: self.g.inverse(inverses), z: -self.z }
    }
}

/// One generator step of `G × ℤ`, or none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Stay,
    G(usize),
    Z(i64),
}

// ---------- file format ----------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub offset: String,
    pub value: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeadSpec {
    pub head: usize,
    pub offset: String,
    pub state: u32,
}

/// One table entry. Entries for a head and state are tried in file order;
/// the first whose constraints all hold fires. An entry without constraints
/// matches every local view.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub head: usize,
    pub state: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub heads: Vec<HeadSpec>,
    #[serde(rename = "move")]
    pub mv: String,
    pub next: u32,
}

/// The serialized automaton. Offsets and moves are words over the
/// generators of `G x Z` (`l.<g>` for `G`, `r.+1`/`r.-1` for `ℤ`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub group: String,
    /// `states[i] = |Q_i|`; the states of head `i` are `1..=states[i]`.
    pub states: Vec<u32>,
    pub radius: usize,
    pub rules: Vec<RuleSpec>,
    /// Arrangements of all heads relative to the start cell.
    pub initial: Vec<Vec<HeadSpec>>,
    /// Rejecting arrangements, relative to an anchor cell.
    #[serde(default)]
    pub reject: Vec<Vec<HeadSpec>>,
}

// ---------- compiled form ----------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub head: usize,
    pub state: u32,
    pub cells: Vec<(Offset, u8)>,
    pub heads: Vec<(usize, Offset, u32)>,
    pub mv: Move,
    pub next: u32,
}

/// Heads with offsets and states.
pub type Arrangement = Vec<(usize, Offset, u32)>;

/// A validated automaton over `G × ℤ`.
#[derive(Clone, Debug)]
pub struct AutomatonSpec {
    pub(crate) g: GroupCtx,
    pub(crate) states: Vec<u32>,
    pub(crate) radius: usize,
    pub(crate) rules: Vec<Rule>,
    pub(crate) initial: Vec<Arrangement>,
    pub(crate) reject: Vec<Arrangement>,
    pub(crate) file: AutomatonFile,
}

impl PartialEq for AutomatonSpec {
    fn eq(&self, other: &Self) -> bool {
        self.file == other.file
    }
}

impl AutomatonSpec {
    pub fn from_json(text: &str) -> Result<AutomatonSpec, SimError> {
        let file: AutomatonFile = serde_json::from_str(text).map_err(|e| SimError::Spec(e.to_string()))?;
        AutomatonSpec::compile(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("automaton files serialize")
    }

    pub fn file(&self) -> &AutomatonFile {
        &self.file
    }

    pub fn g(&self) -> &GroupCtx {
        &self.g
    }

    pub fn heads(&self) -> usize {
        self.states.len()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn initial(&self) -> &[Arrangement] {
        &self.initial
    }

    pub fn compile(file: AutomatonFile) -> Result<AutomatonSpec, SimError> {
        let err = |m: String| SimError::Spec(m);
        let g = GroupCtx::parse(&file.group)?;
        let gz = GroupCtx::product(g.clone(), GroupCtx::z());
        let k = file.states.len();
        if k == 0 {
            return Err(err("at least one head is required".into()));
        }
        if file.states.iter().any(|&q| q == 0) {
            return Err(err("every head needs at least one state".into()));
        }
        let ng = g.num_generators();
        let parse_offset = |s: &str| -> Result<Offset, SimError> {
            let w = gz.parse_word(s)?;
            let mut o = Offset::default();
            for &x in w.letters() {
                if x < ng {
                    o.g.0.push(x);
                } else {
                    o.z += if x == ng { 1 } else { -1 };
                }
            }
            o.g = o.g.freely_reduced(g.inverses());
            if o.len() > file.radius {
                return Err(err(format!("offset `{s}` is longer than the radius {}", file.radius)));
            }
            Ok(o)
        };
        let check_state = |head: usize, state: u32| -> Result<(), SimError> {
            if head >= k {
                return Err(err(format!("head {head} does not exist")));
            }
            if state == 0 || state > file.states[head] {
                return Err(err(format!("state {state} is not a live state of head {head}")));
            }
            Ok(())
        };
        let mut rules = Vec::with_capacity(file.rules.len());
        for (n, r) in file.rules.iter().enumerate() {
            check_state(r.head, r.state)?;
            check_state(r.head, r.next)?;
            let cells = r
                .cells
                .iter()
                .map(|c| {
                    if c.value > 1 {
                        return Err(err(format!("rule {n}: cell values are 0 or 1")));
                    }
                    Ok((parse_offset(&c.offset)?, c.value))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let heads = r
                .heads
                .iter()
                .map(|h| {
                    check_state(h.head, h.state)?;
                    if h.head == r.head {
                        return Err(err(format!("rule {n}: a head cannot constrain itself")));
                    }
                    Ok((h.head, parse_offset(&h.offset)?, h.state))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mv = match r.mv.trim() {
                "stay" | "ε" | "" => Move::Stay,
                sym => match gz.symbol_index(sym) {
                    Some(x) if x < ng => Move::G(x),
                    Some(x) if x == ng => Move::Z(1),
                    Some(_) => Move::Z(-1),
                    None => return Err(err(format!("rule {n}: unknown move `{sym}`"))),
                },
            };
            rules.push(Rule { head: r.head, state: r.state, cells, heads, mv, next: r.next });
        }
        let arrangement = |a: &Vec<HeadSpec>, full: bool| -> Result<Arrangement, SimError> {
            let mut seen = vec![false; k];
            let mut out = Vec::with_capacity(a.len());
            for h in a {
                check_state(h.head, h.state)?;
                if std::mem::replace(&mut seen[h.head], true) {
                    return Err(err(format!("head {} listed twice in an arrangement", h.head)));
                }
                out.push((h.head, parse_offset(&h.offset)?, h.state));
            }
            if a.is_empty() || (full && seen.iter().any(|s| !s)) {
                return Err(err("initial arrangements place every head; rejecting ones at least one".into()));
            }
            if full {
                out.sort_by_key(|e| e.0);
            }
            Ok(out)
        };
        let initial = file.initial.iter().map(|a| arrangement(a, true)).collect::<Result<Vec<_>, _>>()?;
        let reject = file.reject.iter().map(|a| arrangement(a, false)).collect::<Result<Vec<_>, _>>()?;
        Ok(AutomatonSpec { g, states: file.states.clone(), radius: file.radius, rules, initial, reject, file })
    }

    /// One head that walks along `ℤ` and rejects on reading 1 at its cell
    /// and at the next `ℤ` cell; `idle` extra heads stay put.
    pub fn eleven_detector(group: &str, idle: usize) -> AutomatonSpec {
        let mut rules = vec![
            RuleSpec {
                head: 0,
                state: 1,
                cells: vec![
                    CellSpec { offset: "ε".into(), value: 1 },
                    CellSpec { offset: "r.+1".into(), value: 1 },
                ],
                heads: vec![],
                mv: "stay".into(),
                next: 2,
            },
            RuleSpec { head: 0, state: 1, cells: vec![], heads: vec![], mv: "r.+1".into(), next: 1 },
            RuleSpec { head: 0, state: 2, cells: vec![], heads: vec![], mv: "stay".into(), next: 2 },
        ];
        for h in 1..=idle {
            rules.push(RuleSpec { head: h, state: 1, cells: vec![], heads: vec![], mv: "stay".into(), next: 1 });
        }
        let file = AutomatonFile {
            group: group.into(),
            states: std::iter::once(2).chain(std::iter::repeat(1).take(idle)).collect(),
            radius: 1,
            rules,
            initial: vec![(0..=idle)
                .map(|h| HeadSpec { head: h, offset: "ε".into(), state: 1 })
                .collect()],
            reject: vec![vec![HeadSpec { head: 0, offset: "ε".into(), state: 2 }]],
        };
        AutomatonSpec::compile(file).expect("built-in automaton is valid")
    }
}
