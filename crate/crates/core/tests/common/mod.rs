//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use kgroup_core::automata::{AutomatonFile, HeadSpec, RuleSpec};
use rand::seq::SliceRandom;
use rand::Rng;

/// Action of a Grigorchuk generator on a finite binary sequence, read from
/// the root: `a` flips the first letter; `b`, `c`, `d` fix it and act on the
/// rest by `(a, c)`, `(a, d)`, `(e, b)` after a 0 or a 1 respectively.
fn grig_letter_acts(letter: char, v: &mut [bool]) {
    let mut letter = letter;
    let mut i = 0;
    while i < v.len() {
        letter = match (letter, v[i]) {
            ('a', _) => {
                v[i] = !v[i];
                return;
            }
            ('b', false) | ('c', false) => 'a',
            ('b', true) => 'c',
            ('c', true) => 'd',
            ('d', false) => return,
            ('d', true) => 'b',
            _ => unreachable!("letters are a, b, c, d"),
        };
        i += 1;
    }
}

/// Whether the word fixes every vertex at level `depth` of the binary tree.
pub fn grig_tree_trivial(word: &str, depth: usize) -> bool {
    (0..1u32 << depth).all(|code| {
        let start: Vec<bool> = (0..depth).map(|i| code >> i & 1 == 1).collect();
        let mut v = start.clone();
        for c in word.chars().rev() {
            grig_letter_acts(c, &mut v);
        }
        v == start
    })
}

/// Order of the word's action at level `depth`.
pub fn grig_tree_order(word: &str, depth: usize, cap: usize) -> Option<usize> {
    (1..=cap).find(|&k| grig_tree_trivial(&word.repeat(k), depth))
}

/// All words over `abcd` of length at most `n`, shortest first.
pub fn grig_words(n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| ['a', 'b', 'c', 'd'].into_iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Legal configurations of `X_A` on the integer interval `[-n, n]`, found by
/// trying every 0/1 assignment; each is returned as its set of 1-cells.
pub fn brute_force_language(a: &[bool], n: i64) -> BTreeSet<BTreeSet<i64>> {
    let cells: Vec<i64> = (-n..=n).collect();
    let mut out = BTreeSet::new();
    for mask in 0u64..1 << cells.len() {
        if mask.count_ones() > 2 {
            continue;
        }
        let ones: BTreeSet<i64> = cells.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c).collect();
        let legal = match ones.iter().collect::<Vec<_>>()[..] {
            [x, y] => !a[(y - x) as usize],
            _ => true,
        };
        if legal {
            out.insert(ones);
        }
    }
    out
}

/// A random automaton whose table has a constraint-free entry for every
/// head and state, so no run meets a gap.
pub fn random_automaton<R: Rng>(rng: &mut R) -> AutomatonFile {
    let (group, g_moves): (&str, &[&str]) = if rng.gen_bool(0.5) {
        ("Z", &["l.+1", "l.-1"])
    } else {
        ("grigorchuk", &["l.a", "l.b", "l.c", "l.d"])
    };
    let k = rng.gen_range(1..=3usize);
    let states: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
    let mut moves: Vec<&str> = vec!["stay", "r.+1", "r.-1"];
    moves.extend_from_slice(g_moves);
    let offsets: Vec<&str> = ["ε", "r.+1", "r.-1"].iter().chain(g_moves).copied().collect();
    let mut rules = Vec::new();
    for head in 0..k {
        for state in 1..=states[head] {
            for _ in 0..rng.gen_range(0..3) {
                let cells = (0..rng.gen_range(0..3))
                    .map(|_| kgroup_core::automata::CellSpec {
                        offset: offsets.choose(rng).unwrap().to_string(),
                        value: rng.gen_range(0..2),
                    })
                    .collect();
                let heads = if k > 1 && rng.gen_bool(0.5) {
                    let other = (head + rng.gen_range(1..k)) % k;
                    vec![HeadSpec {
                        head: other,
                        offset: offsets.choose(rng).unwrap().to_string(),
                        state: rng.gen_range(1..=states[other]),
                    }]
                } else {
                    vec![]
                };
                rules.push(RuleSpec {
                    head,
                    state,
                    cells,
                    heads,
                    mv: moves.choose(rng).unwrap().to_string(),
                    next: rng.gen_range(1..=states[head]),
                });
            }
            rules.push(RuleSpec {
                head,
                state,
                cells: vec![],
                heads: vec![],
                mv: moves.choose(rng).unwrap().to_string(),
                next: rng.gen_range(1..=states[head]),
            });
        }
    }
    let initial = vec![(0..k)
        .map(|head| HeadSpec {
            head,
            offset: offsets.choose(rng).unwrap().to_string(),
            state: rng.gen_range(1..=states[head]),
        })
        .collect()];
    let reject = if rng.gen_bool(0.5) {
        vec![]
    } else {
        let head = rng.gen_range(0..k);
        vec![vec![HeadSpec { head, offset: "ε".into(), state: rng.gen_range(1..=states[head]) }]]
    };
    AutomatonFile { group: group.into(), states, radius: 1, rules, initial, reject }
}
