//! Finite ambiguity: deciding whether every word has finitely many accepting
//! runs, and a brute-force run counter used to cross-check the decision.
//!
//! After trimming to useful states, `a` has a word with infinitely many
//! accepting runs iff there are states `p`, `r` and a nonempty word `v` with
//! a cycle `π: p -v-> p`, a different path `π': p -v-> r` and a cycle
//! `r -v-> r` through an accepting state. Given such a triple, the word
//! `u v^ω` (with `u` leading to `p`) has the accepting runs that follow `π`
//! for `k` rounds, then `π'`, then loop at `r`, one for each `k`. Conversely,
//! infinitely many accepting runs over one word force such a pattern by
//! pigeonhole on the levels of its run DAG.
//!
//! Note that `r = p` is allowed, which covers two distinct cycles at one
//! state, while `r != p` covers runs that linger at `p` for an arbitrary
//! number of rounds before moving on (`p -a-> {p, q}`, `q -a-> q` with
//! `q` accepting has no state with two distinct cycles but is not finitely ambiguous).

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph;
use crate::lasso::LassoWord;
use crate::nbw::{trim_useful, Nbw, State, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityWitness {
    /// State with a cycle over `word` and a second, different path over
    /// `word` to `target`.
    pub state: State,
    pub target: State,
    /// Shortest word leading from an initial state to `state`.
    pub stem: Vec<Symbol>,
    pub word: Vec<Symbol>,
}

impl AmbiguityWitness {
    /// `stem · word^ω`, a word with infinitely many accepting runs.
    pub fn lasso(&self) -> LassoWord {
        LassoWord::new(self.stem.clone(), self.word.clone()).expect("witness word is nonempty")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityVerdict {
    pub finitely_ambiguous: bool,
    pub witness: Option<AmbiguityWitness>,
}

/// Decides finite ambiguity by breadth-first search in a three-track product
/// of the trimmed automaton, so the reported witness word is shortest.
pub fn is_finitely_ambiguous(a: &Nbw) -> Result<AmbiguityVerdict> {
    a.validate()?;
    let (t, remap) = trim_useful(a);
    let n = t.state_count();
    let mut best: Option<(State, State, Vec<Symbol>)> = None;

    // r must sit on an accepting cycle and be reachable from p
    let adj = t.graph();
    let sccs = graph::tarjan(&adj);
    let mut reach = vec![vec![false; n]; n];
    for (p, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![p];
        row[p] = true;
        while let Some(q) = stack.pop() {
            for &s in &adj[q] {
                if !row[s] {
                    row[s] = true;
                    stack.push(s);
                }
            }
        }
    }

    let mut search = ThreeTrack::new(&t);
    for p in 0..n {
        if !sccs.cyclic[sccs.comp[p]] {
            continue;
        }
        for r in 0..n {
            if !reach[p][r] || !sccs.cyclic[sccs.comp[r]] {
                continue;
            }
            let limit = best.as_ref().map_or(usize::MAX, |(_, _, w)| w.len());
            if let Some(word) = search.shortest(p, r, limit) {
                best = Some((p, r, word));
            }
        }
    }

    let Some((p, r, word)) = best else {
        return Ok(AmbiguityVerdict { finitely_ambiguous: true, witness: None });
    };
    let original = |q: State| remap.iter().position(|&m| m == Some(q)).expect("trimmed state has a preimage");
    Ok(AmbiguityVerdict {
        finitely_ambiguous: false,
        witness: Some(AmbiguityWitness {
            state: original(p),
            target: original(r),
            stem: shortest_stem(&t, p),
            word,
        }),
    })
}

/// Breadth-first search over `(x, y, z, diverged, accepted)`: `x` follows the
/// cycle at `p`, `y` the second path from `p`, `z` the accepting cycle at `r`.
struct ThreeTrack<'a> {
    t: &'a Nbw,
    n: usize,
    parent: Vec<u32>,
    letter: Vec<u8>,
    touched: Vec<usize>,
}

impl<'a> ThreeTrack<'a> {
    fn new(t: &'a Nbw) -> Self {
        let n = t.state_count();
        let size = n * n * n * 4;
        ThreeTrack { t, n, parent: vec![u32::MAX; size], letter: vec![0; size], touched: Vec::new() }
    }

    fn encode(&self, x: State, y: State, z: State, div: bool, acc: bool) -> usize {
        let n = self.n;
        (((x * n + y) * n + z) << 2) | ((div as usize) << 1) | acc as usize
    }

    /// Shortest word strictly shorter than `limit` realizing the pattern for `(p, r)`.
    fn shortest(&mut self, p: State, r: State, limit: usize) -> Option<Vec<Symbol>> {
        for &v in &self.touched {
            self.parent[v] = u32::MAX;
        }
        self.touched.clear();
        let n = self.n;
        let start = self.encode(p, p, r, false, false);
        let goal = self.encode(p, r, r, true, true);
        self.parent[start] = start as u32;
        self.touched.push(start);
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some((node, depth)) = queue.pop_front() {
            if depth + 1 >= limit {
                return None;
            }
            let xyz = node >> 2;
            let (x, y, z) = (xyz / (n * n), (xyz / n) % n, xyz % n);
            let (div, acc) = (node & 2 != 0, node & 1 != 0);
            for s in 0..self.t.alphabet_size() {
                for &x2 in self.t.succ(x, s) {
                    for &y2 in self.t.succ(y, s) {
                        for &z2 in self.t.succ(z, s) {
                            let next = self.encode(x2, y2, z2, div || x2 != y2, acc || self.t.is_accepting(z2));
                            if self.parent[next] != u32::MAX {
                                continue;
                            }
                            self.parent[next] = node as u32;
                            self.letter[next] = s as u8;
                            self.touched.push(next);
                            if next == goal {
                                return Some(self.path(start, goal));
                            }
                            queue.push_back((next, depth + 1));
                        }
                    }
                }
            }
        }
        None
    }

    fn path(&self, start: usize, goal: usize) -> Vec<Symbol> {
        let mut word = Vec::new();
        let mut cur = goal;
        while cur != start {
            word.push(self.letter[cur] as Symbol);
            cur = self.parent[cur] as usize;
        }
        word.reverse();
        word
    }
}

fn shortest_stem(t: &Nbw, target: State) -> Vec<Symbol> {
    let mut parent: Vec<Option<(State, Symbol)>> = vec![None; t.state_count()];
    let mut seen = vec![false; t.state_count()];
    let mut queue = VecDeque::new();
    for &q in t.initial() {
        seen[q] = true;
        queue.push_back(q);
    }
    while let Some(q) = queue.pop_front() {
        if q == target {
            break;
        }
        for s in 0..t.alphabet_size() {
            for &q2 in t.succ(q, s) {
                if !seen[q2] {
                    seen[q2] = true;
                    parent[q2] = Some((q, s));
                    queue.push_back(q2);
                }
            }
        }
    }
    let mut stem = Vec::new();
    let mut cur = target;
    while let Some((q, s)) = parent[cur] {
        stem.push(s);
        cur = q;
    }
    stem.reverse();
    stem
}

/// Number of run prefixes reading the first `length` letters of `w` whose
/// last state still has an accepting continuation. Saturates at `u64::MAX`.
pub fn count_accepting_run_prefixes(a: &Nbw, w: &LassoWord, length: usize) -> Result<u64> {
    a.validate()?;
    w.check_alphabet(a.alphabet_size())?;
    let n = a.state_count();
    let positions = w.positions();
    // product vertex pos * n + q
    let adj: Vec<Vec<usize>> = (0..positions * n)
        .map(|v| {
            let (pos, q) = (v / n, v % n);
            let pos2 = w.next_position(pos);
            a.succ(q, w.symbol_at_position(pos)).iter().map(|&t| pos2 * n + t).collect()
        })
        .collect();
    let sccs = graph::tarjan(&adj);
    let target: Vec<bool> = (0..adj.len()).map(|v| a.is_accepting(v % n) && sccs.cyclic[sccs.comp[v]]).collect();
    let live = graph::backward_reach(&adj, &target);

    let mut counts = vec![0u64; n];
    for &q in a.initial() {
        counts[q] = 1;
    }
    for i in 0..length {
        let sym = w.letter(i);
        let mut next = vec![0u64; n];
        for q in 0..n {
            if counts[q] == 0 {
                continue;
            }
            for &t in a.succ(q, sym) {
                next[t] = next[t].saturating_add(counts[q]);
            }
        }
        counts = next;
    }
    let pos = w.position_of(length);
    Ok((0..n)
        .filter(|&q| live[pos * n + q])
        .fold(0u64, |acc, q| acc.saturating_add(counts[q])))
}
