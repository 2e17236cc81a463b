//! Nondeterministic Büchi word automata over an explicit alphabet.
//!
//! States are numbered `0..n`; that numbering is the global order used
//! whenever an algorithm has to pick "the predecessor with the least index".

use crate::error::{Error, Result};
use crate::graph;
use crate::stateset::{StateSet, MAX_SET_STATES};

pub type State = usize;
pub type Symbol = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nbw {
    alphabet: Vec<String>,
    initial: Vec<State>,
    accepting: Vec<bool>,
    /// Successor lists indexed by `state * |alphabet| + symbol`, sorted and deduplicated.
    trans: Vec<Vec<State>>,
}

impl Nbw {
    /// An automaton with `state_count` states and no initial states, accepting
    /// states or transitions.
    pub fn new(alphabet: Vec<String>, state_count: usize) -> Self {
        let k = alphabet.len();
        Nbw {
            alphabet,
            initial: Vec::new(),
            accepting: vec![false; state_count],
            trans: vec![Vec::new(); state_count * k],
        }
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbol_index(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn is_initial(&self, q: State) -> bool {
        self.initial.binary_search(&q).is_ok()
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = State> + '_ {
        self.accepting.iter().enumerate().filter(|(_, &f)| f).map(|(q, _)| q)
    }

    pub fn succ(&self, q: State, a: Symbol) -> &[State] {
        &self.trans[q * self.alphabet.len() + a]
    }

    pub fn transition_count(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    /// Every (state, symbol) pair has at least one successor.
    pub fn is_complete(&self) -> bool {
        self.trans.iter().all(|t| !t.is_empty())
    }

    /// Every state has at most one predecessor per symbol.
    pub fn is_reverse_deterministic(&self) -> bool {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.state_count() * k];
        for q in 0..self.state_count() {
            for a in 0..k {
                for &t in self.succ(q, a) {
                    let slot = &mut seen[t * k + a];
                    if *slot {
                        return false;
                    }
                    *slot = true;
                }
            }
        }
        true
    }

    pub fn add_initial(&mut self, q: State) {
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn set_initial(&mut self, states: impl IntoIterator<Item = State>) {
        let mut v: Vec<State> = states.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        self.initial = v;
    }

    pub fn set_accepting(&mut self, q: State, accepting: bool) {
        self.accepting[q] = accepting;
    }

    pub fn add_transition(&mut self, q: State, a: Symbol, target: State) {
        let k = self.alphabet.len();
        let list = &mut self.trans[q * k + a];
        if let Err(pos) = list.binary_search(&target) {
            list.insert(pos, target);
        }
    }

    pub fn set_successors(&mut self, q: State, a: Symbol, mut targets: Vec<State>) {
        targets.sort_unstable();
        targets.dedup();
        let k = self.alphabet.len();
        self.trans[q * k + a] = targets;
    }

    /// Appends a fresh state with no transitions and returns its index.
    pub fn add_state(&mut self, accepting: bool) -> State {
        let q = self.state_count();
        self.accepting.push(accepting);
        self.trans.extend(std::iter::repeat_with(Vec::new).take(self.alphabet.len()));
        q
    }

    /// Checks index bounds of every stored state.
    pub fn validate(&self) -> Result<()> {
        let n = self.state_count();
        let bad = self
            .initial
            .iter()
            .chain(self.trans.iter().flatten())
            .find(|&&q| q >= n);
        match bad {
            Some(&state) => Err(Error::StateOutOfRange { state, count: n }),
            None => Ok(()),
        }
    }

    /// Same automaton with a different set of initial states.
    pub fn with_initial(&self, states: impl IntoIterator<Item = State>) -> Nbw {
        let mut out = self.clone();
        out.set_initial(states);
        out
    }

    pub fn check_set_capacity(&self) -> Result<()> {
        if self.state_count() > MAX_SET_STATES {
            Err(Error::TooManyStates { count: self.state_count(), max: MAX_SET_STATES })
        } else {
            Ok(())
        }
    }

    pub fn initial_set(&self) -> StateSet {
        self.initial.iter().copied().collect()
    }

    pub fn accepting_set(&self) -> StateSet {
        self.accepting_states().collect()
    }

    /// Adjacency lists of the underlying graph, ignoring labels.
    pub(crate) fn graph(&self) -> Vec<Vec<usize>> {
        let k = self.alphabet.len();
        (0..self.state_count())
            .map(|q| {
                let mut v: Vec<usize> = (0..k).flat_map(|a| self.succ(q, a).iter().copied()).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect()
    }
}

/// Bitmask view of an automaton with at most 64 states, used by the
/// subset-style constructions.
#[derive(Clone, Debug)]
pub(crate) struct SetView {
    pub n: usize,
    pub k: usize,
    pub masks: Vec<StateSet>,
    pub initial: StateSet,
    pub accepting: StateSet,
}

impl SetView {
    pub fn new(a: &Nbw) -> Result<Self> {
        a.check_set_capacity()?;
        let k = a.alphabet_size();
        let masks = a.trans.iter().map(|t| t.iter().copied().collect()).collect();
        Ok(SetView {
            n: a.state_count(),
            k,
            masks,
            initial: a.initial_set(),
            accepting: a.accepting_set(),
        })
    }

    #[inline]
    pub fn succ(&self, q: State, a: Symbol) -> StateSet {
        self.masks[q * self.k + a]
    }

    #[inline]
    pub fn post(&self, s: StateSet, a: Symbol) -> StateSet {
        let mut out = StateSet::EMPTY;
        for q in s {
            out |= self.succ(q, a);
        }
        out
    }
}

/// `δ(S, a)`: the union of the successor sets of the members of `s`.
pub fn successors(a: &Nbw, s: StateSet, sym: Symbol) -> StateSet {
    let mut out = StateSet::EMPTY;
    for q in s {
        for &t in a.succ(q, sym) {
            out.insert(t);
        }
    }
    out
}

/// Makes the automaton complete by routing every missing transition to one
/// fresh non-accepting sink (appended as the highest index). A complete
/// automaton is returned unchanged.
pub fn complete(a: &Nbw) -> Nbw {
    if a.is_complete() {
        return a.clone();
    }
    let mut out = a.clone();
    let sink = out.add_state(false);
    let k = out.alphabet_size();
    for q in 0..out.state_count() {
        for sym in 0..k {
            if out.succ(q, sym).is_empty() {
                out.add_transition(q, sym, sink);
            }
        }
    }
    out
}

/// Restricts the automaton to states that are reachable from an initial state
/// and can reach a cycle through an accepting state. Returns the trimmed
/// automaton (states renumbered in their original relative order) and the
/// old-to-new index map.
pub fn trim_useful(a: &Nbw) -> (Nbw, Vec<Option<State>>) {
    let n = a.state_count();
    let adj = a.graph();

    let mut reach = vec![false; n];
    let mut work: Vec<State> = a.initial().to_vec();
    for &q in &work {
        reach[q] = true;
    }
    while let Some(q) = work.pop() {
        for &t in &adj[q] {
            if !reach[t] {
                reach[t] = true;
                work.push(t);
            }
        }
    }

    let sccs = graph::tarjan(&adj);
    let mut good_comp = vec![false; sccs.count];
    for q in 0..n {
        if a.is_accepting(q) && sccs.cyclic[sccs.comp[q]] {
            good_comp[sccs.comp[q]] = true;
        }
    }
    let target: Vec<bool> = (0..n).map(|q| good_comp[sccs.comp[q]]).collect();
    let co_reach = graph::backward_reach(&adj, &target);

    let mut remap = vec![None; n];
    let mut next = 0;
    for q in 0..n {
        if reach[q] && co_reach[q] {
            remap[q] = Some(next);
            next += 1;
        }
    }

    let mut out = Nbw::new(a.alphabet().to_vec(), next);
    for q in 0..n {
        let Some(nq) = remap[q] else { continue };
        out.set_accepting(nq, a.is_accepting(q));
        if a.is_initial(q) {
            out.add_initial(nq);
        }
        for sym in 0..a.alphabet_size() {
            let targets = a.succ(q, sym).iter().filter_map(|&t| remap[t]).collect();
            out.set_successors(nq, sym, targets);
        }
    }
    (out, remap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn figure1_successors() {
        let a = fixtures::figure1();
        let b = a.symbol_index("b").unwrap();
        let q0: StateSet = [0].into_iter().collect();
        assert_eq!(successors(&a, q0, b), [1, 2].into_iter().collect());
        assert_eq!(successors(&a, [1, 2].into_iter().collect(), b), StateSet::singleton(1));
        assert_eq!(successors(&a, StateSet::EMPTY, b), StateSet::EMPTY);
    }

    #[test]
    fn completion_adds_one_sink() {
        let a = fixtures::figure1();
        assert!(!a.is_complete());
        let c = complete(&a);
        assert!(c.is_complete());
        assert_eq!(c.state_count(), 4);
        let sym_a = c.symbol_index("a").unwrap();
        assert_eq!(c.succ(1, sym_a), &[3]);
        assert_eq!(c.succ(2, sym_a), &[3]);
        for sym in 0..2 {
            assert_eq!(c.succ(3, sym), &[3]);
        }
        assert!(!c.is_accepting(3));
        // existing transitions are untouched
        assert_eq!(c.succ(0, sym_a), &[0]);
    }

    #[test]
    fn completion_is_identity_on_complete_input() {
        let a = fixtures::single_loop(true);
        assert_eq!(complete(&a), a);
    }

    #[test]
    fn trim_removes_sink() {
        let c = complete(&fixtures::figure1());
        let (t, remap) = trim_useful(&c);
        assert_eq!(t.state_count(), 3);
        assert_eq!(remap, vec![Some(0), Some(1), Some(2), None]);
        assert_eq!(t.initial(), &[0]);
    }

    #[test]
    fn trim_of_empty_language_is_empty() {
        let a = fixtures::single_loop(false);
        let (t, remap) = trim_useful(&a);
        assert_eq!(t.state_count(), 0);
        assert!(t.initial().is_empty());
        assert_eq!(remap, vec![None]);
    }

    #[test]
    fn reverse_determinism() {
        assert!(!fixtures::figure1().is_reverse_deterministic());
        assert!(fixtures::single_loop(true).is_reverse_deterministic());
    }
}
