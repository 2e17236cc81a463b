//! Complementation of finitely ambiguous automata with (N, C, B) macrostates.
//!
//! The initial phase tracks the plain subset of reachable states. At any step
//! the automaton may guess that the current level is stable and switch to a
//! triple: `N` is the current level, `C` holds the vertices descending, along
//! co-deterministic edges, from accepting vertices met after the guess, and
//! `B ⊆ C` is the breakpoint being checked for finiteness. Triples evolve
//! deterministically; a triple with `B = ∅` is accepting.

use std::fmt;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::codet::ReducedStep;
use crate::error::{Error, Result};
use crate::lang::{Complement, ComplementStats, Method};
use crate::nbw::{Nbw, SetView, State, Symbol};
use crate::stateset::StateSet;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NcbMacrostate {
    Initial(StateSet),
    /// Invariant: `b ⊆ c ⊆ n`.
    Triple { n: StateSet, c: StateSet, b: StateSet },
}

impl NcbMacrostate {
    pub fn is_accepting(&self) -> bool {
        matches!(self, NcbMacrostate::Triple { b, .. } if b.is_empty())
    }

    pub fn is_triple(&self) -> bool {
        matches!(self, NcbMacrostate::Triple { .. })
    }
}

impl fmt::Debug for NcbMacrostate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NcbMacrostate::Initial(s) => write!(f, "Initial({s})"),
            NcbMacrostate::Triple { n, c, b } => write!(f, "Triple({n}, {c}, {b})"),
        }
    }
}

/// The triple reached from `(n, c, b)` on `sym`, all components taken under
/// the co-deterministic edges of level `n`.
fn triple_step(view: &SetView, n: StateSet, c: StateSet, b: StateSet, sym: Symbol) -> NcbMacrostate {
    let step = ReducedStep::new(view, n, sym);
    let n2 = step.full_image();
    let c2 = step.image(c) | n2.intersection(view.accepting);
    let b2 = if b.is_empty() { c2 } else { step.image(b) };
    NcbMacrostate::Triple { n: n2, c: c2, b: b2 }
}

pub(crate) fn successors_in(view: &SetView, m: &NcbMacrostate, sym: Symbol) -> Vec<NcbMacrostate> {
    match *m {
        NcbMacrostate::Initial(s) => {
            let f = s.intersection(view.accepting);
            vec![NcbMacrostate::Initial(view.post(s, sym)), triple_step(view, s, f, f, sym)]
        }
        NcbMacrostate::Triple { n, c, b } => vec![triple_step(view, n, c, b, sym)],
    }
}

/// Successors of `m` on `sym`: an `Initial` macrostate has its subset
/// successor followed by the guessed triple, a triple has exactly one successor.
pub fn ncb_successors(a: &Nbw, m: &NcbMacrostate, sym: Symbol) -> Result<Vec<NcbMacrostate>> {
    let view = SetView::new(a)?;
    if sym >= view.k {
        return Err(Error::SymbolOutOfRange { symbol: sym, size: view.k });
    }
    Ok(successors_in(&view, m, sym))
}

/// `m` subsumes `m2` when both are triples with equal `N` and `m.C ⊆ m2.C`;
/// the language from `m2` is then contained in the language from `m`.
pub fn subsumes(m: &NcbMacrostate, m2: &NcbMacrostate) -> bool {
    match (m, m2) {
        (NcbMacrostate::Triple { n, c, .. }, NcbMacrostate::Triple { n: n2, c: c2, .. }) => n == n2 && c.is_subset(*c2),
        _ => false,
    }
}

/// `2^n + 4^n`, saturating.
pub fn macrostate_bound(n: usize) -> u128 {
    let pow = |base: u128| base.checked_pow(n as u32).unwrap_or(u128::MAX);
    pow(2).saturating_add(pow(4))
}

#[derive(Clone, Debug)]
pub struct NcbComplement {
    pub automaton: Nbw,
    pub macrostates: Vec<NcbMacrostate>,
    pub input_states: usize,
}

impl NcbComplement {
    pub fn initial_count(&self) -> usize {
        self.macrostates.iter().filter(|m| !m.is_triple()).count()
    }

    pub fn triple_count(&self) -> usize {
        self.macrostates.iter().filter(|m| m.is_triple()).count()
    }

    pub fn within_bound(&self) -> bool {
        (self.macrostates.len() as u128) <= macrostate_bound(self.input_states)
    }
}

impl From<NcbComplement> for Complement {
    fn from(c: NcbComplement) -> Self {
        let stats = ComplementStats {
            method: Some(Method::Ncb),
            input_states: c.input_states,
            macrostates: c.automaton.state_count(),
            transitions: c.automaton.transition_count(),
            max_rank_used: None,
            initial_phase: Some(c.initial_count()),
            triples: Some(c.triple_count()),
        };
        Complement { automaton: c.automaton, stats }
    }
}

/// Reachable part of the (N, C, B) complement, states numbered in discovery
/// order. Only correct for finitely ambiguous input; not re-checked here.
///
/// On incomplete input the triple `(∅, ∅, ∅)` may become reachable; it is
/// accepting and loops on every letter, so it acts as the universal sink.
pub fn complement_ncb(a: &Nbw) -> Result<NcbComplement> {
    a.validate()?;
    let view = SetView::new(a)?;
    let mut index: IndexSet<NcbMacrostate, FxBuildHasher> = IndexSet::default();
    index.insert(NcbMacrostate::Initial(view.initial));
    let mut rows: Vec<Vec<Vec<State>>> = Vec::new();
    let mut next = 0;
    while next < index.len() {
        let m = *index.get_index(next).expect("in range");
        let row = (0..view.k)
            .map(|sym| successors_in(&view, &m, sym).into_iter().map(|m2| index.insert_full(m2).0).collect())
            .collect();
        rows.push(row);
        next += 1;
    }
    let mut out = Nbw::new(a.alphabet().to_vec(), index.len());
    out.add_initial(0);
    for (id, m) in index.iter().enumerate() {
        out.set_accepting(id, m.is_accepting());
    }
    for (id, row) in rows.into_iter().enumerate() {
        for (sym, targets) in row.into_iter().enumerate() {
            out.set_successors(id, sym, targets);
        }
    }
    Ok(NcbComplement { automaton: out, macrostates: index.into_iter().collect(), input_states: view.n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lang::{intersect, is_empty, member};
    use crate::lasso::{enumerate_lassos, LassoWord};
    use crate::nbw::complete;
    use crate::rank::{complement_rank, RankVariant};

    fn set(states: &[usize]) -> StateSet {
        states.iter().copied().collect()
    }

    fn triple(n: &[usize], c: &[usize], b: &[usize]) -> NcbMacrostate {
        NcbMacrostate::Triple { n: set(n), c: set(c), b: set(b) }
    }

    #[test]
    fn figure1_initial_step() {
        let a = fixtures::figure1();
        let succ = ncb_successors(&a, &NcbMacrostate::Initial(set(&[0])), 1).unwrap();
        assert_eq!(succ, vec![NcbMacrostate::Initial(set(&[1, 2])), triple(&[1, 2], &[1], &[1])]);
    }

    #[test]
    fn figure1_triple_steps() {
        let a = fixtures::figure1();
        assert_eq!(ncb_successors(&a, &triple(&[1, 2], &[1], &[1]), 1).unwrap(), vec![triple(&[1], &[1], &[1])]);
        assert_eq!(ncb_successors(&a, &triple(&[1], &[1], &[1]), 1).unwrap(), vec![triple(&[1], &[1], &[1])]);
        let c = complete(&a);
        let s = triple(&[0], &[], &[]);
        assert_eq!(ncb_successors(&c, &s, 0).unwrap(), vec![s]);
        assert!(s.is_accepting());
    }

    #[test]
    fn single_state_complements() {
        let c = complement_ncb(&fixtures::single_loop(false)).unwrap();
        assert!(member(&c.automaton, &LassoWord::periodic(vec![0]).unwrap()).unwrap());
        let c = complement_ncb(&fixtures::single_loop(true)).unwrap();
        assert!(is_empty(&c.automaton).is_empty());
    }

    #[test]
    fn figure1_complement_agrees_with_kv_fa() {
        let a = complete(&fixtures::figure1());
        let ncb = complement_ncb(&a).unwrap();
        let kvfa = complement_rank(&a, RankVariant::Fanbw).unwrap();
        assert!(ncb.within_bound());
        assert!(is_empty(&intersect(&a, &ncb.automaton).unwrap()).is_empty());
        for w in enumerate_lassos(2, 3) {
            let m = member(&ncb.automaton, &w).unwrap();
            assert_eq!(m, member(&kvfa.automaton, &w).unwrap(), "{w:?}");
            assert_ne!(m, member(&a, &w).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn triples_are_well_formed_and_deterministic() {
        let a = complete(&fixtures::figure1());
        let c = complement_ncb(&a).unwrap();
        for (id, m) in c.macrostates.iter().enumerate() {
            if let NcbMacrostate::Triple { n, c: cc, b } = m {
                assert!(b.is_subset(*cc) && cc.is_subset(*n));
                for sym in 0..2 {
                    assert_eq!(c.automaton.succ(id, sym).len(), 1);
                }
            }
        }
        assert_eq!(c.initial_count() + c.triple_count(), c.automaton.state_count());
    }

    #[test]
    fn subsumption_cases() {
        let m = triple(&[1, 2], &[1], &[1]);
        assert!(subsumes(&m, &m));
        assert!(subsumes(&m, &triple(&[1, 2], &[1, 2], &[])));
        assert!(!subsumes(&triple(&[1], &[1], &[]), &m));
        assert!(!subsumes(&NcbMacrostate::Initial(set(&[1, 2])), &m));
    }

    #[test]
    fn bound_values() {
        assert_eq!(macrostate_bound(0), 2);
        assert_eq!(macrostate_bound(3), 8 + 64);
        assert_eq!(macrostate_bound(64), u128::MAX);
    }
}
