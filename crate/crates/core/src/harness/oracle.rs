//! Exact complementation of limit-deterministic automata, used to compare
//! complement languages exactly rather than on sampled words.
//!
//! The input splits into a nondeterministic part `Q1` and a deterministic part
//! `Q2` that is closed under transitions and contains every accepting state.
//! A macrostate `(N, C, S, B)` holds the reachable `Q1` states in `N` and the
//! reachable `Q2` states split into `C` (may still visit `F`) and `S` (never
//! visits `F` again). `Q2` states may move from `C` to `S` at any step, a safe
//! state reaching `F` blocks the run, and `B ⊆ C` is a breakpoint over the
//! runs in `C`. A word is rejected iff every deterministic run visits `F`
//! finitely often iff some choice of safe moves empties `B` infinitely often.

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;

use crate::error::{Error, Result};
use crate::nbw::{Nbw, State};
use crate::ncb::NcbComplement;
use crate::stateset::{StateSet, MAX_SET_STATES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Macro {
    n: StateSet,
    c: StateSet,
    s: StateSet,
    b: StateSet,
}

struct Split {
    k: usize,
    /// Successors of each `Q1` state inside `Q1` and inside `Q2`.
    q1_next: Vec<(StateSet, StateSet)>,
    /// Deterministic successor of each `Q2` state, if any.
    q2_next: Vec<Option<usize>>,
}

impl Split {
    fn image(&self, set: StateSet, sym: usize) -> StateSet {
        set.iter().filter_map(|q| self.q2_next[q * self.k + sym]).collect()
    }
}

/// Complements `a`, whose states flagged in `deterministic` form the
/// deterministic part. Fails with [`Error::InvalidConfig`] if the split is not
/// limit deterministic, and with [`Error::TooManyStates`] when either part
/// exceeds 64 states or more than `state_limit` macrostates are reached.
pub fn complement_limit_deterministic(a: &Nbw, deterministic: &[bool], state_limit: usize) -> Result<Nbw> {
    a.validate()?;
    let k = a.alphabet_size();
    let q1: Vec<State> = (0..a.state_count()).filter(|&q| !deterministic[q]).collect();
    let q2: Vec<State> = (0..a.state_count()).filter(|&q| deterministic[q]).collect();
    for part in [&q1, &q2] {
        if part.len() > MAX_SET_STATES {
            return Err(Error::TooManyStates { count: part.len(), max: MAX_SET_STATES });
        }
    }
    let mut local = vec![0usize; a.state_count()];
    for (i, &q) in q1.iter().enumerate() {
        local[q] = i;
    }
    for (i, &q) in q2.iter().enumerate() {
        local[q] = i;
    }
    let invalid = |msg: String| Err(Error::InvalidConfig(msg));
    let mut f = StateSet::EMPTY;
    for q in a.accepting_states() {
        if !deterministic[q] {
            return invalid(format!("accepting state {q} outside the deterministic part"));
        }
        f.insert(local[q]);
    }
    let mut q1_next = Vec::with_capacity(q1.len() * k);
    for &q in &q1 {
        for sym in 0..k {
            let (mut inner, mut enter) = (StateSet::EMPTY, StateSet::EMPTY);
            for &t in a.succ(q, sym) {
                if deterministic[t] {
                    enter.insert(local[t]);
                } else {
                    inner.insert(local[t]);
                }
            }
            q1_next.push((inner, enter));
        }
    }
    let mut q2_next = Vec::with_capacity(q2.len() * k);
    for &q in &q2 {
        for sym in 0..k {
            match a.succ(q, sym) {
                [] => q2_next.push(None),
                [t] if deterministic[*t] => q2_next.push(Some(local[*t])),
                [t] => return invalid(format!("transition {q} -> {t} leaves the deterministic part")),
                _ => return invalid(format!("state {q} has several successors on one letter")),
            }
        }
    }
    let split = Split { k, q1_next, q2_next };

    let mut index: IndexSet<Macro, FxBuildHasher> = IndexSet::default();
    let n0: StateSet = a.initial().iter().filter(|&&q| !deterministic[q]).map(|&q| local[q]).collect();
    let t0: StateSet = a.initial().iter().filter(|&&q| deterministic[q]).map(|&q| local[q]).collect();
    for x in submasks(t0.difference(f)) {
        let c = t0.difference(x);
        index.insert(Macro { n: n0, c, s: x, b: c });
    }
    let initial_count = index.len();

    let mut rows: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut next = 0;
    while next < index.len() {
        let m = *index.get_index(next).expect("in range");
        let mut row = Vec::with_capacity(k);
        for sym in 0..k {
            let mut targets = Vec::new();
            let forced = split.image(m.s, sym);
            if forced.is_disjoint(f) {
                let (mut n2, mut enter) = (StateSet::EMPTY, StateSet::EMPTY);
                for q in m.n {
                    let (inner, e) = split.q1_next[q * k + sym];
                    n2 |= inner;
                    enter |= e;
                }
                let t = split.image(m.c, sym) | forced | enter;
                let moved_b = split.image(m.b, sym);
                for x in submasks(t.difference(f).difference(forced)) {
                    let s2 = forced | x;
                    let c2 = t.difference(s2);
                    let b2 = if m.b.is_empty() { c2 } else { moved_b.intersection(c2) };
                    targets.push(index.insert_full(Macro { n: n2, c: c2, s: s2, b: b2 }).0);
                }
            }
            row.push(targets);
        }
        rows.push(row);
        if index.len() > state_limit {
            return Err(Error::TooManyStates { count: index.len(), max: state_limit });
        }
        next += 1;
    }

    let mut out = Nbw::new(a.alphabet().to_vec(), index.len());
    out.set_initial(0..initial_count);
    for (id, m) in index.iter().enumerate() {
        out.set_accepting(id, m.b.is_empty());
    }
    for (id, row) in rows.into_iter().enumerate() {
        for (sym, targets) in row.into_iter().enumerate() {
            out.set_successors(id, sym, targets);
        }
    }
    Ok(out)
}

/// All subsets of `set`, starting with `set` itself and ending with `∅`.
fn submasks(set: StateSet) -> impl Iterator<Item = StateSet> {
    let full = set.bits();
    let mut cur = Some(full);
    std::iter::from_fn(move || {
        let x = cur?;
        cur = if x == 0 { None } else { Some((x - 1) & full) };
        Some(StateSet::from_bits(x))
    })
}

/// Complement of an (N, C, B) complement: its triples form the deterministic part.
pub fn complement_of_ncb(c: &NcbComplement, state_limit: usize) -> Result<Nbw> {
    let deterministic: Vec<bool> = c.macrostates.iter().map(|m| m.is_triple()).collect();
    complement_limit_deterministic(&c.automaton, &deterministic, state_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lang::{intersect, is_empty, member};
    use crate::lasso::enumerate_lassos;
    use crate::nbw::complete;
    use crate::ncb::complement_ncb;

    #[test]
    fn submask_enumeration() {
        let s: StateSet = [1, 3].into_iter().collect();
        let all: Vec<u64> = submasks(s).map(StateSet::bits).collect();
        assert_eq!(all, vec![0b1010, 0b1000, 0b0010, 0]);
        assert_eq!(submasks(StateSet::EMPTY).count(), 1);
    }

    #[test]
    fn deterministic_automata_complement() {
        // (ab)^ω: the whole automaton is deterministic
        let a = fixtures::ab_omega();
        let z = complement_limit_deterministic(&a, &[true; 3], 10_000).unwrap();
        assert!(is_empty(&intersect(&a, &z).unwrap()).is_empty());
        for w in enumerate_lassos(2, 3) {
            assert_ne!(member(&a, &w).unwrap(), member(&z, &w).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn double_complement_of_figure1() {
        let a = complete(&fixtures::figure1());
        let c = complement_ncb(&a).unwrap();
        let z = complement_of_ncb(&c, 100_000).unwrap();
        for w in enumerate_lassos(2, 3) {
            assert_eq!(member(&z, &w).unwrap(), member(&a, &w).unwrap(), "{w:?}");
        }
        assert!(is_empty(&intersect(&z, &c.automaton).unwrap()).is_empty());
    }

    #[test]
    fn rejects_non_limit_deterministic_split() {
        let a = fixtures::two_loop_ambiguous();
        assert!(matches!(complement_limit_deterministic(&a, &[true, true], 100), Err(Error::InvalidConfig(_))));
        assert!(matches!(complement_limit_deterministic(&a, &[false, false], 100), Err(Error::InvalidConfig(_))));
    }
}
