//! Slices: ordered lists of disjoint state sets encoding one level of the
//! co-deterministic DAG in which a state's kept predecessor is its rightmost
//! parent.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nbw::{Nbw, SetView, Symbol};
use crate::stateset::StateSet;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slice {
    /// Pairwise disjoint, nonempty.
    pub sets: Vec<StateSet>,
    /// `f_marked[j]` iff `sets[j]` consists of accepting states.
    pub f_marked: Vec<bool>,
}

impl Slice {
    /// Drops empty sets and marks the sets contained in `F`. The sets must be
    /// pairwise disjoint.
    pub fn from_sets(a: &Nbw, sets: impl IntoIterator<Item = StateSet>) -> Self {
        let f = a.accepting_set();
        let sets: Vec<StateSet> = sets.into_iter().filter(|s| !s.is_empty()).collect();
        debug_assert!(sets.iter().enumerate().all(|(i, s)| sets[..i].iter().all(|t| t.is_disjoint(*s))));
        let f_marked = sets.iter().map(|s| s.is_subset(f)).collect();
        Slice { sets, f_marked }
    }

    /// Initial states split into non-accepting and accepting parts.
    pub fn initial(a: &Nbw) -> Self {
        let i = a.initial_set();
        let f = a.accepting_set();
        Self::from_sets(a, [i.difference(f), i.intersection(f)])
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn union(&self) -> StateSet {
        self.sets.iter().fold(StateSet::EMPTY, |acc, s| acc | *s)
    }
}

/// Splits the image of each set into its non-accepting part followed by its
/// accepting part, keeps only the rightmost occurrence of every state and
/// drops empty sets.
pub fn slice_successor(a: &Nbw, s: &Slice, sym: Symbol) -> Result<Slice> {
    let view = SetView::new(a)?;
    let f = view.accepting;
    let mut parts = Vec::with_capacity(2 * s.sets.len());
    for &set in &s.sets {
        let image = view.post(set, sym);
        parts.push(image.difference(f));
        parts.push(image.intersection(f));
    }
    let mut seen = StateSet::EMPTY;
    for part in parts.iter_mut().rev() {
        let fresh = part.difference(seen);
        seen |= *part;
        *part = fresh;
    }
    Ok(Slice::from_sets(a, parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lasso::enumerate_lassos;
    use crate::nbw::{complete, successors};

    fn set(states: &[usize]) -> StateSet {
        states.iter().copied().collect()
    }

    #[test]
    fn figure1_slices() {
        let a = fixtures::figure1();
        let s0 = Slice::from_sets(&a, [set(&[0])]);
        let s1 = slice_successor(&a, &s0, 1).unwrap();
        assert_eq!(s1.sets, vec![set(&[2]), set(&[1])]);
        assert_eq!(s1.f_marked, vec![false, true]);
        let s2 = slice_successor(&a, &s1, 1).unwrap();
        assert_eq!(s2.sets, vec![set(&[1])]);
        assert_eq!(s2.f_marked, vec![true]);
    }

    #[test]
    fn empty_slice_stays_empty() {
        let a = fixtures::figure1();
        assert!(slice_successor(&a, &Slice::default(), 0).unwrap().is_empty());
    }

    #[test]
    fn slices_partition_the_subset_image() {
        for a in [complete(&fixtures::figure1()), fixtures::figure2(), fixtures::ab_omega()] {
            for w in enumerate_lassos(a.alphabet_size(), 3) {
                let mut s = Slice::initial(&a);
                for i in 0..12 {
                    let next = slice_successor(&a, &s, w.letter(i)).unwrap();
                    assert_eq!(next.union(), successors(&a, s.union(), w.letter(i)));
                    assert_eq!(next.sets.iter().map(|x| x.len()).sum::<usize>(), next.union().len());
                    assert!(next.len() <= a.state_count());
                    s = next;
                }
            }
        }
    }
}
