use std::fmt;

use serde::{Deserialize, Serialize};

use crate::nbw::State;

/// Largest automaton the set-based algorithms accept.
pub const MAX_SET_STATES: usize = 64;

/// A set of states of an automaton with at most [`MAX_SET_STATES`] states,
/// iterated in increasing index order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateSet(u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn from_bits(bits: u64) -> Self {
        StateSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(q: State) -> Self {
        debug_assert!(q < MAX_SET_STATES);
        StateSet(1 << q)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_SET_STATES);
        if n == MAX_SET_STATES {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, q: State) -> bool {
        q < MAX_SET_STATES && self.0 >> q & 1 == 1
    }

    pub fn insert(&mut self, q: State) {
        debug_assert!(q < MAX_SET_STATES);
        self.0 |= 1 << q;
    }

    pub fn remove(&mut self, q: State) {
        if q < MAX_SET_STATES {
            self.0 &= !(1 << q);
        }
    }

    pub fn union(self, other: Self) -> Self {
        StateSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        StateSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        StateSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<State> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as State)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = State;

    fn next(&mut self) -> Option<State> {
        if self.0 == 0 {
            return None;
        }
        let q = self.0.trailing_zeros() as State;
        self.0 &= self.0 - 1;
        Some(q)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for StateSet {
    type Item = State;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<State> for StateSet {
    fn from_iter<I: IntoIterator<Item = State>>(iter: I) -> Self {
        let mut s = StateSet::EMPTY;
        for q in iter {
            s.insert(q);
        }
        s
    }
}

impl std::ops::BitOr for StateSet {
    type Output = StateSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl std::ops::BitOrAssign for StateSet {
    fn bitor_assign(&mut self, rhs: Self) {
        self.0 |= rhs.0;
    }
}

impl std::ops::BitAnd for StateSet {
    type Output = StateSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}
