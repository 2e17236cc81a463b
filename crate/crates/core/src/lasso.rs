use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbw::{Nbw, Symbol};

/// An ultimately periodic word `stem · period^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LassoWord {
    stem: Vec<Symbol>,
    period: Vec<Symbol>,
}

impl LassoWord {
    pub fn new(stem: Vec<Symbol>, period: Vec<Symbol>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyLoop);
        }
        Ok(LassoWord { stem, period })
    }

    /// `period^ω` with an empty stem.
    pub fn periodic(period: Vec<Symbol>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn stem(&self) -> &[Symbol] {
        &self.stem
    }

    pub fn period(&self) -> &[Symbol] {
        &self.period
    }

    /// Number of distinct letter positions, `|stem| + |period|`.
    pub fn positions(&self) -> usize {
        self.stem.len() + self.period.len()
    }

    /// Letter read at folded position `pos < positions()`.
    pub fn symbol_at_position(&self, pos: usize) -> Symbol {
        if pos < self.stem.len() {
            self.stem[pos]
        } else {
            self.period[pos - self.stem.len()]
        }
    }

    /// Folded position following `pos`; the last position wraps to the loop start.
    pub fn next_position(&self, pos: usize) -> usize {
        if pos + 1 == self.positions() {
            self.stem.len()
        } else {
            pos + 1
        }
    }

    /// Folded position of letter index `i` of the infinite word.
    pub fn position_of(&self, i: usize) -> usize {
        if i < self.stem.len() {
            i
        } else {
            self.stem.len() + (i - self.stem.len()) % self.period.len()
        }
    }

    /// The `i`-th letter of the infinite word.
    pub fn letter(&self, i: usize) -> Symbol {
        self.symbol_at_position(self.position_of(i))
    }

    pub fn check_alphabet(&self, size: usize) -> Result<()> {
        match self.stem.iter().chain(&self.period).find(|&&s| s >= size) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, size }),
            None => Ok(()),
        }
    }

    /// Shortest representation of the same infinite word: primitive period and
    /// the shortest stem. Two lassos denote the same word iff their canonical
    /// forms are equal.
    pub fn canonical(&self) -> LassoWord {
        let p = self.period.len();
        let root = (1..=p)
            .find(|&d| p.is_multiple_of(d) && (d..p).all(|i| self.period[i] == self.period[i - d]))
            .unwrap_or(p);
        let mut period: Vec<Symbol> = self.period[..root].to_vec();
        let mut stem = self.stem.clone();
        while let Some(&last) = stem.last() {
            if last != *period.last().expect("period is nonempty") {
                break;
            }
            stem.pop();
            period.rotate_right(1);
        }
        LassoWord { stem, period }
    }

    /// Parses a symbol sequence: whitespace-separated names, or, when the
    /// text has no whitespace and is not itself a symbol, one symbol per character.
    pub fn parse_symbols(a: &Nbw, text: &str) -> Result<Vec<Symbol>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let lookup = |name: &str| a.symbol_index(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()));
        if text.contains(char::is_whitespace) {
            return text.split_whitespace().map(lookup).collect();
        }
        if let Some(s) = a.symbol_index(text) {
            return Ok(vec![s]);
        }
        text.chars().map(|c| lookup(&c.to_string())).collect()
    }

    pub fn display<'a>(&'a self, a: &'a Nbw) -> DisplayLasso<'a> {
        DisplayLasso { word: self, alphabet: a.alphabet() }
    }
}

pub struct DisplayLasso<'a> {
    word: &'a LassoWord,
    alphabet: &'a [String],
}

impl fmt::Display for DisplayLasso<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |syms: &[Symbol]| syms.iter().map(|&s| self.alphabet[s].as_str()).collect::<Vec<_>>().join(" ");
        write!(f, "[{}]({})^w", names(&self.word.stem), names(&self.word.period))
    }
}

/// All lassos over a `k`-letter alphabet with `|stem| <= bound` and
/// `1 <= |period| <= bound`, ordered by stem length, period length, then lexicographically.
pub fn enumerate_lassos(k: usize, bound: usize) -> Vec<LassoWord> {
    fn words(k: usize, len: usize) -> Vec<Vec<Symbol>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..k).map(move |s| {
                        let mut w = w.clone();
                        w.push(s);
                        w
                    })
                })
                .collect();
        }
        out
    }
    let mut out = Vec::new();
    for stem_len in 0..=bound {
        for period_len in 1..=bound {
            for stem in words(k, stem_len) {
                for period in words(k, period_len) {
                    out.push(LassoWord { stem: stem.clone(), period });
                }
            }
        }
    }
    out
}

/// [`enumerate_lassos`] with duplicates (same infinite word) removed, keeping
/// canonical representatives in first-seen order.
pub fn distinct_lassos(k: usize, bound: usize) -> Vec<LassoWord> {
    let mut seen = std::collections::HashSet::new();
    enumerate_lassos(k, bound)
        .into_iter()
        .map(|w| w.canonical())
        .filter(|w| seen.insert(w.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_loop_is_rejected() {
        assert_eq!(LassoWord::new(vec![0], vec![]), Err(Error::EmptyLoop));
    }

    #[test]
    fn folding_positions() {
        let w = LassoWord::new(vec![0, 1], vec![1, 0, 0]).unwrap();
        assert_eq!(w.positions(), 5);
        assert_eq!(w.next_position(4), 2);
        let letters: Vec<_> = (0..9).map(|i| w.letter(i)).collect();
        assert_eq!(letters, vec![0, 1, 1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn enumeration_counts() {
        // stems: 1 + 2 + 4 + 8, periods: 2 + 4 + 8
        assert_eq!(enumerate_lassos(2, 3).len(), 15 * 14);
        let distinct = distinct_lassos(2, 3);
        assert!(distinct.len() < 210);
        assert!(distinct.contains(&LassoWord::periodic(vec![0]).unwrap()));
    }

    #[test]
    fn canonical_absorbs_stem() {
        let w = LassoWord::new(vec![1, 0, 1], vec![0, 1, 0, 1]).unwrap();
        assert_eq!(w.canonical(), LassoWord::new(vec![], vec![1, 0]).unwrap());
    }

    proptest! {
        #[test]
        fn canonical_preserves_letters(stem in proptest::collection::vec(0usize..2, 0..5),
                                       period in proptest::collection::vec(0usize..2, 1..5)) {
            let w = LassoWord::new(stem, period).unwrap();
            let c = w.canonical();
            for i in 0..40 {
                prop_assert_eq!(w.letter(i), c.letter(i));
            }
            prop_assert_eq!(c.canonical(), c);
        }
    }
}
