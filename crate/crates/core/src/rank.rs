//! Rank-based complementation.
//!
//! A macrostate is a level ranking `f` plus a breakpoint set `O`. The general
//! construction ranks states up to `2n` and propagates ranks along all
//! transitions; the variant for finitely ambiguous automata ranks up to 2 and
//! propagates along the co-deterministic edges only, so each successor is
//! bounded by the rank of its single kept predecessor.

use std::fmt;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;
use serde::{Deserialize, Serialize};

use crate::codet::ReducedStep;
use crate::error::{Error, Result};
use crate::lang::{Complement, ComplementStats, Method};
use crate::nbw::{Nbw, SetView, State, Symbol};
use crate::stateset::StateSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RankVariant {
    /// Ranks up to `2n`, coverage along every transition.
    General,
    /// Ranks up to 2, coverage along co-deterministic edges.
    Fanbw,
}

impl RankVariant {
    pub fn default_max_rank(self, n: usize) -> u32 {
        match self {
            RankVariant::General => 2 * n as u32,
            RankVariant::Fanbw => 2,
        }
    }
}

/// Rank per state, `None` (⊥) outside the level.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelRanking {
    ranks: Box<[u8]>,
}

const BOTTOM: u8 = u8::MAX;

impl LevelRanking {
    /// The ranking with every state at ⊥.
    pub fn empty(n: usize) -> Self {
        LevelRanking { ranks: vec![BOTTOM; n].into_boxed_slice() }
    }

    pub fn from_ranks(ranks: &[Option<u32>]) -> Self {
        LevelRanking {
            ranks: ranks
                .iter()
                .map(|r| r.map_or(BOTTOM, |r| u8::try_from(r).expect("rank below 255")))
                .collect(),
        }
    }

    pub fn get(&self, q: State) -> Option<u32> {
        match self.ranks[q] {
            BOTTOM => None,
            r => Some(r as u32),
        }
    }

    pub fn state_count(&self) -> usize {
        self.ranks.len()
    }

    /// States with a rank.
    pub fn domain(&self) -> StateSet {
        (0..self.ranks.len()).filter(|&q| self.ranks[q] != BOTTOM).collect()
    }

    pub fn odd(&self) -> StateSet {
        (0..self.ranks.len()).filter(|&q| self.ranks[q] != BOTTOM && self.ranks[q] % 2 == 1).collect()
    }

    pub fn even(&self) -> StateSet {
        (0..self.ranks.len()).filter(|&q| self.ranks[q] != BOTTOM && self.ranks[q].is_multiple_of(2)).collect()
    }

    /// Largest assigned rank.
    pub fn max_rank(&self) -> Option<u32> {
        self.ranks.iter().filter(|&&r| r != BOTTOM).map(|&r| r as u32).max()
    }
}

impl fmt::Debug for LevelRanking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (q, &r) in self.ranks.iter().enumerate() {
            if r != BOTTOM {
                if !first {
                    f.write_str(", ")?;
                }
                write!(f, "{q}:{r}")?;
                first = false;
            }
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KvMacrostate {
    pub f: LevelRanking,
    pub o: StateSet,
}

impl KvMacrostate {
    pub fn is_accepting(&self) -> bool {
        self.o.is_empty()
    }
}

/// Shared successor enumeration over the bitmask view.
struct Ranker<'a> {
    view: &'a SetView,
    variant: RankVariant,
}

impl Ranker<'_> {
    fn successors(&self, m: &KvMacrostate, sym: Symbol, out: &mut Vec<KvMacrostate>) {
        let n = self.view.n;
        let dom = m.f.domain();
        // per-successor upper bound and image of O
        let mut bound = vec![BOTTOM; n];
        let o_image;
        match self.variant {
            RankVariant::General => {
                for p in dom {
                    let r = m.f.ranks[p];
                    for q in self.view.succ(p, sym) {
                        bound[q] = bound[q].min(r);
                    }
                }
                o_image = self.view.post(m.o, sym);
            }
            RankVariant::Fanbw => {
                let step = ReducedStep::new(self.view, dom, sym);
                for p in dom {
                    for q in step.kept(p) {
                        bound[q] = m.f.ranks[p];
                    }
                }
                o_image = step.image(m.o);
            }
        }
        let domain: Vec<State> = (0..n).filter(|&q| bound[q] != BOTTOM).collect();
        let options: Vec<Vec<u8>> = domain
            .iter()
            .map(|&q| {
                let step = if self.view.accepting.contains(q) { 2 } else { 1 };
                (0..=bound[q]).step_by(step).collect()
            })
            .collect();

        let mut choice = vec![0usize; domain.len()];
        loop {
            let mut ranks = vec![BOTTOM; n];
            for (i, &q) in domain.iter().enumerate() {
                ranks[q] = options[i][choice[i]];
            }
            let f = LevelRanking { ranks: ranks.into_boxed_slice() };
            let o = if m.o.is_empty() { f.even() } else { o_image.difference(f.odd()) };
            out.push(KvMacrostate { f, o });
            // odometer, last position fastest
            let mut i = domain.len();
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }
}

/// All successors of `m` under `sym`, in a fixed order (odometer over
/// increasing ranks, highest-index state fastest).
pub fn ranking_successors(a: &Nbw, m: &KvMacrostate, sym: Symbol, variant: RankVariant) -> Result<Vec<KvMacrostate>> {
    let view = SetView::new(a)?;
    if sym >= view.k {
        return Err(Error::SymbolOutOfRange { symbol: sym, size: view.k });
    }
    if m.f.state_count() != view.n {
        return Err(Error::StateOutOfRange { state: m.f.state_count(), count: view.n });
    }
    let mut out = Vec::new();
    Ranker { view: &view, variant }.successors(m, sym, &mut out);
    Ok(out)
}

/// A rank-based complement with its macrostates in state order.
#[derive(Clone, Debug)]
pub struct RankComplement {
    pub automaton: Nbw,
    pub macrostates: Vec<KvMacrostate>,
    pub variant: RankVariant,
    pub max_rank: u32,
    pub max_rank_used: u32,
}

impl From<RankComplement> for Complement {
    fn from(c: RankComplement) -> Self {
        let method = match c.variant {
            RankVariant::General => Method::Kv,
            RankVariant::Fanbw => Method::KvFa,
        };
        let stats = ComplementStats {
            method: Some(method),
            input_states: c.macrostates.first().map_or(0, |m| m.f.state_count()),
            macrostates: c.automaton.state_count(),
            transitions: c.automaton.transition_count(),
            max_rank_used: Some(c.max_rank_used),
            initial_phase: None,
            triples: None,
        };
        Complement { automaton: c.automaton, stats }
    }
}

/// Rank-based complement with the variant's default maximal rank.
pub fn complement_rank(a: &Nbw, variant: RankVariant) -> Result<RankComplement> {
    complement_rank_with(a, variant, variant.default_max_rank(a.state_count()), None)
}

/// Rank-based complement with an explicit maximal rank, optionally failing
/// with [`Error::TooManyStates`] once more than `state_limit` macrostates are reached.
pub fn complement_rank_with(
    a: &Nbw,
    variant: RankVariant,
    max_rank: u32,
    state_limit: Option<usize>,
) -> Result<RankComplement> {
    a.validate()?;
    let view = SetView::new(a)?;
    if max_rank >= BOTTOM as u32 {
        return Err(Error::InvalidConfig(format!("maximal rank {max_rank} exceeds {}", BOTTOM - 1)));
    }
    let n = view.n;
    let mut initial = vec![BOTTOM; n];
    for q in view.initial {
        // accepting states take the largest even rank
        let r = if view.accepting.contains(q) { max_rank & !1 } else { max_rank };
        initial[q] = r as u8;
    }
    let start = KvMacrostate { f: LevelRanking { ranks: initial.into_boxed_slice() }, o: StateSet::EMPTY };

    let ranker = Ranker { view: &view, variant };
    let mut index: IndexSet<KvMacrostate, FxBuildHasher> = IndexSet::default();
    index.insert(start);
    let mut rows: Vec<Vec<Vec<State>>> = Vec::new();
    let mut buf = Vec::new();
    let mut next = 0;
    while next < index.len() {
        let m = index.get_index(next).expect("in range").clone();
        let mut row = Vec::with_capacity(view.k);
        for sym in 0..view.k {
            buf.clear();
            ranker.successors(&m, sym, &mut buf);
            let targets = buf.drain(..).map(|m2| index.insert_full(m2).0).collect();
            row.push(targets);
        }
        rows.push(row);
        if let Some(limit) = state_limit {
            if index.len() > limit {
                return Err(Error::TooManyStates { count: index.len(), max: limit });
            }
        }
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
    let macrostates: Vec<KvMacrostate> = index.into_iter().collect();
    let max_rank_used = macrostates.iter().filter_map(|m| m.f.max_rank()).max().unwrap_or(0);
    Ok(RankComplement { automaton: out, macrostates, variant, max_rank, max_rank_used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lang::{intersect, is_empty, member};
    use crate::lasso::{enumerate_lassos, LassoWord};
    use crate::nbw::complete;

    fn ranking(ranks: &[Option<u32>]) -> LevelRanking {
        LevelRanking::from_ranks(ranks)
    }

    #[test]
    fn fanbw_successors_of_figure1_initial() {
        let a = fixtures::figure1();
        let m = KvMacrostate { f: ranking(&[Some(2), None, None]), o: StateSet::EMPTY };
        let succ = ranking_successors(&a, &m, 1, RankVariant::Fanbw).unwrap();
        assert_eq!(succ.len(), 6);
        for s in &succ {
            assert_eq!(s.f.domain(), [1, 2].into_iter().collect());
            assert_eq!(s.f.get(1).unwrap() % 2, 0);
            assert!(s.f.get(2).unwrap() <= 2);
            assert_eq!(s.o, s.f.even());
        }
        let pairs: Vec<(u32, u32)> = succ.iter().map(|s| (s.f.get(1).unwrap(), s.f.get(2).unwrap())).collect();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (0, 2), (2, 0), (2, 1), (2, 2)]);
    }

    #[test]
    fn empty_domain_has_single_successor() {
        let a = fixtures::figure1();
        let m = KvMacrostate { f: LevelRanking::empty(3), o: StateSet::EMPTY };
        for variant in [RankVariant::General, RankVariant::Fanbw] {
            let succ = ranking_successors(&a, &m, 0, variant).unwrap();
            assert_eq!(succ, vec![m.clone()]);
        }
    }

    #[test]
    fn general_ranks_stay_below_2n() {
        let a = complete(&fixtures::figure1());
        let c = complement_rank(&a, RankVariant::General).unwrap();
        assert_eq!(c.max_rank, 8);
        assert_eq!(c.macrostates[0].f.get(0), Some(8));
        assert!(c.max_rank_used <= 8);
        let three = fixtures::figure1();
        let m = KvMacrostate { f: ranking(&[Some(6), None, None]), o: StateSet::EMPTY };
        for s in ranking_successors(&three, &m, 1, RankVariant::General).unwrap() {
            assert!(s.f.max_rank().unwrap() <= 6);
        }
    }

    #[test]
    fn single_state_complements() {
        let universal = fixtures::single_loop(true);
        let empty = fixtures::single_loop(false);
        for variant in [RankVariant::General, RankVariant::Fanbw] {
            assert!(is_empty(&complement_rank(&universal, variant).unwrap().automaton).is_empty());
            let c = complement_rank(&empty, variant).unwrap().automaton;
            assert!(member(&c, &LassoWord::periodic(vec![0]).unwrap()).unwrap());
        }
    }

    #[test]
    fn figure1_fanbw_complement() {
        let a = complete(&fixtures::figure1());
        let c = complement_rank(&a, RankVariant::Fanbw).unwrap();
        let w = |stem: &[Symbol], period: &[Symbol]| LassoWord::new(stem.to_vec(), period.to_vec()).unwrap();
        assert!(member(&c.automaton, &w(&[], &[0])).unwrap());
        assert!(!member(&c.automaton, &w(&[], &[1])).unwrap());
        assert!(!member(&c.automaton, &w(&[0], &[1])).unwrap());
        assert!(member(&c.automaton, &w(&[], &[0, 1])).unwrap());
        assert!(c.max_rank_used <= 2);
        assert!(c.automaton.is_complete());
    }

    #[test]
    fn figure1_both_variants_complement_exactly_on_short_lassos() {
        let a = complete(&fixtures::figure1());
        for variant in [RankVariant::General, RankVariant::Fanbw] {
            let c = complement_rank(&a, variant).unwrap().automaton;
            assert!(is_empty(&intersect(&a, &c).unwrap()).is_empty());
            for word in enumerate_lassos(2, 3) {
                assert_ne!(member(&a, &word).unwrap(), member(&c, &word).unwrap(), "{variant:?} {word:?}");
            }
        }
    }

    #[test]
    fn state_limit_is_enforced() {
        let a = complete(&fixtures::figure1());
        let e = complement_rank_with(&a, RankVariant::General, 8, Some(3)).unwrap_err();
        assert!(matches!(e, Error::TooManyStates { max: 3, .. }));
    }
}
