use fabc_core::harness::{generate, Family, GenConfig};
use fabc_core::lasso::distinct_lassos;
use fabc_core::{
    complement, complete, contains, member, ncb_successors, parse_nbw, reduced_successors, slice_successor,
    successors, to_text, trim_useful, LevelContext, Method, Nbw, NcbMacrostate, RankVariant, Slice, StateSet,
};
use proptest::prelude::*;

fn automaton(family: Family) -> impl Strategy<Value = Nbw> {
    (1usize..=5, any::<u64>()).prop_map(move |(n, seed)| generate(&GenConfig::new(n, family, seed)).unwrap())
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::General), Just(Family::ReverseDeterministic), Just(Family::FanbwFiltered)]
}

fn any_automaton() -> impl Strategy<Value = Nbw> {
    family().prop_flat_map(automaton)
}

fn subset(n: usize, bits: u64) -> StateSet {
    StateSet::from_bits(bits & StateSet::full(n).bits())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn successors_distribute_over_union(a in any_automaton(), x in any::<u64>(), y in any::<u64>(), sym in 0usize..2) {
        let n = a.state_count();
        let (s, t) = (subset(n, x), subset(n, y));
        prop_assert_eq!(successors(&a, s | t, sym), successors(&a, s, sym) | successors(&a, t, sym));
    }

    #[test]
    fn reduced_successors_partition_the_level_image(a in any_automaton(), x in any::<u64>(), sym in 0usize..2) {
        let level = subset(a.state_count(), x);
        let ctx = LevelContext::new(level, sym);
        let mut union = StateSet::EMPTY;
        for q in level {
            let img = reduced_successors(&a, &ctx, StateSet::singleton(q)).unwrap();
            prop_assert!(img.is_disjoint(union));
            prop_assert!(img.is_subset(successors(&a, StateSet::singleton(q), sym)));
            union |= img;
        }
        prop_assert_eq!(union, successors(&a, level, sym));
        prop_assert_eq!(reduced_successors(&a, &ctx, level).unwrap(), union);
    }

    #[test]
    fn slices_track_the_reachable_set(a in any_automaton(), word in proptest::collection::vec(0usize..2, 0..6)) {
        let mut s = Slice::initial(&a);
        let mut reach = a.initial_set();
        for &sym in &word {
            s = slice_successor(&a, &s, sym).unwrap();
            reach = successors(&a, reach, sym);
            prop_assert_eq!(s.union(), reach);
            let mut seen = StateSet::EMPTY;
            for &part in &s.sets {
                prop_assert!(!part.is_empty() && part.is_disjoint(seen));
                seen |= part;
            }
        }
    }

    #[test]
    fn completion_and_trimming_preserve_the_language(a in any_automaton()) {
        let completed = complete(&a);
        let (trimmed, _) = trim_useful(&a);
        for w in distinct_lassos(2, 2) {
            let inside = member(&a, &w).unwrap();
            prop_assert_eq!(member(&completed, &w).unwrap(), inside);
            prop_assert_eq!(member(&trimmed, &w).unwrap(), inside);
        }
    }

    #[test]
    fn text_round_trip(a in any_automaton()) {
        prop_assert_eq!(parse_nbw(&to_text(&a)).unwrap(), a);
    }

    #[test]
    fn ncb_triples_are_nested_and_deterministic(a in automaton(Family::FanbwFiltered)) {
        let c = fabc_core::complement_ncb(&a).unwrap();
        prop_assert!(c.within_bound());
        for m in &c.macrostates {
            if let NcbMacrostate::Triple { n, c: cc, b } = *m {
                prop_assert!(b.is_subset(cc) && cc.is_subset(n));
                for sym in 0..2 {
                    prop_assert_eq!(ncb_successors(&a, m, sym).unwrap().len(), 1);
                }
            }
        }
    }

    #[test]
    fn fanbw_ranks_are_bounded(a in automaton(Family::FanbwFiltered)) {
        let c = fabc_core::complement_rank(&a, RankVariant::Fanbw).unwrap();
        prop_assert!(c.max_rank_used <= 2);
        for m in &c.macrostates {
            prop_assert!(m.o.is_subset(m.f.even()));
            for q in a.accepting_states() {
                prop_assert!(m.f.get(q).is_none_or(|r| r % 2 == 0));
            }
        }
    }

    #[test]
    fn complements_partition_lassos(a in automaton(Family::FanbwFiltered), method in prop_oneof![Just(Method::KvFa), Just(Method::Ncb)]) {
        let c = complement(&a, method).unwrap();
        for w in distinct_lassos(2, 2) {
            prop_assert_ne!(member(&a, &w).unwrap(), member(&c.automaton, &w).unwrap());
        }
    }

    #[test]
    fn pruning_preserves_containment(lhs in automaton(Family::General), rhs in automaton(Family::FanbwFiltered)) {
        let with = contains(&lhs, &rhs, Method::Ncb, true).unwrap();
        let without = contains(&lhs, &rhs, Method::Ncb, false).unwrap();
        prop_assert_eq!(with.holds(), without.holds());
        if let Some(w) = with.counterexample {
            prop_assert!(member(&lhs, &w).unwrap() && !member(&rhs, &w).unwrap());
        }
    }
}
