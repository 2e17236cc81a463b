//! Small hand-written automata used throughout the tests and examples.

use crate::format::parse_nbw;
use crate::nbw::Nbw;

/// Initial `q0`, accepting `q1`; `q0 -a-> q0`, `q0 -b-> {q1,q2}`,
/// `q1 -b-> q1`, `q2 -b-> q1`. Language `a* b^ω`, two accepting runs on each
/// accepted word. `q1` and `q2` have no `a`-successors.
pub const FIGURE1_TEXT: &str = "\
nbw
states: 3
alphabet: a b
initial: 0
accepting: 1
trans: 0 a 0
trans: 0 b 1 2
trans: 1 b 1
trans: 2 b 1
";

pub fn figure1() -> Nbw {
    parse_nbw(FIGURE1_TEXT).expect("fixture parses")
}

/// Initial `q0`, accepting `q1` over `{a}`: `q0 -a-> {q0,q1}`, `q1 -a-> q2`,
/// `q2 -a-> q2`. Infinitely many runs on `a^ω`, none accepting; the
/// co-deterministic DAG keeps a single ω-branch through `q0`.
pub const FIGURE2_TEXT: &str = "\
nbw
states: 3
alphabet: a
initial: 0
accepting: 1
trans: 0 a 0 1
trans: 1 a 2
trans: 2 a 2
";

pub fn figure2() -> Nbw {
    parse_nbw(FIGURE2_TEXT).expect("fixture parses")
}

/// One state with a self-loop on `a`.
pub fn single_loop(accepting: bool) -> Nbw {
    let mut a = Nbw::new(vec!["a".into()], 1);
    a.add_initial(0);
    a.set_accepting(0, accepting);
    a.add_transition(0, 0, 0);
    a
}

/// `q -a-> {q,p}`, `p -a-> q`, `q` initial and accepting: every run on `a^ω`
/// is accepting and there are uncountably many.
pub fn two_loop_ambiguous() -> Nbw {
    let mut a = Nbw::new(vec!["a".into()], 2);
    a.add_initial(0);
    a.set_accepting(0, true);
    a.set_successors(0, 0, vec![0, 1]);
    a.add_transition(1, 0, 0);
    a
}

/// `p -a-> {p,q}`, `q -a-> q`, `q` accepting: `a^ω` has the accepting runs
/// `p^k q^ω` for every `k`, although no state has two distinct runs back to itself.
pub fn delayed_branching() -> Nbw {
    let mut a = Nbw::new(vec!["a".into()], 2);
    a.add_initial(0);
    a.set_accepting(1, true);
    a.set_successors(0, 0, vec![0, 1]);
    a.add_transition(1, 0, 1);
    a
}

/// Accepts every word over the given alphabet.
pub fn universal(alphabet: &[String]) -> Nbw {
    let mut a = Nbw::new(alphabet.to_vec(), 1);
    a.add_initial(0);
    a.set_accepting(0, true);
    for s in 0..alphabet.len() {
        a.add_transition(0, s, 0);
    }
    a
}

/// Complete one-state automaton with empty language.
pub fn empty_language(alphabet: &[String]) -> Nbw {
    let mut a = universal(alphabet);
    a.set_accepting(0, false);
    a
}

/// `(ab)^ω` only, completed with a non-accepting sink.
pub fn ab_omega() -> Nbw {
    let mut a = Nbw::new(vec!["a".into(), "b".into()], 3);
    a.add_initial(0);
    a.set_accepting(0, true);
    a.add_transition(0, 0, 1);
    a.add_transition(0, 1, 2);
    a.add_transition(1, 1, 0);
    a.add_transition(1, 0, 2);
    a.add_transition(2, 0, 2);
    a.add_transition(2, 1, 2);
    a
}

pub fn ab_alphabet() -> Vec<String> {
    vec!["a".into(), "b".into()]
}
