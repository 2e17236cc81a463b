//! The native line-oriented text format.
//!
//! ```text
//! nbw
//! states: 3
//! alphabet: a b
//! initial: 0
//! accepting: 1
//! trans: 0 a 0
//! trans: 0 b 1 2
//! ```
//!
//! `#` starts a comment. Header keys may appear in any order but `states`
//! and `alphabet` must precede the first `trans` line. A (state, symbol)
//! pair without a `trans` line has no successors.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::nbw::{Nbw, State};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_nbw(text: &str) -> Result<Nbw> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    match lines.next() {
        Some((_, "nbw")) => {}
        Some((no, other)) => return Err(err(no, format!("expected `nbw` header, found `{other}`"))),
        None => return Err(err(1, "empty input")),
    }

    let mut states: Option<usize> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut initial: Option<(usize, Vec<State>)> = None;
    let mut accepting: Option<(usize, Vec<State>)> = None;
    let mut trans: Vec<(usize, State, String, Vec<State>)> = Vec::new();

    let parse_states = |no: usize, fields: &[&str]| -> Result<Vec<State>> {
        fields
            .iter()
            .map(|f| f.parse::<State>().map_err(|_| err(no, format!("invalid state `{f}`"))))
            .collect()
    };

    for (no, line) in lines {
        let Some((key, rest)) = line.split_once(':') else {
            return Err(err(no, format!("expected `key: value`, found `{line}`")));
        };
        let fields: Vec<&str> = rest.split_whitespace().collect();
        match key.trim() {
            "states" => {
                if states.is_some() {
                    return Err(err(no, "duplicate `states` line"));
                }
                let [count] = fields[..] else {
                    return Err(err(no, "`states` takes exactly one number"));
                };
                let count: usize = count.parse().map_err(|_| err(no, format!("invalid state count `{count}`")))?;
                if count == 0 {
                    return Err(err(no, "automaton must have at least one state"));
                }
                states = Some(count);
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(err(no, "duplicate `alphabet` line"));
                }
                if fields.is_empty() {
                    return Err(err(no, "alphabet must not be empty"));
                }
                let mut seen = std::collections::HashSet::new();
                for f in &fields {
                    if !seen.insert(*f) {
                        return Err(err(no, format!("duplicate symbol `{f}`")));
                    }
                }
                alphabet = Some(fields.iter().map(|s| s.to_string()).collect());
            }
            "initial" => {
                if initial.is_some() {
                    return Err(err(no, "duplicate `initial` line"));
                }
                initial = Some((no, parse_states(no, &fields)?));
            }
            "accepting" => {
                if accepting.is_some() {
                    return Err(err(no, "duplicate `accepting` line"));
                }
                accepting = Some((no, parse_states(no, &fields)?));
            }
            "trans" => {
                if states.is_none() || alphabet.is_none() {
                    return Err(err(no, "`states` and `alphabet` must precede transitions"));
                }
                let [src, sym, dst @ ..] = &fields[..] else {
                    return Err(err(no, "`trans` needs a source state and a symbol"));
                };
                let src = src.parse::<State>().map_err(|_| err(no, format!("invalid state `{src}`")))?;
                trans.push((no, src, sym.to_string(), parse_states(no, dst)?));
            }
            other => return Err(err(no, format!("unknown key `{other}`"))),
        }
    }

    let n = states.ok_or_else(|| err(1, "missing `states` line"))?;
    let alphabet = alphabet.ok_or_else(|| err(1, "missing `alphabet` line"))?;
    let (init_line, initial) = initial.ok_or_else(|| err(1, "missing `initial` line"))?;
    let (acc_line, accepting) = accepting.ok_or_else(|| err(1, "missing `accepting` line"))?;

    let check = |no: usize, q: State| -> Result<State> {
        if q < n {
            Ok(q)
        } else {
            Err(err(no, format!("state {q} out of range (states: {n})")))
        }
    };

    let mut a = Nbw::new(alphabet, n);
    for &q in &initial {
        a.add_initial(check(init_line, q)?);
    }
    for &q in &accepting {
        a.set_accepting(check(acc_line, q)?, true);
    }
    let mut declared = vec![false; n * a.alphabet_size()];
    for (no, src, sym, dst) in trans {
        let src = check(no, src)?;
        let s = a.symbol_index(&sym).ok_or_else(|| err(no, format!("unknown symbol `{sym}`")))?;
        let slot = &mut declared[src * a.alphabet_size() + s];
        if *slot {
            return Err(err(no, format!("duplicate transition for ({src}, {sym})")));
        }
        *slot = true;
        let dst = dst.into_iter().map(|q| check(no, q)).collect::<Result<Vec<_>>>()?;
        a.set_successors(src, s, dst);
    }
    Ok(a)
}

/// Renders the automaton in the native format. Transitions are listed by
/// state, then symbol; pairs without successors are omitted.
pub fn to_text(a: &Nbw) -> String {
    let mut out = String::new();
    let join = |it: &mut dyn Iterator<Item = State>| {
        it.map(|q| format!(" {q}")).collect::<String>()
    };
    out.push_str("nbw\n");
    let _ = writeln!(out, "states: {}", a.state_count());
    let _ = writeln!(out, "alphabet: {}", a.alphabet().join(" "));
    let _ = writeln!(out, "initial:{}", join(&mut a.initial().iter().copied()));
    let _ = writeln!(out, "accepting:{}", join(&mut a.accepting_states()));
    for q in 0..a.state_count() {
        for (s, name) in a.alphabet().iter().enumerate() {
            let succ = a.succ(q, s);
            if !succ.is_empty() {
                let _ = writeln!(out, "trans: {q} {name}{}", join(&mut succ.iter().copied()));
            }
        }
    }
    out
}
