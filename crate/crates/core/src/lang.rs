//! Language algorithms: product intersection, emptiness with lasso witnesses,
//! lasso membership, and containment via complementation.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use rustc_hash::{FxBuildHasher, FxHashMap};
use serde::{Deserialize, Serialize};

use crate::ambiguity::is_finitely_ambiguous;
use crate::error::{Error, Result};
use crate::graph;
use crate::lasso::LassoWord;
use crate::nbw::{Nbw, State, Symbol};
use crate::ncb::{self, NcbMacrostate};
use crate::rank::{self, RankVariant};

/// Complementation construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// General rank-based construction, maximal rank `2n`.
    #[serde(rename = "kv")]
    Kv,
    /// Rank-based construction over the co-deterministic DAG, maximal rank 2.
    #[serde(rename = "kv-fa")]
    KvFa,
    /// (N, C, B) construction for finitely ambiguous automata.
    #[serde(rename = "ncb")]
    Ncb,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Kv, Method::KvFa, Method::Ncb];

    /// Whether the construction is only correct on finitely ambiguous input.
    pub fn requires_finite_ambiguity(self) -> bool {
        !matches!(self, Method::Kv)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Kv => "kv",
            Method::KvFa => "kv-fa",
            Method::Ncb => "ncb",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "kv" => Ok(Method::Kv),
            "kv-fa" => Ok(Method::KvFa),
            "ncb" => Ok(Method::Ncb),
            other => Err(format!("unknown method `{other}` (expected kv, kv-fa or ncb)")),
        }
    }
}

/// Size metrics of a complement construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementStats {
    pub method: Option<Method>,
    pub input_states: usize,
    pub macrostates: usize,
    pub transitions: usize,
    /// Largest rank assigned by a reachable level ranking (rank-based methods).
    pub max_rank_used: Option<u32>,
    /// Reachable `Initial` and `Triple` macrostates (ncb).
    pub initial_phase: Option<usize>,
    pub triples: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Complement {
    pub automaton: Nbw,
    pub stats: ComplementStats,
}

/// Runs a construction without re-checking its precondition.
pub fn complement_unchecked(a: &Nbw, method: Method) -> Result<Complement> {
    match method {
        Method::Kv => rank::complement_rank(a, RankVariant::General).map(Into::into),
        Method::KvFa => rank::complement_rank(a, RankVariant::Fanbw).map(Into::into),
        Method::Ncb => ncb::complement_ncb(a).map(Into::into),
    }
}

/// Complements `a`, first verifying finite ambiguity when the method needs it.
pub fn complement(a: &Nbw, method: Method) -> Result<Complement> {
    if method.requires_finite_ambiguity() && !is_finitely_ambiguous(a)?.finitely_ambiguous {
        return Err(Error::NotFinitelyAmbiguous);
    }
    complement_unchecked(a, method)
}

fn check_alphabets(a: &Nbw, b: &Nbw) -> Result<()> {
    if a.alphabet() == b.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// Phase of the two-copy product: waiting for an accepting state of the left
/// (0) or right (1) operand.
#[inline]
fn next_phase(phase: u8, left_acc: bool, right_acc: bool) -> u8 {
    match phase {
        0 if left_acc => 1,
        1 if right_acc => 0,
        p => p,
    }
}

/// Büchi intersection. Product states `(p, q, phase)` are numbered in
/// breadth-first discovery order; a state is accepting when it sits in phase 0
/// on an accepting left state, which is exactly where the phase flips.
pub fn intersect(a: &Nbw, b: &Nbw) -> Result<Nbw> {
    check_alphabets(a, b)?;
    let k = a.alphabet_size();
    let mut index: IndexMap<(State, State, u8), (), FxBuildHasher> = IndexMap::default();
    for &p in a.initial() {
        for &q in b.initial() {
            index.insert((p, q, 0), ());
        }
    }
    let mut succs: Vec<Vec<Vec<State>>> = Vec::new();
    let mut next = 0;
    while next < index.len() {
        let (p, q, phase) = *index.get_index(next).expect("in range").0;
        let phase2 = next_phase(phase, a.is_accepting(p), b.is_accepting(q));
        let mut row = Vec::with_capacity(k);
        for s in 0..k {
            let mut targets = Vec::new();
            for &p2 in a.succ(p, s) {
                for &q2 in b.succ(q, s) {
                    let (id, _) = index.insert_full((p2, q2, phase2), ());
                    targets.push(id);
                }
            }
            row.push(targets);
        }
        succs.push(row);
        next += 1;
    }

    let n0 = a.initial().len() * b.initial().len();
    let mut out = Nbw::new(a.alphabet().to_vec(), index.len());
    out.set_initial(0..n0);
    for (id, &(p, _, phase)) in index.keys().enumerate() {
        out.set_accepting(id, phase == 0 && a.is_accepting(p));
    }
    for (id, row) in succs.into_iter().enumerate() {
        for (s, targets) in row.into_iter().enumerate() {
            out.set_successors(id, s, targets);
        }
    }
    Ok(out)
}

/// Result of an emptiness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emptiness {
    /// An accepted lasso when the language is nonempty.
    pub witness: Option<LassoWord>,
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        self.witness.is_none()
    }
}

/// Labelled adjacency of the reachable part plus BFS data from the initial states.
struct Explored {
    /// Edges `(symbol, target)` per reachable state, in symbol then target order.
    edges: Vec<Vec<(Symbol, usize)>>,
    /// Original state per dense id.
    states: Vec<State>,
    /// BFS predecessor `(id, symbol)`; `None` for initial states.
    parent: Vec<Option<(usize, Symbol)>>,
}

fn explore(a: &Nbw) -> Explored {
    let mut ids = vec![usize::MAX; a.state_count()];
    let mut states = Vec::new();
    let mut parent = Vec::new();
    for &q in a.initial() {
        ids[q] = states.len();
        states.push(q);
        parent.push(None);
    }
    let mut edges = Vec::new();
    let mut next = 0;
    while next < states.len() {
        let q = states[next];
        let mut row = Vec::new();
        for s in 0..a.alphabet_size() {
            for &t in a.succ(q, s) {
                if ids[t] == usize::MAX {
                    ids[t] = states.len();
                    states.push(t);
                    parent.push(Some((next, s)));
                }
                row.push((s, ids[t]));
            }
        }
        edges.push(row);
        next += 1;
    }
    Explored { edges, states, parent }
}

/// Shortest path (as letters) from `from` back to `from` staying inside `scc`.
fn shortest_cycle(edges: &[Vec<(Symbol, usize)>], comp: &[usize], from: usize) -> Vec<Symbol> {
    let c = comp[from];
    let mut parent: FxHashMap<usize, (usize, Symbol)> = FxHashMap::default();
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &(s, w) in &edges[v] {
            if comp[w] != c {
                continue;
            }
            if w == from {
                let mut word = vec![s];
                let mut cur = v;
                while cur != from {
                    let (p, sym) = parent[&cur];
                    word.push(sym);
                    cur = p;
                }
                word.reverse();
                return word;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(w) {
                e.insert((v, s));
                queue.push_back(w);
            }
        }
    }
    unreachable!("state lies on a cycle of its component")
}

/// Decides emptiness through accepting-SCC reachability. The witness has a
/// shortest stem to the nearest accepting state on a cycle, followed by a
/// shortest cycle through it.
pub fn is_empty(a: &Nbw) -> Emptiness {
    let ex = explore(a);
    let adj: Vec<Vec<usize>> = ex.edges.iter().map(|row| row.iter().map(|&(_, w)| w).collect()).collect();
    let sccs = graph::tarjan(&adj);
    // BFS order means the first hit is the nearest
    let Some(f) = (0..ex.states.len()).find(|&v| a.is_accepting(ex.states[v]) && sccs.cyclic[sccs.comp[v]]) else {
        return Emptiness { witness: None };
    };
    let mut stem = Vec::new();
    let mut cur = f;
    while let Some((p, s)) = ex.parent[cur] {
        stem.push(s);
        cur = p;
    }
    stem.reverse();
    let period = shortest_cycle(&ex.edges, &sccs.comp, f);
    Emptiness { witness: Some(LassoWord::new(stem, period).expect("cycle is nonempty")) }
}

/// The deterministic automaton accepting exactly `w`, one state per folded position.
pub fn word_automaton(alphabet: &[String], w: &LassoWord) -> Result<Nbw> {
    w.check_alphabet(alphabet.len())?;
    let mut out = Nbw::new(alphabet.to_vec(), w.positions());
    out.add_initial(0);
    out.set_accepting(w.stem().len(), true);
    for pos in 0..w.positions() {
        out.add_transition(pos, w.symbol_at_position(pos), w.next_position(pos));
    }
    Ok(out)
}

/// Whether `w ∈ L(a)`.
///
/// This is emptiness of the product with [`word_automaton`], computed
/// directly on pairs `(position, state)`: the word automaton is deterministic
/// and every cycle of the product passes its accepting loop-start state, so
/// the product is nonempty iff some reachable cycle visits an accepting state of `a`.
pub fn member(a: &Nbw, w: &LassoWord) -> Result<bool> {
    w.check_alphabet(a.alphabet_size())?;
    let n = a.state_count();
    let positions = w.positions();
    let mut ids = vec![u32::MAX; n * positions];
    let mut nodes: Vec<(usize, State)> = Vec::new();
    for &q in a.initial() {
        ids[q] = nodes.len() as u32;
        nodes.push((0, q));
    }
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < nodes.len() {
        let (pos, q) = nodes[next];
        let pos2 = w.next_position(pos);
        let sym = w.symbol_at_position(pos);
        let row = a
            .succ(q, sym)
            .iter()
            .map(|&t| {
                let slot = &mut ids[pos2 * n + t];
                if *slot == u32::MAX {
                    *slot = nodes.len() as u32;
                    nodes.push((pos2, t));
                }
                *slot as usize
            })
            .collect();
        adj.push(row);
        next += 1;
    }
    let sccs = graph::tarjan(&adj);
    Ok(nodes
        .iter()
        .enumerate()
        .any(|(v, &(_, q))| a.is_accepting(q) && sccs.cyclic[sccs.comp[v]]))
}

/// Outcome of a containment query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Containment {
    /// A lasso in `L(lhs) \ L(rhs)` when containment fails.
    pub counterexample: Option<LassoWord>,
    /// Product states explored (for the on-the-fly search) or built.
    pub explored_states: usize,
    /// Product states skipped by subsumption.
    pub pruned_states: usize,
}

impl Containment {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Decides `L(lhs) ⊆ L(rhs)` as emptiness of `lhs ∩ complement(rhs)`.
///
/// With `prune` and the ncb method the product is explored on the fly and a
/// product state `(p, m')` is skipped once some `(p, m)` with `m` subsuming
/// `m'` has been proven to have an empty language.
pub fn contains(lhs: &Nbw, rhs: &Nbw, method: Method, prune: bool) -> Result<Containment> {
    check_alphabets(lhs, rhs)?;
    if method.requires_finite_ambiguity() && !is_finitely_ambiguous(rhs)?.finitely_ambiguous {
        return Err(Error::NotFinitelyAmbiguous);
    }
    if prune && method == Method::Ncb {
        return contains_ncb_pruned(lhs, rhs);
    }
    let comp = complement_unchecked(rhs, method)?;
    let product = intersect(lhs, &comp.automaton)?;
    let result = is_empty(&product);
    Ok(Containment {
        counterexample: result.witness,
        explored_states: product.state_count(),
        pruned_states: 0,
    })
}

type ProductNode = (State, NcbMacrostate, u8);

fn contains_ncb_pruned(lhs: &Nbw, rhs: &Nbw) -> Result<Containment> {
    let view = crate::nbw::SetView::new(rhs)?;
    let k = lhs.alphabet_size();
    let mut index: IndexMap<ProductNode, (), FxBuildHasher> = IndexMap::default();
    let mut edges: Vec<Vec<(Symbol, usize)>> = Vec::new();
    let mut parent: Vec<Option<(usize, Symbol)>> = Vec::new();
    // proven-empty triples per (lhs state, N): list of C sets
    let mut empty_triples: FxHashMap<(State, crate::StateSet), Vec<crate::StateSet>> = FxHashMap::default();
    let mut pruned = 0usize;

    let start = NcbMacrostate::Initial(view.initial);
    for &p in lhs.initial() {
        index.insert((p, start, 0), ());
        parent.push(None);
    }

    const UNSEEN: usize = usize::MAX;
    let mut dfs_index: Vec<usize> = Vec::new();
    let mut low: Vec<usize> = Vec::new();
    let mut on_stack: Vec<bool> = Vec::new();
    let mut done: Vec<bool> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0usize;

    let grow = |v: &mut Vec<usize>, len: usize, fill: usize| {
        if v.len() < len {
            v.resize(len, fill);
        }
    };

    let roots = index.len();
    for root in 0..roots {
        grow(&mut dfs_index, index.len(), UNSEEN);
        if dfs_index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&(v, pos)) = call.last() {
            grow(&mut dfs_index, index.len(), UNSEEN);
            grow(&mut low, index.len(), 0);
            if on_stack.len() < index.len() {
                on_stack.resize(index.len(), false);
                done.resize(index.len(), false);
            }
            if pos == 0 && dfs_index[v] == UNSEEN {
                dfs_index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
                // expand successors
                let (p, m, phase) = *index.get_index(v).expect("in range").0;
                let phase2 = next_phase(phase, lhs.is_accepting(p), m.is_accepting());
                let mut row = Vec::new();
                for s in 0..k {
                    let rhs_succ = ncb::successors_in(&view, &m, s);
                    for &p2 in lhs.succ(p, s) {
                        for m2 in &rhs_succ {
                            let node = (p2, *m2, phase2);
                            if let Some(id) = index.get_index_of(&node) {
                                row.push((s, id));
                                continue;
                            }
                            if let NcbMacrostate::Triple { n, c, .. } = m2 {
                                let subsumed = empty_triples
                                    .get(&(p2, *n))
                                    .is_some_and(|cs| cs.iter().any(|c0| c0.is_subset(*c)));
                                if subsumed {
                                    pruned += 1;
                                    continue;
                                }
                            }
                            let (id, _) = index.insert_full(node, ());
                            parent.push(Some((v, s)));
                            row.push((s, id));
                        }
                    }
                }
                if edges.len() <= v {
                    edges.resize(v + 1, Vec::new());
                }
                edges[v] = row;
            }
            let row_len = edges[v].len();
            if pos < row_len {
                call.last_mut().expect("nonempty").1 += 1;
                let w = edges[v][pos].1;
                grow(&mut dfs_index, index.len(), UNSEEN);
                grow(&mut low, index.len(), 0);
                if on_stack.len() < index.len() {
                    on_stack.resize(index.len(), false);
                    done.resize(index.len(), false);
                }
                if dfs_index[w] == UNSEEN {
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(dfs_index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(u, _)) = call.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] != dfs_index[v] {
                continue;
            }
            let mut members = Vec::new();
            loop {
                let w = stack.pop().expect("tarjan stack underflow");
                on_stack[w] = false;
                members.push(w);
                if w == v {
                    break;
                }
            }
            let cyclic = members.len() > 1 || edges[v].iter().any(|&(_, w)| w == v);
            let accepting = members.iter().find(|&&w| {
                let (p, _, phase) = index.get_index(w).expect("in range").0;
                *phase == 0 && lhs.is_accepting(*p)
            });
            if let (true, Some(&f)) = (cyclic, accepting) {
                let mut comp = vec![usize::MAX; index.len()];
                for &w in &members {
                    comp[w] = 0;
                }
                let mut stem = Vec::new();
                let mut cur = f;
                while let Some((pv, s)) = parent[cur] {
                    stem.push(s);
                    cur = pv;
                }
                stem.reverse();
                let mut full_edges = edges.clone();
                full_edges.resize(index.len(), Vec::new());
                let period = shortest_cycle(&full_edges, &comp, f);
                return Ok(Containment {
                    counterexample: Some(LassoWord::new(stem, period).expect("cycle is nonempty")),
                    explored_states: index.len(),
                    pruned_states: pruned,
                });
            }
            for &w in &members {
                done[w] = true;
                let (p, m, _) = index.get_index(w).expect("in range").0;
                if let NcbMacrostate::Triple { n, c, .. } = m {
                    let cs = empty_triples.entry((*p, *n)).or_default();
                    if !cs.iter().any(|c0| c0.is_subset(*c)) {
                        cs.retain(|c1| !c.is_subset(*c1));
                        cs.push(*c);
                    }
                }
            }
        }
    }
    Ok(Containment { counterexample: None, explored_states: index.len(), pruned_states: pruned })
}
