//! Co-deterministic run DAGs.
//!
//! In the co-deterministic DAG every vertex keeps only the incoming edge from
//! its least-index predecessor. The edges leaving a level therefore depend on
//! the level's state set and the letter only, which makes the reduced
//! successor function level independent and lets an infinite DAG over a
//! lasso word be folded into a finite graph keyed by (word position, level set).

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph;
use crate::lasso::LassoWord;
use crate::nbw::{Nbw, SetView, State, Symbol};
use crate::stateset::StateSet;

/// The state set of a level together with the letter read from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelContext {
    pub level: StateSet,
    pub symbol: Symbol,
}

impl LevelContext {
    pub fn new(level: StateSet, symbol: Symbol) -> Self {
        LevelContext { level, symbol }
    }
}

/// Successors kept by each member of a level: member `q` keeps exactly the
/// successors whose least-index predecessor in the level is `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ReducedStep {
    kept: Vec<StateSet>,
    image: StateSet,
}

impl ReducedStep {
    pub fn new(view: &SetView, level: StateSet, sym: Symbol) -> Self {
        let mut kept = vec![StateSet::EMPTY; view.n];
        let mut claimed = StateSet::EMPTY;
        for q in level {
            let fresh = view.succ(q, sym).difference(claimed);
            kept[q] = fresh;
            claimed |= fresh;
        }
        ReducedStep { kept, image: claimed }
    }

    /// Successors kept by members of `sub`.
    #[inline]
    pub fn image(&self, sub: StateSet) -> StateSet {
        let mut out = StateSet::EMPTY;
        for q in sub {
            out |= self.kept[q];
        }
        out
    }

    /// Successors kept by `q`.
    #[inline]
    pub fn kept(&self, q: State) -> StateSet {
        self.kept[q]
    }

    /// Image of the whole level, equal to `δ(level, symbol)`.
    #[inline]
    pub fn full_image(&self) -> StateSet {
        self.image
    }
}

fn check_context(a: &Nbw, ctx: &LevelContext) -> Result<SetView> {
    let view = SetView::new(a)?;
    if ctx.symbol >= view.k {
        return Err(Error::SymbolOutOfRange { symbol: ctx.symbol, size: view.k });
    }
    if let Some(q) = ctx.level.iter().find(|&q| q >= view.n) {
        return Err(Error::StateOutOfRange { state: q, count: view.n });
    }
    Ok(view)
}

/// The least-index member of the level with `next` among its successors.
pub fn min_predecessor(a: &Nbw, ctx: &LevelContext, next: State) -> Result<State> {
    let view = check_context(a, ctx)?;
    ctx.level
        .iter()
        .find(|&q| view.succ(q, ctx.symbol).contains(next))
        .ok_or(Error::NotASuccessor(next))
}

/// `{ q' ∈ δ(sub, σ) | min_predecessor(ctx, q') ∈ sub }`.
pub fn reduced_successors(a: &Nbw, ctx: &LevelContext, sub: StateSet) -> Result<StateSet> {
    let view = check_context(a, ctx)?;
    if !sub.is_subset(ctx.level) {
        return Err(Error::NotASubset);
    }
    Ok(ReducedStep::new(&view, ctx.level, ctx.symbol).image(sub))
}

/// The first levels of the co-deterministic DAG over a word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoDetPrefix {
    /// `levels[0]` is the initial set, `levels[l + 1] = δ(levels[l], w[l])`.
    pub levels: Vec<StateSet>,
    /// `kept_edges[l]` maps each state of `levels[l + 1]` to its kept predecessor.
    pub kept_edges: Vec<BTreeMap<State, State>>,
}

/// Levels `0..=depth` of the co-deterministic DAG of `a` over `w`.
pub fn build_codet_prefix(a: &Nbw, w: &LassoWord, depth: usize) -> Result<CoDetPrefix> {
    let view = SetView::new(a)?;
    w.check_alphabet(view.k)?;
    let mut levels = vec![view.initial];
    let mut kept_edges = Vec::with_capacity(depth);
    for l in 0..depth {
        let level = levels[l];
        let step = ReducedStep::new(&view, level, w.letter(l));
        let edges = level
            .iter()
            .flat_map(|p| step.kept(p).iter().map(move |q| (q, p)))
            .collect();
        kept_edges.push(edges);
        levels.push(step.full_image());
    }
    Ok(CoDetPrefix { levels, kept_edges })
}

/// The co-deterministic DAG over a lasso folded into a finite graph.
///
/// Nodes are the distinct pairs (word position, level set) met along the word;
/// vertices are (node, state) pairs. The node sequence is a stem followed by a
/// cycle starting at `loop_start`.
#[derive(Clone, Debug)]
pub struct FoldedDag {
    nodes: Vec<(usize, StateSet)>,
    loop_start: usize,
    /// Vertex ids are `node * n + state`; only members of a node's level are live.
    n: usize,
    live: Vec<bool>,
    adj: Vec<Vec<usize>>,
    accepting: StateSet,
}

impl FoldedDag {
    pub fn new(a: &Nbw, w: &LassoWord) -> Result<Self> {
        let view = SetView::new(a)?;
        w.check_alphabet(view.k)?;
        let mut index: FxHashMap<(usize, StateSet), usize> = FxHashMap::default();
        let mut nodes = vec![(0, view.initial)];
        index.insert((0, view.initial), 0);
        let mut steps = Vec::new();
        let loop_start = loop {
            let (pos, level) = *nodes.last().expect("nonempty");
            let step = ReducedStep::new(&view, level, w.symbol_at_position(pos));
            let next = (w.next_position(pos), step.full_image());
            steps.push(step);
            if let Some(&i) = index.get(&next) {
                break i;
            }
            index.insert(next, nodes.len());
            nodes.push(next);
        };

        let n = view.n;
        let count = nodes.len();
        let mut live = vec![false; count * n];
        let mut adj = vec![Vec::new(); count * n];
        for (i, &(_, level)) in nodes.iter().enumerate() {
            let j = if i + 1 == count { loop_start } else { i + 1 };
            for p in level {
                live[i * n + p] = true;
                adj[i * n + p] = steps[i].kept(p).iter().map(|q| j * n + q).collect();
            }
        }
        Ok(FoldedDag { nodes, loop_start, n, live, adj, accepting: view.accepting })
    }

    /// Number of distinct (position, level set) nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Index of the first node on the periodic part.
    pub fn loop_start(&self) -> usize {
        self.loop_start
    }

    pub fn level(&self, node: usize) -> StateSet {
        self.nodes[node].1
    }

    fn is_f_vertex(&self, v: usize) -> bool {
        self.accepting.contains(v % self.n)
    }

    /// Vertices lying on an infinite path.
    fn infinite(&self, alive: &[bool]) -> Vec<bool> {
        graph::infinite_nodes(&self.adj, alive)
    }

    /// Number of ω-branches: every branch occupies its own infinite vertex in
    /// each periodic level, and the number of infinite vertices is the same at
    /// every periodic level.
    pub fn omega_branches(&self) -> usize {
        let inf = self.infinite(&self.live);
        let base = self.loop_start * self.n;
        (base..base + self.n).filter(|&v| inf[v]).count()
    }

    /// Whether some ω-branch visits accepting vertices infinitely often.
    pub fn is_accepting(&self) -> bool {
        let sccs = graph::tarjan(&self.adj);
        (0..self.adj.len()).any(|v| self.live[v] && self.is_f_vertex(v) && sccs.cyclic[sccs.comp[v]])
    }

    /// Peels the DAG: stage 1 removes finite vertices, stage 2 removes vertices
    /// reaching no accepting vertex, stage 3 removes finite vertices again.
    pub fn peel_stage(&self) -> PeelStage {
        let empty = |g: &[bool]| !g.iter().any(|&x| x);
        let g0 = self.live.clone();
        if empty(&g0) {
            return PeelStage::EmptiedAt(0);
        }
        let g1 = self.infinite(&g0);
        if empty(&g1) {
            return PeelStage::EmptiedAt(1);
        }
        let sub: Vec<Vec<usize>> = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, succ)| if g1[v] { succ.iter().copied().filter(|&w| g1[w]).collect() } else { Vec::new() })
            .collect();
        let f_targets: Vec<bool> = (0..sub.len()).map(|v| g1[v] && self.is_f_vertex(v)).collect();
        let reaches_f = graph::backward_reach(&sub, &f_targets);
        let g2: Vec<bool> = (0..sub.len()).map(|v| g1[v] && reaches_f[v]).collect();
        if empty(&g2) {
            return PeelStage::EmptiedAt(2);
        }
        let g3 = self.infinite(&g2);
        if empty(&g3) {
            return PeelStage::EmptiedAt(3);
        }
        PeelStage::Survives
    }
}

/// First peeling stage whose graph is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PeelStage {
    EmptiedAt(u8),
    /// The stage-3 graph is nonempty.
    Survives,
}

impl PeelStage {
    pub fn emptied_by(self, stage: u8) -> bool {
        matches!(self, PeelStage::EmptiedAt(j) if j <= stage)
    }
}

pub fn count_omega_branches(a: &Nbw, w: &LassoWord) -> Result<usize> {
    Ok(FoldedDag::new(a, w)?.omega_branches())
}

/// Acceptance read off the co-deterministic DAG. Agrees with membership when
/// `a` is finitely ambiguous.
pub fn is_codet_accepting(a: &Nbw, w: &LassoWord) -> Result<bool> {
    Ok(FoldedDag::new(a, w)?.is_accepting())
}

pub fn peel_stage(a: &Nbw, w: &LassoWord) -> Result<PeelStage> {
    Ok(FoldedDag::new(a, w)?.peel_stage())
}
