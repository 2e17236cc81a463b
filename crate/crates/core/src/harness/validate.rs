//! Cross-validation of the complement constructions against the membership
//! and emptiness oracles, plus the structural bounds each construction promises.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ambiguity::is_finitely_ambiguous;
use crate::codet::FoldedDag;
use crate::error::{Error, Result};
use crate::lang::{intersect, is_empty, member, Method};
use crate::lasso::{distinct_lassos, LassoWord};
use crate::nbw::Nbw;
use crate::ncb::{complement_ncb, macrostate_bound, NcbComplement, NcbMacrostate};
use crate::rank::{complement_rank_with, RankVariant};

use super::oracle::complement_of_ncb;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateConfig {
    pub methods: Vec<Method>,
    /// Lassos with stem and loop lengths up to this bound are sampled.
    pub lasso_bound: usize,
    /// Exact kv/ncb equivalence is checked for inputs with at most this many states.
    pub exact_max_states: usize,
    /// Macrostate budget of the exact-equivalence oracle.
    pub oracle_state_limit: usize,
    /// Macrostate budget for the rank-based constructions; exceeding it is a violation.
    pub rank_state_limit: Option<usize>,
    /// Record wall-clock timings in the report.
    pub timings: bool,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig {
            methods: Method::ALL.to_vec(),
            lasso_bound: 3,
            exact_max_states: 3,
            oracle_state_limit: 200_000,
            rank_state_limit: None,
            timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// A word in both or neither of `L(a)` and the complement.
    Coverage,
    /// Two complements disagree on a word.
    Disagreement,
    /// The product of `a` and its complement is nonempty.
    NotDisjoint,
    /// A rank above the construction's maximum.
    RankBound,
    /// More macrostates than the construction's bound.
    StateBound,
    /// A triple violating `B ⊆ C ⊆ N`.
    TripleInvariant,
    /// A triple without exactly one successor per letter.
    LimitDeterminism,
    /// More ω-branches than states.
    BranchBound,
    /// Peeling verdict differs from membership.
    PeelMismatch,
    /// Acceptance of the co-deterministic DAG differs from membership.
    CodetMismatch,
    /// The rank-based and (N, C, B) complements have different languages.
    Equivalence,
    /// A construction failed outright.
    Construction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<LassoWord>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind)?;
        if let Some(m) = self.method {
            write!(f, " [{m}]")?;
        }
        if let Some(w) = &self.word {
            write!(f, " on {:?}·({:?})^ω", w.stem(), w.period())?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Option<Method>,
    /// Reason the method was not run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub macrostates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rank_used: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_phase: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triples: Option<usize>,
    /// Exact emptiness of the product with the input.
    pub disjoint: bool,
    pub coverage_failures: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub states: usize,
    pub finitely_ambiguous: bool,
    pub lassos: usize,
    pub methods: Vec<MethodReport>,
    /// Exact kv/ncb equivalence verdict, when checked.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_equivalence: Option<bool>,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Wall-clock time per phase, in microseconds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub construction_us: u64,
    pub disjointness_us: u64,
    pub coverage_us: u64,
    pub dag_us: u64,
    pub equivalence_us: u64,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    pub fn method(&self, m: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|r| r.method == Some(m))
    }
}

struct Built {
    method: Method,
    automaton: Nbw,
    ncb: Option<NcbComplement>,
}

/// Checks each requested construction on `a`. Methods that require finite
/// ambiguity are skipped (and reported as such) on other inputs.
pub fn cross_validate(a: &Nbw, cfg: &ValidateConfig) -> Result<Report> {
    a.check_set_capacity()?;
    let n = a.state_count();
    let fa = is_finitely_ambiguous(a)?.finitely_ambiguous;
    let mut report = Report { states: n, finitely_ambiguous: fa, ..Report::default() };
    let mut built: Vec<Built> = Vec::new();
    let mut timings = Timings::default();
    let micros = |t: Instant| t.elapsed().as_micros() as u64;

    let violation = |kind, method: Option<Method>, word: Option<LassoWord>, detail: String| Violation {
        kind,
        method,
        word,
        detail,
    };

    for &method in &cfg.methods {
        let mut mr = MethodReport { method: Some(method), ..MethodReport::default() };
        if method.requires_finite_ambiguity() && !fa {
            mr.skipped = Some("input is not finitely ambiguous".into());
            report.methods.push(mr);
            continue;
        }
        let started = Instant::now();
        let result = match method {
            Method::Kv | Method::KvFa => {
                let variant = if method == Method::Kv { RankVariant::General } else { RankVariant::Fanbw };
                complement_rank_with(a, variant, variant.default_max_rank(n), cfg.rank_state_limit).map(|c| {
                    mr.max_rank_used = Some(c.max_rank_used);
                    if c.max_rank_used > c.max_rank {
                        report.violations.push(violation(
                            ViolationKind::RankBound,
                            Some(method),
                            None,
                            format!("rank {} above {}", c.max_rank_used, c.max_rank),
                        ));
                    }
                    if method == Method::KvFa {
                        let bound = 8u128.checked_pow(n as u32).unwrap_or(u128::MAX);
                        if c.macrostates.len() as u128 > bound {
                            report.violations.push(violation(
                                ViolationKind::StateBound,
                                Some(method),
                                None,
                                format!("{} macrostates above 8^{n}", c.macrostates.len()),
                            ));
                        }
                    }
                    Built { method, automaton: c.automaton, ncb: None }
                })
            }
            Method::Ncb => complement_ncb(a).map(|c| {
                mr.initial_phase = Some(c.initial_count());
                mr.triples = Some(c.triple_count());
                check_ncb(&c, &mut report.violations);
                Built { method, automaton: c.automaton.clone(), ncb: Some(c) }
            }),
        };
        timings.construction_us += micros(started);
        match result {
            Ok(b) => {
                mr.macrostates = b.automaton.state_count();
                let started = Instant::now();
                let product = intersect(a, &b.automaton)?;
                let witness = is_empty(&product).witness;
                mr.disjoint = witness.is_none();
                if let Some(w) = witness {
                    report.violations.push(violation(
                        ViolationKind::NotDisjoint,
                        Some(method),
                        Some(w),
                        "word accepted by the input and its complement".into(),
                    ));
                }
                timings.disjointness_us += micros(started);
                built.push(b);
            }
            Err(e) => {
                report.violations.push(violation(ViolationKind::Construction, Some(method), None, e.to_string()));
            }
        }
        report.methods.push(mr);
    }

    let lassos = distinct_lassos(a.alphabet_size(), cfg.lasso_bound);
    report.lassos = lassos.len();
    for w in &lassos {
        let started = Instant::now();
        let in_a = member(a, w)?;
        let mut verdicts = Vec::with_capacity(built.len());
        for b in &built {
            let in_c = member(&b.automaton, w)?;
            if in_c == in_a {
                let mr = report.methods.iter_mut().find(|r| r.method == Some(b.method)).expect("reported");
                mr.coverage_failures += 1;
                report.violations.push(violation(
                    ViolationKind::Coverage,
                    Some(b.method),
                    Some(w.clone()),
                    if in_a { "accepted by both".into() } else { "accepted by neither".into() },
                ));
            }
            verdicts.push((b.method, in_c));
        }
        for (i, &(m1, v1)) in verdicts.iter().enumerate() {
            for &(m2, v2) in &verdicts[i + 1..] {
                if v1 != v2 {
                    report.violations.push(violation(
                        ViolationKind::Disagreement,
                        None,
                        Some(w.clone()),
                        format!("{m1} {} but {m2} {}", verdict(v1), verdict(v2)),
                    ));
                }
            }
        }
        timings.coverage_us += micros(started);
        if fa {
            let started = Instant::now();
            check_dag(a, w, in_a, &mut report.violations)?;
            timings.dag_us += micros(started);
        }
    }

    if fa && n <= cfg.exact_max_states {
        if let Some(ncb) = built.iter().find_map(|b| b.ncb.as_ref()) {
            let started = Instant::now();
            report.exact_equivalence = Some(check_equivalence(ncb, &built, cfg, &mut report.violations)?);
            timings.equivalence_us += micros(started);
        }
    }
    if cfg.timings {
        report.timings = Some(timings);
    }
    Ok(report)
}

fn verdict(accepted: bool) -> &'static str {
    if accepted {
        "accepts"
    } else {
        "rejects"
    }
}

fn check_ncb(c: &NcbComplement, out: &mut Vec<Violation>) {
    let push = |out: &mut Vec<Violation>, kind, detail: String| {
        out.push(Violation { kind, method: Some(Method::Ncb), word: None, detail })
    };
    if !c.within_bound() {
        push(
            out,
            ViolationKind::StateBound,
            format!("{} macrostates above 2^n + 4^n = {}", c.macrostates.len(), macrostate_bound(c.input_states)),
        );
    }
    for (id, m) in c.macrostates.iter().enumerate() {
        let NcbMacrostate::Triple { n, c: cc, b } = *m else { continue };
        if !(b.is_subset(cc) && cc.is_subset(n)) {
            push(out, ViolationKind::TripleInvariant, format!("{m:?}"));
        }
        for sym in 0..c.automaton.alphabet_size() {
            let succ = c.automaton.succ(id, sym).len();
            if succ != 1 {
                push(out, ViolationKind::LimitDeterminism, format!("{m:?} has {succ} successors on letter {sym}"));
            }
        }
    }
}

fn check_dag(a: &Nbw, w: &LassoWord, in_a: bool, out: &mut Vec<Violation>) -> Result<()> {
    let dag = FoldedDag::new(a, w)?;
    let push = |out: &mut Vec<Violation>, kind, detail: String| {
        out.push(Violation { kind, method: None, word: Some(w.clone()), detail })
    };
    let branches = dag.omega_branches();
    if branches > a.state_count() {
        push(out, ViolationKind::BranchBound, format!("{branches} ω-branches for {} states", a.state_count()));
    }
    let peel = dag.peel_stage();
    if peel.emptied_by(3) == in_a {
        push(out, ViolationKind::PeelMismatch, format!("peel stage {peel:?} but membership {in_a}"));
    }
    if dag.is_accepting() != in_a {
        push(out, ViolationKind::CodetMismatch, format!("membership {in_a}"));
    }
    Ok(())
}

/// Exact comparison through the complement `Z` of the (N, C, B) complement:
/// a rank-based complement `K` with `K ∩ Z = ∅` satisfies `L(K) ⊆ L(ncb)`.
/// Together with the exact disjointness checks this pins both languages
/// between `L(K)` and `Σ^ω \ L(a)`.
fn check_equivalence(ncb: &NcbComplement, built: &[Built], cfg: &ValidateConfig, out: &mut Vec<Violation>) -> Result<bool> {
    let z = match complement_of_ncb(ncb, cfg.oracle_state_limit) {
        Ok(z) => z,
        Err(e @ Error::TooManyStates { .. }) => {
            out.push(Violation { kind: ViolationKind::Construction, method: None, word: None, detail: format!("oracle: {e}") });
            return Ok(false);
        }
        Err(e) => return Err(e),
    };
    let mut equal = true;
    for b in built.iter().filter(|b| b.method != Method::Ncb) {
        if let Some(w) = is_empty(&intersect(&b.automaton, &z)?).witness {
            equal = false;
            out.push(Violation {
                kind: ViolationKind::Equivalence,
                method: Some(b.method),
                word: Some(w),
                detail: "accepted by the rank-based complement but not by the (N, C, B) complement".into(),
            });
        }
    }
    Ok(equal)
}
