//! Complementation of nondeterministic Büchi automata, with constructions
//! specialized to finitely ambiguous automata through co-deterministic run DAGs.
//!
//! * [`rank`]: rank-based complement, general (ranks up to `2n`) and for
//!   finitely ambiguous input (ranks up to 2).
//! * [`ncb`]: the (N, C, B) complement for finitely ambiguous input.
//! * [`codet`]: the reduced successor function and folded co-deterministic DAGs.
//! * [`ambiguity`]: deciding finite ambiguity.
//! * [`lang`]: intersection, emptiness, membership and containment.
//! * [`harness`]: random automata and cross-validation.

pub mod ambiguity;
pub mod codet;
pub mod error;
pub mod fixtures;
pub mod format;
mod graph;
pub mod harness;
pub mod lang;
pub mod lasso;
pub mod nbw;
pub mod ncb;
pub mod rank;
pub mod slice;
pub mod stateset;

pub use ambiguity::{count_accepting_run_prefixes, is_finitely_ambiguous, AmbiguityVerdict, AmbiguityWitness};
pub use codet::{
    build_codet_prefix, count_omega_branches, is_codet_accepting, min_predecessor, peel_stage, reduced_successors,
    CoDetPrefix, FoldedDag, LevelContext, PeelStage,
};
pub use error::{Error, Result};
pub use format::{parse_nbw, to_text};
pub use lang::{complement, contains, intersect, is_empty, member, Complement, ComplementStats, Containment, Method};
pub use lasso::LassoWord;
pub use nbw::{complete, successors, trim_useful, Nbw, State, Symbol};
pub use ncb::{complement_ncb, ncb_successors, subsumes, NcbComplement, NcbMacrostate};
pub use rank::{complement_rank, ranking_successors, KvMacrostate, LevelRanking, RankComplement, RankVariant};
pub use slice::{slice_successor, Slice};
pub use stateset::StateSet;
