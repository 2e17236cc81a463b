//! Seeded random automata.
//!
//! All randomness comes from ChaCha8 seeded with `GenConfig::seed`, so an
//! automaton is a pure function of its configuration. Per-trial seeds are
//! derived with [`trial_seed`], which draws from a separate ChaCha8 stream per
//! trial index; a failing trial is replayed from its recorded seed alone.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ambiguity::is_finitely_ambiguous;
use crate::error::{Error, Result};
use crate::nbw::{complete, Nbw};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    General,
    /// At most one predecessor per state and letter before completion.
    ReverseDeterministic,
    /// General automata rejection-sampled until finitely ambiguous.
    FanbwFiltered,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::General => "general",
            Family::ReverseDeterministic => "reverse-deterministic",
            Family::FanbwFiltered => "fanbw-filtered",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "general" => Ok(Family::General),
            "reverse-deterministic" => Ok(Family::ReverseDeterministic),
            "fanbw-filtered" => Ok(Family::FanbwFiltered),
            other => Err(format!(
                "unknown family `{other}` (expected general, reverse-deterministic or fanbw-filtered)"
            )),
        }
    }
}

/// Rejection-sampling attempts for [`Family::FanbwFiltered`].
pub const RETRY_BUDGET: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: usize,
    pub alphabet_size: usize,
    /// Expected number of successors per (state, letter).
    pub transition_density: f64,
    /// Probability of each state being accepting.
    pub accepting_fraction: f64,
    pub seed: u64,
    pub family: Family,
}

impl GenConfig {
    pub fn new(n: usize, family: Family, seed: u64) -> Self {
        GenConfig { n, alphabet_size: 2, transition_density: 1.25, accepting_fraction: 0.35, seed, family }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.alphabet_size == 0 {
            return bad("alphabet must not be empty");
        }
        if !(self.transition_density > 0.0 && self.transition_density.is_finite()) {
            return bad("transition density must be positive");
        }
        if !(0.0..=1.0).contains(&self.accepting_fraction) {
            return bad("accepting fraction must lie in [0, 1]");
        }
        Ok(())
    }

    fn alphabet(&self) -> Vec<String> {
        (0..self.alphabet_size)
            .map(|i| match u8::try_from(i) {
                Ok(c) if i < 26 => char::from(b'a' + c).to_string(),
                _ => format!("s{i}"),
            })
            .collect()
    }
}

/// Seed of trial `index` in a batch started from `base`.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng.next_u64()
}

/// State 0 is the only initial state. With density at least 1 every
/// (state, letter) gets one uniform successor plus each other state with
/// probability `(density - 1) / (n - 1)`, so no completion is needed;
/// below 1 successors are drawn independently and the result is completed.
fn general(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Nbw {
    let n = cfg.n;
    let mut a = Nbw::new(cfg.alphabet(), n);
    a.add_initial(0);
    for q in 0..n {
        a.set_accepting(q, rng.random_bool(cfg.accepting_fraction));
    }
    let d = cfg.transition_density;
    for q in 0..n {
        for s in 0..cfg.alphabet_size {
            let mut targets = Vec::new();
            if d >= 1.0 {
                let first = rng.random_range(0..n);
                targets.push(first);
                let p = if n > 1 { ((d - 1.0) / (n - 1) as f64).min(1.0) } else { 0.0 };
                for t in (0..n).filter(|&t| t != first) {
                    if rng.random_bool(p) {
                        targets.push(t);
                    }
                }
            } else {
                let p = (d / n as f64).min(1.0);
                targets.extend((0..n).filter(|_| rng.random_bool(p)));
            }
            a.set_successors(q, s, targets);
        }
    }
    complete(&a)
}

/// Every (target, letter) receives at most one predecessor, present with
/// probability `min(density, 1)`.
fn reverse_deterministic(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Nbw {
    let n = cfg.n;
    let mut a = Nbw::new(cfg.alphabet(), n);
    a.add_initial(0);
    for q in 0..n {
        a.set_accepting(q, rng.random_bool(cfg.accepting_fraction));
    }
    let p = cfg.transition_density.min(1.0);
    for s in 0..cfg.alphabet_size {
        for t in 0..n {
            if rng.random_bool(p) {
                let src = rng.random_range(0..n);
                a.add_transition(src, s, t);
            }
        }
    }
    complete(&a)
}

pub fn generate(cfg: &GenConfig) -> Result<Nbw> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.family {
        Family::General => Ok(general(cfg, &mut rng)),
        Family::ReverseDeterministic => Ok(reverse_deterministic(cfg, &mut rng)),
        Family::FanbwFiltered => {
            for _ in 0..RETRY_BUDGET {
                let a = general(cfg, &mut rng);
                if is_finitely_ambiguous(&a)?.finitely_ambiguous {
                    return Ok(a);
                }
            }
            Err(Error::RetryBudgetExhausted(RETRY_BUDGET))
        }
    }
}
