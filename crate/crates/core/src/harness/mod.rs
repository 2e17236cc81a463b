//! Random instance generation and the cross-validation driver.

mod gen;
pub mod oracle;
mod validate;

pub use gen::{generate, trial_seed, Family, GenConfig, RETRY_BUDGET};
pub use validate::{cross_validate, MethodReport, Report, Timings, ValidateConfig, Violation, ViolationKind};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lang::Method;

/// A batch of seeded trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchConfig {
    /// Trial `i` uses `1 + trial_seed(seed, i) % max_states` states.
    pub max_states: usize,
    pub trials: u64,
    pub seed: u64,
    pub family: Family,
    pub alphabet_size: usize,
    pub transition_density: f64,
    pub accepting_fraction: f64,
    pub validate: ValidateConfig,
}

impl BatchConfig {
    pub fn new(max_states: usize, trials: u64, seed: u64, family: Family) -> Self {
        let base = GenConfig::new(1, family, 0);
        BatchConfig {
            max_states,
            trials,
            seed,
            family,
            alphabet_size: base.alphabet_size,
            transition_density: base.transition_density,
            accepting_fraction: base.accepting_fraction,
            validate: ValidateConfig::default(),
        }
    }

    pub fn with_methods(mut self, methods: &[Method]) -> Self {
        self.validate.methods = methods.to_vec();
        self
    }

    /// Generator configuration of trial `index`; replaying it regenerates the automaton.
    pub fn trial_config(&self, index: u64) -> GenConfig {
        let seed = trial_seed(self.seed, index);
        GenConfig {
            n: 1 + (seed % self.max_states.max(1) as u64) as usize,
            alphabet_size: self.alphabet_size,
            transition_density: self.transition_density,
            accepting_fraction: self.accepting_fraction,
            seed,
            family: self.family,
        }
    }
}

/// One line of a batch report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub config: GenConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    /// Generation or validation failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn is_clean(&self) -> bool {
        self.error.is_none() && self.report.as_ref().is_some_and(Report::is_clean)
    }
}

pub fn run_trial(cfg: &BatchConfig, index: u64) -> TrialRecord {
    let config = cfg.trial_config(index);
    let outcome: Result<Report> = generate(&config).and_then(|a| cross_validate(&a, &cfg.validate));
    let (report, error) = match outcome {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    TrialRecord { trial: index, config, report, error }
}

/// Trials in index order.
pub fn run_batch(cfg: &BatchConfig) -> impl Iterator<Item = TrialRecord> + '_ {
    (0..cfg.trials).map(move |i| run_trial(cfg, i))
}
