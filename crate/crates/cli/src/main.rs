use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fabc_core::harness::{run_batch, BatchConfig, Family};
use fabc_core::ncb::macrostate_bound;
use fabc_core::{
    complement, contains, count_omega_branches, is_empty, is_finitely_ambiguous, member, parse_nbw, peel_stage,
    to_text, LassoWord, Method, Nbw, PeelStage,
};

/// Complementation and language queries for Büchi automata.
#[derive(Parser)]
#[command(name = "fabc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the complement of an automaton.
    Complement {
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Print size metrics to stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Decide finite ambiguity; exits 1 when infinitely ambiguous.
    Ambiguity {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decide whether stem·loop^ω is accepted.
    Member {
        #[arg(long = "in")]
        input: PathBuf,
        /// Symbols, whitespace separated or one character each.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        stem: String,
        #[arg(long = "loop", allow_hyphen_values = true)]
        period: String,
    },
    /// Decide L(lhs) ⊆ L(rhs); exits 1 with a counterexample otherwise.
    Contains {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long, value_parser = parse_method, default_value = "ncb")]
        method: Method,
        /// Disable subsumption pruning (ncb only).
        #[arg(long)]
        no_prune: bool,
    },
    /// Decide emptiness; exits 1 with an accepted lasso otherwise.
    Empty {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Co-deterministic DAG diagnostics for stem·loop^ω.
    Dag {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        stem: String,
        #[arg(long = "loop", allow_hyphen_values = true)]
        period: String,
    },
    /// Cross-validate the constructions on seeded random automata, one JSON record per trial.
    Validate {
        /// Trial `i` has between 1 and `n` states.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_family, default_value = "fanbw-filtered")]
        family: Family,
        #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "kv,kv-fa,ncb")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 3)]
        lasso_bound: usize,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        accepting_fraction: Option<f64>,
        /// Abort the general rank-based construction beyond this many macrostates.
        #[arg(long)]
        rank_state_limit: Option<usize>,
    },
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse()
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse()
}

fn read_nbw(path: &Path) -> Result<Nbw> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_nbw(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_lasso(a: &Nbw, stem: &str, period: &str) -> Result<LassoWord> {
    let stem = LassoWord::parse_symbols(a, stem)?;
    let period = LassoWord::parse_symbols(a, period)?;
    Ok(LassoWord::new(stem, period)?)
}

fn verdict(holds: bool) -> ExitCode {
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(command: Command) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match command {
        Command::Complement { method, input, out: path, stats } => {
            let a = read_nbw(&input)?;
            let c = complement(&a, method)?;
            fs::write(&path, to_text(&c.automaton)).with_context(|| format!("writing {}", path.display()))?;
            if stats {
                let s = &c.stats;
                eprintln!("method: {method}");
                eprintln!("input states: {}", s.input_states);
                eprintln!("macrostates: {}", s.macrostates);
                eprintln!("transitions: {}", s.transitions);
                if let Some(r) = s.max_rank_used {
                    eprintln!("max rank used: {r}");
                }
                if let (Some(init), Some(triples)) = (s.initial_phase, s.triples) {
                    let bound = macrostate_bound(s.input_states);
                    let ok = if (s.macrostates as u128) <= bound { "ok" } else { "exceeded" };
                    eprintln!("initial macrostates: {init}");
                    eprintln!("triples: {triples}");
                    eprintln!("bound 2^n + 4^n: {bound} ({ok})");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ambiguity { input } => {
            let a = read_nbw(&input)?;
            let v = is_finitely_ambiguous(&a)?;
            if v.finitely_ambiguous {
                writeln!(out, "finite")?;
            } else {
                writeln!(out, "infinite")?;
                if let Some(w) = v.witness {
                    let name = |q| format!("q{q}");
                    writeln!(
                        out,
                        "witness: {} loops to itself and branches to {} on {}",
                        name(w.state),
                        name(w.target),
                        w.lasso().display(&a)
                    )?;
                }
            }
            Ok(verdict(v.finitely_ambiguous))
        }
        Command::Member { input, stem, period } => {
            let a = read_nbw(&input)?;
            let w = read_lasso(&a, &stem, &period)?;
            let accepted = member(&a, &w)?;
            writeln!(out, "{}", if accepted { "accepted" } else { "rejected" })?;
            Ok(verdict(accepted))
        }
        Command::Contains { lhs, rhs, method, no_prune } => {
            let l = read_nbw(&lhs)?;
            let r = read_nbw(&rhs)?;
            let c = contains(&l, &r, method, !no_prune)?;
            match &c.counterexample {
                None => writeln!(out, "contained")?,
                Some(w) => writeln!(out, "not contained: {}", w.display(&l))?,
            }
            Ok(verdict(c.holds()))
        }
        Command::Empty { input } => {
            let a = read_nbw(&input)?;
            let e = is_empty(&a);
            match &e.witness {
                None => writeln!(out, "empty")?,
                Some(w) => writeln!(out, "nonempty: {}", w.display(&a))?,
            }
            Ok(verdict(e.is_empty()))
        }
        Command::Dag { input, stem, period } => {
            let a = read_nbw(&input)?;
            let w = read_lasso(&a, &stem, &period)?;
            writeln!(out, "omega branches: {}", count_omega_branches(&a, &w)?)?;
            match peel_stage(&a, &w)? {
                PeelStage::EmptiedAt(k) => writeln!(out, "peel: emptied at stage {k}")?,
                PeelStage::Survives => writeln!(out, "peel: survives")?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate {
            n,
            trials,
            seed,
            family,
            methods,
            lasso_bound,
            alphabet_size,
            density,
            accepting_fraction,
            rank_state_limit,
        } => {
            let mut cfg = BatchConfig::new(n, trials, seed, family).with_methods(&methods);
            cfg.alphabet_size = alphabet_size;
            if let Some(d) = density {
                cfg.transition_density = d;
            }
            if let Some(f) = accepting_fraction {
                cfg.accepting_fraction = f;
            }
            cfg.validate.lasso_bound = lasso_bound;
            cfg.validate.rank_state_limit = rank_state_limit;
            if n == 0 {
                anyhow::bail!("--n must be at least 1");
            }
            cfg.trial_config(0).validate()?;
            let mut clean = true;
            for record in run_batch(&cfg) {
                clean &= record.is_clean();
                writeln!(out, "{}", serde_json::to_string(&record)?)?;
            }
            Ok(verdict(clean))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
