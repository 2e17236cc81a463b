use thiserror::Error;

use crate::nbw::State;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("state {state} out of range (automaton has {count} states)")]
    StateOutOfRange { state: State, count: usize },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol index {symbol} out of range (alphabet has {size} symbols)")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("lasso loop must be nonempty")]
    EmptyLoop,

    #[error("state {0} is not a successor of the level")]
    NotASuccessor(State),

    #[error("state set is not contained in the level")]
    NotASubset,

    #[error("automaton has {count} states; set-based operations support at most {max}")]
    TooManyStates { count: usize, max: usize },

    #[error("automaton is not finitely ambiguous")]
    NotFinitelyAmbiguous,

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("no finitely ambiguous automaton found after {0} attempts")]
    RetryBudgetExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
