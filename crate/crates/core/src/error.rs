//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while loading models, parsing formulas,
/// building automata or evaluating sentences.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text.
    #[error("parse error at line {line}, column {col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    /// Well-formed text describing an invalid structure.
    #[error("validation error: {0}")]
    Validation(String),
    /// A name that was never declared.
    #[error("undeclared {kind} `{name}`")]
    UndeclaredName { kind: &'static str, name: String },
    /// A formula construct that the requested dialect does not admit.
    #[error("dialect error: {0}")]
    Dialect(String),
    /// A track-table strategy was queried beyond its horizon.
    #[error("horizon exceeded: track of length {length} queried on a table of horizon {horizon}")]
    HorizonExceeded { horizon: usize, length: usize },
    /// A strategy was applied to or translated along a track outside its domain.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    /// A formula expected in prenex shape is not.
    #[error("formula is not in prenex shape: {0}")]
    NotPrenex(String),
    /// An enumeration would exceed the configured size bound.
    #[error("domain too large: {count} elements exceed the bound {bound}")]
    DomainTooLarge { count: String, bound: u64 },
    /// The evaluation mode cannot cover the formula.
    #[error("evaluation mode insufficient: {0}")]
    ModeInsufficient(String),
    /// A formula outside the NG-SL grammar was given to the elementary evaluator.
    #[error("formula is not in NG-SL: {0}")]
    NotNgsl(String),
    /// Two formulas compared for equivalence have different free symbols.
    #[error("free symbols differ: {0}")]
    FreeMismatch(String),
    /// A formula expected to be LTL contains quantifiers or bindings.
    #[error("not an LTL formula: {0}")]
    NotLtl(String),
    /// A binding prefix does not cover every agent.
    #[error("binding prefix incomplete: {0}")]
    BindingIncomplete(String),
    /// A quantification prefix does not match the variables of an automaton.
    #[error("prefix mismatch: {0}")]
    PrefixMismatch(String),
    /// A tree automaton expected to be universal has disjunctive transitions.
    #[error("automaton is not universal: {0}")]
    NotUniversal(String),
    /// A tree automaton's alphabet is not a product with its directions.
    #[error("alphabet is not a product with the direction set")]
    AlphabetNotProduct,
    /// A construction outside the implemented cases.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A tree automaton expected to be nondeterministic is alternating.
    #[error("automaton is not nondeterministic: {0}")]
    NotNondeterministic(String),
    /// A play predicate is not determined by bounded prefixes.
    #[error("play predicate is not bounded: {0}")]
    PredicateNotBounded(String),
    /// A formula with free symbols was given where a sentence is required.
    #[error("not a sentence: free symbols {0}")]
    NotASentence(String),
    /// A symbol is free in the formula but absent from the assignment.
    #[error("unbound symbol `{0}`")]
    Unbound(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            message: message.into(),
        }
    }
}
