use std::fmt;

use thiserror::Error;

use crate::syntax::PredicateSymbol;

/// A syntax error with a 1-based source location.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("sort violation: cannot use {term} (object sort) where an integer is required")]
    SortViolation { term: String },
    #[error("arity mismatch: {symbol} cannot be replaced by {target} of arity {arity}")]
    ArityMismatch {
        symbol: PredicateSymbol,
        target: String,
        arity: usize,
    },
    #[error("term {0} is not precomputed")]
    NotPrecomputed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("input symbol {0} occurs in the head of a rule")]
    InputInHead(PredicateSymbol),
    #[error("{0} is declared both as input and as output")]
    InputAndOutput(PredicateSymbol),
    #[error("{0} is an input symbol and has no completed definition")]
    InputSymbol(PredicateSymbol),
    #[error("rule `{0}` is a constraint")]
    UnexpectedConstraint(String),
    #[error("rule `{0}` is not a constraint")]
    NotAConstraint(String),
    #[error("the program is not tight: positive cycle {}", display_cycle(.0))]
    NotTight(Vec<PredicateSymbol>),
    #[error("the program uses private recursion: {0}")]
    PrivateRecursion(String),
}

fn display_cycle(cycle: &[PredicateSymbol]) -> String {
    let mut parts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
    if let Some(first) = cycle.first() {
        parts.push(first.to_string());
    }
    parts.join(" -> ")
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{line}:{column}: variable `{name}` must start with one of I, J, K, L, M, N (integer) or U, V, W, X, Y, Z (object)")]
    BadVariableInitial {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("assumption {index} mentions output symbol {symbol}")]
    OutputInAssumption {
        index: usize,
        symbol: PredicateSymbol,
    },
    #[error("placeholder `{0}` is declared more than once")]
    DuplicatePlaceholder(String),
    #[error("{line}:{column}: {source}")]
    Sort {
        line: usize,
        column: usize,
        source: LogicError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} needs {required} candidates, exceeding the cap of {cap}")]
    CapExceeded {
        what: String,
        required: u128,
        cap: u128,
    },
    #[error("placeholder `{0}` has no value in the valuation")]
    MissingValuation(String),
    #[error("placeholder `{0}` is mapped to another placeholder")]
    PlaceholderValue(String),
    #[error("input atom {0} does not belong to an input symbol")]
    NotAnInputAtom(String),
    #[error("formula is not closed: free variable {0}")]
    FreeVariable(String),
    #[error("bad integer range {lo}..{hi}")]
    BadRange { lo: i64, hi: i64 },
    #[error("{0} is outside the bounded universe")]
    OutsideUniverse(String),
    #[error("integer placeholder `{name}` is mapped to {value}, which is not a numeral")]
    NotANumeral { name: String, value: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TptpError {
    #[error("formula `{formula}` has free variable {variable}")]
    NotClosed { formula: String, variable: String },
    #[error("formula `{formula}` contains predicate variable {variable}")]
    PredicateVariable { formula: String, variable: String },
    #[error(transparent)]
    Sort(#[from] LogicError),
}

#[derive(Debug, Error)]
pub enum ProverError {
    #[error("time limit must be positive")]
    NonPositiveTimeLimit,
    #[error("could not write task file {path}: {source}")]
    WriteTask {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Tptp(#[from] TptpError),
}

/// Umbrella error for the end-to-end pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}: {source}")]
    ProgramParse { file: String, source: ParseError },
    #[error("{file}: {source}")]
    SpecParse { file: String, source: SpecError },
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Tptp(#[from] TptpError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}
