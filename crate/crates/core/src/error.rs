use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("symbol `{name}` used with arity {found}, previously {expected}")]
    ArityMismatch {
        name: String,
        expected: u32,
        found: u32,
    },
    #[error("clause is a tautology (contains a literal and its negation)")]
    Tautology,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("side literal {side} has no admissible match; the instance should have been pruned")]
    EmptyCompleteness { side: usize },
    #[error("model binds incompatible substitutions")]
    InternalInconsistency,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance of size {size} exceeds the oracle bound {bound}")]
    BoundExceeded { size: usize, bound: usize },
}

/// Failure while reading a check log.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Clause {
        line: usize,
        #[source]
        source: ParseError,
    },
}
