//! SAT-based subsumption and subsumption resolution for first-order
//! clauses.
//!
//! A check goes through three stages: cheap predicate filters
//! ([`filter`]), a match set of literal-to-literal substitutions
//! ([`matching`]) and a small constraint system ([`encoder`]) solved by a
//! dedicated CDCL solver ([`solver`]). [`simplify`] wires the stages into
//! forward and backward simplification loops; [`oracle`] holds brute-force
//! reference deciders used by the tests and the CLI, [`fuzz`] and
//! [`replay`] drive them over generated pairs and recorded check logs.

pub mod encoder;
pub mod error;
pub mod filter;
pub mod fuzz;
pub mod matching;
pub mod oracle;
pub mod parser;
pub mod replay;
pub mod simplify;
pub mod solver;
pub mod substitution;
pub mod symbol;
pub mod term;

pub use encoder::{
    choose_encoding, encode_sr_direct, encode_sr_indirect, encode_subsumption, reconstruct, Constraint,
    ConstraintSystem, DecisionTree, EncodingChoice, EncodingKind, Lit, Role, Witness,
};
pub use error::{EncodeError, LogError, OracleError, ParseError};
pub use fuzz::{dense_pair, fuzz, Checker, FuzzConfig, FuzzReport, PairGenerator, Signature};
pub use filter::{prune_after_match_set, HeaderTable, PruneMode};
pub use matching::{match_literal, BoolVar, Match, MatchSet, Polarity};
pub use oracle::{oracle_sr, oracle_subsumes};
pub use parser::{parse_clause, parse_clause_in};
pub use replay::{parse_log, replay, CheckRecord, Expected, RecordOutcome, ReplayConfig, ReplaySummary, StatsRow};
pub use simplify::{
    BackwardOutcome, CheckState, ClauseSet, ForwardOutcome, Resolution, Simplifier, SimplifyConfig, SimplifyStats, Stage,
};
pub use solver::{Outcome, Report, Solver, SolverOptions, SolverStats, TraceEvent};
pub use substitution::Substitution;
pub use symbol::{Scope, SymbolTable};
pub use term::{normalize, Clause, Literal, Normalized, Term};
