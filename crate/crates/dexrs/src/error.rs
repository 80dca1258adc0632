//! Crate-wide error type.

use thiserror::Error;

use crate::syntax::ParseError;

/// Errors reported by the toolkit's operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Two structures (or a rule and a structure) disagree on the schema.
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    /// A fact mentions a relation the schema does not declare.
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    /// A fact or atom has the wrong number of arguments.
    #[error("relation `{relation}` has arity {expected}, got {got} arguments")]
    Arity {
        relation: String,
        expected: usize,
        got: usize,
    },
    /// A requested domain is not a subset of the structure's domain.
    #[error("domain is not a subset of the structure's domain (missing `{0}`)")]
    DomainNotSubset(String),
    /// The facts of one structure are not contained in another where required.
    #[error("structure is not a subset: {0}")]
    NotSubset(String),
    /// A substructure whose domain must equal its active domain does not satisfy that.
    #[error("domain element `{0}` does not occur in any fact")]
    DomainNotActive(String),
    /// A rule constructor was handed malformed input.
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    /// A structure offered as a product factor does not satisfy the rule set.
    #[error("input structure is not a model of the rule set (rule {rule_index} is violated by {side})")]
    InputNotModel { side: String, rule_index: usize },
    /// A structure was expected to be a direct product but its domain does not
    /// consist of pair constants.
    #[error("constant `{0}` is not a pair constant; the structure is not a direct product")]
    NotAProduct(String),
    /// A search gave up because its budget ran out.
    #[error("budget exhausted: {0}")]
    Exhausted(String),
    /// A (rule, assignment) pair offered to trigger application is not a trigger.
    #[error("not a trigger: {0}")]
    NotATrigger(String),
    /// A conjunction offered as a negated diagram part is satisfied by the
    /// reference structure.
    #[error("conjunction is not negative: `{0}` is satisfiable in the reference structure")]
    GNotNegative(String),
    /// A profile with zero quantified variables or zero disjuncts.
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    /// A rule set offered to the rewriter contains a non-guarded rule.
    #[error("rule {0} is not guarded")]
    NotGuarded(usize),
    /// A candidate space is too large to enumerate exhaustively.
    #[error("candidate space too large: {0}")]
    CandidateSpaceTooLarge(String),
    /// Text input could not be parsed.
    #[error("{0}")]
    Parse(#[from] ParseError),
    /// An input file could not be read.
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
