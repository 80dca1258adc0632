//! dexrs — a reasoning toolkit for disjunctive existential rules over finite
//! relational structures.
//!
//! The crate revolves around a small stack of concepts:
//!
//! * [`Schema`], [`Structure`]: finite relational structures with named
//!   constants ([`structure`]).
//! * [`Dexr`], [`DisjunctiveDependency`]: rules `body -> disjunct | ...`
//!   whose disjuncts may introduce existential variables, and the superclass
//!   allowing equality disjuncts and empty heads ([`rule`]).
//! * A text format for rules and structures with a canonical printer
//!   ([`syntax`]).
//! * Homomorphism search between structures and from rule bodies into
//!   structures ([`homs`]).
//! * The disjunctive chase: branching repair of a structure into models
//!   ([`chase`]), and direct/repairable products built on it ([`product`]).
//! * Diagrams of substructures and compatibility checks ([`diagram`]).
//! * Three-valued entailment between rule sets ([`entailment`]).
//! * Rewriting guarded rule sets into linear ones by bounded enumeration
//!   ([`rewrite`]).
//!
//! Every search in the crate is deterministic: structures and rules are kept
//! in sorted canonical forms, so equal inputs give byte-equal outputs.

pub mod chase;
pub mod cli;
pub mod diagram;
pub mod entailment;
mod error;
pub mod homs;
pub mod product;
pub mod rewrite;
mod rule;
mod schema;
mod structure;
pub mod syntax;

pub use error::{Error, Result};
pub use rule::{
    Atom, DdDisjunct, Dexr, Disjunct, DisjunctiveDependency, RuleProfile, Term, Var,
};
pub use schema::{Relation, Schema};
pub use structure::{Const, Structure};
