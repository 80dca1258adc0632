//! Relational schemas: finite sets of relation symbols with positive arities.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A relation symbol together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
}

/// A finite relational schema. Relation names are unique; arities are >= 1.
///
/// The declaration order is preserved and is the canonical print order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Schema {
    relations: Vec<Relation>,
}

impl Schema {
    /// Builds a schema from `(name, arity)` pairs, rejecting duplicates and
    /// zero arities.
    pub fn new<S: Into<String>>(relations: impl IntoIterator<Item = (S, usize)>) -> Result<Schema> {
        let mut out: Vec<Relation> = Vec::new();
        for (name, arity) in relations {
            let name = name.into();
            if arity == 0 {
                return Err(Error::Arity {
                    relation: name,
                    expected: 1,
                    got: 0,
                });
            }
            if out.iter().any(|r| r.name == name) {
                return Err(Error::InvalidRule(format!(
                    "relation `{name}` declared twice in schema"
                )));
            }
            out.push(Relation { name, arity });
        }
        Ok(Schema { relations: out })
    }

    /// Convenience constructor wrapped in an `Arc`, the form the rest of the
    /// crate shares.
    pub fn shared<S: Into<String>>(
        relations: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Arc<Schema>> {
        Ok(Arc::new(Schema::new(relations)?))
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.relations
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.arity)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arity(name).is_some()
    }

    /// The maximal arity over all relations (`0` for the empty schema).
    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Checks that a fact or atom is well-typed and returns the arity.
    pub fn check(&self, relation: &str, got: usize) -> Result<usize> {
        match self.arity(relation) {
            None => Err(Error::UnknownRelation(relation.to_string())),
            Some(expected) if expected != got => Err(Error::Arity {
                relation: relation.to_string(),
                expected,
                got,
            }),
            Some(expected) => Ok(expected),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "schema {{")?;
        for r in &self.relations {
            write!(f, " {}/{}", r.name, r.arity)?;
        }
        write!(f, " }}")
    }
}
