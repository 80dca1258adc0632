//! Finite relational structures with named constants.
//!
//! A structure fixes a schema, a finite domain of constants, and for each
//! relation a set of tuples over the domain. Constants name themselves:
//! distinct names are distinct elements. Fact sets are stored sorted so that
//! all iteration (and hence every search built on top) is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::schema::Schema;

/// A domain element, identified by its name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Const(String);

impl Const {
    pub fn new(name: impl Into<String>) -> Const {
        Const(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True when the name needs quoting in canonical text output. Names in
    /// the reserved `_` namespace print bare: they are generated, never
    /// parsed back, and quoting would not change that.
    pub fn needs_quoting(&self) -> bool {
        let mut chars = self.0.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() || c == '_' => {
                chars.any(|c| !(c.is_ascii_alphanumeric() || c == '_'))
            }
            _ => true,
        }
    }

    /// True when the name lies in a namespace reserved for generated
    /// constants (chase nulls `_n1, _n2, ...`, frozen bodies `_f1, ...`).
    pub fn is_reserved(&self) -> bool {
        self.0.starts_with('_')
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.needs_quoting() {
            write!(f, "\"{}\"", self.0.replace('\\', "\\\\").replace('"', "\\\""))
        } else {
            f.write_str(&self.0)
        }
    }
}

impl From<&str> for Const {
    fn from(s: &str) -> Const {
        Const::new(s)
    }
}

/// A finite structure over a fixed schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    schema: Arc<Schema>,
    domain: BTreeSet<Const>,
    /// Relation name -> sorted set of tuples. Only non-empty relations are
    /// stored as keys.
    facts: BTreeMap<String, BTreeSet<Vec<Const>>>,
}

impl Structure {
    /// The empty structure over a schema.
    pub fn empty(schema: Arc<Schema>) -> Structure {
        Structure {
            schema,
            domain: BTreeSet::new(),
            facts: BTreeMap::new(),
        }
    }

    /// Builds a structure from an explicit domain and a list of facts. All
    /// fact arguments must lie in the domain and match the schema.
    pub fn new(
        schema: Arc<Schema>,
        domain: impl IntoIterator<Item = Const>,
        facts: impl IntoIterator<Item = (String, Vec<Const>)>,
    ) -> Result<Structure> {
        let mut s = Structure {
            schema,
            domain: domain.into_iter().collect(),
            facts: BTreeMap::new(),
        };
        for (rel, tuple) in facts {
            s.schema.check(&rel, tuple.len())?;
            for c in &tuple {
                if !s.domain.contains(c) {
                    return Err(Error::DomainNotSubset(c.name().to_string()));
                }
            }
            s.facts.entry(rel).or_default().insert(tuple);
        }
        Ok(s)
    }

    /// Builds a structure from facts alone; the domain is the active domain.
    pub fn from_facts(
        schema: Arc<Schema>,
        facts: impl IntoIterator<Item = (String, Vec<Const>)>,
    ) -> Result<Structure> {
        let facts: Vec<(String, Vec<Const>)> = facts.into_iter().collect();
        let domain: BTreeSet<Const> = facts
            .iter()
            .flat_map(|(_, tuple)| tuple.iter().cloned())
            .collect();
        Structure::new(schema, domain, facts)
    }

    /// The critical structure with `k` elements: every relation holds every
    /// tuple over the domain `{c1, .., ck}`.
    pub fn critical(schema: Arc<Schema>, k: usize) -> Structure {
        let domain: Vec<Const> = (1..=k).map(|i| Const::new(format!("c{i}"))).collect();
        let mut s = Structure {
            schema: schema.clone(),
            domain: domain.iter().cloned().collect(),
            facts: BTreeMap::new(),
        };
        for rel in schema.relations() {
            let mut tuples = BTreeSet::new();
            for t in tuples_over(&domain, rel.arity) {
                tuples.insert(t);
            }
            if !tuples.is_empty() {
                s.facts.insert(rel.name.clone(), tuples);
            }
        }
        s
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn domain(&self) -> &BTreeSet<Const> {
        &self.domain
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    /// The set of constants that occur in at least one fact.
    pub fn active_domain(&self) -> BTreeSet<Const> {
        self.facts
            .values()
            .flatten()
            .flat_map(|tuple| tuple.iter().cloned())
            .collect()
    }

    /// True when the domain has no inactive elements.
    pub fn domain_is_active(&self) -> bool {
        self.active_domain() == self.domain
    }

    pub fn tuples(&self, relation: &str) -> impl Iterator<Item = &Vec<Const>> {
        self.facts.get(relation).into_iter().flatten()
    }

    pub fn has_fact(&self, relation: &str, tuple: &[Const]) -> bool {
        self.facts
            .get(relation)
            .is_some_and(|set| set.contains(tuple))
    }

    /// All facts in sorted order, as `(relation, tuple)` pairs.
    pub fn facts(&self) -> impl Iterator<Item = (&str, &Vec<Const>)> {
        self.facts
            .iter()
            .flat_map(|(rel, set)| set.iter().map(move |t| (rel.as_str(), t)))
    }

    pub fn fact_count(&self) -> usize {
        self.facts.values().map(|set| set.len()).sum()
    }

    /// Inserts a fact, extending the domain with any new constants.
    pub fn add_fact(&mut self, relation: &str, tuple: Vec<Const>) -> Result<bool> {
        self.schema.check(relation, tuple.len())?;
        for c in &tuple {
            self.domain.insert(c.clone());
        }
        Ok(self.facts.entry(relation.to_string()).or_default().insert(tuple))
    }

    /// Inserts a domain element without any fact.
    pub fn add_domain_element(&mut self, c: Const) {
        self.domain.insert(c);
    }

    /// The induced substructure on `domain`: that domain, with every fact of
    /// `self` whose arguments all lie in it.
    pub fn induced_substructure(&self, domain: &BTreeSet<Const>) -> Result<Structure> {
        if let Some(missing) = domain.iter().find(|c| !self.domain.contains(*c)) {
            return Err(Error::DomainNotSubset(missing.name().to_string()));
        }
        let mut facts = BTreeMap::new();
        for (rel, set) in &self.facts {
            let restricted: BTreeSet<Vec<Const>> = set
                .iter()
                .filter(|tuple| tuple.iter().all(|c| domain.contains(c)))
                .cloned()
                .collect();
            if !restricted.is_empty() {
                facts.insert(rel.clone(), restricted);
            }
        }
        Ok(Structure {
            schema: self.schema.clone(),
            domain: domain.clone(),
            facts,
        })
    }

    /// Fact containment: every fact of `self` is a fact of `other`.
    ///
    /// This is containment of fact sets only; domains may differ.
    pub fn is_subset_of(&self, other: &Structure) -> Result<bool> {
        self.check_same_schema(other)?;
        Ok(self.facts.iter().all(|(rel, set)| {
            set.iter()
                .all(|t| other.facts.get(rel).is_some_and(|o| o.contains(t)))
        }))
    }

    /// Induced-substructure test: the domain is contained in `other`'s and
    /// the facts are exactly `other`'s facts restricted to that domain.
    pub fn is_induced_substructure_of(&self, other: &Structure) -> Result<bool> {
        self.check_same_schema(other)?;
        if !self.domain.is_subset(&other.domain) {
            return Ok(false);
        }
        Ok(*self == other.induced_substructure(&self.domain)?)
    }

    pub fn check_same_schema(&self, other: &Structure) -> Result<()> {
        if self.schema != other.schema {
            return Err(Error::SchemaMismatch(format!(
                "{} vs {}",
                self.schema, other.schema
            )));
        }
        Ok(())
    }
}

/// All tuples of the given length over `domain`, in lexicographic order.
pub fn tuples_over(domain: &[Const], len: usize) -> Vec<Vec<Const>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * domain.len());
        for prefix in &out {
            for c in domain {
                let mut t = prefix.clone();
                t.push(c.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

impl fmt::Display for Structure {
    /// Canonical text form: an optional `domain` block (only when the domain
    /// has inactive elements), then one fact per line in sorted order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.domain_is_active() {
            write!(f, "domain {{")?;
            for c in &self.domain {
                write!(f, " {c}")?;
            }
            write!(f, " }}")?;
            first = false;
        }
        for (rel, tuple) in self.facts() {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{rel}(")?;
            for (i, c) in tuple.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ").")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Arc<Schema> {
        Schema::shared([("R", 2), ("S", 1)]).unwrap()
    }

    fn c(name: &str) -> Const {
        Const::new(name)
    }

    #[test]
    fn active_domain_and_inactive_elements() {
        let s = Structure::new(
            schema(),
            [c("a"), c("b"), c("idle")],
            [("R".to_string(), vec![c("a"), c("b")])],
        )
        .unwrap();
        assert_eq!(s.active_domain(), [c("a"), c("b")].into_iter().collect());
        assert!(!s.domain_is_active());
        let empty = Structure::empty(schema());
        assert!(empty.active_domain().is_empty());
    }

    #[test]
    fn rejects_facts_outside_domain() {
        let err = Structure::new(schema(), [c("a")], [("S".to_string(), vec![c("b")])]);
        assert!(matches!(err, Err(Error::DomainNotSubset(_))));
    }

    #[test]
    fn induced_substructure_restricts_facts() {
        let i = Structure::from_facts(
            schema(),
            [
                ("R".to_string(), vec![c("a"), c("a")]),
                ("R".to_string(), vec![c("a"), c("b")]),
            ],
        )
        .unwrap();
        let j = i
            .induced_substructure(&[c("a")].into_iter().collect())
            .unwrap();
        assert_eq!(j.fact_count(), 1);
        assert!(j.has_fact("R", &[c("a"), c("a")]));
        // Subset holds, but J is not the substructure induced on {a,b}.
        assert!(j.is_subset_of(&i).unwrap());
        assert_ne!(
            i.induced_substructure(&[c("a"), c("b")].into_iter().collect())
                .unwrap(),
            j
        );
        // Induced substructures are in particular fact subsets.
        assert!(j.is_induced_substructure_of(&i).unwrap());
        // Unknown domain elements are rejected.
        assert!(matches!(
            i.induced_substructure(&[c("z")].into_iter().collect()),
            Err(Error::DomainNotSubset(_))
        ));
    }

    #[test]
    fn subset_does_not_imply_induced() {
        let i = Structure::from_facts(
            schema(),
            [
                ("R".to_string(), vec![c("a"), c("a")]),
                ("R".to_string(), vec![c("a"), c("b")]),
            ],
        )
        .unwrap();
        // Same domain as I but missing one fact: a subset, not induced.
        let j = Structure::new(
            schema(),
            [c("a"), c("b")],
            [("R".to_string(), vec![c("a"), c("a")])],
        )
        .unwrap();
        assert!(j.is_subset_of(&i).unwrap());
        assert!(!j.is_induced_substructure_of(&i).unwrap());
    }

    #[test]
    fn critical_structure_is_full() {
        let s = Structure::critical(schema(), 2);
        assert_eq!(s.domain_size(), 2);
        assert_eq!(s.fact_count(), 4 + 2);
        assert!(s.has_fact("R", &[c("c1"), c("c2")]));
        assert!(s.has_fact("S", &[c("c2")]));
        let zero = Structure::critical(schema(), 0);
        assert_eq!(zero.fact_count(), 0);
    }

    #[test]
    fn display_quotes_awkward_constants() {
        let s = Structure::from_facts(
            schema(),
            [("S".to_string(), vec![Const::new("a*b")])],
        )
        .unwrap();
        assert_eq!(s.to_string(), "S(\"a*b\").");
    }
}
