//! Three-valued entailment between rule sets.
//!
//! `Σ ⊨ σ` is checked in two directions. Positively: freeze σ's body (turn
//! its variables into fresh constants), chase the frozen structure under Σ,
//! and require every branch to reach a node where some instantiated head
//! disjunct holds — then every model of Σ containing a body match satisfies
//! the head. Negatively: a saturated chase branch that never satisfies the
//! head is itself a countermodel, and independently a brute-force scan of
//! small structures looks for one. When budgets run out before either side
//! concludes, the verdict is an honest `Unknown`.

use std::collections::BTreeMap;

use crate::chase::{apply_trigger, BranchQueue, ChaseBudget, FreshCounter};
use crate::error::Result;
use crate::homs;
use crate::rule::{Atom, DdDisjunct, Dexr, DisjunctiveDependency, Term, Var};
use crate::schema::Schema;
use crate::structure::{tuples_over, Const, Structure};
use std::sync::Arc;

/// Outcome of an entailment check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every chase branch satisfied an instantiated head disjunct; `depth`
    /// is the deepest node at which a branch closed.
    Entailed { depth: usize },
    /// A structure satisfying the premises but violating the conclusion.
    NotEntailed { countermodel: Structure },
    /// Budgets ran out before either direction concluded.
    Unknown,
}

impl Verdict {
    pub fn is_entailed(&self) -> bool {
        matches!(self, Verdict::Entailed { .. })
    }
}

/// A head disjunct with the frontier variables instantiated by frozen
/// constants (remaining variables are existential).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrozenDisjunct {
    /// Equality between two frozen constants.
    Equality(Const, Const),
    /// Atoms over frozen constants and existential variables.
    Exists(Vec<Atom>),
}

impl FrozenDisjunct {
    /// Is the disjunct satisfied in `structure`? Equalities hold only under
    /// syntactic identity: constants name themselves, so two distinct frozen
    /// constants can never be identified.
    pub fn satisfied_in(&self, structure: &Structure) -> bool {
        match self {
            FrozenDisjunct::Equality(a, b) => a == b,
            FrozenDisjunct::Exists(atoms) => {
                homs::satisfiable(atoms, structure, &BTreeMap::new())
            }
        }
    }
}

/// Replaces the body variables of a dependency by fresh constants
/// `_f1, _f2, ..` (in sorted variable order): the body becomes a structure,
/// and each head disjunct is instantiated on its frontier.
pub fn freeze_body(
    dd: &DisjunctiveDependency,
    schema: &Arc<Schema>,
) -> Result<(Structure, Vec<FrozenDisjunct>)> {
    dd.check_schema(schema)?;
    let mut rho: BTreeMap<Var, Const> = BTreeMap::new();
    for (idx, v) in dd.body_vars().iter().enumerate() {
        rho.insert(v.clone(), Const::new(format!("_f{}", idx + 1)));
    }
    let mut facts = Vec::new();
    for atom in dd.body() {
        let ground = atom.substitute(&rho);
        let tuple: Vec<Const> = ground
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => c.clone(),
                Term::Var(v) => unreachable!("unfrozen body variable `{v}`"),
            })
            .collect();
        facts.push((ground.relation, tuple));
    }
    let structure = Structure::from_facts(schema.clone(), facts)?;
    let head = dd
        .disjuncts()
        .iter()
        .map(|d| match d {
            DdDisjunct::Equality(a, b) => {
                FrozenDisjunct::Equality(rho[a].clone(), rho[b].clone())
            }
            DdDisjunct::Exists(d) => FrozenDisjunct::Exists(
                d.atoms().iter().map(|atom| atom.substitute(&rho)).collect(),
            ),
        })
        .collect();
    Ok((structure, head))
}

/// What the frozen-body chase concluded.
enum ChaseSide {
    /// Every branch closed; deepest closing depth.
    AllClosed(usize),
    /// A saturated branch that satisfies the premises but no head disjunct.
    Violation(Box<Structure>),
    /// Budget ran out with neither of the above.
    Inconclusive,
}

/// Chases `start` under `premises`, closing a branch as soon as some frozen
/// head disjunct is satisfied (fact growth keeps it satisfied, so checking
/// at each node as it is reached is exhaustive).
fn chase_against_head(
    start: &Structure,
    premises: &[Dexr],
    head: &[FrozenDisjunct],
    budget: &ChaseBudget,
) -> ChaseSide {
    let mut fresh = FreshCounter::past(start);
    let mut frontier = std::collections::VecDeque::new();
    frontier.push_back((start.clone(), 0usize, BranchQueue::default()));
    let mut nodes = 1usize;
    let mut max_close_depth = 0usize;
    let mut truncated = false;
    while let Some((structure, depth, mut queue)) = frontier.pop_front() {
        if head.iter().any(|d| d.satisfied_in(&structure)) {
            max_close_depth = max_close_depth.max(depth);
            continue;
        }
        match queue.next_active(&structure, premises) {
            None => return ChaseSide::Violation(Box::new(structure)),
            Some(t) => {
                if depth + 1 > budget.max_depth {
                    truncated = true;
                    continue;
                }
                let children =
                    apply_trigger(&structure, &t, &mut fresh).expect("active triggers apply");
                for child in children {
                    if nodes >= budget.max_nodes || child.domain_size() > budget.max_domain {
                        truncated = true;
                        continue;
                    }
                    nodes += 1;
                    frontier.push_back((child, depth + 1, queue.clone()));
                }
            }
        }
    }
    if truncated {
        ChaseSide::Inconclusive
    } else {
        ChaseSide::AllClosed(max_close_depth)
    }
}

/// Exhaustive scan for a structure with at most `bound` domain elements
/// satisfying every premise but violating `conclusion`. Domain sizes grow
/// from 1; within a size, fact sets are enumerated as ascending bitmasks
/// over the sorted fact universe, so the first hit is deterministic.
pub fn countermodel_search(
    premises: &[Dexr],
    conclusion: &DisjunctiveDependency,
    schema: &Arc<Schema>,
    bound: usize,
) -> Option<Structure> {
    const FACT_UNIVERSE_LIMIT: usize = 18;
    for size in 1..=bound {
        let domain: Vec<Const> = (0..size)
            .map(|i| Const::new(((b'a' + i as u8) as char).to_string()))
            .collect();
        let mut universe: Vec<(String, Vec<Const>)> = Vec::new();
        for rel in schema.relations() {
            for tuple in tuples_over(&domain, rel.arity) {
                universe.push((rel.name.clone(), tuple));
            }
        }
        if universe.len() > FACT_UNIVERSE_LIMIT {
            return None;
        }
        for mask in 0u64..(1 << universe.len()) {
            let facts: Vec<(String, Vec<Const>)> = universe
                .iter()
                .enumerate()
                .filter(|(idx, _)| mask & (1 << idx) != 0)
                .map(|(_, f)| f.clone())
                .collect();
            let candidate =
                Structure::new(schema.clone(), domain.iter().cloned(), facts)
                    .expect("universe facts are schema-valid");
            if candidate.satisfies_all(premises) && !candidate.satisfies_dependency(conclusion) {
                return Some(candidate);
            }
        }
    }
    None
}

/// Does `premises ⊨ conclusion` hold for a disjunctive dependency?
///
/// Equality disjuncts are satisfied only under syntactic identity of the
/// frozen constants, which keeps `Entailed` sound but can return `Unknown`
/// (never a wrong verdict) where identifying two constants would be needed.
pub fn entails_dd(
    premises: &[Dexr],
    conclusion: &DisjunctiveDependency,
    schema: &Arc<Schema>,
    budget: &ChaseBudget,
    countermodel_bound: usize,
) -> Result<Verdict> {
    for rule in premises {
        rule.check_schema(schema)?;
    }
    let (frozen, head) = freeze_body(conclusion, schema)?;
    match chase_against_head(&frozen, premises, &head, budget) {
        ChaseSide::AllClosed(depth) => Ok(Verdict::Entailed { depth }),
        ChaseSide::Violation(certificate) => {
            // Prefer a small scanned countermodel over the chase-grown one.
            match countermodel_search(premises, conclusion, schema, countermodel_bound) {
                Some(countermodel) => Ok(Verdict::NotEntailed { countermodel }),
                None => Ok(Verdict::NotEntailed {
                    countermodel: *certificate,
                }),
            }
        }
        ChaseSide::Inconclusive => {
            match countermodel_search(premises, conclusion, schema, countermodel_bound) {
                Some(countermodel) => Ok(Verdict::NotEntailed { countermodel }),
                None => Ok(Verdict::Unknown),
            }
        }
    }
}

/// Does `premises ⊨ conclusion` hold for a plain rule?
pub fn entails(
    premises: &[Dexr],
    conclusion: &Dexr,
    schema: &Arc<Schema>,
    budget: &ChaseBudget,
    countermodel_bound: usize,
) -> Result<Verdict> {
    entails_dd(
        premises,
        &conclusion.to_dependency(),
        schema,
        budget,
        countermodel_bound,
    )
}

/// Outcome of entailing a whole set of conclusions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetVerdict {
    /// Every conclusion entailed; deepest per-rule chase depth.
    Entailed { depth: usize },
    /// `conclusions[index]` has a countermodel (which satisfies every
    /// premise, so it refutes the set entailment as a whole).
    NotEntailed {
        index: usize,
        countermodel: Structure,
    },
    /// No countermodel found, but the checks at these indices were unknown.
    Unknown { indices: Vec<usize> },
}

impl SetVerdict {
    pub fn is_entailed(&self) -> bool {
        matches!(self, SetVerdict::Entailed { .. })
    }
}

/// Does `premises ⊨ σ` hold for every σ in `conclusions`? Conclusions are
/// checked in order; the first countermodel decides `NotEntailed`.
pub fn entails_set(
    premises: &[Dexr],
    conclusions: &[Dexr],
    schema: &Arc<Schema>,
    budget: &ChaseBudget,
    countermodel_bound: usize,
) -> Result<SetVerdict> {
    let mut max_depth = 0usize;
    let mut unknown = Vec::new();
    for (index, sigma) in conclusions.iter().enumerate() {
        match entails(premises, sigma, schema, budget, countermodel_bound)? {
            Verdict::Entailed { depth } => max_depth = max_depth.max(depth),
            Verdict::NotEntailed { countermodel } => {
                return Ok(SetVerdict::NotEntailed {
                    index,
                    countermodel,
                })
            }
            Verdict::Unknown => unknown.push(index),
        }
    }
    if unknown.is_empty() {
        Ok(SetVerdict::Entailed { depth: max_depth })
    } else {
        Ok(SetVerdict::Unknown { indices: unknown })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_dependency, parse_document, parse_rule};

    fn setup(rules_text: &str) -> (Vec<Dexr>, Arc<Schema>) {
        let doc = parse_document(rules_text).unwrap();
        (doc.rules, doc.schema)
    }

    #[test]
    fn reflexivity() {
        let (rules, schema) = setup("schema { R/1 S/1 T/1 } R(X) -> S(X) | T(X).");
        let verdict = entails(
            &rules,
            &rules[0],
            &schema,
            &ChaseBudget::default(),
            3,
        )
        .unwrap();
        assert_eq!(verdict, Verdict::Entailed { depth: 1 });
    }

    #[test]
    fn disjunction_does_not_entail_a_disjunct() {
        let (rules, schema) = setup("schema { R/1 S/1 T/1 } R(X) -> S(X) | T(X).");
        let sigma = parse_rule("schema { R/1 S/1 T/1 } R(X) -> S(X).", None).unwrap();
        let verdict =
            entails(&rules, &sigma, &schema, &ChaseBudget::default(), 3).unwrap();
        match verdict {
            Verdict::NotEntailed { countermodel } => {
                // First structure in scan order: R(a) plus T(a).
                assert_eq!(countermodel.to_string(), "R(a).\nT(a).");
                assert!(countermodel.satisfies_all(&rules));
                assert!(!countermodel.satisfies(&sigma));
            }
            other => panic!("expected NotEntailed, got {other:?}"),
        }
    }

    #[test]
    fn tautology_is_entailed_by_nothing() {
        let (_, schema) = setup("schema { R/1 }");
        let sigma = parse_rule("schema { R/1 } R(X) -> R(X).", None).unwrap();
        let verdict = entails(&[], &sigma, &schema, &ChaseBudget::default(), 2).unwrap();
        assert_eq!(verdict, Verdict::Entailed { depth: 0 });
    }

    #[test]
    fn denial_needs_a_countermodel_only() {
        let (_, schema) = setup("schema { R/1 }");
        let delta = parse_dependency("schema { R/1 } R(X) -> false.", None).unwrap();
        let verdict =
            entails_dd(&[], &delta, &schema, &ChaseBudget::default(), 2).unwrap();
        match verdict {
            Verdict::NotEntailed { countermodel } => {
                assert_eq!(countermodel.to_string(), "R(a).");
            }
            other => panic!("expected NotEntailed, got {other:?}"),
        }
    }

    #[test]
    fn equality_head_fails_on_two_element_domains() {
        let (_, schema) = setup("schema { R/2 }");
        let delta = parse_dependency("schema { R/2 } R(X1,X2) -> X1 = X2.", None).unwrap();
        let verdict =
            entails_dd(&[], &delta, &schema, &ChaseBudget::default(), 2).unwrap();
        match verdict {
            Verdict::NotEntailed { countermodel } => {
                assert_eq!(countermodel.to_string(), "R(a,b).");
            }
            other => panic!("expected NotEntailed, got {other:?}"),
        }
    }

    #[test]
    fn transitive_composition_is_entailed() {
        let (rules, schema) = setup(
            "schema { R/1 S/1 T/1 } R(X) -> S(X). S(X) -> T(X).",
        );
        let sigma = parse_rule("schema { R/1 S/1 T/1 } R(X) -> T(X).", None).unwrap();
        let verdict =
            entails(&rules, &sigma, &schema, &ChaseBudget::default(), 3).unwrap();
        assert_eq!(verdict, Verdict::Entailed { depth: 2 });
    }

    #[test]
    fn entailment_through_disjunction_closes_branchwise() {
        // Both branches of the disjunction lead to U, via different routes.
        let (rules, schema) = setup(
            "schema { R/1 S/1 T/1 U/1 } R(X) -> S(X) | T(X). S(X) -> U(X). T(X) -> U(X).",
        );
        let sigma = parse_rule("schema { R/1 S/1 T/1 U/1 } R(X) -> U(X).", None).unwrap();
        let verdict =
            entails(&rules, &sigma, &schema, &ChaseBudget::default(), 3).unwrap();
        assert_eq!(verdict, Verdict::Entailed { depth: 2 });
    }

    #[test]
    fn set_entailment_reports_the_failing_rule() {
        let (rules, schema) = setup("schema { R/1 S/1 T/1 } R(X) -> S(X).");
        let conclusions = vec![
            parse_rule("schema { R/1 S/1 T/1 } R(X) -> S(X).", None).unwrap(),
            parse_rule("schema { R/1 S/1 T/1 } S(X) -> T(X).", None).unwrap(),
        ];
        let verdict = entails_set(
            &rules,
            &conclusions,
            &schema,
            &ChaseBudget::default(),
            3,
        )
        .unwrap();
        match verdict {
            SetVerdict::NotEntailed {
                index,
                countermodel,
            } => {
                assert_eq!(index, 1);
                assert_eq!(countermodel.to_string(), "S(a).");
            }
            other => panic!("expected NotEntailed, got {other:?}"),
        }
        // Every set entails itself.
        let refl =
            entails_set(&rules, &rules, &schema, &ChaseBudget::default(), 3).unwrap();
        assert!(refl.is_entailed());
    }

    #[test]
    fn frozen_bodies_use_reserved_constants() {
        let (_, schema) = setup("schema { R/2 S/1 T/2 }");
        let delta = parse_dependency(
            "schema { R/2 S/1 T/2 } R(X1,X2), S(X1) -> exists Z. T(X2,Z).",
            None,
        )
        .unwrap();
        let (frozen, head) = freeze_body(&delta, &schema).unwrap();
        assert_eq!(frozen.to_string(), "R(_f1,_f2).\nS(_f1).");
        assert_eq!(head.len(), 1);
        match &head[0] {
            FrozenDisjunct::Exists(atoms) => {
                assert_eq!(atoms.len(), 1);
                assert_eq!(atoms[0].to_string(), "T(_f2,Z1)");
            }
            other => panic!("unexpected head {other:?}"),
        }
    }

    #[test]
    fn unknown_when_the_budget_stops_short() {
        // The entailment holds (via the S stepping stone), but the chase is
        // not allowed deep enough to see it, and being an entailment there
        // is no countermodel for the scan to find either.
        let (rules, schema) = setup("schema { R/1 S/1 T/1 } R(X) -> S(X). S(X) -> T(X).");
        let sigma = parse_rule("schema { R/1 S/1 T/1 } R(X) -> T(X).", None).unwrap();
        let tight = ChaseBudget {
            max_depth: 1,
            max_nodes: 50,
            max_domain: 20,
        };
        let verdict = entails(&rules, &sigma, &schema, &tight, 3).unwrap();
        assert_eq!(verdict, Verdict::Unknown);
    }
}
