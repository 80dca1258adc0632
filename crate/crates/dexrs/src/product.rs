//! Direct products of structures and their chase-based repairs.
//!
//! The direct product `I ⊗ J` lives on the full Cartesian product of the two
//! domains; a relation holds a tuple of pairs exactly when both projections
//! hold. Models of a disjunctive rule set are not closed under this product
//! (a disjunct chosen on the left may differ from the one chosen on the
//! right), which is where *repairable* products come in: a superset of the
//! product that is a model and still projects homomorphically onto the left
//! factor.

use crate::chase::{chase, ChaseBudget};
use crate::error::{Error, Result};
use crate::homs::{find_homomorphism, Assignment, HomSource};
use crate::rule::{Dexr, Term};
use crate::structure::{Const, Structure};

/// Fuses two constant names into one pair-constant name. The encoding
/// escapes the separator so that it is injective and nestable:
/// `\` becomes `\\`, `*` becomes `\*`, and the components are joined by a
/// single unescaped `*`.
pub fn pair(left: &Const, right: &Const) -> Const {
    fn escape(name: &str) -> String {
        name.replace('\\', "\\\\").replace('*', "\\*")
    }
    Const::new(format!("{}*{}", escape(left.name()), escape(right.name())))
}

/// Splits a pair-constant produced by [`pair`] back into its components.
pub fn unpair(c: &Const) -> Result<(Const, Const)> {
    let mut left = String::new();
    let mut right = String::new();
    let mut seen_sep = false;
    let mut chars = c.name().chars();
    while let Some(ch) = chars.next() {
        let target = if seen_sep { &mut right } else { &mut left };
        match ch {
            '\\' => match chars.next() {
                Some(esc @ ('\\' | '*')) => target.push(esc),
                _ => {
                    return Err(Error::NotAProduct(format!(
                        "constant `{}` has a dangling escape",
                        c.name()
                    )))
                }
            },
            '*' if seen_sep => {
                return Err(Error::NotAProduct(format!(
                    "constant `{}` has more than one separator",
                    c.name()
                )))
            }
            '*' => seen_sep = true,
            _ => target.push(ch),
        }
    }
    if !seen_sep {
        return Err(Error::NotAProduct(format!(
            "constant `{}` is not a pair",
            c.name()
        )));
    }
    Ok((Const::new(left), Const::new(right)))
}

/// The direct product `I ⊗ J`: domain is the full Cartesian product, and a
/// relation holds a tuple of pairs iff both projections are facts.
pub fn direct_product(i: &Structure, j: &Structure) -> Result<Structure> {
    i.check_same_schema(j)?;
    let mut domain = Vec::new();
    for a in i.domain() {
        for b in j.domain() {
            domain.push(pair(a, b));
        }
    }
    let mut facts = Vec::new();
    for rel in i.schema().relations() {
        for t in i.tuples(&rel.name) {
            for u in j.tuples(&rel.name) {
                let fused: Vec<Const> =
                    t.iter().zip(u.iter()).map(|(a, b)| pair(a, b)).collect();
                facts.push((rel.name.clone(), fused));
            }
        }
    }
    Structure::new(i.schema().clone(), domain, facts)
}

/// The left-projection map of a product structure: each pair-constant of the
/// domain is sent to its left component.
pub fn projective_homomorphism(k: &Structure) -> Result<Assignment> {
    let mut out = Assignment::new();
    for c in k.domain() {
        let (left, _) = unpair(c)?;
        out.bind(Term::Const(c.clone()), left);
    }
    Ok(out)
}

/// Repairs `I ⊗ J` into a model of `rules`: chases the product and returns
/// the first saturated branch (in deterministic exploration order) whose
/// result admits a homomorphism to `I` extending the left projection.
///
/// Both inputs must already be models of `rules`; the search reports
/// [`Error::Exhausted`] when the budget runs out before a qualifying branch
/// saturates.
pub fn repairable_direct_product(
    i: &Structure,
    j: &Structure,
    rules: &[Dexr],
    budget: &ChaseBudget,
) -> Result<Structure> {
    for (side, s) in [("left", i), ("right", j)] {
        if let Some(rule_index) = s.violated_rule(rules) {
            return Err(Error::InputNotModel {
                side: side.to_string(),
                rule_index,
            });
        }
    }
    let product = direct_product(i, j)?;
    let projection = projective_homomorphism(&product)?;
    let outcome = chase(&product, rules, budget);
    for candidate in &outcome.saturated {
        if find_homomorphism(HomSource::Structure(candidate), i, &projection)?.is_some() {
            return Ok(candidate.clone());
        }
    }
    Err(Error::Exhausted(format!(
        "no saturated chase branch of the product projects onto the left \
         factor within budget ({} saturated, {} truncated)",
        outcome.saturated.len(),
        outcome.truncated
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_document, parse_structure};

    fn example_one() -> (Structure, Structure, Vec<Dexr>) {
        let doc = parse_document("schema { R/1 S/1 T/1 } R(X) -> S(X) | T(X).").unwrap();
        let i1 = parse_structure("schema { R/1 S/1 T/1 } R(a). S(a).", None).unwrap();
        let i2 = parse_structure("schema { R/1 S/1 T/1 } R(a). T(a).", None).unwrap();
        (i1, i2, doc.rules)
    }

    #[test]
    fn pair_names_round_trip() {
        for (l, r) in [
            ("a", "b"),
            ("a*b", "c"),
            ("a\\", "*"),
            ("", "x"),
            ("a*a", "a*a"),
        ] {
            let fused = pair(&Const::new(l), &Const::new(r));
            let (left, right) = unpair(&fused).unwrap();
            assert_eq!((left.name(), right.name()), (l, r));
        }
        assert!(unpair(&Const::new("plain")).is_err());
        // Nested pairs survive a second round trip.
        let inner = pair(&Const::new("a"), &Const::new("b"));
        let outer = pair(&inner, &Const::new("c"));
        let (left, right) = unpair(&outer).unwrap();
        assert_eq!(left, inner);
        assert_eq!(right.name(), "c");
    }

    #[test]
    fn product_of_example_one() {
        let (i1, i2, rules) = example_one();
        let k = direct_product(&i1, &i2).unwrap();
        // Only R survives: S/T disagree between the factors.
        let aa = pair(&Const::new("a"), &Const::new("a"));
        assert_eq!(k.fact_count(), 1);
        assert!(k.has_fact("R", std::slice::from_ref(&aa)));
        assert!(!k.satisfies_all(&rules));
        // The projection is a homomorphism to the left factor.
        let projection = projective_homomorphism(&k).unwrap();
        assert_eq!(projection.get(&Term::Const(aa)), Some(&Const::new("a")));
    }

    #[test]
    fn repaired_product_of_example_one() {
        let (i1, i2, rules) = example_one();
        let l = repairable_direct_product(&i1, &i2, &rules, &ChaseBudget::default()).unwrap();
        let aa = pair(&Const::new("a"), &Const::new("a"));
        assert!(l.has_fact("R", std::slice::from_ref(&aa)));
        assert!(l.has_fact("S", std::slice::from_ref(&aa)));
        assert_eq!(l.fact_count(), 2);
        assert!(l.satisfies_all(&rules));
        // The product itself is contained in the repair.
        let k = direct_product(&i1, &i2).unwrap();
        assert!(k.is_subset_of(&l).unwrap());
    }

    #[test]
    fn repair_requires_model_inputs() {
        let (i1, _, rules) = example_one();
        let bad = parse_structure("schema { R/1 S/1 T/1 } R(a).", None).unwrap();
        let err = repairable_direct_product(&i1, &bad, &rules, &ChaseBudget::default());
        assert_eq!(
            err.unwrap_err(),
            Error::InputNotModel {
                side: "right".into(),
                rule_index: 0
            }
        );
    }

    #[test]
    fn empty_rules_return_the_product_itself() {
        let (i1, i2, _) = example_one();
        let k = direct_product(&i1, &i2).unwrap();
        let l = repairable_direct_product(&i1, &i2, &[], &ChaseBudget::default()).unwrap();
        assert_eq!(k, l);
    }

    #[test]
    fn product_with_critical_structure() {
        let schema = crate::schema::Schema::shared(vec![("R", 2), ("S", 1)]).unwrap();
        let c1 = Structure::critical(schema, 1);
        let k = direct_product(&c1, &c1).unwrap();
        assert!(crate::homs::are_isomorphic(&k, &c1).unwrap());
    }
}
