//! Logical entailment between rule sets, with certificates either way.
//!
//! Σ entails σ when every model of Σ satisfies σ. The check freezes σ's body
//! into fresh constants (`_f1`, ...), chases the frozen structure with Σ,
//! and asks whether every saturated branch witnesses some disjunct of σ's
//! head. A positive verdict reports the chase depth used; a negative verdict
//! carries a *countermodel* — a finite structure satisfying Σ but not σ —
//! found by brute-force search over small domains. When budgets run out both
//! ways, the verdict is Unknown rather than a guess.
//!
//! Run with: `cargo run --example entailment`

use dexrs::chase::ChaseBudget;
use dexrs::entailment::{entails, entails_dd, entails_set, SetVerdict, Verdict};
use dexrs::syntax::{parse_dependency, parse_document, parse_rule};

fn main() -> dexrs::Result<()> {
    let doc = parse_document(
        "schema { R/1 S/1 T/1 U/1 }\n\
         R(X) -> S(X) | T(X).\n\
         S(X) -> U(X).\n\
         T(X) -> U(X).",
    )?;
    let schema = &doc.schema;
    let budget = ChaseBudget::default();
    let bound = 3; // countermodel domains up to three elements

    // Entailed: both branches of the disjunction lead to U.
    let sigma = parse_rule("R(X) -> U(X).", Some(schema.clone()))?;
    match entails(&doc.rules, &sigma, schema, &budget, bound)? {
        Verdict::Entailed { depth } => {
            println!("R(X) -> U(X)            : entailed (chase depth {depth})");
        }
        other => println!("R(X) -> U(X)            : unexpected {other:?}"),
    }

    // Not entailed: the chase can satisfy R via T, dodging S. The verdict
    // carries a countermodel, which re-verifies by direct checking.
    let sigma = parse_rule("R(X) -> S(X).", Some(schema.clone()))?;
    match entails(&doc.rules, &sigma, schema, &budget, bound)? {
        Verdict::NotEntailed { countermodel } => {
            println!("R(X) -> S(X)            : NOT entailed");
            println!("    countermodel        : {}", countermodel.to_string().replace('\n', " "));
            assert!(countermodel.satisfies_all(&doc.rules));
            assert!(!countermodel.satisfies(&sigma));
        }
        other => println!("R(X) -> S(X)            : unexpected {other:?}"),
    }

    // Dependencies with equality heads and denials work the same way.
    let key = parse_dependency("U(X1), U(X2) -> X1 = X2.", Some(schema.clone()))?;
    match entails_dd(&doc.rules, &key, schema, &budget, bound)? {
        Verdict::NotEntailed { countermodel } => {
            println!("U is a singleton        : NOT entailed");
            println!("    countermodel        : {}", countermodel.to_string().replace('\n', " "));
        }
        other => println!("U is a singleton        : unexpected {other:?}"),
    }

    // Set entailment: all conclusions at once, reporting the first failure.
    let conclusions = vec![
        parse_rule("R(X) -> U(X).", Some(schema.clone()))?,
        parse_rule("U(X) -> S(X).", Some(schema.clone()))?,
    ];
    match entails_set(&doc.rules, &conclusions, schema, &budget, bound)? {
        SetVerdict::NotEntailed { index, countermodel } => {
            println!("set of two conclusions  : fails at #{index} ({})", conclusions[index]);
            println!("    countermodel        : {}", countermodel.to_string().replace('\n', " "));
        }
        other => println!("set of two conclusions  : unexpected {other:?}"),
    }

    // Transitivity needs two chase rounds: the depth certificate shows how
    // far the chase had to go.
    let chain = parse_document(
        "schema { E/2 F/2 }\n\
         E(X,Y) -> F(X,Y).\n\
         F(X,Y), E(Y,Z) -> F(X,Z).",
    )?;
    let sigma = parse_rule("E(X,Y), E(Y,Z) -> F(X,Z).", Some(chain.schema.clone()))?;
    match entails(&chain.rules, &sigma, &chain.schema, &budget, bound)? {
        Verdict::Entailed { depth } => {
            println!("two-step reachability   : entailed (chase depth {depth})");
        }
        other => println!("two-step reachability   : unexpected {other:?}"),
    }
    Ok(())
}
