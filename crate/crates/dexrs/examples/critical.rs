//! Critical structures: the all-tuples structure on k constants.
//!
//! The k-critical structure over a schema has domain {c1, ..., ck} and holds
//! *every* possible fact. Rule bodies always match it, and every disjunct is
//! always witnessed, so it satisfies every disjunctive existential rule —
//! which makes it a handy universal model probe: any rule set has arbitrarily
//! large finite models, and a rule is violated by critical structures only if
//! it is not a rule at all (e.g. a dependency with an empty head).
//!
//! Run with: `cargo run --example critical`

use dexrs::syntax::{parse_dependency, parse_document};
use dexrs::Structure;

fn main() -> dexrs::Result<()> {
    let doc = parse_document(
        "schema { Edge/2 Color/1 }\n\
         Edge(X,Y) -> Color(X) | Color(Y).\n\
         Edge(X,Y) -> exists Z. Edge(Y,Z).\n\
         Color(X) -> exists Z. Edge(X,Z).",
    )?;

    for k in 1..=3 {
        let critical = Structure::critical(doc.schema.clone(), k);
        println!(
            "critical(k={k}): {} constants, {} facts",
            critical.domain_size(),
            critical.fact_count()
        );
        // Satisfies every rule, whatever the rules are.
        assert!(critical.satisfies_all(&doc.rules));
    }

    // The 2-critical structure in full.
    let critical = Structure::critical(doc.schema.clone(), 2);
    println!("\nthe 2-critical structure:");
    for line in critical.to_string().lines() {
        println!("    {line}");
    }
    for rule in &doc.rules {
        println!("satisfies {rule} : {}", critical.satisfies(rule));
    }

    // Dependencies with equality or empty heads are a different matter: the
    // critical structure happily violates them, which is exactly what makes
    // it useful as a stress instance.
    let key = parse_dependency("Color(X1), Color(X2) -> X1 = X2.", Some(doc.schema.clone()))?;
    let denial = parse_dependency("Edge(X1,X1) -> false.", Some(doc.schema.clone()))?;
    println!("\nsatisfies {key} : {}", critical.satisfies_dependency(&key));
    println!("satisfies {denial} : {}", critical.satisfies_dependency(&denial));
    Ok(())
}
