//! Parsing and printing the rule/structure text format.
//!
//! A *document* mixes an optional schema declaration, facts, and rules.
//! Facts build a finite structure; rules are disjunctive existential rules
//! (`body -> disjunct | disjunct | ...`) whose disjuncts may introduce
//! existential variables with `exists Z.`. Dependencies additionally allow
//! equality disjuncts (`X1 = X2`) and the empty head `false`.
//!
//! Run with: `cargo run --example parsing`

use dexrs::syntax::{parse_dependency, parse_document, parse_structure};

fn main() -> dexrs::Result<()> {
    // A document: schema, three facts, two rules. Whitespace and comments
    // (`% ...`) are free-form; every item ends with a period.
    let text = "\
schema { Edge/2 Color/1 }

% a two-vertex graph with one colored vertex
Edge(u, v).
Edge(v, u).
Color(u).

Edge(X, Y) -> Color(X) | Color(Y).
Edge(X, Y) -> exists Z. Edge(Y, Z).
";
    let doc = parse_document(text)?;
    println!("schema        : {}", doc.schema);
    println!("declared      : {}", doc.schema_declared);
    println!("structure     :");
    for line in doc.structure.to_string().lines() {
        println!("    {line}");
    }
    println!("rules         :");
    for rule in &doc.rules {
        // Printing is canonical: variables are renamed to X1, X2, ... in
        // first-use order, body atoms are sorted, so two rules that differ
        // only in variable names print identically.
        println!("    {rule}");
    }

    // The schema declaration is optional: without one, relations and arities
    // are inferred from use.
    let inferred = parse_document("Likes(ann, bob). Likes(bob, ann).")?;
    println!("\ninferred      : {}", inferred.schema);

    // Constants are lower-case identifiers; anything else can be quoted.
    let quoted = parse_structure(r#"schema { R/1 } R("a constant with spaces")."#, None)?;
    let printed = quoted.to_string();
    println!("quoted fact   : {}", printed.trim_end());
    // Printing always re-parses to the same structure (printing is injective
    // on structures, so round-tripping is exact).
    let reparsed = parse_structure(&printed, Some(quoted.schema().clone()))?;
    assert_eq!(quoted, reparsed);
    println!("round-trip    : exact");

    // Dependencies extend rules with equality disjuncts and falsity.
    let key = parse_dependency("R(X1), R(X2) -> X1 = X2.", None)?;
    let denial = parse_dependency("R(X1), S(X1) -> false.", None)?;
    println!("\nequality head : {key}");
    println!("denial        : {denial}");

    // Parse errors carry a position and a description.
    let err = parse_document("schema { R/1 } R(X) -> S(X).").unwrap_err();
    println!("\nbad document  : {err}");
    Ok(())
}
