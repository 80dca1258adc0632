//! Direct products, and why disjunctive rules need a repaired product.
//!
//! The direct product of two structures pairs their domains componentwise
//! and keeps a fact exactly when both factors have it. Classes defined by
//! *disjunction-free* rules are closed under this product — but disjunctive
//! rules are not: each factor may satisfy a different disjunct, leaving the
//! product satisfying neither. The repaired product grows the plain product
//! into a model again while keeping a homomorphism back to the left factor
//! that extends the projection.
//!
//! Run with: `cargo run --example products`

use dexrs::chase::ChaseBudget;
use dexrs::homs::{find_homomorphism, HomSource};
use dexrs::product::{direct_product, projective_homomorphism, repairable_direct_product};
use dexrs::syntax::parse_document;

fn main() -> dexrs::Result<()> {
    // One rule: everything red-flagged is either safe or trapped.
    let doc = parse_document(
        "schema { R/1 S/1 T/1 }\n\
         R(X) -> S(X) | T(X).",
    )?;
    let schema = doc.schema.clone();
    let rules = &doc.rules;

    // Two models that satisfy the rule through *different* disjuncts.
    let i1 = dexrs::syntax::parse_structure("R(a). S(a).", Some(schema.clone()))?;
    let i2 = dexrs::syntax::parse_structure("R(b). T(b).", Some(schema.clone()))?;
    println!("I1 (model via S): {}", i1.to_string().replace('\n', " "));
    println!("I2 (model via T): {}", i2.to_string().replace('\n', " "));

    // Their direct product keeps only the shared pattern R: the pair element
    // <a,b> is red-flagged but neither safe nor trapped.
    let product = direct_product(&i1, &i2)?;
    println!("\ndirect product  : {}", product.to_string().replace('\n', " "));
    match product.violated_rule(rules) {
        Some(idx) => println!("violates        : {}", rules[idx]),
        None => println!("violates        : nothing"),
    }

    // The repaired product re-establishes the rule. It is a superset of the
    // plain product, it satisfies the rules, and it still maps onto the left
    // factor by a homomorphism extending the projection <x,y> -> x.
    let budget = ChaseBudget::default();
    let repaired = repairable_direct_product(&i1, &i2, rules, &budget)?;
    println!("\nrepaired product:");
    for line in repaired.to_string().lines() {
        println!("    {line}");
    }

    // Check the three advertised properties explicitly.
    println!("contains product : {}", product.is_subset_of(&repaired)?);
    println!("satisfies rules  : {}", repaired.satisfies_all(rules));
    let projection = projective_homomorphism(&product)?;
    let hom = find_homomorphism(HomSource::Structure(&repaired), &i1, &projection)?;
    match hom {
        Some(h) => println!("maps to I1       : yes, extending the projection ({h})"),
        None => println!("maps to I1       : no"),
    }
    Ok(())
}
