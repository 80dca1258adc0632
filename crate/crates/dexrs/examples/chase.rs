//! The disjunctive chase: repairing a structure into models, one branch per
//! disjunct.
//!
//! A *trigger* is a rule plus a match of its body; it is *active* when no
//! disjunct is already witnessed. Applying an active trigger spawns one
//! child structure per disjunct, instantiating existential variables with
//! fresh constants (`_n1`, `_n2`, ...). Branches without active triggers are
//! *saturated*: they are models of the rule set, and every model that embeds
//! the start structure embeds one of them.
//!
//! Run with: `cargo run --example chase`

use dexrs::chase::{active_triggers, chase, chase_with_tree, render_tree, ChaseBudget};
use dexrs::syntax::{parse_document, parse_structure};

fn main() -> dexrs::Result<()> {
    let doc = parse_document(
        "schema { R/1 S/1 T/1 U/1 }\n\
         R(X) -> S(X) | T(X).\n\
         T(X) -> exists Z. U(Z).",
    )?;
    let start = parse_structure("R(a).", Some(doc.schema.clone()))?;

    // One active trigger at the start: the first rule matched at X = a.
    let triggers = active_triggers(&start, &doc.rules);
    println!("active triggers at start: {}", triggers.len());

    // Chase with the exploration tree retained. Each line of the trace is
    // `depth rule# disjunct# +added-facts`.
    let budget = ChaseBudget::default();
    let outcome = chase_with_tree(&start, &doc.rules, &budget);
    println!("\ntrace:");
    print!("{}", render_tree(outcome.tree.as_ref().expect("tree kept")));

    println!("complete          : {}", outcome.complete());
    println!("saturated results : {}", outcome.saturated.len());
    for (idx, model) in outcome.saturated.iter().enumerate() {
        println!("  model {}: {}", idx + 1, model.to_string().replace('\n', " "));
        // Every saturated result is a model of the rules.
        assert!(model.satisfies_all(&doc.rules));
    }

    // A rule that keeps inventing new elements never saturates; the budget
    // cuts the tree and reports the truncation instead of looping forever.
    let growing = parse_document("schema { E/2 }\nE(X,Y) -> exists Z. E(Y,Z).")?;
    let edge = parse_structure("E(a,b).", Some(growing.schema.clone()))?;
    let capped = ChaseBudget {
        max_depth: 4,
        ..ChaseBudget::default()
    };
    let outcome = chase(&edge, &growing.rules, &capped);
    println!("\nnon-terminating rule with depth budget 4:");
    println!("complete          : {}", outcome.complete());
    println!("truncated branches: {}", outcome.truncated);
    println!("saturated results : {}", outcome.saturated.len());
    Ok(())
}
