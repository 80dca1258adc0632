//! Diagrammatic compatibility: can a structure live inside the model class?
//!
//! Fix a rule set Σ and a profile (n, m, ℓ). A structure I is *compatible*
//! when, for every small substructure K of I and every (m, ℓ)-diagram of K,
//! some model of Σ satisfies that diagram. Compatibility is what rules with
//! that profile can "see" of I: if some diagram of I is unsatisfiable within
//! the class, that diagram's negation is a dependency in the profile that
//! separates I from every model — so I cannot satisfy any axiomatization of
//! the class at that profile.
//!
//! Run with: `cargo run --example compatibility`

use dexrs::chase::ChaseBudget;
use dexrs::diagram::{check_compat_with, CompatVariant, CompatVerdict};
use dexrs::syntax::{parse_document, parse_structure};
use dexrs::RuleProfile;

fn main() -> dexrs::Result<()> {
    let doc = parse_document(
        "schema { R/1 S/1 T/1 }\n\
         R(X) -> S(X) | T(X).",
    )?;
    // I = {R(a)} is not a model (a is neither S nor T). Is it at least
    // compatible — indistinguishable from the models — at a given profile?
    let i = parse_structure("R(a).", Some(doc.schema.clone()))?;
    let budget = ChaseBudget::default();

    // At (1, 0, 1): diagrams may negate at most one pattern. Every such
    // diagram of {R(a)} has a model: single negations can always be dodged
    // by satisfying the rule through the other disjunct.
    let verdict = check_compat_with(
        &i,
        &doc.rules,
        &RuleProfile::new(1, 0, 1),
        CompatVariant::Plain,
        &budget,
    )?;
    match &verdict {
        CompatVerdict::Compatible { witnesses } => {
            println!("profile (1,0,1): compatible — every diagram is satisfiable in the class");
            for (diagram, model) in witnesses {
                let text = model.to_string().replace('\n', " ");
                let text = if text.trim().is_empty() { "(empty)".to_string() } else { text };
                println!("    {diagram}");
                println!("        model: {text}");
            }
        }
        other => println!("profile (1,0,1): unexpected {other:?}"),
    }

    // At (1, 0, 2): diagrams may negate two patterns at once. The diagram
    // "R(a) and not S(a) and not T(a)" pins a to violate the rule, so no
    // model satisfies it — I is separated from the class.
    let verdict = check_compat_with(
        &i,
        &doc.rules,
        &RuleProfile::new(1, 0, 2),
        CompatVariant::Plain,
        &budget,
    )?;
    match &verdict {
        CompatVerdict::NotCompatible { diagram } => {
            println!("\nprofile (1,0,2): NOT compatible");
            println!("    unsatisfiable diagram: {diagram}");
        }
        other => println!("\nprofile (1,0,2): unexpected {other:?}"),
    }

    // An actual model of the rules is compatible at every profile.
    let model = parse_structure("R(a). S(a).", Some(doc.schema.clone()))?;
    for l in 1..=2 {
        let verdict = check_compat_with(
            &model,
            &doc.rules,
            &RuleProfile::new(1, 0, l),
            CompatVariant::Plain,
            &budget,
        )?;
        let yes = matches!(verdict, CompatVerdict::Compatible { .. });
        println!("\nmodel {{R(a), S(a)}} at (1,0,{l}): compatible = {yes}");
    }
    Ok(())
}
