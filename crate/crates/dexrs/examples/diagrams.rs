//! Diagrams of substructures: describing "K sits inside something that looks
//! like I" as a single formula, and translating it into a dependency.
//!
//! The diagram of a substructure K of I conjoins (1) K's facts, (2) pairwise
//! inequalities between K's constants, and (3) a chosen set G of *negated*
//! existential conjunctions — patterns over K's constants (plus up to m fresh
//! variables) that I does not satisfy. A structure satisfying the diagram
//! contains a faithful copy of K and omits every pattern in G, so diagrams
//! let a structure be approximated from below by rule-shaped sentences: each
//! diagram negates into a disjunctive dependency.
//!
//! Run with: `cargo run --example diagrams`

use std::collections::BTreeSet;

use dexrs::diagram::{
    build_diagram, candidate_substructures, diagram_to_dd, neg_candidates, satisfies_diagram,
    CompatVariant, NegConjunction,
};
use dexrs::syntax::parse_structure;

fn main() -> dexrs::Result<()> {
    // Reference structure I = {R(a)} over three unary relations.
    let i = parse_structure("schema { R/1 S/1 T/1 } R(a).", None)?;
    let k = i.clone(); // take K = I itself

    // All conjunctions over K's constants (m = 0: no extra variables) that I
    // fails to satisfy. These are the candidate members for G.
    let candidates: Vec<NegConjunction> = neg_candidates(&k, &i, 0)?.into_iter().collect();
    println!("negatable patterns for K = I = {{R(a)}}:");
    for c in &candidates {
        println!("    {c}");
    }

    // The diagram with G = ∅ asserts only the facts (and inequalities, none
    // here since K has a single constant).
    let plain = build_diagram(&k, &i, &BTreeSet::new())?;
    println!("\nG = {{}}          : {plain}");

    // Adding a negated pattern sharpens the description.
    let g: BTreeSet<NegConjunction> = candidates.iter().take(1).cloned().collect();
    let sharpened = build_diagram(&k, &i, &g)?;
    println!("G = {{first}}     : {sharpened}");

    // Distinct G choices can still be equivalent as descriptions. Compare
    // two diagrams on every structure over the domain {a}: here J' and J''
    // tell them apart, while the reference I satisfies both.
    let j1 = parse_structure("R(a). T(a).", Some(i.schema().clone()))?;
    let j2 = parse_structure("R(a). S(a).", Some(i.schema().clone()))?;
    for (name, j) in [("I  ", &i), ("J' ", &j1), ("J''", &j2)] {
        println!(
            "{name} satisfies: plain={} sharpened={}",
            satisfies_diagram(j, &plain)?,
            satisfies_diagram(j, &sharpened)?
        );
    }

    // Negating a diagram yields a disjunctive dependency with the same
    // models (constants become variables; the inequalities become equality
    // disjuncts; each negated pattern becomes an existential disjunct).
    println!("\nas dependencies:");
    for g in candidates.iter().take(2) {
        let set: BTreeSet<NegConjunction> = [g.clone()].into();
        let diagram = build_diagram(&k, &i, &set)?;
        let dd = diagram_to_dd(&diagram)?;
        println!("    {diagram}");
        println!("        negates to {dd}");
    }

    // Which substructures get diagrams? Three harvesting variants: every
    // induced substructure on ≤ n active elements, the single-fact ones, or
    // the guarded ones (some fact covers the active domain).
    let i2 = parse_structure("schema { R/2 S/1 } R(a,b). S(a). S(c).", None)?;
    println!("\nsubstructure harvest from {}:", i2.to_string().replace('\n', " "));
    for (label, variant) in [
        ("plain  ", CompatVariant::Plain),
        ("linear ", CompatVariant::Linear),
        ("guarded", CompatVariant::Guarded),
    ] {
        let family = candidate_substructures(&i2, 2, variant)?;
        println!("  {label}: {} candidates", family.len());
        for k in &family {
            let text = k.to_string().replace('\n', " ");
            let text = if text.trim().is_empty() { "(empty)".to_string() } else { text };
            println!("      {text}");
        }
    }
    Ok(())
}
