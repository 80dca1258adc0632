//! Homomorphism search between finite structures.
//!
//! A homomorphism maps the domain of a source structure into the domain of a
//! target so that every source fact is carried to a target fact. The search
//! is a deterministic backtracking solver; it also powers rule-body matching
//! (map the body atoms, variables as the source) and isomorphism checking.
//!
//! Run with: `cargo run --example homomorphisms`

use dexrs::homs::{all_homomorphisms, are_isomorphic, find_homomorphism, Assignment, HomSource};
use dexrs::syntax::{parse_rule, parse_structure};
use dexrs::Term;

fn main() -> dexrs::Result<()> {
    // A directed 3-cycle and a directed triangle with all edges reversed are
    // homomorphically equivalent; a 2-cycle maps into neither.
    let cycle3 = parse_structure(
        "schema { E/2 } E(a,b). E(b,c). E(c,a).",
        None,
    )?;
    let clique2 = parse_structure("E(u,v). E(v,u).", Some(cycle3.schema().clone()))?;

    // cycle3 -> clique2: walk the cycle alternating between u and v — but a
    // 3-cycle is odd, so no homomorphism exists.
    let none = find_homomorphism(
        HomSource::Structure(&cycle3),
        &clique2,
        &Assignment::new(),
    )?;
    println!("3-cycle -> 2-clique : {:?}", none.map(|h| h.to_string()));

    // clique2 -> cycle3: also impossible (u and v would need to be adjacent
    // both ways, but the 3-cycle is one-directional).
    let none = find_homomorphism(
        HomSource::Structure(&clique2),
        &cycle3,
        &Assignment::new(),
    )?;
    println!("2-clique -> 3-cycle : {:?}", none.map(|h| h.to_string()));

    // cycle3 -> cycle3: three rotations. `all_homomorphisms` enumerates them
    // in a fixed deterministic order.
    let rotations = all_homomorphisms(
        HomSource::Structure(&cycle3),
        &cycle3,
        &Assignment::new(),
    )?;
    println!("3-cycle -> 3-cycle  : {} homomorphisms", rotations.len());
    for h in &rotations {
        println!("    {h}");
    }

    // Pin part of the map: requiring a -> b leaves exactly one rotation.
    let mut fixed = Assignment::new();
    fixed.bind(
        Term::Const(dexrs::Const::new("a")),
        dexrs::Const::new("b"),
    );
    let pinned = all_homomorphisms(HomSource::Structure(&cycle3), &cycle3, &fixed)?;
    println!("pinned a -> b       : {} homomorphism ({})", pinned.len(), pinned[0]);

    // Matching a rule body against a structure is the same search with the
    // body atoms as the source; variables become the things being assigned.
    let rule = parse_rule("E(X,Y), E(Y,Z) -> E(X,Z).", Some(cycle3.schema().clone()))?;
    let matches = all_homomorphisms(
        HomSource::Atoms(rule.body()),
        &cycle3,
        &Assignment::new(),
    )?;
    println!("\npaths of length 2 in the 3-cycle: {}", matches.len());
    for m in &matches {
        println!("    {m}");
    }

    // Isomorphism is two-sided: the 3-cycle is isomorphic to a relabeled
    // copy, but not to the structure with one edge flipped.
    let relabeled = parse_structure("E(x,y). E(y,z). E(z,x).", Some(cycle3.schema().clone()))?;
    let flipped = parse_structure("E(a,b). E(b,c). E(a,c).", Some(cycle3.schema().clone()))?;
    println!("\niso to relabeled    : {}", are_isomorphic(&cycle3, &relabeled)?);
    println!("iso to flipped-edge : {}", are_isomorphic(&cycle3, &flipped)?);
    Ok(())
}
