//! Shared seeded generators and brute-force oracles for the integration
//! suites. Everything is driven by a `ChaCha8Rng` with a fixed seed, so the
//! generated instances are identical on every run and on every platform.
#![allow(dead_code)] // each test target uses a different subset

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dexrs::{Atom, Const, Dexr, Schema, Structure, Term, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random schema: `1..=max_rels` relations with arities in `1..=max_arity`.
pub fn gen_schema(rng: &mut ChaCha8Rng, max_rels: usize, max_arity: usize) -> Arc<Schema> {
    const NAMES: [&str; 5] = ["P", "Q", "R", "S", "T"];
    let count = rng.gen_range(1..=max_rels.min(NAMES.len()));
    let rels: Vec<(String, usize)> = (0..count)
        .map(|i| (NAMES[i].to_string(), rng.gen_range(1..=max_arity)))
        .collect();
    Arc::new(Schema::new(rels).expect("generated schema is valid"))
}

/// Every tuple over `domain` of the given arity, in lexicographic order.
fn all_tuples(domain: &[Const], arity: usize) -> Vec<Vec<Const>> {
    let mut out: Vec<Vec<Const>> = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for t in &out {
            for c in domain {
                let mut t2 = t.clone();
                t2.push(c.clone());
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// The full fact universe over `domain`: every relation on every tuple.
pub fn fact_universe(schema: &Schema, domain: &[Const]) -> Vec<(String, Vec<Const>)> {
    let mut out = Vec::new();
    for rel in schema.relations() {
        for t in all_tuples(domain, rel.arity) {
            out.push((rel.name.clone(), t));
        }
    }
    out
}

/// The domain `{e1, ..., ek}` used by the brute-force corpora.
pub fn corpus_domain(k: usize) -> Vec<Const> {
    (1..=k).map(|i| Const::new(format!("e{i}"))).collect()
}

/// Every structure over exactly `domain`: one per subset of the fact
/// universe. Callers are responsible for keeping the universe small.
pub fn structures_over(schema: &Arc<Schema>, domain: &[Const]) -> Vec<Structure> {
    let universe = fact_universe(schema, domain);
    assert!(
        universe.len() <= 16,
        "fact universe too large to enumerate ({} facts)",
        universe.len()
    );
    let mut out = Vec::with_capacity(1 << universe.len());
    for mask in 0u32..(1u32 << universe.len()) {
        let facts: Vec<(String, Vec<Const>)> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, f)| f.clone())
            .collect();
        out.push(
            Structure::new(schema.clone(), domain.iter().cloned(), facts)
                .expect("universe facts fit the schema"),
        );
    }
    out
}

/// The brute-force corpus: every structure over every domain `{e1..ek}` for
/// `k` in `1..=max_dom`.
pub fn corpus(schema: &Arc<Schema>, max_dom: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for k in 1..=max_dom {
        out.extend(structures_over(schema, &corpus_domain(k)));
    }
    out
}

/// A random structure over at most `max_dom` constants `a1, a2, ...`; each
/// possible fact is included independently with probability `density`.
pub fn gen_structure(
    rng: &mut ChaCha8Rng,
    schema: &Arc<Schema>,
    max_dom: usize,
    density: f64,
) -> Structure {
    let k = rng.gen_range(1..=max_dom);
    let domain: Vec<Const> = (1..=k).map(|i| Const::new(format!("a{i}"))).collect();
    let facts: Vec<(String, Vec<Const>)> = fact_universe(schema, &domain)
        .into_iter()
        .filter(|_| rng.gen_bool(density))
        .collect();
    Structure::new(schema.clone(), domain, facts).expect("generated facts fit the schema")
}

/// Shape limits for [`gen_dexr`].
#[derive(Clone, Copy)]
pub struct DexrShape {
    pub max_body_atoms: usize,
    pub max_disjuncts: usize,
    pub max_atoms_per_disjunct: usize,
    pub max_body_vars: usize,
    pub max_exist_vars: usize,
    /// Force single-atom bodies (linear rules).
    pub linear: bool,
}

impl Default for DexrShape {
    fn default() -> Self {
        DexrShape {
            max_body_atoms: 2,
            max_disjuncts: 2,
            max_atoms_per_disjunct: 2,
            max_body_vars: 3,
            max_exist_vars: 1,
            linear: false,
        }
    }
}

fn gen_atom(rng: &mut ChaCha8Rng, schema: &Schema, vars: &[Var]) -> Atom {
    let rel = &schema.relations()[rng.gen_range(0..schema.len())];
    let args: Vec<Term> = (0..rel.arity)
        .map(|_| Term::Var(vars[rng.gen_range(0..vars.len())].clone()))
        .collect();
    Atom::new(rel.name.clone(), args)
}

/// A random constant-free rule over the schema, within the shape limits.
pub fn gen_dexr(rng: &mut ChaCha8Rng, schema: &Arc<Schema>, shape: DexrShape) -> Dexr {
    let body_pool: Vec<Var> = (1..=shape.max_body_vars.max(1))
        .map(|i| Var::new(format!("X{i}")))
        .collect();
    let exist_pool: Vec<Var> = (1..=shape.max_exist_vars)
        .map(|i| Var::new(format!("Z{i}")))
        .collect();

    // An empty body needs existential variables available for the head.
    let nb = if shape.linear {
        1
    } else if shape.max_exist_vars == 0 {
        rng.gen_range(1..=shape.max_body_atoms.max(1))
    } else {
        rng.gen_range(0..=shape.max_body_atoms)
    };
    let body: Vec<Atom> = (0..nb).map(|_| gen_atom(rng, schema, &body_pool)).collect();
    let body_vars: Vec<Var> = {
        let mut seen = BTreeSet::new();
        for atom in &body {
            for t in &atom.args {
                if let Term::Var(v) = t {
                    seen.insert(v.clone());
                }
            }
        }
        seen.into_iter().collect()
    };

    let nd = rng.gen_range(1..=shape.max_disjuncts);
    let mut disjuncts: Vec<(BTreeSet<Var>, Vec<Atom>)> = Vec::new();
    for _ in 0..nd {
        let na = rng.gen_range(1..=shape.max_atoms_per_disjunct);
        let mut atoms = Vec::new();
        for _ in 0..na {
            let rel = &schema.relations()[rng.gen_range(0..schema.len())];
            let args: Vec<Term> = (0..rel.arity)
                .map(|_| {
                    // With an empty body every head variable must be
                    // existential; otherwise mix body and existential vars.
                    let use_body = !body_vars.is_empty()
                        && (exist_pool.is_empty() || rng.gen_bool(0.7));
                    if use_body {
                        Term::Var(body_vars[rng.gen_range(0..body_vars.len())].clone())
                    } else {
                        Term::Var(exist_pool[rng.gen_range(0..exist_pool.len())].clone())
                    }
                })
                .collect();
            atoms.push(Atom::new(rel.name.clone(), args));
        }
        let exist: BTreeSet<Var> = atoms
            .iter()
            .flat_map(|a| a.args.iter())
            .filter_map(|t| match t {
                Term::Var(v) if exist_pool.contains(v) => Some(v.clone()),
                _ => None,
            })
            .collect();
        disjuncts.push((exist, atoms));
    }
    Dexr::new(body, disjuncts).expect("generated rule is well-formed")
}

/// A random set of rules.
pub fn gen_dexr_set(
    rng: &mut ChaCha8Rng,
    schema: &Arc<Schema>,
    max_rules: usize,
    shape: DexrShape,
) -> Vec<Dexr> {
    let count = rng.gen_range(1..=max_rules);
    (0..count).map(|_| gen_dexr(rng, schema, shape)).collect()
}
