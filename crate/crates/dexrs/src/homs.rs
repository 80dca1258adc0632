//! Homomorphism search.
//!
//! One backtracking engine answers every matching question in the crate:
//! satisfaction of rule bodies, extendability of head disjuncts, projective
//! extensions for repaired products, negated-conjunction checks in diagrams.
//! The source is either a conjunction of atoms (variables are mapped,
//! constants are rigid) or a whole structure (all of its domain constants
//! are mapped). Search picks the most constrained slot first and propagates
//! candidate sets through the atoms touching it; all iteration is over
//! sorted sets, so results are deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Result;
use crate::rule::{Atom, Term, Var};
use crate::structure::{Const, Structure};

/// A (partial) mapping from source variables or source constants to target
/// constants.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Assignment {
    map: BTreeMap<Term, Const>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn bind(&mut self, key: Term, value: Const) {
        self.map.insert(key, value);
    }

    pub fn get(&self, key: &Term) -> Option<&Const> {
        self.map.get(key)
    }

    pub fn get_var(&self, v: &Var) -> Option<&Const> {
        self.map.get(&Term::Var(v.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Const)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The variable-keyed part of the assignment.
    pub fn var_map(&self) -> BTreeMap<Var, Const> {
        self.map
            .iter()
            .filter_map(|(k, v)| match k {
                Term::Var(var) => Some((var.clone(), v.clone())),
                Term::Const(_) => None,
            })
            .collect()
    }

    pub fn from_var_map(map: &BTreeMap<Var, Const>) -> Assignment {
        Assignment {
            map: map
                .iter()
                .map(|(v, c)| (Term::Var(v.clone()), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k} -> {v}")?;
        }
        write!(f, "}}")
    }
}

/// What is being mapped: a conjunction of atoms, or a whole structure.
#[derive(Debug, Clone, Copy)]
pub enum HomSource<'a> {
    /// Atoms over variables and constants. Variables are mapped; constants
    /// stay fixed (they name themselves).
    Atoms(&'a [Atom]),
    /// A structure: every domain constant is mapped, facts must be
    /// preserved.
    Structure(&'a Structure),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Fixed(usize),  // index into engine.fixed_consts
    Mapped(usize), // index into engine.keys
}

struct Engine<'a> {
    target: &'a Structure,
    keys: Vec<Term>,
    fixed_consts: Vec<Const>,
    atoms: Vec<(String, Vec<Slot>)>,
    /// Slots that occur in no atom; their candidates are the whole target
    /// domain.
    injective: bool,
    /// Optional pre-restriction of candidates per slot (used by the
    /// isomorphism check).
    allowed: Option<Vec<BTreeSet<Const>>>,
}

impl<'a> Engine<'a> {
    fn from_atoms(atoms: &[Atom], target: &'a Structure) -> Result<Engine<'a>> {
        let mut keys: BTreeSet<Term> = BTreeSet::new();
        for atom in atoms {
            target.schema().check(&atom.relation, atom.args.len())?;
            for arg in &atom.args {
                if let Term::Var(_) = arg {
                    keys.insert(arg.clone());
                }
            }
        }
        let keys: Vec<Term> = keys.into_iter().collect();
        let mut fixed_consts = Vec::new();
        let compiled = atoms
            .iter()
            .map(|atom| {
                let slots = atom
                    .args
                    .iter()
                    .map(|arg| match arg {
                        Term::Var(_) => {
                            Slot::Mapped(keys.binary_search(arg).expect("collected above"))
                        }
                        Term::Const(c) => {
                            fixed_consts.push(c.clone());
                            Slot::Fixed(fixed_consts.len() - 1)
                        }
                    })
                    .collect();
                (atom.relation.clone(), slots)
            })
            .collect();
        Ok(Engine {
            target,
            keys,
            fixed_consts,
            atoms: compiled,
            injective: false,
            allowed: None,
        })
    }

    fn from_structure(source: &Structure, target: &'a Structure) -> Result<Engine<'a>> {
        source.check_same_schema(target)?;
        let keys: Vec<Term> = source
            .domain()
            .iter()
            .map(|c| Term::Const(c.clone()))
            .collect();
        let atoms = source
            .facts()
            .map(|(rel, tuple)| {
                let slots = tuple
                    .iter()
                    .map(|c| {
                        let key = Term::Const(c.clone());
                        Slot::Mapped(keys.binary_search(&key).expect("domain covers facts"))
                    })
                    .collect();
                (rel.to_string(), slots)
            })
            .collect();
        Ok(Engine {
            target,
            keys,
            fixed_consts: Vec::new(),
            atoms,
            injective: false,
            allowed: None,
        })
    }

    fn seed(&self, fixed: &Assignment) -> Vec<Option<Const>> {
        let mut state = vec![None; self.keys.len()];
        for (key, value) in fixed.iter() {
            if let Ok(i) = self.keys.binary_search(key) {
                state[i] = Some(value.clone());
            }
        }
        state
    }

    fn slot_value(&self, state: &[Option<Const>], slot: Slot) -> Option<Const> {
        match slot {
            Slot::Fixed(i) => Some(self.fixed_consts[i].clone()),
            Slot::Mapped(i) => state[i].clone(),
        }
    }

    /// Values `slot` can take according to one atom, given the current
    /// partial assignment. `None` when the atom does not mention the slot.
    fn atom_candidates(
        &self,
        state: &[Option<Const>],
        atom_idx: usize,
        slot: usize,
    ) -> Option<BTreeSet<Const>> {
        let (rel, slots) = &self.atoms[atom_idx];
        if !slots.contains(&Slot::Mapped(slot)) {
            return None;
        }
        let mut out = BTreeSet::new();
        'facts: for tuple in self.target.tuples(rel) {
            // Check the fact is consistent with everything already decided,
            // including repeated undecided slots within this atom.
            let mut local: BTreeMap<usize, &Const> = BTreeMap::new();
            for (pos, s) in slots.iter().enumerate() {
                match self.slot_value(state, *s) {
                    Some(c) => {
                        if tuple[pos] != c {
                            continue 'facts;
                        }
                    }
                    None => {
                        let Slot::Mapped(k) = s else { unreachable!() };
                        match local.get(k) {
                            Some(prev) => {
                                if **prev != tuple[pos] {
                                    continue 'facts;
                                }
                            }
                            None => {
                                local.insert(*k, &tuple[pos]);
                            }
                        }
                    }
                }
            }
            if let Some(c) = local.get(&slot) {
                out.insert((*c).clone());
            }
        }
        Some(out)
    }

    fn candidates(&self, state: &[Option<Const>], slot: usize) -> BTreeSet<Const> {
        let mut out: Option<BTreeSet<Const>> = None;
        for atom_idx in 0..self.atoms.len() {
            if let Some(set) = self.atom_candidates(state, atom_idx, slot) {
                out = Some(match out {
                    None => set,
                    Some(prev) => prev.intersection(&set).cloned().collect(),
                });
                if out.as_ref().is_some_and(BTreeSet::is_empty) {
                    break;
                }
            }
        }
        // Slots in no atom range over the whole target domain.
        let mut set = out.unwrap_or_else(|| self.target.domain().iter().cloned().collect());
        if let Some(allowed) = &self.allowed {
            let slot_allowed = &allowed[slot];
            set = set.intersection(slot_allowed).cloned().collect();
        }
        if self.injective {
            let used: BTreeSet<&Const> = state.iter().flatten().collect();
            set.retain(|c| !used.contains(c));
        }
        set
    }

    fn fully_consistent(&self, state: &[Option<Const>]) -> bool {
        self.atoms.iter().all(|(rel, slots)| {
            let tuple: Option<Vec<Const>> =
                slots.iter().map(|s| self.slot_value(state, *s)).collect();
            match tuple {
                Some(t) => self.target.has_fact(rel, &t),
                None => true, // not yet ground; candidate propagation guards it
            }
        })
    }

    /// Depth-first enumeration. `emit` returns `false` to stop the whole
    /// search; `search` mirrors that in its return value.
    fn search(&self, state: &mut Vec<Option<Const>>, emit: &mut dyn FnMut(&[Option<Const>]) -> bool) -> bool {
        // Pick the unassigned slot with the fewest candidates.
        let mut best: Option<(usize, BTreeSet<Const>)> = None;
        for slot in 0..self.keys.len() {
            if state[slot].is_some() {
                continue;
            }
            let cands = self.candidates(state, slot);
            let better = match &best {
                None => true,
                Some((_, b)) => cands.len() < b.len(),
            };
            if better {
                let empty = cands.is_empty();
                best = Some((slot, cands));
                if empty {
                    return true; // dead branch, keep searching elsewhere
                }
            }
        }
        match best {
            None => {
                if self.fully_consistent(state) {
                    emit(state)
                } else {
                    true
                }
            }
            Some((slot, cands)) => {
                for value in cands {
                    state[slot] = Some(value);
                    if !self.search(state, emit) {
                        state[slot] = None;
                        return false;
                    }
                }
                state[slot] = None;
                true
            }
        }
    }

    fn assignment(&self, state: &[Option<Const>]) -> Assignment {
        let mut a = Assignment::new();
        for (i, value) in state.iter().enumerate() {
            if let Some(c) = value {
                a.bind(self.keys[i].clone(), c.clone());
            }
        }
        a
    }
}

fn engine_for<'a>(source: HomSource<'_>, target: &'a Structure) -> Result<Engine<'a>> {
    match source {
        HomSource::Atoms(atoms) => Engine::from_atoms(atoms, target),
        HomSource::Structure(s) => Engine::from_structure(s, target),
    }
}

/// Finds one homomorphism extending `fixed`, if any.
pub fn find_homomorphism(
    source: HomSource<'_>,
    target: &Structure,
    fixed: &Assignment,
) -> Result<Option<Assignment>> {
    let engine = engine_for(source, target)?;
    let mut state = engine.seed(fixed);
    let mut found = None;
    engine.search(&mut state, &mut |state| {
        found = Some(engine.assignment(state));
        false
    });
    Ok(found)
}

/// All homomorphisms extending `fixed`, sorted. The enumeration is complete
/// and duplicate-free.
pub fn all_homomorphisms(
    source: HomSource<'_>,
    target: &Structure,
    fixed: &Assignment,
) -> Result<Vec<Assignment>> {
    let engine = engine_for(source, target)?;
    let mut state = engine.seed(fixed);
    let mut out = Vec::new();
    engine.search(&mut state, &mut |state| {
        out.push(engine.assignment(state));
        true
    });
    out.sort();
    out.dedup();
    Ok(out)
}

/// Is there any way to map `atoms` into `target` extending `fixed`?
/// (Internal fast path: variable-keyed, no error surface — callers have
/// validated the atoms against the schema.)
pub(crate) fn satisfiable(
    atoms: &[Atom],
    target: &Structure,
    fixed: &BTreeMap<Var, Const>,
) -> bool {
    let Ok(engine) = Engine::from_atoms(atoms, target) else {
        return false;
    };
    let mut state = engine.seed(&Assignment::from_var_map(fixed));
    let mut found = false;
    engine.search(&mut state, &mut |_| {
        found = true;
        false
    });
    found
}

/// Calls `f` on every match of `atoms` into `target` extending `fixed`, in
/// deterministic order. Stops early and returns `false` as soon as `f` does;
/// returns `true` when every match passed.
pub(crate) fn for_each_match(
    atoms: &[Atom],
    target: &Structure,
    fixed: &BTreeMap<Var, Const>,
    f: &mut dyn FnMut(&BTreeMap<Var, Const>) -> bool,
) -> bool {
    let Ok(engine) = Engine::from_atoms(atoms, target) else {
        return true;
    };
    let mut state = engine.seed(&Assignment::from_var_map(fixed));
    engine.search(&mut state, &mut |state| {
        f(&engine.assignment(state).var_map())
    })
}

/// All matches of `atoms` into `target` extending `fixed`, as variable maps,
/// sorted.
pub(crate) fn all_var_matches(
    atoms: &[Atom],
    target: &Structure,
    fixed: &BTreeMap<Var, Const>,
) -> Vec<BTreeMap<Var, Const>> {
    let mut out = Vec::new();
    for_each_match(atoms, target, fixed, &mut |m| {
        out.push(m.clone());
        true
    });
    out.sort();
    out
}

/// Per-constant occurrence profile: how often the constant appears at each
/// `(relation, position)`.
fn degrees(s: &Structure) -> BTreeMap<Const, BTreeMap<(String, usize), usize>> {
    let mut out: BTreeMap<Const, BTreeMap<(String, usize), usize>> = BTreeMap::new();
    for c in s.domain() {
        out.insert(c.clone(), BTreeMap::new());
    }
    for (rel, tuple) in s.facts() {
        for (pos, c) in tuple.iter().enumerate() {
            *out.get_mut(c)
                .expect("facts range over the domain")
                .entry((rel.to_string(), pos))
                .or_insert(0) += 1;
        }
    }
    out
}

/// Isomorphism test: a bijective homomorphism whose inverse is also a
/// homomorphism. Candidates are pre-filtered by occurrence profiles.
pub fn are_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    a.check_same_schema(b)?;
    if a.domain_size() != b.domain_size() || a.fact_count() != b.fact_count() {
        return Ok(false);
    }
    for rel in a.schema().relations() {
        if a.tuples(&rel.name).count() != b.tuples(&rel.name).count() {
            return Ok(false);
        }
    }
    let deg_a = degrees(a);
    let deg_b = degrees(b);
    let mut engine = Engine::from_structure(a, b)?;
    engine.injective = true;
    engine.allowed = Some(
        engine
            .keys
            .iter()
            .map(|key| {
                let Term::Const(c) = key else { unreachable!() };
                let profile = &deg_a[c];
                deg_b
                    .iter()
                    .filter(|(_, p)| *p == profile)
                    .map(|(c, _)| c.clone())
                    .collect()
            })
            .collect(),
    );
    let mut state = engine.seed(&Assignment::new());
    let mut found = false;
    engine.search(&mut state, &mut |state| {
        // Injective + equal per-relation fact counts makes the image of the
        // fact set all of b's facts, so the inverse is a homomorphism too.
        // Verify directly all the same.
        let map: BTreeMap<&Const, &Const> = engine
            .keys
            .iter()
            .zip(state.iter())
            .map(|(k, v)| {
                let Term::Const(c) = k else { unreachable!() };
                (c, v.as_ref().expect("complete"))
            })
            .collect();
        let image_ok = a.facts().all(|(rel, tuple)| {
            let image: Vec<Const> = tuple.iter().map(|c| map[c].clone()).collect();
            b.has_fact(rel, &image)
        });
        if image_ok {
            found = true;
            false
        } else {
            true
        }
    });
    Ok(found)
}
