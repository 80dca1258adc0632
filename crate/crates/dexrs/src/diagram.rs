//! Diagrams of substructures and diagrammatic compatibility.
//!
//! For a substructure `K` of `I`, a diagram collects what `K` looks like
//! from inside `I`: the facts of `K`, the pairwise distinctness of its
//! constants, and a chosen set `G` of *negative* conjunctions — conjunctions
//! over `K`'s constants and a few variables whose existential closure fails
//! in `I`. Satisfying a diagram means reproducing the facts while continuing
//! to avoid everything in `G`.
//!
//! Compatibility asks, for every small substructure `K` of `I` and every
//! such diagram, whether some model of the rule set satisfies it. A failed
//! diagram is a finite certificate that `I` cannot be told apart from
//! non-models by rules of the given shape.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::chase::{active_triggers, apply_trigger, ChaseBudget, FreshCounter};
use crate::error::{Error, Result};
use crate::homs;
use crate::rule::{Atom, DdDisjunct, Dexr, DisjunctiveDependency, RuleProfile, Term, Var};
use crate::structure::{Const, Structure};

const NEG_CANDIDATE_ATOM_LIMIT: usize = 22;

/// A conjunction of atoms over constants and variables `Y1..Ym` whose
/// existential closure fails in the reference structure.
///
/// Values are canonical: atoms are a sorted set and variables are renamed
/// `Y1, Y2, ..` in first-use order. The ordering (atom count first, then the
/// atom list) makes "smaller conjunction" meaningful in enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegConjunction {
    atoms: Vec<Atom>,
}

impl PartialOrd for NegConjunction {
    fn partial_cmp(&self, other: &NegConjunction) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NegConjunction {
    fn cmp(&self, other: &NegConjunction) -> std::cmp::Ordering {
        (self.atoms.len(), &self.atoms).cmp(&(other.atoms.len(), &other.atoms))
    }
}

impl NegConjunction {
    /// Canonicalizes a non-empty conjunction: sorts and deduplicates the
    /// atoms and renames variables to `Y1..` in first-use order, taking the
    /// least result over all variable bijections.
    pub fn new(atoms: Vec<Atom>) -> Result<NegConjunction> {
        if atoms.is_empty() {
            return Err(Error::InvalidRule(
                "a negative conjunction needs at least one atom".into(),
            ));
        }
        Ok(NegConjunction {
            atoms: canonical_atoms(atoms, "Y"),
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.atoms.iter().flat_map(|a| a.vars().cloned()).collect()
    }

    pub fn constants(&self) -> BTreeSet<Const> {
        self.atoms
            .iter()
            .flat_map(|a| a.args.iter())
            .filter_map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })
            .collect()
    }

    /// True when some assignment of the variables into `target`'s domain
    /// lands all atoms in `target`'s facts (constants name themselves).
    pub fn satisfied_in(&self, target: &Structure) -> bool {
        homs::satisfiable(&self.atoms, target, &BTreeMap::new())
    }
}

impl fmt::Display for NegConjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars();
        if !vars.is_empty() {
            write!(f, "exists ")?;
            for (i, v) in vars.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, ".")?;
        }
        write!(f, "(")?;
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{atom}")?;
        }
        write!(f, ")")
    }
}

/// Canonical sorted-set form of a conjunction with variables renamed to
/// `prefix1, prefix2, ..`: the least rename over all bijections when the
/// variable count is small, a first-occurrence fixpoint otherwise.
fn canonical_atoms(mut atoms: Vec<Atom>, prefix: &str) -> Vec<Atom> {
    atoms.sort();
    atoms.dedup();
    let vars: BTreeSet<Var> = atoms.iter().flat_map(|a| a.vars().cloned()).collect();
    crate::rule::canonical_conjunction(&atoms, &vars, prefix)
}

/// The conjunctions over `K`'s constants and at most `m` variables whose
/// existential closure fails in `I` — canonical representatives only.
///
/// `K` must be a substructure of `I` (fact containment) with every domain
/// element active.
pub fn neg_candidates(k: &Structure, i: &Structure, m: usize) -> Result<BTreeSet<NegConjunction>> {
    if !k.is_subset_of(i)? {
        return Err(Error::NotSubset(
            "the substructure's facts must all hold in the reference structure".into(),
        ));
    }
    if !k.domain_is_active() {
        return Err(Error::DomainNotActive(
            "the substructure must not have inactive domain elements".into(),
        ));
    }
    let atom_universe = atom_universe(k, m);
    if atom_universe.len() > NEG_CANDIDATE_ATOM_LIMIT {
        return Err(Error::CandidateSpaceTooLarge(format!(
            "{} candidate atoms exceed the supported {} (2^{} conjunctions)",
            atom_universe.len(),
            NEG_CANDIDATE_ATOM_LIMIT,
            atom_universe.len()
        )));
    }
    let mut out = BTreeSet::new();
    // Enumerate non-empty atom subsets; canonicalization collapses renamings.
    for mask in 1u64..(1 << atom_universe.len()) {
        let atoms: Vec<Atom> = atom_universe
            .iter()
            .enumerate()
            .filter(|(idx, _)| mask & (1 << idx) != 0)
            .map(|(_, a)| a.clone())
            .collect();
        let candidate = NegConjunction::new(atoms)?;
        // Every candidate variable must actually be used ≤ m times; the
        // universe already enforces the variable budget.
        if candidate.satisfied_in(i) {
            continue;
        }
        out.insert(candidate);
    }
    Ok(out)
}

/// All atoms over `K`'s constants plus variables `Y1..Ym`.
fn atom_universe(k: &Structure, m: usize) -> Vec<Atom> {
    let mut terms: Vec<Term> = k.domain().iter().cloned().map(Term::Const).collect();
    for idx in 1..=m {
        terms.push(Term::Var(Var::new(format!("Y{idx}"))));
    }
    let mut out = Vec::new();
    for rel in k.schema().relations() {
        let mut stack: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..rel.arity {
            let mut next = Vec::new();
            for partial in &stack {
                for t in &terms {
                    let mut ext = partial.clone();
                    ext.push(t.clone());
                    next.push(ext);
                }
            }
            stack = next;
        }
        for args in stack {
            out.push(Atom::new(rel.name.clone(), args));
        }
    }
    out
}

/// The diagram of a substructure `K` relative to a reference structure:
/// `K`'s facts, pairwise distinctness of `K`'s constants, and a set of
/// negated conjunctions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagram {
    schema: std::sync::Arc<crate::schema::Schema>,
    constants: BTreeSet<Const>,
    facts: Vec<(String, Vec<Const>)>,
    negated: BTreeSet<NegConjunction>,
}

impl Diagram {
    pub fn constants(&self) -> &BTreeSet<Const> {
        &self.constants
    }

    pub fn facts(&self) -> &[(String, Vec<Const>)] {
        &self.facts
    }

    pub fn negated(&self) -> &BTreeSet<NegConjunction> {
        &self.negated
    }

    /// The positive part as a structure (domain = the diagram constants).
    pub fn positive_structure(&self) -> Structure {
        Structure::new(
            self.schema.clone(),
            self.constants.iter().cloned(),
            self.facts.iter().cloned(),
        )
        .expect("diagram facts are schema-valid by construction")
    }

    /// True when the diagram asserts nothing.
    pub fn is_tautology(&self) -> bool {
        self.constants.is_empty() && self.facts.is_empty() && self.negated.is_empty()
    }
}

/// Builds the diagram of `K` relative to `I` with negated part `G`.
///
/// Every member of `G` must genuinely fail in `I` (existentially); this is
/// what makes the reference structure itself satisfy the diagram.
pub fn build_diagram(
    k: &Structure,
    i: &Structure,
    g: &BTreeSet<NegConjunction>,
) -> Result<Diagram> {
    k.check_same_schema(i)?;
    if !k.is_subset_of(i)? {
        return Err(Error::NotSubset(
            "the substructure's facts must all hold in the reference structure".into(),
        ));
    }
    for gamma in g {
        if gamma.satisfied_in(i) {
            return Err(Error::GNotNegative(format!(
                "conjunction {gamma} is satisfied in the reference structure"
            )));
        }
        for c in gamma.constants() {
            if !k.domain().contains(&c) {
                return Err(Error::GNotNegative(format!(
                    "conjunction {gamma} mentions `{c}` outside the substructure's domain"
                )));
            }
        }
    }
    Ok(Diagram {
        schema: k.schema().clone(),
        constants: k.domain().clone(),
        facts: k.facts().map(|(r, t)| (r.to_string(), t.clone())).collect(),
        negated: g.clone(),
    })
}

/// Does `j` satisfy the diagram? Constants are interpreted as themselves:
/// the positive facts must hold in `j`, the inequalities hold by distinct
/// names, and no negated conjunction may have a satisfying assignment.
pub fn satisfies_diagram(j: &Structure, diagram: &Diagram) -> Result<bool> {
    if j.schema() != &diagram.schema {
        return Err(Error::SchemaMismatch(
            "diagram and structure use different schemas".into(),
        ));
    }
    for (rel, tuple) in &diagram.facts {
        if !j.has_fact(rel, tuple) {
            return Ok(false);
        }
    }
    for c in &diagram.constants {
        if !j.domain().contains(c) {
            return Ok(false);
        }
    }
    Ok(diagram.negated.iter().all(|gamma| !gamma.satisfied_in(j)))
}

/// A diagram with its constants replaced by variables: an existentially
/// closed formula `∃ x̄ (facts ∧ inequalities ∧ ¬γ…)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariablizedDiagram {
    schema: std::sync::Arc<crate::schema::Schema>,
    /// In renaming order: the variable standing for each diagram constant.
    pub exist_vars: Vec<Var>,
    /// The positive atoms over `exist_vars`.
    pub atoms: Vec<Atom>,
    /// Negated conjunctions, now mixing X- and Y-variables.
    pub negated: Vec<Vec<Atom>>,
}

/// Replaces each diagram constant with a fresh variable `X1, X2, ..` (in
/// constant order). Inequalities become the requirement that the variables
/// take pairwise distinct values; they are carried implicitly and enforced
/// by [`VariablizedDiagram::satisfied_in`].
pub fn variablize(diagram: &Diagram) -> VariablizedDiagram {
    let mut rename: BTreeMap<Const, Var> = BTreeMap::new();
    for (idx, c) in diagram.constants.iter().enumerate() {
        rename.insert(c.clone(), Var::new(format!("X{}", idx + 1)));
    }
    let to_atom = |rel: &str, tuple: &[Const]| {
        Atom::new(
            rel,
            tuple
                .iter()
                .map(|c| Term::Var(rename[c].clone()))
                .collect::<Vec<_>>(),
        )
    };
    let atoms = diagram
        .facts
        .iter()
        .map(|(rel, tuple)| to_atom(rel, tuple))
        .collect();
    let negated = diagram
        .negated
        .iter()
        .map(|gamma| {
            gamma
                .atoms()
                .iter()
                .map(|atom| {
                    Atom::new(
                        atom.relation.clone(),
                        atom.args
                            .iter()
                            .map(|t| match t {
                                Term::Const(c) => Term::Var(rename[c].clone()),
                                Term::Var(v) => Term::Var(v.clone()),
                            })
                            .collect::<Vec<_>>(),
                    )
                })
                .collect()
        })
        .collect();
    VariablizedDiagram {
        schema: diagram.schema.clone(),
        exist_vars: rename.into_values().collect(),
        atoms,
        negated,
    }
}

impl VariablizedDiagram {
    /// Truth of the existential closure in `j`: an *injective* assignment of
    /// the X-variables (the inequalities, now real constraints) landing the
    /// positive atoms in `j` such that no negated conjunction extends.
    pub fn satisfied_in(&self, j: &Structure) -> bool {
        let mut hit = false;
        self.for_each_injective_match(j, |h| {
            let bad = self
                .negated
                .iter()
                .any(|gamma| homs::satisfiable(gamma, j, h));
            if !bad {
                hit = true;
                return false;
            }
            true
        });
        hit
    }

    /// Enumerates injective assignments of `exist_vars` into `j`'s domain
    /// that land `atoms` inside `j`'s facts. The callback returns `false`
    /// to stop early.
    fn for_each_injective_match(
        &self,
        j: &Structure,
        mut emit: impl FnMut(&BTreeMap<Var, Const>) -> bool,
    ) {
        let domain: Vec<Const> = j.domain().iter().cloned().collect();
        let vars = self.exist_vars.clone();
        let mut assign: BTreeMap<Var, Const> = BTreeMap::new();
        fn rec(
            vars: &[Var],
            at: usize,
            domain: &[Const],
            atoms: &[Atom],
            j: &Structure,
            assign: &mut BTreeMap<Var, Const>,
            emit: &mut impl FnMut(&BTreeMap<Var, Const>) -> bool,
        ) -> bool {
            if at == vars.len() {
                let grounded: Vec<Atom> = atoms.iter().map(|a| a.substitute(assign)).collect();
                let ok = grounded.iter().all(|atom| {
                    let tuple: Vec<Const> = atom
                        .args
                        .iter()
                        .map(|t| match t {
                            Term::Const(c) => c.clone(),
                            Term::Var(_) => unreachable!("all X-variables are bound"),
                        })
                        .collect();
                    j.has_fact(&atom.relation, &tuple)
                });
                return !ok || emit(assign);
            }
            for c in domain {
                if assign.values().any(|used| used == c) {
                    continue;
                }
                assign.insert(vars[at].clone(), c.clone());
                let keep_going = rec(vars, at + 1, domain, atoms, j, assign, emit);
                assign.remove(&vars[at]);
                if !keep_going {
                    return false;
                }
            }
            true
        }
        rec(&vars, 0, &domain, &self.atoms, j, &mut assign, &mut emit);
    }
}

/// Negates a variablized diagram into a disjunctive dependency
/// `∀x̄ (facts → ⋁ equalities ∨ ⋁ ∃ȳ γ)`.
///
/// Case analysis on the diagram parts: no facts and no negations give
/// falsity; no negations give a denial (empty head over the facts); the
/// general case puts one equality disjunct per constant pair (negating an
/// inequality) and one existential disjunct per negated conjunction.
pub fn diagram_to_dd(diagram: &Diagram) -> Result<DisjunctiveDependency> {
    let variablized = variablize(diagram);
    let mut disjuncts: Vec<DdDisjunct> = Vec::new();
    let vars = &variablized.exist_vars;
    for (i, a) in vars.iter().enumerate() {
        for b in vars.iter().skip(i + 1) {
            disjuncts.push(DdDisjunct::Equality(a.clone(), b.clone()));
        }
    }
    for gamma in &variablized.negated {
        let exist: BTreeSet<Var> = gamma
            .iter()
            .flat_map(|a| a.vars())
            .filter(|v| !vars.contains(v))
            .cloned()
            .collect();
        disjuncts.push(DisjunctiveDependency::exists_disjunct(
            exist,
            gamma.clone(),
        ));
    }
    DisjunctiveDependency::new(variablized.atoms, disjuncts)
}

/// Which substructures of the reference structure are considered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CompatVariant {
    /// Induced substructures on at most `n` active constants.
    Plain,
    /// Sub-fact-sets with at most one fact (the empty one included).
    Linear,
    /// Induced substructures whose active domain is covered by one fact.
    Guarded,
}

impl fmt::Display for CompatVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompatVariant::Plain => "plain",
            CompatVariant::Linear => "linear",
            CompatVariant::Guarded => "guarded",
        })
    }
}

/// Outcome of a compatibility check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompatVerdict {
    /// Every diagram of every candidate substructure is satisfied by some
    /// model; the map records one witness per diagram.
    Compatible { witnesses: Vec<(Diagram, Structure)> },
    /// A diagram no model of the rules satisfies.
    NotCompatible { diagram: Diagram },
    /// Some per-diagram search ran out of budget unresolved.
    Unknown { unresolved: Vec<Diagram> },
}

impl CompatVerdict {
    pub fn is_compatible(&self) -> bool {
        matches!(self, CompatVerdict::Compatible { .. })
    }
}

/// Three-valued per-diagram search result.
enum DiagramSearch {
    Witness(Structure),
    NoModel,
    Unresolved,
}

/// Searches for a model of `rules` satisfying `diagram` by chasing the
/// positive part. Constants are rigid names, so the inequalities hold
/// throughout, and fresh nulls are distinct from everything. Branches where
/// a negated conjunction became satisfied are pruned (fact growth never
/// unsatisfies one). A saturated survivor is a model satisfying the diagram;
/// a fully explored tree with no survivor proves there is none.
fn diagram_search(diagram: &Diagram, rules: &[Dexr], budget: &ChaseBudget) -> DiagramSearch {
    let start = diagram.positive_structure();
    let mut fresh = FreshCounter::past(&start);
    let mut frontier = vec![(start, 0usize)];
    let mut truncated = false;
    let mut nodes = 1usize;
    while let Some((structure, depth)) = frontier.pop() {
        if diagram
            .negated
            .iter()
            .any(|gamma| gamma.satisfied_in(&structure))
        {
            continue;
        }
        let triggers = active_triggers(&structure, rules);
        match triggers.first() {
            None => return DiagramSearch::Witness(structure),
            Some(t) => {
                if depth + 1 > budget.max_depth {
                    truncated = true;
                    continue;
                }
                let children = apply_trigger(&structure, t, &mut fresh)
                    .expect("active triggers apply");
                for child in children.into_iter().rev() {
                    if nodes >= budget.max_nodes || child.domain_size() > budget.max_domain {
                        truncated = true;
                        continue;
                    }
                    nodes += 1;
                    frontier.push((child, depth + 1));
                }
            }
        }
    }
    if truncated {
        DiagramSearch::Unresolved
    } else {
        DiagramSearch::NoModel
    }
}

/// Enumerates the candidate substructures of `i` for a variant.
pub fn candidate_substructures(
    i: &Structure,
    n: usize,
    variant: CompatVariant,
) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    match variant {
        CompatVariant::Plain | CompatVariant::Guarded => {
            let adom: Vec<Const> = i.active_domain().into_iter().collect();
            if adom.len() > NEG_CANDIDATE_ATOM_LIMIT {
                return Err(Error::CandidateSpaceTooLarge(format!(
                    "active domain of size {} exceeds the supported {}",
                    adom.len(),
                    NEG_CANDIDATE_ATOM_LIMIT
                )));
            }
            for mask in 0u64..(1 << adom.len()) {
                let subset: BTreeSet<Const> = adom
                    .iter()
                    .enumerate()
                    .filter(|(idx, _)| mask & (1 << idx) != 0)
                    .map(|(_, c)| c.clone())
                    .collect();
                if subset.len() > n {
                    continue;
                }
                let k = i.induced_substructure(&subset)?;
                // Only fully active candidates qualify.
                if !k.domain_is_active() {
                    continue;
                }
                if variant == CompatVariant::Guarded && !structure_is_guarded(&k) {
                    continue;
                }
                out.push(k);
            }
        }
        CompatVariant::Linear => {
            out.push(Structure::empty(i.schema().clone()));
            for (rel, tuple) in i.facts() {
                let k = Structure::from_facts(
                    i.schema().clone(),
                    vec![(rel.to_string(), tuple.clone())],
                )?;
                if k.domain_size() <= n {
                    out.push(k);
                }
            }
        }
    }
    out.sort_by_key(|k| {
        (
            k.domain_size(),
            k.fact_count(),
            k.domain().iter().cloned().collect::<Vec<_>>(),
            k.facts()
                .map(|(r, t)| (r.to_string(), t.clone()))
                .collect::<Vec<_>>(),
        )
    });
    out.dedup();
    Ok(out)
}

/// A structure is guarded when it is empty or some single fact mentions its
/// whole active domain.
pub fn structure_is_guarded(k: &Structure) -> bool {
    let adom = k.active_domain();
    if adom.is_empty() {
        return true;
    }
    k.facts().any(|(_, tuple)| {
        let covered: BTreeSet<Const> = tuple.iter().cloned().collect();
        covered == adom
    })
}

/// Checks diagrammatic compatibility of the model class of `rules` with a
/// structure: for every candidate substructure `K` (per `variant`, with at
/// most `profile.universals` constants) and every diagram of `K` built from
/// at most `profile.disjuncts` negative conjunctions over at most
/// `profile.existentials` variables, search for a model of `rules`
/// satisfying the diagram.
///
/// The first diagram (in deterministic enumeration order) certified to have
/// no model decides `NotCompatible`; budget-starved searches surface in
/// `Unknown` only when no such certificate exists.
pub fn check_compat_with(
    i: &Structure,
    rules: &[Dexr],
    profile: &RuleProfile,
    variant: CompatVariant,
    budget: &ChaseBudget,
) -> Result<CompatVerdict> {
    let (n, m, l) = (
        profile.universals,
        profile.existentials,
        profile.disjuncts,
    );
    let mut witnesses = Vec::new();
    let mut unresolved = Vec::new();
    for k in candidate_substructures(i, n, variant)? {
        let candidates: Vec<NegConjunction> =
            neg_candidates(&k, i, m)?.into_iter().collect();
        for g in subsets_up_to(&candidates, l) {
            let diagram = build_diagram(&k, i, &g)?;
            match diagram_search(&diagram, rules, budget) {
                DiagramSearch::Witness(j) => witnesses.push((diagram, j)),
                DiagramSearch::NoModel => {
                    return Ok(CompatVerdict::NotCompatible { diagram })
                }
                DiagramSearch::Unresolved => unresolved.push(diagram),
            }
        }
    }
    if unresolved.is_empty() {
        Ok(CompatVerdict::Compatible { witnesses })
    } else {
        Ok(CompatVerdict::Unknown { unresolved })
    }
}

/// All subsets of `items` of size at most `max_size`, smallest first, in
/// lexicographic index order within a size.
pub(crate) fn subsets_up_to<T: Clone + Ord>(items: &[T], max_size: usize) -> Vec<BTreeSet<T>> {
    let mut out = vec![BTreeSet::new()];
    let mut current: Vec<Vec<usize>> = vec![Vec::new()];
    for _size in 1..=max_size.min(items.len()) {
        let mut next = Vec::new();
        for combo in &current {
            let start = combo.last().map_or(0, |&last| last + 1);
            for idx in start..items.len() {
                let mut ext = combo.clone();
                ext.push(idx);
                next.push(ext);
            }
        }
        for combo in &next {
            out.push(combo.iter().map(|&idx| items[idx].clone()).collect());
        }
        current = next;
    }
    out
}

impl fmt::Display for Diagram {
    /// Prints `R(a) & a != b & !exists Y1.(S(a,Y1))`, or `true` for the
    /// tautology.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_tautology() {
            return f.write_str("true");
        }
        let mut parts: Vec<String> = Vec::new();
        for (rel, tuple) in &self.facts {
            let args = tuple
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            parts.push(format!("{rel}({args})"));
        }
        let constants: Vec<&Const> = self.constants.iter().collect();
        for (i, a) in constants.iter().enumerate() {
            for b in constants.iter().skip(i + 1) {
                parts.push(format!("{a} != {b}"));
            }
        }
        for gamma in &self.negated {
            parts.push(format!("!{gamma}"));
        }
        f.write_str(&parts.join(" & "))
    }
}
