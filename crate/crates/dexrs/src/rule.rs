//! Disjunctive existential rules and disjunctive dependencies.
//!
//! A rule has a conjunctive, constant-free body and a non-empty list of head
//! disjuncts, each carrying its own existentially quantified variables. A
//! disjunctive dependency generalizes this: disjuncts may also be equalities
//! between body variables, and the head may be empty (a denial when the body
//! is non-empty, falsity when it is empty).
//!
//! Constructors canonicalize: variables are renamed to `X1, X2, ..` (body,
//! in a renaming that minimizes the printed form) and `Z1, Z2, ..` (per
//! disjunct), duplicate disjuncts are merged, and unused existential
//! variables are dropped. Structural equality therefore coincides with
//! equality up to variable renaming.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::homs;
use crate::structure::{Const, Structure};

/// A variable, identified by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Var {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Var {
        Var::new(s)
    }
}

/// An atom argument: a variable or a constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Const(Const),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn cons(name: impl Into<String>) -> Term {
        Term::Const(Const::new(name))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => v.fmt(f),
            Term::Const(c) => c.fmt(f),
        }
    }
}

/// A relational atom over variables and constants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub relation: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(relation: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom {
            relation: relation.into(),
            args,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.args.iter().filter_map(Term::as_var)
    }

    pub fn is_constant_free(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Var(_)))
    }

    /// The atom with variables replaced according to `map`; unmapped
    /// variables are kept.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Atom {
        Atom {
            relation: self.relation.clone(),
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
                    Term::Const(c) => Term::Const(c.clone()),
                })
                .collect(),
        }
    }

    /// The atom with some variables replaced by constants.
    pub fn substitute(&self, map: &BTreeMap<Var, Const>) -> Atom {
        Atom {
            relation: self.relation.clone(),
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => match map.get(v) {
                        Some(c) => Term::Const(c.clone()),
                        None => Term::Var(v.clone()),
                    },
                    Term::Const(c) => Term::Const(c.clone()),
                })
                .collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// One head disjunct: a non-empty conjunction of atoms, some of whose
/// variables are existentially quantified.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disjunct {
    exist_vars: BTreeSet<Var>,
    atoms: Vec<Atom>,
}

impl Disjunct {
    pub fn exist_vars(&self) -> &BTreeSet<Var> {
        &self.exist_vars
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// The disjunct's frontier: its non-existential variables.
    pub fn frontier(&self) -> BTreeSet<Var> {
        self.atoms
            .iter()
            .flat_map(Atom::vars)
            .filter(|v| !self.exist_vars.contains(*v))
            .cloned()
            .collect()
    }
}

impl fmt::Display for Disjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.exist_vars.is_empty() {
            write!(f, "exists")?;
            for v in &self.exist_vars {
                write!(f, " {v}")?;
            }
            write!(f, ". ")?;
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// A disjunctive existential rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dexr {
    body: Vec<Atom>,
    disjuncts: Vec<Disjunct>,
}

/// A disjunct of a disjunctive dependency.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DdDisjunct {
    /// An equality between two body variables.
    Equality(Var, Var),
    /// An existentially quantified conjunction.
    Exists(Disjunct),
}

impl fmt::Display for DdDisjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DdDisjunct::Equality(a, b) => write!(f, "{a} = {b}"),
            DdDisjunct::Exists(d) => d.fmt(f),
        }
    }
}

/// A disjunctive dependency: like a rule, but equality disjuncts are allowed
/// and the head may be empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DisjunctiveDependency {
    body: Vec<Atom>,
    disjuncts: Vec<DdDisjunct>,
}

/// Size bounds of a rule: at most `universals` variables in the body, at
/// most `existentials` existential variables per disjunct, at most
/// `disjuncts` disjuncts (for dependencies: non-equality disjuncts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleProfile {
    pub universals: usize,
    pub existentials: usize,
    pub disjuncts: usize,
}

impl RuleProfile {
    pub fn new(universals: usize, existentials: usize, disjuncts: usize) -> RuleProfile {
        RuleProfile {
            universals,
            existentials,
            disjuncts,
        }
    }

    /// Pointwise comparison: does every bound of `self` stay within `other`?
    pub fn fits_within(&self, other: &RuleProfile) -> bool {
        self.universals <= other.universals
            && self.existentials <= other.existentials
            && self.disjuncts <= other.disjuncts
    }
}

impl fmt::Display for RuleProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.universals, self.existentials, self.disjuncts
        )
    }
}

const PERM_LIMIT: usize = 7;

fn canonical_var(prefix: &str, i: usize) -> Var {
    Var::new(format!("{prefix}{i}"))
}

/// All bijections from `vars` onto `{prefix}1 .. {prefix}k`.
fn bijections(vars: &[Var], prefix: &str) -> Vec<BTreeMap<Var, Var>> {
    fn permute(rest: &[usize], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(chosen.clone());
            return;
        }
        for (i, &x) in rest.iter().enumerate() {
            let mut next: Vec<usize> = rest.to_vec();
            next.remove(i);
            chosen.push(x);
            permute(&next, chosen, out);
            chosen.pop();
        }
    }
    let idx: Vec<usize> = (0..vars.len()).collect();
    let mut perms = Vec::new();
    permute(&idx, &mut Vec::new(), &mut perms);
    perms
        .into_iter()
        .map(|perm| {
            perm.iter()
                .enumerate()
                .map(|(pos, &v)| (vars[v].clone(), canonical_var(prefix, pos + 1)))
                .collect()
        })
        .collect()
}

/// Renames `vars` to `{prefix}1..` in order of first occurrence in `atoms`
/// (scanned in sorted order), iterated to a fixpoint. Deterministic fallback
/// for rules too wide for exact minimization.
fn rgs_renaming(atoms: &[Atom], vars: &BTreeSet<Var>, prefix: &str) -> BTreeMap<Var, Var> {
    let mut current: Vec<Atom> = atoms.to_vec();
    current.sort();
    let mut renaming: BTreeMap<Var, Var> = BTreeMap::new();
    for _ in 0..16 {
        let mut map: BTreeMap<Var, Var> = BTreeMap::new();
        let mut next_idx = 1;
        for atom in &current {
            for v in atom.vars() {
                if vars.contains(v) && !map.contains_key(v) {
                    map.insert(v.clone(), canonical_var(prefix, next_idx));
                    next_idx += 1;
                }
            }
        }
        // Close over variables that occur in no atom (possible for
        // dependency bodies referenced only by equalities).
        for v in vars {
            if !map.contains_key(v) {
                map.insert(v.clone(), canonical_var(prefix, next_idx));
                next_idx += 1;
            }
        }
        let mut renamed: Vec<Atom> = current.iter().map(|a| a.rename(&map)).collect();
        renamed.sort();
        // Compose into the running renaming (map is keyed by current names).
        renaming = if renaming.is_empty() {
            map.clone()
        } else {
            renaming
                .iter()
                .map(|(orig, cur)| (orig.clone(), map.get(cur).cloned().unwrap_or_else(|| cur.clone())))
                .collect()
        };
        if renamed == current {
            break;
        }
        current = renamed;
    }
    renaming
}

/// Canonical form of a conjunction viewed as an atom set: variables renamed
/// onto `{prefix}1..` so that the sorted, deduplicated atom list is minimal
/// (exact for few variables, first-occurrence fixpoint beyond that).
/// Constants are left untouched.
pub(crate) fn canonical_conjunction(
    atoms: &[Atom],
    vars: &BTreeSet<Var>,
    prefix: &str,
) -> Vec<Atom> {
    let var_vec: Vec<Var> = vars.iter().cloned().collect();
    let candidates: Vec<BTreeMap<Var, Var>> = if var_vec.len() <= PERM_LIMIT {
        bijections(&var_vec, prefix)
    } else {
        vec![rgs_renaming(atoms, vars, prefix)]
    };
    let mut best: Option<Vec<Atom>> = None;
    for map in candidates {
        let mut renamed: Vec<Atom> = atoms.iter().map(|a| a.rename(&map)).collect();
        renamed.sort();
        renamed.dedup();
        if best.as_ref().is_none_or(|b| renamed < *b) {
            best = Some(renamed);
        }
    }
    best.unwrap_or_default()
}

/// Canonical form of one disjunct under a fixed renaming of its frontier:
/// existential variables are renamed to `Z1..` so that the sorted atom list
/// is minimal.
fn canonical_disjunct(
    exist_vars: &BTreeSet<Var>,
    atoms: &[Atom],
    frontier_map: &BTreeMap<Var, Var>,
) -> Disjunct {
    // Keep only existential variables that occur in some atom.
    let used: BTreeSet<Var> = atoms
        .iter()
        .flat_map(Atom::vars)
        .filter(|v| exist_vars.contains(*v))
        .cloned()
        .collect();
    let used_vec: Vec<Var> = used.iter().cloned().collect();
    let candidates: Vec<BTreeMap<Var, Var>> = if used_vec.len() <= PERM_LIMIT {
        bijections(&used_vec, "Z")
    } else {
        let frontier_renamed: Vec<Atom> = atoms.iter().map(|a| a.rename(frontier_map)).collect();
        vec![rgs_renaming(&frontier_renamed, &used, "Z")]
    };
    let mut best: Option<Vec<Atom>> = None;
    for zmap in candidates {
        let mut full = frontier_map.clone();
        full.extend(zmap);
        let mut renamed: Vec<Atom> = atoms.iter().map(|a| a.rename(&full)).collect();
        renamed.sort();
        renamed.dedup();
        if best.as_ref().is_none_or(|b| renamed < *b) {
            best = Some(renamed);
        }
    }
    let atoms = best.unwrap_or_default();
    let exist_vars: BTreeSet<Var> = atoms
        .iter()
        .flat_map(Atom::vars)
        .filter(|v| v.name().starts_with('Z'))
        .cloned()
        .collect();
    Disjunct { exist_vars, atoms }
}

/// Shared construction checks for rule-like objects. Returns the body's
/// variable set.
fn check_body(body: &[Atom]) -> Result<BTreeSet<Var>> {
    for atom in body {
        if !atom.is_constant_free() {
            return Err(Error::InvalidRule(format!(
                "constant in rule body atom `{atom}`"
            )));
        }
    }
    Ok(body.iter().flat_map(Atom::vars).cloned().collect())
}

fn check_disjunct(
    exist_vars: &BTreeSet<Var>,
    atoms: &[Atom],
    body_vars: &BTreeSet<Var>,
    body_empty: bool,
) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::InvalidRule("empty head disjunct".into()));
    }
    for atom in atoms {
        if !atom.is_constant_free() {
            return Err(Error::InvalidRule(format!(
                "constant in head atom `{atom}`"
            )));
        }
        for v in atom.vars() {
            if exist_vars.contains(v) {
                continue;
            }
            if body_empty {
                return Err(Error::InvalidRule(format!(
                    "variable `{v}` in the head of an empty-body rule is not existential"
                )));
            }
            if !body_vars.contains(v) {
                return Err(Error::InvalidRule(format!(
                    "head variable `{v}` neither existential nor bound by the body"
                )));
            }
        }
    }
    if let Some(v) = exist_vars.iter().find(|v| body_vars.contains(*v)) {
        return Err(Error::InvalidRule(format!(
            "existential variable `{v}` shadows a body variable"
        )));
    }
    Ok(())
}

/// Body renamings to consider for canonicalization: all bijections for small
/// rules, the deterministic heuristic otherwise.
fn body_renamings(body: &[Atom], body_vars: &BTreeSet<Var>) -> Vec<BTreeMap<Var, Var>> {
    let vars: Vec<Var> = body_vars.iter().cloned().collect();
    if vars.len() <= PERM_LIMIT {
        bijections(&vars, "X")
    } else {
        vec![rgs_renaming(body, body_vars, "X")]
    }
}

impl Dexr {
    /// Builds (and canonicalizes) a rule from a body and a list of
    /// `(existential variables, atoms)` disjuncts.
    pub fn new(body: Vec<Atom>, disjuncts: Vec<(BTreeSet<Var>, Vec<Atom>)>) -> Result<Dexr> {
        let body_vars = check_body(&body)?;
        if disjuncts.is_empty() {
            return Err(Error::InvalidRule(
                "a rule needs at least one head disjunct".into(),
            ));
        }
        for (exist, atoms) in &disjuncts {
            check_disjunct(exist, atoms, &body_vars, body.is_empty())?;
        }
        let mut best: Option<(Vec<Atom>, Vec<Disjunct>)> = None;
        for renaming in body_renamings(&body, &body_vars) {
            let mut new_body: Vec<Atom> = body.iter().map(|a| a.rename(&renaming)).collect();
            new_body.sort();
            new_body.dedup();
            let mut new_disjuncts: Vec<Disjunct> = disjuncts
                .iter()
                .map(|(exist, atoms)| canonical_disjunct(exist, atoms, &renaming))
                .collect();
            new_disjuncts.sort();
            new_disjuncts.dedup();
            let candidate = (new_body, new_disjuncts);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        let (body, disjuncts) = best.expect("at least one renaming");
        Ok(Dexr { body, disjuncts })
    }

    pub fn body(&self) -> &[Atom] {
        &self.body
    }

    pub fn disjuncts(&self) -> &[Disjunct] {
        &self.disjuncts
    }

    pub fn body_vars(&self) -> BTreeSet<Var> {
        self.body.iter().flat_map(Atom::vars).cloned().collect()
    }

    /// The smallest profile this rule fits in.
    pub fn profile(&self) -> RuleProfile {
        RuleProfile {
            universals: self.body_vars().len(),
            existentials: self
                .disjuncts
                .iter()
                .map(|d| d.exist_vars.len())
                .max()
                .unwrap_or(0),
            disjuncts: self.disjuncts.len(),
        }
    }

    /// At most one body atom?
    pub fn is_linear(&self) -> bool {
        self.body.len() <= 1
    }

    /// Empty body, or some body atom mentions every body variable?
    pub fn is_guarded(&self) -> bool {
        if self.body.is_empty() {
            return true;
        }
        let vars = self.body_vars();
        self.body.iter().any(|a| {
            let mentioned: BTreeSet<&Var> = a.vars().collect();
            vars.iter().all(|v| mentioned.contains(v))
        })
    }

    /// Checks every atom against a schema.
    pub fn check_schema(&self, schema: &crate::schema::Schema) -> Result<()> {
        for atom in self.body.iter().chain(self.disjuncts.iter().flat_map(|d| d.atoms.iter())) {
            schema.check(&atom.relation, atom.args.len())?;
        }
        Ok(())
    }

    /// The same sentence viewed as a disjunctive dependency.
    pub fn to_dependency(&self) -> DisjunctiveDependency {
        DisjunctiveDependency {
            body: self.body.clone(),
            disjuncts: self
                .disjuncts
                .iter()
                .cloned()
                .map(DdDisjunct::Exists)
                .collect(),
        }
    }
}

impl fmt::Display for Dexr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            write!(f, "true")?;
        } else {
            for (i, a) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
        }
        write!(f, " -> ")?;
        for (i, d) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ".")
    }
}

impl DisjunctiveDependency {
    /// Builds (and canonicalizes) a dependency. `disjuncts` may be empty: an
    /// empty head is a denial (body non-empty) or falsity (body empty).
    pub fn new(body: Vec<Atom>, disjuncts: Vec<DdDisjunct>) -> Result<DisjunctiveDependency> {
        let body_vars = check_body(&body)?;
        for d in &disjuncts {
            match d {
                DdDisjunct::Equality(a, b) => {
                    for v in [a, b] {
                        if !body_vars.contains(v) {
                            return Err(Error::InvalidRule(format!(
                                "equality variable `{v}` does not occur in the body"
                            )));
                        }
                    }
                }
                DdDisjunct::Exists(d) => {
                    check_disjunct(&d.exist_vars, &d.atoms, &body_vars, body.is_empty())?
                }
            }
        }
        let mut best: Option<(Vec<Atom>, Vec<DdDisjunct>)> = None;
        for renaming in body_renamings(&body, &body_vars) {
            let mut new_body: Vec<Atom> = body.iter().map(|a| a.rename(&renaming)).collect();
            new_body.sort();
            new_body.dedup();
            let mut new_disjuncts: Vec<DdDisjunct> = disjuncts
                .iter()
                .map(|d| match d {
                    DdDisjunct::Equality(a, b) => {
                        let (a, b) = (renaming[a].clone(), renaming[b].clone());
                        let (a, b) = if a <= b { (a, b) } else { (b, a) };
                        DdDisjunct::Equality(a, b)
                    }
                    DdDisjunct::Exists(d) => {
                        DdDisjunct::Exists(canonical_disjunct(&d.exist_vars, &d.atoms, &renaming))
                    }
                })
                .collect();
            new_disjuncts.sort();
            new_disjuncts.dedup();
            let candidate = (new_body, new_disjuncts);
            if best.as_ref().is_none_or(|b| candidate < *b) {
                best = Some(candidate);
            }
        }
        let (body, disjuncts) = best.unwrap_or((Vec::new(), Vec::new()));
        Ok(DisjunctiveDependency { body, disjuncts })
    }

    /// Convenience constructor for a disjunct of existential shape.
    pub fn exists_disjunct(exist_vars: BTreeSet<Var>, atoms: Vec<Atom>) -> DdDisjunct {
        DdDisjunct::Exists(Disjunct { exist_vars, atoms })
    }

    /// The dependency `true -> false`, satisfied by no structure.
    pub fn falsity() -> DisjunctiveDependency {
        DisjunctiveDependency {
            body: Vec::new(),
            disjuncts: Vec::new(),
        }
    }

    pub fn body(&self) -> &[Atom] {
        &self.body
    }

    pub fn disjuncts(&self) -> &[DdDisjunct] {
        &self.disjuncts
    }

    pub fn body_vars(&self) -> BTreeSet<Var> {
        self.body.iter().flat_map(Atom::vars).cloned().collect()
    }

    /// Profile: universal variables, existentials per disjunct, and the
    /// number of *non-equality* disjuncts.
    pub fn profile(&self) -> RuleProfile {
        RuleProfile {
            universals: self.body_vars().len(),
            existentials: self
                .disjuncts
                .iter()
                .map(|d| match d {
                    DdDisjunct::Equality(_, _) => 0,
                    DdDisjunct::Exists(d) => d.exist_vars.len(),
                })
                .max()
                .unwrap_or(0),
            disjuncts: self
                .disjuncts
                .iter()
                .filter(|d| matches!(d, DdDisjunct::Exists(_)))
                .count(),
        }
    }

    /// Checks every atom against a schema.
    pub fn check_schema(&self, schema: &crate::schema::Schema) -> Result<()> {
        for atom in self.body.iter() {
            schema.check(&atom.relation, atom.args.len())?;
        }
        for d in &self.disjuncts {
            if let DdDisjunct::Exists(d) = d {
                for atom in &d.atoms {
                    schema.check(&atom.relation, atom.args.len())?;
                }
            }
        }
        Ok(())
    }

    /// The dependency as a plain rule, when it is one (no equalities, at
    /// least one disjunct).
    pub fn as_rule(&self) -> Option<Dexr> {
        if self.disjuncts.is_empty() {
            return None;
        }
        let mut disjuncts = Vec::new();
        for d in &self.disjuncts {
            match d {
                DdDisjunct::Equality(_, _) => return None,
                DdDisjunct::Exists(d) => disjuncts.push(d.clone()),
            }
        }
        Some(Dexr {
            body: self.body.clone(),
            disjuncts,
        })
    }
}

impl fmt::Display for DisjunctiveDependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            write!(f, "true")?;
        } else {
            for (i, a) in self.body.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
        }
        write!(f, " -> ")?;
        if self.disjuncts.is_empty() {
            write!(f, "false")?;
        } else {
            for (i, d) in self.disjuncts.iter().enumerate() {
                if i > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{d}")?;
            }
        }
        write!(f, ".")
    }
}

/// Can the disjunct be satisfied in `target` for the given frontier binding?
pub(crate) fn disjunct_extendable(
    disjunct: &Disjunct,
    target: &Structure,
    frontier_binding: &BTreeMap<Var, Const>,
) -> bool {
    homs::satisfiable(&disjunct.atoms, target, frontier_binding)
}

impl Structure {
    /// Rule satisfaction: every body match extends to some head disjunct.
    /// For the empty body, some disjunct must hold outright.
    pub fn satisfies(&self, rule: &Dexr) -> bool {
        if rule.body.is_empty() {
            return rule
                .disjuncts
                .iter()
                .any(|d| disjunct_extendable(d, self, &BTreeMap::new()));
        }
        homs::for_each_match(&rule.body, self, &BTreeMap::new(), &mut |h| {
            rule.disjuncts.iter().any(|d| disjunct_extendable(d, self, h))
        })
    }

    /// Dependency satisfaction. Equality disjuncts hold when the body match
    /// identifies the two variables; an empty head makes the body a denial
    /// (falsity when the body is empty too).
    pub fn satisfies_dependency(&self, dd: &DisjunctiveDependency) -> bool {
        if dd.body.is_empty() {
            if dd.disjuncts.is_empty() {
                return false;
            }
            return dd.disjuncts.iter().any(|d| match d {
                DdDisjunct::Equality(_, _) => false,
                DdDisjunct::Exists(d) => disjunct_extendable(d, self, &BTreeMap::new()),
            });
        }
        homs::for_each_match(&dd.body, self, &BTreeMap::new(), &mut |h| {
            dd.disjuncts.iter().any(|d| match d {
                DdDisjunct::Equality(a, b) => h[a] == h[b],
                DdDisjunct::Exists(d) => disjunct_extendable(d, self, h),
            })
        })
    }

    pub fn satisfies_all(&self, rules: &[Dexr]) -> bool {
        rules.iter().all(|r| self.satisfies(r))
    }

    /// Index of the first violated rule, if any.
    pub fn violated_rule(&self, rules: &[Dexr]) -> Option<usize> {
        rules.iter().position(|r| !self.satisfies(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::Schema;

    fn atom(rel: &str, vars: &[&str]) -> Atom {
        Atom::new(rel, vars.iter().map(|v| Term::var(*v)).collect())
    }

    #[test]
    fn canonicalizes_names_and_dedups_disjuncts() {
        // R(Q) -> S(Q) | exists W. T(Q,W) | S(Q)
        let rule = Dexr::new(
            vec![atom("R", &["Q"])],
            vec![
                (BTreeSet::new(), vec![atom("S", &["Q"])]),
                (
                    [Var::new("W")].into_iter().collect(),
                    vec![atom("T", &["Q", "W"])],
                ),
                (BTreeSet::new(), vec![atom("S", &["Q"])]),
            ],
        )
        .unwrap();
        assert_eq!(
            rule.to_string(),
            "R(X1) -> S(X1) | exists Z1. T(X1,Z1)."
        );
        assert_eq!(rule.profile(), RuleProfile::new(1, 1, 2));
    }

    #[test]
    fn renaming_equivalent_rules_are_equal() {
        let a = Dexr::new(
            vec![atom("R", &["U", "V"])],
            vec![(BTreeSet::new(), vec![atom("R", &["V", "U"])])],
        )
        .unwrap();
        let b = Dexr::new(
            vec![atom("R", &["Y", "X"])],
            vec![(BTreeSet::new(), vec![atom("R", &["X", "Y"])])],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn drops_unused_existentials() {
        let rule = Dexr::new(
            vec![atom("R", &["X"])],
            vec![(
                [Var::new("Z"), Var::new("W")].into_iter().collect(),
                vec![atom("T", &["X", "Z"])],
            )],
        )
        .unwrap();
        assert_eq!(rule.profile().existentials, 1);
    }

    #[test]
    fn rejects_malformed_rules() {
        // Unbound head variable.
        assert!(Dexr::new(
            vec![atom("R", &["X"])],
            vec![(BTreeSet::new(), vec![atom("S", &["Y"])])],
        )
        .is_err());
        // Free variable in the head of an empty-body rule.
        assert!(Dexr::new(vec![], vec![(BTreeSet::new(), vec![atom("S", &["Y"])])]).is_err());
        // Existential shadowing a body variable.
        assert!(Dexr::new(
            vec![atom("R", &["X"])],
            vec![(
                [Var::new("X")].into_iter().collect(),
                vec![atom("S", &["X"])]
            )],
        )
        .is_err());
        // Constant in the body.
        assert!(Dexr::new(
            vec![Atom::new("R", vec![Term::cons("a")])],
            vec![(BTreeSet::new(), vec![atom("R", &["X"])])],
        )
        .is_err());
        // No disjuncts.
        assert!(Dexr::new(vec![atom("R", &["X"])], vec![]).is_err());
    }

    #[test]
    fn profiles() {
        // R(x,y) -> exists z. T(x,z)  has profile (2,1,1)
        let rule = Dexr::new(
            vec![atom("R", &["X", "Y"])],
            vec![(
                [Var::new("Z")].into_iter().collect(),
                vec![atom("T", &["X", "Z"])],
            )],
        )
        .unwrap();
        assert_eq!(rule.profile(), RuleProfile::new(2, 1, 1));
        assert!(rule.profile().fits_within(&RuleProfile::new(2, 1, 1)));
        assert!(!rule.profile().fits_within(&RuleProfile::new(1, 1, 1)));

        // R(x,y) -> x = y | exists z. S(z)  has dependency profile (2,1,1)
        let dd = DisjunctiveDependency::new(
            vec![atom("R", &["X", "Y"])],
            vec![
                DdDisjunct::Equality(Var::new("X"), Var::new("Y")),
                DisjunctiveDependency::exists_disjunct(
                    [Var::new("Z")].into_iter().collect(),
                    vec![atom("S", &["Z"])],
                ),
            ],
        )
        .unwrap();
        assert_eq!(dd.profile(), RuleProfile::new(2, 1, 1));
    }

    #[test]
    fn guardedness_and_linearity() {
        let linear = Dexr::new(
            vec![atom("R", &["X", "Y"])],
            vec![(BTreeSet::new(), vec![atom("R", &["Y", "X"])])],
        )
        .unwrap();
        assert!(linear.is_linear());
        assert!(linear.is_guarded());

        let guarded_not_linear = Dexr::new(
            vec![atom("R", &["X", "Y"]), atom("S", &["X"])],
            vec![(BTreeSet::new(), vec![atom("R", &["Y", "X"])])],
        )
        .unwrap();
        assert!(!guarded_not_linear.is_linear());
        assert!(guarded_not_linear.is_guarded());

        let unguarded = Dexr::new(
            vec![atom("S", &["X"]), atom("S", &["Y"])],
            vec![(BTreeSet::new(), vec![atom("R", &["X", "Y"])])],
        )
        .unwrap();
        assert!(!unguarded.is_guarded());
    }

    #[test]
    fn empty_head_dependencies() {
        let falsity = DisjunctiveDependency::falsity();
        assert_eq!(falsity.to_string(), "true -> false.");
        assert_eq!(falsity.profile(), RuleProfile::new(0, 0, 0));

        let denial = DisjunctiveDependency::new(vec![atom("R", &["X", "X"])], vec![]).unwrap();
        assert_eq!(denial.to_string(), "R(X1,X1) -> false.");

        let schema = Schema::shared([("R", 2)]).unwrap();
        let with_loop = Structure::from_facts(
            schema.clone(),
            [("R".to_string(), vec![Const::new("a"), Const::new("a")])],
        )
        .unwrap();
        let without_loop = Structure::from_facts(
            schema,
            [("R".to_string(), vec![Const::new("a"), Const::new("b")])],
        )
        .unwrap();
        assert!(!with_loop.satisfies_dependency(&denial));
        assert!(without_loop.satisfies_dependency(&denial));
        assert!(!with_loop.satisfies_dependency(&falsity));
        assert!(!without_loop.satisfies_dependency(&falsity));
    }
}
