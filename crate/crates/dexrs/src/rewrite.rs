//! Rewriting guarded rule sets into linear ones.
//!
//! A linear rule has at most one body atom. Whether a guarded set admits an
//! equivalent linear set is decidable by brute force once the head width is
//! bounded: if any equivalent linear set exists within profile `(n, m, ℓ)`,
//! one exists using at most `ℓ′ = ℓ·|S|·(n+m+1)^(m·ar(S))` disjuncts. The
//! rewriter therefore enumerates every canonical linear candidate within
//! `(n, m, ℓ′)`, keeps those entailed by the input, and checks that the kept
//! set entails the input back. Both checks run on the three-valued
//! entailment engine, so the rewriter reports `fail` only with a
//! countermodel in hand and surfaces budget starvation as `unknown`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::chase::ChaseBudget;
use crate::entailment::{entails, entails_set, SetVerdict, Verdict};
use crate::error::{Error, Result};
use crate::rule::{Atom, Dexr, RuleProfile, Term, Var};
use crate::schema::Schema;
use crate::structure::Structure;

/// Checks the profile preconditions shared by the bound formulas:
/// `n + m > 0` and `ℓ > 0`.
fn check_profile(profile: &RuleProfile) -> Result<()> {
    if profile.universals + profile.existentials == 0 {
        return Err(Error::InvalidProfile(
            "a rule profile needs at least one variable (n + m > 0)".into(),
        ));
    }
    if profile.disjuncts == 0 {
        return Err(Error::InvalidProfile(
            "a rule profile needs at least one disjunct (l > 0)".into(),
        ));
    }
    Ok(())
}

/// Which head-width bound to use for the rewriting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundVariant {
    /// `ℓ′ = ℓ · |S| · (n+m+1)^(m·ar(S))` — the proved bound.
    #[default]
    Proved,
    /// `ℓ′ = ℓ · |S| · (n+m)^(ar(S)·(n+1))` — a published variant kept for
    /// comparison.
    Alternate,
}

/// The head-width bound: how many disjuncts a linear rule may need to carry
/// the content of one guarded `(n,m,ℓ)`-rule over `schema`.
pub fn linearization_bound(
    schema: &Schema,
    profile: &RuleProfile,
    variant: BoundVariant,
) -> Result<BigUint> {
    check_profile(profile)?;
    let (n, m, l) = (
        profile.universals,
        profile.existentials,
        profile.disjuncts,
    );
    let size = BigUint::from(schema.len());
    let ar = schema.max_arity();
    let value = match variant {
        BoundVariant::Proved => {
            let base = BigUint::from(n + m + 1);
            BigUint::from(l) * size * pow(&base, m * ar)?
        }
        BoundVariant::Alternate => {
            let base = BigUint::from(n + m);
            BigUint::from(l) * size * pow(&base, ar * (n + 1))?
        }
    };
    Ok(value)
}

fn pow(base: &BigUint, exp: usize) -> Result<BigUint> {
    let exp = u32::try_from(exp).map_err(|_| {
        Error::InvalidProfile(format!("exponent {exp} is out of range"))
    })?;
    Ok(base.pow(exp))
}

/// Exact binomial coefficient `C(h, i)`.
fn binomial(h: &BigUint, i: usize) -> BigUint {
    if BigUint::from(i) > *h {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..i {
        num *= h - BigUint::from(j);
        den *= BigUint::from(j + 1);
    }
    num / den
}

const BOUND_SUM_LIMIT: usize = 100_000;

/// Upper bound on the number of canonical linear `(n,m,ℓ′)`-rules over a
/// schema: `|S| · n^(ar(S))` single-atom bodies — plus the empty body when
/// `m ≥ 1` admits fully existential heads — times `Σ_{i=1..ℓ′} C(H, i)`
/// heads, where `H` counts the available head conjunctions —
/// `2^(|S|·(n+m)^(ar(S)))` in general, or `Σ_{i=1..p} C(|S|·(n+m)^(ar(S)), i)`
/// when disjuncts carry at most `p` atoms.
pub fn candidate_count_bound(
    schema: &Schema,
    profile: &RuleProfile,
    l_prime: usize,
    max_atoms_per_disjunct: Option<usize>,
) -> Result<BigUint> {
    check_profile(profile)?;
    let (n, m) = (profile.universals, profile.existentials);
    let ar = schema.max_arity();
    let size = BigUint::from(schema.len());
    let atoms = &size * pow(&BigUint::from(n + m), ar)?;
    let h = match max_atoms_per_disjunct {
        None => {
            let bits = atoms.to_usize().ok_or_else(|| {
                Error::CandidateSpaceTooLarge("head-conjunction count overflows".into())
            })?;
            if bits > BOUND_SUM_LIMIT {
                return Err(Error::CandidateSpaceTooLarge(format!(
                    "2^{bits} head conjunctions are beyond exact arithmetic"
                )));
            }
            pow(&BigUint::from(2usize), bits)?
        }
        Some(p) => {
            if p > BOUND_SUM_LIMIT {
                return Err(Error::CandidateSpaceTooLarge(format!(
                    "p = {p} is beyond exact arithmetic"
                )));
            }
            let mut sum = BigUint::zero();
            for i in 1..=p {
                sum += binomial(&atoms, i);
            }
            sum
        }
    };
    let mut bodies = &size * pow(&BigUint::from(n), ar)?;
    if m >= 1 {
        // The enumeration also emits empty-body rules whose head variables
        // are all existential; count that body choice too.
        bodies += BigUint::one();
    }
    let head_terms = match (&h).to_usize() {
        Some(h_small) => l_prime.min(h_small),
        None => l_prime,
    };
    if head_terms > BOUND_SUM_LIMIT {
        return Err(Error::CandidateSpaceTooLarge(format!(
            "summing {head_terms} binomials is beyond exact arithmetic"
        )));
    }
    let mut heads = BigUint::zero();
    for i in 1..=head_terms {
        heads += binomial(&h, i);
    }
    Ok(bodies * heads)
}

const UNIVERSE_ATOM_LIMIT: usize = 16;

/// Deterministic, duplicate-free stream of every canonical linear rule with
/// at most `n` body variables, `m` existential variables per disjunct, and
/// `l_prime` disjuncts (optionally at most `p` atoms per disjunct).
///
/// Order: the empty body first (when `m ≥ 1`), then one body per relation
/// and variable pattern; within a body, heads by size and then
/// lexicographically over the disjunct universe.
pub fn enumerate_linear_dexrs(
    schema: &Arc<Schema>,
    profile: &RuleProfile,
    l_prime: usize,
    max_atoms_per_disjunct: Option<usize>,
) -> Result<LinearDexrs> {
    check_profile(profile)?;
    let (n, m) = (profile.universals, profile.existentials);
    let mut bodies: Vec<Vec<Atom>> = Vec::new();
    if m >= 1 {
        bodies.push(Vec::new());
    }
    for rel in schema.relations() {
        for pattern in var_patterns(rel.arity, n) {
            let args = pattern
                .into_iter()
                .map(|idx| Term::Var(Var::new(format!("X{idx}"))))
                .collect();
            bodies.push(vec![Atom::new(rel.name.clone(), args)]);
        }
    }
    let mut entries = Vec::new();
    for body in bodies {
        let universe = disjunct_universe(schema, &body, m, max_atoms_per_disjunct)?;
        if !universe.is_empty() {
            entries.push(BodyEntry { body, universe });
        }
    }
    Ok(LinearDexrs {
        entries,
        entry_idx: 0,
        size: 1,
        combo: Vec::new(),
        l_prime,
    })
}

/// Variable patterns for one atom of the given arity using at most `n`
/// distinct variables: restricted-growth sequences (each position either
/// repeats an earlier variable or introduces the next one), which are
/// exactly the canonical single-atom bodies.
fn var_patterns(arity: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(arity: usize, n: usize, used: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == arity {
            out.push(current.clone());
            return;
        }
        for next in 1..=(used + 1).min(n) {
            current.push(next);
            rec(arity, n, used.max(next), current, out);
            current.pop();
        }
    }
    rec(arity, n, 0, &mut current, &mut out);
    out
}

type DisjunctParts = (BTreeSet<Var>, Vec<Atom>);

/// All canonical disjuncts available to a given body: conjunctions over the
/// body variables plus at most `m` existential variables, deduplicated up to
/// renaming of the existentials.
fn disjunct_universe(
    schema: &Arc<Schema>,
    body: &[Atom],
    m: usize,
    max_atoms: Option<usize>,
) -> Result<Vec<DisjunctParts>> {
    let mut vars: Vec<Var> = body.iter().flat_map(Atom::vars).cloned().collect();
    vars.sort();
    vars.dedup();
    let exist_vars: BTreeSet<Var> = (1..=m).map(|i| Var::new(format!("Z{i}"))).collect();
    vars.extend(exist_vars.iter().cloned());
    let mut pool: Vec<Atom> = Vec::new();
    for rel in schema.relations() {
        let mut stack: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..rel.arity {
            let mut next = Vec::new();
            for partial in &stack {
                for v in &vars {
                    let mut ext = partial.clone();
                    ext.push(Term::Var(v.clone()));
                    next.push(ext);
                }
            }
            stack = next;
        }
        for args in stack {
            pool.push(Atom::new(rel.name.clone(), args));
        }
    }
    let subset_sizes: Vec<usize> = match max_atoms {
        Some(p) => (1..=p.min(pool.len())).collect(),
        None => {
            if pool.len() > UNIVERSE_ATOM_LIMIT {
                return Err(Error::CandidateSpaceTooLarge(format!(
                    "{} candidate head atoms need a per-disjunct atom limit \
                     (pass p) to stay enumerable",
                    pool.len()
                )));
            }
            (1..=pool.len()).collect()
        }
    };
    let mut canonical: BTreeSet<DisjunctParts> = BTreeSet::new();
    for size in subset_sizes {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let atoms: Vec<Atom> = combo.iter().map(|&i| pool[i].clone()).collect();
            let exist: BTreeSet<Var> = atoms
                .iter()
                .flat_map(Atom::vars)
                .filter(|v| exist_vars.contains(*v))
                .cloned()
                .collect();
            // A disjunct on an empty body must quantify all its variables.
            let admissible = !body.is_empty() || atoms.iter().flat_map(Atom::vars).all(|v| exist.contains(v));
            if admissible {
                let rule = Dexr::new(body.to_vec(), vec![(exist, atoms)])
                    .expect("universe disjuncts are well-formed");
                let d = &rule.disjuncts()[0];
                canonical.insert((d.exist_vars().clone(), d.atoms().to_vec()));
            }
            if !next_combination(&mut combo, pool.len()) {
                break;
            }
        }
    }
    // Smaller disjuncts first: single atoms, then growing conjunctions.
    let mut universe: Vec<DisjunctParts> = canonical.into_iter().collect();
    universe.sort_by(|a, b| {
        (a.1.len(), &a.1, &a.0).cmp(&(b.1.len(), &b.1, &b.0))
    });
    Ok(universe)
}

/// Advances `combo` to the next combination of its size over `0..n`;
/// returns false when exhausted.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - (k - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

struct BodyEntry {
    body: Vec<Atom>,
    universe: Vec<DisjunctParts>,
}

/// Iterator over canonical linear rules; see [`enumerate_linear_dexrs`].
pub struct LinearDexrs {
    entries: Vec<BodyEntry>,
    entry_idx: usize,
    size: usize,
    combo: Vec<usize>,
    l_prime: usize,
}

impl Iterator for LinearDexrs {
    type Item = Dexr;

    fn next(&mut self) -> Option<Dexr> {
        loop {
            let entry = self.entries.get(self.entry_idx)?;
            let max_size = self.l_prime.min(entry.universe.len());
            if self.size > max_size {
                self.entry_idx += 1;
                self.size = 1;
                self.combo.clear();
                continue;
            }
            if self.combo.is_empty() {
                self.combo = (0..self.size).collect();
            } else if !next_combination(&mut self.combo, entry.universe.len()) {
                self.size += 1;
                self.combo.clear();
                continue;
            }
            let disjuncts: Vec<DisjunctParts> = self
                .combo
                .iter()
                .map(|&i| entry.universe[i].clone())
                .collect();
            let rule = Dexr::new(entry.body.clone(), disjuncts.clone())
                .expect("combined disjuncts are well-formed");
            // Emit only rules that are their own canonical form; any
            // renaming-equivalent duplicate has a canonical representative
            // that is emitted elsewhere. The head is compared as a set —
            // construction sorts disjuncts, the universe sorts by size.
            let selected: BTreeSet<DisjunctParts> = disjuncts.into_iter().collect();
            let rebuilt: BTreeSet<DisjunctParts> = rule
                .disjuncts()
                .iter()
                .map(|d| (d.exist_vars().clone(), d.atoms().to_vec()))
                .collect();
            if rule.body() == entry.body && rebuilt == selected {
                return Some(rule);
            }
        }
    }
}

/// Tuning for [`rewrite_guarded_to_linear`].
#[derive(Debug, Clone)]
pub struct RewriteConfig {
    /// Target profile `(n, m, ℓ)`; inferred from the input set when absent.
    pub profile: Option<RuleProfile>,
    /// Overrides the computed head-width bound ℓ′.
    pub l_prime_override: Option<usize>,
    /// Which published ℓ′ formula to use.
    pub bound_variant: BoundVariant,
    /// Cap on atoms per head disjunct (`p`); also keeps enumeration small.
    pub max_atoms_per_disjunct: Option<usize>,
    pub chase_budget: ChaseBudget,
    pub countermodel_bound: usize,
    /// Enumeration cap: more canonical candidates than this yields Unknown.
    pub candidate_cap: usize,
    /// Greedily drop candidates whose removal preserves the equivalence.
    pub minimize: bool,
}

impl Default for RewriteConfig {
    fn default() -> RewriteConfig {
        RewriteConfig {
            profile: None,
            l_prime_override: None,
            bound_variant: BoundVariant::Proved,
            max_atoms_per_disjunct: None,
            chase_budget: ChaseBudget::default(),
            countermodel_bound: 3,
            candidate_cap: 100_000,
            minimize: true,
        }
    }
}

/// How a rewrite attempt ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RewriteStatus {
    /// An equivalent linear set was found and certified in both directions.
    Rewritten { rules: Vec<Dexr> },
    /// Certified impossible within the bound: either no linear rule at all
    /// is entailed by the input, or the entailed ones (with every candidate
    /// resolved) fail to entail the input, witnessed by a countermodel.
    Fail { countermodel: Option<Structure> },
    /// Budgets or caps ran out before a certificate either way.
    Unknown,
}

/// Result of [`rewrite_guarded_to_linear`] with the filter statistics.
#[derive(Debug, Clone)]
pub struct RewriteResult {
    pub status: RewriteStatus,
    /// Profile `(n, m, ℓ)` the rewrite ran with.
    pub profile: RuleProfile,
    /// Head-width bound ℓ′ used for enumeration.
    pub l_prime: usize,
    /// Canonical candidates enumerated (capped at the configured limit).
    pub candidates: usize,
    /// Candidates entailed by the input (size of Σ′ before minimization).
    pub entailed: usize,
    /// Candidates whose entailment check came back unknown.
    pub unknown: usize,
}

impl RewriteResult {
    pub fn status_name(&self) -> &'static str {
        match self.status {
            RewriteStatus::Rewritten { .. } => "rewritten",
            RewriteStatus::Fail { .. } => "fail",
            RewriteStatus::Unknown => "unknown",
        }
    }
}

/// The smallest profile accommodating every rule of a set.
pub fn set_profile(rules: &[Dexr]) -> Option<RuleProfile> {
    rules
        .iter()
        .map(Dexr::profile)
        .reduce(|a, b| RuleProfile {
            universals: a.universals.max(b.universals),
            existentials: a.existentials.max(b.existentials),
            disjuncts: a.disjuncts.max(b.disjuncts),
        })
}

/// Rewrites a guarded rule set into an equivalent linear one, if the
/// bounded candidate space contains one.
///
/// Every input rule must be guarded (empty body or one atom mentioning all
/// body variables). The search enumerates canonical linear candidates within
/// `(n, m, ℓ′)`, keeps those entailed by the input, and certifies the
/// reverse entailment; see [`RewriteStatus`] for the three outcomes.
pub fn rewrite_guarded_to_linear(
    rules: &[Dexr],
    schema: &Arc<Schema>,
    cfg: &RewriteConfig,
) -> Result<RewriteResult> {
    for (idx, rule) in rules.iter().enumerate() {
        rule.check_schema(schema)?;
        if !rule.is_guarded() {
            return Err(Error::NotGuarded(idx));
        }
    }
    let profile = cfg
        .profile
        .or_else(|| set_profile(rules))
        .unwrap_or(RuleProfile::new(1, 0, 1));
    check_profile(&profile)?;
    let l_prime = match cfg.l_prime_override {
        Some(v) => v,
        None => linearization_bound(schema, &profile, cfg.bound_variant)?
            .to_usize()
            .unwrap_or(usize::MAX),
    };
    let mut result = RewriteResult {
        status: RewriteStatus::Unknown,
        profile,
        l_prime,
        candidates: 0,
        entailed: 0,
        unknown: 0,
    };
    let mut sigma_prime: Vec<Dexr> = Vec::new();
    let mut capped = false;
    let stream = enumerate_linear_dexrs(
        schema,
        &profile,
        l_prime,
        cfg.max_atoms_per_disjunct,
    );
    let stream = match stream {
        Ok(stream) => stream,
        Err(Error::CandidateSpaceTooLarge(_)) => return Ok(result),
        Err(e) => return Err(e),
    };
    for candidate in stream {
        if result.candidates >= cfg.candidate_cap {
            capped = true;
            break;
        }
        result.candidates += 1;
        match entails(
            rules,
            &candidate,
            schema,
            &cfg.chase_budget,
            cfg.countermodel_bound,
        )? {
            Verdict::Entailed { .. } => {
                result.entailed += 1;
                sigma_prime.push(candidate);
            }
            Verdict::NotEntailed { .. } => {}
            Verdict::Unknown => result.unknown += 1,
        }
    }
    if capped {
        return Ok(result); // Unknown: the space was not exhausted.
    }
    if sigma_prime.is_empty() {
        if result.unknown == 0 {
            result.status = RewriteStatus::Fail { countermodel: None };
        }
        return Ok(result);
    }
    match entails_set(
        &sigma_prime,
        rules,
        schema,
        &cfg.chase_budget,
        cfg.countermodel_bound,
    )? {
        SetVerdict::Entailed { .. } => {
            if cfg.minimize {
                sigma_prime = minimize(sigma_prime, rules, schema, cfg)?;
            }
            result.status = RewriteStatus::Rewritten { rules: sigma_prime };
        }
        SetVerdict::NotEntailed { countermodel, .. } => {
            if result.unknown == 0 {
                result.status = RewriteStatus::Fail {
                    countermodel: Some(countermodel),
                };
            }
            // Otherwise an unresolved candidate might have closed the gap:
            // the countermodel refutes this Σ′, not every admissible one.
        }
        SetVerdict::Unknown { .. } => {}
    }
    Ok(result)
}

/// Greedy minimization: walk the entailed candidates from the most complex
/// (last enumerated) to the simplest and drop each whose removal keeps the
/// set non-empty and still entailing the input. Trying complex candidates
/// first biases the surviving set toward the simplest rules.
fn minimize(
    mut sigma_prime: Vec<Dexr>,
    rules: &[Dexr],
    schema: &Arc<Schema>,
    cfg: &RewriteConfig,
) -> Result<Vec<Dexr>> {
    let mut idx = sigma_prime.len();
    while idx > 0 {
        idx -= 1;
        if sigma_prime.len() == 1 {
            break;
        }
        let mut smaller = sigma_prime.clone();
        smaller.remove(idx);
        let still = entails_set(
            &smaller,
            rules,
            schema,
            &cfg.chase_budget,
            cfg.countermodel_bound,
        )?;
        if still.is_entailed() {
            sigma_prime = smaller;
        }
    }
    Ok(sigma_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_document;

    #[test]
    fn bound_arithmetic() {
        let s3 = Schema::new(vec![("R", 1), ("S", 1), ("T", 1)]).unwrap();
        assert_eq!(
            linearization_bound(&s3, &RuleProfile::new(1, 0, 2), BoundVariant::Proved).unwrap(),
            BigUint::from(6usize)
        );
        let s1 = Schema::new(vec![("R", 2)]).unwrap();
        assert_eq!(
            linearization_bound(&s1, &RuleProfile::new(1, 1, 1), BoundVariant::Proved).unwrap(),
            BigUint::from(9usize)
        );
        // m = 0 kills the exponent regardless of the rest.
        let wide = Schema::new(vec![("R", 4), ("S", 2)]).unwrap();
        assert_eq!(
            linearization_bound(&wide, &RuleProfile::new(3, 0, 5), BoundVariant::Proved).unwrap(),
            BigUint::from(10usize)
        );
        // The alternate formula really is different.
        assert_eq!(
            linearization_bound(&s3, &RuleProfile::new(1, 1, 1), BoundVariant::Alternate)
                .unwrap(),
            BigUint::from(3usize * 4) // 1·3·(1+1)^(1·2)
        );
        assert!(linearization_bound(&s3, &RuleProfile::new(0, 0, 1), BoundVariant::Proved)
            .is_err());
        assert!(linearization_bound(&s3, &RuleProfile::new(1, 0, 0), BoundVariant::Proved)
            .is_err());
    }

    #[test]
    fn candidate_count_arithmetic() {
        let r1 = Schema::new(vec![("R", 1)]).unwrap();
        // H = 2^(1·1) = 2; bound = 1·1·C(2,1) = 2.
        assert_eq!(
            candidate_count_bound(&r1, &RuleProfile::new(1, 0, 1), 1, None).unwrap(),
            BigUint::from(2usize)
        );
        // p = 1 refinement: H = C(3,1) = 3; bound = 3·1·C(3,1) = 9.
        let s3 = Schema::new(vec![("R", 1), ("S", 1), ("T", 1)]).unwrap();
        assert_eq!(
            candidate_count_bound(&s3, &RuleProfile::new(1, 0, 1), 1, Some(1)).unwrap(),
            BigUint::from(9usize)
        );
        // l' = 2 sums two binomials: 3·(C(3,1) + C(3,2)) = 18.
        assert_eq!(
            candidate_count_bound(&s3, &RuleProfile::new(1, 0, 2), 2, Some(1)).unwrap(),
            BigUint::from(18usize)
        );
    }

    #[test]
    fn enumeration_is_canonical_and_bounded() {
        let schema = Schema::shared(vec![("R", 1), ("S", 1)]).unwrap();
        let profile = RuleProfile::new(1, 0, 1);
        let rules: Vec<Dexr> =
            enumerate_linear_dexrs(&schema, &profile, 1, None).unwrap().collect();
        // Bodies R(X1) and S(X1); universe per body: R, S, R∧S.
        let printed: Vec<String> = rules.iter().map(|r| r.to_string()).collect();
        assert_eq!(
            printed,
            vec![
                "R(X1) -> R(X1).",
                "R(X1) -> S(X1).",
                "R(X1) -> R(X1), S(X1).",
                "S(X1) -> R(X1).",
                "S(X1) -> S(X1).",
                "S(X1) -> R(X1), S(X1).",
            ]
        );
        let bound = candidate_count_bound(&schema, &profile, 1, None).unwrap();
        assert!(BigUint::from(rules.len()) <= bound);
        // No duplicates up to renaming: all canonical forms distinct.
        let set: BTreeSet<&Dexr> = rules.iter().collect();
        assert_eq!(set.len(), rules.len());
    }

    #[test]
    fn enumeration_covers_existential_heads() {
        let schema = Schema::shared(vec![("R", 2)]).unwrap();
        let profile = RuleProfile::new(1, 1, 1);
        let rules: Vec<Dexr> =
            enumerate_linear_dexrs(&schema, &profile, 1, Some(1)).unwrap().collect();
        let printed: BTreeSet<String> = rules.iter().map(|r| r.to_string()).collect();
        // The empty body appears (m ≥ 1), as do frontier and existential mixes.
        assert!(printed.contains("true -> exists Z1. R(Z1,Z1)."));
        assert!(printed.contains("R(X1,X1) -> exists Z1. R(X1,Z1)."));
        assert!(printed.contains("R(X1,X1) -> R(X1,X1)."));
        for rule in &rules {
            assert!(rule.is_linear());
            assert!(rule.profile().fits_within(&RuleProfile::new(1, 1, 1)));
        }
    }

    #[test]
    fn already_linear_sets_round_trip() {
        let doc = parse_document("schema { R/2 S/1 T/1 } R(X1,X2) -> S(X1) | T(X1).").unwrap();
        let cfg = RewriteConfig {
            max_atoms_per_disjunct: Some(1),
            ..RewriteConfig::default()
        };
        let result = rewrite_guarded_to_linear(&doc.rules, &doc.schema, &cfg).unwrap();
        match &result.status {
            RewriteStatus::Rewritten { rules } => {
                // The minimized equivalent is the input rule itself.
                assert_eq!(rules.len(), 1);
                assert_eq!(rules[0], doc.rules[0]);
            }
            other => panic!("expected Rewritten, got {other:?}"),
        }
        assert!(result.entailed >= 1);
        assert_eq!(result.unknown, 0);
    }

    #[test]
    fn conjunctive_guard_cannot_be_linearized() {
        let doc = parse_document("schema { R/1 P/1 S/1 } R(X), P(X) -> S(X).").unwrap();
        // The rule is guarded: X is mentioned by both single-variable atoms.
        let result = rewrite_guarded_to_linear(
            &doc.rules,
            &doc.schema,
            &RewriteConfig::default(),
        )
        .unwrap();
        assert_eq!(result.l_prime, 3);
        assert_eq!(result.candidates, 189);
        assert_eq!(result.unknown, 0);
        match &result.status {
            RewriteStatus::Fail { countermodel } => {
                let cm = countermodel.as_ref().expect("certified fail");
                assert_eq!(cm.to_string(), "P(a).\nR(a).");
                assert!(!cm.satisfies_all(&doc.rules));
            }
            other => panic!("expected Fail, got {other:?}"),
        }
    }

    #[test]
    fn unguarded_input_is_rejected() {
        let doc = parse_document("schema { R/2 S/1 } R(X1,X2), S(X1) -> S(X2).").unwrap();
        // Guarded: R(X1,X2) mentions both variables — so craft a real
        // violation: two binary atoms sharing no covering atom.
        let doc2 =
            parse_document("schema { R/2 S/2 T/1 } R(X1,X2), S(X2,X3) -> T(X1).").unwrap();
        assert!(rewrite_guarded_to_linear(
            &doc.rules,
            &doc.schema,
            &RewriteConfig::default()
        )
        .is_ok());
        assert_eq!(
            rewrite_guarded_to_linear(&doc2.rules, &doc2.schema, &RewriteConfig::default())
                .unwrap_err(),
            Error::NotGuarded(0)
        );
    }

    #[test]
    fn empty_input_rewrites_to_tautologies() {
        let schema = Schema::shared(vec![("R", 1)]).unwrap();
        let result =
            rewrite_guarded_to_linear(&[], &schema, &RewriteConfig::default()).unwrap();
        match &result.status {
            RewriteStatus::Rewritten { rules } => {
                assert_eq!(rules.len(), 1); // minimized to one tautology
                let schema_models: Vec<Dexr> = rules.clone();
                // Tautologies: satisfied by every structure up to size 2.
                for size in 0..=2usize {
                    let domain: Vec<crate::structure::Const> = (0..size)
                        .map(|i| crate::structure::Const::new(format!("d{i}")))
                        .collect();
                    for mask in 0u32..(1 << size) {
                        let facts: Vec<(String, Vec<crate::structure::Const>)> = domain
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .map(|(_, c)| ("R".to_string(), vec![c.clone()]))
                            .collect();
                        let s = Structure::new(
                            schema.clone(),
                            domain.iter().cloned(),
                            facts,
                        )
                        .unwrap();
                        assert!(s.satisfies_all(&schema_models));
                    }
                }
            }
            other => panic!("expected Rewritten, got {other:?}"),
        }
    }

    #[test]
    fn candidate_cap_yields_unknown() {
        let doc = parse_document("schema { R/2 S/1 T/1 } R(X1,X2) -> S(X1) | T(X1).").unwrap();
        let cfg = RewriteConfig {
            max_atoms_per_disjunct: Some(1),
            candidate_cap: 3,
            ..RewriteConfig::default()
        };
        let result = rewrite_guarded_to_linear(&doc.rules, &doc.schema, &cfg).unwrap();
        assert_eq!(result.status, RewriteStatus::Unknown);
        assert_eq!(result.candidates, 3);
    }

    #[test]
    fn linear_input_rules_survive_the_filter() {
        // Candidate-filter monotonicity: a linear input rule within bounds
        // must be in Σ′, hence the rewrite succeeds.
        let doc = parse_document(
            "schema { R/1 S/1 } R(X) -> exists Z. S(Z). S(X) -> S(X).",
        )
        .unwrap();
        let cfg = RewriteConfig {
            max_atoms_per_disjunct: Some(1),
            ..RewriteConfig::default()
        };
        let result = rewrite_guarded_to_linear(&doc.rules, &doc.schema, &cfg).unwrap();
        match &result.status {
            RewriteStatus::Rewritten { rules } => {
                for rule in rules {
                    assert!(rule.is_linear());
                }
                // Minimization keeps something entailing R(X) -> ∃Z S(Z).
                let back = entails(
                    rules,
                    &doc.rules[0],
                    &doc.schema,
                    &ChaseBudget::default(),
                    3,
                )
                .unwrap();
                assert!(back.is_entailed());
            }
            other => panic!("expected Rewritten, got {other:?}"),
        }
    }
}
