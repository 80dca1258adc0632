//! The disjunctive chase.
//!
//! A trigger is a rule together with a body match that no head disjunct
//! extends (an *active* trigger witnesses a violation). Applying a trigger
//! branches: one child per disjunct, instantiating that disjunct's
//! existential variables with fresh constants `_n1, _n2, ..`. The chase
//! grows a tree breadth-first until every branch is saturated (no active
//! trigger) or a budget gives out. Only active triggers are ever applied,
//! and each branch schedules its pending triggers first-in-first-out, so
//! every persisting trigger is eventually resolved and two runs with the
//! same inputs produce the same tree.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::homs::Assignment;
use crate::rule::{disjunct_extendable, Dexr, Var};
use crate::structure::{Const, Structure};

/// Allocator for fresh constants in the reserved `_n` namespace.
#[derive(Debug, Clone)]
pub struct FreshCounter {
    next: usize,
}

impl FreshCounter {
    pub fn new() -> FreshCounter {
        FreshCounter { next: 1 }
    }

    /// A counter that will never collide with `_n<k>` names already present
    /// in the structure.
    pub fn past(structure: &Structure) -> FreshCounter {
        let mut next = 1;
        for c in structure.domain() {
            if let Some(rest) = c.name().strip_prefix("_n") {
                if let Ok(k) = rest.parse::<usize>() {
                    next = next.max(k + 1);
                }
            }
        }
        FreshCounter { next }
    }

    pub fn fresh(&mut self) -> Const {
        let c = Const::new(format!("_n{}", self.next));
        self.next += 1;
        c
    }
}

impl Default for FreshCounter {
    fn default() -> FreshCounter {
        FreshCounter::new()
    }
}

/// A rule paired with a body match. The match is empty for empty-body rules.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Trigger {
    pub rule_index: usize,
    pub rule: Dexr,
    pub assignment: Assignment,
}

impl Trigger {
    fn var_map(&self) -> BTreeMap<Var, Const> {
        self.assignment.var_map()
    }
}

/// Is `t` a trigger on `structure` (body matched) that no disjunct extends?
pub fn is_active(structure: &Structure, t: &Trigger) -> bool {
    let h = t.var_map();
    if !body_matched(structure, &t.rule, &h) {
        return false;
    }
    !t.rule
        .disjuncts()
        .iter()
        .any(|d| disjunct_extendable(d, structure, &h))
}

fn body_matched(structure: &Structure, rule: &Dexr, h: &BTreeMap<Var, Const>) -> bool {
    if rule.body_vars().iter().any(|v| !h.contains_key(v)) {
        return false;
    }
    rule.body().iter().all(|atom| {
        let ground = atom.substitute(h);
        let tuple: Option<Vec<Const>> = ground
            .args
            .iter()
            .map(|t| match t {
                crate::rule::Term::Const(c) => Some(c.clone()),
                crate::rule::Term::Var(_) => None,
            })
            .collect();
        tuple.is_some_and(|t| structure.has_fact(&ground.relation, &t))
    })
}

/// All active triggers of `rules` on `structure`, sorted by rule index and
/// then by match.
pub fn active_triggers(structure: &Structure, rules: &[Dexr]) -> Vec<Trigger> {
    let mut out = Vec::new();
    for (rule_index, rule) in rules.iter().enumerate() {
        if rule.body().is_empty() {
            let satisfied = rule
                .disjuncts()
                .iter()
                .any(|d| disjunct_extendable(d, structure, &BTreeMap::new()));
            if !satisfied {
                out.push(Trigger {
                    rule_index,
                    rule: rule.clone(),
                    assignment: Assignment::new(),
                });
            }
            continue;
        }
        for h in crate::homs::all_var_matches(rule.body(), structure, &BTreeMap::new()) {
            if !rule
                .disjuncts()
                .iter()
                .any(|d| disjunct_extendable(d, structure, &h))
            {
                out.push(Trigger {
                    rule_index,
                    rule: rule.clone(),
                    assignment: Assignment::from_var_map(&h),
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.rule_index, &a.assignment).cmp(&(b.rule_index, &b.assignment))
    });
    out
}

/// Applies an active trigger: one successor structure per head disjunct,
/// with that disjunct's existential variables bound to fresh constants.
pub fn apply_trigger(
    structure: &Structure,
    t: &Trigger,
    fresh: &mut FreshCounter,
) -> Result<Vec<Structure>> {
    let h = t.var_map();
    if !body_matched(structure, &t.rule, &h) {
        return Err(Error::NotATrigger(format!(
            "match {} does not send the body of `{}` into the structure",
            t.assignment, t.rule
        )));
    }
    let mut out = Vec::new();
    for disjunct in t.rule.disjuncts() {
        let mut extended = h.clone();
        for z in disjunct.exist_vars() {
            extended.insert(z.clone(), fresh.fresh());
        }
        let mut child = structure.clone();
        for atom in disjunct.atoms() {
            let ground = atom.substitute(&extended);
            let tuple: Vec<Const> = ground
                .args
                .iter()
                .map(|t| match t {
                    crate::rule::Term::Const(c) => c.clone(),
                    crate::rule::Term::Var(v) => {
                        unreachable!("unbound head variable `{v}` after extension")
                    }
                })
                .collect();
            child.add_fact(&ground.relation, tuple)?;
        }
        out.push(child);
    }
    Ok(out)
}

/// Limits on chase exploration. A branch that would exceed a limit is cut
/// and counted as truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChaseBudget {
    /// Maximal tree depth (trigger applications along a branch).
    pub max_depth: usize,
    /// Maximal total number of tree nodes.
    pub max_nodes: usize,
    /// Maximal domain size of any structure in the tree.
    pub max_domain: usize,
}

impl Default for ChaseBudget {
    fn default() -> ChaseBudget {
        ChaseBudget {
            max_depth: 64,
            max_nodes: 10_000,
            max_domain: 512,
        }
    }
}

/// A node of a retained chase tree.
#[derive(Debug, Clone)]
pub struct ChaseNode {
    pub structure: Structure,
    /// The trigger applied at this node (absent for leaves).
    pub applied: Option<Trigger>,
    pub children: Vec<ChaseNode>,
    pub depth: usize,
}

/// What the chase produced.
#[derive(Debug, Clone)]
pub struct ChaseOutcome {
    /// Saturated results, in the order branches completed.
    pub saturated: Vec<Structure>,
    /// Number of branches cut by the budget.
    pub truncated: usize,
    /// The explored tree, when requested.
    pub tree: Option<ChaseNode>,
}

impl ChaseOutcome {
    /// True when the tree was explored completely.
    pub fn complete(&self) -> bool {
        self.truncated == 0
    }
}

/// Per-branch FIFO discipline: pending triggers are inherited from the
/// parent; when they run out, the branch looks for newly active ones.
#[derive(Debug, Clone, Default)]
pub(crate) struct BranchQueue {
    queue: VecDeque<Trigger>,
}

impl BranchQueue {
    /// The oldest still-active pending trigger, refilling from
    /// `active_triggers` when the queue empties. `None` means saturated.
    pub(crate) fn next_active(&mut self, structure: &Structure, rules: &[Dexr]) -> Option<Trigger> {
        loop {
            match self.queue.pop_front() {
                Some(t) => {
                    if is_active(structure, &t) {
                        return Some(t);
                    }
                }
                None => {
                    let fresh = active_triggers(structure, rules);
                    if fresh.is_empty() {
                        return None;
                    }
                    self.queue = fresh.into();
                }
            }
        }
    }
}

struct TreeArena {
    nodes: Vec<(Structure, Option<Trigger>, Vec<usize>, usize)>,
}

impl TreeArena {
    fn assemble(&self, idx: usize) -> ChaseNode {
        let (structure, applied, children, depth) = &self.nodes[idx];
        ChaseNode {
            structure: structure.clone(),
            applied: applied.clone(),
            children: children.iter().map(|&c| self.assemble(c)).collect(),
            depth: *depth,
        }
    }
}

/// Runs the disjunctive chase of `structure` under `rules`.
pub fn chase(structure: &Structure, rules: &[Dexr], budget: &ChaseBudget) -> ChaseOutcome {
    chase_impl(structure, rules, budget, false)
}

/// Like [`chase`], but the outcome retains the explored tree.
pub fn chase_with_tree(
    structure: &Structure,
    rules: &[Dexr],
    budget: &ChaseBudget,
) -> ChaseOutcome {
    chase_impl(structure, rules, budget, true)
}

fn chase_impl(
    structure: &Structure,
    rules: &[Dexr],
    budget: &ChaseBudget,
    keep_tree: bool,
) -> ChaseOutcome {
    struct Work {
        structure: Structure,
        depth: usize,
        queue: BranchQueue,
        node: usize,
    }
    let mut arena = TreeArena { nodes: Vec::new() };
    if keep_tree {
        arena.nodes.push((structure.clone(), None, Vec::new(), 0));
    }
    let mut fresh = FreshCounter::past(structure);
    let mut outcome = ChaseOutcome {
        saturated: Vec::new(),
        truncated: 0,
        tree: None,
    };
    let mut nodes_used = 1usize;
    let mut fifo: VecDeque<Work> = VecDeque::new();
    fifo.push_back(Work {
        structure: structure.clone(),
        depth: 0,
        queue: BranchQueue::default(),
        node: 0,
    });
    while let Some(mut work) = fifo.pop_front() {
        match work.queue.next_active(&work.structure, rules) {
            None => outcome.saturated.push(work.structure),
            Some(t) => {
                if work.depth + 1 > budget.max_depth {
                    outcome.truncated += 1;
                    continue;
                }
                let children = apply_trigger(&work.structure, &t, &mut fresh)
                    .expect("scheduled triggers are active");
                if keep_tree {
                    arena.nodes[work.node].1 = Some(t);
                }
                for child in children {
                    if nodes_used >= budget.max_nodes || child.domain_size() > budget.max_domain {
                        outcome.truncated += 1;
                        continue;
                    }
                    nodes_used += 1;
                    let node = if keep_tree {
                        arena
                            .nodes
                            .push((child.clone(), None, Vec::new(), work.depth + 1));
                        let id = arena.nodes.len() - 1;
                        arena.nodes[work.node].2.push(id);
                        id
                    } else {
                        0
                    };
                    fifo.push_back(Work {
                        structure: child,
                        depth: work.depth + 1,
                        queue: work.queue.clone(),
                        node,
                    });
                }
            }
        }
    }
    if keep_tree {
        outcome.tree = Some(arena.assemble(0));
    }
    outcome
}

/// Renders a retained chase tree, one node per line:
/// `depth rule# disjunct# +added-facts` (1-based indices; `-` at the root).
pub fn render_tree(root: &ChaseNode) -> String {
    fn added_facts(parent: Option<&Structure>, node: &Structure) -> String {
        let mut parts = Vec::new();
        for (rel, tuple) in node.facts() {
            if parent.is_some_and(|p| p.has_fact(rel, tuple)) {
                continue;
            }
            let args = tuple
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            parts.push(format!("{rel}({args})"));
        }
        parts.join(",")
    }
    fn walk(
        out: &mut String,
        node: &ChaseNode,
        parent: Option<&Structure>,
        label: Option<(usize, usize)>,
    ) {
        let indent = "  ".repeat(node.depth);
        let (rule, disjunct) = match label {
            Some((r, d)) => (format!("{}", r + 1), format!("{}", d + 1)),
            None => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            out,
            "{indent}{} {rule} {disjunct} +{}",
            node.depth,
            added_facts(parent, &node.structure)
        );
        for (i, child) in node.children.iter().enumerate() {
            let rule_index = node
                .applied
                .as_ref()
                .map(|t| t.rule_index)
                .unwrap_or_default();
            walk(out, child, Some(&node.structure), Some((rule_index, i)));
        }
    }
    let mut out = String::new();
    walk(&mut out, root, None, None);
    out
}
