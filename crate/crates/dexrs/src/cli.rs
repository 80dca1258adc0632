//! Command-line front end: every capability of the library on files, with
//! deterministic text and JSON output.
//!
//! Exit codes map the three-valued verdicts onto the shell: `0` for success
//! or a positive verdict, `1` for a definitive negative (a violated rule, a
//! non-entailment, incompatibility, a certified rewrite failure), `2` when a
//! budget ran out before a certificate either way, and `3` for usage or
//! parse errors.

use std::fmt;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chase::{chase, chase_with_tree, render_tree, ChaseBudget};
use crate::diagram::{
    build_diagram, candidate_substructures, check_compat_with, diagram_to_dd, neg_candidates,
    subsets_up_to, CompatVariant, CompatVerdict, NegConjunction,
};
use crate::entailment::{entails_dd, Verdict};
use crate::error::{Error, Result};
use crate::product::{direct_product, repairable_direct_product};
use crate::rewrite::{rewrite_guarded_to_linear, BoundVariant, RewriteConfig, RewriteStatus};
use crate::rule::{DisjunctiveDependency, RuleProfile};
use crate::schema::Schema;
use crate::structure::{Const, Structure};
use crate::syntax::{
    parse_dependency, parse_document, parse_document_with_schema, parse_structure, SourceDocument,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

macro_rules! line {
    ($buf:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($buf, $($arg)*);
    }};
}

#[derive(Parser, Debug)]
#[command(
    name = "dexr",
    version,
    about = "Reasoning toolkit for disjunctive existential rules over finite structures"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum VariantArg {
    Plain,
    Linear,
    Guarded,
}

impl From<VariantArg> for CompatVariant {
    fn from(v: VariantArg) -> CompatVariant {
        match v {
            VariantArg::Plain => CompatVariant::Plain,
            VariantArg::Linear => CompatVariant::Linear,
            VariantArg::Guarded => CompatVariant::Guarded,
        }
    }
}

/// Chase budget flags shared by the searching subcommands.
#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Maximum chase tree depth.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_depth: Option<u64>,
    /// Maximum number of chase tree nodes.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_nodes: Option<u64>,
    /// Maximum domain size of any chase node.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_domain: Option<u64>,
}

impl BudgetArgs {
    fn to_budget(&self) -> ChaseBudget {
        let d = ChaseBudget::default();
        ChaseBudget {
            max_depth: self.max_depth.map_or(d.max_depth, |v| v as usize),
            max_nodes: self.max_nodes.map_or(d.max_nodes, |v| v as usize),
            max_domain: self.max_domain.map_or(d.max_domain, |v| v as usize),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a source file.
    Check { file: PathBuf },
    /// Report which rules of a file a structure satisfies.
    Model {
        file: PathBuf,
        /// Structure file (.dst).
        #[arg(long)]
        structure: PathBuf,
    },
    /// Run the disjunctive chase and print the saturated results.
    Chase {
        file: PathBuf,
        /// Structure file (.dst) to start from.
        #[arg(long)]
        structure: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Also print the chase tree.
        #[arg(long)]
        tree: bool,
    },
    /// Direct product of two structures, optionally repaired against rules.
    Product {
        left: PathBuf,
        right: PathBuf,
        /// Rule file: search the chase of the product for a repair.
        #[arg(long)]
        repair: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Emit the critical structure of a file's schema and check its rules.
    Critical {
        file: PathBuf,
        /// Number of constants.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// List the negatable conjunctions and diagrams of a substructure.
    Diagram {
        rules: PathBuf,
        /// Reference structure file (.dst).
        #[arg(long)]
        structure: PathBuf,
        /// Substructure: comma-separated constants (induced) or one fact.
        #[arg(long = "k-sub", value_name = "SPEC")]
        k_sub: String,
        /// Existential variables available to negated conjunctions.
        #[arg(long)]
        m: usize,
        /// Maximum number of negated conjunctions per diagram.
        #[arg(long)]
        l: usize,
        /// Family the substructure must belong to.
        #[arg(long, value_enum, default_value_t = VariantArg::Plain)]
        variant: VariantArg,
    },
    /// Check diagrammatic compatibility of a rule set with a structure.
    Compat {
        rules: PathBuf,
        /// Reference structure file (.dst).
        #[arg(long)]
        structure: PathBuf,
        /// Substructure size bound.
        #[arg(long)]
        n: usize,
        /// Existential variables per negated conjunction.
        #[arg(long)]
        m: usize,
        /// Negated conjunctions per diagram.
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Plain)]
        variant: VariantArg,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Three-valued entailment with certificates.
    Entail {
        rules: PathBuf,
        /// Conclusion rule or dependency, inline.
        #[arg(long, required_unless_present = "rules_file", conflicts_with = "rules_file")]
        rule: Option<String>,
        /// File of conclusion rules, each checked in order.
        #[arg(long = "rules", value_name = "OTHER")]
        rules_file: Option<PathBuf>,
        /// Domain size bound for the countermodel scan.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        countermodel_bound: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Rewrite a guarded rule set into an equivalent linear one.
    Rewrite {
        rules: PathBuf,
        /// Body variable bound (default: inferred from the input).
        #[arg(long)]
        n: Option<usize>,
        /// Existential variable bound (default: inferred from the input).
        #[arg(long)]
        m: Option<usize>,
        /// Disjunct bound of the input profile (default: inferred).
        #[arg(long)]
        l: Option<usize>,
        /// Override the computed head-width bound l'.
        #[arg(long)]
        lp: Option<usize>,
        /// Cap on atoms per candidate head disjunct.
        #[arg(long)]
        p: Option<usize>,
        /// Use the alternate published head-width formula.
        #[arg(long)]
        alg1_bound: bool,
        /// Keep every entailed candidate instead of minimizing.
        #[arg(long)]
        no_minimize: bool,
        /// Candidate enumeration cap; exceeding it yields unknown.
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        candidate_cap: u64,
        /// Domain size bound for countermodel scans.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        countermodel_bound: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

/// Parses `args` and runs the selected subcommand, writing all output to
/// `out` in one deterministic flush. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = out.write_all(err.render().to_string().as_bytes());
            return if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let format = cli.format;
    let mut buf = String::new();
    let code = match execute(cli.command, format, &mut buf) {
        Ok(code) => code,
        Err(e) => {
            buf.clear();
            emit_error(format, &mut buf, &e);
            match e {
                Error::Exhausted(_) => EXIT_UNKNOWN,
                _ => EXIT_USAGE,
            }
        }
    };
    let _ = out.write_all(buf.as_bytes());
    code
}

fn emit_error(format: Format, buf: &mut String, e: &dyn fmt::Display) {
    match format {
        Format::Text => line!(buf, "error: {e}"),
        Format::Json => emit_json(buf, &json!({ "status": "error", "error": e.to_string() })),
    }
}

fn emit_json(buf: &mut String, value: &Value) {
    line!(
        buf,
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_document(path: &Path) -> Result<SourceDocument> {
    parse_document(&read_file(path)?)
}

fn load_structure(path: &Path, schema: Option<Arc<Schema>>) -> Result<Structure> {
    parse_structure(&read_file(path)?, schema)
}

/// One structure on a single line, for list-shaped output.
fn inline(s: &Structure) -> String {
    if s.fact_count() == 0 && s.domain_size() == 0 {
        "(empty)".to_string()
    } else {
        s.to_string().replace('\n', " ")
    }
}

fn push_structure(buf: &mut String, s: &Structure) {
    let text = s.to_string();
    if !text.is_empty() {
        line!(buf, "{text}");
    }
}

fn execute(command: Command, format: Format, buf: &mut String) -> Result<i32> {
    match command {
        Command::Check { file } => cmd_check(&file, format, buf),
        Command::Model { file, structure } => cmd_model(&file, &structure, format, buf),
        Command::Chase {
            file,
            structure,
            budget,
            tree,
        } => cmd_chase(&file, &structure, &budget.to_budget(), tree, format, buf),
        Command::Product {
            left,
            right,
            repair,
            budget,
        } => cmd_product(&left, &right, repair.as_deref(), &budget.to_budget(), format, buf),
        Command::Critical { file, k } => cmd_critical(&file, k as usize, format, buf),
        Command::Diagram {
            rules,
            structure,
            k_sub,
            m,
            l,
            variant,
        } => cmd_diagram(&rules, &structure, &k_sub, m, l, variant, format, buf),
        Command::Compat {
            rules,
            structure,
            n,
            m,
            l,
            variant,
            budget,
        } => cmd_compat(
            &rules,
            &structure,
            RuleProfile::new(n, m, l),
            variant,
            &budget.to_budget(),
            format,
            buf,
        ),
        Command::Entail {
            rules,
            rule,
            rules_file,
            countermodel_bound,
            budget,
        } => cmd_entail(
            &rules,
            rule.as_deref(),
            rules_file.as_deref(),
            countermodel_bound as usize,
            &budget.to_budget(),
            format,
            buf,
        ),
        Command::Rewrite {
            rules,
            n,
            m,
            l,
            lp,
            p,
            alg1_bound,
            no_minimize,
            candidate_cap,
            countermodel_bound,
            budget,
        } => {
            let overrides = (n, m, l);
            let cfg = RewriteConfig {
                profile: None, // resolved against the input inside cmd_rewrite
                l_prime_override: lp,
                bound_variant: if alg1_bound {
                    BoundVariant::Alternate
                } else {
                    BoundVariant::Proved
                },
                max_atoms_per_disjunct: p,
                chase_budget: budget.to_budget(),
                countermodel_bound: countermodel_bound as usize,
                candidate_cap: candidate_cap as usize,
                minimize: !no_minimize,
            };
            cmd_rewrite(&rules, overrides, cfg, format, buf)
        }
    }
}

fn cmd_check(file: &Path, format: Format, buf: &mut String) -> Result<i32> {
    let doc = load_document(file)?;
    match format {
        Format::Text => {
            line!(buf, "{}", doc.schema);
            line!(buf, "constants: {}", doc.structure.domain_size());
            line!(buf, "facts: {}", doc.structure.fact_count());
            line!(buf, "rules: {}", doc.rules.len());
            line!(buf, "dependencies: {}", doc.dependencies.len());
            line!(buf, "ok");
        }
        Format::Json => {
            let schema: Vec<String> = doc
                .schema
                .relations()
                .iter()
                .map(|r| format!("{}/{}", r.name, r.arity))
                .collect();
            emit_json(
                buf,
                &json!({
                    "status": "ok",
                    "schema": schema,
                    "constants": doc.structure.domain_size(),
                    "facts": doc.structure.fact_count(),
                    "rules": doc.rules.len(),
                    "dependencies": doc.dependencies.len(),
                }),
            );
        }
    }
    Ok(EXIT_OK)
}

fn cmd_model(file: &Path, structure: &Path, format: Format, buf: &mut String) -> Result<i32> {
    let doc = load_document(file)?;
    let s = load_structure(structure, Some(doc.schema.clone()))?;
    let mut rows: Vec<(String, bool)> = Vec::new();
    for rule in &doc.rules {
        rows.push((rule.to_string(), s.satisfies(rule)));
    }
    for dd in &doc.dependencies {
        rows.push((dd.to_string(), s.satisfies_dependency(dd)));
    }
    let all = rows.iter().all(|(_, sat)| *sat);
    match format {
        Format::Text => {
            for (idx, (text, sat)) in rows.iter().enumerate() {
                let tag = if *sat { "satisfied" } else { "violated " };
                line!(buf, "rule {}: {} {}", idx + 1, tag, text);
            }
            line!(buf, "model: {}", if all { "yes" } else { "no" });
        }
        Format::Json => {
            let rules: Vec<Value> = rows
                .iter()
                .map(|(text, sat)| json!({ "rule": text, "satisfied": sat }))
                .collect();
            emit_json(
                buf,
                &json!({
                    "status": if all { "model" } else { "not-model" },
                    "rules": rules,
                }),
            );
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_chase(
    file: &Path,
    structure: &Path,
    budget: &ChaseBudget,
    tree: bool,
    format: Format,
    buf: &mut String,
) -> Result<i32> {
    let doc = load_document(file)?;
    let s = load_structure(structure, Some(doc.schema.clone()))?;
    let outcome = if tree {
        chase_with_tree(&s, &doc.rules, budget)
    } else {
        chase(&s, &doc.rules, budget)
    };
    let rendered_tree = outcome.tree.as_ref().map(render_tree);
    match format {
        Format::Text => {
            if let Some(t) = &rendered_tree {
                line!(buf, "tree:");
                buf.push_str(t);
            }
            line!(buf, "saturated results: {}", outcome.saturated.len());
            line!(buf, "truncated branches: {}", outcome.truncated);
            for (idx, result) in outcome.saturated.iter().enumerate() {
                line!(buf, "--- result {}", idx + 1);
                push_structure(buf, result);
            }
        }
        Format::Json => {
            let results: Vec<String> =
                outcome.saturated.iter().map(Structure::to_string).collect();
            emit_json(
                buf,
                &json!({
                    "status": if outcome.complete() { "complete" } else { "truncated" },
                    "saturated": results,
                    "truncated": outcome.truncated,
                    "tree": rendered_tree,
                }),
            );
        }
    }
    Ok(if outcome.complete() {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    })
}

fn cmd_product(
    left: &Path,
    right: &Path,
    repair: Option<&Path>,
    budget: &ChaseBudget,
    format: Format,
    buf: &mut String,
) -> Result<i32> {
    let (product, repaired) = match repair {
        Some(rules_path) => {
            let doc = load_document(rules_path)?;
            let l = load_structure(left, Some(doc.schema.clone()))?;
            let r = load_structure(right, Some(doc.schema.clone()))?;
            (repairable_direct_product(&l, &r, &doc.rules, budget)?, true)
        }
        None => {
            // Infer each schema independently, then re-home both structures
            // on the union so either factor may use relations the other
            // doesn't mention.
            let l = load_structure(left, None)?;
            let r = load_structure(right, None)?;
            if l.schema() == r.schema() {
                (direct_product(&l, &r)?, false)
            } else {
                let mut merged: std::collections::BTreeMap<String, usize> =
                    std::collections::BTreeMap::new();
                for rel in l.schema().relations().iter().chain(r.schema().relations()) {
                    if *merged.entry(rel.name.clone()).or_insert(rel.arity) != rel.arity {
                        return Err(Error::Arity {
                            relation: rel.name.clone(),
                            expected: merged[&rel.name],
                            got: rel.arity,
                        });
                    }
                }
                let joint = Schema::shared(merged)?;
                let l = load_structure(left, Some(joint.clone()))?;
                let r = load_structure(right, Some(joint))?;
                (direct_product(&l, &r)?, false)
            }
        }
    };
    match format {
        Format::Text => {
            push_structure(buf, &product);
        }
        Format::Json => {
            emit_json(
                buf,
                &json!({
                    "status": "ok",
                    "repaired": repaired,
                    "structure": product.to_string(),
                }),
            );
        }
    }
    Ok(EXIT_OK)
}

fn cmd_critical(file: &Path, k: usize, format: Format, buf: &mut String) -> Result<i32> {
    let doc = load_document(file)?;
    let critical = Structure::critical(doc.schema.clone(), k);
    let rows: Vec<(String, bool)> = doc
        .rules
        .iter()
        .map(|rule| (rule.to_string(), critical.satisfies(rule)))
        .collect();
    let all = rows.iter().all(|(_, sat)| *sat);
    match format {
        Format::Text => {
            push_structure(buf, &critical);
            for (idx, (text, sat)) in rows.iter().enumerate() {
                let tag = if *sat { "satisfied" } else { "violated " };
                line!(buf, "rule {}: {} {}", idx + 1, tag, text);
            }
            line!(buf, "model: {}", if all { "yes" } else { "no" });
        }
        Format::Json => {
            let rules: Vec<Value> = rows
                .iter()
                .map(|(text, sat)| json!({ "rule": text, "satisfied": sat }))
                .collect();
            emit_json(
                buf,
                &json!({
                    "status": if all { "model" } else { "not-model" },
                    "structure": critical.to_string(),
                    "rules": rules,
                }),
            );
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_NEGATIVE })
}

/// Interprets a `--k-sub` spec against the reference structure: either a
/// comma-separated list of constants (the induced substructure) or a single
/// fact (the one-fact structure used by the linear variant).
fn parse_k_sub(spec: &str, i: &Structure) -> Result<Structure> {
    if spec.contains('(') {
        let trimmed = spec.trim();
        let text = if trimmed.ends_with('.') {
            trimmed.to_string()
        } else {
            format!("{trimmed}.")
        };
        parse_structure(&text, Some(i.schema().clone()))
    } else {
        let constants: std::collections::BTreeSet<Const> = spec
            .split(',')
            .map(str::trim)
            .filter(|part| !part.is_empty())
            .map(Const::new)
            .collect();
        i.induced_substructure(&constants)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_diagram(
    rules: &Path,
    structure: &Path,
    k_sub: &str,
    m: usize,
    l: usize,
    variant: VariantArg,
    format: Format,
    buf: &mut String,
) -> Result<i32> {
    let doc = load_document(rules)?;
    let i = load_structure(structure, Some(doc.schema.clone()))?;
    let k = parse_k_sub(k_sub, &i)?;
    let family = candidate_substructures(&i, k.domain_size().max(1), variant.into())?;
    if !family.contains(&k) {
        emit_error(
            format,
            buf,
            &format!(
                "--k-sub does not select a {} candidate substructure of the reference structure",
                match variant {
                    VariantArg::Plain => "plain",
                    VariantArg::Linear => "linear",
                    VariantArg::Guarded => "guarded",
                }
            ),
        );
        return Ok(EXIT_USAGE);
    }
    let candidates: Vec<NegConjunction> = neg_candidates(&k, &i, m)?.into_iter().collect();
    let mut diagrams: Vec<(String, String)> = Vec::new();
    for g in subsets_up_to(&candidates, l) {
        let diagram = build_diagram(&k, &i, &g)?;
        let dd = diagram_to_dd(&diagram)?;
        diagrams.push((diagram.to_string(), dd.to_string()));
    }
    match format {
        Format::Text => {
            line!(buf, "candidates: {}", candidates.len());
            for c in &candidates {
                line!(buf, "  {c}");
            }
            line!(buf, "diagrams: {}", diagrams.len());
            for (diagram, dd) in &diagrams {
                line!(buf, "  {diagram}");
                line!(buf, "    dd: {dd}");
            }
        }
        Format::Json => {
            let candidate_strings: Vec<String> =
                candidates.iter().map(NegConjunction::to_string).collect();
            let diagram_values: Vec<Value> = diagrams
                .iter()
                .map(|(diagram, dd)| json!({ "diagram": diagram, "dd": dd }))
                .collect();
            emit_json(
                buf,
                &json!({
                    "status": "ok",
                    "candidates": candidate_strings,
                    "diagrams": diagram_values,
                }),
            );
        }
    }
    Ok(EXIT_OK)
}

fn cmd_compat(
    rules: &Path,
    structure: &Path,
    profile: RuleProfile,
    variant: VariantArg,
    budget: &ChaseBudget,
    format: Format,
    buf: &mut String,
) -> Result<i32> {
    let doc = load_document(rules)?;
    let i = load_structure(structure, Some(doc.schema.clone()))?;
    let verdict = check_compat_with(&i, &doc.rules, &profile, variant.into(), budget)?;
    let code = match &verdict {
        CompatVerdict::Compatible { .. } => EXIT_OK,
        CompatVerdict::NotCompatible { .. } => EXIT_NEGATIVE,
        CompatVerdict::Unknown { .. } => EXIT_UNKNOWN,
    };
    match format {
        Format::Text => match &verdict {
            CompatVerdict::Compatible { witnesses } => {
                line!(buf, "compatible: yes ({} diagrams)", witnesses.len());
                for (diagram, witness) in witnesses {
                    line!(buf, "  {diagram}");
                    line!(buf, "    model: {}", inline(witness));
                }
            }
            CompatVerdict::NotCompatible { diagram } => {
                line!(buf, "compatible: no");
                line!(buf, "diagram: {diagram}");
            }
            CompatVerdict::Unknown { unresolved } => {
                line!(buf, "compatible: unknown ({} unresolved)", unresolved.len());
                for diagram in unresolved {
                    line!(buf, "  {diagram}");
                }
            }
        },
        Format::Json => {
            let value = match &verdict {
                CompatVerdict::Compatible { witnesses } => {
                    let list: Vec<Value> = witnesses
                        .iter()
                        .map(|(d, w)| json!({ "diagram": d.to_string(), "model": w.to_string() }))
                        .collect();
                    json!({ "status": "compatible", "witnesses": list })
                }
                CompatVerdict::NotCompatible { diagram } => {
                    json!({ "status": "not-compatible", "diagram": diagram.to_string() })
                }
                CompatVerdict::Unknown { unresolved } => {
                    let list: Vec<String> = unresolved.iter().map(|d| d.to_string()).collect();
                    json!({ "status": "unknown", "unresolved": list })
                }
            };
            emit_json(buf, &value);
        }
    }
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_entail(
    rules: &Path,
    rule: Option<&str>,
    rules_file: Option<&Path>,
    countermodel_bound: usize,
    budget: &ChaseBudget,
    format: Format,
    buf: &mut String,
) -> Result<i32> {
    let doc = load_document(rules)?;
    let mut conclusions: Vec<DisjunctiveDependency> = Vec::new();
    if let Some(text) = rule {
        conclusions.push(parse_dependency(text, Some(doc.schema.clone()))?);
    }
    if let Some(path) = rules_file {
        let other = parse_document_with_schema(&read_file(path)?, Some(doc.schema.clone()))?;
        conclusions.extend(other.rules.iter().map(|r| r.to_dependency()));
        conclusions.extend(other.dependencies.iter().cloned());
    }
    let mut max_depth = 0usize;
    let mut unknown: Vec<usize> = Vec::new();
    let mut failure: Option<(usize, Structure)> = None;
    for (idx, dd) in conclusions.iter().enumerate() {
        match entails_dd(&doc.rules, dd, &doc.schema, budget, countermodel_bound)? {
            Verdict::Entailed { depth } => max_depth = max_depth.max(depth),
            Verdict::NotEntailed { countermodel } => {
                failure = Some((idx, countermodel));
                break;
            }
            Verdict::Unknown => unknown.push(idx),
        }
    }
    let (status, code) = if failure.is_some() {
        ("not-entailed", EXIT_NEGATIVE)
    } else if unknown.is_empty() {
        ("entailed", EXIT_OK)
    } else {
        ("unknown", EXIT_UNKNOWN)
    };
    match format {
        Format::Text => match &failure {
            Some((idx, countermodel)) => {
                line!(buf, "verdict: not entailed");
                line!(buf, "rule: {}", conclusions[*idx]);
                line!(buf, "countermodel:");
                push_structure(buf, countermodel);
            }
            None if unknown.is_empty() => {
                line!(buf, "verdict: entailed");
                line!(buf, "depth: {max_depth}");
            }
            None => {
                line!(buf, "verdict: unknown");
                for idx in &unknown {
                    line!(buf, "unresolved: {}", conclusions[*idx]);
                }
            }
        },
        Format::Json => {
            let value = match &failure {
                Some((idx, countermodel)) => json!({
                    "status": status,
                    "rule": conclusions[*idx].to_string(),
                    "countermodel": countermodel.to_string(),
                }),
                None if unknown.is_empty() => json!({
                    "status": status,
                    "depth": max_depth,
                }),
                None => json!({
                    "status": status,
                    "unresolved": unknown
                        .iter()
                        .map(|idx| conclusions[*idx].to_string())
                        .collect::<Vec<String>>(),
                }),
            };
            emit_json(buf, &value);
        }
    }
    Ok(code)
}

fn cmd_rewrite(
    rules: &Path,
    overrides: (Option<usize>, Option<usize>, Option<usize>),
    mut cfg: RewriteConfig,
    format: Format,
    buf: &mut String,
) -> Result<i32> {
    let doc = load_document(rules)?;
    let (n, m, l) = overrides;
    if n.is_some() || m.is_some() || l.is_some() {
        let base = crate::rewrite::set_profile(&doc.rules).unwrap_or(RuleProfile::new(1, 0, 1));
        cfg.profile = Some(RuleProfile::new(
            n.unwrap_or(base.universals),
            m.unwrap_or(base.existentials),
            l.unwrap_or(base.disjuncts),
        ));
    }
    let result = rewrite_guarded_to_linear(&doc.rules, &doc.schema, &cfg)?;
    let code = match &result.status {
        RewriteStatus::Rewritten { .. } => EXIT_OK,
        RewriteStatus::Fail { .. } => EXIT_NEGATIVE,
        RewriteStatus::Unknown => EXIT_UNKNOWN,
    };
    match format {
        Format::Text => {
            line!(buf, "status: {}", result.status_name());
            line!(buf, "profile: {}", result.profile);
            line!(buf, "l': {}", result.l_prime);
            line!(buf, "candidates: {}", result.candidates);
            line!(buf, "entailed: {}", result.entailed);
            line!(buf, "unknown: {}", result.unknown);
            match &result.status {
                RewriteStatus::Rewritten { rules } => {
                    line!(buf, "rules:");
                    for rule in rules {
                        line!(buf, "{rule}");
                    }
                }
                RewriteStatus::Fail { countermodel } => match countermodel {
                    Some(cm) => {
                        line!(buf, "countermodel:");
                        push_structure(buf, cm);
                    }
                    None => {
                        line!(buf, "no linear rule within the bound is entailed");
                    }
                },
                RewriteStatus::Unknown => {}
            }
        }
        Format::Json => {
            emit_json(
                buf,
                &json!({
                    "candidates": result.candidates,
                    "entailed": result.entailed,
                    "unknown": result.unknown,
                    "status": result.status_name(),
                }),
            );
        }
    }
    Ok(code)
}
