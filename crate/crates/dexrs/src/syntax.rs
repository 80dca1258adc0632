//! Text syntax: parsing and canonical printing.
//!
//! A document is a sequence of statements, each ended by `.` (blocks use
//! braces instead): an optional `schema { R/2 S/1 }` declaration, `domain
//! { a b c }` blocks that widen the structure's domain, ground facts like
//! `R(a,b).`, and rules like `R(X,Y) -> S(X) | exists Z. T(Y,Z).`.
//!
//! Variables start with an uppercase letter, constants with a lowercase
//! letter (or are quoted, `"any text"`). `%` starts a line comment. When no
//! schema is declared, one is inferred: the first occurrence of each
//! relation fixes its arity. Constants beginning with `_` are reserved for
//! generated names (chase nulls, frozen bodies) and rejected.
//!
//! Printing is canonical: facts sorted, rule variables normalized, and
//! `parse(print(x))` returns `x` for every rule and structure.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rule::{Atom, DdDisjunct, Dexr, DisjunctiveDependency, Term, Var};
use crate::schema::Schema;
use crate::structure::{Const, Structure};

/// Where in the input something went wrong.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Classification of parse-time failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Malformed input: unexpected token, unterminated string, and so on.
    Syntax,
    /// An atom's argument count disagrees with the schema.
    Arity,
    /// A relation that the (declared or given) schema does not contain.
    UnknownRelation,
    /// A constant inside a rule, which must be constant-free.
    ConstantInRule,
    /// A variable inside a structure fact, which must be ground.
    VariableInFact,
    /// A constant in the reserved `_` namespace.
    ReservedConstant,
    /// A structurally invalid rule (unbound head variable, empty disjunct..).
    InvalidRule,
}

/// A parse failure with its position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at {pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
    pub message: String,
}

fn err<T>(pos: Pos, kind: ParseErrorKind, message: impl Into<String>) -> std::result::Result<T, ParseError> {
    Err(ParseError {
        pos,
        kind,
        message: message.into(),
    })
}

// ---------------------------------------------------------------- lexer --

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Upper(String),
    Lower(String),
    Quoted(String),
    Int(usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Pipe,
    Arrow,
    Eq,
    Slash,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Upper(s) | Tok::Lower(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "\"{s}\""),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Slash => write!(f, "`/`"),
        }
    }
}

fn lex(text: &str) -> std::result::Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    loop {
        let pos = Pos { line, col };
        let Some(&c) = chars.peek() else { break };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '(' => {
                bump!();
                out.push((Tok::LParen, pos));
            }
            ')' => {
                bump!();
                out.push((Tok::RParen, pos));
            }
            '{' => {
                bump!();
                out.push((Tok::LBrace, pos));
            }
            '}' => {
                bump!();
                out.push((Tok::RBrace, pos));
            }
            ',' => {
                bump!();
                out.push((Tok::Comma, pos));
            }
            '.' => {
                bump!();
                out.push((Tok::Dot, pos));
            }
            '|' => {
                bump!();
                out.push((Tok::Pipe, pos));
            }
            '=' => {
                bump!();
                out.push((Tok::Eq, pos));
            }
            '/' => {
                bump!();
                out.push((Tok::Slash, pos));
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push((Tok::Arrow, pos));
                } else {
                    return err(pos, ParseErrorKind::Syntax, "expected `->`");
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None | Some('\n') => {
                            return err(pos, ParseErrorKind::Syntax, "unterminated string")
                        }
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            _ => {
                                return err(
                                    pos,
                                    ParseErrorKind::Syntax,
                                    "unknown escape in string (only \\\" and \\\\)",
                                )
                            }
                        },
                        Some(c) => s.push(c),
                    }
                }
                if s.is_empty() {
                    return err(pos, ParseErrorKind::Syntax, "empty constant name");
                }
                out.push((Tok::Quoted(s), pos));
            }
            c if c.is_ascii_digit() => {
                let mut n = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        n.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let value: usize = n
                    .parse()
                    .map_err(|_| ParseError {
                        pos,
                        kind: ParseErrorKind::Syntax,
                        message: format!("number `{n}` out of range"),
                    })?;
                out.push((Tok::Int(value), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                if s.starts_with(|c: char| c.is_ascii_uppercase()) {
                    out.push((Tok::Upper(s), pos));
                } else {
                    out.push((Tok::Lower(s), pos));
                }
            }
            other => {
                return err(
                    pos,
                    ParseErrorKind::Syntax,
                    format!("unexpected character `{other}`"),
                );
            }
        }
    }
    Ok(out)
}

// --------------------------------------------------------------- parser --

#[derive(Debug, Clone)]
enum RawTerm {
    Var(String),
    Const(String),
}

#[derive(Debug, Clone)]
struct RawAtom {
    relation: String,
    args: Vec<(RawTerm, Pos)>,
    pos: Pos,
}

#[derive(Debug, Clone)]
enum RawDisjunct {
    Equality(String, String),
    Exists { vars: Vec<String>, atoms: Vec<RawAtom> },
}

#[derive(Debug, Clone)]
enum RawItem {
    Schema(Vec<(String, usize)>),
    Domain(Vec<(String, Pos)>),
    Fact(RawAtom),
    Rule {
        body: Vec<RawAtom>,
        /// `None` is a `false` head.
        head: Option<Vec<RawDisjunct>>,
    },
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks
            .get(self.at)
            .or_else(|| self.toks.last())
            .map(|(_, p)| *p)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.at).cloned();
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> std::result::Result<Pos, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some((t, p)) if t == *want => Ok(p),
            Some((t, p)) => err(p, ParseErrorKind::Syntax, format!("expected {want}, found {t}")),
            None => err(pos, ParseErrorKind::Syntax, format!("expected {want}, found end of input")),
        }
    }

    fn items(&mut self) -> std::result::Result<Vec<(RawItem, Pos)>, ParseError> {
        let mut out = Vec::new();
        while let Some(tok) = self.peek() {
            let pos = self.pos();
            match tok {
                Tok::Lower(w) if w == "schema" => {
                    self.next();
                    out.push((self.schema_block()?, pos));
                }
                Tok::Lower(w) if w == "domain" => {
                    self.next();
                    out.push((self.domain_block()?, pos));
                }
                _ => out.push((self.statement()?, pos)),
            }
        }
        Ok(out)
    }

    fn schema_block(&mut self) -> std::result::Result<RawItem, ParseError> {
        self.expect(&Tok::LBrace)?;
        let mut rels = Vec::new();
        loop {
            let pos = self.pos();
            match self.next() {
                Some((Tok::RBrace, _)) => break,
                Some((Tok::Upper(name) | Tok::Lower(name), _)) => {
                    self.expect(&Tok::Slash)?;
                    let apos = self.pos();
                    match self.next() {
                        Some((Tok::Int(arity), _)) => rels.push((name, arity)),
                        _ => return err(apos, ParseErrorKind::Syntax, "expected an arity"),
                    }
                }
                _ => {
                    return err(
                        pos,
                        ParseErrorKind::Syntax,
                        "expected a relation declaration or `}`",
                    )
                }
            }
        }
        Ok(RawItem::Schema(rels))
    }

    fn domain_block(&mut self) -> std::result::Result<RawItem, ParseError> {
        self.expect(&Tok::LBrace)?;
        let mut consts = Vec::new();
        loop {
            let pos = self.pos();
            match self.next() {
                Some((Tok::RBrace, _)) => break,
                Some((Tok::Lower(name), p)) => consts.push((name, p)),
                Some((Tok::Quoted(name), p)) => consts.push((name, p)),
                _ => {
                    return err(pos, ParseErrorKind::Syntax, "expected a constant or `}`");
                }
            }
        }
        Ok(RawItem::Domain(consts))
    }

    fn atom(&mut self) -> std::result::Result<RawAtom, ParseError> {
        let pos = self.pos();
        let relation = match self.next() {
            Some((Tok::Upper(s) | Tok::Lower(s), _)) => s,
            Some((t, p)) => {
                return err(p, ParseErrorKind::Syntax, format!("expected a relation name, found {t}"))
            }
            None => return err(pos, ParseErrorKind::Syntax, "expected a relation name"),
        };
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        loop {
            let tpos = self.pos();
            match self.next() {
                Some((Tok::Upper(v), p)) => args.push((RawTerm::Var(v), p)),
                Some((Tok::Lower(c) | Tok::Quoted(c), p)) => args.push((RawTerm::Const(c), p)),
                _ => return err(tpos, ParseErrorKind::Syntax, "expected a term"),
            }
            match self.next() {
                Some((Tok::Comma, _)) => continue,
                Some((Tok::RParen, _)) => break,
                Some((t, p)) => {
                    return err(p, ParseErrorKind::Syntax, format!("expected `,` or `)`, found {t}"))
                }
                None => return err(tpos, ParseErrorKind::Syntax, "unterminated atom"),
            }
        }
        Ok(RawAtom {
            relation,
            args,
            pos,
        })
    }

    /// One statement ended by `.`: a ground fact or a rule.
    fn statement(&mut self) -> std::result::Result<RawItem, ParseError> {
        // `true -> ...` empty-body rule.
        if matches!(self.peek(), Some(Tok::Lower(w)) if w == "true") {
            self.next();
            self.expect(&Tok::Arrow)?;
            let head = self.head()?;
            self.expect(&Tok::Dot)?;
            return Ok(RawItem::Rule { body: Vec::new(), head });
        }
        let mut atoms = vec![self.atom()?];
        loop {
            let pos = self.pos();
            match self.next() {
                Some((Tok::Dot, _)) => {
                    return if atoms.len() == 1 {
                        Ok(RawItem::Fact(atoms.pop().expect("one atom")))
                    } else {
                        err(
                            pos,
                            ParseErrorKind::Syntax,
                            "expected `->` after a multi-atom body",
                        )
                    };
                }
                Some((Tok::Comma, _)) => atoms.push(self.atom()?),
                Some((Tok::Arrow, _)) => {
                    let head = self.head()?;
                    self.expect(&Tok::Dot)?;
                    return Ok(RawItem::Rule { body: atoms, head });
                }
                Some((t, p)) => {
                    return err(p, ParseErrorKind::Syntax, format!("expected `,`, `->` or `.`, found {t}"))
                }
                None => return err(pos, ParseErrorKind::Syntax, "unterminated statement"),
            }
        }
    }

    fn head(&mut self) -> std::result::Result<Option<Vec<RawDisjunct>>, ParseError> {
        if matches!(self.peek(), Some(Tok::Lower(w)) if w == "false") {
            self.next();
            return Ok(None);
        }
        let mut disjuncts = vec![self.disjunct()?];
        while matches!(self.peek(), Some(Tok::Pipe)) {
            self.next();
            disjuncts.push(self.disjunct()?);
        }
        Ok(Some(disjuncts))
    }

    fn disjunct(&mut self) -> std::result::Result<RawDisjunct, ParseError> {
        // Equality: VAR = VAR.
        if let (Some(Tok::Upper(_)), Some(Tok::Eq)) = (self.peek(), self.peek2()) {
            let Some((Tok::Upper(a), _)) = self.next() else { unreachable!() };
            self.next(); // `=`
            let pos = self.pos();
            match self.next() {
                Some((Tok::Upper(b), _)) => return Ok(RawDisjunct::Equality(a, b)),
                _ => return err(pos, ParseErrorKind::Syntax, "expected a variable after `=`"),
            }
        }
        let mut vars = Vec::new();
        if matches!(self.peek(), Some(Tok::Lower(w)) if w == "exists") {
            self.next();
            loop {
                let pos = self.pos();
                match self.next() {
                    Some((Tok::Upper(v), _)) => vars.push(v),
                    Some((Tok::Dot, _)) => {
                        if vars.is_empty() {
                            return err(pos, ParseErrorKind::Syntax, "`exists` needs at least one variable");
                        }
                        break;
                    }
                    _ => {
                        return err(pos, ParseErrorKind::Syntax, "expected a variable or `.`")
                    }
                }
            }
        }
        let mut atoms = vec![self.atom()?];
        // Atoms are comma-separated; a comma is part of this disjunct.
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.next();
            atoms.push(self.atom()?);
        }
        Ok(RawDisjunct::Exists { vars, atoms })
    }
}

// ---------------------------------------------------------- elaboration --

/// One parsed declaration, in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocItemKind {
    SchemaDecl,
    DomainDecl,
    Fact,
    /// Index into [`SourceDocument::rules`].
    Rule(usize),
    /// Index into [`SourceDocument::dependencies`].
    Dependency(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocItem {
    pub pos: Pos,
    pub kind: DocItemKind,
}

/// A fully typed parsed document.
#[derive(Debug, Clone)]
pub struct SourceDocument {
    pub schema: Arc<Schema>,
    /// Whether the schema was declared (as opposed to inferred from use).
    pub schema_declared: bool,
    /// Facts and domain declarations, accumulated into one structure.
    pub structure: Structure,
    pub rules: Vec<Dexr>,
    pub dependencies: Vec<DisjunctiveDependency>,
    pub items: Vec<DocItem>,
}

fn check_constant(name: &str, pos: Pos) -> std::result::Result<Const, ParseError> {
    if name.starts_with('_') {
        return err(
            pos,
            ParseErrorKind::ReservedConstant,
            format!("constant `{name}` uses the reserved `_` namespace"),
        );
    }
    Ok(Const::new(name))
}

fn rule_atom(raw: &RawAtom, schema: &Schema) -> std::result::Result<Atom, ParseError> {
    schema_check(schema, raw)?;
    let mut args = Vec::new();
    for (t, p) in &raw.args {
        match t {
            RawTerm::Var(v) => args.push(Term::Var(Var::new(v.clone()))),
            RawTerm::Const(c) => {
                return err(
                    *p,
                    ParseErrorKind::ConstantInRule,
                    format!("constant `{c}` inside a rule (rules are constant-free)"),
                )
            }
        }
    }
    Ok(Atom::new(raw.relation.clone(), args))
}

fn schema_check(schema: &Schema, raw: &RawAtom) -> std::result::Result<(), ParseError> {
    match schema.arity(&raw.relation) {
        None => err(
            raw.pos,
            ParseErrorKind::UnknownRelation,
            format!("unknown relation `{}`", raw.relation),
        ),
        Some(a) if a != raw.args.len() => err(
            raw.pos,
            ParseErrorKind::Arity,
            format!(
                "relation `{}` has arity {a}, got {} arguments",
                raw.relation,
                raw.args.len()
            ),
        ),
        Some(_) => Ok(()),
    }
}

fn elaborate(
    raw_items: Vec<(RawItem, Pos)>,
    given_schema: Option<Arc<Schema>>,
) -> std::result::Result<SourceDocument, ParseError> {
    // Resolve the schema: declared block, caller-provided, or inferred.
    let mut declared: Option<(Arc<Schema>, Pos)> = None;
    for (item, pos) in &raw_items {
        if let RawItem::Schema(rels) = item {
            if declared.is_some() {
                return err(
                    *pos,
                    ParseErrorKind::Syntax,
                    "more than one schema declaration",
                );
            }
            let schema = Schema::new(rels.iter().map(|(n, a)| (n.clone(), *a))).map_err(|e| {
                ParseError {
                    pos: *pos,
                    kind: ParseErrorKind::Syntax,
                    message: e.to_string(),
                }
            })?;
            declared = Some((Arc::new(schema), *pos));
        }
    }
    let schema_declared = declared.is_some();
    let schema: Arc<Schema> = match (&declared, given_schema) {
        (Some((s, pos)), Some(given)) => {
            if **s != *given {
                return err(
                    *pos,
                    ParseErrorKind::Syntax,
                    format!("schema declaration {s} does not match the expected {given}"),
                );
            }
            given
        }
        (Some((s, _)), None) => s.clone(),
        (None, Some(given)) => given,
        (None, None) => {
            // Infer: first occurrence of each relation fixes its arity.
            let mut rels: Vec<(String, usize)> = Vec::new();
            let mut see = |raw: &RawAtom| -> std::result::Result<(), ParseError> {
                match rels.iter().find(|(n, _)| *n == raw.relation) {
                    Some((_, a)) if *a != raw.args.len() => err(
                        raw.pos,
                        ParseErrorKind::Arity,
                        format!(
                            "relation `{}` used with arity {} after arity {a}",
                            raw.relation,
                            raw.args.len()
                        ),
                    ),
                    Some(_) => Ok(()),
                    None => {
                        rels.push((raw.relation.clone(), raw.args.len()));
                        Ok(())
                    }
                }
            };
            for (item, _) in &raw_items {
                match item {
                    RawItem::Fact(a) => see(a)?,
                    RawItem::Rule { body, head } => {
                        for a in body {
                            see(a)?;
                        }
                        if let Some(disjuncts) = head {
                            for d in disjuncts {
                                if let RawDisjunct::Exists { atoms, .. } = d {
                                    for a in atoms {
                                        see(a)?;
                                    }
                                }
                            }
                        }
                    }
                    _ => {}
                }
            }
            Arc::new(Schema::new(rels).map_err(|e| ParseError {
                pos: Pos { line: 1, col: 1 },
                kind: ParseErrorKind::Syntax,
                message: e.to_string(),
            })?)
        }
    };

    let mut doc = SourceDocument {
        schema: schema.clone(),
        schema_declared,
        structure: Structure::empty(schema.clone()),
        rules: Vec::new(),
        dependencies: Vec::new(),
        items: Vec::new(),
    };

    for (item, pos) in raw_items {
        match item {
            RawItem::Schema(_) => doc.items.push(DocItem {
                pos,
                kind: DocItemKind::SchemaDecl,
            }),
            RawItem::Domain(consts) => {
                for (name, cpos) in consts {
                    let c = check_constant(&name, cpos)?;
                    doc.structure.add_domain_element(c);
                }
                doc.items.push(DocItem {
                    pos,
                    kind: DocItemKind::DomainDecl,
                });
            }
            RawItem::Fact(raw) => {
                schema_check(&schema, &raw)?;
                let mut tuple = Vec::new();
                for (t, tpos) in &raw.args {
                    match t {
                        RawTerm::Var(v) => {
                            return err(
                                *tpos,
                                ParseErrorKind::VariableInFact,
                                format!("variable `{v}` inside a fact (facts are ground)"),
                            )
                        }
                        RawTerm::Const(c) => tuple.push(check_constant(c, *tpos)?),
                    }
                }
                doc.structure
                    .add_fact(&raw.relation, tuple)
                    .map_err(|e| ParseError {
                        pos,
                        kind: ParseErrorKind::Arity,
                        message: e.to_string(),
                    })?;
                doc.items.push(DocItem {
                    pos,
                    kind: DocItemKind::Fact,
                });
            }
            RawItem::Rule { body, head } => {
                let body: Vec<Atom> = body
                    .iter()
                    .map(|a| rule_atom(a, &schema))
                    .collect::<std::result::Result<_, _>>()?;
                let invalid = |e: Error| ParseError {
                    pos,
                    kind: ParseErrorKind::InvalidRule,
                    message: e.to_string(),
                };
                match head {
                    None => {
                        // Empty head: a dependency with no disjuncts.
                        let dd = DisjunctiveDependency::new(body, Vec::new()).map_err(invalid)?;
                        doc.items.push(DocItem {
                            pos,
                            kind: DocItemKind::Dependency(doc.dependencies.len()),
                        });
                        doc.dependencies.push(dd);
                    }
                    Some(raw_disjuncts) => {
                        let mut has_equality = false;
                        let mut disjuncts: Vec<DdDisjunct> = Vec::new();
                        for d in &raw_disjuncts {
                            match d {
                                RawDisjunct::Equality(a, b) => {
                                    has_equality = true;
                                    disjuncts.push(DdDisjunct::Equality(
                                        Var::new(a.clone()),
                                        Var::new(b.clone()),
                                    ));
                                }
                                RawDisjunct::Exists { vars, atoms } => {
                                    let atoms: Vec<Atom> = atoms
                                        .iter()
                                        .map(|a| rule_atom(a, &schema))
                                        .collect::<std::result::Result<_, _>>()?;
                                    let exist: BTreeSet<Var> =
                                        vars.iter().map(|v| Var::new(v.clone())).collect();
                                    disjuncts.push(DisjunctiveDependency::exists_disjunct(
                                        exist, atoms,
                                    ));
                                }
                            }
                        }
                        if has_equality {
                            let dd = DisjunctiveDependency::new(body, disjuncts).map_err(invalid)?;
                            doc.items.push(DocItem {
                                pos,
                                kind: DocItemKind::Dependency(doc.dependencies.len()),
                            });
                            doc.dependencies.push(dd);
                        } else {
                            let pairs = disjuncts
                                .into_iter()
                                .map(|d| match d {
                                    DdDisjunct::Exists(d) => {
                                        (d.exist_vars().clone(), d.atoms().to_vec())
                                    }
                                    DdDisjunct::Equality(_, _) => unreachable!(),
                                })
                                .collect();
                            let rule = Dexr::new(body, pairs).map_err(invalid)?;
                            doc.items.push(DocItem {
                                pos,
                                kind: DocItemKind::Rule(doc.rules.len()),
                            });
                            doc.rules.push(rule);
                        }
                    }
                }
            }
        }
    }
    Ok(doc)
}

/// Parses a document, inferring the schema when none is declared.
pub fn parse_document(text: &str) -> Result<SourceDocument> {
    parse_document_with_schema(text, None)
}

/// Parses a document against a known schema. A schema block in the text, if
/// present, must match it exactly.
pub fn parse_document_with_schema(
    text: &str,
    schema: Option<Arc<Schema>>,
) -> Result<SourceDocument> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, at: 0 };
    let raw = parser.items()?;
    Ok(elaborate(raw, schema)?)
}

/// Parses a document that must describe a structure only (no rules).
pub fn parse_structure(text: &str, schema: Option<Arc<Schema>>) -> Result<Structure> {
    let doc = parse_document_with_schema(text, schema)?;
    if !doc.rules.is_empty() || !doc.dependencies.is_empty() {
        return Err(Error::InvalidRule(
            "expected a structure, found rules in the input".into(),
        ));
    }
    Ok(doc.structure)
}

/// Parses a document that must contain exactly one rule and nothing else.
pub fn parse_rule(text: &str, schema: Option<Arc<Schema>>) -> Result<Dexr> {
    let doc = parse_document_with_schema(text, schema)?;
    if doc.rules.len() != 1 || !doc.dependencies.is_empty() || doc.structure.fact_count() > 0 {
        return Err(Error::InvalidRule(format!(
            "expected exactly one rule, found {} rules, {} dependencies and {} facts",
            doc.rules.len(),
            doc.dependencies.len(),
            doc.structure.fact_count()
        )));
    }
    Ok(doc.rules.into_iter().next().expect("checked length"))
}

/// Parses a document that must contain exactly one dependency or rule,
/// returned as a dependency.
pub fn parse_dependency(text: &str, schema: Option<Arc<Schema>>) -> Result<DisjunctiveDependency> {
    let doc = parse_document_with_schema(text, schema)?;
    match (doc.rules.len(), doc.dependencies.len()) {
        (1, 0) => Ok(doc.rules[0].to_dependency()),
        (0, 1) => Ok(doc.dependencies.into_iter().next().expect("checked")),
        (r, d) => Err(Error::InvalidRule(format!(
            "expected exactly one rule or dependency, found {r} rules and {d} dependencies"
        ))),
    }
}

impl SourceDocument {
    /// Canonical text: schema, then the structure, then rules and
    /// dependencies.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.schema.to_string());
        out.push('\n');
        let s = self.structure.to_string();
        if !s.is_empty() {
            out.push_str(&s);
            out.push('\n');
        }
        for r in &self.rules {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        for d in &self.dependencies {
            out.push_str(&d.to_string());
            out.push('\n');
        }
        out
    }
}
