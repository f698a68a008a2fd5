//! Syntactic facts for perturbations: renamable identifier bindings,
//! statement groups with def-use sets, and token-level spans.
//!
//! Resolution is scope-aware. Java locals are visible from their declaration
//! to the end of the enclosing block; Python names are bound per function (or
//! lambda / comprehension) scope regardless of textual order. Anything that
//! does not resolve to a binding inside the unit is foreign and never renamed.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use tree_sitter::{Node, Tree};

use crate::corpus::CodeUnit;
use crate::lang::{self, Language, Token, TokenKind};

pub type Span = Range<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("analysis unavailable for unit {unit_id}: {reason}")]
    Unavailable { unit_id: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BindingKind {
    Variable,
    Function,
    Parameter,
}

/// A renamable name: every occurrence in `declaration_span` and `use_spans`
/// slices to exactly `name`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentifierBinding {
    pub name: String,
    pub kind: BindingKind,
    pub declaration_span: Span,
    pub use_spans: Vec<Span>,
    pub scope_id: usize,
}

impl IdentifierBinding {
    /// All occurrence spans in source order.
    pub fn spans(&self) -> impl Iterator<Item = &Span> {
        std::iter::once(&self.declaration_span).chain(&self.use_spans)
    }
}

/// One statement of a statement group (the direct statements of a block).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementInfo {
    /// Ordinal in preorder over all groups.
    pub index: usize,
    pub group: usize,
    /// Ordinal within the group.
    pub position: usize,
    pub depth: usize,
    /// Inclusive, 0-based physical lines.
    pub line_range: (usize, usize),
    pub span: Span,
    pub defs: BTreeSet<String>,
    pub uses: BTreeSet<String>,
    pub has_side_effect: bool,
    /// True when the statement owns its lines outright: only whitespace before
    /// it and at most a comment after it. Only such statements are moved as
    /// whole line blocks.
    pub line_aligned: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntaxSummary {
    pub unit_id: String,
    pub language: Language,
    pub bindings: Vec<IdentifierBinding>,
    pub statements: Vec<StatementInfo>,
    pub tokens: Vec<Token>,
    pub reserved_keyword_spans: Vec<Span>,
    pub structural_symbol_spans: Vec<Span>,
}

impl SyntaxSummary {
    /// Statements of `group` in order.
    pub fn group(&self, group: usize) -> impl Iterator<Item = &StatementInfo> {
        self.statements.iter().filter(move |s| s.group == group)
    }

    pub fn group_count(&self) -> usize {
        self.statements.iter().map(|s| s.group + 1).max().unwrap_or(0)
    }
}

/// Full summary of a unit.
pub fn analyze(unit: &CodeUnit) -> Result<SyntaxSummary, AnalysisError> {
    let tree = lang::parse(&unit.source, unit.language);
    let facts = Facts::build(unit, &tree)?;
    let tokens = lang::lex(&unit.source, unit.language);
    let spans_of = |kind| tokens.iter().filter(|t| t.kind == kind).map(|t| t.start..t.end).collect();
    let statements = facts.statements(&tokens);
    Ok(SyntaxSummary {
        unit_id: unit.id.clone(),
        language: unit.language,
        bindings: facts.bindings(),
        statements,
        reserved_keyword_spans: spans_of(TokenKind::Keyword),
        structural_symbol_spans: spans_of(TokenKind::Symbol),
        tokens,
    })
}

pub fn bind_identifiers(unit: &CodeUnit) -> Result<Vec<IdentifierBinding>, AnalysisError> {
    let tree = lang::parse(&unit.source, unit.language);
    Ok(Facts::build(unit, &tree)?.bindings())
}

pub fn def_use(unit: &CodeUnit) -> Result<Vec<StatementInfo>, AnalysisError> {
    let tree = lang::parse(&unit.source, unit.language);
    let facts = Facts::build(unit, &tree)?;
    Ok(facts.statements(&lang::lex(&unit.source, unit.language)))
}

/// Why two statements may not commute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dependency {
    Data,
    SideEffect,
}

/// Conservative commutation check for `a` before `b`.
pub fn order_dependent(a: &StatementInfo, b: &StatementInfo) -> bool {
    dependency(a, b).is_some()
}

pub fn dependency(a: &StatementInfo, b: &StatementInfo) -> Option<Dependency> {
    let data = a.defs.iter().any(|n| b.defs.contains(n) || b.uses.contains(n)) || a.uses.iter().any(|n| b.defs.contains(n));
    if data {
        Some(Dependency::Data)
    } else if a.has_side_effect && b.has_side_effect {
        Some(Dependency::SideEffect)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Namespace {
    Value,
    /// Java method names, which never clash with variables.
    Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ScopeKind {
    Root,
    Function,
    Block,
    Lambda,
    Comprehension,
}

#[derive(Debug)]
struct Bound {
    kind: BindingKind,
    at: usize,
    /// Declared Java type, used to recognise immutable receivers.
    declared_type: Option<String>,
}

#[derive(Debug)]
struct Scope {
    parent: Option<usize>,
    kind: ScopeKind,
    span: Span,
    bound: HashMap<(Namespace, String), Bound>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Access {
    read: bool,
    write: bool,
    /// Write through an element, attribute or method receiver.
    mutate: bool,
    /// Bare callee name.
    callee: bool,
    /// First identifier of an attribute / field / call chain.
    chain_root: bool,
    receiver: bool,
}

#[derive(Debug)]
struct Occ {
    ns: Namespace,
    name: String,
    span: Span,
    scope: usize,
    access: Access,
    in_string: bool,
    resolved: Option<(usize, Namespace, String)>,
}

struct Facts<'a> {
    src: &'a str,
    language: Language,
    root: Node<'a>,
    scopes: Vec<Scope>,
    occs: Vec<Occ>,
    poisoned: HashSet<String>,
    in_string: bool,
}

fn field_is(parent: Node<'_>, field: &str, child: Node<'_>) -> bool {
    parent.child_by_field_name(field).is_some_and(|c| c.id() == child.id())
}

fn named_children(node: Node<'_>) -> Vec<Node<'_>> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor).collect()
}

const JAVA_IMMUTABLE_TYPES: &[&str] = &[
    "int", "long", "short", "byte", "char", "boolean", "float", "double", "String", "Integer", "Long", "Short", "Byte",
    "Character", "Boolean", "Float", "Double",
];

impl<'a> Facts<'a> {
    fn build(unit: &'a CodeUnit, tree: &'a Tree) -> Result<Facts<'a>, AnalysisError> {
        let unavailable = |reason: &str| AnalysisError::Unavailable { unit_id: unit.id.clone(), reason: reason.into() };
        let root = tree.root_node();
        if root.has_error() {
            return Err(unavailable("syntax error"));
        }
        let mut facts = Facts {
            src: &unit.source,
            language: unit.language,
            root,
            scopes: vec![Scope { parent: None, kind: ScopeKind::Root, span: 0..unit.source.len(), bound: HashMap::new() }],
            occs: Vec::new(),
            poisoned: HashSet::new(),
            in_string: false,
        };
        let Some(func) = facts.unit_function() else {
            return Err(unavailable("no function definition"));
        };
        match unit.language {
            Language::Java => facts.java(func, 0),
            Language::Python => facts.py(func, 0),
        }
        facts.resolve();
        Ok(facts)
    }

    fn unit_function(&self) -> Option<Node<'a>> {
        named_children(self.root).into_iter().find(|n| match self.language {
            Language::Java => n.kind() == "method_declaration",
            Language::Python => matches!(n.kind(), "function_definition" | "decorated_definition"),
        })
    }

    fn text(&self, n: Node<'_>) -> &'a str {
        &self.src[n.byte_range()]
    }

    fn push_scope(&mut self, parent: usize, kind: ScopeKind, span: Span) -> usize {
        self.scopes.push(Scope { parent: Some(parent), kind, span, bound: HashMap::new() });
        self.scopes.len() - 1
    }

    fn bind(&mut self, n: Node<'_>, scope: usize, kind: BindingKind, declared_type: Option<String>, ns: Namespace) {
        let name = self.text(n).to_string();
        self.scopes[scope].bound.entry((ns, name.clone())).or_insert(Bound { kind, at: n.start_byte(), declared_type });
        self.occs.push(Occ {
            ns,
            name,
            span: n.byte_range(),
            scope,
            access: Access { write: true, ..Default::default() },
            in_string: self.in_string,
            resolved: None,
        });
    }

    fn reference(&mut self, n: Node<'_>, scope: usize, access: Access, ns: Namespace) {
        self.occs.push(Occ {
            ns,
            name: self.text(n).to_string(),
            span: n.byte_range(),
            scope,
            access,
            in_string: self.in_string,
            resolved: None,
        });
    }

    fn poison_subtree(&mut self, n: Node<'_>) {
        if n.kind() == "identifier" {
            self.poisoned.insert(self.text(n).to_string());
        }
        for c in named_children(n) {
            self.poison_subtree(c);
        }
    }

    // ---- Java -------------------------------------------------------------

    fn java(&mut self, n: Node<'a>, scope: usize) {
        match n.kind() {
            "line_comment" | "block_comment" | "marker_annotation" | "annotation" => {}
            "identifier" => {
                let access = self.java_access(n);
                self.reference(n, scope, access, Namespace::Value);
            }
            "method_declaration" => {
                if let Some(name) = n.child_by_field_name("name") {
                    self.bind(name, scope, BindingKind::Function, None, Namespace::Method);
                }
                let f = self.push_scope(scope, ScopeKind::Function, n.byte_range());
                for c in named_children(n) {
                    if !field_is(n, "name", c) {
                        self.java(c, f);
                    }
                }
            }
            "class_body" | "class_declaration" | "interface_declaration" | "enum_declaration" | "record_declaration" => {
                self.poison_subtree(n)
            }
            "block" | "for_statement" | "catch_clause" | "try_with_resources_statement" | "switch_block" => {
                let s = self.push_scope(scope, ScopeKind::Block, n.byte_range());
                self.java_children(n, s);
            }
            "enhanced_for_statement" => {
                let s = self.push_scope(scope, ScopeKind::Block, n.byte_range());
                let ty = n.child_by_field_name("type").map(|t| self.text(t).to_string());
                for c in named_children(n) {
                    if field_is(n, "name", c) {
                        self.bind(c, s, BindingKind::Variable, ty.clone(), Namespace::Value);
                    } else {
                        self.java(c, s);
                    }
                }
            }
            "lambda_expression" => {
                let s = self.push_scope(scope, ScopeKind::Lambda, n.byte_range());
                for c in named_children(n) {
                    if field_is(n, "parameters", c) && c.kind() == "identifier" {
                        self.bind(c, s, BindingKind::Parameter, None, Namespace::Value);
                    } else {
                        self.java(c, s);
                    }
                }
            }
            "inferred_parameters" => {
                for c in named_children(n) {
                    if c.kind() == "identifier" {
                        self.bind(c, scope, BindingKind::Parameter, None, Namespace::Value);
                    }
                }
            }
            "formal_parameter" | "catch_formal_parameter" | "resource" => {
                let kind = if n.kind() == "formal_parameter" { BindingKind::Parameter } else { BindingKind::Variable };
                let ty = n.child_by_field_name("type").map(|t| self.text(t).to_string());
                for c in named_children(n) {
                    if field_is(n, "name", c) {
                        self.bind(c, scope, kind, ty.clone(), Namespace::Value);
                    } else {
                        self.java(c, scope);
                    }
                }
            }
            "spread_parameter" => {
                for c in named_children(n) {
                    if c.kind() == "variable_declarator" {
                        if let Some(name) = c.child_by_field_name("name") {
                            self.bind(name, scope, BindingKind::Parameter, None, Namespace::Value);
                        }
                    } else {
                        self.java(c, scope);
                    }
                }
            }
            "variable_declarator" => {
                let ty = n
                    .parent()
                    .and_then(|p| p.child_by_field_name("type"))
                    .map(|t| self.text(t).to_string())
                    .filter(|_| n.parent().is_some_and(|p| p.kind() == "local_variable_declaration"));
                for c in named_children(n) {
                    if field_is(n, "name", c) {
                        self.bind(c, scope, BindingKind::Variable, ty.clone(), Namespace::Value);
                    } else {
                        self.java(c, scope);
                    }
                }
            }
            "instanceof_expression" => {
                for c in named_children(n) {
                    if field_is(n, "name", c) {
                        self.bind(c, scope, BindingKind::Variable, None, Namespace::Value);
                    } else {
                        self.java(c, scope);
                    }
                }
            }
            "labeled_statement" => {
                for c in named_children(n).into_iter().skip(1) {
                    self.java(c, scope);
                }
            }
            "break_statement" | "continue_statement" => {}
            "field_access" => {
                for c in named_children(n) {
                    if !field_is(n, "field", c) {
                        self.java(c, scope);
                    }
                }
            }
            "method_invocation" => {
                let object = n.child_by_field_name("object");
                for c in named_children(n) {
                    if field_is(n, "name", c) {
                        if object.is_none_or(|o| o.kind() == "this") {
                            self.reference(c, scope, Access { read: true, callee: true, ..Default::default() }, Namespace::Method);
                        }
                    } else {
                        self.java(c, scope);
                    }
                }
            }
            "method_reference" => {
                if let Some(first) = n.named_child(0) {
                    self.java(first, scope);
                }
            }
            _ => self.java_children(n, scope),
        }
    }

    fn java_children(&mut self, n: Node<'a>, scope: usize) {
        for c in named_children(n) {
            self.java(c, scope);
        }
    }

    fn java_access(&self, n: Node<'_>) -> Access {
        let mut acc = Access { read: true, ..Default::default() };
        let mut cur = n;
        let mut through = false;
        while let Some(p) = cur.parent() {
            match p.kind() {
                "array_access" if field_is(p, "array", cur) => through = true,
                "field_access" if field_is(p, "object", cur) => {
                    acc.chain_root = true;
                    through = true;
                }
                "method_invocation" if field_is(p, "object", cur) => {
                    acc.chain_root = true;
                    acc.receiver = true;
                    return acc;
                }
                "parenthesized_expression" => {}
                _ => break,
            }
            cur = p;
        }
        let Some(p) = cur.parent() else { return acc };
        let assigned = (p.kind() == "assignment_expression" && field_is(p, "left", cur)) || p.kind() == "update_expression";
        if assigned {
            if through {
                acc.write = true;
                acc.mutate = true;
            } else {
                acc.write = true;
                let plain = p.kind() == "assignment_expression"
                    && p.child_by_field_name("operator").is_some_and(|o| self.text(o) == "=");
                acc.read = !plain;
            }
        }
        acc
    }

    // ---- Python -----------------------------------------------------------

    fn py(&mut self, n: Node<'a>, scope: usize) {
        match n.kind() {
            "comment" => {}
            "identifier" => self.py_identifier(n, scope),
            "decorated_definition" => {
                for c in named_children(n) {
                    self.py(c, scope);
                }
            }
            "function_definition" => self.py_function(n, scope),
            "lambda" => {
                let s = self.push_scope(scope, ScopeKind::Lambda, n.byte_range());
                for c in named_children(n) {
                    if field_is(n, "parameters", c) {
                        self.py_parameters(c, scope, s);
                    } else {
                        self.py(c, s);
                    }
                }
            }
            "class_definition" => {
                if let Some(name) = n.child_by_field_name("name") {
                    self.bind(name, scope, BindingKind::Variable, None, Namespace::Value);
                }
                self.poison_subtree(n);
            }
            "global_statement" | "nonlocal_statement" => self.poison_subtree(n),
            "import_statement" | "import_from_statement" => {
                let is_from = n.kind() == "import_from_statement";
                for c in named_children(n) {
                    if !field_is(n, "name", c) {
                        continue;
                    }
                    let target = if c.kind() == "aliased_import" {
                        c.child_by_field_name("alias")
                    } else if is_from {
                        c.named_child(c.named_child_count().saturating_sub(1) as u32)
                    } else {
                        c.named_child(0)
                    };
                    if let Some(t) = target {
                        self.poisoned.insert(self.text(t).to_string());
                        self.bind(t, scope, BindingKind::Variable, None, Namespace::Value);
                    }
                }
            }
            "keyword_argument" => {
                if let Some(name) = n.child_by_field_name("name") {
                    self.poisoned.insert(self.text(name).to_string());
                }
                if let Some(v) = n.child_by_field_name("value") {
                    self.py(v, scope);
                }
            }
            "attribute" => {
                if let Some(o) = n.child_by_field_name("object") {
                    self.py(o, scope);
                }
            }
            "named_expression" => {
                let mut target = scope;
                while self.scopes[target].kind == ScopeKind::Comprehension {
                    target = self.scopes[target].parent.unwrap_or(0);
                }
                if let Some(name) = n.child_by_field_name("name") {
                    self.bind(name, target, BindingKind::Variable, None, Namespace::Value);
                }
                if let Some(v) = n.child_by_field_name("value") {
                    self.py(v, scope);
                }
            }
            "list_comprehension" | "set_comprehension" | "dictionary_comprehension" | "generator_expression" => {
                let s = self.push_scope(scope, ScopeKind::Comprehension, n.byte_range());
                let mut first_clause = true;
                // clauses bind before the body is evaluated, so visit them first
                let children = named_children(n);
                for c in children.iter().filter(|c| matches!(c.kind(), "for_in_clause" | "if_clause")) {
                    if c.kind() == "for_in_clause" {
                        for part in named_children(*c) {
                            if field_is(*c, "right", part) && first_clause {
                                self.py(part, scope);
                            } else {
                                self.py(part, s);
                            }
                        }
                        first_clause = false;
                    } else {
                        self.py(*c, s);
                    }
                }
                for c in children.iter().filter(|c| !matches!(c.kind(), "for_in_clause" | "if_clause")) {
                    self.py(*c, s);
                }
            }
            "string" => {
                let outer = self.in_string;
                self.in_string = true;
                for c in named_children(n) {
                    self.py(c, scope);
                }
                self.in_string = outer;
            }
            _ => {
                for c in named_children(n) {
                    self.py(c, scope);
                }
            }
        }
    }

    fn py_function(&mut self, n: Node<'a>, scope: usize) {
        if let Some(name) = n.child_by_field_name("name") {
            self.bind(name, scope, BindingKind::Function, None, Namespace::Value);
        }
        let f = self.push_scope(scope, ScopeKind::Function, n.byte_range());
        for c in named_children(n) {
            if field_is(n, "name", c) {
                continue;
            } else if field_is(n, "parameters", c) {
                self.py_parameters(c, scope, f);
            } else if field_is(n, "body", c) {
                self.py(c, f);
            } else {
                self.py(c, scope);
            }
        }
    }

    fn py_parameters(&mut self, params: Node<'a>, outer: usize, inner: usize) {
        for p in named_children(params) {
            match p.kind() {
                "identifier" => self.bind(p, inner, BindingKind::Parameter, None, Namespace::Value),
                "default_parameter" | "typed_default_parameter" | "typed_parameter" => {
                    for c in named_children(p) {
                        let is_name = field_is(p, "name", c) || (p.kind() == "typed_parameter" && !field_is(p, "type", c));
                        if is_name {
                            self.py_param_name(c, inner);
                        } else {
                            self.py(c, outer);
                        }
                    }
                }
                "list_splat_pattern" | "dictionary_splat_pattern" => self.py_param_name(p, inner),
                _ => {}
            }
        }
    }

    fn py_param_name(&mut self, n: Node<'a>, inner: usize) {
        if n.kind() == "identifier" {
            self.bind(n, inner, BindingKind::Parameter, None, Namespace::Value);
        } else {
            for c in named_children(n) {
                self.py_param_name(c, inner);
            }
        }
    }

    fn py_identifier(&mut self, n: Node<'a>, scope: usize) {
        let mut acc = Access { read: true, ..Default::default() };
        let mut cur = n;
        let mut through = false;
        while let Some(p) = cur.parent() {
            match p.kind() {
                "attribute" if field_is(p, "object", cur) => {
                    acc.chain_root = true;
                    through = true;
                }
                "subscript" if field_is(p, "value", cur) => through = true,
                "call" if field_is(p, "function", cur) => {
                    if through {
                        acc.receiver = true;
                    } else {
                        acc.callee = true;
                    }
                    self.reference(n, scope, acc, Namespace::Value);
                    return;
                }
                _ => break,
            }
            cur = p;
        }
        match py_target(cur) {
            Some(target) if !through => {
                if target == Target::Aug {
                    // augmented assignment reads then rebinds
                    self.bind(n, scope, BindingKind::Variable, None, Namespace::Value);
                    self.occs.last_mut().unwrap().access.read = true;
                } else {
                    self.bind(n, scope, BindingKind::Variable, None, Namespace::Value);
                }
            }
            Some(_) => {
                acc.write = true;
                acc.mutate = true;
                self.reference(n, scope, acc, Namespace::Value);
            }
            None => self.reference(n, scope, acc, Namespace::Value),
        }
    }

    // ---- resolution and results ------------------------------------------

    fn resolve(&mut self) {
        for i in 0..self.occs.len() {
            let occ = &self.occs[i];
            let key = (occ.ns, occ.name.clone());
            let mut scope = Some(occ.scope);
            let mut found = None;
            while let Some(s) = scope {
                if let Some(b) = self.scopes[s].bound.get(&key) {
                    let visible = self.language == Language::Python || b.at <= occ.span.start;
                    if visible {
                        found = Some(s);
                        break;
                    }
                }
                scope = self.scopes[s].parent;
            }
            let name = key.1;
            self.occs[i].resolved = found.map(|s| (s, key.0, name));
        }
    }

    fn bindings(&self) -> Vec<IdentifierBinding> {
        let mut groups: HashMap<(usize, Namespace, String), Vec<&Occ>> = HashMap::new();
        for occ in &self.occs {
            if let Some(key) = &occ.resolved {
                groups.entry(key.clone()).or_default().push(occ);
            }
        }
        let mut out: Vec<IdentifierBinding> = groups
            .into_iter()
            .filter(|((_, _, name), occs)| !self.poisoned.contains(name) && !occs.iter().any(|o| o.in_string))
            .map(|((scope, ns, name), mut occs)| {
                occs.sort_by_key(|o| o.span.start);
                occs.dedup_by_key(|o| o.span.start);
                let kind = self.scopes[scope].bound[&(ns, name.clone())].kind;
                IdentifierBinding {
                    name,
                    kind,
                    declaration_span: occs[0].span.clone(),
                    use_spans: occs[1..].iter().map(|o| o.span.clone()).collect(),
                    scope_id: scope,
                }
            })
            .collect();
        out.sort_by_key(|b| b.declaration_span.start);
        out
    }

    fn statement_nodes(&self) -> Vec<(Node<'a>, usize, usize)> {
        // (node, group, depth) in preorder
        let mut out = Vec::new();
        let mut groups = 0;
        let root = self.unit_function().expect("checked in build");
        self.collect_groups(root, 0, &mut groups, &mut out);
        out
    }

    fn collect_groups(&self, n: Node<'a>, depth: usize, groups: &mut usize, out: &mut Vec<(Node<'a>, usize, usize)>) {
        if matches!(n.kind(), "class_body" | "class_definition" | "class_declaration") {
            return;
        }
        let is_group = match self.language {
            Language::Java => matches!(n.kind(), "block" | "switch_block_statement_group"),
            Language::Python => n.kind() == "block",
        };
        if !is_group {
            for c in named_children(n) {
                self.collect_groups(c, depth, groups, out);
            }
            return;
        }
        let group = *groups;
        *groups += 1;
        for c in named_children(n) {
            if matches!(c.kind(), "comment" | "line_comment" | "block_comment" | "switch_label") {
                continue;
            }
            out.push((c, group, depth));
            self.collect_groups(c, depth + 1, groups, out);
        }
    }

    fn local_names(&self) -> BTreeSet<String> {
        self.occs
            .iter()
            .filter_map(|o| o.resolved.as_ref())
            .filter(|(s, ns, _)| *ns == Namespace::Value && *s != 0)
            .map(|(_, _, n)| n.clone())
            .collect()
    }

    /// Names joined by plain `a = b` copies, so a write through one element
    /// or receiver counts as a write to every name that may share the object.
    fn alias_classes(&self) -> HashMap<String, BTreeSet<String>> {
        let mut pairs = Vec::new();
        let mut stack = vec![self.unit_function().expect("checked in build")];
        while let Some(n) = stack.pop() {
            let (left, right) = match (self.language, n.kind()) {
                (Language::Python, "assignment") | (Language::Java, "assignment_expression") => {
                    (n.child_by_field_name("left"), n.child_by_field_name("right"))
                }
                (Language::Java, "variable_declarator") => (n.child_by_field_name("name"), n.child_by_field_name("value")),
                _ => (None, None),
            };
            if let (Some(l), Some(r)) = (left, right) {
                if l.kind() == "identifier" && r.kind() == "identifier" {
                    pairs.push((self.src[l.byte_range()].to_string(), self.src[r.byte_range()].to_string()));
                }
            }
            stack.extend(named_children(n));
        }
        let mut classes: HashMap<String, BTreeSet<String>> = HashMap::new();
        for (a, b) in pairs {
            let mut merged: BTreeSet<String> = [a.clone(), b.clone()].into();
            for name in [&a, &b] {
                if let Some(c) = classes.get(name) {
                    merged.extend(c.iter().cloned());
                }
            }
            for name in &merged {
                classes.insert(name.clone(), merged.clone());
            }
        }
        classes
    }

    fn statements(&self, tokens: &[Token]) -> Vec<StatementInfo> {
        let locals = self.local_names();
        let aliases = self.alias_classes();
        let mut positions: HashMap<usize, usize> = HashMap::new();
        self.statement_nodes()
            .into_iter()
            .enumerate()
            .map(|(index, (node, group, depth))| {
                let span = node.byte_range();
                let position = positions.entry(group).or_insert(0);
                let pos = *position;
                *position += 1;
                let mut defs = BTreeSet::new();
                let mut uses = BTreeSet::new();
                for occ in self.occs.iter().filter(|o| o.span.start >= span.start && o.span.end <= span.end) {
                    if occ.ns == Namespace::Method {
                        continue;
                    }
                    let mut acc = occ.access;
                    match &occ.resolved {
                        Some((scope, _, name)) => {
                            let s = &self.scopes[*scope];
                            let inner = *scope != 0 && s.span.start >= span.start && s.span.end <= span.end;
                            if inner {
                                continue;
                            }
                            if acc.receiver {
                                let immutable = s.bound[&(Namespace::Value, name.clone())]
                                    .declared_type
                                    .as_deref()
                                    .is_some_and(|t| JAVA_IMMUTABLE_TYPES.contains(&t));
                                if !immutable {
                                    acc.write = true;
                                    acc.mutate = true;
                                }
                            }
                        }
                        None if acc.chain_root || acc.callee => continue,
                        None => {}
                    }
                    if acc.read {
                        uses.insert(occ.name.clone());
                    }
                    if acc.write {
                        defs.insert(occ.name.clone());
                    }
                    if acc.mutate {
                        defs.extend(aliases.get(&occ.name).into_iter().flatten().cloned());
                    }
                }
                let effects = self.effects(node);
                if effects.jump {
                    uses.extend(locals.iter().cloned());
                }
                let start = node.start_position().row;
                let end = node.end_position().row;
                let line_aligned = tokens.iter().all(|t| {
                    !((t.line == start && t.end <= span.start) || (t.line == end && t.start >= span.end && t.kind != TokenKind::Comment))
                });
                StatementInfo {
                    index,
                    group,
                    position: pos,
                    depth,
                    line_range: (start, end),
                    span,
                    defs,
                    uses,
                    has_side_effect: effects.side_effect,
                    line_aligned,
                }
            })
            .collect()
    }

    fn effects(&self, n: Node<'_>) -> Effects {
        let mut e = Effects::default();
        self.scan_effects(n, &mut e);
        e
    }

    fn scan_effects(&self, n: Node<'_>, e: &mut Effects) {
        let kind = n.kind();
        let (call, jump) = match self.language {
            Language::Java => (
                matches!(kind, "method_invocation" | "object_creation_expression" | "explicit_constructor_invocation" | "synchronized_statement"),
                matches!(kind, "return_statement" | "break_statement" | "continue_statement" | "throw_statement" | "yield_statement" | "assert_statement"),
            ),
            Language::Python => (
                matches!(kind, "call" | "await" | "with_statement" | "import_statement" | "import_from_statement"),
                matches!(kind, "return_statement" | "break_statement" | "continue_statement" | "raise_statement" | "yield" | "assert_statement"),
            ),
        };
        if call || jump {
            e.side_effect = true;
        }
        if jump {
            e.jump = true;
        }
        let mutating = match self.language {
            Language::Java => match kind {
                "assignment_expression" => n.child_by_field_name("left").is_some_and(|l| l.kind() != "identifier"),
                "update_expression" => n.named_child(0).is_some_and(|l| l.kind() != "identifier"),
                _ => false,
            },
            Language::Python => match kind {
                "assignment" | "augmented_assignment" => n.child_by_field_name("left").is_some_and(has_element_target),
                "for_statement" => n.child_by_field_name("left").is_some_and(has_element_target),
                "delete_statement" => has_element_target(n),
                _ => false,
            },
        };
        if mutating {
            e.side_effect = true;
        }
        for c in named_children(n) {
            self.scan_effects(c, e);
        }
    }
}

#[derive(Default)]
struct Effects {
    side_effect: bool,
    jump: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Plain,
    Aug,
}

const PY_PATTERN_CONTAINERS: &[&str] = &[
    "pattern_list",
    "tuple_pattern",
    "list_pattern",
    "tuple",
    "list",
    "expression_list",
    "parenthesized_expression",
    "list_splat_pattern",
    "list_splat",
];

/// Whether `n` (after climbing destructuring containers) is an assignment
/// target in Python.
fn py_target(n: Node<'_>) -> Option<Target> {
    let mut cur = n;
    while let Some(p) = cur.parent() {
        if PY_PATTERN_CONTAINERS.contains(&p.kind()) {
            cur = p;
            continue;
        }
        return match p.kind() {
            "assignment" if field_is(p, "left", cur) => Some(Target::Plain),
            "augmented_assignment" if field_is(p, "left", cur) => Some(Target::Aug),
            "for_statement" | "for_in_clause" if field_is(p, "left", cur) => Some(Target::Plain),
            "as_pattern_target" | "delete_statement" => Some(Target::Plain),
            _ => None,
        };
    }
    None
}

fn has_element_target(n: Node<'_>) -> bool {
    match n.kind() {
        "attribute" | "subscript" => true,
        k if PY_PATTERN_CONTAINERS.contains(&k) || k == "delete_statement" => named_children(n).into_iter().any(has_element_target),
        _ => false,
    }
}
