//! Seeded, fully recorded code perturbations.
//!
//! Every operation is a pure function of `(unit, summary, seed, params)`.
//! Records carry what is needed to audit or invert the change: the rename
//! map, the shuffled block interval and permutation, or each replaced span.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{dependency, BindingKind, Dependency, Span, StatementInfo, SyntaxSummary};
use crate::corpus::CodeUnit;
use crate::lang::{self, Language, Token, TokenKind, STRUCTURAL_SYMBOLS};
use crate::seed;

/// Number of (span, permutation) draws before a line shuffle gives up.
pub const LINE_SHUFFLE_RETRY_BUDGET: usize = 32;
pub const DEFAULT_MAX_SPAN: usize = 5;
pub const DEFAULT_REPLACE_COUNT: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PerturbError {
    #[error("unit has no renamable identifiers")]
    NothingToObfuscate,
    #[error("no order-violating line shuffle found after {attempts} draws")]
    NoValidShuffle { attempts: usize },
    #[error("function body has fewer than two tokens")]
    NothingToShuffle,
    #[error("unit has no replaceable {what}")]
    NothingToReplace { what: &'static str },
    #[error("expected a {expected} record, found {found}")]
    WrongKind { expected: PerturbationKind, found: PerturbationKind },
    #[error("summary for unit {summary} does not describe unit {unit}")]
    SummaryMismatch { unit: String, summary: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationKind {
    Obfuscate,
    LineShuffle,
    TokenShuffle,
    KeywordReplace,
    SymbolReplace,
}

impl PerturbationKind {
    pub const ALL: [PerturbationKind; 5] = [
        PerturbationKind::Obfuscate,
        PerturbationKind::LineShuffle,
        PerturbationKind::TokenShuffle,
        PerturbationKind::KeywordReplace,
        PerturbationKind::SymbolReplace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PerturbationKind::Obfuscate => "obfuscate",
            PerturbationKind::LineShuffle => "line_shuffle",
            PerturbationKind::TokenShuffle => "token_shuffle",
            PerturbationKind::KeywordReplace => "keyword_replace",
            PerturbationKind::SymbolReplace => "symbol_replace",
        }
    }
}

impl fmt::Display for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerturbationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PerturbationKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown perturbation kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rename {
    pub old: String,
    pub new: String,
    pub kind: BindingKind,
    pub scope_id: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    /// Byte range in the base source.
    pub span: Span,
    pub old: String,
    pub new: String,
}

/// The first inverted statement pair that makes a shuffle order-violating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub first: usize,
    pub second: usize,
    pub dependency: Dependency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerturbationDetail {
    Obfuscate {
        fraction: f64,
        /// Selection order; fresh names are numbered in this order.
        rename_map: Vec<Rename>,
    },
    LineShuffle {
        /// Statement group and inclusive ordinal interval `[j, k]` within it.
        group: usize,
        span: [usize; 2],
        /// Statement indices of the shuffled blocks, in original order.
        statements: Vec<usize>,
        /// Output slot `p` holds original block `permutation[p]` (0-based, relative to `j`).
        permutation: Vec<usize>,
        /// Inclusive 0-based physical lines covered by the shuffled region.
        line_span: [usize; 2],
        region: Span,
        witness: Witness,
        granularity: String,
    },
    TokenShuffle {
        /// Output slot `p` holds body token `permutation[p]`.
        permutation: Vec<usize>,
        /// Token indices of the shuffled tokens.
        token_range: Span,
        signature_preserved: bool,
    },
    KeywordReplace {
        replaced_positions: Vec<Replacement>,
    },
    SymbolReplace {
        replaced_positions: Vec<Replacement>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRecord {
    pub seed: u64,
    #[serde(flatten)]
    pub detail: PerturbationDetail,
}

impl PerturbationRecord {
    pub fn kind(&self) -> PerturbationKind {
        match self.detail {
            PerturbationDetail::Obfuscate { .. } => PerturbationKind::Obfuscate,
            PerturbationDetail::LineShuffle { .. } => PerturbationKind::LineShuffle,
            PerturbationDetail::TokenShuffle { .. } => PerturbationKind::TokenShuffle,
            PerturbationDetail::KeywordReplace { .. } => PerturbationKind::KeywordReplace,
            PerturbationDetail::SymbolReplace { .. } => PerturbationKind::SymbolReplace,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedUnit {
    pub base_unit_id: String,
    pub language: Language,
    pub source: String,
    pub record: PerturbationRecord,
    pub logically_equivalent: bool,
}

/// Parameters for [`perturb`]; each operation reads only its own fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbParams {
    pub fraction: f64,
    pub max_span: usize,
    pub count: usize,
    pub shuffle_signature: bool,
}

impl Default for PerturbParams {
    fn default() -> Self {
        PerturbParams { fraction: 1.0, max_span: DEFAULT_MAX_SPAN, count: DEFAULT_REPLACE_COUNT, shuffle_signature: false }
    }
}

pub fn perturb(
    kind: PerturbationKind,
    unit: &CodeUnit,
    summary: &SyntaxSummary,
    seed: u64,
    params: &PerturbParams,
) -> Result<PerturbedUnit, PerturbError> {
    match kind {
        PerturbationKind::Obfuscate => obfuscate(unit, summary, seed, params.fraction),
        PerturbationKind::LineShuffle => line_shuffle(unit, summary, seed, params.max_span),
        PerturbationKind::TokenShuffle => token_shuffle(unit, summary, seed, params.shuffle_signature),
        PerturbationKind::KeywordReplace => keyword_replace(unit, summary, seed, params.count),
        PerturbationKind::SymbolReplace => symbol_replace(unit, summary, seed, params.count),
    }
}

fn check_summary(unit: &CodeUnit, summary: &SyntaxSummary) -> Result<(), PerturbError> {
    if unit.id != summary.unit_id || unit.language != summary.language {
        return Err(PerturbError::SummaryMismatch { unit: unit.id.clone(), summary: summary.unit_id.clone() });
    }
    Ok(())
}

fn finish(unit: &CodeUnit, source: String, seed: u64, detail: PerturbationDetail) -> PerturbedUnit {
    let logically_equivalent = matches!(detail, PerturbationDetail::Obfuscate { .. });
    PerturbedUnit {
        base_unit_id: unit.id.clone(),
        language: unit.language,
        source,
        record: PerturbationRecord { seed, detail },
        logically_equivalent,
    }
}

/// Rewrites `source` at sorted, non-overlapping byte ranges.
fn splice(source: &str, edits: &[(Span, &str)]) -> String {
    let mut out = String::with_capacity(source.len());
    let mut at = 0;
    for (span, new) in edits {
        out.push_str(&source[at..span.start]);
        out.push_str(new);
        at = span.end;
    }
    out.push_str(&source[at..]);
    out
}

/// Renames `ceil(fraction * |bindings|)` seeded-selected bindings to `V<i>` /
/// `F<i>`, numbering each family in selection order and skipping any name
/// already present in the token stream.
pub fn obfuscate(unit: &CodeUnit, summary: &SyntaxSummary, seed: u64, fraction: f64) -> Result<PerturbedUnit, PerturbError> {
    check_summary(unit, summary)?;
    if !(0.0..=1.0).contains(&fraction) {
        return Err(PerturbError::InvalidParameter(format!("fraction {fraction} outside [0, 1]")));
    }
    let n = summary.bindings.len();
    if fraction > 0.0 && n == 0 {
        return Err(PerturbError::NothingToObfuscate);
    }
    let take = ((fraction * n as f64) - 1e-9).ceil().clamp(0.0, n as f64) as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng(seed));

    let taken: HashSet<&str> = summary.tokens.iter().map(|t| t.text(&unit.source)).collect();
    let (mut next_v, mut next_f) = (0usize, 0usize);
    let mut fresh = |kind: BindingKind| loop {
        let (prefix, counter) = match kind {
            BindingKind::Function => ("F", &mut next_f),
            _ => ("V", &mut next_v),
        };
        let name = format!("{prefix}{counter}");
        *counter += 1;
        if !taken.contains(name.as_str()) && !unit.language.is_keyword(&name) {
            return name;
        }
    };

    let mut rename_map = Vec::with_capacity(take);
    let mut edits: Vec<(Span, usize)> = Vec::new();
    for &i in &order[..take] {
        let b = &summary.bindings[i];
        rename_map.push(Rename { old: b.name.clone(), new: fresh(b.kind), kind: b.kind, scope_id: b.scope_id });
        edits.extend(b.spans().map(|s| (s.clone(), rename_map.len() - 1)));
    }
    edits.sort_by_key(|(s, _)| s.start);
    let edits: Vec<(Span, &str)> = edits.into_iter().map(|(s, r)| (s, rename_map[r].new.as_str())).collect();
    let source = splice(&unit.source, &edits);
    Ok(finish(unit, source, seed, PerturbationDetail::Obfuscate { fraction, rename_map }))
}

/// Maps every renamed identifier back to its original spelling.
pub fn deobfuscate(p: &PerturbedUnit) -> Result<String, PerturbError> {
    let PerturbationDetail::Obfuscate { rename_map, .. } = &p.record.detail else {
        return Err(PerturbError::WrongKind { expected: PerturbationKind::Obfuscate, found: p.record.kind() });
    };
    let inverse: BTreeMap<&str, &str> = rename_map.iter().map(|r| (r.new.as_str(), r.old.as_str())).collect();
    let edits: Vec<(Span, &str)> = lang::lex(&p.source, p.language)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Identifier)
        .filter_map(|t| inverse.get(t.text(&p.source)).map(|old| (t.start..t.end, *old)))
        .collect();
    Ok(splice(&p.source, &edits))
}

/// Windows of 2..=max_span consecutive line-aligned statements per group.
fn shuffle_windows(summary: &SyntaxSummary, max_span: usize) -> Vec<Vec<&StatementInfo>> {
    let mut windows = Vec::new();
    for group in 0..summary.group_count() {
        let stmts: Vec<&StatementInfo> = summary.group(group).collect();
        for start in 0..stmts.len() {
            for len in 2..=max_span {
                let Some(window) = stmts.get(start..start + len) else { break };
                if !window.iter().all(|s| s.line_aligned) {
                    break;
                }
                windows.push(window.to_vec());
            }
        }
    }
    windows
}

fn first_violation(window: &[&StatementInfo], permutation: &[usize]) -> Option<Witness> {
    let mut slot = vec![0; permutation.len()];
    for (p, &orig) in permutation.iter().enumerate() {
        slot[orig] = p;
    }
    for x in 0..window.len() {
        for y in x + 1..window.len() {
            if slot[x] > slot[y] {
                if let Some(dep) = dependency(window[x], window[y]) {
                    return Some(Witness { first: window[x].index, second: window[y].index, dependency: dep });
                }
            }
        }
    }
    None
}

fn non_identity_permutation(len: usize, rng: &mut seed::Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..len).collect();
    loop {
        perm.shuffle(rng);
        if perm.iter().enumerate().any(|(i, &p)| i != p) {
            return perm;
        }
    }
}

/// Permutes a run of whole statement line blocks so that at least one
/// inverted pair is order-dependent. Lines between blocks stay in place.
pub fn line_shuffle(unit: &CodeUnit, summary: &SyntaxSummary, seed: u64, max_span: usize) -> Result<PerturbedUnit, PerturbError> {
    check_summary(unit, summary)?;
    if max_span < 2 {
        return Err(PerturbError::InvalidParameter(format!("max_span {max_span} is below 2")));
    }
    let windows = shuffle_windows(summary, max_span);
    if windows.is_empty() {
        return Err(PerturbError::NoValidShuffle { attempts: 0 });
    }
    let lines: Vec<&str> = unit.source.split('\n').collect();
    let mut rng = seed::rng(seed);
    for _ in 0..LINE_SHUFFLE_RETRY_BUDGET {
        let window = &windows[rng.random_range(0..windows.len())];
        let permutation = non_identity_permutation(window.len(), &mut rng);
        let Some(witness) = first_violation(window, &permutation) else { continue };

        let first_line = window[0].line_range.0;
        let last_line = window[window.len() - 1].line_range.1;
        let block = |s: &StatementInfo| lines[s.line_range.0..=s.line_range.1].join("\n");
        let mut region_lines = Vec::new();
        for (slot, &orig) in permutation.iter().enumerate() {
            region_lines.push(block(window[orig]));
            if let Some(next) = window.get(slot + 1) {
                let gap = &lines[window[slot].line_range.1 + 1..next.line_range.0];
                region_lines.extend(gap.iter().map(|l| l.to_string()));
            }
        }
        let region_start: usize = lines[..first_line].iter().map(|l| l.len() + 1).sum();
        let region_end: usize = region_start + lines[first_line..=last_line].join("\n").len();
        let source = splice(&unit.source, &[(region_start..region_end, region_lines.join("\n").as_str())]);
        if source == unit.source {
            // identical blocks swapped; no observable change
            continue;
        }
        let detail = PerturbationDetail::LineShuffle {
            group: window[0].group,
            span: [window[0].position, window[window.len() - 1].position],
            statements: window.iter().map(|s| s.index).collect(),
            permutation,
            line_span: [first_line, last_line],
            region: region_start..region_end,
            witness,
            granularity: "statement_block".into(),
        };
        return Ok(finish(unit, source, seed, detail));
    }
    Err(PerturbError::NoValidShuffle { attempts: LINE_SHUFFLE_RETRY_BUDGET })
}

/// Index of the first body token: after the body `{` in Java, after the
/// header `:` in Python.
fn body_start(tokens: &[Token], source: &str, language: Language) -> Option<usize> {
    let mut depth = 0i32;
    let start = match language {
        Language::Java => 0,
        Language::Python => tokens.iter().position(|t| t.kind == TokenKind::Keyword && t.text(source) == "def")?,
    };
    for (i, t) in tokens.iter().enumerate().skip(start) {
        let text = t.text(source);
        match text {
            "(" | "[" => depth += 1,
            ")" | "]" => depth -= 1,
            "{" if language == Language::Java && depth == 0 => return Some(i + 1),
            ":" if language == Language::Python && depth == 0 => return Some(i + 1),
            _ => {}
        }
    }
    None
}

/// Shuffles function-body tokens and joins them with single spaces. With
/// `shuffle_signature` the header tokens are shuffled too.
pub fn token_shuffle(unit: &CodeUnit, summary: &SyntaxSummary, seed: u64, shuffle_signature: bool) -> Result<PerturbedUnit, PerturbError> {
    check_summary(unit, summary)?;
    let tokens = &summary.tokens;
    let first = if shuffle_signature { 0 } else { body_start(tokens, &unit.source, unit.language).unwrap_or(0) };
    let body = &tokens[first..];
    if body.len() < 2 {
        return Err(PerturbError::NothingToShuffle);
    }
    let permutation = non_identity_permutation(body.len(), &mut seed::rng(seed));
    let shuffled = permutation.iter().map(|&i| body[i].text(&unit.source)).collect::<Vec<_>>().join(" ");
    let source = if first == 0 {
        shuffled
    } else {
        let header = &unit.source[..tokens[first - 1].end];
        format!("{header}\n    {shuffled}")
    };
    let detail = PerturbationDetail::TokenShuffle {
        permutation,
        token_range: first..tokens.len(),
        signature_preserved: !shuffle_signature,
    };
    Ok(finish(unit, source, seed, detail))
}

fn replace_positions<'a>(
    unit: &CodeUnit,
    spans: &[Span],
    seed: u64,
    count: usize,
    choices: impl Fn(&str) -> Vec<&'a str>,
) -> (String, Vec<Replacement>) {
    let mut rng = seed::rng(seed);
    let take = count.min(spans.len());
    let mut picked = index::sample(&mut rng, spans.len(), take).into_vec();
    picked.sort_unstable();
    let replacements: Vec<Replacement> = picked
        .into_iter()
        .map(|i| {
            let span = spans[i].clone();
            let old = unit.source[span.clone()].to_string();
            let options = choices(&old);
            let new = options[rng.random_range(0..options.len())].to_string();
            Replacement { span, old, new }
        })
        .collect();
    let edits: Vec<(Span, &str)> = replacements.iter().map(|r| (r.span.clone(), r.new.as_str())).collect();
    (splice(&unit.source, &edits), replacements)
}

/// Replaces up to `count` reserved keywords, each with a different keyword.
pub fn keyword_replace(unit: &CodeUnit, summary: &SyntaxSummary, seed: u64, count: usize) -> Result<PerturbedUnit, PerturbError> {
    check_summary(unit, summary)?;
    if summary.reserved_keyword_spans.is_empty() {
        return Err(PerturbError::NothingToReplace { what: "keywords" });
    }
    let keywords = unit.language.keywords();
    let (source, replaced_positions) = replace_positions(unit, &summary.reserved_keyword_spans, seed, count, |old| {
        keywords.iter().copied().filter(|k| *k != old).collect()
    });
    Ok(finish(unit, source, seed, PerturbationDetail::KeywordReplace { replaced_positions }))
}

/// Replaces up to `count` structural symbols with another structural symbol
/// or a single space.
pub fn symbol_replace(unit: &CodeUnit, summary: &SyntaxSummary, seed: u64, count: usize) -> Result<PerturbedUnit, PerturbError> {
    check_summary(unit, summary)?;
    if summary.structural_symbol_spans.is_empty() {
        return Err(PerturbError::NothingToReplace { what: "symbols" });
    }
    let (source, replaced_positions) = replace_positions(unit, &summary.structural_symbol_spans, seed, count, |old| {
        STRUCTURAL_SYMBOLS.iter().copied().filter(|s| *s != old).chain([" "]).collect()
    });
    Ok(finish(unit, source, seed, PerturbationDetail::SymbolReplace { replaced_positions }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;

    fn prepared(lang: Language, src: &str) -> (CodeUnit, SyntaxSummary) {
        let unit = CodeUnit::new(lang, src, None, None);
        let summary = analyze(&unit).unwrap();
        (unit, summary)
    }

    const DEMO: &str = "public void main(int num) { \n    while(num<20) {\n         System.out.print(num);\n         num++;\n      }\n}  ";

    #[test]
    fn full_obfuscation_of_demo() {
        let (unit, summary) = prepared(Language::Java, DEMO);
        let p = obfuscate(&unit, &summary, 3, 1.0).unwrap();
        assert_eq!(
            p.source,
            "public void F0(int V0) { \n    while(V0<20) {\n         System.out.print(V0);\n         V0++;\n      }\n}  "
        );
        assert!(p.logically_equivalent);
        assert_eq!(deobfuscate(&p).unwrap(), unit.source);
    }

    #[test]
    fn zero_fraction_is_identity() {
        let (unit, summary) = prepared(Language::Java, DEMO);
        let p = obfuscate(&unit, &summary, 11, 0.0).unwrap();
        assert_eq!(p.source, unit.source);
        let PerturbationDetail::Obfuscate { rename_map, .. } = &p.record.detail else { unreachable!() };
        assert!(rename_map.is_empty());
        assert_eq!(deobfuscate(&p).unwrap(), unit.source);
    }

    #[test]
    fn fresh_names_skip_existing_tokens() {
        let (unit, summary) = prepared(Language::Python, "def f(V0):\n    x = V0\n    return x\n");
        let p = obfuscate(&unit, &summary, 5, 1.0).unwrap();
        let PerturbationDetail::Obfuscate { rename_map, .. } = &p.record.detail else { unreachable!() };
        assert!(rename_map.iter().all(|r| r.new != "V0"));
        assert_eq!(deobfuscate(&p).unwrap(), unit.source);
    }

    #[test]
    fn demo_line_shuffle_swaps_loop_body() {
        let (unit, summary) = prepared(Language::Java, DEMO);
        let p = line_shuffle(&unit, &summary, 0, DEFAULT_MAX_SPAN).unwrap();
        assert_eq!(
            p.source,
            "public void main(int num) { \n    while(num<20) {\n         num++;\n         System.out.print(num);\n      }\n}  "
        );
        let PerturbationDetail::LineShuffle { permutation, line_span, .. } = &p.record.detail else { unreachable!() };
        assert_eq!(permutation, &[1, 0]);
        assert_eq!(line_span, &[2, 3]);
        assert!(!p.logically_equivalent);
    }

    #[test]
    fn single_statement_has_no_shuffle() {
        let (unit, summary) = prepared(Language::Python, "def f(x):\n    return x\n");
        assert_eq!(line_shuffle(&unit, &summary, 1, 5), Err(PerturbError::NoValidShuffle { attempts: 0 }));
    }

    #[test]
    fn independent_statements_are_never_shuffled() {
        let (unit, summary) = prepared(Language::Python, "def f():\n    a = 1\n    b = 2\n");
        for seed in 0..20 {
            assert!(matches!(line_shuffle(&unit, &summary, seed, 5), Err(PerturbError::NoValidShuffle { .. })));
        }
    }

    #[test]
    fn two_token_body_swaps() {
        let (unit, summary) = prepared(Language::Java, "void f() {;}");
        for seed in 0..5 {
            let p = token_shuffle(&unit, &summary, seed, false).unwrap();
            assert_eq!(p.source, "void f() {\n    } ;");
        }
        let (unit, summary) = prepared(Language::Python, "def f():\n    pass\n");
        assert_eq!(token_shuffle(&unit, &summary, 0, false), Err(PerturbError::NothingToShuffle));
    }

    #[test]
    fn token_shuffle_keeps_signature_and_multiset() {
        let (unit, summary) = prepared(Language::Java, "int f(int a) {\n    return a + 1;\n}");
        let p = token_shuffle(&unit, &summary, 9, false).unwrap();
        assert!(p.source.starts_with("int f(int a) {\n    "));
        let mut got: Vec<&str> = p.source["int f(int a) {\n    ".len()..].split(' ').collect();
        let mut want = vec!["return", "a", "+", "1", ";", "}"];
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn replacements_always_differ() {
        let (unit, summary) = prepared(Language::Java, DEMO);
        for seed in 0..200 {
            let k = keyword_replace(&unit, &summary, seed, 2).unwrap();
            let s = symbol_replace(&unit, &summary, seed, 4).unwrap();
            for p in [&k, &s] {
                let (PerturbationDetail::KeywordReplace { replaced_positions } | PerturbationDetail::SymbolReplace { replaced_positions }) =
                    &p.record.detail
                else {
                    unreachable!()
                };
                assert!(replaced_positions.iter().all(|r| r.old != r.new));
            }
        }
        assert_eq!(keyword_replace(&unit, &summary, 1, 0).unwrap().source, unit.source);
        assert_eq!(symbol_replace(&unit, &summary, 1, 0).unwrap().source, unit.source);
    }

    #[test]
    fn missing_keywords_or_symbols() {
        let (unit, mut summary) = prepared(Language::Python, "def f():\n    return 1\n");
        summary.reserved_keyword_spans.clear();
        summary.structural_symbol_spans.clear();
        assert!(matches!(keyword_replace(&unit, &summary, 0, 0), Err(PerturbError::NothingToReplace { .. })));
        assert!(matches!(symbol_replace(&unit, &summary, 0, 3), Err(PerturbError::NothingToReplace { .. })));
    }

    #[test]
    fn record_serializes_with_kind_tag() {
        let (unit, summary) = prepared(Language::Java, DEMO);
        let p = obfuscate(&unit, &summary, 3, 1.0).unwrap();
        let json = serde_json::to_value(&p.record).unwrap();
        assert_eq!(json["kind"], "obfuscate");
        assert_eq!(json["seed"], 3);
        let back: PerturbationRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back, p.record);
    }
}
