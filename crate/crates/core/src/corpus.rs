//! Corpus ingest: function extraction, filtering, deduplication and the
//! on-disk corpus layout.
//!
//! A corpus directory holds one file per unit at
//! `<problem>/<solution>/<unit id>.<ext>` (problem `_` when unknown) plus
//! `manifest.jsonl`: a header record followed by one record per unit. The same
//! path convention is used to recover provenance on ingest, so ingesting a
//! corpus directory reproduces its unit records.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::ops::Range;
use std::path::{Component, Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use tree_sitter::Node;
use walkdir::WalkDir;

use crate::lang::{self, Language};

pub const MANIFEST_FILE: &str = "manifest.jsonl";
const NO_PROBLEM_DIR: &str = "_";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("no unit survived filtering ({rejected})")]
    EmptyCorpus { rejected: RejectionCounts },
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("malformed manifest {path} line {line}: {message}")]
    Manifest { path: PathBuf, line: usize, message: String },
    #[error("unit file {path} does not match its recorded hash")]
    HashMismatch { path: PathBuf },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io { path: path.to_path_buf(), source }
}

/// One function-level snippet with its corpus provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeUnit {
    pub id: String,
    pub language: Language,
    pub source: String,
    pub problem_id: Option<String>,
    pub solution_id: Option<String>,
    pub token_count: usize,
    pub line_count: usize,
}

impl CodeUnit {
    /// Builds a unit with derived counts and a content-addressed id.
    pub fn new(language: Language, source: impl Into<String>, problem_id: Option<String>, solution_id: Option<String>) -> Self {
        let source = normalize_newlines(&source.into());
        let id = unit_id(language, problem_id.as_deref(), solution_id.as_deref(), &source);
        CodeUnit {
            id,
            language,
            token_count: lang::lex(&source, language).len(),
            line_count: count_lines(&source),
            source,
            problem_id,
            solution_id,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }
}

pub fn count_lines(source: &str) -> usize {
    source.split('\n').count()
}

pub fn normalize_newlines(source: &str) -> String {
    source.replace("\r\n", "\n")
}

fn unit_id(language: Language, problem: Option<&str>, solution: Option<&str>, source: &str) -> String {
    let mut h = Sha256::new();
    for part in [language.name(), problem.unwrap_or(""), solution.unwrap_or(""), source] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    format!("u{}", &hex::encode(h.finalize())[..16])
}

pub fn content_hash(source: &str) -> String {
    hex::encode(Sha256::digest(source.as_bytes()))
}

/// Ingest filter. Defaults: 3..=150 lines, at most 1024 word tokens, parse
/// check and dedup enabled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestFilter {
    pub min_lines: usize,
    pub max_lines: usize,
    pub max_tokens: usize,
    pub require_parse: bool,
    pub dedup: bool,
}

impl Default for IngestFilter {
    fn default() -> Self {
        IngestFilter { min_lines: 3, max_lines: 150, max_tokens: 1024, require_parse: true, dedup: true }
    }
}

impl IngestFilter {
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.min_lines < 1 {
            return Err(CorpusError::InvalidFilter("min_lines must be at least 1".into()));
        }
        if self.max_lines < self.min_lines {
            return Err(CorpusError::InvalidFilter(format!(
                "max_lines ({}) is below min_lines ({})",
                self.max_lines, self.min_lines
            )));
        }
        Ok(())
    }
}

/// Rejection reasons in evaluation order; a rejected unit records the first
/// predicate it violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    Parse,
    Length,
    Tokens,
    Dedup,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionCounts {
    pub parse: usize,
    pub length: usize,
    pub tokens: usize,
    pub dedup: usize,
}

impl RejectionCounts {
    fn bump(&mut self, reason: RejectReason) {
        match reason {
            RejectReason::Parse => self.parse += 1,
            RejectReason::Length => self.length += 1,
            RejectReason::Tokens => self.tokens += 1,
            RejectReason::Dedup => self.dedup += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.parse + self.length + self.tokens + self.dedup
    }
}

impl std::fmt::Display for RejectionCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse={} length={} tokens={} dedup={}", self.parse, self.length, self.tokens, self.dedup)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub file: PathBuf,
    /// Ordinal of the function within its file; `None` for file-level rejections.
    pub function: Option<usize>,
    pub reason: RejectReason,
}

/// Per-unit manifest record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitRecord {
    pub id: String,
    pub language: Language,
    /// Path of the unit file relative to the corpus directory, `/`-separated.
    pub path: String,
    pub hash: String,
    pub problem_id: Option<String>,
    pub solution_id: Option<String>,
    pub line_count: usize,
    pub token_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub language: Language,
    pub filter_config: IngestFilter,
    /// Unix seconds; taken from `SOURCE_DATE_EPOCH` when set, else 0, so
    /// manifests stay reproducible.
    pub created_at: u64,
    pub source_description: String,
    pub rejected: RejectionCounts,
    pub unit_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub header: ManifestHeader,
    pub units: Vec<UnitRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ManifestLine {
    Header(ManifestHeader),
    Unit(UnitRecord),
}

impl CorpusManifest {
    pub fn write_jsonl(&self, mut w: impl Write) -> io::Result<()> {
        serde_json::to_writer(&mut w, &ManifestLine::Header(self.header.clone()))?;
        w.write_all(b"\n")?;
        for unit in &self.units {
            serde_json::to_writer(&mut w, &ManifestLine::Unit(unit.clone()))?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl(path: &Path) -> Result<Self, CorpusError> {
        let file = fs::File::open(path).map_err(io_err(path))?;
        let mut header = None;
        let mut units = Vec::new();
        for (idx, line) in io::BufReader::new(file).lines().enumerate() {
            let line = line.map_err(io_err(path))?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |message: String| CorpusError::Manifest { path: path.to_path_buf(), line: idx + 1, message };
            match serde_json::from_str::<ManifestLine>(&line).map_err(|e| bad(e.to_string()))? {
                ManifestLine::Header(h) if header.is_none() => header = Some(h),
                ManifestLine::Header(_) => return Err(bad("duplicate header record".into())),
                ManifestLine::Unit(u) => units.push(u),
            }
        }
        let header = header.ok_or_else(|| CorpusError::Manifest {
            path: path.to_path_buf(),
            line: 0,
            message: "missing header record".into(),
        })?;
        Ok(CorpusManifest { header, units })
    }
}

/// Outcome of [`ingest_corpus`]: the manifest, the surviving units in manifest
/// order, and every rejection.
#[derive(Debug, Clone)]
pub struct IngestOutcome {
    pub manifest: CorpusManifest,
    pub units: Vec<CodeUnit>,
    pub rejections: Vec<Rejection>,
}

/// A function definition found in a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSlice {
    pub span: Range<usize>,
    pub name: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extraction {
    pub functions: Vec<FunctionSlice>,
    pub diagnostic: Option<String>,
}

/// Finds top-level functions and class methods in a parseable file. Nested and
/// local functions stay inside their parent. A file with syntax errors yields
/// no functions and a diagnostic.
pub fn extract_functions(file_source: &str, language: Language) -> Extraction {
    let tree = lang::parse(file_source, language);
    let root = tree.root_node();
    if root.has_error() {
        let at = first_error(root).map(|n| n.start_position());
        return Extraction {
            functions: Vec::new(),
            diagnostic: Some(match at {
                Some(p) => format!("syntax error at line {}, column {}", p.row + 1, p.column + 1),
                None => "syntax error".into(),
            }),
        };
    }
    Extraction { functions: collect_functions(root, file_source, language), diagnostic: None }
}

/// Like [`extract_functions`] but tolerates syntax errors elsewhere in the file.
pub fn extract_functions_lenient(file_source: &str, language: Language) -> Vec<FunctionSlice> {
    let tree = lang::parse(file_source, language);
    collect_functions(tree.root_node(), file_source, language)
}

fn first_error(node: Node<'_>) -> Option<Node<'_>> {
    if node.is_error() || node.is_missing() {
        return Some(node);
    }
    let mut cursor = node.walk();
    let found = node.children(&mut cursor).find(|c| c.has_error()).and_then(first_error);
    found
}

fn collect_functions(root: Node<'_>, src: &str, language: Language) -> Vec<FunctionSlice> {
    let mut out = Vec::new();
    match language {
        Language::Java => java_functions(root, src, &mut out),
        Language::Python => python_functions(root, src, &mut out),
    }
    out
}

fn java_functions(node: Node<'_>, src: &str, out: &mut Vec<FunctionSlice>) {
    let mut cursor = node.walk();
    for child in node.named_children(&mut cursor) {
        match child.kind() {
            "method_declaration" => {
                if child.child_by_field_name("body").is_some() {
                    let name = child.child_by_field_name("name").map(|n| src[n.byte_range()].to_string()).unwrap_or_default();
                    out.push(FunctionSlice { span: child.byte_range(), name });
                }
            }
            "class_declaration" | "interface_declaration" | "enum_declaration" | "record_declaration" => {
                if let Some(body) = child.child_by_field_name("body") {
                    java_functions(body, src, out);
                }
            }
            "enum_body_declarations" => java_functions(child, src, out),
            _ => {}
        }
    }
}

fn python_functions(node: Node<'_>, src: &str, out: &mut Vec<FunctionSlice>) {
    let mut cursor = node.walk();
    for child in node.named_children(&mut cursor) {
        let def = if child.kind() == "decorated_definition" { child.child_by_field_name("definition") } else { Some(child) };
        let Some(def) = def else { continue };
        match def.kind() {
            "function_definition" => {
                let name = def.child_by_field_name("name").map(|n| src[n.byte_range()].to_string()).unwrap_or_default();
                out.push(FunctionSlice { span: child.byte_range(), name });
            }
            "class_definition" => {
                if let Some(body) = def.child_by_field_name("body") {
                    python_functions(body, src, out);
                }
            }
            _ => {}
        }
    }
}

/// Digest used as the dedup key: the word-token stream line by line (Python
/// keeps indentation width), so trailing whitespace and trailing blank lines
/// do not matter while literal values and identifier spellings do.
pub fn normalization_hash(unit: &CodeUnit) -> String {
    normalization_hash_source(&unit.source, unit.language)
}

pub fn normalization_hash_source(source: &str, language: Language) -> String {
    let source = normalize_newlines(source);
    let tokens = lang::lex(&source, language);
    let mut h = Sha256::new();
    h.update(language.name().as_bytes());
    let mut current_line = None;
    for tok in &tokens {
        if current_line != Some(tok.line) {
            current_line = Some(tok.line);
            h.update(b"\n");
            if language == Language::Python {
                let line_start = source[..tok.start].rfind('\n').map(|i| i + 1).unwrap_or(0);
                h.update((tok.start - line_start).to_le_bytes());
            }
        } else {
            h.update([0x1f]);
        }
        h.update(tok.text(&source).as_bytes());
    }
    hex::encode(h.finalize())
}

struct Candidate {
    file_idx: usize,
    function_idx: usize,
    unit: CodeUnit,
}

enum FileOutcome {
    Unreadable(CorpusError),
    Processed { candidates: Vec<Candidate>, rejections: Vec<Rejection> },
}

/// Ingests `.java` / `.py` trees under `paths`.
///
/// Provenance comes from each file's path relative to the root it was found
/// under: `<problem>/<solution>.<ext>`, `<problem>/<solution>/<any>.<ext>`, or
/// `<solution>.<ext>` with no problem. Files are visited in sorted path order.
pub fn ingest_corpus(paths: &[PathBuf], language: Language, filter: &IngestFilter) -> Result<IngestOutcome, CorpusError> {
    filter.validate()?;
    let mut files: Vec<(PathBuf, PathBuf)> = Vec::new();
    for root in paths {
        if !root.exists() {
            return Err(CorpusError::Io {
                path: root.clone(),
                source: io::Error::new(io::ErrorKind::NotFound, "input path does not exist"),
            });
        }
        for entry in WalkDir::new(root).sort_by_file_name() {
            let entry = entry.map_err(|e| CorpusError::Io {
                path: e.path().map(Path::to_path_buf).unwrap_or_else(|| root.clone()),
                source: e.into_io_error().unwrap_or_else(|| io::Error::other("walk error")),
            })?;
            if entry.file_type().is_file() && entry.path().extension().and_then(|e| e.to_str()) == Some(language.extension()) {
                let rel = entry.path().strip_prefix(root).unwrap_or(entry.path()).to_path_buf();
                files.push((entry.path().to_path_buf(), rel));
            }
        }
    }

    let outcomes: Vec<FileOutcome> = files
        .par_iter()
        .enumerate()
        .map(|(file_idx, (abs, rel))| process_file(file_idx, abs, rel, language, filter))
        .collect();

    let mut rejections = Vec::new();
    let mut counts = RejectionCounts::default();
    let mut seen = HashSet::new();
    let mut ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut units = Vec::new();
    for outcome in outcomes {
        let (candidates, file_rejections) = match outcome {
            FileOutcome::Unreadable(e) => return Err(e),
            FileOutcome::Processed { candidates, rejections } => (candidates, rejections),
        };
        for r in file_rejections {
            counts.bump(r.reason);
            rejections.push(r);
        }
        for cand in candidates {
            if filter.dedup && !seen.insert(normalization_hash(&cand.unit)) {
                counts.bump(RejectReason::Dedup);
                rejections.push(Rejection {
                    file: files[cand.file_idx].1.clone(),
                    function: Some(cand.function_idx),
                    reason: RejectReason::Dedup,
                });
                continue;
            }
            let mut unit = cand.unit;
            // byte-identical units inside one solution stay distinct when dedup is off
            let n = ids.entry(unit.id.clone()).or_insert(0);
            *n += 1;
            if *n > 1 {
                unit.id = format!("{}-{}", unit.id, *n - 1);
            }
            units.push(unit);
        }
    }

    if units.is_empty() {
        return Err(CorpusError::EmptyCorpus { rejected: counts });
    }

    let records = units.iter().map(unit_record).collect::<Vec<_>>();
    let header = ManifestHeader {
        language,
        filter_config: filter.clone(),
        created_at: reproducible_timestamp(),
        source_description: paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(","),
        rejected: counts,
        unit_count: records.len(),
    };
    Ok(IngestOutcome { manifest: CorpusManifest { header, units: records }, units, rejections })
}

fn reproducible_timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

fn process_file(file_idx: usize, abs: &Path, rel: &Path, language: Language, filter: &IngestFilter) -> FileOutcome {
    let bytes = match fs::read(abs) {
        Ok(b) => b,
        Err(source) => return FileOutcome::Unreadable(CorpusError::Io { path: abs.to_path_buf(), source }),
    };
    let file_rejection = |reason| FileOutcome::Processed {
        candidates: Vec::new(),
        rejections: vec![Rejection { file: rel.to_path_buf(), function: None, reason }],
    };
    let Ok(text) = String::from_utf8(bytes) else {
        return file_rejection(RejectReason::Parse);
    };
    let text = normalize_newlines(&text);
    let functions = if filter.require_parse {
        let extraction = extract_functions(&text, language);
        if extraction.diagnostic.is_some() {
            return file_rejection(RejectReason::Parse);
        }
        extraction.functions
    } else {
        extract_functions_lenient(&text, language)
    };

    let (problem_id, solution_id) = provenance_from_path(rel);
    let mut candidates = Vec::new();
    let mut rejections = Vec::new();
    for (function_idx, f) in functions.iter().enumerate() {
        let source = &text[f.span.clone()];
        let unit = CodeUnit::new(language, source, problem_id.clone(), solution_id.clone());
        let reason = if filter.require_parse && lang::has_syntax_error(&unit.source, language) {
            Some(RejectReason::Parse)
        } else if unit.line_count < filter.min_lines || unit.line_count > filter.max_lines {
            Some(RejectReason::Length)
        } else if unit.token_count > filter.max_tokens {
            Some(RejectReason::Tokens)
        } else {
            None
        };
        match reason {
            Some(reason) => rejections.push(Rejection { file: rel.to_path_buf(), function: Some(function_idx), reason }),
            None => candidates.push(Candidate { file_idx, function_idx, unit }),
        }
    }
    FileOutcome::Processed { candidates, rejections }
}

/// `(problem_id, solution_id)` from a path relative to the ingest root.
pub fn provenance_from_path(rel: &Path) -> (Option<String>, Option<String>) {
    let parts: Vec<String> = rel
        .components()
        .filter_map(|c| match c {
            Component::Normal(s) => Some(s.to_string_lossy().into_owned()),
            _ => None,
        })
        .collect();
    let stem = |s: &str| Path::new(s).file_stem().map(|x| x.to_string_lossy().into_owned()).unwrap_or_default();
    let problem = |s: &str| if s == NO_PROBLEM_DIR { None } else { Some(s.to_string()) };
    match parts.as_slice() {
        [] => (None, None),
        [file] => (None, Some(stem(file))),
        [p, file] => (problem(p), Some(stem(file))),
        [p, s, ..] => (problem(p), Some(s.clone())),
    }
}

fn unit_path(unit: &CodeUnit) -> String {
    format!(
        "{}/{}/{}.{}",
        unit.problem_id.as_deref().unwrap_or(NO_PROBLEM_DIR),
        unit.solution_id.as_deref().unwrap_or(NO_PROBLEM_DIR),
        unit.id,
        unit.language.extension()
    )
}

fn unit_record(unit: &CodeUnit) -> UnitRecord {
    UnitRecord {
        id: unit.id.clone(),
        language: unit.language,
        path: unit_path(unit),
        hash: content_hash(&unit.source),
        problem_id: unit.problem_id.clone(),
        solution_id: unit.solution_id.clone(),
        line_count: unit.line_count,
        token_count: unit.token_count,
    }
}

/// Writes unit files and `manifest.jsonl` under `dir`.
pub fn write_corpus(dir: &Path, outcome: &IngestOutcome) -> Result<(), CorpusError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (unit, record) in outcome.units.iter().zip(&outcome.manifest.units) {
        let path = dir.join(&record.path);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        fs::write(&path, unit.source.as_bytes()).map_err(io_err(&path))?;
    }
    let manifest_path = dir.join(MANIFEST_FILE);
    let file = fs::File::create(&manifest_path).map_err(io_err(&manifest_path))?;
    let mut w = BufWriter::new(file);
    outcome.manifest.write_jsonl(&mut w).map_err(io_err(&manifest_path))?;
    w.flush().map_err(io_err(&manifest_path))?;
    Ok(())
}

/// A corpus read back from disk, units in manifest order.
#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub manifest: CorpusManifest,
    pub units: Vec<CodeUnit>,
}

impl LoadedCorpus {
    pub fn language(&self) -> Language {
        self.manifest.header.language
    }
}

/// Reads a corpus directory, verifying every unit file against its hash.
pub fn load_corpus(dir: &Path) -> Result<LoadedCorpus, CorpusError> {
    let manifest = CorpusManifest::read_jsonl(&dir.join(MANIFEST_FILE))?;
    let units = manifest
        .units
        .iter()
        .map(|rec| {
            let path = dir.join(&rec.path);
            let source = fs::read_to_string(&path).map_err(io_err(&path))?;
            if content_hash(&source) != rec.hash {
                return Err(CorpusError::HashMismatch { path });
            }
            Ok(CodeUnit {
                id: rec.id.clone(),
                language: rec.language,
                source,
                problem_id: rec.problem_id.clone(),
                solution_id: rec.solution_id.clone(),
                token_count: rec.token_count,
                line_count: rec.line_count,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LoadedCorpus { manifest, units })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn java_unit(src: &str) -> CodeUnit {
        CodeUnit::new(Language::Java, src, None, None)
    }

    #[test]
    fn normalization_hash_ignores_trailing_whitespace_only() {
        assert_eq!(normalization_hash(&java_unit("int x;\n")), normalization_hash(&java_unit("int x;")));
        assert_ne!(normalization_hash(&java_unit("int x;")), normalization_hash(&java_unit("int y;")));
        assert_eq!(normalization_hash(&java_unit("a=1;  \nb=2;")), normalization_hash(&java_unit("a=1;\nb=2;")));
        assert_eq!(normalization_hash(&java_unit("a=1;\r\nb=2;")), normalization_hash(&java_unit("a=1;\nb=2;")));
        assert_ne!(normalization_hash(&java_unit("s = \"a\";")), normalization_hash(&java_unit("s = \"b\";")));
    }

    #[test]
    fn python_indentation_is_content() {
        let a = "if x:\n    a()\nb()";
        let b = "if x:\n    a()\n    b()";
        assert_ne!(normalization_hash_source(a, Language::Python), normalization_hash_source(b, Language::Python));
    }

    #[test]
    fn extracts_methods_with_disjoint_spans() {
        let src = "class A {\n  int f(int x) { return x; }\n  void g() { f(1); }\n  abstract void h();\n}\n";
        let ex = extract_functions(src, Language::Java);
        assert_eq!(ex.diagnostic, None);
        let names: Vec<_> = ex.functions.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names, ["f", "g"]);
        assert!(ex.functions[0].span.end <= ex.functions[1].span.start);
        assert_eq!(&src[ex.functions[0].span.clone()], "int f(int x) { return x; }");
    }

    #[test]
    fn python_methods_and_decorators() {
        let src = "import os\n\n@cache\ndef f(n):\n    def inner():\n        return n\n    return inner()\n\nclass K:\n    def m(self):\n        return 1\n";
        let ex = extract_functions(src, Language::Python);
        let names: Vec<_> = ex.functions.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names, ["f", "m"]);
        assert!(src[ex.functions[0].span.clone()].starts_with("@cache\ndef f"));
    }

    #[test]
    fn empty_and_broken_files() {
        assert_eq!(extract_functions("", Language::Java), Extraction::default());
        let broken = extract_functions("class A { void f() { int x = ; } }", Language::Java);
        assert!(broken.functions.is_empty());
        assert!(broken.diagnostic.is_some());
    }

    #[test]
    fn provenance_conventions() {
        assert_eq!(provenance_from_path(Path::new("p1/s2.java")), (Some("p1".into()), Some("s2".into())));
        assert_eq!(provenance_from_path(Path::new("p1/s2/u0.java")), (Some("p1".into()), Some("s2".into())));
        assert_eq!(provenance_from_path(Path::new("_/s2/u0.java")), (None, Some("s2".into())));
        assert_eq!(provenance_from_path(Path::new("s2.py")), (None, Some("s2".into())));
    }

    #[test]
    fn filter_validation() {
        assert!(IngestFilter::default().validate().is_ok());
        assert!(IngestFilter { min_lines: 0, ..Default::default() }.validate().is_err());
        assert!(IngestFilter { min_lines: 5, max_lines: 4, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn line_count_is_lf_split() {
        assert_eq!(count_lines("a"), 1);
        assert_eq!(count_lines("a\nb"), 2);
    }
}
