//! Embedder evaluation: cosine verdicts per pair task, aggregate accuracy,
//! a digest-keyed vector cache, similarity tables and question-answer prompts.

mod embedder;
mod prompt;
mod simtable;

pub use embedder::{validate_vector, EmbedError, Embedder, Embedding, HttpEmbedder, Message, ProcessEmbedder, DEFAULT_TIMEOUT};
pub use prompt::{grade, parse_answer, render_prompt, template, template_digest, Completion, ParsedAnswer, QaReport, QaTypeReport};
pub use simtable::{similarity_table, SimNotice, SimRow, SimTable};

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::benchmark::{CandidatePairTask, PairType};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("vector dimensions differ: {0} vs {1}")]
    DimsMismatch(usize, usize),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed line {line} in {path}: {message}")]
    Malformed { path: String, line: usize, message: String },
    #[error("vector cache holds {0:?}; choose one embedder id")]
    AmbiguousEmbedder(Vec<String>),
    #[error("embedding failed: {0}")]
    Embed(#[from] EmbedError),
}

/// Cosine similarity clamped to [-1, 1].
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, EvalError> {
    if u.len() != v.len() {
        return Err(EvalError::DimsMismatch(u.len(), v.len()));
    }
    let (mut dot, mut nu, mut nv) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(EvalError::ZeroVector);
    }
    Ok((dot / (nu * nv).sqrt()).clamp(-1.0, 1.0))
}

/// Key a text is cached under.
pub fn text_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Correct,
    Incorrect,
    Tie,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub task_id: String,
    pub pair_type: PairType,
    pub d_accepted: Option<f64>,
    pub d_rejected: Option<f64>,
    pub outcome: Outcome,
}

/// Scores one task from its query and candidate vectors. Exact equality of
/// the two similarities is a tie; a zero or mismatched vector skips the task.
pub fn score_pair_task(task: &CandidatePairTask, query: &[f64], a: &[f64], b: &[f64]) -> Verdict {
    let (acc, rej) = match task.correct {
        crate::benchmark::Answer::A => (a, b),
        crate::benchmark::Answer::B => (b, a),
    };
    let d_acc = cosine(query, acc).ok();
    let d_rej = cosine(query, rej).ok();
    let outcome = match (d_acc, d_rej) {
        (Some(x), Some(y)) if x > y => Outcome::Correct,
        (Some(x), Some(y)) if x < y => Outcome::Incorrect,
        (Some(_), Some(_)) => Outcome::Tie,
        _ => Outcome::Skipped,
    };
    Verdict { task_id: task.task_id.clone(), pair_type: task.pair_type, d_accepted: d_acc, d_rejected: d_rej, outcome }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TypeReport {
    pub correct: usize,
    pub incorrect: usize,
    pub tie: usize,
    pub skipped: usize,
    /// correct / (correct + incorrect + tie); 0 when nothing was scored.
    pub accuracy: f64,
}

impl TypeReport {
    pub fn scored(&self) -> usize {
        self.correct + self.incorrect + self.tie
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub embedder_id: String,
    pub dataset_hash: String,
    pub per_type: BTreeMap<PairType, TypeReport>,
    /// Scored tasks with at least one vector from a truncated input.
    #[serde(default)]
    pub truncated: usize,
    pub verdicts: Vec<Verdict>,
}

/// Folds verdicts into per-type counts. Verdicts are sorted by task id first,
/// so the report does not depend on scoring order.
pub fn aggregate(mut verdicts: Vec<Verdict>, embedder_id: &str, dataset_hash: &str) -> EvalReport {
    verdicts.sort_by(|a, b| a.task_id.cmp(&b.task_id));
    let mut per_type: BTreeMap<PairType, TypeReport> = BTreeMap::new();
    for v in &verdicts {
        let r = per_type.entry(v.pair_type).or_default();
        match v.outcome {
            Outcome::Correct => r.correct += 1,
            Outcome::Incorrect => r.incorrect += 1,
            Outcome::Tie => r.tie += 1,
            Outcome::Skipped => r.skipped += 1,
        }
    }
    for r in per_type.values_mut() {
        r.accuracy = if r.scored() == 0 { 0.0 } else { r.correct as f64 / r.scored() as f64 };
    }
    EvalReport { embedder_id: embedder_id.to_string(), dataset_hash: dataset_hash.to_string(), per_type, truncated: 0, verdicts }
}

/// One cached embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorRecord {
    pub embedder_id: String,
    pub digest: String,
    pub dims: usize,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub truncated: bool,
}

/// Vectors keyed by text digest, for a single embedder.
#[derive(Debug, Clone, Default)]
pub struct VectorStore {
    pub embedder_id: String,
    vectors: HashMap<String, (Vec<f64>, bool)>,
}

impl VectorStore {
    pub fn new(embedder_id: &str) -> Self {
        VectorStore { embedder_id: embedder_id.to_string(), vectors: HashMap::new() }
    }

    pub fn get(&self, text: &str) -> Option<&[f64]> {
        self.vectors.get(&text_digest(text)).map(|(v, _)| v.as_slice())
    }

    pub fn is_truncated(&self, text: &str) -> bool {
        self.vectors.get(&text_digest(text)).is_some_and(|(_, t)| *t)
    }

    pub fn insert(&mut self, digest: String, values: Vec<f64>, truncated: bool) {
        self.vectors.insert(digest, (values, truncated));
    }

    pub fn contains_digest(&self, digest: &str) -> bool {
        self.vectors.contains_key(digest)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

pub fn read_vector_records(path: &Path) -> Result<Vec<VectorRecord>, EvalError> {
    let text = fs::read_to_string(path).map_err(|source| EvalError::Io { path: path.display().to_string(), source })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(line).map_err(|e| EvalError::Malformed {
            path: path.display().to_string(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Loads the vectors of one embedder from a cache file. With `embedder_id`
/// unset the file must hold exactly one embedder.
pub fn load_vectors(path: &Path, embedder_id: Option<&str>) -> Result<VectorStore, EvalError> {
    let records = read_vector_records(path)?;
    let id = match embedder_id {
        Some(id) => id.to_string(),
        None => {
            let mut ids: Vec<String> = records.iter().map(|r| r.embedder_id.clone()).collect();
            ids.sort();
            ids.dedup();
            match ids.len() {
                0 => String::new(),
                1 => ids.pop().unwrap(),
                _ => return Err(EvalError::AmbiguousEmbedder(ids)),
            }
        }
    };
    let mut store = VectorStore::new(&id);
    for r in records.into_iter().filter(|r| r.embedder_id == id) {
        store.insert(r.digest, r.values, r.truncated);
    }
    Ok(store)
}

/// Distinct texts of a dataset in first-appearance order.
pub fn dataset_texts(tasks: &[CandidatePairTask]) -> Vec<&str> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for t in tasks {
        for s in [&t.query, &t.candidate_a, &t.candidate_b] {
            if seen.insert(s.as_str()) {
                out.push(s.as_str());
            }
        }
    }
    out
}

/// Summary of an [`embed_into_cache`] run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EmbedSummary {
    pub embedder_id: String,
    pub requested: usize,
    pub cached: usize,
    pub embedded: usize,
    pub failed: usize,
}

/// Embeds every text not already cached for this embedder and appends the
/// new records to `cache`, in text order. Failed items are counted and left out.
pub fn embed_into_cache(
    texts: &[&str],
    embedder: &mut dyn Embedder,
    cache: &Path,
    batch_size: usize,
) -> Result<EmbedSummary, EvalError> {
    let id = embedder.embedder_id().to_string();
    let mut existing = if cache.exists() { load_vectors(cache, Some(&id))? } else { VectorStore::new(&id) };
    let mut summary = EmbedSummary { embedder_id: id.clone(), requested: texts.len(), ..Default::default() };
    let mut todo: Vec<(&str, String)> = Vec::new();
    for &t in texts {
        let d = text_digest(t);
        if existing.contains_digest(&d) {
            summary.cached += 1;
        } else if !todo.iter().any(|(_, e)| *e == d) {
            todo.push((t, d));
        }
    }
    let io_err = |source| EvalError::Io { path: cache.display().to_string(), source };
    let mut file = fs::OpenOptions::new().create(true).append(true).open(cache).map_err(io_err)?;
    for chunk in todo.chunks(batch_size.max(1)) {
        let batch: Vec<&str> = chunk.iter().map(|(t, _)| *t).collect();
        let results = embedder.embed_many(&batch);
        let mut buf = Vec::new();
        for ((_, digest), result) in chunk.iter().zip(results) {
            match result {
                Ok(Embedding { values, truncated }) => {
                    let rec = VectorRecord { embedder_id: id.clone(), digest: digest.clone(), dims: values.len(), values, truncated };
                    serde_json::to_writer(&mut buf, &rec).expect("records serialize");
                    buf.push(b'\n');
                    existing.insert(rec.digest, rec.values, rec.truncated);
                    summary.embedded += 1;
                }
                Err(e) => {
                    log::warn!("embedding {} failed: {e}", &digest[..12]);
                    summary.failed += 1;
                }
            }
        }
        file.write_all(&buf).map_err(io_err)?;
    }
    file.flush().map_err(io_err)?;
    Ok(summary)
}

/// Scores every task whose three vectors are present; the rest are skipped.
pub fn score_dataset(tasks: &[CandidatePairTask], store: &VectorStore, dataset_hash: &str) -> EvalReport {
    let verdicts = tasks
        .iter()
        .map(|t| match (store.get(&t.query), store.get(&t.candidate_a), store.get(&t.candidate_b)) {
            (Some(q), Some(a), Some(b)) => score_pair_task(t, q, a, b),
            _ => Verdict { task_id: t.task_id.clone(), pair_type: t.pair_type, d_accepted: None, d_rejected: None, outcome: Outcome::Skipped },
        })
        .collect();
    let mut report = aggregate(verdicts, &store.embedder_id, dataset_hash);
    report.truncated = tasks
        .iter()
        .filter(|t| [&t.query, &t.candidate_a, &t.candidate_b].iter().any(|s| store.is_truncated(s)))
        .count();
    report
}

/// Reads JSON lines into `T`, skipping blank lines.
pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, EvalError> {
    let file = fs::File::open(path).map_err(|source| EvalError::Io { path: path.display().to_string(), source })?;
    let mut out = Vec::new();
    for (i, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| EvalError::Io { path: path.display().to_string(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| EvalError::Malformed {
            path: path.display().to_string(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_basics() {
        assert_eq!(cosine(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(cosine(&[1.0, 0.0], &[-2.0, 0.0]).unwrap(), -1.0);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 5.0]).unwrap(), 0.0);
        assert!(matches!(cosine(&[0.0, 0.0], &[1.0, 0.0]), Err(EvalError::ZeroVector)));
        assert!(matches!(cosine(&[1.0], &[1.0, 0.0]), Err(EvalError::DimsMismatch(1, 2))));
        // integer count vectors that are equal give exactly one
        let v = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        assert_eq!(cosine(&v, &v).unwrap(), 1.0);
    }

    fn verdict(id: &str, t: PairType, o: Outcome) -> Verdict {
        Verdict { task_id: id.into(), pair_type: t, d_accepted: None, d_rejected: None, outcome: o }
    }

    #[test]
    fn aggregate_counts_and_ties() {
        let vs = vec![
            verdict("b", PairType::PosVsNeg, Outcome::Tie),
            verdict("a", PairType::PosVsNeg, Outcome::Correct),
            verdict("c", PairType::PosVsNeg, Outcome::Incorrect),
            verdict("d", PairType::PosVsNeg, Outcome::Skipped),
            verdict("e", PairType::PosVsLsh, Outcome::Tie),
        ];
        let r = aggregate(vs.clone(), "x", "h");
        let p = &r.per_type[&PairType::PosVsNeg];
        assert_eq!((p.correct, p.incorrect, p.tie, p.skipped), (1, 1, 1, 1));
        assert!((p.accuracy - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.per_type[&PairType::PosVsLsh].accuracy, 0.0);
        let mut rev = vs;
        rev.reverse();
        assert_eq!(aggregate(rev, "x", "h"), r);
    }
}
