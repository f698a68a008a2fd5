//! Benchmark assembly: (origin, positive, negative) triplets drawn from a
//! problem/solution corpus, then two-candidate selection tasks per pair type.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::analyze;
use crate::corpus::CodeUnit;
use crate::lang::Language;
use crate::perturb::{perturb, PerturbParams, PerturbationKind, PerturbationRecord, PerturbedUnit};
use crate::seed::{self, derive_seed};

pub const DATASET_FILE: &str = "dataset.jsonl";
pub const DATASET_MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("requested {requested} triplets but only {feasible} distinct triplets exist")]
    Underfull { requested: usize, feasible: u128 },
    #[error("no tasks to export")]
    EmptyDataset,
    #[error("unknown unit {0} referenced by a triplet")]
    UnknownUnit(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed dataset line {line}: {message}")]
    Malformed { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairType {
    PosVsNeg,
    ObfVsNeg,
    PosVsLsh,
    PosVsTsh,
    PosVsKwr,
    PosVsSmr,
}

/// Which code plays a candidate's part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Positive,
    Negative,
    Obfuscated,
    LineShuffled,
    TokenShuffled,
    KeywordReplaced,
    SymbolReplaced,
}

impl PairType {
    pub const ALL: [PairType; 6] =
        [PairType::PosVsNeg, PairType::ObfVsNeg, PairType::PosVsLsh, PairType::PosVsTsh, PairType::PosVsKwr, PairType::PosVsSmr];

    pub fn name(self) -> &'static str {
        match self {
            PairType::PosVsNeg => "pos_vs_neg",
            PairType::ObfVsNeg => "obf_vs_neg",
            PairType::PosVsLsh => "pos_vs_lsh",
            PairType::PosVsTsh => "pos_vs_tsh",
            PairType::PosVsKwr => "pos_vs_kwr",
            PairType::PosVsSmr => "pos_vs_smr",
        }
    }

    /// (accepted, rejected) candidate roles.
    pub fn roles(self) -> (Role, Role) {
        match self {
            PairType::PosVsNeg => (Role::Positive, Role::Negative),
            PairType::ObfVsNeg => (Role::Obfuscated, Role::Negative),
            PairType::PosVsLsh => (Role::Positive, Role::LineShuffled),
            PairType::PosVsTsh => (Role::Positive, Role::TokenShuffled),
            PairType::PosVsKwr => (Role::Positive, Role::KeywordReplaced),
            PairType::PosVsSmr => (Role::Positive, Role::SymbolReplaced),
        }
    }

    /// Perturbation of the origin this pair type needs, if any.
    pub fn perturbation(self) -> Option<PerturbationKind> {
        match self {
            PairType::PosVsNeg => None,
            PairType::ObfVsNeg => Some(PerturbationKind::Obfuscate),
            PairType::PosVsLsh => Some(PerturbationKind::LineShuffle),
            PairType::PosVsTsh => Some(PerturbationKind::TokenShuffle),
            PairType::PosVsKwr => Some(PerturbationKind::KeywordReplace),
            PairType::PosVsSmr => Some(PerturbationKind::SymbolReplace),
        }
    }
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PairType::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown pair type `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triplet {
    pub origin: String,
    pub positive: String,
    pub negative: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskProvenance {
    pub triplet: usize,
    pub origin: String,
    pub positive: String,
    pub negative: String,
    pub accepted: Role,
    pub rejected: Role,
    pub perturbation: Option<PerturbationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidatePairTask {
    pub task_id: String,
    pub pair_type: PairType,
    pub language: Language,
    pub query: String,
    pub candidate_a: String,
    pub candidate_b: String,
    pub correct: Answer,
    pub provenance: TaskProvenance,
}

impl CandidatePairTask {
    /// (accepted, rejected) candidate texts.
    pub fn accepted_rejected(&self) -> (&str, &str) {
        match self.correct {
            Answer::A => (&self.candidate_a, &self.candidate_b),
            Answer::B => (&self.candidate_b, &self.candidate_a),
        }
    }
}

struct Pool<'a> {
    units: Vec<&'a CodeUnit>,
    /// problem id -> indices into `units`
    problems: BTreeMap<&'a str, Vec<usize>>,
}

impl<'a> Pool<'a> {
    fn new(units: &'a [CodeUnit]) -> Self {
        let units: Vec<&CodeUnit> = units.iter().filter(|u| u.problem_id.is_some()).collect();
        let mut problems: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, u) in units.iter().enumerate() {
            problems.entry(u.problem_id.as_deref().unwrap()).or_default().push(i);
        }
        Pool { units, problems }
    }

    fn is_positive(&self, origin: usize, other: usize) -> bool {
        origin != other && self.units[origin].solution_id != self.units[other].solution_id
    }

    /// Ordered (origin, positive) pairs and the negative count of their problem.
    fn pairs(&self) -> Vec<(usize, usize, usize)> {
        let total = self.units.len();
        let mut out = Vec::new();
        for members in self.problems.values() {
            let negatives = total - members.len();
            for &o in members {
                for &p in members {
                    if self.is_positive(o, p) {
                        out.push((o, p, negatives));
                    }
                }
            }
        }
        out
    }

    fn negatives_of(&self, origin: usize) -> impl Iterator<Item = usize> + '_ {
        let problem = self.units[origin].problem_id.as_deref();
        (0..self.units.len()).filter(move |&i| self.units[i].problem_id.as_deref() != problem)
    }
}

/// Number of distinct triplets the corpus admits.
pub fn feasible_triplets(units: &[CodeUnit]) -> u128 {
    Pool::new(units).pairs().iter().map(|&(_, _, neg)| neg as u128).sum()
}

/// Draws `n` distinct triplets: a uniform (origin, positive) pair, then a
/// uniform negative. When `n` is more than half the feasible space the
/// triplets are enumerated and sampled directly instead.
pub fn build_triplets(units: &[CodeUnit], seed: u64, n: usize) -> Result<Vec<Triplet>, BenchError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let pool = Pool::new(units);
    let pairs = pool.pairs();
    let feasible: u128 = pairs.iter().map(|&(_, _, neg)| neg as u128).sum();
    if (n as u128) > feasible {
        return Err(BenchError::Underfull { requested: n, feasible });
    }
    let mut rng = seed::rng(derive_seed(seed, "triplets", ""));
    let id = |i: usize| pool.units[i].id.clone();
    let make = |(o, p, neg): (usize, usize, usize)| Triplet { origin: id(o), positive: id(p), negative: id(neg) };

    if (n as u128) * 2 > feasible {
        let all: Vec<(usize, usize, usize)> =
            pairs.iter().flat_map(|&(o, p, _)| pool.negatives_of(o).map(move |neg| (o, p, neg))).collect();
        let mut picked = index::sample(&mut rng, all.len(), n).into_vec();
        // keep draw order so the output prefix is itself a sample
        return Ok(picked.drain(..).map(|i| make(all[i])).collect());
    }

    let negatives: HashMap<usize, Vec<usize>> = pairs
        .iter()
        .map(|&(o, _, _)| o)
        .collect::<HashSet<_>>()
        .into_iter()
        .map(|o| (o, pool.negatives_of(o).collect()))
        .collect();
    let live: Vec<&(usize, usize, usize)> = pairs.iter().filter(|p| p.2 > 0).collect();
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let &&(o, p, _) = &live[rng.random_range(0..live.len())];
        let negs = &negatives[&o];
        let neg = negs[rng.random_range(0..negs.len())];
        if seen.insert((o, p, neg)) {
            out.push(make((o, p, neg)));
        }
    }
    Ok(out)
}

/// Result of [`build_pair_tasks`].
#[derive(Debug, Clone, Default)]
pub struct TaskBuild {
    pub tasks: Vec<CandidatePairTask>,
    /// Tasks dropped per pair type because the origin's perturbation failed.
    pub skipped: BTreeMap<PairType, usize>,
}

/// Builds one task per (triplet, pair type). The accepted candidate is placed
/// at A or B by a fair coin from a single seeded stream, in triplet order then
/// [`PairType::ALL`] order.
pub fn build_pair_tasks(
    units: &[CodeUnit],
    triplets: &[Triplet],
    pair_types: &[PairType],
    seed: u64,
    params: &PerturbParams,
) -> Result<TaskBuild, BenchError> {
    let by_id: HashMap<&str, &CodeUnit> = units.iter().map(|u| (u.id.as_str(), u)).collect();
    let get = |id: &str| by_id.get(id).copied().ok_or_else(|| BenchError::UnknownUnit(id.to_string()));
    for t in triplets {
        get(&t.origin)?;
        get(&t.positive)?;
        get(&t.negative)?;
    }
    let types: Vec<PairType> = PairType::ALL.into_iter().filter(|t| pair_types.contains(t)).collect();
    let kinds: Vec<PerturbationKind> = types.iter().filter_map(|t| t.perturbation()).collect();

    let mut origins: Vec<&str> = triplets.iter().map(|t| t.origin.as_str()).collect();
    origins.sort_unstable();
    origins.dedup();
    let jobs: Vec<(PerturbationKind, &str)> = kinds.iter().flat_map(|&k| origins.iter().map(move |&o| (k, o))).collect();
    let perturbed: HashMap<(PerturbationKind, &str), Option<PerturbedUnit>> = jobs
        .par_iter()
        .map(|&(kind, id)| {
            let unit = by_id[id];
            let result = analyze(unit)
                .ok()
                .and_then(|summary| perturb(kind, unit, &summary, derive_seed(seed, kind.name(), id), params).ok());
            ((kind, id), result)
        })
        .collect();

    let mut coin = seed::rng(derive_seed(seed, "placement", ""));
    let mut build = TaskBuild::default();
    for (ti, t) in triplets.iter().enumerate() {
        let origin = by_id[t.origin.as_str()];
        let positive = &by_id[t.positive.as_str()].source;
        let negative = &by_id[t.negative.as_str()].source;
        for &pair_type in &types {
            let perturbation = match pair_type.perturbation() {
                Some(kind) => match &perturbed[&(kind, t.origin.as_str())] {
                    Some(p) => Some(p),
                    None => {
                        *build.skipped.entry(pair_type).or_insert(0) += 1;
                        continue;
                    }
                },
                None => None,
            };
            let text = |role: Role| -> &str {
                match role {
                    Role::Positive => positive,
                    Role::Negative => negative,
                    _ => &perturbation.expect("perturbed role has a perturbation").source,
                }
            };
            let (accepted, rejected) = pair_type.roles();
            let correct = if coin.random_bool(0.5) { Answer::A } else { Answer::B };
            let (a, b) = match correct {
                Answer::A => (text(accepted), text(rejected)),
                Answer::B => (text(rejected), text(accepted)),
            };
            build.tasks.push(CandidatePairTask {
                task_id: format!("{}-{ti:06}", pair_type.name()),
                pair_type,
                language: origin.language,
                query: origin.source.clone(),
                candidate_a: a.to_string(),
                candidate_b: b.to_string(),
                correct,
                provenance: TaskProvenance {
                    triplet: ti,
                    origin: t.origin.clone(),
                    positive: t.positive.clone(),
                    negative: t.negative.clone(),
                    accepted,
                    rejected,
                    perturbation: perturbation.map(|p| p.record.clone()),
                },
            });
        }
    }
    Ok(build)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub seed: u64,
    pub triplets: usize,
    pub pair_types: Vec<PairType>,
    pub counts: BTreeMap<PairType, usize>,
    pub skipped: BTreeMap<PairType, usize>,
    pub task_count: usize,
    /// sha256 of the dataset file bytes.
    pub dataset_hash: String,
}

pub fn write_tasks_jsonl(tasks: &[CandidatePairTask], mut w: impl Write) -> io::Result<()> {
    for t in tasks {
        serde_json::to_writer(&mut w, t)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes `dataset.jsonl` and `manifest.json` into `dir`.
pub fn export_dataset(
    build: &TaskBuild,
    seed: u64,
    triplets: usize,
    pair_types: &[PairType],
    dir: &Path,
) -> Result<DatasetManifest, BenchError> {
    if build.tasks.is_empty() {
        return Err(BenchError::EmptyDataset);
    }
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| BenchError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut bytes = Vec::new();
    write_tasks_jsonl(&build.tasks, &mut bytes).map_err(io_err(dir))?;
    let data_path = dir.join(DATASET_FILE);
    fs::write(&data_path, &bytes).map_err(io_err(&data_path))?;

    let mut counts = BTreeMap::new();
    for t in &build.tasks {
        *counts.entry(t.pair_type).or_insert(0) += 1;
    }
    let mut types: Vec<PairType> = pair_types.to_vec();
    types.sort();
    types.dedup();
    let manifest = DatasetManifest {
        seed,
        triplets,
        pair_types: types,
        counts,
        skipped: build.skipped.clone(),
        task_count: build.tasks.len(),
        dataset_hash: hex::encode(Sha256::digest(&bytes)),
    };
    let manifest_path = dir.join(DATASET_MANIFEST_FILE);
    let file = fs::File::create(&manifest_path).map_err(io_err(&manifest_path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &manifest).map_err(|e| BenchError::Io { path: manifest_path.display().to_string(), source: e.into() })?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(io_err(&manifest_path))?;
    Ok(manifest)
}

/// Reads a dataset JSONL file (or the `dataset.jsonl` inside a directory).
pub fn load_dataset(path: &Path) -> Result<Vec<CandidatePairTask>, BenchError> {
    let path = if path.is_dir() { path.join(DATASET_FILE) } else { path.to_path_buf() };
    let file = fs::File::open(&path).map_err(|source| BenchError::Io { path: path.display().to_string(), source })?;
    let mut tasks = Vec::new();
    for (i, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| BenchError::Io { path: path.display().to_string(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        tasks.push(serde_json::from_str(&line).map_err(|e| BenchError::Malformed { line: i + 1, message: e.to_string() })?);
    }
    Ok(tasks)
}

/// sha256 of a dataset file's bytes.
pub fn dataset_hash(path: &Path) -> Result<String, BenchError> {
    let path = if path.is_dir() { path.join(DATASET_FILE) } else { path.to_path_buf() };
    let bytes = fs::read(&path).map_err(|source| BenchError::Io { path: path.display().to_string(), source })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(problem: &str, solution: &str, body: &str) -> CodeUnit {
        CodeUnit::new(
            Language::Python,
            format!("def f(x):\n    y = x {body}\n    return y\n"),
            Some(problem.into()),
            Some(solution.into()),
        )
    }

    fn two_by_two() -> Vec<CodeUnit> {
        vec![unit("p1", "s1", "+ 1"), unit("p1", "s2", "+ 2"), unit("p2", "s1", "* 3"), unit("p2", "s2", "* 4")]
    }

    #[test]
    fn feasible_count_matches_enumeration() {
        let units = two_by_two();
        let mut brute = 0;
        for o in &units {
            for p in &units {
                for n in &units {
                    if o.problem_id == p.problem_id && o.solution_id != p.solution_id && n.problem_id != o.problem_id {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(brute, 8);
        assert_eq!(feasible_triplets(&units), 8);
        let t = build_triplets(&units, 1, 4).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.iter().collect::<HashSet<_>>().len(), 4);
        assert_eq!(build_triplets(&units, 1, 8).unwrap().len(), 8);
        assert!(matches!(build_triplets(&units, 1, 9), Err(BenchError::Underfull { feasible: 8, .. })));
    }

    #[test]
    fn single_problem_is_underfull() {
        let units = vec![unit("p1", "s1", "+ 1"), unit("p1", "s2", "+ 2")];
        assert!(matches!(build_triplets(&units, 0, 1), Err(BenchError::Underfull { feasible: 0, .. })));
        assert!(build_triplets(&units, 0, 0).unwrap().is_empty());
    }

    #[test]
    fn pos_vs_neg_candidates() {
        let units = two_by_two();
        let triplets = build_triplets(&units, 3, 4).unwrap();
        let build = build_pair_tasks(&units, &triplets, &[PairType::PosVsNeg], 3, &PerturbParams::default()).unwrap();
        let src = |id: &str| units.iter().find(|u| u.id == id).unwrap().source.clone();
        for (task, t) in build.tasks.iter().zip(&triplets) {
            let (acc, rej) = task.accepted_rejected();
            assert_eq!(acc, src(&t.positive));
            assert_eq!(rej, src(&t.negative));
            assert_eq!(task.query, src(&t.origin));
        }
    }

    #[test]
    fn obf_vs_neg_accepts_obfuscated_origin() {
        let units = two_by_two();
        let triplets = build_triplets(&units, 3, 2).unwrap();
        let build = build_pair_tasks(&units, &triplets, &[PairType::ObfVsNeg], 3, &PerturbParams::default()).unwrap();
        for task in &build.tasks {
            let (acc, _) = task.accepted_rejected();
            assert!(acc.starts_with("def F0(V"));
            assert_eq!(task.provenance.accepted, Role::Obfuscated);
        }
    }

    #[test]
    fn unshuffleable_origins_are_skipped_for_lsh_only() {
        let units = two_by_two();
        let triplets = build_triplets(&units, 5, 3).unwrap();
        let build =
            build_pair_tasks(&units, &triplets, &[PairType::PosVsNeg, PairType::PosVsLsh], 5, &PerturbParams::default()).unwrap();
        // `y = x + 1; return y` always shuffles; every task survives
        assert_eq!(build.tasks.len(), 6);
        assert!(build.skipped.is_empty());
    }
}
