use std::collections::HashMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use lecs_core::analysis::analyze;
use lecs_core::baselines::{self, Features, HashedConfig, HashedEmbedder, DEFAULT_DIMS};
use lecs_core::benchmark::{self, PairType};
use lecs_core::corpus::{self, IngestFilter, LoadedCorpus};
use lecs_core::eval::{self, Completion, Embedder, HttpEmbedder, ProcessEmbedder};
use lecs_core::perturb::{self, PerturbParams, PerturbationKind, PerturbedUnit};
use lecs_core::seed::derive_seed;
use lecs_core::traindata::{self, EmitError, ExternalTokenizer, TrainingExample, Tokenizer, Variant};
use lecs_core::{CodeUnit, Language};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Settings;
use crate::{BaselineCommand, BenchCommand, Cli, Command, EvalCommand, Invalid, TraindataCommand};

const DEFAULT_SEED: u64 = 0;
const RECORDS_FILE: &str = "records.jsonl";
const REJECTIONS_FILE: &str = "rejections.jsonl";

/// Prints one machine-readable summary line.
fn summary(command: &str, fields: Value) {
    let mut line = json!({"status": "ok", "command": command});
    if let (Some(out), Value::Object(extra)) = (line.as_object_mut(), fields) {
        out.extend(extra);
    }
    println!("{line}");
}

fn create_file(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_jsonl<T: Serialize>(path: &Path, items: impl IntoIterator<Item = T>) -> Result<usize> {
    let mut w = create_file(path)?;
    let mut n = 0;
    for item in items {
        serde_json::to_writer(&mut w, &item)?;
        w.write_all(b"\n")?;
        n += 1;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(n)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create_file(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn require_dir(path: &Path) -> Result<()> {
    if !path.is_dir() {
        return Err(io::Error::new(io::ErrorKind::NotFound, format!("input directory {} does not exist", path.display())).into());
    }
    Ok(())
}

fn load_corpus(path: &Path) -> Result<LoadedCorpus> {
    require_dir(path)?;
    Ok(corpus::load_corpus(path)?)
}

pub fn run(cli: Cli) -> Result<()> {
    let settings = Settings::load(cli.config.as_deref())?;
    let workers: Option<usize> = settings.get(cli.workers, "workers")?;
    if let Some(n) = workers {
        if n == 0 {
            bail!(Invalid("--workers must be at least 1".into()));
        }
        // a second initialisation only happens in tests; the first pool stays
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let seed = settings.or(cli.seed, "seed", DEFAULT_SEED)?;
    match cli.command {
        Command::Ingest(a) => ingest(a, &settings.section("ingest")),
        Command::Analyze(a) => analyze_cmd(a, &settings.section("analyze")),
        Command::Perturb(a) => perturb_cmd(a, &settings.section("perturb"), seed),
        Command::Bench(BenchCommand::Build(a)) => bench_build(a, &settings.section("bench"), seed),
        Command::Traindata(TraindataCommand::Emit(a)) => traindata_emit(a, &settings.section("traindata"), seed),
        Command::Traindata(TraindataCommand::Loss(a)) => traindata_loss(a, &settings.section("traindata")),
        Command::Eval(EvalCommand::Embed(a)) => eval_embed(a, &settings.section("eval"), seed),
        Command::Eval(EvalCommand::Score(a)) => eval_score(a, &settings.section("eval")),
        Command::Eval(EvalCommand::Simtable(a)) => eval_simtable(a, &settings.section("eval"), seed),
        Command::Eval(EvalCommand::Prompts(a)) => eval_prompts(a, &settings.section("eval")),
        Command::Eval(EvalCommand::Grade(a)) => eval_grade(a, &settings.section("eval")),
        Command::Baseline(BaselineCommand::Serve(a)) => baseline_serve(a, &settings.section("baseline"), seed),
        Command::Report(a) => crate::report::run(a, &settings.section("report")),
    }
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    #[arg(long)]
    pub lang: Option<Language>,
    /// Source directory; may be repeated.
    #[arg(long = "in")]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub min_lines: Option<usize>,
    #[arg(long)]
    pub max_lines: Option<usize>,
    #[arg(long)]
    pub max_tokens: Option<usize>,
    #[arg(long)]
    pub no_dedup: bool,
    /// Keep files that do not parse cleanly.
    #[arg(long)]
    pub no_parse_check: bool,
}

fn ingest(a: IngestArgs, s: &Settings) -> Result<()> {
    let lang: Language = s.required(a.lang, "lang")?;
    let inputs: Vec<PathBuf> = s.list(a.input, "in")?;
    if inputs.is_empty() {
        bail!(Invalid("missing required setting --in".into()));
    }
    let out = s.path(a.out, "out")?;
    let d = IngestFilter::default();
    let filter = IngestFilter {
        min_lines: s.or(a.min_lines, "min-lines", d.min_lines)?,
        max_lines: s.or(a.max_lines, "max-lines", d.max_lines)?,
        max_tokens: s.or(a.max_tokens, "max-tokens", d.max_tokens)?,
        require_parse: !(a.no_parse_check || s.or(None, "no-parse-check", false)?),
        dedup: !(a.no_dedup || s.or(None, "no-dedup", false)?),
    };
    for dir in &inputs {
        require_dir(dir)?;
    }
    let outcome = corpus::ingest_corpus(&inputs, lang, &filter)?;
    corpus::write_corpus(&out, &outcome)?;
    write_jsonl(&out.join(REJECTIONS_FILE), &outcome.rejections)?;
    let rejected = outcome.manifest.header.rejected;
    summary("ingest", json!({"language": lang, "units": outcome.units.len(), "rejected": rejected, "out": out}));
    Ok(())
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn analyze_cmd(a: AnalyzeArgs, s: &Settings) -> Result<()> {
    let corpus = load_corpus(&s.path(a.input, "in")?)?;
    let out = s.path(a.out, "out")?;
    let results: Vec<_> = corpus.units.par_iter().map(analyze).collect();
    let mut summaries = Vec::with_capacity(results.len());
    let mut failed = 0;
    for r in results {
        match r {
            Ok(summary) => summaries.push(summary),
            Err(e) => {
                log::warn!("{e}");
                failed += 1;
            }
        }
    }
    let n = write_jsonl(&out, &summaries)?;
    summary("analyze", json!({"units": corpus.units.len(), "summaries": n, "failed": failed, "out": out}));
    Ok(())
}

#[derive(Args, Debug, Default)]
pub struct PerturbFlags {
    /// Share of bindings renamed by obfuscation.
    #[arg(long)]
    pub fraction: Option<f64>,
    /// Replacements made by keyword and symbol replacement.
    #[arg(long)]
    pub count: Option<usize>,
    /// Longest statement run moved by a line shuffle.
    #[arg(long)]
    pub max_span: Option<usize>,
    /// Let token shuffles move signature tokens too.
    #[arg(long)]
    pub shuffle_signature: bool,
}

impl PerturbFlags {
    fn params(&self, s: &Settings) -> Result<PerturbParams> {
        let d = PerturbParams::default();
        Ok(PerturbParams {
            fraction: s.or(self.fraction, "fraction", d.fraction)?,
            max_span: s.or(self.max_span, "max-span", d.max_span)?,
            count: s.or(self.count, "count", d.count)?,
            shuffle_signature: self.shuffle_signature || s.or(None, "shuffle-signature", false)?,
        })
    }
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    /// Perturbation kinds, comma separated, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub kind: Vec<String>,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub flags: PerturbFlags,
}

fn parse_kinds(names: Vec<String>) -> Result<Vec<PerturbationKind>> {
    if names.is_empty() {
        bail!(Invalid("missing required setting --kind".into()));
    }
    if names.iter().any(|n| n == "all") {
        return Ok(PerturbationKind::ALL.to_vec());
    }
    let mut kinds = names.iter().map(|n| n.parse::<PerturbationKind>().map_err(Invalid)).collect::<Result<Vec<_>, _>>()?;
    kinds.sort();
    kinds.dedup();
    Ok(kinds)
}

/// Perturbs every unit with every kind; failures are logged and counted.
fn perturb_units(
    units: &[CodeUnit],
    kinds: &[PerturbationKind],
    seed: u64,
    params: &PerturbParams,
) -> (Vec<PerturbedUnit>, HashMap<PerturbationKind, usize>) {
    let summaries: Vec<_> = units.par_iter().map(analyze).collect();
    let jobs: Vec<(PerturbationKind, usize)> = kinds.iter().flat_map(|&k| (0..units.len()).map(move |i| (k, i))).collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(kind, i)| {
            let unit = &units[i];
            let summary = summaries[i].as_ref().map_err(|e| e.to_string())?;
            perturb::perturb(kind, unit, summary, derive_seed(seed, kind.name(), &unit.id), params).map_err(|e| e.to_string())
        })
        .collect();
    let mut failed = HashMap::new();
    let mut out = Vec::new();
    for ((kind, i), r) in jobs.into_iter().zip(results) {
        match r {
            Ok(p) => out.push(p),
            Err(e) => {
                log::info!("{kind} on {}: {e}", units[i].id);
                *failed.entry(kind).or_insert(0) += 1;
            }
        }
    }
    (out, failed)
}

fn perturb_cmd(a: PerturbArgs, s: &Settings, seed: u64) -> Result<()> {
    let kinds = parse_kinds(s.list(a.kind, "kind")?)?;
    let params = a.flags.params(s)?;
    let corpus = load_corpus(&s.path(a.input, "in")?)?;
    let out = s.path(a.out, "out")?;
    let (perturbed, failed) = perturb_units(&corpus.units, &kinds, seed, &params);
    for p in &perturbed {
        let path = out.join(p.record.kind().name()).join(format!("{}.{}", p.base_unit_id, p.language.extension()));
        let mut w = create_file(&path)?;
        w.write_all(p.source.as_bytes())?;
        w.flush()?;
    }
    let n = write_jsonl(&out.join(RECORDS_FILE), &perturbed)?;
    let failed: serde_json::Map<String, Value> = kinds.iter().map(|k| (k.name().to_string(), json!(failed.get(k).copied().unwrap_or(0)))).collect();
    summary("perturb", json!({"seed": seed, "units": corpus.units.len(), "perturbed": n, "failed": failed, "out": out}));
    Ok(())
}

#[derive(Args, Debug)]
pub struct BenchBuildArgs {
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Number of triplets.
    #[arg(long)]
    pub n: Option<usize>,
    /// Pair types, comma separated, or `all`.
    #[arg(long, value_delimiter = ',')]
    pub types: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub flags: PerturbFlags,
}

fn parse_pair_types(names: Vec<String>) -> Result<Vec<PairType>> {
    if names.is_empty() || names.iter().any(|n| n == "all") {
        return Ok(PairType::ALL.to_vec());
    }
    Ok(names.iter().map(|n| n.parse::<PairType>().map_err(Invalid)).collect::<Result<Vec<_>, _>>()?)
}

fn bench_build(a: BenchBuildArgs, s: &Settings, seed: u64) -> Result<()> {
    let corpus = load_corpus(&s.path(a.input, "in")?)?;
    let n: usize = s.required(a.n, "n")?;
    let types = parse_pair_types(s.list(a.types, "types")?)?;
    let params = a.flags.params(s)?;
    if params.fraction != 1.0 {
        return Err(Invalid(format!("benchmark obfuscation renames every binding; --fraction must be 1, got {}", params.fraction)).into());
    }
    let out = s.path(a.out, "out")?;
    let triplets = benchmark::build_triplets(&corpus.units, seed, n)?;
    let build = benchmark::build_pair_tasks(&corpus.units, &triplets, &types, seed, &params)?;
    let manifest = benchmark::export_dataset(&build, seed, triplets.len(), &types, &out)?;
    summary(
        "bench build",
        json!({
            "seed": seed,
            "triplets": manifest.triplets,
            "tasks": manifest.task_count,
            "counts": manifest.counts,
            "skipped": manifest.skipped,
            "dataset_hash": manifest.dataset_hash,
            "out": out,
        }),
    );
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Original,
    LineShuffled,
    Obfuscated,
    All,
}

impl std::str::FromStr for VariantChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <VariantChoice as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TokenModeChoice {
    Word,
    External,
}

impl std::str::FromStr for TokenModeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <TokenModeChoice as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args, Debug)]
pub struct EmitArgs {
    #[arg(long)]
    pub variant: Option<VariantChoice>,
    #[arg(long)]
    pub mode: Option<TokenModeChoice>,
    /// Tokenizer command for external mode.
    #[arg(long)]
    pub tokenizer: Option<String>,
    /// Corpus directory.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Perturbation records (a `perturb` output directory or its records
    /// file); may be repeated. Without it perturbations are derived from the
    /// seed.
    #[arg(long)]
    pub perturbations: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub flags: PerturbFlags,
}

fn read_perturbations(paths: &[PathBuf]) -> Result<Vec<PerturbedUnit>> {
    let mut out = Vec::new();
    for p in paths {
        let file = if p.is_dir() { p.join(RECORDS_FILE) } else { p.clone() };
        out.extend(eval::read_jsonl::<PerturbedUnit>(&file)?);
    }
    Ok(out)
}

fn emit_for_unit(
    unit: &CodeUnit,
    variants: &[Variant],
    perturbed: &HashMap<(&str, PerturbationKind), &PerturbedUnit>,
    tok: &mut Tokenizer,
) -> Vec<(Variant, Result<TrainingExample, EmitError>)> {
    variants
        .iter()
        .filter_map(|&v| {
            let r = match v {
                Variant::Original => traindata::emit_original_example(unit, tok),
                Variant::LineShuffled => {
                    let p = perturbed.get(&(unit.id.as_str(), PerturbationKind::LineShuffle))?;
                    traindata::emit_shuffled_example(p, tok)
                }
                Variant::Obfuscated => {
                    let p = perturbed.get(&(unit.id.as_str(), PerturbationKind::Obfuscate))?;
                    traindata::emit_obfuscated_example(p, unit, tok)
                }
            };
            Some((v, r))
        })
        .collect()
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Original => "original",
        Variant::LineShuffled => "line_shuffled",
        Variant::Obfuscated => "obfuscated",
    }
}

fn traindata_emit(a: EmitArgs, s: &Settings, seed: u64) -> Result<()> {
    let variants: Vec<Variant> = match s.or(a.variant, "variant", VariantChoice::All)? {
        VariantChoice::Original => vec![Variant::Original],
        VariantChoice::LineShuffled => vec![Variant::LineShuffled],
        VariantChoice::Obfuscated => vec![Variant::Obfuscated],
        VariantChoice::All => Variant::ALL.to_vec(),
    };
    let mode = s.or(a.mode, "mode", TokenModeChoice::Word)?;
    let corpus = load_corpus(&s.path(a.input, "in")?)?;
    let out = s.path(a.out, "out")?;
    let records = s.list(a.perturbations, "perturbations")?;

    let perturbed_owned = if records.is_empty() {
        let kinds: Vec<PerturbationKind> = variants
            .iter()
            .filter_map(|v| match v {
                Variant::LineShuffled => Some(PerturbationKind::LineShuffle),
                Variant::Obfuscated => Some(PerturbationKind::Obfuscate),
                Variant::Original => None,
            })
            .collect();
        perturb_units(&corpus.units, &kinds, seed, &a.flags.params(s)?).0
    } else {
        read_perturbations(&records)?
    };
    let mut perturbed: HashMap<(&str, PerturbationKind), &PerturbedUnit> = HashMap::new();
    for p in &perturbed_owned {
        perturbed.entry((p.base_unit_id.as_str(), p.record.kind())).or_insert(p);
    }

    let per_unit: Vec<Vec<(Variant, Result<TrainingExample, EmitError>)>> = match mode {
        TokenModeChoice::Word => corpus
            .units
            .par_iter()
            .map(|u| emit_for_unit(u, &variants, &perturbed, &mut Tokenizer::Word(u.language)))
            .collect(),
        TokenModeChoice::External => {
            let cmd: String = s.required(a.tokenizer, "tokenizer")?;
            let mut tok = Tokenizer::External(ExternalTokenizer::spawn(&cmd)?);
            corpus.units.iter().map(|u| emit_for_unit(u, &variants, &perturbed, &mut tok)).collect()
        }
    };

    let mut emitted: HashMap<Variant, usize> = HashMap::new();
    let mut skipped: HashMap<Variant, usize> = HashMap::new();
    let mut examples = Vec::new();
    for (v, r) in per_unit.into_iter().flatten() {
        match r {
            Ok(ex) => {
                *emitted.entry(v).or_insert(0) += 1;
                examples.push(ex);
            }
            Err(EmitError::Tokenize(e)) if matches!(e, traindata::TokenizeError::External(_)) => return Err(e.into()),
            Err(e) => {
                log::info!("{} example skipped: {e}", variant_name(v));
                *skipped.entry(v).or_insert(0) += 1;
            }
        }
    }
    write_jsonl(&out, &examples)?;
    let count = |m: &HashMap<Variant, usize>| -> serde_json::Map<String, Value> {
        variants.iter().map(|v| (variant_name(*v).to_string(), json!(m.get(v).copied().unwrap_or(0)))).collect()
    };
    summary("traindata emit", json!({"seed": seed, "examples": examples.len(), "emitted": count(&emitted), "skipped": count(&skipped), "out": out}));
    Ok(())
}

#[derive(Args, Debug)]
pub struct LossArgs {
    #[arg(long)]
    pub examples: Option<PathBuf>,
    /// One line per example: a JSON array of per-position log-probabilities,
    /// or an object with a `logprobs` array.
    #[arg(long)]
    pub logprobs: Option<PathBuf>,
}

fn traindata_loss(a: LossArgs, s: &Settings) -> Result<()> {
    let examples: Vec<TrainingExample> = eval::read_jsonl(&s.path(a.examples, "examples")?)?;
    let rows: Vec<Value> = eval::read_jsonl(&s.path(a.logprobs, "logprobs")?)?;
    let logprobs = rows
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            let values = match row {
                Value::Object(mut m) => m.remove("logprobs").unwrap_or(Value::Null),
                other => other,
            };
            serde_json::from_value::<Vec<f64>>(values).map_err(|e| Invalid(format!("logprobs line {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let breakdown = traindata::assemble_loss(&examples, &logprobs).map_err(|e| Invalid(e.to_string()))?;
    summary("traindata loss", serde_json::to_value(breakdown)?);
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BaselineKind {
    #[value(alias = "tokens")]
    Bag,
    #[value(alias = "bigrams")]
    Bigram,
}

impl std::str::FromStr for BaselineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <BaselineKind as ValueEnum>::from_str(s, true)
    }
}

impl BaselineKind {
    fn features(self) -> Features {
        match self {
            BaselineKind::Bag => Features::Tokens,
            BaselineKind::Bigram => Features::Bigrams,
        }
    }
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Embedder command speaking the wire protocol on stdio.
    #[arg(long, conflicts_with_all = ["embedder_url", "baseline"])]
    pub embedder: Option<String>,
    /// Base URL of an embedder serving `POST /embed`.
    #[arg(long, conflicts_with = "baseline")]
    pub embedder_url: Option<String>,
    /// Run a built-in hashed baseline in process.
    #[arg(long)]
    pub baseline: Option<BaselineKind>,
    #[arg(long)]
    pub dims: Option<usize>,
    /// Vector cache; new vectors are appended.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Per-request timeout in seconds.
    #[arg(long)]
    pub timeout: Option<u64>,
}

fn dataset_language(tasks: &[benchmark::CandidatePairTask]) -> Result<Language> {
    let mut langs: Vec<Language> = tasks.iter().map(|t| t.language).collect();
    langs.sort();
    langs.dedup();
    match langs.as_slice() {
        [one] => Ok(*one),
        [] => bail!(Invalid("dataset is empty".into())),
        _ => bail!(Invalid("baseline embedding needs a single-language dataset".into())),
    }
}

fn eval_embed(a: EmbedArgs, s: &Settings, seed: u64) -> Result<()> {
    let dataset = s.path(a.dataset, "dataset")?;
    let out = s.path(a.out, "out")?;
    let tasks = benchmark::load_dataset(&dataset)?;
    let timeout = Duration::from_secs(s.or(a.timeout, "timeout", eval::DEFAULT_TIMEOUT.as_secs())?);
    let batch = s.or(a.batch_size, "batch-size", 64usize)?;
    let mut embedder: Box<dyn Embedder> = if let Some(cmd) = s.get(a.embedder, "embedder")? {
        Box::new(ProcessEmbedder::spawn(&cmd, timeout)?)
    } else if let Some(url) = s.get(a.embedder_url, "embedder-url")? {
        Box::new(HttpEmbedder::connect(&url, timeout)?)
    } else if let Some(kind) = s.get(a.baseline, "baseline")? {
        let mut cfg = HashedConfig::new(kind.features(), dataset_language(&tasks)?);
        cfg.dims = s.or(a.dims, "dims", DEFAULT_DIMS)?;
        cfg.seed = seed;
        Box::new(HashedEmbedder::new(cfg).map_err(|e| Invalid(e.to_string()))?)
    } else {
        bail!(Invalid("one of --embedder, --embedder-url or --baseline is required".into()));
    };
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let texts = eval::dataset_texts(&tasks);
    let result = eval::embed_into_cache(&texts, embedder.as_mut(), &out, batch)?;
    summary("eval embed", json!({"summary": result, "dims": embedder.dims(), "out": out}));
    Ok(())
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    /// Embedder to score when the cache holds several.
    #[arg(long)]
    pub embedder_id: Option<String>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn eval_score(a: ScoreArgs, s: &Settings) -> Result<()> {
    let dataset = s.path(a.dataset, "dataset")?;
    let vectors = s.path(a.vectors, "vectors")?;
    let report_path = s.path(a.report, "report")?;
    let tasks = benchmark::load_dataset(&dataset)?;
    let hash = benchmark::dataset_hash(&dataset)?;
    let id: Option<String> = s.get(a.embedder_id, "embedder-id")?;
    let store = eval::load_vectors(&vectors, id.as_deref()).map_err(|e| match e {
        eval::EvalError::AmbiguousEmbedder(_) => anyhow::Error::new(Invalid(e.to_string())),
        other => other.into(),
    })?;
    let report = eval::score_dataset(&tasks, &store, &hash);
    write_json(&report_path, &report)?;
    let accuracy: serde_json::Map<String, Value> = report.per_type.iter().map(|(t, r)| (t.name().to_string(), json!(r.accuracy))).collect();
    summary(
        "eval score",
        json!({"embedder_id": report.embedder_id, "dataset_hash": hash, "accuracy": accuracy, "truncated": report.truncated, "report": report_path}),
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct SimtableArgs {
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub vectors: Option<PathBuf>,
    #[arg(long)]
    pub embedder_id: Option<String>,
    /// Tasks sampled.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn eval_simtable(a: SimtableArgs, s: &Settings, seed: u64) -> Result<()> {
    let tasks = benchmark::load_dataset(&s.path(a.dataset, "dataset")?)?;
    let id: Option<String> = s.get(a.embedder_id, "embedder-id")?;
    let store = eval::load_vectors(&s.path(a.vectors, "vectors")?, id.as_deref())?;
    let n = s.or(a.n, "n", 1000usize)?;
    let out = s.path(a.out, "out")?;
    let table = eval::similarity_table(&tasks, &store, n, seed);
    let mut w = create_file(&out)?;
    table.write_csv(&mut w)?;
    w.flush()?;
    summary("eval simtable", json!({"seed": seed, "rows": table.rows.len(), "means": table.means, "notice": table.notice, "out": out}));
    Ok(())
}

#[derive(Args, Debug)]
pub struct PromptsArgs {
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PromptRecord<'a> {
    task_id: &'a str,
    pair_type: PairType,
    language: Language,
    template_digest: String,
    prompt: String,
}

fn eval_prompts(a: PromptsArgs, s: &Settings) -> Result<()> {
    let tasks = benchmark::load_dataset(&s.path(a.dataset, "dataset")?)?;
    let out = s.path(a.out, "out")?;
    let records = tasks.iter().map(|t| PromptRecord {
        task_id: &t.task_id,
        pair_type: t.pair_type,
        language: t.language,
        template_digest: eval::template_digest(t.language),
        prompt: eval::render_prompt(t),
    });
    let n = write_jsonl(&out, records)?;
    summary("eval prompts", json!({"prompts": n, "out": out}));
    Ok(())
}

#[derive(Args, Debug)]
pub struct GradeArgs {
    #[arg(long)]
    pub completions: Option<PathBuf>,
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn eval_grade(a: GradeArgs, s: &Settings) -> Result<()> {
    let tasks = benchmark::load_dataset(&s.path(a.dataset, "dataset")?)?;
    let completions: Vec<Completion> = eval::read_jsonl(&s.path(a.completions, "completions")?)?;
    let report_path = s.path(a.report, "report")?;
    let report = eval::grade(&tasks, &completions);
    write_json(&report_path, &report)?;
    let accuracy: serde_json::Map<String, Value> = report.per_type.iter().map(|(t, r)| (t.name().to_string(), json!(r.accuracy))).collect();
    summary("eval grade", json!({"accuracy": accuracy, "missing": report.missing, "unknown_tasks": report.unknown_tasks, "report": report_path}));
    Ok(())
}

#[derive(Args, Debug)]
pub struct ServeArgs {
    #[arg(long)]
    pub kind: Option<BaselineKind>,
    #[arg(long)]
    pub dims: Option<usize>,
    #[arg(long)]
    pub lang: Option<Language>,
    /// Serve `POST /embed` on this address instead of stdio.
    #[arg(long)]
    pub http: Option<String>,
}

fn baseline_serve(a: ServeArgs, s: &Settings, seed: u64) -> Result<()> {
    let kind = s.or(a.kind, "kind", BaselineKind::Bag)?;
    let mut cfg = HashedConfig::new(kind.features(), s.required(a.lang, "lang")?);
    cfg.dims = s.or(a.dims, "dims", DEFAULT_DIMS)?;
    cfg.seed = seed;
    let embedder = HashedEmbedder::new(cfg).map_err(|e| Invalid(e.to_string()))?;
    match s.get(a.http, "http")? {
        Some(addr) => {
            let server = tiny_http::Server::http(&addr).map_err(|e| io::Error::other(format!("binding {addr}: {e}")))?;
            log::info!("serving on http://{}", server.server_addr());
            baselines::serve_http(&embedder, &server)?;
        }
        None => {
            let stdin = io::stdin();
            baselines::serve_stdio(&embedder, stdin.lock(), io::stdout().lock())?;
        }
    }
    Ok(())
}
