//! `lecs`: ingest, analyze, perturb, build benchmarks and training data,
//! evaluate embedders and report.
//!
//! Machine-readable summaries go to stdout as one JSON object per line; logs go
//! to stderr. Exit codes: 0 success, 1 usage or validation error, 2 I/O or
//! protocol error.

mod commands;
mod config;
mod report;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lecs_core::baselines::BaselineError;
use lecs_core::benchmark::BenchError;
use lecs_core::corpus::CorpusError;
use lecs_core::eval::{EmbedError, EvalError};
use lecs_core::traindata::TokenizeError;
use serde_json::json;

/// A validation failure: bad flag values, missing settings, unusable inputs.
#[derive(Debug)]
pub struct Invalid(pub String);

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

#[derive(Parser, Debug)]
#[command(name = "lecs", version, about = "Logically-equivalent code selection toolkit")]
pub struct Cli {
    /// TOML file whose keys mirror the long flag names.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Global seed every stage seed is derived from.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Extract, filter and deduplicate functions into a corpus directory.
    Ingest(commands::IngestArgs),
    /// Write syntax summaries for every unit of a corpus.
    Analyze(commands::AnalyzeArgs),
    /// Apply seeded perturbations to every unit of a corpus.
    Perturb(commands::PerturbArgs),
    /// Build candidate-pair benchmark datasets.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Emit training examples and assemble their loss.
    #[command(subcommand)]
    Traindata(TraindataCommand),
    /// Embed, score and grade benchmark tasks.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Hashed token baselines.
    #[command(subcommand)]
    Baseline(BaselineCommand),
    /// Consolidate evaluation reports into markdown and CSV.
    Report(ReportArgs),
}

#[derive(Subcommand, Debug)]
pub enum BenchCommand {
    /// Sample triplets and export candidate-pair tasks.
    Build(commands::BenchBuildArgs),
}

#[derive(Subcommand, Debug)]
pub enum TraindataCommand {
    /// Emit next-token-prediction examples.
    Emit(commands::EmitArgs),
    /// Combine per-position log-probabilities into the three-part loss.
    Loss(commands::LossArgs),
}

#[derive(Subcommand, Debug)]
pub enum EvalCommand {
    /// Embed every dataset text into a vector cache.
    Embed(commands::EmbedArgs),
    /// Score tasks from cached vectors.
    Score(commands::ScoreArgs),
    /// Similarity of origins to their counterparts over a task sample.
    Simtable(commands::SimtableArgs),
    /// Render question-answer prompts.
    Prompts(commands::PromptsArgs),
    /// Grade generative-model completions.
    Grade(commands::GradeArgs),
}

#[derive(Subcommand, Debug)]
pub enum BaselineCommand {
    /// Serve a hashed baseline embedder over stdio or HTTP.
    Serve(commands::ServeArgs),
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Directory searched for evaluation report JSON files.
    #[arg(long)]
    pub run: Option<PathBuf>,
    /// Output directory; defaults to the run directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// 2 for I/O, format and protocol failures anywhere in the chain, else 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    let io = err.chain().any(|e| {
        e.is::<std::io::Error>()
            || e.is::<serde_json::Error>()
            || e.is::<EmbedError>()
            || matches!(e.downcast_ref(), Some(CorpusError::Io { .. } | CorpusError::Manifest { .. } | CorpusError::HashMismatch { .. }))
            || matches!(e.downcast_ref(), Some(BenchError::Io { .. } | BenchError::Malformed { .. }))
            || matches!(e.downcast_ref(), Some(EvalError::Io { .. } | EvalError::Malformed { .. } | EvalError::Embed(_)))
            || matches!(e.downcast_ref(), Some(TokenizeError::External(_)))
            || matches!(e.downcast_ref(), Some(BaselineError::Io(_)))
    });
    if io {
        2
    } else {
        1
    }
}

fn error_line(code: u8, message: String) {
    let kind = if code == 2 { "io" } else { "invalid" };
    println!("{}", json!({"status": "error", "code": code, "kind": kind, "message": message}));
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            error_line(1, e.kind().to_string());
            return ExitCode::from(1);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            log::error!("{err:#}");
            error_line(code, format!("{err:#}"));
            ExitCode::from(code)
        }
    }
}
