//! Consolidates evaluation reports found under a run directory into
//! `report.md` (one row per embedder, one column per pair type) and
//! `report.csv` (one row per embedder, dataset and pair type).

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use lecs_core::benchmark::{PairType, Role};
use lecs_core::eval::EvalReport;
use serde::{Deserialize, Serialize};
use serde_json::json;
use walkdir::WalkDir;

use crate::config::Settings;
use crate::ReportArgs;

pub const MARKDOWN_FILE: &str = "report.md";
pub const CSV_FILE: &str = "report.csv";

#[derive(Debug)]
pub struct NoData(pub PathBuf);

impl fmt::Display for NoData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no evaluation reports under {}", self.0.display())
    }
}

impl std::error::Error for NoData {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub embedder_id: String,
    pub dataset_hash: String,
    pub pair_type: PairType,
    pub label: String,
    pub correct: usize,
    pub incorrect: usize,
    pub tie: usize,
    pub skipped: usize,
    pub accuracy: f64,
}

fn short(role: Role) -> &'static str {
    match role {
        Role::Positive => "Pos",
        Role::Negative => "Neg",
        Role::Obfuscated => "Obf",
        Role::LineShuffled => "LSh",
        Role::TokenShuffled => "TSh",
        Role::KeywordReplaced => "KwR",
        Role::SymbolReplaced => "SmR",
    }
}

/// Column heading such as `D(Pos)>D(Neg)`: the accepted candidate must be
/// closer to the query than the rejected one.
pub fn label(pair_type: PairType) -> String {
    let (acc, rej) = pair_type.roles();
    format!("D({})>D({})", short(acc), short(rej))
}

/// Every `*.json` file under `dir` that parses as an evaluation report, in
/// path order.
pub fn collect_reports(dir: &Path) -> Result<Vec<(PathBuf, EvalReport)>> {
    if !dir.is_dir() {
        return Err(std::io::Error::new(std::io::ErrorKind::NotFound, format!("run directory {} does not exist", dir.display())).into());
    }
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.with_context(|| format!("walking {}", dir.display()))?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().is_none_or(|e| e != "json") {
            continue;
        }
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        match serde_json::from_str::<EvalReport>(&text) {
            Ok(r) => out.push((path.to_path_buf(), r)),
            Err(_) => log::debug!("{} is not an evaluation report", path.display()),
        }
    }
    Ok(out)
}

pub fn rows(reports: &[EvalReport]) -> Vec<ReportRow> {
    let mut rows: Vec<ReportRow> = reports
        .iter()
        .flat_map(|r| {
            r.per_type.iter().map(|(&pair_type, t)| ReportRow {
                embedder_id: r.embedder_id.clone(),
                dataset_hash: r.dataset_hash.clone(),
                pair_type,
                label: label(pair_type),
                correct: t.correct,
                incorrect: t.incorrect,
                tie: t.tie,
                skipped: t.skipped,
                accuracy: t.accuracy,
            })
        })
        .collect();
    rows.sort_by(|a, b| (&a.embedder_id, &a.dataset_hash, a.pair_type).cmp(&(&b.embedder_id, &b.dataset_hash, b.pair_type)));
    rows.dedup();
    rows
}

pub fn write_csv(rows: &[ReportRow], w: impl std::io::Write) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
pub fn read_csv(r: impl std::io::Read) -> csv::Result<Vec<ReportRow>> {
    csv::Reader::from_reader(r).deserialize().collect()
}

/// Accuracy table: one line per (embedder, dataset), pair types in their
/// canonical order, blank cells where a report lacks a type.
pub fn markdown(rows: &[ReportRow]) -> String {
    let types: BTreeSet<PairType> = rows.iter().map(|r| r.pair_type).collect();
    let mut keys: Vec<(&str, &str)> = rows.iter().map(|r| (r.embedder_id.as_str(), r.dataset_hash.as_str())).collect();
    keys.dedup();
    let mut md = String::from("# Evaluation summary\n\n| Embedder | Dataset |");
    for t in &types {
        let _ = write!(md, " {} |", label(*t));
    }
    md.push_str("\n|---|---|");
    md.push_str(&"---:|".repeat(types.len()));
    md.push('\n');
    for (id, hash) in keys {
        let _ = write!(md, "| {id} | {} |", &hash[..hash.len().min(12)]);
        for t in &types {
            match rows.iter().find(|r| r.embedder_id == id && r.dataset_hash == hash && r.pair_type == *t) {
                Some(r) => {
                    let _ = write!(md, " {:.1} |", r.accuracy * 100.0);
                }
                None => md.push_str("  |"),
            }
        }
        md.push('\n');
    }
    md.push_str("\nAccuracy in percent over scored tasks; ties count as incorrect.\n");
    md
}

pub fn run(a: ReportArgs, s: &Settings) -> Result<()> {
    let run_dir = s.path(a.run, "run")?;
    let out = s.get(a.out, "out")?.unwrap_or_else(|| run_dir.clone());
    let found = collect_reports(&run_dir)?;
    if found.is_empty() {
        return Err(NoData(run_dir).into());
    }
    let reports: Vec<EvalReport> = found.into_iter().map(|(_, r)| r).collect();
    let rows = rows(&reports);
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let md_path = out.join(MARKDOWN_FILE);
    fs::write(&md_path, markdown(&rows)).with_context(|| format!("writing {}", md_path.display()))?;
    let csv_path = out.join(CSV_FILE);
    let file = fs::File::create(&csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    write_csv(&rows, file).with_context(|| format!("writing {}", csv_path.display()))?;
    println!("{}", json!({"status": "ok", "command": "report", "reports": reports.len(), "rows": rows.len(), "out": out}));
    Ok(())
}
