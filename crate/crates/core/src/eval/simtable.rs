//! Mean similarity of an origin to its obfuscated, line-shuffled, positive
//! and negative counterparts over a seeded sample of tasks.

use std::collections::HashMap;
use std::io::{self, Write};

use rand::seq::index;
use serde::Serialize;

use super::{cosine, VectorStore};
use crate::benchmark::{CandidatePairTask, PairType, Role};
use crate::seed::{self, derive_seed};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub task_id: String,
    pub pair_type: PairType,
    pub d_obf: Option<f64>,
    pub d_lsh: Option<f64>,
    pub d_pos: Option<f64>,
    pub d_neg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SimNotice {
    /// Fewer tasks than requested; every task was used.
    Clamped { requested: usize, available: usize },
    EmptySample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimTable {
    pub rows: Vec<SimRow>,
    /// [d_obf, d_lsh, d_pos, d_neg] means over the non-missing row values.
    pub means: [Option<f64>; 4],
    pub notice: Option<SimNotice>,
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, n) = values.flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Samples `n` tasks (kept in dataset order) and, for each, relates the
/// origin to every counterpart its triplet produced anywhere in the dataset.
pub fn similarity_table(tasks: &[CandidatePairTask], store: &VectorStore, n: usize, seed: u64) -> SimTable {
    // counterpart texts per triplet, gathered across pair types
    let mut roles: HashMap<usize, HashMap<Role, &str>> = HashMap::new();
    for t in tasks {
        let (acc, rej) = t.accepted_rejected();
        let slot = roles.entry(t.provenance.triplet).or_default();
        slot.insert(t.provenance.accepted, acc);
        slot.insert(t.provenance.rejected, rej);
    }

    let mut notice = None;
    let take = if n > tasks.len() {
        log::warn!("similarity sample of {n} exceeds {} tasks; using all", tasks.len());
        notice = Some(SimNotice::Clamped { requested: n, available: tasks.len() });
        tasks.len()
    } else {
        n
    };
    if take == 0 {
        return SimTable { rows: Vec::new(), means: [None; 4], notice: Some(SimNotice::EmptySample) };
    }
    let mut rng = seed::rng(derive_seed(seed, "simtable", ""));
    let mut picks = index::sample(&mut rng, tasks.len(), take).into_vec();
    picks.sort_unstable();

    let rows: Vec<SimRow> = picks
        .into_iter()
        .map(|i| {
            let t = &tasks[i];
            let origin = store.get(&t.query);
            let rel = &roles[&t.provenance.triplet];
            let d = |role: Role| -> Option<f64> {
                let other = store.get(rel.get(&role)?)?;
                cosine(origin?, other).ok()
            };
            SimRow {
                task_id: t.task_id.clone(),
                pair_type: t.pair_type,
                d_obf: d(Role::Obfuscated),
                d_lsh: d(Role::LineShuffled),
                d_pos: d(Role::Positive),
                d_neg: d(Role::Negative),
            }
        })
        .collect();
    let means = [
        mean(rows.iter().map(|r| r.d_obf)),
        mean(rows.iter().map(|r| r.d_lsh)),
        mean(rows.iter().map(|r| r.d_pos)),
        mean(rows.iter().map(|r| r.d_neg)),
    ];
    SimTable { rows, means, notice }
}

impl SimTable {
    /// CSV with one row per sampled task and a trailing `means` row.
    pub fn write_csv(&self, w: impl Write) -> io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        out.write_record(["task_id", "pair_type", "d_obf", "d_lsh", "d_pos", "d_neg"])?;
        for r in &self.rows {
            out.write_record([r.task_id.clone(), r.pair_type.to_string(), cell(r.d_obf), cell(r.d_lsh), cell(r.d_pos), cell(r.d_neg)])?;
        }
        let [a, b, c, d] = self.means;
        out.write_record(["means".to_string(), String::new(), cell(a), cell(b), cell(c), cell(d)])?;
        out.flush()
    }
}
