//! Question-answer prompts for generative models and grading of their replies.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::benchmark::{Answer, CandidatePairTask, PairType};
use crate::lang::Language;

const JAVA_TEMPLATE: &str = include_str!("../../data/prompts/java.txt");
const PYTHON_TEMPLATE: &str = include_str!("../../data/prompts/python.txt");

pub fn template(lang: Language) -> &'static str {
    match lang {
        Language::Java => JAVA_TEMPLATE,
        Language::Python => PYTHON_TEMPLATE,
    }
}

/// sha256 of the prompt template, pinned so edits are deliberate.
pub fn template_digest(lang: Language) -> String {
    hex::encode(Sha256::digest(template(lang).as_bytes()))
}

/// Fills the template. Placeholders are substituted in one pass, so code
/// containing placeholder text is inserted verbatim.
pub fn render_prompt(task: &CandidatePairTask) -> String {
    let tpl = template(task.language);
    let slots = [
        ("{Query Code}", task.query.as_str()),
        ("{Candidate A Code}", task.candidate_a.as_str()),
        ("{Candidate B Code}", task.candidate_b.as_str()),
    ];
    let mut out = String::with_capacity(tpl.len() + task.query.len() + task.candidate_a.len() + task.candidate_b.len());
    let mut rest = tpl;
    while let Some((pos, key, value)) =
        slots.iter().filter_map(|&(k, v)| rest.find(k).map(|p| (p, k, v))).min_by_key(|&(p, _, _)| p)
    {
        out.push_str(&rest[..pos]);
        out.push_str(value.trim_end_matches('\n'));
        rest = &rest[pos + key.len()..];
    }
    out.push_str(rest);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParsedAnswer {
    A,
    B,
    Malformed,
}

/// Accepts a bare `A` or `B`, optionally followed by punctuation, on the
/// first non-blank line. Anything else is malformed.
pub fn parse_answer(completion: &str) -> ParsedAnswer {
    let first = completion.trim().lines().next().unwrap_or("").trim_end();
    let mut chars = first.chars();
    let head = match chars.next() {
        Some('A') => ParsedAnswer::A,
        Some('B') => ParsedAnswer::B,
        _ => return ParsedAnswer::Malformed,
    };
    if chars.all(|c| c.is_ascii_punctuation()) {
        head
    } else {
        ParsedAnswer::Malformed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub task_id: String,
    pub completion: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QaTypeReport {
    pub total: usize,
    pub correct: usize,
    pub malformed: usize,
    /// correct / (total - malformed); malformed replies are excluded.
    pub accuracy: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QaReport {
    pub per_type: BTreeMap<PairType, QaTypeReport>,
    /// Completions whose task id is not in the dataset.
    pub unknown_tasks: usize,
    /// Tasks with no completion.
    pub missing: usize,
}

pub fn grade(tasks: &[CandidatePairTask], completions: &[Completion]) -> QaReport {
    let by_id: HashMap<&str, &CandidatePairTask> = tasks.iter().map(|t| (t.task_id.as_str(), t)).collect();
    let mut report = QaReport::default();
    let mut answered = std::collections::HashSet::new();
    for c in completions {
        let Some(task) = by_id.get(c.task_id.as_str()) else {
            report.unknown_tasks += 1;
            continue;
        };
        if !answered.insert(c.task_id.as_str()) {
            continue;
        }
        let r = report.per_type.entry(task.pair_type).or_default();
        r.total += 1;
        match (parse_answer(&c.completion), task.correct) {
            (ParsedAnswer::A, Answer::A) | (ParsedAnswer::B, Answer::B) => r.correct += 1,
            (ParsedAnswer::Malformed, _) => r.malformed += 1,
            _ => {}
        }
    }
    report.missing = tasks.len() - answered.len();
    for r in report.per_type.values_mut() {
        let answered = r.total - r.malformed;
        r.accuracy = if answered == 0 { 0.0 } else { r.correct as f64 / answered as f64 };
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::{Role, TaskProvenance};

    fn task(lang: Language, q: &str, a: &str, b: &str, correct: Answer) -> CandidatePairTask {
        CandidatePairTask {
            task_id: "pos_vs_neg-000000".into(),
            pair_type: PairType::PosVsNeg,
            language: lang,
            query: q.into(),
            candidate_a: a.into(),
            candidate_b: b.into(),
            correct,
            provenance: TaskProvenance {
                triplet: 0,
                origin: "o".into(),
                positive: "p".into(),
                negative: "n".into(),
                accepted: Role::Positive,
                rejected: Role::Negative,
                perturbation: None,
            },
        }
    }

    #[test]
    fn answers() {
        for (s, want) in [
            ("A", ParsedAnswer::A),
            ("  B\n", ParsedAnswer::B),
            ("A.", ParsedAnswer::A),
            ("B)\nbecause", ParsedAnswer::B),
            ("a", ParsedAnswer::Malformed),
            ("Answer: A", ParsedAnswer::Malformed),
            ("AB", ParsedAnswer::Malformed),
            ("A because", ParsedAnswer::Malformed),
            ("", ParsedAnswer::Malformed),
        ] {
            assert_eq!(parse_answer(s), want, "{s:?}");
        }
    }

    #[test]
    fn rendering_fills_each_slot_once() {
        let t = task(Language::Python, "def q():\n    pass\n", "def a():\n    return '{Candidate B Code}'\n", "def b(): pass", Answer::A);
        let p = render_prompt(&t);
        assert!(p.starts_with("SYSTEM MESSAGE:\nYou are a Python expert"));
        assert!(p.contains("Query:\n'''python\ndef q():\n    pass\n'''"));
        assert!(p.contains("return '{Candidate B Code}'"));
        assert!(p.contains("Candidate B: \n'''python\ndef b(): pass\n'''"));
        assert!(p.ends_with("Answer:"));
        assert!(!p.contains("{Query Code}"));
    }

    #[test]
    fn grading() {
        let tasks = vec![task(Language::Java, "q", "a", "b", Answer::B)];
        let c = |s: &str| Completion { task_id: "pos_vs_neg-000000".into(), completion: s.into() };
        let r = grade(&tasks, &[c("B")]);
        assert_eq!(r.per_type[&PairType::PosVsNeg].accuracy, 1.0);
        let r = grade(&tasks, &[c("maybe")]);
        assert_eq!(r.per_type[&PairType::PosVsNeg].malformed, 1);
        assert_eq!(r.per_type[&PairType::PosVsNeg].accuracy, 0.0);
        let mut two = tasks.clone();
        two.push(CandidatePairTask { task_id: "pos_vs_neg-000001".into(), ..tasks[0].clone() });
        let other = Completion { task_id: "pos_vs_neg-000001".into(), completion: "Answer: B".into() };
        let r = grade(&two, &[c("B"), other]);
        assert_eq!((r.per_type[&PairType::PosVsNeg].total, r.per_type[&PairType::PosVsNeg].accuracy), (2, 1.0));
        assert_eq!(grade(&tasks, &[]).missing, 1);
    }
}
