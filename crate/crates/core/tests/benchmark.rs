mod common;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;

use lecs_core::analysis::analyze;
use lecs_core::benchmark::{
    build_pair_tasks, build_triplets, export_dataset, feasible_triplets, load_dataset, Answer, BenchError, PairType, Role, TaskBuild,
    DATASET_FILE,
};
use lecs_core::perturb::{deobfuscate, perturb, PerturbParams, PerturbedUnit};
use lecs_core::{CodeUnit, Language};
use proptest::prelude::*;
use serde_json::Value;

fn unit(problem: &str, solution: &str, body: &str) -> CodeUnit {
    CodeUnit::new(Language::Python, format!("def f(x):\n    y = x {body}\n    return y\n"), Some(problem.into()), Some(solution.into()))
}

fn two_by_two() -> Vec<CodeUnit> {
    vec![unit("p", "s1", "+ 1"), unit("p", "s2", "+ 2"), unit("q", "s1", "* 3"), unit("q", "s2", "* 4")]
}

/// Every (origin, positive, negative) combination satisfying the triplet rules.
fn enumerate(units: &[CodeUnit]) -> HashSet<(String, String, String)> {
    let mut out = HashSet::new();
    for o in units {
        for p in units {
            for n in units {
                let pos = o.problem_id.is_some() && p.problem_id == o.problem_id && p.solution_id != o.solution_id;
                let neg = n.problem_id.is_some() && n.problem_id != o.problem_id;
                if pos && neg {
                    out.insert((o.id.clone(), p.id.clone(), n.id.clone()));
                }
            }
        }
    }
    out
}

#[test]
fn two_problems_two_solutions() {
    let units = two_by_two();
    assert_eq!(enumerate(&units).len(), 8);
    assert_eq!(feasible_triplets(&units), 8);
    let all = enumerate(&units);
    let t = build_triplets(&units, 3, 4).unwrap();
    assert_eq!(t.len(), 4);
    let distinct: HashSet<_> = t.iter().map(|t| (t.origin.clone(), t.positive.clone(), t.negative.clone())).collect();
    assert_eq!(distinct.len(), 4);
    assert!(distinct.is_subset(&all));
    let every = build_triplets(&units, 3, 8).unwrap();
    assert_eq!(every.iter().map(|t| (t.origin.clone(), t.positive.clone(), t.negative.clone())).collect::<HashSet<_>>(), all);
    assert!(matches!(build_triplets(&units, 3, 9), Err(BenchError::Underfull { requested: 9, feasible: 8 })));
    assert!(build_triplets(&units, 3, 0).unwrap().is_empty());
}

#[test]
fn a_single_problem_is_underfull() {
    let units = vec![unit("p", "s1", "+ 1"), unit("p", "s2", "+ 2")];
    assert!(matches!(build_triplets(&units, 0, 1), Err(BenchError::Underfull { feasible: 0, .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn feasible_count_matches_enumeration(sizes in proptest::collection::vec(1usize..4, 1..5), seed: u64) {
        let mut units = Vec::new();
        for (p, &n) in sizes.iter().enumerate() {
            for s in 0..n {
                units.push(unit(&format!("p{p}"), &format!("s{s}"), &format!("+ {p}{s}")));
            }
        }
        let all = enumerate(&units);
        prop_assert_eq!(feasible_triplets(&units), all.len() as u128);
        let n = all.len().min(5);
        let t = build_triplets(&units, seed, n).unwrap();
        let got: HashSet<_> = t.iter().map(|t| (t.origin.clone(), t.positive.clone(), t.negative.clone())).collect();
        prop_assert_eq!(got.len(), n);
        prop_assert!(got.is_subset(&all));
    }
}

fn toy_build(n: usize, types: &[PairType], seed: u64) -> (Vec<CodeUnit>, TaskBuild) {
    let units = common::toy_units(Language::Python);
    let triplets = build_triplets(&units, seed, n).unwrap();
    let build = build_pair_tasks(&units, &triplets, types, seed, &PerturbParams::default()).unwrap();
    (units, build)
}

#[test]
fn placement_is_independent_of_label_and_type() {
    let (_, build) = toy_build(2000, &PairType::ALL, 41);
    let tasks = &build.tasks;
    assert!(tasks.len() >= 10_000, "{}", tasks.len());

    // goodness of fit for A vs B, 1 degree of freedom, 0.01 level
    let a = tasks.iter().filter(|t| t.correct == Answer::A).count() as f64;
    let n = tasks.len() as f64;
    let chi = (a - n / 2.0).powi(2) / (n / 2.0) * 2.0;
    assert!(chi < 6.635, "chi2 = {chi}");

    // independence of placement and pair type, 5 degrees of freedom
    let mut table: BTreeMap<PairType, [f64; 2]> = BTreeMap::new();
    for t in tasks {
        table.entry(t.pair_type).or_default()[usize::from(t.correct == Answer::B)] += 1.0;
    }
    assert_eq!(table.len(), 6);
    let col = [a, n - a];
    let chi: f64 = table
        .values()
        .flat_map(|row| {
            let total = row[0] + row[1];
            (0..2).map(move |c| {
                let expected = total * col[c] / n;
                (row[c] - expected).powi(2) / expected
            })
        })
        .sum();
    assert!(chi < 15.086, "chi2 = {chi}");
}

#[test]
fn every_task_resolves_against_the_corpus() {
    let (units, build) = toy_build(150, &PairType::ALL, 5);
    let by_id: HashMap<&str, &CodeUnit> = units.iter().map(|u| (u.id.as_str(), u)).collect();
    for t in &build.tasks {
        let p = &t.provenance;
        let origin = by_id[p.origin.as_str()];
        let (positive, negative) = (by_id[p.positive.as_str()], by_id[p.negative.as_str()]);
        assert_eq!(t.query, origin.source);
        assert_eq!(origin.problem_id, positive.problem_id);
        assert_ne!(origin.solution_id, positive.solution_id);
        assert_ne!(origin.problem_id, negative.problem_id);
        assert_eq!((p.accepted, p.rejected), t.pair_type.roles());

        // regenerate the perturbed candidate from its record alone
        let perturbed = p.perturbation.as_ref().map(|record| {
            let summary = analyze(origin).unwrap();
            let params = PerturbParams::default();
            let again: PerturbedUnit = perturb(record.kind(), origin, &summary, record.seed, &params).unwrap();
            assert_eq!(&again.record, record);
            again
        });
        let text = |role: Role| match role {
            Role::Positive => positive.source.clone(),
            Role::Negative => negative.source.clone(),
            _ => perturbed.as_ref().unwrap().source.clone(),
        };
        let (acc, rej) = t.accepted_rejected();
        assert_eq!(acc, text(p.accepted));
        assert_eq!(rej, text(p.rejected));
        if t.pair_type == PairType::ObfVsNeg {
            assert_eq!(deobfuscate(perturbed.as_ref().unwrap()).unwrap(), origin.source);
            assert_ne!(acc, positive.source);
        }
        if t.pair_type == PairType::PosVsNeg {
            assert!(p.perturbation.is_none());
        }
    }
}

#[test]
fn manifest_counts_match_a_recount_of_the_file() {
    let (_, build) = toy_build(100, &PairType::ALL, 17);
    assert_eq!(build.tasks.len() + build.skipped.values().sum::<usize>(), 600);
    let dir = tempfile::tempdir().unwrap();
    let manifest = export_dataset(&build, 17, 100, &PairType::ALL, dir.path()).unwrap();
    let text = fs::read_to_string(dir.path().join(DATASET_FILE)).unwrap();
    let mut recount: BTreeMap<String, usize> = BTreeMap::new();
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        *recount.entry(v["pair_type"].as_str().unwrap().to_string()).or_insert(0) += 1;
    }
    let counts: BTreeMap<String, usize> = manifest.counts.iter().map(|(k, v)| (k.name().to_string(), *v)).collect();
    assert_eq!(counts, recount);
    assert_eq!(manifest.task_count, text.lines().count());
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(on_disk["seed"], 17);
    assert_eq!(on_disk["task_count"], manifest.task_count);
}

#[test]
fn three_tasks_round_trip() {
    let (_, mut build) = toy_build(3, &[PairType::PosVsNeg], 2);
    build.tasks.truncate(3);
    assert_eq!(build.tasks.len(), 3);
    let dir = tempfile::tempdir().unwrap();
    export_dataset(&build, 2, 3, &[PairType::PosVsNeg], dir.path()).unwrap();
    assert_eq!(fs::read_to_string(dir.path().join(DATASET_FILE)).unwrap().lines().count(), 3);
    assert_eq!(load_dataset(dir.path()).unwrap(), build.tasks);
}

#[test]
fn reexport_with_same_seed_is_byte_identical() {
    let bytes = || {
        let (_, build) = toy_build(60, &[PairType::PosVsNeg, PairType::ObfVsNeg, PairType::PosVsLsh], 8);
        let dir = tempfile::tempdir().unwrap();
        export_dataset(&build, 8, 60, &[PairType::PosVsNeg, PairType::ObfVsNeg, PairType::PosVsLsh], dir.path()).unwrap();
        (fs::read(dir.path().join(DATASET_FILE)).unwrap(), fs::read(dir.path().join("manifest.json")).unwrap())
    };
    assert_eq!(bytes(), bytes());
}

#[test]
fn empty_build_is_not_exported() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(export_dataset(&TaskBuild::default(), 0, 0, &[], dir.path()), Err(BenchError::EmptyDataset)));
}
