mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::thread;
use std::time::Duration;

use lecs_core::baselines::{serve_http, Features, HashedConfig, HashedEmbedder};
use lecs_core::benchmark::{build_pair_tasks, build_triplets, Answer, CandidatePairTask, PairType, Role, TaskProvenance};
use lecs_core::eval::{
    aggregate, cosine, dataset_texts, embed_into_cache, load_vectors, render_prompt, score_dataset, score_pair_task, similarity_table,
    template, template_digest, EmbedError, Embedder, HttpEmbedder, Outcome, ProcessEmbedder, SimNotice, Verdict,
};
use lecs_core::perturb::PerturbParams;
use lecs_core::Language;
use proptest::prelude::*;

fn task(pair_type: PairType, correct: Answer, id: &str) -> CandidatePairTask {
    let (accepted, rejected) = pair_type.roles();
    CandidatePairTask {
        task_id: id.into(),
        pair_type,
        language: Language::Java,
        query: "int f() { return 1; }".into(),
        candidate_a: "int g() { return 1; }".into(),
        candidate_b: "int h() { return 2; }".into(),
        correct,
        provenance: TaskProvenance {
            triplet: 0,
            origin: "o".into(),
            positive: "p".into(),
            negative: "n".into(),
            accepted,
            rejected,
            perturbation: None,
        },
    }
}

#[test]
fn hand_computed_four_dim_cosines() {
    // unit vectors: q.a = 0.91, q.b = 0.87
    let q = [1.0, 0.0, 0.0, 0.0];
    let a = [0.91, 0.41460824883255754, 0.0, 0.0];
    let b = [0.87, 0.0, 0.493051721424842, 0.0];
    let v = score_pair_task(&task(PairType::PosVsNeg, Answer::A, "t"), &q, &a, &b);
    assert!((v.d_accepted.unwrap() - 0.91).abs() < 1e-12);
    assert!((v.d_rejected.unwrap() - 0.87).abs() < 1e-12);
    assert_eq!(v.outcome, Outcome::Correct);
    let flipped = score_pair_task(&task(PairType::PosVsNeg, Answer::B, "t"), &q, &a, &b);
    assert_eq!(flipped.outcome, Outcome::Incorrect);
}

#[test]
fn cosine_examples() {
    assert!((cosine(&[1.0, 2.0, 2.0], &[2.0, 1.0, 2.0]).unwrap() - 8.0 / 9.0).abs() < 1e-15);
    assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    assert!(cosine(&[0.0, 0.0], &[1.0, 0.0]).is_err());
}

fn fake(args: &str) -> ProcessEmbedder {
    let script = common::fixtures().join("embedders/fake.py");
    ProcessEmbedder::spawn(&format!("python3 {} {args}", script.display()), Duration::from_secs(20)).unwrap()
}

fn texts(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("def f{i}(x):\n    return x + {i}\n")).collect()
}

#[test]
fn batching_does_not_change_vectors() {
    let owned = texts(20);
    let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
    let mut e = fake("");
    assert_eq!((e.embedder_id(), e.dims()), ("fake-sha-d8", 8));
    let batch: Vec<Vec<f64>> = e.embed_many(&refs).into_iter().map(|r| r.unwrap().values).collect();
    let single: Vec<Vec<f64>> = refs.iter().map(|t| e.embed_many(&[t]).pop().unwrap().unwrap().values).collect();
    assert_eq!(batch, single);
    assert!(e.embed_many(&[]).is_empty());
    let dup = e.embed_many(&[refs[3], refs[3]]);
    assert_eq!(dup[0], dup[1]);
}

#[test]
fn per_item_failures_keep_partial_results() {
    let mut e = fake("");
    let long = "x".repeat(300);
    let out = e.embed_many(&["a = 1", "REJECT me", long.as_str()]);
    assert!(out[0].as_ref().is_ok_and(|v| !v.truncated));
    assert!(matches!(&out[1], Err(EmbedError::Rejected(m)) if m == "rejected by request"));
    assert!(out[2].as_ref().unwrap().truncated);

    let mut bad = fake("--wrong-dims");
    assert!(matches!(bad.embed_many(&["a"])[0], Err(EmbedError::DimsMismatch { expected: 8, got: 7 })));
}

#[test]
fn cache_skips_known_texts_and_counts_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("vectors.jsonl");
    let owned = texts(5);
    let mut refs: Vec<&str> = owned.iter().map(String::as_str).collect();
    refs.push("REJECT");
    let mut e = fake("");
    let first = embed_into_cache(&refs, &mut e, &cache, 2).unwrap();
    assert_eq!((first.embedded, first.failed, first.cached), (5, 1, 0));
    let second = embed_into_cache(&refs, &mut e, &cache, 2).unwrap();
    assert_eq!((second.embedded, second.failed, second.cached), (0, 1, 5));
    let store = load_vectors(&cache, None).unwrap();
    assert_eq!(store.len(), 5);
    assert_eq!(store.embedder_id, "fake-sha-d8");
}

#[test]
fn http_embedder_matches_in_process_vectors() {
    let server = Arc::new(tiny_http::Server::http("127.0.0.1:0").unwrap());
    let addr = server.server_addr().to_ip().unwrap();
    let baseline = HashedEmbedder::new(HashedConfig::new(Features::Bigrams, Language::Python)).unwrap();
    let serving = baseline.clone();
    let handle = {
        let server = Arc::clone(&server);
        thread::spawn(move || serve_http(&serving, &server))
    };
    let mut remote = HttpEmbedder::connect(&format!("http://{addr}"), Duration::from_secs(10)).unwrap();
    assert_eq!(remote.embedder_id(), baseline.embedder_id());
    let owned = texts(20);
    let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
    for (text, got) in refs.iter().zip(remote.embed_many(&refs)) {
        assert_eq!(got.unwrap().values, baseline.embed(text).unwrap());
    }
    // a lone token has no bigram
    assert!(matches!(remote.embed_many(&["x"])[0], Err(EmbedError::Rejected(_))));
    server.unblock();
    handle.join().unwrap().unwrap();
}

fn toy_dataset(n: usize, types: &[PairType]) -> Vec<CandidatePairTask> {
    let units = common::toy_units(Language::Python);
    let triplets = build_triplets(&units, 13, n).unwrap();
    build_pair_tasks(&units, &triplets, types, 13, &PerturbParams::default()).unwrap().tasks
}

fn bag_store(tasks: &[CandidatePairTask]) -> (tempfile::TempDir, lecs_core::eval::VectorStore) {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("v.jsonl");
    let mut bag = HashedEmbedder::new(HashedConfig::new(Features::Tokens, Language::Python)).unwrap();
    embed_into_cache(&dataset_texts(tasks), &mut bag, &cache, 64).unwrap();
    let store = load_vectors(&cache, None).unwrap();
    (dir, store)
}

#[test]
fn bag_of_tokens_scores_on_toy_dataset() {
    let tasks = toy_dataset(80, &[PairType::PosVsNeg, PairType::PosVsLsh]);
    let (_dir, store) = bag_store(&tasks);
    let report = score_dataset(&tasks, &store, "h");
    let lsh = &report.per_type[&PairType::PosVsLsh];
    assert_eq!(lsh.correct, 0);
    assert!(lsh.tie + lsh.incorrect > 0);
    for v in report.verdicts.iter().filter(|v| v.pair_type == PairType::PosVsLsh) {
        assert_eq!(v.d_rejected, Some(1.0));
    }
    for r in report.per_type.values() {
        assert!((0.0..=1.0).contains(&r.accuracy));
    }
    let counts: BTreeMap<PairType, usize> = tasks.iter().fold(BTreeMap::new(), |mut m, t| {
        *m.entry(t.pair_type).or_insert(0) += 1;
        m
    });
    for (t, r) in &report.per_type {
        assert_eq!(r.correct + r.incorrect + r.tie + r.skipped, counts[t]);
    }
}

#[test]
fn similarity_table_means_and_empty_sample() {
    let tasks = toy_dataset(60, &PairType::ALL);
    let (_dir, store) = bag_store(&tasks);
    let table = similarity_table(&tasks, &store, 40, 3);
    assert_eq!(table.rows.len(), 40);
    assert_eq!(table.notice, None);
    let cols: [fn(&lecs_core::eval::SimRow) -> Option<f64>; 4] = [|r| r.d_obf, |r| r.d_lsh, |r| r.d_pos, |r| r.d_neg];
    for (c, get) in cols.iter().enumerate() {
        let vals: Vec<f64> = table.rows.iter().filter_map(get).collect();
        let m = vals.iter().sum::<f64>() / vals.len() as f64;
        assert!((table.means[c].unwrap() - m).abs() < 1e-12);
    }
    assert_eq!(table.means[1], Some(1.0));
    assert!(table.rows.iter().filter_map(|r| r.d_lsh).all(|d| d == 1.0));
    assert_eq!(similarity_table(&tasks, &store, 40, 3), table);

    let empty = similarity_table(&tasks, &store, 0, 3);
    assert!(empty.rows.is_empty());
    assert_eq!(empty.means, [None; 4]);
    assert_eq!(empty.notice, Some(SimNotice::EmptySample));
    let mut csv = Vec::new();
    empty.write_csv(&mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().starts_with("task_id,"));

    let clamped = similarity_table(&tasks, &store, tasks.len() + 5, 3);
    assert_eq!(clamped.rows.len(), tasks.len());
    assert!(matches!(clamped.notice, Some(SimNotice::Clamped { .. })));
}

#[test]
fn prompt_template_is_pinned() {
    assert_eq!(template_digest(Language::Java), "c39bddd2bcedf4e67749ebd0ef034c46edda261e42a042eca1659dc3730c1ba5");
    assert_eq!(template_digest(Language::Python), "5b06ebe7585cdd04c05a3b453e3c83412f0c43d90471e04c18d1d808eb06feee");
    assert!(template(Language::Java).starts_with("SYSTEM MESSAGE:\nYou are a Java expert"));
    for t in toy_dataset(5, &PairType::ALL).iter().chain([task(PairType::ObfVsNeg, Answer::B, "j")].iter()) {
        let a = render_prompt(t);
        assert_eq!(a, render_prompt(t));
        assert!(a.contains("public void F(int V) {"));
        assert!(a.trim_end().ends_with("Answer:"));
        assert!(a.contains(t.query.trim_end()));
    }
}

fn outcome(i: usize) -> Outcome {
    [Outcome::Correct, Outcome::Incorrect, Outcome::Tie, Outcome::Skipped][i]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn aggregate_matches_recount(cells in proptest::collection::vec((0usize..6, 0usize..4), 600)) {
        let verdicts: Vec<Verdict> = cells
            .iter()
            .enumerate()
            .map(|(i, &(t, o))| Verdict { task_id: format!("t{i:04}"), pair_type: PairType::ALL[t], d_accepted: None, d_rejected: None, outcome: outcome(o) })
            .collect();
        let report = aggregate(verdicts, "e", "h");
        let mut oracle: BTreeMap<PairType, [usize; 4]> = BTreeMap::new();
        for &(t, o) in &cells {
            oracle.entry(PairType::ALL[t]).or_default()[o] += 1;
        }
        prop_assert_eq!(report.per_type.len(), oracle.len());
        for (t, c) in oracle {
            let r = &report.per_type[&t];
            prop_assert_eq!([r.correct, r.incorrect, r.tie, r.skipped], c);
            let scored = c[0] + c[1] + c[2];
            let acc = if scored == 0 { 0.0 } else { c[0] as f64 / scored as f64 };
            prop_assert_eq!(r.accuracy, acc);
        }
    }

    #[test]
    fn power_of_two_scaling_changes_no_verdict(
        vs in proptest::collection::vec(proptest::collection::vec(-4i32..5, 6), 3),
        ks in proptest::collection::vec(-30i32..30, 3),
        correct in any::<bool>(),
    ) {
        let v: Vec<Vec<f64>> = vs.iter().map(|x| x.iter().map(|&y| y as f64).collect()).collect();
        let t = task(PairType::PosVsNeg, if correct { Answer::A } else { Answer::B }, "t");
        let base = score_pair_task(&t, &v[0], &v[1], &v[2]);
        let s: Vec<Vec<f64>> = v.iter().zip(&ks).map(|(x, &k)| x.iter().map(|y| y * 2f64.powi(k)).collect()).collect();
        let scaled = score_pair_task(&t, &s[0], &s[1], &s[2]);
        prop_assert_eq!(base.outcome, scaled.outcome);
    }

    #[test]
    fn positive_scaling_keeps_separated_verdicts(
        vs in proptest::collection::vec(proptest::collection::vec(-1.0f64..1.0, 6), 3),
        ks in proptest::collection::vec(1e-3f64..1e3, 3),
    ) {
        let t = task(PairType::PosVsNeg, Answer::A, "t");
        let base = score_pair_task(&t, &vs[0], &vs[1], &vs[2]);
        if let (Some(a), Some(r)) = (base.d_accepted, base.d_rejected) {
            prop_assume!((a - r).abs() > 1e-9);
            let s: Vec<Vec<f64>> = vs.iter().zip(&ks).map(|(x, k)| x.iter().map(|y| y * k).collect()).collect();
            prop_assert_eq!(score_pair_task(&t, &s[0], &s[1], &s[2]).outcome, base.outcome);
        }
    }
}

#[test]
fn obfuscation_role_is_the_accepted_side() {
    let t = task(PairType::ObfVsNeg, Answer::A, "t");
    assert_eq!(t.provenance.accepted, Role::Obfuscated);
    assert_eq!(t.accepted_rejected().0, t.candidate_a);
}
