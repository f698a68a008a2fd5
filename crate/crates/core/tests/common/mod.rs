//! Shared helpers for integration tests: toy corpus loading and a Python
//! execution oracle.

#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use lecs_core::corpus::{ingest_corpus, IngestFilter};
use lecs_core::{CodeUnit, Language};
use serde_json::{json, Value};

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn fixtures() -> PathBuf {
    repo_root().join("fixtures")
}

pub fn toy_dir(lang: Language) -> PathBuf {
    fixtures().join("toy").join(lang.name())
}

pub fn toy_units(lang: Language) -> Vec<CodeUnit> {
    ingest_corpus(&[toy_dir(lang)], lang, &IngestFilter::default()).expect("toy corpus ingests").units
}

/// Argument lists stored next to a toy problem.
pub fn toy_inputs(problem: &str) -> Value {
    let path = toy_dir(Language::Python).join(problem).join("inputs.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const DRIVER: &str = r#"
import copy, json, signal, sys, types

def on_alarm(signum, frame):
    raise TimeoutError("budget")

signal.signal(signal.SIGALRM, on_alarm)
jobs = json.load(sys.stdin)
results = []
for job in jobs:
    outs = []
    env = {}
    try:
        signal.alarm(2)
        exec(job["source"], env)
        signal.alarm(0)
        fns = [v for k, v in env.items() if isinstance(v, types.FunctionType)]
        fn = fns[0]
    except BaseException as e:
        signal.alarm(0)
        results.append(["raise:" + type(e).__name__] * len(job["cases"]))
        continue
    for args in job["cases"]:
        try:
            signal.alarm(2)
            outs.append("ok:" + repr(fn(*copy.deepcopy(args))))
        except BaseException as e:
            outs.append("raise:" + type(e).__name__)
        finally:
            signal.alarm(0)
    results.append(outs)
json.dump(results, sys.stdout)
"#;

/// Runs each single-function Python program on its argument lists and
/// returns `ok:<repr>` or `raise:<ExceptionType>` per case.
pub fn run_python(jobs: &[(String, Value)]) -> Vec<Vec<String>> {
    let payload: Vec<Value> = jobs.iter().map(|(s, c)| json!({"source": s, "cases": c})).collect();
    let mut child = Command::new("python3")
        .arg("-c")
        .arg(DRIVER)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("python3 available");
    let body = serde_json::to_vec(&payload).unwrap();
    let mut stdin = child.stdin.take().unwrap();
    let writer = std::thread::spawn(move || stdin.write_all(&body));
    let out = child.wait_with_output().unwrap();
    writer.join().unwrap().unwrap();
    assert!(out.status.success(), "oracle driver failed");
    serde_json::from_slice(&out.stdout).unwrap()
}
