mod common;

use std::io::Write;
use std::process::{Command, Stdio};

use lecs_core::analysis::{bind_identifiers, def_use, order_dependent, BindingKind, IdentifierBinding};
use lecs_core::{CodeUnit, Language};
use serde_json::json;

// One call (`ys.append`) and one aliasing copy (`ys = xs`).
const SIX: &str = "def f(xs, k):
    ys = xs
    n = k + 1
    ys.append(n)
    t = xs[-1]
    k = k * 2
    r = n + t
";

// Every local starts bound (ys to a list distinct from xs) so a swap can
// only differ through data flow, never through an unbound name.
const PAIR_ORACLE: &str = r#"
import copy, json, sys
job = json.load(sys.stdin)
stmts = job["statements"]

def fingerprint(env):
    keys = sorted(k for k in env if k != "__builtins__")
    return repr([(k, env[k]) for k in keys]) + repr(env["ys"] is env["xs"])

def run(env, order):
    env = copy.deepcopy(env)
    try:
        for s in order:
            exec(s, env)
        return fingerprint(env)
    except BaseException as e:
        return "raise:" + type(e).__name__

bits = []
for i, j in job["pairs"]:
    env = {"xs": [1, 2], "k": 3, "ys": [9], "n": 0, "t": 0, "r": 0}
    for s in stmts[:i]:
        exec(s, env)
    env.pop("__builtins__", None)
    bits.append(run(env, [stmts[i], stmts[j]]) != run(env, [stmts[j], stmts[i]]))
json.dump(bits, sys.stdout)
"#;

fn pair_oracle(statements: &[String], pairs: &[(usize, usize)]) -> Vec<bool> {
    let mut child = Command::new("python3")
        .args(["-c", PAIR_ORACLE])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("python3 available");
    let payload = json!({"statements": statements, "pairs": pairs});
    child.stdin.take().unwrap().write_all(payload.to_string().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    serde_json::from_slice(&out.stdout).unwrap()
}

fn python(src: &str) -> CodeUnit {
    CodeUnit::new(Language::Python, src, None, None)
}

#[test]
fn six_statement_fixture_matches_the_reorder_oracle() {
    let unit = python(SIX);
    let stmts = def_use(&unit).unwrap();
    assert_eq!(stmts.len(), 6);
    let texts: Vec<String> = stmts.iter().map(|s| SIX[s.span.clone()].to_string()).collect();
    assert_eq!(texts[2], "ys.append(n)");
    assert_eq!(stmts.iter().filter(|s| s.has_side_effect).count(), 1);

    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
    assert_eq!(pairs.len(), 15);
    let oracle = pair_oracle(&texts, &pairs);
    let predicted: Vec<bool> = pairs.iter().map(|&(i, j)| order_dependent(&stmts[i], &stmts[j])).collect();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        assert_eq!(predicted[k], oracle[k], "pair ({}, {}) = ({:?}, {:?})", i, j, texts[i], texts[j]);
    }
    assert_eq!(predicted.iter().filter(|&&b| b).count(), 6);
}

#[test]
fn straight_line_statements() {
    let unit = python("def g():\n    a = 1\n    b = 2\n    c = a + b\n");
    let s = def_use(&unit).unwrap();
    let sets: Vec<(Vec<&str>, Vec<&str>)> = s
        .iter()
        .map(|s| (s.defs.iter().map(String::as_str).collect(), s.uses.iter().map(String::as_str).collect()))
        .collect();
    assert_eq!(sets, [(vec!["a"], vec![]), (vec!["b"], vec![]), (vec!["c"], vec!["a", "b"])]);
    assert!(s.iter().all(|s| !s.has_side_effect));
}

fn spans_of(b: &IdentifierBinding) -> Vec<std::ops::Range<usize>> {
    let mut v = vec![b.declaration_span.clone()];
    v.extend(b.use_spans.iter().cloned());
    v
}

fn rename(src: &str, spans: &[std::ops::Range<usize>], fresh: &str) -> String {
    let mut sorted = spans.to_vec();
    sorted.sort_by_key(|s| s.start);
    sorted.dedup();
    let mut out = String::new();
    let mut at = 0;
    for s in sorted {
        out.push_str(&src[at..s.start]);
        out.push_str(fresh);
        at = s.end;
    }
    out.push_str(&src[at..]);
    out
}

#[test]
fn shadowing_bindings_rename_independently() {
    let src = "def f(x, ys):\n    total = x\n    for v in [x * 2 for x in ys]:\n        total += v\n    return total + x\n";
    let bindings = bind_identifiers(&python(src)).unwrap();
    let xs: Vec<&IdentifierBinding> = bindings.iter().filter(|b| b.name == "x").collect();
    assert_eq!(xs.len(), 2);
    let (a, b) = (spans_of(xs[0]), spans_of(xs[1]));
    assert!(a.iter().all(|s| !b.contains(s)));

    let cases = json!([[1, [1, 2, 3]], [-4, []], [10, [5]]]);
    let mut jobs = vec![(src.to_string(), cases.clone())];
    for x in &xs {
        let renamed = rename(src, &spans_of(x), "fresh_x");
        assert_ne!(renamed, src);
        jobs.push((renamed, cases.clone()));
    }
    let results = common::run_python(&jobs);
    assert_eq!(results[0], ["ok:14", "ok:-8", "ok:30"]);
    assert_eq!(results[1], results[0]);
    assert_eq!(results[2], results[0]);
}

fn shape(bindings: &[IdentifierBinding]) -> Vec<(BindingKind, usize, usize)> {
    let mut v: Vec<_> = bindings.iter().map(|b| (b.kind, b.use_spans.len(), b.scope_id)).collect();
    v.sort();
    v
}

#[test]
fn renaming_any_binding_preserves_binding_structure() {
    let mut checked = 0;
    for lang in [Language::Python, Language::Java] {
        for unit in common::toy_units(lang).iter().take(60) {
            let bindings = bind_identifiers(unit).unwrap();
            for (i, b) in bindings.iter().enumerate() {
                let fresh = format!("Zq{i}");
                let renamed = CodeUnit::new(lang, rename(&unit.source, &spans_of(b), &fresh), None, None);
                let after = bind_identifiers(&renamed).unwrap_or_else(|e| panic!("{e}: {}", renamed.source));
                assert_eq!(shape(&after), shape(&bindings), "{}\n=>\n{}", unit.source, renamed.source);
                assert_eq!(after.iter().filter(|x| x.name == fresh).count(), 1);
                checked += 1;
            }
        }
    }
    assert!(checked > 200, "{checked}");
}

#[test]
fn demo_loop_statements() {
    let src = "public void main(int num){ while(num<20){ System.out.print(num); num++; } }";
    let stmts = def_use(&CodeUnit::new(Language::Java, src, None, None)).unwrap();
    let print = stmts.iter().find(|s| src[s.span.clone()].starts_with("System")).unwrap();
    let inc = stmts.iter().find(|s| &src[s.span.clone()] == "num++;").unwrap();
    assert!(print.has_side_effect);
    assert!(print.uses.contains("num") && !print.defs.contains("num"));
    assert!(inc.defs.contains("num") && inc.uses.contains("num"));
    assert!(order_dependent(print, inc));
}

#[test]
fn oracle_detects_a_plain_swap() {
    let bits = pair_oracle(&["n = k + 1".into(), "k = k * 2".into()], &[(0, 1)]);
    assert_eq!(bits, [true]);
}
