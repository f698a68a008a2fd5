mod common;

use std::fs;

use lecs_core::analysis::analyze;
use lecs_core::perturb::{line_shuffle, obfuscate, PerturbationDetail};
use lecs_core::traindata::{
    assemble_loss, emit_obfuscated_example, emit_original_example, emit_shuffled_example, escape_reserved, original_from_tokens,
    shuffled_from_tokens, tokenize_words, TargetKind, Tokenizer, TrainingExample, Variant, VOID_TOKEN,
};
use lecs_core::{CodeUnit, Language};
use proptest::prelude::*;

fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

#[test]
fn word_lexing_matches_the_hand_written_golden() {
    let dir = common::fixtures().join("traindata");
    let src = fs::read_to_string(dir.join("lex.java")).unwrap();
    let golden: Vec<(String, usize)> = fs::read_to_string(dir.join("lex.golden.tsv"))
        .unwrap()
        .lines()
        .map(|l| {
            let (t, n) = l.rsplit_once('\t').unwrap();
            (t.to_string(), n.parse().unwrap())
        })
        .collect();
    assert_eq!(golden.len(), 41);
    let seq = tokenize_words(&src, Language::Java).unwrap();
    let got: Vec<(String, usize)> = seq.tokens.into_iter().zip(seq.line_index).collect();
    assert_eq!(got, golden);
}

#[test]
fn original_example_matches_frozen_file() {
    let dir = common::fixtures().join("traindata");
    let unit = CodeUnit::new(Language::Java, fs::read_to_string(dir.join("lex.java")).unwrap(), None, None);
    let ex = emit_original_example(&unit, &mut Tokenizer::Word(Language::Java)).unwrap();
    let path = dir.join("lex.original.golden.json");
    let text = serde_json::to_string_pretty(&ex).unwrap() + "\n";
    if std::env::var_os("LECS_BLESS").is_some() {
        fs::write(&path, &text).unwrap();
    }
    assert_eq!(text, fs::read_to_string(&path).unwrap());
    assert_eq!(ex.targets.len(), 40);
}

const DEMO: &str = "public void main(int num) {
    while (num < 20) {
        System.out.print(num);
        num++;
    }
}";

#[test]
fn swapped_loop_body_is_voided_at_hand_marked_positions() {
    let unit = CodeUnit::new(Language::Java, DEMO, None, None);
    let p = line_shuffle(&unit, &analyze(&unit).unwrap(), 3, 5).unwrap();
    assert_eq!(
        p.source,
        "public void main(int num) {\n    while (num < 20) {\n        num++;\n        System.out.print(num);\n    }\n}"
    );
    let ex = emit_shuffled_example(&p, &mut Tokenizer::Word(Language::Java)).unwrap();
    // tokens 15..=17 are `num ++ ;`, 18..=26 are `System . out . print ( num ) ;`
    assert_eq!(ex.input_tokens[15], "num");
    assert_eq!(ex.input_tokens[26], ";");
    assert_eq!(ex.span, Some([15, 26]));
    let voids: Vec<usize> = (0..ex.targets.len()).filter(|&i| ex.target_kind[i] == TargetKind::Void).collect();
    assert_eq!(voids, (14..=25).collect::<Vec<_>>());
    assert_eq!(ex.targets[13], "{");
    assert_eq!(ex.targets[26], "}");
}

#[test]
fn obfuscated_example_keeps_original_targets() {
    let unit = CodeUnit::new(Language::Java, "int f(int num) {\n    int x = num + 1;\n    return x;\n}", None, None);
    let p = obfuscate(&unit, &analyze(&unit).unwrap(), 0, 1.0).unwrap();
    let ex = emit_obfuscated_example(&p, &unit, &mut Tokenizer::Word(Language::Java)).unwrap();
    let original = tokenize_words(&unit.source, Language::Java).unwrap().tokens;
    assert_eq!(ex.targets, original[1..]);
    assert!(ex.input_tokens.iter().any(|t| t.starts_with('V')));
    assert!(ex.target_kind.iter().all(|&k| k == TargetKind::ObfTarget));
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1.0)
}

#[test]
fn two_example_loss_matches_hand_arithmetic() {
    let ori = original_from_tokens(&toks("a b c d"), "u1").unwrap();
    let lsf = shuffled_from_tokens(&toks("a b c d e"), Some([2, 3]), "u2").unwrap();
    let lp = vec![vec![-0.5, -1.25, -2.0], vec![-0.1, -0.2, -0.3, -0.4]];
    let l = assemble_loss(&[ori, lsf], &lp).unwrap();
    // (0.5 + 1.25 + 2.0) / 3 = 1.25 ; (0.1 + 0.2 + 0.3 + 0.4) / 4 = 0.25
    assert!(close(l.l_ori, 1.25));
    assert!(close(l.l_lsf, 0.25));
    assert_eq!(l.l_obf, 0.0);
    assert!(close(l.l_total, 1.5));
    assert_eq!((l.contributing_positions.original, l.contributing_positions.line_shuffled), (3, 4));
}

#[test]
fn loss_is_a_mean_over_positions_not_examples() {
    let short = original_from_tokens(&toks("a b"), "u1").unwrap();
    let long = original_from_tokens(&toks("a b c d"), "u2").unwrap();
    let l = assemble_loss(&[short, long], &[vec![-1.0], vec![-2.0, -2.0, -2.0]]).unwrap();
    // 7 / 4, not (1 + 2) / 2
    assert!(close(l.l_ori, 1.75));
}

#[test]
fn uniform_model_loss_on_corpus_examples() {
    let units = common::toy_units(Language::Python);
    let mut tok = Tokenizer::Word(Language::Python);
    let examples: Vec<TrainingExample> = units.iter().take(20).map(|u| emit_original_example(u, &mut tok).unwrap()).collect();
    let lp: Vec<Vec<f64>> = examples.iter().map(|e| vec![-(100f64).ln(); e.targets.len()]).collect();
    let l = assemble_loss(&examples, &lp).unwrap();
    assert!(close(l.l_ori, 4.605170185988092));
    assert!(close(l.l_total, l.l_ori));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn void_count_equals_interval_length(n in 2usize..60, a in 1usize..60, b in 1usize..60) {
        let tokens: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
        let (j, k) = (a.min(b), a.max(b));
        prop_assume!(k < n);
        let ex = shuffled_from_tokens(&tokens, Some([j, k]), "u").unwrap();
        let voids: Vec<usize> = (0..ex.targets.len()).filter(|&i| ex.target_kind[i] == TargetKind::Void).collect();
        prop_assert_eq!(voids.len(), k - j + 1);
        for i in 0..ex.targets.len() {
            let void = (j..=k).contains(&(i + 1));
            prop_assert_eq!(voids.contains(&i), void);
            prop_assert_eq!(&ex.targets[i], if void { VOID_TOKEN } else { tokens[i + 1].as_str() });
        }
    }

    #[test]
    fn loss_ignores_example_order(
        specs in proptest::collection::vec((0usize..3, 2usize..12, proptest::collection::vec(-20.0f64..=0.0, 12)), 1..10),
        rotate in 0usize..10,
    ) {
        let mut examples = Vec::new();
        let mut lps = Vec::new();
        for (v, n, lp) in &specs {
            let tokens: Vec<String> = (0..*n).map(|i| format!("t{i}")).collect();
            let ex = match Variant::ALL[*v] {
                Variant::Original => original_from_tokens(&tokens, "u").unwrap(),
                Variant::LineShuffled => shuffled_from_tokens(&tokens, Some([1, *n - 1]), "u").unwrap(),
                Variant::Obfuscated => lecs_core::traindata::obfuscated_from_tokens(&tokens, &tokens, "u").unwrap(),
            };
            lps.push(lp[..ex.targets.len()].to_vec());
            examples.push(ex);
        }
        let base = assemble_loss(&examples, &lps).unwrap();
        let r = rotate % examples.len();
        examples.rotate_left(r);
        lps.rotate_left(r);
        examples.reverse();
        lps.reverse();
        let moved = assemble_loss(&examples, &lps).unwrap();
        prop_assert_eq!(&base, &moved);
        prop_assert!(close(base.l_total, base.l_ori + base.l_lsf + base.l_obf));
    }

    #[test]
    fn escaping_never_yields_the_void_token(slashes in 0usize..4, tail in "(<v>|<v|v>|[a-z<>]{0,3})") {
        let token = format!("{}{}", "\\".repeat(slashes), tail);
        let escaped = escape_reserved(&token);
        prop_assert_ne!(escaped.as_str(), VOID_TOKEN);
        if token.trim_start_matches('\\') == VOID_TOKEN {
            prop_assert_eq!(&escaped[1..], token.as_str());
        } else {
            prop_assert_eq!(&escaped, &token);
        }
    }

    #[test]
    fn unrenamed_positions_share_original_targets(idx in 0usize..400, seed: u64, fraction in 0.0f64..=1.0) {
        let units = toy();
        let unit = &units[idx % units.len()];
        let p = obfuscate(unit, &analyze(unit).unwrap(), seed, fraction).unwrap();
        let PerturbationDetail::Obfuscate { rename_map, .. } = &p.record.detail else { unreachable!() };
        let mut tok = Tokenizer::Word(unit.language);
        let obf = emit_obfuscated_example(&p, unit, &mut tok).unwrap();
        let ori = emit_original_example(unit, &mut tok).unwrap();
        prop_assert_eq!(obf.input_tokens.len(), ori.input_tokens.len());
        for i in 0..ori.targets.len() {
            if !rename_map.iter().any(|r| r.old == ori.input_tokens[i + 1]) {
                prop_assert_eq!(&obf.targets[i], &ori.targets[i]);
                prop_assert_eq!(&obf.input_tokens[i + 1], &ori.input_tokens[i + 1]);
            }
        }
    }
}

fn toy() -> &'static [CodeUnit] {
    static UNITS: std::sync::OnceLock<Vec<CodeUnit>> = std::sync::OnceLock::new();
    UNITS.get_or_init(|| Language::ALL.into_iter().flat_map(common::toy_units).collect())
}
