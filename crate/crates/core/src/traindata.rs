//! Next-token-prediction training examples for original, line-shuffled and
//! obfuscated code, and the combined loss over externally scored positions.
//!
//! Position `i` always predicts token `i + 1`.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::CodeUnit;
use crate::lang::{lex, Language};
use crate::perturb::{PerturbationDetail, PerturbedUnit};

/// Target every shuffled-region position must predict.
pub const VOID_TOKEN: &str = "<v>";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TokenizeError {
    #[error("nothing to tokenize")]
    Empty,
    #[error("external tokenizer: {0}")]
    External(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmitError {
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
    #[error("sequence of {0} tokens is too short to predict anything")]
    TooShort(usize),
    #[error("inconsistent perturbation record: {0}")]
    InconsistentRecord(String),
    #[error("obfuscated and original token counts differ ({obfuscated} vs {original})")]
    AlignmentSkipped { obfuscated: usize, original: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LossError {
    #[error("example {example}: expected {expected} log-probabilities, got {got}")]
    Shape { example: usize, expected: usize, got: usize },
    #[error("example {example} position {position}: log-probability {value} is not a log of a probability")]
    Domain { example: usize, position: usize, value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenMode {
    Word,
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TokenSequence {
    pub tokens: Vec<String>,
    /// 0-based physical line of each token; non-decreasing.
    pub line_index: Vec<usize>,
    pub mode: TokenMode,
}

/// Spellings of the form `\…\<v>` gain one backslash so that no source token
/// ever equals the void token and escaping stays reversible.
pub fn escape_reserved(token: &str) -> String {
    let stem = token.trim_start_matches('\\');
    if stem == VOID_TOKEN {
        format!("\\{token}")
    } else {
        token.to_string()
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())].iter().filter(|&&b| b == b'\n').count()
}

/// Word-mode tokenization: one lexical token per entry, comments included.
pub fn tokenize_words(code: &str, lang: Language) -> Result<TokenSequence, TokenizeError> {
    let toks = lex(code, lang);
    if toks.is_empty() {
        return Err(TokenizeError::Empty);
    }
    Ok(TokenSequence {
        tokens: toks.iter().map(|t| escape_reserved(t.text(code))).collect(),
        line_index: toks.iter().map(|t| t.line).collect(),
        mode: TokenMode::Word,
    })
}

#[derive(Serialize)]
struct TokenizeRequest<'a> {
    id: String,
    text: &'a str,
}

#[derive(Deserialize)]
struct TokenizeResponse {
    id: String,
    tokens: Vec<String>,
    /// Start byte of each token within the request text.
    offsets: Vec<usize>,
}

/// A user-supplied tokenizer process speaking JSON lines on stdio.
pub struct ExternalTokenizer {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
    next: u64,
}

impl ExternalTokenizer {
    pub fn spawn(command: &str) -> Result<Self, TokenizeError> {
        let argv = shlex::split(command)
            .filter(|a| !a.is_empty())
            .ok_or_else(|| TokenizeError::External(format!("cannot split command `{command}`")))?;
        let mut child = Command::new(&argv[0])
            .args(&argv[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| TokenizeError::External(format!("spawn `{}`: {e}", argv[0])))?;
        let stdin = child.stdin.take().expect("stdin piped");
        let stdout = BufReader::new(child.stdout.take().expect("stdout piped"));
        Ok(ExternalTokenizer { child, stdin, stdout, next: 0 })
    }

    pub fn tokenize(&mut self, code: &str) -> Result<TokenSequence, TokenizeError> {
        if code.trim().is_empty() {
            return Err(TokenizeError::Empty);
        }
        let ext = |m: String| TokenizeError::External(m);
        let id = format!("t{}", self.next);
        self.next += 1;
        let req = serde_json::to_string(&TokenizeRequest { id: id.clone(), text: code }).expect("request serializes");
        writeln!(self.stdin, "{req}").and_then(|_| self.stdin.flush()).map_err(|e| ext(e.to_string()))?;
        let mut line = String::new();
        if self.stdout.read_line(&mut line).map_err(|e| ext(e.to_string()))? == 0 {
            return Err(ext("tokenizer closed its output".into()));
        }
        let resp: TokenizeResponse = serde_json::from_str(&line).map_err(|e| ext(format!("bad response: {e}")))?;
        if resp.id != id {
            return Err(ext(format!("response id `{}` for request `{id}`", resp.id)));
        }
        if resp.tokens.len() != resp.offsets.len() || resp.tokens.is_empty() {
            return Err(ext(format!("{} tokens with {} offsets", resp.tokens.len(), resp.offsets.len())));
        }
        if resp.offsets.windows(2).any(|w| w[0] > w[1]) || resp.offsets.iter().any(|&o| o > code.len()) {
            return Err(ext("offsets must be non-decreasing and inside the text".into()));
        }
        Ok(TokenSequence {
            line_index: resp.offsets.iter().map(|&o| line_of(code, o)).collect(),
            tokens: resp.tokens.iter().map(|t| escape_reserved(t)).collect(),
            mode: TokenMode::External,
        })
    }
}

impl Drop for ExternalTokenizer {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

pub enum Tokenizer {
    Word(Language),
    External(ExternalTokenizer),
}

impl Tokenizer {
    pub fn tokenize(&mut self, code: &str) -> Result<TokenSequence, TokenizeError> {
        match self {
            Tokenizer::Word(lang) => tokenize_words(code, *lang),
            Tokenizer::External(t) => t.tokenize(code),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Original,
    LineShuffled,
    Obfuscated,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Original, Variant::LineShuffled, Variant::Obfuscated];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Normal,
    Void,
    ObfTarget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingExample {
    pub variant: Variant,
    pub input_tokens: Vec<String>,
    pub targets: Vec<String>,
    pub target_kind: Vec<TargetKind>,
    /// Inclusive shuffled token interval, line-shuffled examples only.
    pub span: Option<[usize; 2]>,
    pub base_unit_id: String,
}

/// Shift-by-one example over an already tokenized sequence.
pub fn original_from_tokens(tokens: &[String], base_unit_id: &str) -> Result<TrainingExample, EmitError> {
    if tokens.len() < 2 {
        return Err(EmitError::TooShort(tokens.len()));
    }
    Ok(TrainingExample {
        variant: Variant::Original,
        input_tokens: tokens.to_vec(),
        targets: tokens[1..].to_vec(),
        target_kind: vec![TargetKind::Normal; tokens.len() - 1],
        span: None,
        base_unit_id: base_unit_id.to_string(),
    })
}

/// Position `i` targets the void token exactly when token `i + 1` lies in
/// `span`. An empty span yields the original example under a new tag.
pub fn shuffled_from_tokens(
    tokens: &[String],
    span: Option<[usize; 2]>,
    base_unit_id: &str,
) -> Result<TrainingExample, EmitError> {
    let mut ex = original_from_tokens(tokens, base_unit_id)?;
    ex.variant = Variant::LineShuffled;
    let Some([j, k]) = span else {
        return Ok(ex);
    };
    if j == 0 || j > k || k >= tokens.len() {
        return Err(EmitError::InconsistentRecord(format!("token interval [{j}, {k}] over {} tokens", tokens.len())));
    }
    for i in j - 1..k {
        ex.targets[i] = VOID_TOKEN.to_string();
        ex.target_kind[i] = TargetKind::Void;
    }
    ex.span = Some([j, k]);
    Ok(ex)
}

/// Obfuscated tokens as input, the base's tokens shifted by one as targets.
pub fn obfuscated_from_tokens(
    obfuscated: &[String],
    original: &[String],
    base_unit_id: &str,
) -> Result<TrainingExample, EmitError> {
    if obfuscated.len() != original.len() {
        return Err(EmitError::AlignmentSkipped { obfuscated: obfuscated.len(), original: original.len() });
    }
    if original.len() < 2 {
        return Err(EmitError::TooShort(original.len()));
    }
    Ok(TrainingExample {
        variant: Variant::Obfuscated,
        input_tokens: obfuscated.to_vec(),
        targets: original[1..].to_vec(),
        target_kind: vec![TargetKind::ObfTarget; original.len() - 1],
        span: None,
        base_unit_id: base_unit_id.to_string(),
    })
}

pub fn emit_original_example(unit: &CodeUnit, tokenizer: &mut Tokenizer) -> Result<TrainingExample, EmitError> {
    let seq = tokenizer.tokenize(&unit.source)?;
    original_from_tokens(&seq.tokens, &unit.id)
}

/// Maps the record's physical line span onto the token interval covering it.
pub fn emit_shuffled_example(p: &PerturbedUnit, tokenizer: &mut Tokenizer) -> Result<TrainingExample, EmitError> {
    let PerturbationDetail::LineShuffle { line_span: [first, last], .. } = p.record.detail else {
        return Err(EmitError::InconsistentRecord(format!("expected line_shuffle, found {}", p.record.kind())));
    };
    let seq = tokenizer.tokenize(&p.source)?;
    let inside: Vec<usize> = (0..seq.tokens.len()).filter(|&i| (first..=last).contains(&seq.line_index[i])).collect();
    let span = match (inside.first(), inside.last()) {
        (Some(&j), Some(&k)) => Some([j, k]),
        _ => None,
    };
    shuffled_from_tokens(&seq.tokens, span, &p.base_unit_id)
}

pub fn emit_obfuscated_example(
    p: &PerturbedUnit,
    base: &CodeUnit,
    tokenizer: &mut Tokenizer,
) -> Result<TrainingExample, EmitError> {
    if !matches!(p.record.detail, PerturbationDetail::Obfuscate { .. }) {
        return Err(EmitError::InconsistentRecord(format!("expected obfuscate, found {}", p.record.kind())));
    }
    if p.base_unit_id != base.id {
        return Err(EmitError::InconsistentRecord(format!("perturbation of {} paired with {}", p.base_unit_id, base.id)));
    }
    let obf = tokenizer.tokenize(&p.source)?;
    let ori = tokenizer.tokenize(&base.source)?;
    obfuscated_from_tokens(&obf.tokens, &ori.tokens, &base.id)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ContributingPositions {
    pub original: usize,
    pub line_shuffled: usize,
    pub obfuscated: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub l_ori: f64,
    pub l_lsf: f64,
    pub l_obf: f64,
    pub l_total: f64,
    pub contributing_positions: ContributingPositions,
}

/// Mean negative log-likelihood per variant, summed into `l_total`. Values
/// are sorted before summing, so the result is independent of example order.
/// A variant with no positions contributes zero.
pub fn assemble_loss(examples: &[TrainingExample], logprobs: &[Vec<f64>]) -> Result<LossBreakdown, LossError> {
    if examples.len() != logprobs.len() {
        return Err(LossError::Shape { example: examples.len().min(logprobs.len()), expected: examples.len(), got: logprobs.len() });
    }
    let mut per: [Vec<f64>; 3] = Default::default();
    for (e, (ex, lp)) in examples.iter().zip(logprobs).enumerate() {
        if lp.len() != ex.targets.len() {
            return Err(LossError::Shape { example: e, expected: ex.targets.len(), got: lp.len() });
        }
        if let Some((position, &value)) = lp.iter().enumerate().find(|(_, v)| !(**v <= 0.0)) {
            return Err(LossError::Domain { example: e, position, value });
        }
        per[ex.variant as usize].extend(lp.iter().map(|v| -v));
    }
    let mean = |v: &mut Vec<f64>| {
        if v.is_empty() {
            return 0.0;
        }
        v.sort_by(f64::total_cmp);
        v.iter().sum::<f64>() / v.len() as f64
    };
    let [mut ori, mut lsf, mut obf] = per;
    let contributing_positions = ContributingPositions { original: ori.len(), line_shuffled: lsf.len(), obfuscated: obf.len() };
    let (l_ori, l_lsf, l_obf) = (mean(&mut ori), mean(&mut lsf), mean(&mut obf));
    Ok(LossBreakdown { l_ori, l_lsf, l_obf, l_total: l_ori + l_lsf + l_obf, contributing_positions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn java_increment() {
        assert_eq!(tokenize_words("num++;", Language::Java).unwrap().tokens, toks("num ++ ;"));
        assert_eq!(tokenize_words("  \n", Language::Java), Err(TokenizeError::Empty));
    }

    #[test]
    fn shift_by_one() {
        let ex = original_from_tokens(&toks("a b c"), "u").unwrap();
        assert_eq!(ex.targets, toks("b c"));
        assert_eq!(ex.target_kind, vec![TargetKind::Normal; 2]);
        assert_eq!(original_from_tokens(&toks("a"), "u"), Err(EmitError::TooShort(1)));
    }

    #[test]
    fn void_positions() {
        let t = toks("t0 t1 t2 t3 t4 t5 t6 t7 t8 t9");
        let ex = shuffled_from_tokens(&t, Some([4, 6]), "u").unwrap();
        let voids: Vec<usize> = (0..9).filter(|&i| ex.target_kind[i] == TargetKind::Void).collect();
        assert_eq!(voids, vec![3, 4, 5]);
        assert!(voids.iter().all(|&i| ex.targets[i] == VOID_TOKEN));
        assert_eq!(ex.targets[6], "t7");
        assert!(matches!(shuffled_from_tokens(&t, Some([0, 2]), "u"), Err(EmitError::InconsistentRecord(_))));

        let degenerate = shuffled_from_tokens(&t, None, "u").unwrap();
        let mut original = original_from_tokens(&t, "u").unwrap();
        original.variant = Variant::LineShuffled;
        assert_eq!(degenerate, original);
    }

    #[test]
    fn obfuscated_targets_follow_original() {
        let ex = obfuscated_from_tokens(&toks("int V0 = 1"), &toks("int num = 1"), "u").unwrap();
        assert_eq!(ex.input_tokens, toks("int V0 = 1"));
        assert_eq!(ex.targets, toks("num = 1"));
        assert!(matches!(obfuscated_from_tokens(&toks("a b"), &toks("a b c"), "u"), Err(EmitError::AlignmentSkipped { .. })));
    }

    #[test]
    fn reserved_spelling_is_escaped() {
        assert_eq!(escape_reserved("<v>"), "\\<v>");
        assert_eq!(escape_reserved("\\<v>"), "\\\\<v>");
        assert_eq!(escape_reserved("<vv>"), "<vv>");
    }

    #[test]
    fn loss_reductions() {
        let ex = original_from_tokens(&toks("a b c d"), "u").unwrap();
        let l = assemble_loss(std::slice::from_ref(&ex), &[vec![0.0; 3]]).unwrap();
        assert_eq!((l.l_ori, l.l_total), (0.0, 0.0));
        let u = -(100f64).ln();
        let l = assemble_loss(&[ex.clone()], &[vec![u; 3]]).unwrap();
        assert!((l.l_ori - 100f64.ln()).abs() < 1e-12);
        assert!(matches!(assemble_loss(&[ex.clone()], &[vec![0.0; 2]]), Err(LossError::Shape { .. })));
        assert!(matches!(assemble_loss(&[ex.clone()], &[vec![0.0, 0.1, 0.0]]), Err(LossError::Domain { position: 1, .. })));
        assert!(matches!(assemble_loss(&[ex], &[vec![0.0, f64::NAN, 0.0]]), Err(LossError::Domain { .. })));
    }
}
