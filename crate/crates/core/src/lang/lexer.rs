//! Word-level lexer for Java and Python.
//!
//! The lexer is total: every byte of the input is either whitespace or part of
//! exactly one token, so concatenating token texts with the original gaps
//! reproduces the source. Characters outside the lexical grammar become
//! [`TokenKind::Unknown`] tokens instead of errors.

use serde::{Deserialize, Serialize};

use super::Language;

/// The nine structure-related symbols that symbol replacement operates on.
pub const STRUCTURAL_SYMBOLS: [&str; 9] = ["(", ")", "[", "]", "{", "}", ",", ".", ";"];

const JAVA_OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%", "=", "<", ">", "!", "~",
    "?", ":", "&", "|", "^", "@",
];

const PYTHON_OPERATORS: &[&str] = &[
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "@=", "<<", ">>", "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", ":",
    "&", "|", "^", "@",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Identifier,
    Keyword,
    /// `true`, `false` and `null` in Java; Python spells these as keywords.
    Literal,
    Number,
    String,
    Comment,
    Operator,
    /// One of [`STRUCTURAL_SYMBOLS`].
    Symbol,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
    /// 0-based physical line of the token's first byte.
    pub line: usize,
}

impl Token {
    pub fn text<'a>(&self, source: &'a str) -> &'a str {
        &source[self.start..self.end]
    }
}

struct Cursor<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self, ahead: usize) -> Option<u8> {
        self.bytes.get(self.pos + ahead).copied()
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump_char(&mut self) {
        if let Some(c) = self.peek_char() {
            if c == '\n' {
                self.line += 1;
            }
            self.pos += c.len_utf8();
        }
    }

    fn bump_bytes(&mut self, n: usize) {
        for _ in 0..n {
            if self.peek(0) == Some(b'\n') {
                self.line += 1;
            }
            self.pos += 1;
        }
    }
}

fn is_ident_start(c: char, lang: Language) -> bool {
    c == '_' || c.is_alphabetic() || (lang == Language::Java && c == '$')
}

fn is_ident_continue(c: char, lang: Language) -> bool {
    c == '_' || c.is_alphanumeric() || (lang == Language::Java && c == '$')
}

/// Splits `source` into word-level tokens.
pub fn lex(source: &str, lang: Language) -> Vec<Token> {
    let mut cur = Cursor { src: source, bytes: source.as_bytes(), pos: 0, line: 0 };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek_char() {
        if c.is_whitespace() {
            cur.bump_char();
            continue;
        }
        if lang == Language::Python && c == '\\' && matches!(cur.peek(1), Some(b'\n')) {
            cur.bump_bytes(2);
            continue;
        }
        let start = cur.pos;
        let line = cur.line;
        let kind = lex_one(&mut cur, c, lang);
        tokens.push(Token { kind, start, end: cur.pos, line });
    }
    tokens
}

fn lex_one(cur: &mut Cursor<'_>, c: char, lang: Language) -> TokenKind {
    let rest = cur.rest();
    match lang {
        Language::Java if rest.starts_with("//") => {
            skip_to_eol(cur);
            return TokenKind::Comment;
        }
        Language::Java if rest.starts_with("/*") => {
            let len = rest[2..].find("*/").map(|i| i + 4).unwrap_or(rest.len());
            cur.bump_bytes(len);
            return TokenKind::Comment;
        }
        Language::Python if c == '#' => {
            skip_to_eol(cur);
            return TokenKind::Comment;
        }
        _ => {}
    }

    if is_ident_start(c, lang) {
        let word_end = rest
            .char_indices()
            .find(|&(_, ch)| !is_ident_continue(ch, lang))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let word = &rest[..word_end];
        if lang == Language::Python && is_string_prefix(word) && matches!(rest[word_end..].chars().next(), Some('"' | '\'')) {
            cur.bump_bytes(word_end);
            lex_python_string(cur);
            return TokenKind::String;
        }
        cur.bump_bytes(word_end);
        return if lang.is_keyword(word) {
            TokenKind::Keyword
        } else if lang == Language::Java && matches!(word, "true" | "false" | "null") {
            TokenKind::Literal
        } else {
            TokenKind::Identifier
        };
    }

    if c.is_ascii_digit() || (c == '.' && cur.peek(1).is_some_and(|b| b.is_ascii_digit())) {
        lex_number(cur);
        return TokenKind::Number;
    }

    if c == '"' || c == '\'' {
        match lang {
            Language::Python => lex_python_string(cur),
            Language::Java => lex_java_string(cur),
        }
        return TokenKind::String;
    }

    if let Some(sym) = STRUCTURAL_SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
        // `...` must win over `.`
        if !(*sym == "." && rest.starts_with("...")) {
            cur.bump_bytes(sym.len());
            return TokenKind::Symbol;
        }
    }

    let operators = match lang {
        Language::Java => JAVA_OPERATORS,
        Language::Python => PYTHON_OPERATORS,
    };
    if let Some(op) = operators.iter().find(|op| rest.starts_with(**op)) {
        cur.bump_bytes(op.len());
        return TokenKind::Operator;
    }

    cur.bump_char();
    TokenKind::Unknown
}

fn skip_to_eol(cur: &mut Cursor<'_>) {
    let len = cur.rest().find('\n').unwrap_or(cur.rest().len());
    cur.bump_bytes(len);
}

fn is_string_prefix(word: &str) -> bool {
    matches!(
        word.to_ascii_lowercase().as_str(),
        "r" | "u" | "b" | "f" | "br" | "rb" | "fr" | "rf"
    )
}

fn lex_number(cur: &mut Cursor<'_>) {
    let hex = cur.rest().starts_with("0x") || cur.rest().starts_with("0X");
    let mut seen_dot = false;
    loop {
        match cur.peek(0) {
            Some(b) if b.is_ascii_alphanumeric() || b == b'_' => {
                let exp = !hex && matches!(b, b'e' | b'E');
                cur.bump_bytes(1);
                if exp && matches!(cur.peek(0), Some(b'+' | b'-')) {
                    cur.bump_bytes(1);
                }
            }
            Some(b'.') if !seen_dot && !hex => {
                let next = cur.peek(1);
                if next.is_some_and(|n| n.is_ascii_alphabetic() || n == b'_' || n == b'.') {
                    break;
                }
                seen_dot = true;
                cur.bump_bytes(1);
            }
            _ => break,
        }
    }
}

fn lex_java_string(cur: &mut Cursor<'_>) {
    if cur.rest().starts_with("\"\"\"") {
        cur.bump_bytes(3);
        while !cur.rest().is_empty() {
            if cur.rest().starts_with('\\') {
                cur.bump_bytes(1);
                cur.bump_char();
            } else if cur.rest().starts_with("\"\"\"") {
                cur.bump_bytes(3);
                return;
            } else {
                cur.bump_char();
            }
        }
        return;
    }
    let quote = cur.peek(0).unwrap();
    cur.bump_bytes(1);
    scan_single_line_string(cur, quote);
}

fn lex_python_string(cur: &mut Cursor<'_>) {
    let quote = cur.peek(0).unwrap();
    let triple: String = std::iter::repeat_n(quote as char, 3).collect();
    if cur.rest().starts_with(&triple) {
        cur.bump_bytes(3);
        while !cur.rest().is_empty() {
            if cur.rest().starts_with('\\') {
                cur.bump_bytes(1);
                cur.bump_char();
            } else if cur.rest().starts_with(&triple) {
                cur.bump_bytes(3);
                return;
            } else {
                cur.bump_char();
            }
        }
        return;
    }
    cur.bump_bytes(1);
    scan_single_line_string(cur, quote);
}

/// Consumes up to and including the closing quote; an unterminated literal
/// stops at the end of the line.
fn scan_single_line_string(cur: &mut Cursor<'_>, quote: u8) {
    while let Some(b) = cur.peek(0) {
        match b {
            b'\n' => return,
            b'\\' => {
                cur.bump_bytes(1);
                if cur.peek(0).is_some_and(|n| n != b'\n') {
                    cur.bump_char();
                }
            }
            _ if b == quote => {
                cur.bump_bytes(1);
                return;
            }
            _ => cur.bump_char(),
        }
    }
}
