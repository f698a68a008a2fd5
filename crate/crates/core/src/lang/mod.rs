//! Source languages, tree-sitter parsing and reserved-word tables.

mod lexer;

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use tree_sitter::{Parser, Tree};

pub use lexer::{lex, Token, TokenKind, STRUCTURAL_SYMBOLS};

/// Languages the toolkit can ingest and perturb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
}

impl Language {
    pub const ALL: [Language; 2] = [Language::Java, Language::Python];

    pub fn name(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "python",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "py",
        }
    }

    /// Reserved keywords, in the order of the shipped list.
    pub fn keywords(self) -> &'static [&'static str] {
        static JAVA: OnceLock<Vec<&'static str>> = OnceLock::new();
        static PYTHON: OnceLock<Vec<&'static str>> = OnceLock::new();
        match self {
            Language::Java => JAVA.get_or_init(|| parse_word_list(include_str!("../../data/keywords/java17.txt"))),
            Language::Python => {
                PYTHON.get_or_init(|| parse_word_list(include_str!("../../data/keywords/python3.txt")))
            }
        }
    }

    pub fn is_keyword(self, word: &str) -> bool {
        self.keywords().contains(&word)
    }

    fn grammar(self) -> tree_sitter::Language {
        match self {
            Language::Java => tree_sitter_java::LANGUAGE.into(),
            Language::Python => tree_sitter_python::LANGUAGE.into(),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "java" => Ok(Language::Java),
            "python" | "py" => Ok(Language::Python),
            other => Err(format!("unsupported language `{other}` (expected java or python)")),
        }
    }
}

fn parse_word_list(text: &'static str) -> Vec<&'static str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

thread_local! {
    static PARSERS: RefCell<[Option<Parser>; 2]> = const { RefCell::new([None, None]) };
}

/// Parses `source` with the language's tree-sitter grammar.
///
/// The returned tree may contain error nodes; see [`has_syntax_error`].
pub fn parse(source: &str, lang: Language) -> Tree {
    PARSERS.with(|cell| {
        let mut parsers = cell.borrow_mut();
        let slot = &mut parsers[lang as usize];
        let parser = slot.get_or_insert_with(|| {
            let mut p = Parser::new();
            p.set_language(&lang.grammar()).expect("bundled grammar is ABI compatible");
            p
        });
        parser.parse(source, None).expect("parser has a language and no timeout")
    })
}

pub fn has_syntax_error(source: &str, lang: Language) -> bool {
    parse(source, lang).root_node().has_error()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keyword_lists_match_language_references() {
        assert_eq!(Language::Java.keywords().len(), 50);
        assert_eq!(Language::Python.keywords().len(), 35);
        assert!(Language::Java.is_keyword("const"));
        assert!(Language::Java.is_keyword("assert"));
        assert!(!Language::Java.is_keyword("true"));
        assert!(Language::Python.is_keyword("nonlocal"));
        assert!(!Language::Python.is_keyword("match"));
    }

    #[test]
    fn bare_java_method_parses() {
        assert!(!has_syntax_error("public void main(int num) { num++; }", Language::Java));
        assert!(has_syntax_error("void f() { int x = ; }", Language::Java));
        assert!(!has_syntax_error("def f(x):\n    return x\n", Language::Python));
        assert!(has_syntax_error("def f(x:\n    return x\n", Language::Python));
    }

    #[test]
    fn language_round_trips_through_str() {
        for lang in Language::ALL {
            assert_eq!(lang.name().parse::<Language>().unwrap(), lang);
        }
        assert!("rust".parse::<Language>().is_err());
    }
}
