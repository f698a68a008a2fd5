//! Hashed bag-of-tokens and token-bigram embedders, usable in process or
//! served over the embedder wire protocol.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use xxhash_rust::xxh3::xxh3_64_with_seed;

use crate::eval::{EmbedError, Embedder, Embedding, Message};
use crate::lang::{lex, Language};

pub const DEFAULT_DIMS: usize = 4096;
pub const MIN_DIMS: usize = 64;
/// Joins the two halves of a bigram key; never appears inside a token.
const BIGRAM_SEPARATOR: u8 = 0x1F;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("dims must be at least {MIN_DIMS}, got {0}")]
    DimsTooSmall(usize),
    #[error("transport failure: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Features {
    Tokens,
    Bigrams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashedConfig {
    pub features: Features,
    pub dims: usize,
    pub seed: u64,
    pub language: Language,
}

impl HashedConfig {
    pub fn new(features: Features, language: Language) -> Self {
        HashedConfig { features, dims: DEFAULT_DIMS, seed: 0, language }
    }
}

/// Counts of hashed token (or adjacent token pair) features.
#[derive(Debug, Clone)]
pub struct HashedEmbedder {
    config: HashedConfig,
    id: String,
}

impl HashedEmbedder {
    pub fn new(config: HashedConfig) -> Result<Self, BaselineError> {
        if config.dims < MIN_DIMS {
            return Err(BaselineError::DimsTooSmall(config.dims));
        }
        let name = match config.features {
            Features::Tokens => "bag-of-tokens",
            Features::Bigrams => "token-bigram",
        };
        let id = format!("{name}-{}-d{}-s{}", config.language, config.dims, config.seed);
        Ok(HashedEmbedder { config, id })
    }

    pub fn config(&self) -> &HashedConfig {
        &self.config
    }

    fn bucket(&self, bytes: &[u8]) -> usize {
        (xxh3_64_with_seed(bytes, self.config.seed) % self.config.dims as u64) as usize
    }

    pub fn embed(&self, code: &str) -> Result<Vec<f64>, EmbedError> {
        let tokens: Vec<&str> = lex(code, self.config.language).iter().map(|t| t.text(code)).collect();
        let mut v = vec![0.0; self.config.dims];
        match self.config.features {
            Features::Tokens => {
                for t in &tokens {
                    v[self.bucket(t.as_bytes())] += 1.0;
                }
            }
            Features::Bigrams => {
                let mut key = Vec::new();
                for w in tokens.windows(2) {
                    key.clear();
                    key.extend_from_slice(w[0].as_bytes());
                    key.push(BIGRAM_SEPARATOR);
                    key.extend_from_slice(w[1].as_bytes());
                    v[self.bucket(&key)] += 1.0;
                }
            }
        }
        if v.iter().all(|&x| x == 0.0) {
            return Err(EmbedError::ZeroVector);
        }
        Ok(v)
    }

    fn respond(&self, msg: Message) -> Option<Message> {
        Some(match msg {
            Message::Hello { .. } => self.hello(),
            Message::Embed { id, text } => match self.embed(&text) {
                Ok(values) => Message::Vector { id, values, truncated: false },
                Err(e) => Message::Error { id: Some(id), message: Some(e.to_string()) },
            },
            Message::Bye => return None,
            other => Message::Error { id: None, message: Some(format!("unexpected message {}", other.to_line())) },
        })
    }

    fn hello(&self) -> Message {
        Message::Hello { embedder_id: self.id.clone(), dims: self.config.dims }
    }
}

impl Embedder for HashedEmbedder {
    fn embedder_id(&self) -> &str {
        &self.id
    }

    fn dims(&self) -> usize {
        self.config.dims
    }

    fn embed_many(&mut self, texts: &[&str]) -> Vec<Result<Embedding, EmbedError>> {
        texts.iter().map(|t| self.embed(t).map(|values| Embedding { values, truncated: false })).collect()
    }
}

/// Serves the protocol on a line stream until `bye` or end of input.
pub fn serve_stdio(embedder: &HashedEmbedder, input: impl BufRead, mut output: impl Write) -> Result<(), BaselineError> {
    writeln!(output, "{}", embedder.hello().to_line())?;
    output.flush()?;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = match Message::from_line(&line) {
            Ok(msg) => match embedder.respond(msg) {
                Some(r) => r,
                None => break,
            },
            Err(e) => Message::Error { id: None, message: Some(e.to_string()) },
        };
        writeln!(output, "{}", reply.to_line())?;
        output.flush()?;
    }
    Ok(())
}

/// Serves `POST /embed` until a `bye` message arrives.
pub fn serve_http(embedder: &HashedEmbedder, server: &tiny_http::Server) -> Result<(), BaselineError> {
    let json = tiny_http::Header::from_bytes("Content-Type", "application/json").expect("static header");
    for mut req in server.incoming_requests() {
        if req.method() != &tiny_http::Method::Post || req.url() != "/embed" {
            req.respond(tiny_http::Response::from_string("not found").with_status_code(404))?;
            continue;
        }
        let mut body = String::new();
        let reply = match req.as_reader().read_to_string(&mut body).map_err(|e| e.to_string()).and_then(|_| {
            Message::from_line(&body).map_err(|e| e.to_string())
        }) {
            Ok(msg) => embedder.respond(msg),
            Err(e) => Some(Message::Error { id: None, message: Some(e) }),
        };
        let done = reply.is_none();
        let text = reply.unwrap_or(Message::Bye).to_line();
        req.respond(tiny_http::Response::from_string(text).with_header(json.clone()))?;
        if done {
            break;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tokens() -> HashedEmbedder {
        HashedEmbedder::new(HashedConfig::new(Features::Tokens, Language::Python)).unwrap()
    }

    #[test]
    fn counts_tokens() {
        let e = tokens();
        let v = e.embed("x = x + 1").unwrap();
        assert_eq!(v.iter().sum::<f64>(), 5.0);
        assert_eq!(v[e.bucket(b"x")], 2.0);
        assert_eq!(e.embed("a\nb").unwrap(), e.embed("b\na").unwrap());
        assert_eq!(e.embed(""), Err(EmbedError::ZeroVector));
    }

    #[test]
    fn bigrams_see_order() {
        let e = HashedEmbedder::new(HashedConfig::new(Features::Bigrams, Language::Python)).unwrap();
        assert_eq!(e.embed("x").unwrap_err(), EmbedError::ZeroVector);
        assert_ne!(e.embed("a = b").unwrap(), e.embed("b = a").unwrap());
        let v = e.embed("a = b").unwrap();
        assert_eq!(v.iter().sum::<f64>(), 2.0);
        assert_eq!(v[e.bucket(b"a\x1f=")], 1.0);
    }

    #[test]
    fn dims_floor() {
        let mut c = HashedConfig::new(Features::Tokens, Language::Java);
        c.dims = 63;
        assert!(matches!(HashedEmbedder::new(c), Err(BaselineError::DimsTooSmall(63))));
    }

    #[test]
    fn stdio_session() {
        let e = tokens();
        let input = concat!(
            r#"{"type":"embed","id":"1","text":"x = 1"}"#, "\n",
            r#"{"type":"embed","id":"2","text":""}"#, "\n",
            "garbage\n",
            r#"{"type":"bye"}"#, "\n",
            r#"{"type":"embed","id":"3","text":"never"}"#, "\n",
        );
        let mut out = Vec::new();
        serve_stdio(&e, input.as_bytes(), &mut out).unwrap();
        let lines: Vec<Message> = String::from_utf8(out).unwrap().lines().map(|l| Message::from_line(l).unwrap()).collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], Message::Hello { embedder_id: "bag-of-tokens-python-d4096-s0".into(), dims: 4096 });
        assert!(matches!(&lines[1], Message::Vector { id, values, .. } if id == "1" && values.len() == 4096));
        assert!(matches!(&lines[2], Message::Error { id: Some(id), .. } if id == "2"));
        assert!(matches!(&lines[3], Message::Error { id: None, .. }));
    }
}
