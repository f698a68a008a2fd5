//! Embedder interface and the line-delimited JSON wire protocol spoken by
//! out-of-process embedders, over child-process stdio or HTTP.

use std::collections::HashMap;
use std::io::{self, BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmbedError {
    #[error("embedder returned a zero vector")]
    ZeroVector,
    #[error("vector has {got} values, embedder declared {expected}")]
    DimsMismatch { expected: usize, got: usize },
    #[error("vector contains a non-finite value")]
    NonFinite,
    #[error("embedder rejected item: {0}")]
    Rejected(String),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("embedder I/O failure: {0}")]
    Io(String),
    #[error("embedder timed out after {0:?}")]
    Timeout(Duration),
}

/// One protocol message. Every line on the wire is exactly one of these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Message {
    /// Sent by the embedder on startup. Over HTTP the client opens with an
    /// empty hello and the server answers with its own.
    Hello {
        #[serde(default)]
        embedder_id: String,
        #[serde(default)]
        dims: usize,
    },
    Embed {
        id: String,
        text: String,
    },
    Vector {
        id: String,
        values: Vec<f64>,
        /// Set by embedders that cut the input to fit their context.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        truncated: bool,
    },
    Error {
        #[serde(default)]
        id: Option<String>,
        #[serde(default)]
        message: Option<String>,
    },
    Bye,
}

impl Message {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("messages always serialize")
    }

    pub fn from_line(line: &str) -> Result<Message, EmbedError> {
        serde_json::from_str(line.trim()).map_err(|e| EmbedError::Protocol(format!("bad message `{}`: {e}", line.trim())))
    }
}

/// Checks a returned vector against the declared dimensionality.
pub fn validate_vector(values: &[f64], dims: usize) -> Result<(), EmbedError> {
    if values.len() != dims {
        return Err(EmbedError::DimsMismatch { expected: dims, got: values.len() });
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(EmbedError::NonFinite);
    }
    if values.iter().all(|&v| v == 0.0) {
        return Err(EmbedError::ZeroVector);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub values: Vec<f64>,
    pub truncated: bool,
}

pub trait Embedder {
    fn embedder_id(&self) -> &str;
    fn dims(&self) -> usize;
    /// One result per text, in input order.
    fn embed_many(&mut self, texts: &[&str]) -> Vec<Result<Embedding, EmbedError>>;
}

/// Embedder running as a child process, speaking the protocol on stdio.
/// Requests are pipelined; responses may come back in any order.
pub struct ProcessEmbedder {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<io::Result<String>>,
    embedder_id: String,
    dims: usize,
    timeout: Duration,
    next_id: u64,
}

impl ProcessEmbedder {
    /// Spawns `command` (split with shell-word rules) and waits for its hello.
    pub fn spawn(command: &str, timeout: Duration) -> Result<Self, EmbedError> {
        let argv = shlex::split(command).filter(|a| !a.is_empty()).ok_or_else(|| EmbedError::Protocol(format!("cannot split command `{command}`")))?;
        let mut child = Command::new(&argv[0])
            .args(&argv[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| EmbedError::Io(format!("spawn `{}`: {e}", argv[0])))?;
        let stdout = child.stdout.take().expect("stdout piped");
        let stdin = child.stdin.take();
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let stop = line.is_err();
                if tx.send(line).is_err() || stop {
                    break;
                }
            }
        });
        let mut this = ProcessEmbedder { child, stdin, lines: rx, embedder_id: String::new(), dims: 0, timeout, next_id: 0 };
        match this.recv(Instant::now() + timeout)? {
            Message::Hello { embedder_id, dims } if dims > 0 => {
                this.embedder_id = embedder_id;
                this.dims = dims;
                Ok(this)
            }
            other => Err(EmbedError::Protocol(format!("expected hello, got {}", other.to_line()))),
        }
    }

    fn recv(&self, deadline: Instant) -> Result<Message, EmbedError> {
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            match self.lines.recv_timeout(left) {
                Ok(Ok(line)) if line.trim().is_empty() => continue,
                Ok(Ok(line)) => return Message::from_line(&line),
                Ok(Err(e)) => return Err(EmbedError::Io(e.to_string())),
                Err(RecvTimeoutError::Timeout) => return Err(EmbedError::Timeout(self.timeout)),
                Err(RecvTimeoutError::Disconnected) => return Err(EmbedError::Io("embedder closed its output".into())),
            }
        }
    }
}

impl Embedder for ProcessEmbedder {
    fn embedder_id(&self) -> &str {
        &self.embedder_id
    }

    fn dims(&self) -> usize {
        self.dims
    }

    fn embed_many(&mut self, texts: &[&str]) -> Vec<Result<Embedding, EmbedError>> {
        let mut results: Vec<Option<Result<Embedding, EmbedError>>> = vec![None; texts.len()];
        let mut pending: HashMap<String, usize> = HashMap::with_capacity(texts.len());
        let requests: Vec<String> = texts
            .iter()
            .enumerate()
            .map(|(i, text)| {
                let id = format!("r{}", self.next_id + i as u64);
                pending.insert(id.clone(), i);
                let mut line = Message::Embed { id, text: text.to_string() }.to_line();
                line.push('\n');
                line
            })
            .collect();
        self.next_id += texts.len() as u64;

        let Some(stdin) = self.stdin.as_mut() else {
            return texts.iter().map(|_| Err(EmbedError::Io("embedder stdin closed".into()))).collect();
        };
        let dims = self.dims;
        let lines = &self.lines;
        let timeout = self.timeout;
        thread::scope(|s| {
            // writer runs alongside the reader so a full pipe cannot deadlock
            let writer = s.spawn(move || -> io::Result<()> {
                for r in &requests {
                    stdin.write_all(r.as_bytes())?;
                }
                stdin.flush()
            });
            let mut fatal = None;
            while !pending.is_empty() {
                let msg = match lines.recv_timeout(timeout) {
                    Ok(Ok(line)) if line.trim().is_empty() => continue,
                    Ok(Ok(line)) => Message::from_line(&line),
                    Ok(Err(e)) => Err(EmbedError::Io(e.to_string())),
                    Err(RecvTimeoutError::Timeout) => Err(EmbedError::Timeout(timeout)),
                    Err(RecvTimeoutError::Disconnected) => Err(EmbedError::Io("embedder closed its output".into())),
                };
                match msg {
                    Ok(Message::Vector { id, values, truncated }) => match pending.remove(&id) {
                        Some(i) => results[i] = Some(validate_vector(&values, dims).map(|_| Embedding { values, truncated })),
                        None => {
                            fatal = Some(EmbedError::Protocol(format!("vector for unknown id `{id}`")));
                            break;
                        }
                    },
                    Ok(Message::Error { id: Some(id), message }) if pending.contains_key(&id) => {
                        let i = pending.remove(&id).unwrap();
                        results[i] = Some(Err(EmbedError::Rejected(message.unwrap_or_default())));
                    }
                    Ok(other) => {
                        fatal = Some(EmbedError::Protocol(format!("unexpected message {}", other.to_line())));
                        break;
                    }
                    Err(e) => {
                        fatal = Some(e);
                        break;
                    }
                }
            }
            if let Ok(Err(e)) = writer.join() {
                fatal.get_or_insert(EmbedError::Io(e.to_string()));
            }
            if let Some(err) = fatal {
                for r in results.iter_mut().filter(|r| r.is_none()) {
                    *r = Some(Err(err.clone()));
                }
            }
        });
        results.into_iter().map(|r| r.expect("every slot filled")).collect()
    }
}

impl Drop for ProcessEmbedder {
    fn drop(&mut self) {
        if let Some(mut stdin) = self.stdin.take() {
            let _ = writeln!(stdin, "{}", Message::Bye.to_line());
        }
        let deadline = Instant::now() + Duration::from_secs(2);
        while Instant::now() < deadline {
            if let Ok(Some(_)) = self.child.try_wait() {
                return;
            }
            thread::sleep(Duration::from_millis(10));
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Embedder behind an HTTP endpoint accepting protocol messages at `POST /embed`.
pub struct HttpEmbedder {
    agent: ureq::Agent,
    url: String,
    embedder_id: String,
    dims: usize,
}

impl HttpEmbedder {
    /// `base` is e.g. `http://127.0.0.1:8080`; `/embed` is appended.
    pub fn connect(base: &str, timeout: Duration) -> Result<Self, EmbedError> {
        let agent: ureq::Agent = ureq::Agent::config_builder().timeout_global(Some(timeout)).build().into();
        let url = format!("{}/embed", base.trim_end_matches('/'));
        let mut this = HttpEmbedder { agent, url, embedder_id: String::new(), dims: 0 };
        match this.exchange(&Message::Hello { embedder_id: String::new(), dims: 0 })? {
            Message::Hello { embedder_id, dims } if dims > 0 => {
                this.embedder_id = embedder_id;
                this.dims = dims;
                Ok(this)
            }
            other => Err(EmbedError::Protocol(format!("expected hello, got {}", other.to_line()))),
        }
    }

    fn exchange(&self, msg: &Message) -> Result<Message, EmbedError> {
        let mut resp = self
            .agent
            .post(&self.url)
            .header("content-type", "application/json")
            .send(msg.to_line())
            .map_err(|e| match e {
                ureq::Error::Timeout(_) => EmbedError::Timeout(Duration::ZERO),
                other => EmbedError::Io(other.to_string()),
            })?;
        let body = resp.body_mut().read_to_string().map_err(|e| EmbedError::Io(e.to_string()))?;
        Message::from_line(&body)
    }
}

impl Embedder for HttpEmbedder {
    fn embedder_id(&self) -> &str {
        &self.embedder_id
    }

    fn dims(&self) -> usize {
        self.dims
    }

    fn embed_many(&mut self, texts: &[&str]) -> Vec<Result<Embedding, EmbedError>> {
        texts
            .iter()
            .enumerate()
            .map(|(i, text)| {
                let id = format!("r{i}");
                match self.exchange(&Message::Embed { id: id.clone(), text: text.to_string() })? {
                    Message::Vector { id: got, values, truncated } if got == id => {
                        validate_vector(&values, self.dims)?;
                        Ok(Embedding { values, truncated })
                    }
                    Message::Error { message, .. } => Err(EmbedError::Rejected(message.unwrap_or_default())),
                    other => Err(EmbedError::Protocol(format!("unexpected message {}", other.to_line()))),
                }
            })
            .collect()
    }
}
