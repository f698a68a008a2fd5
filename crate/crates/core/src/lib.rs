//! Construction and evaluation toolkit for logically-equivalent code
//! selection: corpus ingest, syntactic analysis, seeded perturbations,
//! benchmark assembly, next-token-prediction training data and embedder
//! evaluation.

pub mod analysis;
pub mod baselines;
pub mod benchmark;
pub mod corpus;
pub mod eval;
pub mod lang;
pub mod perturb;
pub mod seed;
pub mod traindata;

pub use corpus::{CodeUnit, CorpusError, IngestFilter};
pub use lang::Language;
