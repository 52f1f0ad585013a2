//! Research-dataset recommendation as fielded BM25 retrieval.
//!
//! Seed publications are turned into per-field queries against an inverted
//! index of dataset metadata. Baseline rankings are then re-ranked with click
//! feedback and embedding neighbours. Two evaluation paths ship alongside:
//! offline scoring against pseudo relevance judgments built from a live
//! system's candidate scores, and a seeded living-lab simulator that
//! interleaves two runs and credits clicks per session.
//!
//! Data-parallel loops (ingestion, batch precompute, per-query re-ranking,
//! per-query evaluation, session simulation) go through [`par::Exec`]. With
//! the default `parallel` feature they run on rayon; without it they run
//! sequentially and produce identical output.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod index;
pub mod lab;
pub mod par;
pub mod query;
pub mod rerank;
pub mod synth;
pub mod trec;

pub use error::{Error, Result};
