//! Corpus ingestion and enrichment.
//!
//! Publications and datasets arrive as JSONL, one object per line. Lines that
//! fail to parse or validate are reported with their line number and never
//! silently dropped. Externally produced translations fill missing
//! language-suffixed title/abstract fields, and titles are scanned for
//! controlled-vocabulary topics that the record is missing.

mod records;
mod topics;
mod translate;

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use records::{DatasetRecord, PublicationRecord, Record, Translatable, TranslatableField};
pub use topics::{
    build_topic_vocabulary, expand_topics, expand_topics_with, guess_term_language, Assignment, ExpansionCounts,
    ExpansionReport, TopicVocabulary,
};
pub use translate::{apply_translations, TranslationEntry, TranslationSummary, TranslationTable};

use crate::par::Exec;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum RejectReason {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("missing id")]
    MissingId,
    #[error("no title in any language")]
    MissingTitle,
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
}

/// A rejected input line (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub line: usize,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded<T> {
    pub records: Vec<T>,
    pub rejections: Vec<Rejection>,
}

/// Parses JSONL text. Blank lines are skipped; the first occurrence of an id
/// wins and later ones are rejected.
pub fn parse_jsonl<T: Record>(text: &str, exec: Exec) -> Loaded<T> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();

    let parsed = exec.map(&lines, |&(_, line)| {
        serde_json::from_str::<T>(line)
            .map_err(|e| RejectReason::Malformed(e.to_string()))
            .and_then(|r| r.validate().map(|_| r))
    });

    let mut seen = HashSet::new();
    let mut records = Vec::with_capacity(parsed.len());
    let mut rejections = Vec::new();
    for ((line, _), result) in lines.iter().zip(parsed) {
        match result {
            Ok(record) => {
                if seen.insert(record.id().to_string()) {
                    records.push(record);
                } else {
                    rejections.push(Rejection {
                        line: *line,
                        reason: RejectReason::DuplicateId(record.id().to_string()),
                    });
                }
            }
            Err(reason) => rejections.push(Rejection { line: *line, reason }),
        }
    }
    Loaded { records, rejections }
}

pub fn load_jsonl<T: Record>(path: &Path) -> Result<Loaded<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_jsonl(&text, Exec::default()))
}

pub fn load_publications(path: &Path) -> Result<Loaded<PublicationRecord>> {
    load_jsonl(path)
}

pub fn load_datasets(path: &Path) -> Result<Loaded<DatasetRecord>> {
    load_jsonl(path)
}

pub fn to_jsonl<T: Serialize>(records: &[T]) -> Result<String> {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(to_jsonl(records)?.as_bytes())
        .map_err(|e| Error::io(path, e))
}
