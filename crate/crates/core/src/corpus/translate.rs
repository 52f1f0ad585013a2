use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{RejectReason, Rejection, Translatable, TranslatableField};
use crate::index::Language;
use crate::{Error, Result};

/// One translated text for `(id, field)` in language `lang`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationEntry {
    pub id: String,
    pub field: TranslatableField,
    pub lang: Language,
    pub text: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TranslationTable {
    pub entries: Vec<TranslationEntry>,
}

#[derive(Deserialize)]
struct RawEntry {
    id: String,
    field: String,
    lang: String,
    text: String,
}

impl TranslationTable {
    /// Parses `{"id","field","lang","text"}` lines. Unknown fields or
    /// languages become rejections.
    pub fn parse(text: &str) -> (TranslationTable, Vec<Rejection>) {
        let mut entries = Vec::new();
        let mut rejections = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let line_no = i + 1;
            let raw: RawEntry = match serde_json::from_str(line) {
                Ok(r) => r,
                Err(e) => {
                    rejections.push(Rejection {
                        line: line_no,
                        reason: RejectReason::Malformed(e.to_string()),
                    });
                    continue;
                }
            };
            let field = match raw.field.as_str() {
                "title" => TranslatableField::Title,
                "abstract" => TranslatableField::Abstract,
                other => {
                    rejections.push(Rejection {
                        line: line_no,
                        reason: RejectReason::UnknownField(other.to_string()),
                    });
                    continue;
                }
            };
            let lang = match raw.lang.as_str() {
                "de" => Language::De,
                "en" => Language::En,
                other => {
                    rejections.push(Rejection {
                        line: line_no,
                        reason: RejectReason::Malformed(format!("unsupported language `{other}`")),
                    });
                    continue;
                }
            };
            if raw.id.trim().is_empty() {
                rejections.push(Rejection {
                    line: line_no,
                    reason: RejectReason::MissingId,
                });
                continue;
            }
            entries.push(TranslationEntry {
                id: raw.id,
                field,
                lang,
                text: raw.text,
            });
        }
        (TranslationTable { entries }, rejections)
    }

    pub fn load(path: &Path) -> Result<(TranslationTable, Vec<Rejection>)> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationSummary {
    pub applied: usize,
    pub already_present: usize,
    pub unknown_ids: usize,
}

/// Fills absent language-suffixed fields from `table`. Existing values are
/// never overwritten.
pub fn apply_translations<R: Translatable>(
    mut records: Vec<R>,
    table: &TranslationTable,
) -> (Vec<R>, TranslationSummary) {
    let positions: std::collections::HashMap<String, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id().to_string(), i))
        .collect();
    let mut summary = TranslationSummary::default();
    for entry in &table.entries {
        let Some(&pos) = positions.get(&entry.id) else {
            summary.unknown_ids += 1;
            continue;
        };
        let Some(slot) = records[pos].slot_mut(entry.field, entry.lang) else {
            continue;
        };
        if slot.as_deref().is_some_and(|s| !s.trim().is_empty()) {
            summary.already_present += 1;
        } else {
            *slot = Some(entry.text.clone());
            summary.applied += 1;
        }
    }
    (records, summary)
}
