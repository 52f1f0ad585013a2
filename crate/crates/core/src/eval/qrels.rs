use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Graded judgments keyed by query then document. A document is relevant
/// when its gain is positive.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Qrels {
    judgments: BTreeMap<String, BTreeMap<String, f64>>,
}

fn check_gain(gain: f64) -> Result<()> {
    if !gain.is_finite() || gain < 0.0 {
        return Err(Error::Format(format!("gain must be finite and >= 0, got {gain}")));
    }
    Ok(())
}

impl Qrels {
    /// Adds a judgment; duplicates and negative gains are errors.
    pub fn insert(&mut self, qid: &str, doc: &str, gain: f64) -> Result<()> {
        check_gain(gain)?;
        let judged = self.judgments.entry(qid.to_string()).or_default();
        if judged.contains_key(doc) {
            return Err(Error::Format(format!("duplicate judgment for ({qid}, {doc})")));
        }
        judged.insert(doc.to_string(), gain);
        Ok(())
    }

    /// Adds a judgment, keeping the larger gain on duplicates.
    pub fn insert_max(&mut self, qid: &str, doc: &str, gain: f64) -> Result<()> {
        check_gain(gain)?;
        let slot = self
            .judgments
            .entry(qid.to_string())
            .or_default()
            .entry(doc.to_string())
            .or_insert(gain);
        *slot = slot.max(gain);
        Ok(())
    }

    pub fn gain(&self, qid: &str, doc: &str) -> Option<f64> {
        self.judgments.get(qid)?.get(doc).copied()
    }

    pub fn judged(&self, qid: &str) -> Option<&BTreeMap<String, f64>> {
        self.judgments.get(qid)
    }

    pub fn contains_query(&self, qid: &str) -> bool {
        self.judgments.contains_key(qid)
    }

    pub fn is_relevant(&self, qid: &str, doc: &str) -> bool {
        self.gain(qid, doc).is_some_and(|g| g > 0.0)
    }

    pub fn relevant_count(&self, qid: &str) -> usize {
        self.judged(qid).map_or(0, |j| j.values().filter(|&&g| g > 0.0).count())
    }

    pub fn queries(&self) -> impl Iterator<Item = (&String, &BTreeMap<String, f64>)> {
        self.judgments.iter()
    }

    pub fn query_count(&self) -> usize {
        self.judgments.len()
    }

    pub fn len(&self) -> usize {
        self.judgments.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn remove_query(&mut self, qid: &str) {
        self.judgments.remove(qid);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: String,
    pub score: f64,
}

/// A head query and the live system's scored candidates for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateList {
    pub qid: String,
    pub candidates: Vec<Candidate>,
}

/// Reads `{"qid": .., "candidates": [{"id": .., "score": ..}, ..]}` lines.
pub fn load_candidates(path: &Path) -> Result<Vec<CandidateList>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoQrelsSummary {
    pub rejected_entries: usize,
    pub omitted_queries: usize,
}

/// Uses live-system scores directly as graded relevance.
pub fn build_pseudo_qrels(candidates: &[CandidateList]) -> (Qrels, PseudoQrelsSummary) {
    let mut qrels = Qrels::default();
    let mut summary = PseudoQrelsSummary::default();
    for list in candidates {
        let mut kept = 0;
        for c in &list.candidates {
            match qrels.insert_max(&list.qid, &c.id, c.score) {
                Ok(()) => kept += 1,
                Err(_) => summary.rejected_entries += 1,
            }
        }
        if kept == 0 {
            summary.omitted_queries += 1;
            qrels.remove_query(&list.qid);
        }
    }
    (qrels, summary)
}
