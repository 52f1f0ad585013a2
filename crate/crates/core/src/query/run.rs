use std::collections::{BTreeMap, HashSet};
use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredDoc {
    pub id: String,
    pub score: f64,
}

impl ScoredDoc {
    pub fn new(id: impl Into<String>, score: f64) -> Self {
        ScoredDoc { id: id.into(), score }
    }
}

/// Documents best first; rank `i + 1` for position `i`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankedList(pub Vec<ScoredDoc>);

impl RankedList {
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|d| d.id.as_str())
    }

    /// Sorts by score descending, then id ascending.
    pub fn sort_canonical(&mut self) {
        self.0
            .sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.id.cmp(&b.id)));
    }

    pub fn check(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for d in &self.0 {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::Format(format!("document `{}` ranked twice", d.id)));
            }
        }
        for w in self.0.windows(2) {
            if w[1].score > w[0].score {
                return Err(Error::Format(format!(
                    "scores increase from `{}` to `{}`",
                    w[0].id, w[1].id
                )));
            }
        }
        Ok(())
    }
}

impl Deref for RankedList {
    type Target = Vec<ScoredDoc>;

    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for RankedList {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl FromIterator<ScoredDoc> for RankedList {
    fn from_iter<I: IntoIterator<Item = ScoredDoc>>(iter: I) -> Self {
        RankedList(iter.into_iter().collect())
    }
}

/// Ranked lists keyed by query (seed publication) id.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Run {
    pub tag: String,
    pub lists: BTreeMap<String, RankedList>,
}

impl Run {
    pub fn new(tag: impl Into<String>) -> Self {
        Run {
            tag: tag.into(),
            lists: BTreeMap::new(),
        }
    }

    pub fn get(&self, qid: &str) -> Option<&RankedList> {
        self.lists.get(qid)
    }

    pub fn check(&self) -> Result<()> {
        for (qid, list) in &self.lists {
            list.check().map_err(|e| Error::Format(format!("query `{qid}`: {e}")))?;
        }
        Ok(())
    }
}
