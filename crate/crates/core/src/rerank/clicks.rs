use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One recorded click on a recommended dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClickEvent {
    pub session: String,
    pub qid: String,
    pub docid: String,
    /// 1-based position in the displayed ranking.
    pub position: u32,
    #[serde(default)]
    pub ts: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClickLog {
    events: Vec<ClickEvent>,
    by_query: HashMap<String, HashSet<String>>,
}

impl ClickLog {
    pub fn new(events: Vec<ClickEvent>) -> Result<Self> {
        let mut by_query: HashMap<String, HashSet<String>> = HashMap::new();
        for e in &events {
            if e.position == 0 {
                return Err(Error::Format(format!(
                    "click position must be >= 1 (session `{}`)",
                    e.session
                )));
            }
            if e.qid.is_empty() || e.docid.is_empty() || e.session.is_empty() {
                return Err(Error::Format(
                    "click events need non-empty session, qid and docid".into(),
                ));
            }
            by_query.entry(e.qid.clone()).or_default().insert(e.docid.clone());
        }
        Ok(ClickLog { events, by_query })
    }

    pub fn events(&self) -> &[ClickEvent] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Datasets clicked for a seed publication.
    pub fn clicked(&self, qid: &str) -> Option<&HashSet<String>> {
        self.by_query.get(qid)
    }

    /// Reads `{"session","qid","docid","position","ts"}` lines.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let e: ClickEvent = serde_json::from_str(line).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })?;
            events.push(e);
        }
        Self::new(events)
    }
}
