//! Boost-based re-ranking on top of baseline rankings.
//!
//! Two additive boosts are applied per query, clicks first: datasets clicked
//! for the same seed publication in an earlier round, then the ranked
//! datasets nearest to the seed in embedding space. Neither step adds or
//! removes documents.

mod clicks;
mod embedding;

use serde::{Deserialize, Serialize};

pub use clicks::{ClickEvent, ClickLog};
pub use embedding::{euclidean_distance, hash_embedding, knn_neighbors, EmbeddingStore};

use crate::par::Exec;
use crate::query::{RankedList, Run};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RerankConfig {
    pub click_boost: f64,
    pub embedding_boost: f64,
    pub neighbors: usize,
}

impl Default for RerankConfig {
    fn default() -> Self {
        RerankConfig {
            click_boost: 1000.0,
            embedding_boost: 500.0,
            neighbors: 1,
        }
    }
}

impl RerankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.embedding_boost.is_finite() && self.embedding_boost > 0.0) {
            return Err(Error::Config("embedding boost must be positive".into()));
        }
        if !(self.click_boost.is_finite() && self.click_boost > self.embedding_boost) {
            return Err(Error::Config("click boost must exceed the embedding boost".into()));
        }
        if self.neighbors == 0 {
            return Err(Error::Config("neighbour count must be at least 1".into()));
        }
        Ok(())
    }
}

/// A re-ranked list and the documents that received the boost.
#[derive(Debug, Clone, PartialEq)]
pub struct Boosted {
    pub ranking: RankedList,
    pub boosted: Vec<String>,
    pub seed_missing: bool,
}

fn apply_boost(ranking: &RankedList, hits: &[String], boost: f64) -> RankedList {
    let mut out = ranking.clone();
    if hits.is_empty() {
        return out;
    }
    for d in out.iter_mut() {
        if hits.contains(&d.id) {
            d.score += boost;
        }
    }
    out.sort_canonical();
    out
}

/// Adds `click_boost` to every ranked document clicked for `query_id`.
pub fn click_boost(ranking: &RankedList, clicks: &ClickLog, query_id: &str, config: &RerankConfig) -> Boosted {
    let hits: Vec<String> = match clicks.clicked(query_id) {
        Some(set) => ranking
            .ids()
            .filter(|id| set.contains(*id))
            .map(str::to_string)
            .collect(),
        None => Vec::new(),
    };
    Boosted {
        ranking: apply_boost(ranking, &hits, config.click_boost),
        boosted: hits,
        seed_missing: false,
    }
}

/// Adds `embedding_boost` to the ranked documents nearest to the seed.
pub fn embedding_boost(ranking: &RankedList, store: &EmbeddingStore, seed_id: &str, config: &RerankConfig) -> Boosted {
    if !store.contains(seed_id) {
        return Boosted {
            ranking: ranking.clone(),
            boosted: Vec::new(),
            seed_missing: true,
        };
    }
    let candidates: Vec<&str> = ranking.ids().collect();
    let hits = knn_neighbors(store, seed_id, config.neighbors, &candidates).expect("seed presence checked above");
    Boosted {
        ranking: apply_boost(ranking, &hits, config.embedding_boost),
        boosted: hits,
        seed_missing: false,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RerankSummary {
    pub queries: usize,
    pub click_boosted: usize,
    pub embedding_boosted: usize,
    pub missing_seeds: usize,
}

pub fn rerank_pipeline(
    run: &Run,
    clicks: &ClickLog,
    store: &EmbeddingStore,
    config: &RerankConfig,
) -> Result<(Run, RerankSummary)> {
    rerank_pipeline_with(run, clicks, store, config, Exec::default())
}

/// Click boost, then embedding boost, once each per query.
pub fn rerank_pipeline_with(
    run: &Run,
    clicks: &ClickLog,
    store: &EmbeddingStore,
    config: &RerankConfig,
    exec: Exec,
) -> Result<(Run, RerankSummary)> {
    config.validate()?;
    let lists: Vec<(&String, &RankedList)> = run.lists.iter().collect();
    let results = exec.map(&lists, |(qid, list)| {
        let first = click_boost(list, clicks, qid, config);
        let second = embedding_boost(&first.ranking, store, qid, config);
        ((*qid).clone(), first, second)
    });

    let mut out = Run::new(run.tag.clone());
    let mut summary = RerankSummary::default();
    for (qid, first, second) in results {
        summary.queries += 1;
        summary.click_boosted += first.boosted.len();
        summary.embedding_boosted += second.boosted.len();
        summary.missing_seeds += usize::from(second.seed_missing);
        out.lists.insert(qid, second.ranking);
    }
    Ok((out, summary))
}
