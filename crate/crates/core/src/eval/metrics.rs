//! Per-query ranking metrics with trec_eval conventions.
//!
//! Binary metrics treat a document as relevant when its gain is positive;
//! nDCG uses the raw gains with a `log2(rank + 1)` discount over the whole
//! ranking.

use super::Qrels;
use crate::query::ScoredDoc;

fn relevant_retrieved(ranking: &[ScoredDoc], qrels: &Qrels, q: &str, k: usize) -> usize {
    ranking.iter().take(k).filter(|d| qrels.is_relevant(q, &d.id)).count()
}

/// `None` when the query has no judgments.
pub fn precision_at_k(ranking: &[ScoredDoc], qrels: &Qrels, q: &str, k: usize) -> Option<f64> {
    if !qrels.contains_query(q) || k == 0 {
        return None;
    }
    Some(relevant_retrieved(ranking, qrels, q, k) as f64 / k as f64)
}

/// `None` when the query has no relevant documents.
pub fn recall_at_k(ranking: &[ScoredDoc], qrels: &Qrels, q: &str, k: usize) -> Option<f64> {
    let rel = qrels.relevant_count(q);
    if rel == 0 {
        return None;
    }
    Some(relevant_retrieved(ranking, qrels, q, k) as f64 / rel as f64)
}

/// `None` when the query has no relevant documents.
pub fn average_precision(ranking: &[ScoredDoc], qrels: &Qrels, q: &str) -> Option<f64> {
    let rel = qrels.relevant_count(q);
    if rel == 0 {
        return None;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, d) in ranking.iter().enumerate() {
        if qrels.is_relevant(q, &d.id) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    Some(sum / rel as f64)
}

/// `None` when the query has no judgments; `Some(0.0)` when the ideal DCG is 0.
pub fn ndcg(ranking: &[ScoredDoc], qrels: &Qrels, q: &str) -> Option<f64> {
    let judged = qrels.judged(q)?;
    let dcg: f64 = ranking
        .iter()
        .enumerate()
        .map(|(i, d)| judged.get(&d.id).copied().unwrap_or(0.0) / ((i + 2) as f64).log2())
        .sum();
    let mut gains: Vec<f64> = judged.values().copied().filter(|&g| g > 0.0).collect();
    gains.sort_by(|a, b| b.total_cmp(a));
    let idcg: f64 = gains.iter().enumerate().map(|(i, g)| g / ((i + 2) as f64).log2()).sum();
    if idcg == 0.0 {
        return Some(0.0);
    }
    Some(dcg / idcg)
}

/// Relevant documents anywhere in the ranking.
pub fn rel_ret(ranking: &[ScoredDoc], qrels: &Qrels, q: &str) -> usize {
    relevant_retrieved(ranking, qrels, q, usize::MAX)
}

/// `rel_ret` divided by the number of relevant documents.
pub fn rel_ret_fraction(ranking: &[ScoredDoc], qrels: &Qrels, q: &str) -> Option<f64> {
    let rel = qrels.relevant_count(q);
    if rel == 0 {
        return None;
    }
    Some(rel_ret(ranking, qrels, q) as f64 / rel as f64)
}
