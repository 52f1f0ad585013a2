//! Offline evaluation against pseudo test collections.

mod metrics;
mod qrels;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use metrics::{average_precision, ndcg, precision_at_k, recall_at_k, rel_ret, rel_ret_fraction};
pub use qrels::{build_pseudo_qrels, load_candidates, Candidate, CandidateList, PseudoQrelsSummary, Qrels};

use crate::par::Exec;
use crate::query::{RankedList, Run};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub map: f64,
    pub ndcg: f64,
    #[serde(rename = "P@5")]
    pub p5: f64,
    #[serde(rename = "P@10")]
    pub p10: f64,
    #[serde(rename = "R@10")]
    pub r10: f64,
    pub rel_ret: f64,
    pub rel_ret_frac: f64,
}

impl Metrics {
    fn as_array(&self) -> [f64; 7] {
        [
            self.map,
            self.ndcg,
            self.p5,
            self.p10,
            self.r10,
            self.rel_ret,
            self.rel_ret_frac,
        ]
    }

    /// Per-query metrics; `None` when the query has no relevant document.
    pub fn for_query(ranking: &RankedList, qrels: &Qrels, q: &str) -> Option<Metrics> {
        Some(Metrics {
            map: average_precision(ranking, qrels, q)?,
            ndcg: ndcg(ranking, qrels, q)?,
            p5: precision_at_k(ranking, qrels, q, 5)?,
            p10: precision_at_k(ranking, qrels, q, 10)?,
            r10: recall_at_k(ranking, qrels, q, 10)?,
            rel_ret: rel_ret(ranking, qrels, q) as f64,
            rel_ret_frac: rel_ret_fraction(ranking, qrels, q)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub query_count: usize,
    pub mean: Metrics,
    pub queries: BTreeMap<String, Metrics>,
}

pub fn evaluate_run(run: &Run, qrels: &Qrels) -> Result<MetricReport> {
    evaluate_run_with(run, qrels, Exec::default())
}

/// Evaluates every run query that has at least one relevant judgment; means
/// are arithmetic over those queries.
pub fn evaluate_run_with(run: &Run, qrels: &Qrels, exec: Exec) -> Result<MetricReport> {
    let lists: Vec<(&String, &RankedList)> = run.lists.iter().collect();
    let rows = exec.map(&lists, |(qid, list)| {
        Metrics::for_query(list, qrels, qid).map(|m| ((*qid).clone(), m))
    });
    let queries: BTreeMap<String, Metrics> = rows.into_iter().flatten().collect();
    if queries.is_empty() {
        return Err(Error::NoOverlappingQueries);
    }
    let n = queries.len() as f64;
    let mut sums = [0.0f64; 7];
    for m in queries.values() {
        for (s, v) in sums.iter_mut().zip(m.as_array()) {
            *s += v;
        }
    }
    let [map, ndcg, p5, p10, r10, rel_ret, rel_ret_frac] = sums.map(|s| s / n);
    Ok(MetricReport {
        query_count: queries.len(),
        mean: Metrics {
            map,
            ndcg,
            p5,
            p10,
            r10,
            rel_ret,
            rel_ret_frac,
        },
        queries,
    })
}

const HEADERS: [&str; 7] = ["map", "nDCG", "P@5", "P@10", "R@10", "rel_ret", "rel_ret_frac"];

fn render_table(label_header: &str, rows: &[(String, [String; 7])]) -> String {
    let label_width = rows
        .iter()
        .map(|r| r.0.len())
        .chain([label_header.len()])
        .max()
        .unwrap_or(0);
    let mut widths = HEADERS.map(str::len);
    for (_, cells) in rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let _ = write!(out, "{label_header:<label_width$}");
    for (h, w) in HEADERS.iter().zip(widths) {
        let _ = write!(out, "  {h:>w$}");
    }
    out.push('\n');
    for (label, cells) in rows {
        let _ = write!(out, "{label:<label_width$}");
        for (c, w) in cells.iter().zip(widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
    }
    out
}

fn cells(m: &Metrics, integer_rel_ret: bool) -> [String; 7] {
    let rel_ret = if integer_rel_ret {
        format!("{}", m.rel_ret as u64)
    } else {
        format!("{:.4}", m.rel_ret)
    };
    [
        format!("{:.4}", m.map),
        format!("{:.4}", m.ndcg),
        format!("{:.4}", m.p5),
        format!("{:.4}", m.p10),
        format!("{:.4}", m.r10),
        rel_ret,
        format!("{:.4}", m.rel_ret_frac),
    ]
}

impl MetricReport {
    /// Aligned text table: one row per query, then the `all` row of means.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<(String, [String; 7])> =
            self.queries.iter().map(|(q, m)| (q.clone(), cells(m, true))).collect();
        rows.push(("all".to_string(), cells(&self.mean, false)));
        render_table("qid", &rows)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Side-by-side table of mean metrics, one row per labelled report.
pub fn format_comparison(reports: &[(String, &MetricReport)]) -> String {
    let rows: Vec<(String, [String; 7])> = reports
        .iter()
        .map(|(label, r)| (label.clone(), cells(&r.mean, false)))
        .collect();
    render_table("run", &rows)
}
