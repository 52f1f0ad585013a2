//! Independent reference implementations and random case generators shared
//! by the integration tests and the acceptance target.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use dsrec_core::corpus::{DatasetRecord, TopicVocabulary};
use dsrec_core::eval::Qrels;
use dsrec_core::index::{Analyzer, Bm25Params, Field, FieldSchema, Language};
use dsrec_core::query::{Clause, FieldedQuery, RankedList, Run, ScoredDoc};
use dsrec_core::rerank::EmbeddingStore;
use rand::seq::IndexedRandom;
use rand::Rng;

// ---------------------------------------------------------------- BM25

fn raw_values(d: &DatasetRecord, field: Field) -> Vec<String> {
    let o = |v: &Option<String>| v.iter().cloned().collect::<Vec<_>>();
    match field {
        Field::Title => o(&d.title),
        Field::TitleEn => o(&d.title_en),
        Field::TitleDe => o(&d.title_de),
        Field::Abstract => o(&d.abstract_text),
        Field::AbstractEn => o(&d.abstract_en),
        Field::AbstractDe => o(&d.abstract_de),
        Field::Topic => d.topics.clone(),
        Field::TopicEn => d.topic_en.clone(),
        Field::TopicDe => d.topic_de.clone(),
        Field::ExtTopicDe => d.ext_topic_de.clone(),
        Field::ExtTopicEn => d.ext_topic_en.clone(),
    }
}

pub struct FieldStats {
    pub tokens: Vec<Vec<String>>,
    pub doc_count: usize,
    pub avg_len: f64,
}

impl FieldStats {
    pub fn df(&self, term: &str) -> usize {
        self.tokens.iter().filter(|t| t.iter().any(|x| x == term)).count()
    }
}

pub fn field_stats(docs: &[DatasetRecord], field: Field, analyzer: &Analyzer) -> FieldStats {
    let tokens: Vec<Vec<String>> = docs
        .iter()
        .map(|d| raw_values(d, field).iter().flat_map(|v| analyzer.analyze(v)).collect())
        .collect();
    let non_empty: Vec<&Vec<String>> = tokens.iter().filter(|t| !t.is_empty()).collect();
    let doc_count = non_empty.len();
    let avg_len = if doc_count == 0 {
        0.0
    } else {
        non_empty.iter().map(|t| t.len()).sum::<usize>() as f64 / doc_count as f64
    };
    FieldStats {
        tokens,
        doc_count,
        avg_len,
    }
}

/// Scores every document by walking every clause and term against raw text.
pub fn brute_force_search(
    docs: &[DatasetRecord],
    schema: &FieldSchema,
    params: Bm25Params,
    query: &FieldedQuery,
    top_k: usize,
) -> Vec<(String, f64)> {
    let stats: Vec<FieldStats> = query
        .clauses
        .iter()
        .map(|c| field_stats(docs, c.field, schema.analyzer(c.field).expect("field in schema")))
        .collect();
    let mut scored = Vec::new();
    for (i, d) in docs.iter().enumerate() {
        let mut total = 0.0;
        for (clause, st) in query.clauses.iter().zip(&stats) {
            let toks = &st.tokens[i];
            let mut sum = 0.0;
            for term in &clause.terms {
                let tf = toks.iter().filter(|t| *t == term).count() as f64;
                if tf == 0.0 {
                    continue;
                }
                let n = st.doc_count as f64;
                let df = st.df(term) as f64;
                let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
                let norm = params.k1 * (1.0 - params.b + params.b * toks.len() as f64 / st.avg_len);
                sum += idf * tf * (params.k1 + 1.0) / (tf + norm);
            }
            total += clause.boost * sum;
        }
        if total > 0.0 {
            scored.push((d.id.clone(), total));
        }
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(top_k);
    scored
}

const WORDS: &[&str] = &[
    "wahl",
    "familie",
    "arbeit",
    "survey",
    "panel",
    "election",
    "youth",
    "income",
    "the",
    "und",
    "of",
    "die",
    "migration",
    "health",
    "bildung",
    "klima",
];

fn random_text<R: Rng>(rng: &mut R, max_words: usize) -> String {
    let n = rng.random_range(0..=max_words);
    (0..n)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

fn maybe_text<R: Rng>(rng: &mut R, max_words: usize) -> Option<String> {
    rng.random_bool(0.7).then(|| random_text(rng, max_words))
}

fn random_list<R: Rng>(rng: &mut R) -> Vec<String> {
    (0..rng.random_range(0..3)).map(|_| random_text(rng, 3)).collect()
}

/// Up to `max_docs` datasets. Some share identical content so that score ties
/// occur.
pub fn random_corpus<R: Rng>(rng: &mut R, max_docs: usize) -> Vec<DatasetRecord> {
    let n = rng.random_range(0..=max_docs);
    let mut docs: Vec<DatasetRecord> = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = if i > 0 && rng.random_bool(0.15) {
            docs[rng.random_range(0..i)].clone()
        } else {
            DatasetRecord {
                title: maybe_text(rng, 6),
                title_en: maybe_text(rng, 5),
                title_de: maybe_text(rng, 5),
                abstract_text: maybe_text(rng, 20),
                abstract_en: maybe_text(rng, 12),
                abstract_de: maybe_text(rng, 12),
                topics: random_list(rng),
                topic_en: random_list(rng),
                topic_de: random_list(rng),
                ext_topic_de: random_list(rng),
                ext_topic_en: random_list(rng),
                ..Default::default()
            }
        };
        d.id = format!("d{:02}", rng.random_range(0..1000) * 100 + i);
        docs.push(d);
    }
    docs
}

pub fn random_schema<R: Rng>(rng: &mut R, max_fields: usize) -> FieldSchema {
    let mut fields: Vec<Field> = Field::ALL.to_vec();
    use rand::seq::SliceRandom;
    fields.shuffle(rng);
    fields.truncate(rng.random_range(1..=max_fields));
    FieldSchema::for_fields(&fields, rng.random_bool(0.3))
}

pub fn random_query<R: Rng>(rng: &mut R, schema: &FieldSchema) -> FieldedQuery {
    let fields: Vec<Field> = schema.fields().collect();
    let clauses = (0..rng.random_range(0..=fields.len()))
        .map(|_| {
            let field = *fields.choose(rng).unwrap();
            let analyzer = schema.analyzer(field).unwrap();
            let terms = analyzer.analyze(&random_text(rng, 5));
            let boost = *[0.0, 0.3, 0.5, 1.0].choose(rng).unwrap();
            Clause { field, boost, terms }
        })
        .collect();
    FieldedQuery {
        publication_id: "q".into(),
        clauses,
    }
}

// ---------------------------------------------------------------- metrics

pub struct OracleMetrics {
    pub map: f64,
    pub ndcg: f64,
    pub p5: f64,
    pub p10: f64,
    pub r10: f64,
    pub rel_ret: f64,
}

/// Textbook definitions; `None` when the query has no relevant document.
pub fn oracle_metrics(ranking: &[String], judged: &BTreeMap<String, f64>) -> Option<OracleMetrics> {
    let relevant: HashSet<&str> = judged
        .iter()
        .filter(|(_, g)| **g > 0.0)
        .map(|(d, _)| d.as_str())
        .collect();
    if relevant.is_empty() {
        return None;
    }
    let is_rel: Vec<bool> = ranking.iter().map(|d| relevant.contains(d.as_str())).collect();
    let hits_at = |k: usize| is_rel.iter().take(k).filter(|r| **r).count() as f64;

    let mut ap = 0.0;
    for (i, r) in is_rel.iter().enumerate() {
        if *r {
            ap += hits_at(i + 1) / (i + 1) as f64;
        }
    }
    ap /= relevant.len() as f64;

    let dcg: f64 = ranking
        .iter()
        .enumerate()
        .map(|(i, d)| judged.get(d).copied().unwrap_or(0.0) / ((i + 2) as f64).log2())
        .sum();
    let mut ideal: Vec<f64> = judged.values().copied().filter(|g| *g > 0.0).collect();
    ideal.sort_by(|a, b| b.total_cmp(a));
    let idcg: f64 = ideal.iter().enumerate().map(|(i, g)| g / ((i + 2) as f64).log2()).sum();

    Some(OracleMetrics {
        map: ap,
        ndcg: if idcg > 0.0 { dcg / idcg } else { 0.0 },
        p5: hits_at(5) / 5.0,
        p10: hits_at(10) / 10.0,
        r10: hits_at(10) / relevant.len() as f64,
        rel_ret: hits_at(ranking.len()),
    })
}

/// A run and qrels over up to `max_queries` queries and `max_docs` documents.
pub fn random_run_and_qrels<R: Rng>(rng: &mut R, max_queries: usize, max_docs: usize) -> (Run, Qrels) {
    use rand::seq::SliceRandom;
    let ndocs = rng.random_range(1..=max_docs);
    let docs: Vec<String> = (0..ndocs).map(|i| format!("d{i}")).collect();
    let mut run = Run::new("r");
    let mut qrels = Qrels::default();
    for q in 0..rng.random_range(1..=max_queries) {
        let qid = format!("q{q}");
        let mut pool = docs.clone();
        pool.shuffle(rng);
        let len = rng.random_range(0..=pool.len());
        let mut list: RankedList = pool[..len]
            .iter()
            .enumerate()
            .map(|(i, d)| ScoredDoc::new(d.clone(), (len - i) as f64))
            .collect();
        list.sort_canonical();
        if rng.random_bool(0.9) {
            run.lists.insert(qid.clone(), list);
        }
        pool.shuffle(rng);
        if rng.random_bool(0.9) {
            for d in pool.iter().take(rng.random_range(0..=ndocs)) {
                let gain = *[0.0, 1.0, 2.0, 0.5, 3.25].choose(rng).unwrap();
                qrels.insert(&qid, d, gain).unwrap();
            }
        }
    }
    (run, qrels)
}

// ---------------------------------------------------------------- topics

fn padded_tokens(text: &str) -> String {
    let words: Vec<String> = text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| w.to_lowercase())
        .collect();
    format!(" {} ", words.join(" "))
}

fn oracle_titles(d: &DatasetRecord, lang: Language) -> Vec<String> {
    let suffixed = if lang == Language::De { &d.title_de } else { &d.title_en };
    let tag = d
        .language
        .as_deref()
        .map(Language::from_tag)
        .unwrap_or(Language::Neutral);
    let mut out: Vec<String> = suffixed.iter().cloned().collect();
    if let Some(t) = &d.title {
        if tag == lang || (tag == Language::Neutral && suffixed.is_none()) {
            out.push(t.clone());
        }
    }
    out
}

/// Checks every (dataset, term) pair by word-bounded substring search.
/// Returns sorted `(dataset, lang, term)` triples.
pub fn expansion_oracle(datasets: &[DatasetRecord], vocab: &TopicVocabulary) -> Vec<(String, Language, String)> {
    let mut out = Vec::new();
    for d in datasets {
        let existing: HashSet<String> = d
            .topics
            .iter()
            .chain(&d.topic_de)
            .chain(&d.topic_en)
            .map(|t| t.trim().to_lowercase())
            .collect();
        for lang in [Language::De, Language::En] {
            let ext = if lang == Language::De {
                &d.ext_topic_de
            } else {
                &d.ext_topic_en
            };
            let mut taken: HashSet<String> = ext.iter().map(|t| t.trim().to_lowercase()).collect();
            let haystacks: Vec<String> = oracle_titles(d, lang).iter().map(|t| padded_tokens(t)).collect();
            for term in vocab.terms(lang) {
                let needle = padded_tokens(term);
                if needle.trim().is_empty() {
                    continue;
                }
                if !haystacks.iter().any(|h| h.contains(&needle)) {
                    continue;
                }
                let key = term.trim().to_lowercase();
                if existing.contains(&key) || !taken.insert(key) {
                    continue;
                }
                out.push((d.id.clone(), lang, term.clone()));
            }
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------- kNN

pub fn knn_oracle(store: &EmbeddingStore, seed: &str, k: usize, candidates: &[&str]) -> Vec<String> {
    let s = store.get(seed).unwrap();
    let mut seen = HashSet::new();
    let mut all: Vec<(f64, String)> = Vec::new();
    for c in candidates {
        let Some(v) = store.get(c) else { continue };
        if !seen.insert(*c) {
            continue;
        }
        let d = s.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        all.push((d, c.to_string()));
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    all.into_iter().take(k).map(|(_, c)| c).collect()
}
