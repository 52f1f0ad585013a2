//! Fielded inverted index over dataset records with BM25 scoring.
//!
//! Statistics are kept per field: document count, document frequency and
//! average length are computed over the documents whose field analyzes to at
//! least one token. Documents are stored in id order, so the same corpus
//! produces an identical index regardless of input order.

mod analyzer;
mod bm25;
mod schema;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use analyzer::{stopwords, tokenize, Analyzer, Language};
pub use bm25::{idf, tf_weight, Bm25Params};
pub use schema::{Field, FieldFamily, FieldSchema, FieldSpec};

use crate::corpus::DatasetRecord;
use crate::query::{FieldedQuery, RankedList, ScoredDoc};
use crate::{Error, Result};

pub const INDEX_FORMAT: &str = "dsrec-index";
pub const INDEX_VERSION: u32 = 1;

/// Raw text values of `field` on a dataset record.
pub fn field_values(doc: &DatasetRecord, field: Field) -> Vec<&str> {
    fn opt(v: &Option<String>) -> Vec<&str> {
        v.as_deref().into_iter().collect()
    }
    fn list(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }
    match field {
        Field::Title => opt(&doc.title),
        Field::Abstract => opt(&doc.abstract_text),
        Field::Topic => list(&doc.topics),
        Field::TitleEn => opt(&doc.title_en),
        Field::TitleDe => opt(&doc.title_de),
        Field::AbstractEn => opt(&doc.abstract_en),
        Field::AbstractDe => opt(&doc.abstract_de),
        Field::TopicEn => list(&doc.topic_en),
        Field::TopicDe => list(&doc.topic_de),
        Field::ExtTopicDe => list(&doc.ext_topic_de),
        Field::ExtTopicEn => list(&doc.ext_topic_en),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Posting {
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldIndex {
    /// Term to postings, each list sorted by document ordinal.
    pub postings: BTreeMap<String, Vec<Posting>>,
    /// Token count per document ordinal (0 when the field is empty).
    pub lengths: Vec<u32>,
    pub doc_count: u32,
    pub total_length: u64,
}

impl FieldIndex {
    pub fn avg_length(&self) -> f64 {
        if self.doc_count == 0 {
            0.0
        } else {
            self.total_length as f64 / f64::from(self.doc_count)
        }
    }

    pub fn doc_freq(&self, term: &str) -> u32 {
        self.postings.get(term).map_or(0, |p| p.len() as u32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex {
    schema: FieldSchema,
    params: Bm25Params,
    docs: Vec<DatasetRecord>,
    ordinals: HashMap<String, u32>,
    fields: BTreeMap<Field, FieldIndex>,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    format: String,
    version: u32,
    schema: FieldSchema,
    params: Bm25Params,
    docs: Vec<DatasetRecord>,
    fields: BTreeMap<Field, FieldIndex>,
}

/// Builds an index; fails on duplicate document ids.
pub fn build_index(datasets: &[DatasetRecord], schema: &FieldSchema) -> Result<InvertedIndex> {
    InvertedIndex::build(datasets, schema.clone(), Bm25Params::default())
}

impl InvertedIndex {
    pub fn build(datasets: &[DatasetRecord], schema: FieldSchema, params: Bm25Params) -> Result<Self> {
        let mut docs: Vec<DatasetRecord> = datasets.to_vec();
        docs.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in docs.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateDocument(pair[0].id.clone()));
            }
        }
        if docs.len() > u32::MAX as usize {
            return Err(Error::Config("too many documents for one index".into()));
        }

        let mut fields = BTreeMap::new();
        for spec in schema.specs() {
            let mut fi = FieldIndex {
                lengths: vec![0; docs.len()],
                ..Default::default()
            };
            for (ord, doc) in docs.iter().enumerate() {
                let mut counts: BTreeMap<String, u32> = BTreeMap::new();
                let mut len = 0u32;
                for value in field_values(doc, spec.field) {
                    for token in spec.analyzer.analyze(value) {
                        *counts.entry(token).or_insert(0) += 1;
                        len += 1;
                    }
                }
                if len == 0 {
                    continue;
                }
                fi.lengths[ord] = len;
                fi.doc_count += 1;
                fi.total_length += u64::from(len);
                for (term, tf) in counts {
                    fi.postings
                        .entry(term)
                        .or_default()
                        .push(Posting { doc: ord as u32, tf });
                }
            }
            fields.insert(spec.field, fi);
        }

        let ordinals = docs.iter().enumerate().map(|(i, d)| (d.id.clone(), i as u32)).collect();
        Ok(InvertedIndex {
            schema,
            params,
            docs,
            ordinals,
            fields,
        })
    }

    pub fn schema(&self) -> &FieldSchema {
        &self.schema
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn set_params(&mut self, params: Bm25Params) {
        self.params = params;
    }

    /// Stored documents in id order.
    pub fn docs(&self) -> &[DatasetRecord] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn doc(&self, id: &str) -> Option<&DatasetRecord> {
        self.ordinals.get(id).map(|&o| &self.docs[o as usize])
    }

    pub fn field(&self, field: Field) -> Result<&FieldIndex> {
        self.fields
            .get(&field)
            .ok_or_else(|| Error::UnknownField(field.to_string()))
    }

    /// BM25 contribution of an already-analyzed `term` in `field` of `doc_id`.
    pub fn bm25_term_score(&self, field: Field, term: &str, doc_id: &str, params: Bm25Params) -> Result<f64> {
        let fi = self.field(field)?;
        let ord = *self
            .ordinals
            .get(doc_id)
            .ok_or_else(|| Error::UnknownDocument(doc_id.to_string()))?;
        let Some(postings) = fi.postings.get(term) else {
            return Ok(0.0);
        };
        let Ok(pos) = postings.binary_search_by_key(&ord, |p| p.doc) else {
            return Ok(0.0);
        };
        let idf = idf(fi.doc_count, postings.len() as u32);
        Ok(idf * tf_weight(postings[pos].tf, fi.lengths[ord as usize], fi.avg_length(), params))
    }

    pub fn search(&self, query: &FieldedQuery, top_k: usize) -> Result<RankedList> {
        self.search_with(query, top_k, self.params)
    }

    /// Scores every document as the boosted sum of per-clause BM25 sums and
    /// returns those with a positive score, best first, ties by id.
    pub fn search_with(&self, query: &FieldedQuery, top_k: usize, params: Bm25Params) -> Result<RankedList> {
        let fields: Vec<&FieldIndex> = query
            .clauses
            .iter()
            .map(|c| self.field(c.field))
            .collect::<Result<_>>()?;
        if top_k == 0 || self.docs.is_empty() {
            return Ok(RankedList::default());
        }

        let n = self.docs.len();
        let mut total = vec![0.0f64; n];
        let mut hit = vec![false; n];
        let mut hits: Vec<u32> = Vec::new();
        let mut clause_sum = vec![0.0f64; n];
        let mut clause_hits: Vec<u32> = Vec::new();

        for (clause, fi) in query.clauses.iter().zip(fields) {
            if clause.boost == 0.0 || fi.doc_count == 0 {
                continue;
            }
            let avg = fi.avg_length();
            for term in &clause.terms {
                let Some(postings) = fi.postings.get(term) else {
                    continue;
                };
                let idf = idf(fi.doc_count, postings.len() as u32);
                for p in postings {
                    let d = p.doc as usize;
                    if clause_sum[d] == 0.0 {
                        clause_hits.push(p.doc);
                    }
                    clause_sum[d] += idf * tf_weight(p.tf, fi.lengths[d], avg, params);
                }
            }
            for &d in &clause_hits {
                let d = d as usize;
                total[d] += clause.boost * clause_sum[d];
                clause_sum[d] = 0.0;
                if !hit[d] {
                    hit[d] = true;
                    hits.push(d as u32);
                }
            }
            clause_hits.clear();
        }

        let mut scored: Vec<(u32, f64)> = hits
            .into_iter()
            .map(|d| (d, total[d as usize]))
            .filter(|&(_, s)| s > 0.0)
            .collect();
        let order = |a: &(u32, f64), b: &(u32, f64)| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0));
        if scored.len() > top_k {
            scored.select_nth_unstable_by(top_k - 1, order);
            scored.truncate(top_k);
        }
        scored.sort_unstable_by(order);
        Ok(RankedList(
            scored
                .into_iter()
                .map(|(d, score)| ScoredDoc {
                    id: self.docs[d as usize].id.clone(),
                    score,
                })
                .collect(),
        ))
    }

    /// Checks the stored statistics against the postings.
    pub fn validate(&self) -> Result<()> {
        for (field, fi) in &self.fields {
            if fi.lengths.len() != self.docs.len() {
                return Err(Error::Format(format!("{field}: length table size mismatch")));
            }
            let mut sums = vec![0u64; self.docs.len()];
            for postings in fi.postings.values() {
                for w in postings.windows(2) {
                    if w[0].doc >= w[1].doc {
                        return Err(Error::Format(format!("{field}: postings out of order")));
                    }
                }
                for p in postings {
                    let slot = sums
                        .get_mut(p.doc as usize)
                        .ok_or_else(|| Error::Format(format!("{field}: posting for unknown document")))?;
                    *slot += u64::from(p.tf);
                }
            }
            if sums.iter().zip(&fi.lengths).any(|(s, &l)| *s != u64::from(l)) {
                return Err(Error::Format(format!("{field}: lengths disagree with postings")));
            }
            let count = fi.lengths.iter().filter(|&&l| l > 0).count() as u32;
            let total: u64 = fi.lengths.iter().map(|&l| u64::from(l)).sum();
            if count != fi.doc_count || total != fi.total_length {
                return Err(Error::Format(format!("{field}: stale field statistics")));
            }
        }
        if self.schema.fields().ne(self.fields.keys().copied()) {
            return Err(Error::Format("schema and stored fields differ".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = IndexFile {
            format: INDEX_FORMAT.to_string(),
            version: INDEX_VERSION,
            schema: self.schema.clone(),
            params: self.params,
            docs: self.docs.clone(),
            fields: self.fields.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: IndexFile = serde_json::from_str(text)?;
        if file.format != INDEX_FORMAT {
            return Err(Error::Format(format!("not an index file (format `{}`)", file.format)));
        }
        if file.version != INDEX_VERSION {
            return Err(Error::Format(format!(
                "unsupported index version {} (expected {INDEX_VERSION})",
                file.version
            )));
        }
        for pair in file.docs.windows(2) {
            if pair[0].id >= pair[1].id {
                return Err(Error::Format("documents not in id order".into()));
            }
        }
        let ordinals = file
            .docs
            .iter()
            .enumerate()
            .map(|(i, d)| (d.id.clone(), i as u32))
            .collect();
        let index = InvertedIndex {
            schema: file.schema,
            params: file.params,
            docs: file.docs,
            ordinals,
            fields: file.fields,
        };
        index.validate()?;
        Ok(index)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
