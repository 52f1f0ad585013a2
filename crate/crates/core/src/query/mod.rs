//! Dynamic fielded queries and batch precomputation of recommendation runs.

mod run;

use serde::{Deserialize, Serialize};

pub use run::{RankedList, Run, ScoredDoc};

use crate::corpus::PublicationRecord;
use crate::index::{Analyzer, Field, FieldFamily, InvertedIndex};
use crate::par::Exec;
use crate::{Error, Result};

/// Publication fields that can feed a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceField {
    Title,
    TitleEn,
    TitleDe,
    Abstract,
    AbstractEn,
    AbstractDe,
    Topic,
}

impl SourceField {
    pub fn family(self) -> FieldFamily {
        match self {
            SourceField::Title | SourceField::TitleEn | SourceField::TitleDe => FieldFamily::Title,
            SourceField::Abstract | SourceField::AbstractEn | SourceField::AbstractDe => FieldFamily::Abstract,
            SourceField::Topic => FieldFamily::Topic,
        }
    }

    fn text(self, p: &PublicationRecord) -> Option<&str> {
        let v = match self {
            SourceField::Title => &p.title,
            SourceField::TitleEn => &p.title_en,
            SourceField::TitleDe => &p.title_de,
            SourceField::Abstract => &p.abstract_text,
            SourceField::AbstractEn => &p.abstract_en,
            SourceField::AbstractDe => &p.abstract_de,
            SourceField::Topic => return None,
        };
        v.as_deref().filter(|s| !s.trim().is_empty())
    }
}

/// Per-target-field boosts, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Boosts {
    pub title: f64,
    #[serde(rename = "abstract")]
    pub abstract_: f64,
    pub topic: f64,
    pub title_en: f64,
    pub title_de: f64,
    pub abstract_en: f64,
    pub abstract_de: f64,
    pub topic_en: f64,
    pub topic_de: f64,
    pub ext_topic_de: f64,
    pub ext_topic_en: f64,
}

impl Boosts {
    pub fn uniform(title: f64, abstract_: f64, topic: f64) -> Self {
        let mut b = Boosts::zero();
        b.set_family(FieldFamily::Title, title);
        b.set_family(FieldFamily::Abstract, abstract_);
        b.set_family(FieldFamily::Topic, topic);
        b
    }

    pub fn zero() -> Self {
        Boosts {
            title: 0.0,
            abstract_: 0.0,
            topic: 0.0,
            title_en: 0.0,
            title_de: 0.0,
            abstract_en: 0.0,
            abstract_de: 0.0,
            topic_en: 0.0,
            topic_de: 0.0,
            ext_topic_de: 0.0,
            ext_topic_en: 0.0,
        }
    }

    fn slot(&mut self, field: Field) -> &mut f64 {
        match field {
            Field::Title => &mut self.title,
            Field::Abstract => &mut self.abstract_,
            Field::Topic => &mut self.topic,
            Field::TitleEn => &mut self.title_en,
            Field::TitleDe => &mut self.title_de,
            Field::AbstractEn => &mut self.abstract_en,
            Field::AbstractDe => &mut self.abstract_de,
            Field::TopicEn => &mut self.topic_en,
            Field::TopicDe => &mut self.topic_de,
            Field::ExtTopicDe => &mut self.ext_topic_de,
            Field::ExtTopicEn => &mut self.ext_topic_en,
        }
    }

    pub fn get(&self, field: Field) -> f64 {
        let mut copy = *self;
        *copy.slot(field)
    }

    pub fn set(&mut self, field: Field, boost: f64) {
        *self.slot(field) = boost;
    }

    pub fn set_family(&mut self, family: FieldFamily, boost: f64) {
        for f in Field::ALL.into_iter().filter(|f| f.family() == family) {
            self.set(f, boost);
        }
    }
}

impl Default for Boosts {
    fn default() -> Self {
        Boosts::uniform(1.0, 1.0, 0.3)
    }
}

/// How topic-family clauses get their text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicComposition {
    /// Title, abstract and topics of the publication, concatenated.
    #[default]
    Concatenate,
    TopicsOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QueryConfig {
    pub sources: Vec<SourceField>,
    pub boosts: Boosts,
    pub topic_composition: TopicComposition,
    /// Must match the stemming setting the index was built with.
    pub stemming: bool,
}

impl Default for QueryConfig {
    fn default() -> Self {
        QueryConfig {
            sources: vec![SourceField::Title, SourceField::TitleEn, SourceField::Topic],
            boosts: Boosts::default(),
            topic_composition: TopicComposition::default(),
            stemming: false,
        }
    }
}

impl QueryConfig {
    pub fn validate(&self) -> Result<()> {
        let mut any = false;
        for f in Field::ALL {
            let b = self.boosts.get(f);
            if !(0.0..=1.0).contains(&b) {
                return Err(Error::Config(format!("boost for `{f}` must lie in [0, 1], got {b}")));
            }
            any |= b > 0.0;
        }
        if !any {
            return Err(Error::Config("at least one field boost must be positive".into()));
        }
        Ok(())
    }

    pub fn analyzer(&self, field: Field) -> Analyzer {
        Analyzer::new(field.language()).with_stemming(self.stemming)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub field: Field,
    pub boost: f64,
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldedQuery {
    pub publication_id: String,
    pub clauses: Vec<Clause>,
}

impl FieldedQuery {
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

fn topic_texts(p: &PublicationRecord, composition: TopicComposition) -> Vec<&str> {
    if p.topics.iter().all(|t| t.trim().is_empty()) {
        return Vec::new();
    }
    let mut texts = Vec::new();
    if composition == TopicComposition::Concatenate {
        texts.extend(p.title.as_deref());
        texts.extend(p.abstract_text.as_deref());
    }
    texts.extend(p.topics.iter().map(String::as_str));
    texts
}

/// Builds one clause per positively boosted target field whose family has a
/// configured source present on the publication. Terms are analyzed with the
/// target field's analyzer and deduplicated in first-seen order.
pub fn build_query(publication: &PublicationRecord, config: &QueryConfig) -> FieldedQuery {
    let mut clauses = Vec::new();
    for target in Field::ALL {
        let boost = config.boosts.get(target);
        if boost <= 0.0 {
            continue;
        }
        let family = target.family();
        let texts: Vec<&str> = if family == FieldFamily::Topic {
            if config.sources.contains(&SourceField::Topic) {
                topic_texts(publication, config.topic_composition)
            } else {
                Vec::new()
            }
        } else {
            config
                .sources
                .iter()
                .filter(|s| s.family() == family)
                .filter_map(|s| s.text(publication))
                .collect()
        };
        if texts.is_empty() {
            continue;
        }
        let analyzer = config.analyzer(target);
        let mut terms: Vec<String> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for text in texts {
            for t in analyzer.analyze(text) {
                if seen.insert(t.clone()) {
                    terms.push(t);
                }
            }
        }
        if !terms.is_empty() {
            clauses.push(Clause {
                field: target,
                boost,
                terms,
            });
        }
    }
    FieldedQuery {
        publication_id: publication.id.clone(),
        clauses,
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecomputeSummary {
    pub queries: usize,
    pub empty_queries: usize,
    pub empty_rankings: usize,
}

pub fn precompute_all(
    index: &InvertedIndex,
    publications: &[PublicationRecord],
    config: &QueryConfig,
    top_k: usize,
) -> Result<(Run, PrecomputeSummary)> {
    precompute_all_with(index, publications, config, top_k, Exec::default())
}

/// One ranked list per publication. Clauses on fields missing from the index
/// schema are dropped.
pub fn precompute_all_with(
    index: &InvertedIndex,
    publications: &[PublicationRecord],
    config: &QueryConfig,
    top_k: usize,
    exec: Exec,
) -> Result<(Run, PrecomputeSummary)> {
    if top_k == 0 {
        return Err(Error::Config("top_k must be at least 1".into()));
    }
    config.validate()?;
    for spec in index.schema().specs() {
        if spec.analyzer.stemming != config.stemming {
            return Err(Error::Config(format!(
                "field `{}` was indexed with stemming={}, query uses stemming={}",
                spec.field, spec.analyzer.stemming, config.stemming
            )));
        }
    }

    let results = exec.map(publications, |p| {
        let mut query = build_query(p, config);
        query.clauses.retain(|c| index.schema().contains(c.field));
        let empty = query.is_empty();
        index.search(&query, top_k).map(|list| (p.id.clone(), empty, list))
    });

    let mut run = Run::new("dsrec");
    let mut summary = PrecomputeSummary::default();
    for r in results {
        let (qid, empty, list) = r?;
        summary.queries += 1;
        summary.empty_queries += usize::from(empty);
        summary.empty_rankings += usize::from(list.is_empty());
        run.lists.insert(qid, list);
    }
    Ok((run, summary))
}
