//! Controlled topic vocabulary and title-match topic expansion.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{DatasetRecord, PublicationRecord};
use crate::index::{stopwords, tokenize, Language};
use crate::par::Exec;

/// Topic terms collected from the corpus, split by language.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicVocabulary {
    pub de: BTreeSet<String>,
    pub en: BTreeSet<String>,
}

impl TopicVocabulary {
    pub fn insert(&mut self, term: &str, lang: Language) {
        let term = term.trim();
        if term.is_empty() {
            return;
        }
        let lang = match lang {
            Language::Neutral => guess_term_language(term),
            l => l,
        };
        match lang {
            Language::De => self.de.insert(term.to_string()),
            _ => self.en.insert(term.to_string()),
        };
    }

    pub fn terms(&self, lang: Language) -> &BTreeSet<String> {
        match lang {
            Language::De => &self.de,
            _ => &self.en,
        }
    }

    pub fn len(&self) -> (usize, usize) {
        (self.de.len(), self.en.len())
    }

    pub fn is_empty(&self) -> bool {
        self.de.is_empty() && self.en.is_empty()
    }
}

/// German if any token of `term` is a German stopword, English otherwise.
pub fn guess_term_language(term: &str) -> Language {
    let de = stopwords(Language::De);
    if tokenize(term).any(|t| de.contains(t.as_str())) {
        Language::De
    } else {
        Language::En
    }
}

pub fn build_topic_vocabulary(publications: &[PublicationRecord], datasets: &[DatasetRecord]) -> TopicVocabulary {
    let mut vocab = TopicVocabulary::default();
    for p in publications {
        let lang = p.language_tag();
        for t in &p.topics {
            vocab.insert(t, lang);
        }
    }
    for d in datasets {
        let lang = d.language_tag();
        for t in &d.topics {
            vocab.insert(t, lang);
        }
        for t in &d.topic_de {
            vocab.insert(t, Language::De);
        }
        for t in &d.topic_en {
            vocab.insert(t, Language::En);
        }
    }
    vocab
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub dataset_id: String,
    pub term: String,
    pub lang: Language,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionCounts {
    pub de: usize,
    pub en: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub assigned: ExpansionCounts,
    pub assignments: Vec<Assignment>,
}

/// Vocabulary terms of one language, tokenized and bucketed by first token.
struct TermMatcher<'a> {
    terms: Vec<(&'a str, Vec<String>)>,
    by_first: HashMap<String, Vec<usize>>,
}

impl<'a> TermMatcher<'a> {
    fn new(terms: &'a BTreeSet<String>) -> Self {
        let terms: Vec<(&str, Vec<String>)> = terms
            .iter()
            .map(|t| (t.as_str(), tokenize(t).collect::<Vec<_>>()))
            .filter(|(_, toks)| !toks.is_empty())
            .collect();
        let mut by_first: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, (_, toks)) in terms.iter().enumerate() {
            by_first.entry(toks[0].clone()).or_default().push(i);
        }
        TermMatcher { terms, by_first }
    }

    /// Indices (in vocabulary order) of terms occurring as contiguous token
    /// sequences in any of `texts`.
    fn matches(&self, texts: &[&str]) -> BTreeSet<usize> {
        let mut hits = BTreeSet::new();
        for text in texts {
            let tokens: Vec<String> = tokenize(text).collect();
            for start in 0..tokens.len() {
                let Some(candidates) = self.by_first.get(&tokens[start]) else {
                    continue;
                };
                for &ci in candidates {
                    let needle = &self.terms[ci].1;
                    if tokens[start..].starts_with(needle) {
                        hits.insert(ci);
                    }
                }
            }
        }
        hits
    }
}

/// Titles consulted for `lang`: the language-suffixed title, plus the plain
/// title when the record is tagged with `lang` (or is untagged and lacks the
/// suffixed title).
pub(crate) fn titles_for(d: &DatasetRecord, lang: Language) -> Vec<&str> {
    let suffixed = match lang {
        Language::De => d.title_de.as_deref(),
        _ => d.title_en.as_deref(),
    };
    let mut out: Vec<&str> = suffixed.into_iter().collect();
    if let Some(title) = d.title.as_deref() {
        let tag = d.language_tag();
        if tag == lang || (tag == Language::Neutral && suffixed.is_none()) {
            out.push(title);
        }
    }
    out
}

fn casefold(s: &str) -> String {
    s.trim().to_lowercase()
}

pub fn expand_topics(datasets: Vec<DatasetRecord>, vocab: &TopicVocabulary) -> (Vec<DatasetRecord>, ExpansionReport) {
    expand_topics_with(datasets, vocab, Exec::default())
}

/// Assigns vocabulary terms found in a dataset's title to `ext_topic_de` /
/// `ext_topic_en`, skipping terms the record already carries.
pub fn expand_topics_with(
    datasets: Vec<DatasetRecord>,
    vocab: &TopicVocabulary,
    exec: Exec,
) -> (Vec<DatasetRecord>, ExpansionReport) {
    let de = TermMatcher::new(&vocab.de);
    let en = TermMatcher::new(&vocab.en);

    let per_doc: Vec<(DatasetRecord, Vec<Assignment>)> = exec.map(&datasets, |d| {
        let mut d = d.clone();
        let existing: HashSet<String> = d
            .topics
            .iter()
            .chain(&d.topic_de)
            .chain(&d.topic_en)
            .map(|t| casefold(t))
            .collect();
        let mut assigned = Vec::new();
        for (lang, matcher) in [(Language::De, &de), (Language::En, &en)] {
            let hits = matcher.matches(&titles_for(&d, lang));
            let ext = match lang {
                Language::De => &d.ext_topic_de,
                _ => &d.ext_topic_en,
            };
            let mut taken: HashSet<String> = ext.iter().map(|t| casefold(t)).collect();
            let mut new_terms = Vec::new();
            for hit in hits {
                let term = matcher.terms[hit].0;
                let key = casefold(term);
                if existing.contains(&key) || !taken.insert(key) {
                    continue;
                }
                new_terms.push(term.to_string());
            }
            for term in &new_terms {
                assigned.push(Assignment {
                    dataset_id: d.id.clone(),
                    term: term.clone(),
                    lang,
                });
            }
            match lang {
                Language::De => d.ext_topic_de.extend(new_terms),
                _ => d.ext_topic_en.extend(new_terms),
            }
        }
        (d, assigned)
    });

    let mut report = ExpansionReport::default();
    let mut out = Vec::with_capacity(per_doc.len());
    for (d, assigned) in per_doc {
        for a in &assigned {
            match a.lang {
                Language::De => report.assigned.de += 1,
                _ => report.assigned.en += 1,
            }
        }
        report.assignments.extend(assigned);
        out.push(d);
    }
    (out, report)
}
