//! Seeded synthetic corpora for tests, benchmarks and demos.
//!
//! Records are drawn from a handful of bilingual themes so that publications
//! and datasets on the same theme share vocabulary, topics and embedding
//! neighbourhoods.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{DatasetRecord, PublicationRecord};
use crate::eval::{Candidate, CandidateList};
use crate::index::tokenize;
use crate::rerank::{hash_embedding, EmbeddingStore};
use crate::Result;

struct Theme {
    de: &'static [&'static str],
    en: &'static [&'static str],
    topic_de: &'static str,
    topic_en: &'static str,
}

const THEMES: &[Theme] = &[
    Theme {
        de: &["Wahl", "Partei", "Wähler", "Stimme", "Bundestag", "Kandidat"],
        en: &["election", "party", "voter", "ballot", "parliament", "candidate"],
        topic_de: "Wahlverhalten",
        topic_en: "voting behaviour",
    },
    Theme {
        de: &["Familie", "Kinder", "Eltern", "Ehe", "Haushalt", "Geburt"],
        en: &["family", "children", "parents", "marriage", "household", "birth"],
        topic_de: "Familie",
        topic_en: "family",
    },
    Theme {
        de: &["Arbeit", "Beruf", "Lohn", "Betrieb", "Arbeitslosigkeit", "Karriere"],
        en: &["labour", "occupation", "wage", "firm", "unemployment", "career"],
        topic_de: "Arbeitsmarkt",
        topic_en: "labour market",
    },
    Theme {
        de: &[
            "Migration",
            "Zuwanderung",
            "Herkunft",
            "Integration",
            "Flucht",
            "Sprache",
        ],
        en: &[
            "migration",
            "immigration",
            "origin",
            "integration",
            "refugees",
            "language",
        ],
        topic_de: "Migration",
        topic_en: "migration",
    },
    Theme {
        de: &["Bildung", "Schule", "Studium", "Lehrer", "Abschluss", "Kompetenz"],
        en: &["education", "school", "university", "teacher", "degree", "skills"],
        topic_de: "Bildung",
        topic_en: "education",
    },
    Theme {
        de: &[
            "Gesundheit",
            "Krankheit",
            "Pflege",
            "Arzt",
            "Versorgung",
            "Wohlbefinden",
        ],
        en: &["health", "illness", "care", "physician", "provision", "wellbeing"],
        topic_de: "Gesundheit",
        topic_en: "health",
    },
    Theme {
        de: &["Umwelt", "Klima", "Energie", "Natur", "Verkehr", "Nachhaltigkeit"],
        en: &[
            "environment",
            "climate",
            "energy",
            "nature",
            "transport",
            "sustainability",
        ],
        topic_de: "Umweltbewusstsein",
        topic_en: "environmental attitudes",
    },
    Theme {
        de: &["Religion", "Kirche", "Glaube", "Werte", "Gemeinde", "Ritual"],
        en: &["religion", "church", "faith", "values", "congregation", "ritual"],
        topic_de: "Religion",
        topic_en: "religion",
    },
];

const FILLER_DE: &[&str] = &[
    "Studie",
    "Umfrage",
    "Daten",
    "Analyse",
    "Deutschland",
    "Welle",
    "Panel",
    "Befragung",
];
const FILLER_EN: &[&str] = &[
    "study",
    "survey",
    "data",
    "analysis",
    "germany",
    "wave",
    "panel",
    "interview",
];
const FUNCTION_DE: &[&str] = &["und", "der", "die", "in", "von"];
const FUNCTION_EN: &[&str] = &["and", "the", "of", "in", "on"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub publications: usize,
    pub datasets: usize,
    pub seed: u64,
    pub embedding_dim: usize,
    /// Candidates kept per publication in the live-system stand-in.
    pub candidates_per_query: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            publications: 100,
            datasets: 200,
            seed: 7,
            embedding_dim: 16,
            candidates_per_query: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub publications: Vec<PublicationRecord>,
    pub datasets: Vec<DatasetRecord>,
    /// Scores from a token-overlap scorer standing in for a live system.
    pub candidates: Vec<CandidateList>,
    pub embeddings: EmbeddingStore,
}

fn phrase(rng: &mut ChaCha8Rng, theme: &Theme, de: bool, words: usize) -> String {
    let (pool, filler, func) = if de {
        (theme.de, FILLER_DE, FUNCTION_DE)
    } else {
        (theme.en, FILLER_EN, FUNCTION_EN)
    };
    let mut out: Vec<&str> = Vec::with_capacity(words);
    for i in 0..words {
        let w = match rng.random_range(0..10) {
            0..=5 => *pool.choose(rng).expect("non-empty"),
            6 | 7 => *filler.choose(rng).expect("non-empty"),
            _ if i > 0 => *func.choose(rng).expect("non-empty"),
            _ => *pool.choose(rng).expect("non-empty"),
        };
        out.push(w);
    }
    out.join(" ")
}

fn vector_near(centre: &[f64], rng: &mut ChaCha8Rng, noise: f64) -> Vec<f64> {
    centre.iter().map(|c| c + rng.random_range(-noise..noise)).collect()
}

fn bag(texts: &[Option<&String>], extra: &[String]) -> BTreeSet<String> {
    texts
        .iter()
        .flatten()
        .flat_map(|t| tokenize(t))
        .chain(extra.iter().flat_map(|t| tokenize(t)))
        .collect()
}

pub fn synth_corpus(config: &SynthConfig) -> Result<SynthCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let centres: Vec<Vec<f64>> = (0..THEMES.len())
        .map(|t| hash_embedding(&format!("theme-{t}"), config.embedding_dim.max(1), config.seed))
        .collect();
    let mut embeddings = if config.embedding_dim == 0 {
        EmbeddingStore::empty()
    } else {
        EmbeddingStore::new(config.embedding_dim)?
    };

    let mut datasets = Vec::with_capacity(config.datasets);
    let mut dataset_theme = Vec::with_capacity(config.datasets);
    for i in 0..config.datasets {
        let t = rng.random_range(0..THEMES.len());
        let theme = &THEMES[t];
        let de = rng.random_bool(0.5);
        let mut d = DatasetRecord {
            id: format!("d{:04}", i + 1),
            language: Some(if de { "de" } else { "en" }.to_string()),
            ..Default::default()
        };
        let title_len = rng.random_range(3..7);
        let mut title = phrase(&mut rng, theme, de, title_len);
        if rng.random_bool(0.4) {
            let related = &THEMES[rng.random_range(0..THEMES.len())];
            let topic = if de { related.topic_de } else { related.topic_en };
            title = format!("{topic}: {title}");
        }
        d.title = Some(title);
        if rng.random_bool(0.6) {
            let len = rng.random_range(3..7);
            let other = phrase(&mut rng, theme, !de, len);
            if de {
                d.title_en = Some(other);
            } else {
                d.title_de = Some(other);
            }
        }
        if rng.random_bool(0.7) {
            let len = rng.random_range(12..30);
            d.abstract_text = Some(phrase(&mut rng, theme, de, len));
        }
        if rng.random_bool(0.5) {
            d.topics
                .push(if de { theme.topic_de } else { theme.topic_en }.to_string());
        }
        if rng.random_bool(0.3) {
            d.topic_en.push(theme.topic_en.to_string());
        }
        if rng.random_bool(0.3) {
            d.topic_de.push(theme.topic_de.to_string());
        }
        if config.embedding_dim > 0 {
            embeddings.insert(d.id.clone(), vector_near(&centres[t], &mut rng, 0.4))?;
        }
        datasets.push(d);
        dataset_theme.push(t);
    }

    let mut publications = Vec::with_capacity(config.publications);
    for i in 0..config.publications {
        let t = rng.random_range(0..THEMES.len());
        let theme = &THEMES[t];
        let de = rng.random_bool(0.4);
        let mut p = PublicationRecord {
            id: format!("p{:04}", i + 1),
            language: Some(if de { "de" } else { "en" }.to_string()),
            ..Default::default()
        };
        let title_len = rng.random_range(4..9);
        p.title = Some(phrase(&mut rng, theme, de, title_len));
        if rng.random_bool(0.5) {
            let len = rng.random_range(4..9);
            let other = phrase(&mut rng, theme, !de, len);
            if de {
                p.title_en = Some(other);
            } else {
                p.title_de = Some(other);
            }
        }
        if rng.random_bool(0.6) {
            let len = rng.random_range(20..40);
            p.abstract_text = Some(phrase(&mut rng, theme, de, len));
        }
        if rng.random_bool(0.5) {
            p.topics
                .push(if de { theme.topic_de } else { theme.topic_en }.to_string());
        }
        if config.embedding_dim > 0 && rng.random_bool(0.9) {
            embeddings.insert(p.id.clone(), vector_near(&centres[t], &mut rng, 0.4))?;
        }
        publications.push(p);
    }

    let dataset_bags: Vec<BTreeSet<String>> = datasets
        .iter()
        .map(|d| {
            let mut topics = d.topics.clone();
            topics.extend(d.topic_en.iter().cloned());
            topics.extend(d.topic_de.iter().cloned());
            bag(
                &[
                    d.title.as_ref(),
                    d.title_en.as_ref(),
                    d.title_de.as_ref(),
                    d.abstract_text.as_ref(),
                ],
                &topics,
            )
        })
        .collect();
    let mut candidates = Vec::with_capacity(publications.len());
    for p in &publications {
        let words = bag(
            &[
                p.title.as_ref(),
                p.title_en.as_ref(),
                p.title_de.as_ref(),
                p.abstract_text.as_ref(),
            ],
            &p.topics,
        );
        let mut scored: Vec<Candidate> = datasets
            .iter()
            .zip(&dataset_bags)
            .filter_map(|(d, b)| {
                let overlap = words.intersection(b).count();
                let jitter: f64 = rng.random_range(0.8..1.2);
                (overlap > 0).then(|| Candidate {
                    id: d.id.clone(),
                    score: (overlap as f64 * jitter * 1000.0).round() / 1000.0,
                })
            })
            .collect();
        scored.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.id.cmp(&b.id)));
        scored.truncate(config.candidates_per_query);
        scored.shuffle(&mut rng);
        candidates.push(CandidateList {
            qid: p.id.clone(),
            candidates: scored,
        });
    }

    Ok(SynthCorpus {
        publications,
        datasets,
        candidates,
        embeddings,
    })
}
