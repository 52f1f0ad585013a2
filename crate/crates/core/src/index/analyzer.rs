//! Language-aware text analysis.
//!
//! Tokens are maximal runs of Unicode letters and digits, lowercased. The
//! German and English analyzers drop a fixed stopword list and can optionally
//! apply a Snowball stemmer.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

const STOPWORDS_DE: &str = include_str!("../../data/stopwords_de.txt");
const STOPWORDS_EN: &str = include_str!("../../data/stopwords_en.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    De,
    En,
    Neutral,
}

impl Language {
    pub fn as_str(self) -> &'static str {
        match self {
            Language::De => "de",
            Language::En => "en",
            Language::Neutral => "neutral",
        }
    }

    /// Parses an ISO 639-1 tag; anything other than `de`/`en` is neutral.
    pub fn from_tag(tag: &str) -> Language {
        match tag.trim().to_lowercase().as_str() {
            "de" | "ger" | "deu" => Language::De,
            "en" | "eng" => Language::En,
            _ => Language::Neutral,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Language {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "de" => Ok(Language::De),
            "en" => Ok(Language::En),
            "neutral" => Ok(Language::Neutral),
            other => Err(crate::Error::Format(format!("unknown language `{other}`"))),
        }
    }
}

fn parse_list(raw: &'static str) -> HashSet<&'static str> {
    raw.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// The shipped stopword list for `language` (empty for neutral).
pub fn stopwords(language: Language) -> &'static HashSet<&'static str> {
    static DE: OnceLock<HashSet<&'static str>> = OnceLock::new();
    static EN: OnceLock<HashSet<&'static str>> = OnceLock::new();
    static NONE: OnceLock<HashSet<&'static str>> = OnceLock::new();
    match language {
        Language::De => DE.get_or_init(|| parse_list(STOPWORDS_DE)),
        Language::En => EN.get_or_init(|| parse_list(STOPWORDS_EN)),
        Language::Neutral => NONE.get_or_init(HashSet::new),
    }
}

/// Splits `text` into lowercased letter/digit runs without removing anything.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analyzer {
    pub language: Language,
    #[serde(default)]
    pub stemming: bool,
}

impl Analyzer {
    pub fn new(language: Language) -> Self {
        Analyzer {
            language,
            stemming: false,
        }
    }

    pub fn with_stemming(mut self, stemming: bool) -> Self {
        self.stemming = stemming;
        self
    }

    pub fn analyze(&self, text: &str) -> Vec<String> {
        let stop = stopwords(self.language);
        let stemmer = match (self.stemming, self.language) {
            (true, Language::De) => Some(Stemmer::create(Algorithm::German)),
            (true, Language::En) => Some(Stemmer::create(Algorithm::English)),
            _ => None,
        };
        tokenize(text)
            .filter(|t| !stop.contains(t.as_str()))
            .map(|t| match &stemmer {
                Some(s) => s.stem(&t).into_owned(),
                None => t,
            })
            .collect()
    }
}
