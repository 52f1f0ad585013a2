use serde::{Deserialize, Serialize};

use super::RejectReason;
use crate::index::Language;

fn present(v: &Option<String>) -> bool {
    v.as_deref().is_some_and(|s| !s.trim().is_empty())
}

/// A seed publication.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_en: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_de: Option<String>,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abstract_en: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abstract_de: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub topics: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub persons: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

/// A research dataset, the recommended side.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_en: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title_de: Option<String>,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abstract_en: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abstract_de: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub topics: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub topic_en: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub topic_de: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ext_topic_de: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ext_topic_en: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collection_method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temporal_coverage: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geographical_coverage: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub investigators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contributors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

/// A JSONL-ingestible metadata record.
pub trait Record: serde::de::DeserializeOwned + Serialize + Send {
    fn id(&self) -> &str;

    fn validate(&self) -> Result<(), RejectReason> {
        if self.id().trim().is_empty() {
            return Err(RejectReason::MissingId);
        }
        Ok(())
    }
}

impl Record for PublicationRecord {
    fn id(&self) -> &str {
        &self.id
    }

    fn validate(&self) -> Result<(), RejectReason> {
        if self.id.trim().is_empty() {
            return Err(RejectReason::MissingId);
        }
        if !(present(&self.title) || present(&self.title_en) || present(&self.title_de)) {
            return Err(RejectReason::MissingTitle);
        }
        Ok(())
    }
}

impl Record for DatasetRecord {
    fn id(&self) -> &str {
        &self.id
    }
}

impl PublicationRecord {
    pub fn language_tag(&self) -> Language {
        self.language.as_deref().map_or(Language::Neutral, Language::from_tag)
    }
}

impl DatasetRecord {
    pub fn language_tag(&self) -> Language {
        self.language.as_deref().map_or(Language::Neutral, Language::from_tag)
    }
}

/// Language-suffixed text fields that external translations may fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranslatableField {
    Title,
    Abstract,
}

pub trait Translatable {
    fn id(&self) -> &str;
    fn slot_mut(&mut self, field: TranslatableField, lang: Language) -> Option<&mut Option<String>>;
}

macro_rules! impl_translatable {
    ($ty:ty) => {
        impl Translatable for $ty {
            fn id(&self) -> &str {
                &self.id
            }

            fn slot_mut(&mut self, field: TranslatableField, lang: Language) -> Option<&mut Option<String>> {
                match (field, lang) {
                    (TranslatableField::Title, Language::En) => Some(&mut self.title_en),
                    (TranslatableField::Title, Language::De) => Some(&mut self.title_de),
                    (TranslatableField::Abstract, Language::En) => Some(&mut self.abstract_en),
                    (TranslatableField::Abstract, Language::De) => Some(&mut self.abstract_de),
                    (_, Language::Neutral) => None,
                }
            }
        }
    };
}

impl_translatable!(PublicationRecord);
impl_translatable!(DatasetRecord);
