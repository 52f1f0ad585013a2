use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::analyzer::{Analyzer, Language};
use crate::{Error, Result};

/// Indexed dataset metadata fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Title,
    Abstract,
    Topic,
    TitleEn,
    TitleDe,
    AbstractEn,
    AbstractDe,
    TopicEn,
    TopicDe,
    ExtTopicDe,
    ExtTopicEn,
}

impl Field {
    pub const ALL: [Field; 11] = [
        Field::Title,
        Field::Abstract,
        Field::Topic,
        Field::TitleEn,
        Field::TitleDe,
        Field::AbstractEn,
        Field::AbstractDe,
        Field::TopicEn,
        Field::TopicDe,
        Field::ExtTopicDe,
        Field::ExtTopicEn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Title => "title",
            Field::Abstract => "abstract",
            Field::Topic => "topic",
            Field::TitleEn => "title_en",
            Field::TitleDe => "title_de",
            Field::AbstractEn => "abstract_en",
            Field::AbstractDe => "abstract_de",
            Field::TopicEn => "topic_en",
            Field::TopicDe => "topic_de",
            Field::ExtTopicDe => "ext_topic_de",
            Field::ExtTopicEn => "ext_topic_en",
        }
    }

    pub fn language(self) -> Language {
        match self {
            Field::Title | Field::Abstract | Field::Topic => Language::Neutral,
            Field::TitleEn | Field::AbstractEn | Field::TopicEn | Field::ExtTopicEn => Language::En,
            Field::TitleDe | Field::AbstractDe | Field::TopicDe | Field::ExtTopicDe => Language::De,
        }
    }

    pub fn family(self) -> FieldFamily {
        match self {
            Field::Title | Field::TitleEn | Field::TitleDe => FieldFamily::Title,
            Field::Abstract | Field::AbstractEn | Field::AbstractDe => FieldFamily::Abstract,
            Field::Topic | Field::TopicEn | Field::TopicDe | Field::ExtTopicDe | Field::ExtTopicEn => {
                FieldFamily::Topic
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Field::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnknownField(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldFamily {
    Title,
    Abstract,
    Topic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub field: Field,
    pub analyzer: Analyzer,
}

/// The set of indexed fields and the analyzer each one uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FieldSpec>", into = "Vec<FieldSpec>")]
pub struct FieldSchema {
    specs: Vec<FieldSpec>,
}

impl FieldSchema {
    /// Validates uniqueness and language assignment; specs are kept in
    /// canonical field order.
    pub fn new(mut specs: Vec<FieldSpec>) -> Result<Self> {
        specs.sort_by_key(|s| s.field);
        for pair in specs.windows(2) {
            if pair[0].field == pair[1].field {
                return Err(Error::Config(format!("field `{}` listed twice", pair[0].field)));
            }
        }
        for spec in &specs {
            let expected = spec.field.language();
            if expected != Language::Neutral && spec.analyzer.language != expected {
                return Err(Error::Config(format!(
                    "field `{}` must use the {} analyzer",
                    spec.field, expected
                )));
            }
        }
        Ok(FieldSchema { specs })
    }

    /// All eleven fields with their natural analyzers.
    pub fn full(stemming: bool) -> Self {
        Self::for_fields(&Field::ALL, stemming)
    }

    pub fn for_fields(fields: &[Field], stemming: bool) -> Self {
        let mut specs: Vec<FieldSpec> = fields
            .iter()
            .map(|&field| FieldSpec {
                field,
                analyzer: Analyzer::new(field.language()).with_stemming(stemming),
            })
            .collect();
        specs.sort_by_key(|s| s.field);
        specs.dedup_by_key(|s| s.field);
        FieldSchema { specs }
    }

    pub fn specs(&self) -> &[FieldSpec] {
        &self.specs
    }

    pub fn fields(&self) -> impl Iterator<Item = Field> + '_ {
        self.specs.iter().map(|s| s.field)
    }

    pub fn contains(&self, field: Field) -> bool {
        self.analyzer(field).is_some()
    }

    pub fn analyzer(&self, field: Field) -> Option<&Analyzer> {
        self.specs.iter().find(|s| s.field == field).map(|s| &s.analyzer)
    }
}

impl Default for FieldSchema {
    fn default() -> Self {
        FieldSchema::full(false)
    }
}

impl TryFrom<Vec<FieldSpec>> for FieldSchema {
    type Error = Error;

    fn try_from(specs: Vec<FieldSpec>) -> Result<Self> {
        FieldSchema::new(specs)
    }
}

impl From<FieldSchema> for Vec<FieldSpec> {
    fn from(schema: FieldSchema) -> Self {
        schema.specs
    }
}
