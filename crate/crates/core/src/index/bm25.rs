use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// BM25 free parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

#[derive(Deserialize)]
struct RawParams {
    k1: f64,
    b: f64,
}

impl TryFrom<RawParams> for Bm25Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Bm25Params::new(raw.k1, raw.b)
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self> {
        if !(k1.is_finite() && k1 >= 0.0) {
            return Err(Error::Config(format!("k1 must be a finite value >= 0, got {k1}")));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::Config(format!("b must lie in [0, 1], got {b}")));
        }
        Ok(Bm25Params { k1, b })
    }
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.2, b: 0.75 }
    }
}

/// `ln(1 + (n - df + 0.5) / (df + 0.5))`, positive for every `df <= n`.
#[inline]
pub fn idf(doc_count: u32, doc_freq: u32) -> f64 {
    let n = f64::from(doc_count);
    let df = f64::from(doc_freq);
    (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
}

/// Saturated, length-normalized term frequency component.
#[inline]
pub fn tf_weight(tf: u32, len: u32, avg_len: f64, params: Bm25Params) -> f64 {
    let tf = f64::from(tf);
    let norm = 1.0 - params.b + params.b * f64::from(len) / avg_len;
    tf * (params.k1 + 1.0) / (tf + params.k1 * norm)
}
