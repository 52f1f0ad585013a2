use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Fixed-dimension vectors keyed by document id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingStore {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        Ok(EmbeddingStore {
            dim,
            vectors: BTreeMap::new(),
        })
    }

    pub fn empty() -> Self {
        EmbeddingStore::default()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&[f64]> {
        self.vectors.get(id).map(Vec::as_slice)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.vectors.contains_key(id)
    }

    pub fn insert(&mut self, id: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        let id = id.into();
        if self.dim == 0 {
            return Err(Error::Config("store created without a dimension".into()));
        }
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: vector.len(),
            });
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format(format!("non-finite component in vector for `{id}`")));
        }
        if self.vectors.contains_key(&id) {
            return Err(Error::Format(format!("duplicate embedding id `{id}`")));
        }
        self.vectors.insert(id, vector);
        Ok(())
    }

    /// TSV with a `dim<TAB>d` header, then `id<TAB>v1,v2,...,vd` per line.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("dim\t{}\n", self.dim);
        for (id, v) in &self.vectors {
            let comps: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "{id}\t{}", comps.join(","));
        }
        out
    }

    pub fn parse_tsv(text: &str, origin: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let Some((hline, header)) = lines.next() else {
            return Ok(EmbeddingStore::empty());
        };
        let dim: usize = header
            .strip_prefix("dim\t")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| err(hline + 1, format!("expected `dim<TAB>n` header, got `{header}`")))?;
        let mut store = if dim == 0 {
            EmbeddingStore::empty()
        } else {
            EmbeddingStore::new(dim)?
        };
        for (i, line) in lines {
            let (id, values) = line
                .split_once('\t')
                .ok_or_else(|| err(i + 1, "expected `id<TAB>values`".into()))?;
            let vector = values
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| err(i + 1, e.to_string()))?;
            store.insert(id, vector).map_err(|e| err(i + 1, e.to_string()))?;
        }
        Ok(store)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_tsv(&text, path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }
}

/// FNV-1a; stable across platforms and toolchains.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Deterministic stand-in embedder: components uniform in `[-1, 1)` drawn
/// from a generator seeded by `(seed, id)`.
pub fn hash_embedding(id: &str, dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(fnv1a(id.as_bytes()) ^ seed.rotate_left(17));
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

/// The `k` candidates nearest to the seed, ties by id. Candidates without a
/// vector are skipped.
pub fn knn_neighbors(store: &EmbeddingStore, seed_id: &str, k: usize, candidates: &[&str]) -> Result<Vec<String>> {
    let seed = store
        .get(seed_id)
        .ok_or_else(|| Error::MissingEmbedding(seed_id.to_string()))?;
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let mut scored: Vec<(f64, &str)> = Vec::with_capacity(candidates.len());
    for &c in candidates {
        if let Some(v) = store.get(c) {
            scored.push((euclidean_distance(seed, v)?, c));
        }
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    scored.dedup_by(|a, b| a.1 == b.1);
    Ok(scored.into_iter().take(k).map(|(_, id)| id.to_string()).collect())
}
