//! Cross-lingual word vectors in a shared space, loaded from the word2vec
//! text format.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use log::warn;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textnorm::Token;

#[derive(Debug, Clone)]
struct Entry<T> {
    vector: Vec<T>,
    norm: T,
}

/// Immutable word → vector map. Keys are lowercased on load so they line up
/// with tokenizer output.
#[derive(Debug, Clone)]
pub struct EmbeddingStore<T> {
    dim: usize,
    entries: HashMap<String, Entry<T>>,
}

impl<T: Scalar> EmbeddingStore<T> {
    /// A store with no vectors; every lookup misses.
    pub fn empty(dim: usize) -> Self {
        EmbeddingStore {
            dim,
            entries: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[T]> {
        self.entries.get(word).map(|e| e.vector.as_slice())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// Inserts a vector unless the word is already present. Returns whether
    /// the vector was stored.
    pub fn insert(&mut self, word: &str, vector: Vec<T>) -> Result<bool> {
        if vector.len() != self.dim {
            return Err(Error::LengthMismatch {
                left: self.dim,
                right: vector.len(),
            });
        }
        let key = word.to_lowercase();
        if self.entries.contains_key(&key) {
            return Ok(false);
        }
        let norm = norm(&vector);
        self.entries.insert(key, Entry { vector, norm });
        Ok(true)
    }

    pub fn from_reader<R: BufRead>(reader: R, origin: &str) -> Result<Self> {
        let mut store: Option<EmbeddingStore<T>> = None;
        let mut declared: Option<(usize, usize)> = None;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::parse(origin, lineno, e.to_string()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if idx == 0 && fields.len() == 2 {
                if let (Ok(count), Ok(dim)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                    if dim == 0 {
                        return Err(Error::parse(origin, lineno, "header declares dimension 0"));
                    }
                    declared = Some((count, dim));
                    store = Some(EmbeddingStore::empty(dim));
                    continue;
                }
            }
            let (word, values) = fields.split_first().expect("non-empty");
            let store = store.get_or_insert_with(|| EmbeddingStore::empty(values.len()));
            if store.dim == 0 {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("word `{word}` has no vector components"),
                ));
            }
            if values.len() != store.dim {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("expected {} components, found {}", store.dim, values.len()),
                ));
            }
            let mut vector = Vec::with_capacity(values.len());
            for v in values {
                let x: T = v
                    .parse()
                    .map_err(|_| Error::parse(origin, lineno, format!("non-numeric component `{v}`")))?;
                if !x.is_finite() {
                    return Err(Error::parse(origin, lineno, format!("non-finite component `{v}`")));
                }
                vector.push(x);
            }
            if !store.insert(word, vector)? {
                warn!("{origin}:{lineno}: duplicate word `{word}` ignored; keeping first vector");
            }
        }
        let store = store.unwrap_or_else(|| EmbeddingStore::empty(declared.map_or(0, |d| d.1)));
        if let Some((count, _)) = declared {
            if count != store.len() {
                warn!("{origin}: header declares {count} vectors, read {}", store.len());
            }
        }
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(BufReader::new(file), &path.display().to_string())
    }

    /// Cosine similarity between two stored words; `None` if either is
    /// absent or has a zero vector.
    pub fn similarity(&self, a: &str, b: &str) -> Option<T> {
        let ea = self.entries.get(a)?;
        let eb = self.entries.get(b)?;
        if ea.norm == T::zero() || eb.norm == T::zero() {
            return None;
        }
        Some(bounded(dot(&ea.vector, &eb.vector) / (ea.norm * eb.norm)))
    }
}

pub fn load_embeddings<T: Scalar>(path: impl AsRef<Path>) -> Result<EmbeddingStore<T>> {
    EmbeddingStore::load(path)
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

fn bounded<T: Scalar>(x: T) -> T {
    crate::scalar::clamp(x, -T::one(), T::one())
}

/// `dot(a, b) / (|a| |b|)`.
pub fn cosine<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (na, nb) = (norm(a), norm(b));
    if na == T::zero() || nb == T::zero() {
        return Err(Error::ZeroNorm);
    }
    Ok(bounded(dot(a, b) / (na * nb)))
}

/// The in-store candidate most similar to `w`. Ties go to the earliest
/// candidate.
pub fn best_cosine_match<T: Scalar>(w: &str, candidates: &[Token], store: &EmbeddingStore<T>) -> Option<(Token, T)> {
    if !store.contains(w) {
        return None;
    }
    let mut best: Option<(&Token, T)> = None;
    for c in candidates {
        let Some(sim) = store.similarity(w, c) else {
            continue;
        };
        if best.is_none_or(|(_, b)| sim > b) {
            best = Some((c, sim));
        }
    }
    best.map(|(t, s)| (t.clone(), s))
}
