//! Similar word search and candidate canonicalization.
//!
//! A candidate word is mapped onto a reference word when the two are
//! phonetically close, or failing that, close in the shared embedding space.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::embedding::{best_cosine_match, EmbeddingStore};
use crate::error::{Error, Result};
use crate::phonetic::{pds, PhoneticCostTable};
use crate::scalar::Scalar;
use crate::textnorm::{Sentence, Token};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SwsConfig<T> {
    /// A phonetic match needs `pds < sigma_thres`.
    pub sigma_thres: T,
    /// A semantic match needs `cosine > sigma_cos`.
    pub sigma_cos: T,
    /// Largest `pds` at which a word counts as present for the missing word
    /// penalty.
    pub max_pds_for_variant: T,
    /// Also rewrite each reference against the references before it.
    pub canonicalize_references: bool,
}

impl<T: Scalar> Default for SwsConfig<T> {
    fn default() -> Self {
        SwsConfig {
            sigma_thres: T::lit(2.0),
            sigma_cos: T::lit(0.5),
            max_pds_for_variant: T::one(),
            canonicalize_references: false,
        }
    }
}

impl<T: Scalar> SwsConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_thres > T::zero()) {
            return Err(Error::Config("sigma_thres must be > 0".into()));
        }
        if !(self.sigma_cos > T::zero() && self.sigma_cos <= T::one()) {
            return Err(Error::Config("sigma_cos must lie in (0, 1]".into()));
        }
        if !(self.max_pds_for_variant >= T::zero() && self.max_pds_for_variant <= self.sigma_thres) {
            return Err(Error::Config("max_pds_for_variant must lie in [0, sigma_thres]".into()));
        }
        Ok(())
    }
}

/// Read-only resources shared by every word lookup.
#[derive(Debug, Clone, Copy)]
pub struct Matcher<'a, T> {
    pub costs: &'a PhoneticCostTable<T>,
    pub store: &'a EmbeddingStore<T>,
    pub config: &'a SwsConfig<T>,
}

impl<'a, T: Scalar> Matcher<'a, T> {
    pub fn new(costs: &'a PhoneticCostTable<T>, store: &'a EmbeddingStore<T>, config: &'a SwsConfig<T>) -> Self {
        Matcher { costs, store, config }
    }

    /// Reference word with the smallest phonetic distance to `w` (earliest
    /// on ties) together with that distance.
    pub fn closest_phonetic(&self, w: &str, ref_words: &[Token]) -> Option<(Token, T)> {
        let mut best: Option<(&Token, T)> = None;
        for r in ref_words {
            let d = if r.as_str() == w {
                T::zero()
            } else {
                pds(w, r, self.costs)
            };
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((r, d));
                if d == T::zero() {
                    break;
                }
            }
        }
        best.map(|(t, d)| (t.clone(), d))
    }

    /// Phonetic stage first, embedding stage second; `None` when neither
    /// clears its threshold.
    pub fn sws(&self, w: &str, ref_words: &[Token]) -> Option<Token> {
        if let Some((m, d)) = self.closest_phonetic(w, ref_words) {
            if d < self.config.sigma_thres {
                return Some(m);
            }
        }
        match best_cosine_match(w, ref_words, self.store) {
            Some((m, sim)) if sim > self.config.sigma_cos => Some(m),
            _ => None,
        }
    }

    /// Rewrites each candidate token to its reference-side match, keeping
    /// unmatched tokens as they are.
    pub fn canonicalize_sentence(&self, cand: &Sentence, refs: &[Sentence]) -> Sentence {
        let vocab = reference_vocabulary(refs);
        self.canonicalize_against(cand, &vocab)
    }

    fn canonicalize_against(&self, s: &Sentence, vocab: &[Token]) -> Sentence {
        if vocab.is_empty() {
            return s.clone();
        }
        s.iter()
            .map(|t| self.sws(t, vocab).unwrap_or_else(|| t.clone()))
            .collect()
    }

    /// Rewrites every reference after the first against the vocabulary of
    /// the references that precede it.
    pub fn canonicalize_references(&self, refs: &[Sentence]) -> Vec<Sentence> {
        let mut out: Vec<Sentence> = Vec::with_capacity(refs.len());
        for r in refs {
            let vocab = reference_vocabulary(&out);
            out.push(self.canonicalize_against(r, &vocab));
        }
        out
    }
}

/// Distinct reference tokens in first-occurrence reading order.
pub fn reference_vocabulary(refs: &[Sentence]) -> Vec<Token> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in refs.iter().flat_map(|s| s.iter()) {
        if seen.insert(t.as_str()) {
            out.push(t.clone());
        }
    }
    out
}

pub fn sws<T: Scalar>(
    w: &str,
    ref_words: &[Token],
    costs: &PhoneticCostTable<T>,
    store: &EmbeddingStore<T>,
    config: &SwsConfig<T>,
) -> Option<Token> {
    Matcher::new(costs, store, config).sws(w, ref_words)
}

pub fn canonicalize_sentence<T: Scalar>(
    cand: &Sentence,
    refs: &[Sentence],
    costs: &PhoneticCostTable<T>,
    store: &EmbeddingStore<T>,
    config: &SwsConfig<T>,
) -> Sentence {
    Matcher::new(costs, store, config).canonicalize_sentence(cand, refs)
}
