//! Missing word penalty and trigram phrase score.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::embedding::best_cosine_match;
use crate::error::{Error, Result};
use crate::idf::IdfDictionary;
use crate::phonetic::pds;
use crate::scalar::{clamp, Scalar};
use crate::sws::Matcher;
use crate::textnorm::{Sentence, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chunking {
    /// Consecutive non-overlapping windows of three.
    #[default]
    Partition,
    /// Every window of three (the whole sentence when shorter).
    Sliding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdjustmentConfig<T> {
    /// Added to the raw penalty before it divides the phrase score.
    pub epsilon: T,
    /// Divide the penalty by the IDF mass of the selected reference.
    pub normalize_mwp: bool,
    /// Multiplier applied to the phrase score before clamping.
    pub phrase_scale: T,
    /// Phrase score contribution is clamped to `[-phrase_cap, phrase_cap]`.
    pub phrase_cap: T,
    /// Let embedding neighbours count as present words in the penalty.
    pub mwp_embedding_stage: bool,
    pub chunking: Chunking,
}

impl<T: Scalar> Default for AdjustmentConfig<T> {
    fn default() -> Self {
        AdjustmentConfig {
            epsilon: T::lit(1e-4),
            normalize_mwp: true,
            phrase_scale: T::one(),
            phrase_cap: T::one(),
            mwp_embedding_stage: false,
            chunking: Chunking::Partition,
        }
    }
}

impl<T: Scalar> AdjustmentConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > T::zero()) {
            return Err(Error::Config("epsilon must be > 0".into()));
        }
        if !(self.phrase_cap > T::zero()) {
            return Err(Error::Config("phrase_cap must be > 0".into()));
        }
        if !(self.phrase_scale >= T::zero()) || !self.phrase_scale.is_finite() {
            return Err(Error::Config("phrase_scale must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Phrase score as it enters the augmented metric.
    pub fn scale_phrase(&self, value: T) -> T {
        clamp(value * self.phrase_scale, -self.phrase_cap, self.phrase_cap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwpOutcome<T> {
    /// Smallest summed IDF of missing words over the references.
    pub raw: T,
    /// `raw` divided by the IDF mass of the selected reference when
    /// normalization is on, `raw` otherwise.
    pub scaled: T,
    /// Index of the reference achieving the minimum (earliest on ties).
    pub reference: usize,
}

/// Whether reference word `w` (or a close variant) occurs in the candidate.
fn present<T: Scalar>(w: &str, cand: &[Token], matcher: &Matcher<'_, T>, cfg: &AdjustmentConfig<T>) -> bool {
    let limit = matcher.config.max_pds_for_variant;
    if cand
        .iter()
        .any(|c| c.as_str() == w || pds(w, c, matcher.costs) <= limit)
    {
        return true;
    }
    cfg.mwp_embedding_stage
        && matches!(best_cosine_match(w, cand, matcher.store), Some((_, s)) if s > matcher.config.sigma_cos)
}

pub fn mwp<T: Scalar>(
    cand: &Sentence,
    refs: &[Sentence],
    idf: &IdfDictionary<T>,
    matcher: &Matcher<'_, T>,
    cfg: &AdjustmentConfig<T>,
) -> Result<MwpOutcome<T>> {
    if refs.is_empty() {
        return Err(Error::NoReferences);
    }
    let mut presence: HashMap<&str, bool> = HashMap::new();
    let mut best: Option<(usize, T)> = None;
    for (i, r) in refs.iter().enumerate() {
        let mut penalty = T::zero();
        for w in r {
            let hit = *presence
                .entry(w.as_str())
                .or_insert_with(|| present(w, cand, matcher, cfg));
            if !hit {
                penalty += idf.idf(w);
            }
        }
        if best.is_none_or(|(_, b)| penalty < b) {
            best = Some((i, penalty));
        }
    }
    let (reference, raw) = best.expect("refs non-empty");
    let scaled = if cfg.normalize_mwp {
        let mass: T = refs[reference].iter().map(|w| idf.idf(w)).sum();
        if mass > T::zero() {
            clamp(raw / mass, T::zero(), T::one())
        } else {
            T::zero()
        }
    } else {
        raw
    };
    Ok(MwpOutcome { raw, scaled, reference })
}

/// One to three consecutive tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseChunk(Vec<Token>);

impl PhraseChunk {
    pub fn tokens(&self) -> &[Token] {
        &self.0
    }
}

pub fn chunk_trigrams(s: &Sentence, mode: Chunking) -> Vec<PhraseChunk> {
    match mode {
        Chunking::Partition => s.chunks(3).map(|c| PhraseChunk(c.to_vec())).collect(),
        Chunking::Sliding if s.len() < 3 => {
            if s.is_empty() {
                Vec::new()
            } else {
                vec![PhraseChunk(s.to_vec())]
            }
        }
        Chunking::Sliding => s.windows(3).map(|c| PhraseChunk(c.to_vec())).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhraseOutcome<T> {
    /// Signed IDF sum over candidate chunk words.
    pub sum: T,
    pub chunks: usize,
    /// `sum / chunks / (mwp_raw + epsilon)`; zero for an empty candidate.
    pub value: T,
}

/// Credits candidate words found in any reference chunk and penalizes the
/// rest, normalized by chunk count and divided by the raw missing word
/// penalty.
pub fn phrase_score<T: Scalar>(
    cand: &Sentence,
    refs: &[Sentence],
    idf: &IdfDictionary<T>,
    cfg: &AdjustmentConfig<T>,
    mwp_raw: T,
) -> PhraseOutcome<T> {
    let ref_words: HashSet<Token> = refs
        .iter()
        .flat_map(|r| chunk_trigrams(r, cfg.chunking))
        .flat_map(|c| c.0)
        .collect();
    let chunks = chunk_trigrams(cand, cfg.chunking);
    if chunks.is_empty() {
        return PhraseOutcome {
            sum: T::zero(),
            chunks: 0,
            value: T::zero(),
        };
    }
    let mut sum = T::zero();
    for chunk in &chunks {
        for w in chunk.tokens() {
            let v = idf.idf(w);
            if ref_words.contains(w) {
                sum += v;
            } else {
                sum -= v;
            }
        }
    }
    let n = T::from_count(chunks.len());
    PhraseOutcome {
        sum,
        chunks: chunks.len(),
        value: sum / n / (mwp_raw + cfg.epsilon),
    }
}
