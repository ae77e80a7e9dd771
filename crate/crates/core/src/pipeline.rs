//! Canonicalize, score, penalize, credit: the augmented metric for one
//! candidate.

use crate::config::MipeConfig;
use crate::embedding::EmbeddingStore;
use crate::error::{Error, Result};
use crate::harness::EvalInstance;
use crate::idf::IdfDictionary;
use crate::metrics::{ExternalScores, MetricConfig, MetricScore, NativeMetric, Orientation};
use crate::phonetic::PhoneticCostTable;
use crate::scalar::Scalar;
use crate::scoring::{mwp, phrase_score, AdjustmentConfig};
use crate::sws::{Matcher, SwsConfig};
use crate::textnorm::Sentence;

/// Everything the pipeline reads. Immutable once built.
#[derive(Debug, Clone)]
pub struct Resources<T> {
    pub idf: IdfDictionary<T>,
    pub store: EmbeddingStore<T>,
    pub costs: PhoneticCostTable<T>,
    pub sws: SwsConfig<T>,
    pub adjustment: AdjustmentConfig<T>,
    pub metrics: MetricConfig<T>,
    external: Vec<ExternalScores<T>>,
}

impl<T: Scalar> Resources<T> {
    /// Default configuration around the given dictionary and vectors.
    pub fn new(idf: IdfDictionary<T>, store: EmbeddingStore<T>) -> Self {
        Resources {
            idf,
            store,
            costs: PhoneticCostTable::default(),
            sws: SwsConfig::default(),
            adjustment: AdjustmentConfig::default(),
            metrics: MetricConfig::default(),
            external: Vec::new(),
        }
    }

    /// Resources configured from a parsed config file. A `mu_miss` set there
    /// overrides the dictionary's own.
    pub fn from_config(idf: IdfDictionary<T>, store: EmbeddingStore<T>, cfg: &MipeConfig<T>) -> Result<Self> {
        let idf = match cfg.idf.mu_miss {
            Some(m) => idf.with_mu_miss(m),
            None => idf,
        };
        Ok(Resources {
            costs: cfg.phonetic.to_table()?,
            sws: cfg.sws.clone(),
            adjustment: cfg.scoring.clone(),
            metrics: cfg.metrics.clone(),
            ..Resources::new(idf, store)
        })
    }

    /// Registers an externally scored metric. Names are matched
    /// case-insensitively and must be unique.
    pub fn add_external(&mut self, scores: ExternalScores<T>) -> Result<()> {
        if self.external.iter().any(|e| e.name.eq_ignore_ascii_case(&scores.name)) {
            return Err(Error::Data(format!("external metric `{}` supplied twice", scores.name)));
        }
        self.external.push(scores);
        Ok(())
    }

    pub fn external(&self) -> &[ExternalScores<T>] {
        &self.external
    }

    pub fn metric_names(&self) -> Vec<String> {
        NativeMetric::ALL
            .iter()
            .map(|m| m.name().to_owned())
            .chain(self.external.iter().map(|e| e.name.clone()))
            .collect()
    }

    pub fn resolve_metric(&self, name: &str) -> Result<MetricSpec> {
        let name = name.trim();
        if let Some(m) = NativeMetric::from_name(name) {
            return Ok(MetricSpec::Native(m));
        }
        if let Some(i) = self.external.iter().position(|e| e.name.eq_ignore_ascii_case(name)) {
            return Ok(MetricSpec::External(i));
        }
        Err(Error::UnknownMetric {
            name: name.to_owned(),
            valid: self.metric_names(),
        })
    }

    pub fn resolve_metrics<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<MetricSpec>> {
        names.iter().map(|n| self.resolve_metric(n.as_ref())).collect()
    }

    fn matcher(&self) -> Matcher<'_, T> {
        Matcher::new(&self.costs, &self.store, &self.sws)
    }

    fn score_metric(&self, spec: MetricSpec, id: &str, cand: &Sentence, refs: &[Sentence]) -> Result<MetricScore<T>> {
        match spec {
            MetricSpec::Native(m) => m.score(cand, refs, &self.metrics),
            MetricSpec::External(i) => self.external[i].get(id),
        }
    }
}

/// A metric resolved against a [`Resources`] value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSpec {
    Native(NativeMetric),
    /// Index into the registered external score sets.
    External(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipeResult<T> {
    /// Metric on the untouched candidate and references.
    pub surface: MetricScore<T>,
    /// Metric on the canonicalized candidate.
    pub raw: MetricScore<T>,
    pub canonicalized_candidate: Sentence,
    pub mwp_raw: T,
    pub mwp_scaled: T,
    pub phrase_score_raw: T,
    pub phrase_score_scaled: T,
    pub augmented: MetricScore<T>,
}

/// The metric-independent part of the computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Adjustment<T> {
    pub canonical: Sentence,
    pub references: Vec<Sentence>,
    pub mwp_raw: T,
    pub mwp_scaled: T,
    pub phrase_raw: T,
    pub phrase_scaled: T,
}

pub fn adjustment<T: Scalar>(cand: &Sentence, refs: &[Sentence], res: &Resources<T>) -> Result<Adjustment<T>> {
    if refs.is_empty() {
        return Err(Error::NoReferences);
    }
    let matcher = res.matcher();
    let references = if res.sws.canonicalize_references {
        matcher.canonicalize_references(refs)
    } else {
        refs.to_vec()
    };
    let canonical = matcher.canonicalize_sentence(cand, &references);
    let penalty = mwp(&canonical, &references, &res.idf, &matcher, &res.adjustment)?;
    let phrase = phrase_score(&canonical, &references, &res.idf, &res.adjustment, penalty.raw);
    Ok(Adjustment {
        canonical,
        references,
        mwp_raw: penalty.raw,
        mwp_scaled: penalty.scaled,
        phrase_raw: phrase.value,
        phrase_scaled: res.adjustment.scale_phrase(phrase.value),
    })
}

/// Applies the penalty and credit in the direction of the metric and clamps
/// into its range.
pub fn augment<T: Scalar>(raw: &MetricScore<T>, mwp_scaled: T, phrase_scaled: T) -> MetricScore<T> {
    let shifted = match raw.orientation {
        Orientation::HigherBetter => raw.value - mwp_scaled + phrase_scaled,
        Orientation::LowerBetter => (raw.value + mwp_scaled - phrase_scaled).max(T::zero()),
    };
    MetricScore {
        value: raw.range.clamp(shifted),
        ..raw.clone()
    }
}

fn finish<T: Scalar>(
    adj: &Adjustment<T>,
    spec: MetricSpec,
    id: &str,
    cand: &Sentence,
    refs: &[Sentence],
    res: &Resources<T>,
) -> Result<MipeResult<T>> {
    let surface = res.score_metric(spec, id, cand, refs)?;
    let raw = res.score_metric(spec, id, &adj.canonical, &adj.references)?;
    let augmented = augment(&raw, adj.mwp_scaled, adj.phrase_scaled);
    Ok(MipeResult {
        surface,
        raw,
        canonicalized_candidate: adj.canonical.clone(),
        mwp_raw: adj.mwp_raw,
        mwp_scaled: adj.mwp_scaled,
        phrase_score_raw: adj.phrase_raw,
        phrase_score_scaled: adj.phrase_scaled,
        augmented,
    })
}

/// Augmented score of one candidate under one metric. `id` keys external
/// score lookups.
pub fn mipe_score<T: Scalar>(
    id: &str,
    cand: &Sentence,
    refs: &[Sentence],
    metric: MetricSpec,
    res: &Resources<T>,
) -> Result<MipeResult<T>> {
    let adj = adjustment(cand, refs, res)?;
    finish(&adj, metric, id, cand, refs, res)
}

/// One result per metric, sharing a single canonicalization and adjustment.
pub fn evaluate_instance<T: Scalar>(
    inst: &EvalInstance,
    metrics: &[MetricSpec],
    res: &Resources<T>,
) -> Result<Vec<MipeResult<T>>> {
    if metrics.is_empty() {
        return Ok(Vec::new());
    }
    let cand = inst.candidate_sentence();
    let refs = inst.reference_sentences();
    let adj = adjustment(&cand, &refs, res)?;
    metrics
        .iter()
        .map(|&m| finish(&adj, m, &inst.id, &cand, &refs, res))
        .collect()
}
