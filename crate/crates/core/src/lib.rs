//! Metric-independent augmentation of NLG evaluation scores for code-mixed
//! text.
//!
//! Candidate words are rewritten toward reference spellings (phonetic edit
//! distance, then cross-lingual embeddings), an IDF-weighted penalty is
//! charged for reference words the candidate misses, and a trigram phrase
//! credit is added. The adjusted score of any metric is then correlated with
//! human ratings by the [`harness`].
//!
//! Everything numeric is generic over [`Scalar`]; the aliases below fix it to
//! `f64`.
//!
//! ```
//! use mipe_core::{tokenize, Embeddings, Idf, MetricSpec, NativeMetric, Resources};
//!
//! let idf: Idf = mipe_core::idf::build_idf(["koi dusra human being yeh kahe"])?;
//! let res = Resources::new(idf, Embeddings::empty(0));
//! let refs = [tokenize("koi dusra human being yeh kahe")];
//! let cand = tokenize("koee doosra human ye kahe");
//! let out = mipe_core::mipe_score("1", &cand, &refs, MetricSpec::Native(NativeMetric::Bleu), &res)?;
//! assert_eq!(out.canonicalized_candidate, tokenize("koi dusra human yeh kahe"));
//! # Ok::<(), mipe_core::Error>(())
//! ```

// Negated comparisons in validation reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod embedding;
pub mod error;
pub mod harness;
pub mod idf;
pub mod metrics;
pub mod phonetic;
pub mod pipeline;
pub mod scalar;
pub mod scoring;
pub mod sws;
pub mod textnorm;

pub use error::{Error, Result};
pub use metrics::{NativeMetric, Orientation};
pub use pipeline::{evaluate_instance, mipe_score, MetricSpec};
pub use scalar::Scalar;
pub use textnorm::{tokenize, Sentence, Token};

pub type CostTable = phonetic::PhoneticCostTable<f64>;
pub type Embeddings = embedding::EmbeddingStore<f64>;
pub type Idf = idf::IdfDictionary<f64>;
pub type SwsSettings = sws::SwsConfig<f64>;
pub type AdjustmentSettings = scoring::AdjustmentConfig<f64>;
pub type MetricSettings = metrics::MetricConfig<f64>;
pub type ExternalMetric = metrics::ExternalScores<f64>;
pub type Score = metrics::MetricScore<f64>;
pub type Resources = pipeline::Resources<f64>;
pub type MipeResult = pipeline::MipeResult<f64>;
pub type Config = config::MipeConfig<f64>;
pub type ScoreRow = harness::ScoreRow<f64>;
pub type ScoreReport = harness::ScoreReport<f64>;
