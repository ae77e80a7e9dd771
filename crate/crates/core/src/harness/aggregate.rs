use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::report::ScoreRow;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// How an instance's annotator ratings become observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatingFusion {
    /// Every rating is a separate observation.
    #[default]
    PerRating,
    /// One observation at the rounded mean rating.
    Mean,
}

impl RatingFusion {
    pub fn as_str(self) -> &'static str {
        match self {
            RatingFusion::PerRating => "per-rating",
            RatingFusion::Mean => "mean",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "per-rating" => Some(RatingFusion::PerRating),
            "mean" => Some(RatingFusion::Mean),
            _ => None,
        }
    }

    pub fn observations(self, ratings: &[u8]) -> Vec<u8> {
        match self {
            RatingFusion::PerRating => ratings.to_vec(),
            RatingFusion::Mean if ratings.is_empty() => Vec::new(),
            RatingFusion::Mean => {
                let sum: u32 = ratings.iter().map(|&r| u32::from(r)).sum();
                let n = ratings.len() as u32;
                // round half up
                vec![((2 * sum + n) / (2 * n)) as u8]
            }
        }
    }
}

/// Metric score without (`Raw`) or with (`Augmented`) the adjustments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Raw,
    Augmented,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Raw => "without",
            Variant::Augmented => "with",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inclusive human-rating range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucket {
    pub label: String,
    pub lo: u8,
    pub hi: u8,
}

impl Bucket {
    pub fn new(label: impl Into<String>, lo: u8, hi: u8) -> Self {
        Bucket {
            label: label.into(),
            lo,
            hi,
        }
    }

    /// `[2,10]`, `[2,5]`, `[6,10]`.
    pub fn standard() -> [Bucket; 3] {
        [
            Bucket::new("bucket1", 2, 10),
            Bucket::new("bucket2", 2, 5),
            Bucket::new("bucket3", 6, 10),
        ]
    }

    pub fn contains(&self, rating: u8) -> bool {
        (self.lo..=self.hi).contains(&rating)
    }
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}-{}]", self.label, self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesKey {
    pub system: String,
    pub metric: String,
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelMean<T> {
    pub mean: T,
    pub count: usize,
}

pub type RatingMeans<T> = BTreeMap<SeriesKey, BTreeMap<u8, LevelMean<T>>>;

/// Arithmetic mean score per (system, metric, rating level).
pub fn per_rating_means<T: Scalar>(
    rows: &[ScoreRow<T>],
    variant: Variant,
    fusion: RatingFusion,
) -> Result<RatingMeans<T>> {
    if rows.is_empty() {
        return Err(Error::EmptyResults);
    }
    let mut sums: BTreeMap<SeriesKey, BTreeMap<u8, (T, usize)>> = BTreeMap::new();
    for row in rows {
        let key = SeriesKey {
            system: row.system.clone(),
            metric: row.metric.clone(),
            variant,
        };
        let value = row.value(variant);
        let series = sums.entry(key).or_default();
        for rating in fusion.observations(&row.ratings) {
            let e = series.entry(rating).or_insert((T::zero(), 0));
            e.0 += value;
            e.1 += 1;
        }
    }
    Ok(sums
        .into_iter()
        .map(|(k, levels)| {
            let levels = levels
                .into_iter()
                .map(|(r, (sum, n))| {
                    (
                        r,
                        LevelMean {
                            mean: sum / T::from_count(n),
                            count: n,
                        },
                    )
                })
                .collect();
            (k, levels)
        })
        .collect())
}

/// Sample Pearson correlation coefficient.
pub fn pearson<T: Scalar>(xs: &[T], ys: &[T]) -> Result<T> {
    if xs.len() != ys.len() {
        return Err(Error::UndefinedCorrelation("series lengths differ"));
    }
    if xs.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two points"));
    }
    let n = T::from_count(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(Error::UndefinedCorrelation("constant series"));
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    if !r.is_finite() {
        return Err(Error::UndefinedCorrelation("non-finite input"));
    }
    Ok(crate::scalar::clamp(r, -T::one(), T::one()))
}

/// Correlation between rating level and mean score over the levels inside
/// `bucket`.
pub fn bucket_correlation<T: Scalar>(series: &BTreeMap<u8, LevelMean<T>>, bucket: &Bucket) -> Result<T> {
    let (xs, ys): (Vec<T>, Vec<T>) = series
        .iter()
        .filter(|(r, _)| bucket.contains(**r))
        .map(|(&r, m)| (T::from_count(r as usize), m.mean))
        .unzip();
    if xs.len() < 2 {
        return Err(Error::InsufficientLevels {
            bucket: bucket.to_string(),
        });
    }
    pearson(&xs, &ys)
}

pub fn bucket_correlations<T: Scalar>(means: &RatingMeans<T>, bucket: &Bucket) -> Result<BTreeMap<SeriesKey, T>> {
    means
        .iter()
        .map(|(k, series)| Ok((k.clone(), bucket_correlation(series, bucket)?)))
        .collect()
}

/// Correlation between the raw and augmented rating-mean series of each
/// (system, metric), over levels present in both and inside `bucket`.
pub fn variant_agreement<T: Scalar>(means: &RatingMeans<T>, bucket: &Bucket) -> BTreeMap<(String, String), Result<T>> {
    let mut out = BTreeMap::new();
    for (k, raw) in means.iter().filter(|(k, _)| k.variant == Variant::Raw) {
        let aug_key = SeriesKey {
            variant: Variant::Augmented,
            ..k.clone()
        };
        let Some(aug) = means.get(&aug_key) else { continue };
        let (xs, ys): (Vec<T>, Vec<T>) = raw
            .iter()
            .filter(|(r, _)| bucket.contains(**r))
            .filter_map(|(r, m)| aug.get(r).map(|a| (m.mean, a.mean)))
            .unzip();
        out.insert((k.system.clone(), k.metric.clone()), pearson(&xs, &ys));
    }
    out
}
