//! Dataset ingestion, rating aggregation, correlation and report output.

mod aggregate;
mod dataset;
mod report;
mod run;

pub use aggregate::{
    bucket_correlation, bucket_correlations, pearson, per_rating_means, variant_agreement, Bucket, LevelMean,
    RatingFusion, RatingMeans, SeriesKey, Variant,
};
pub use dataset::{load_dataset, parse_dataset, EvalInstance};
pub use report::{emit_report, ScoreReport, ScoreRow, INSTANCES_FILE};
pub use run::score_dataset;
