use rayon::prelude::*;

use super::dataset::EvalInstance;
use super::report::ScoreRow;
use crate::error::Result;
use crate::pipeline::{evaluate_instance, MetricSpec, Resources};
use crate::scalar::Scalar;

/// Scores every instance under every metric. Rows come back in dataset
/// order, metrics in the order given.
pub fn score_dataset<T: Scalar>(
    instances: &[EvalInstance],
    metrics: &[MetricSpec],
    res: &Resources<T>,
) -> Result<Vec<ScoreRow<T>>> {
    let per_instance: Vec<Vec<ScoreRow<T>>> = instances
        .par_iter()
        .map(|inst| {
            let results = evaluate_instance(inst, metrics, res)?;
            Ok(results
                .into_iter()
                .map(|r| ScoreRow {
                    id: inst.id.clone(),
                    system: inst.system.clone(),
                    metric: r.raw.name.clone(),
                    orientation: r.raw.orientation,
                    ratings: inst.ratings.clone(),
                    raw: r.surface.value,
                    augmented: r.augmented.value,
                    mwp: r.mwp_scaled,
                    phrase_score: r.phrase_score_scaled,
                    canonical_raw: r.raw.value,
                    mwp_raw: r.mwp_raw,
                    phrase_score_raw: r.phrase_score_raw,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_instance.into_iter().flatten().collect())
}
