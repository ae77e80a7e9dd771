use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::aggregate::{
    bucket_correlation, per_rating_means, variant_agreement, Bucket, RatingFusion, RatingMeans, SeriesKey, Variant,
};
use crate::error::{Error, Result};
use crate::metrics::Orientation;
use crate::scalar::Scalar;

pub const INSTANCES_FILE: &str = "instances.csv";
pub const RATING_MEANS_CSV: &str = "rating_means.csv";
pub const RATING_MEANS_TXT: &str = "rating_means.txt";
pub const CORRELATIONS_CSV: &str = "correlations.csv";
pub const CORRELATIONS_TXT: &str = "correlations.txt";
pub const AGREEMENT_CSV: &str = "mipe_vs_raw.csv";

const HEADER: [&str; 12] = [
    "id",
    "system",
    "metric",
    "raw",
    "augmented",
    "mwp",
    "phrase_score",
    "ratings",
    "orientation",
    "canonical_raw",
    "mwp_raw",
    "phrase_score_raw",
];

/// One instance scored under one metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow<T> {
    pub id: String,
    pub system: String,
    pub metric: String,
    pub orientation: Orientation,
    pub ratings: Vec<u8>,
    /// Metric on the untouched candidate.
    pub raw: T,
    pub augmented: T,
    /// Penalty as applied to the metric.
    pub mwp: T,
    /// Credit as applied to the metric.
    pub phrase_score: T,
    /// Metric on the canonicalized candidate.
    pub canonical_raw: T,
    pub mwp_raw: T,
    pub phrase_score_raw: T,
}

impl<T: Scalar> ScoreRow<T> {
    pub fn value(&self, variant: Variant) -> T {
        match variant {
            Variant::Raw => self.raw,
            Variant::Augmented => self.augmented,
        }
    }
}

/// Scored rows plus the rating fusion used to aggregate them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport<T> {
    pub fusion: RatingFusion,
    pub rows: Vec<ScoreRow<T>>,
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Data(format!("{}: {other:?}", path.display())),
    }
}

impl<T: Scalar> ScoreReport<T> {
    pub fn new(fusion: RatingFusion, rows: Vec<ScoreRow<T>>) -> Self {
        ScoreReport { fusion, rows }
    }

    /// Both variants' rating means, ready for the tables.
    pub fn rating_means(&self) -> Result<RatingMeans<T>> {
        let mut means = per_rating_means(&self.rows, Variant::Raw, self.fusion)?;
        means.extend(per_rating_means(&self.rows, Variant::Augmented, self.fusion)?);
        Ok(means)
    }

    /// Reads back an instance dump written by [`emit_report`].
    pub fn read_instances(path: impl AsRef<Path>, fusion: RatingFusion) -> Result<Self> {
        let path = path.as_ref();
        let origin = path.display().to_string();
        let mut reader = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
        let headers = reader.headers().map_err(|e| csv_err(path, e))?.clone();
        if headers.iter().ne(HEADER) {
            return Err(Error::parse(&origin, 1, "unexpected header"));
        }
        let mut rows = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| csv_err(path, e))?;
            let num = |col: usize| -> Result<T> {
                rec[col]
                    .parse()
                    .map_err(|_| Error::parse(&origin, line, format!("`{}` is not a number", &rec[col])))
            };
            let ratings = if rec[7].is_empty() {
                Vec::new()
            } else {
                rec[7]
                    .split(';')
                    .map(|r| match r.parse::<u8>() {
                        Ok(v) if (1..=10).contains(&v) => Ok(v),
                        _ => Err(Error::parse(&origin, line, format!("bad rating `{r}`"))),
                    })
                    .collect::<Result<_>>()?
            };
            let orientation = Orientation::parse(&rec[8])
                .ok_or_else(|| Error::parse(&origin, line, format!("bad orientation `{}`", &rec[8])))?;
            rows.push(ScoreRow {
                id: rec[0].to_owned(),
                system: rec[1].to_owned(),
                metric: rec[2].to_owned(),
                raw: num(3)?,
                augmented: num(4)?,
                mwp: num(5)?,
                phrase_score: num(6)?,
                ratings,
                orientation,
                canonical_raw: num(9)?,
                mwp_raw: num(10)?,
                phrase_score_raw: num(11)?,
            });
        }
        Ok(ScoreReport { fusion, rows })
    }
}

fn first_seen<'a>(items: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in items {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_owned());
        }
    }
    out
}

fn fmt_opt<T: Scalar>(v: Option<T>, width: usize) -> String {
    match v {
        Some(v) => format!("{:>width$.3}", v.to_f64_lossy()),
        None => format!("{:>width$}", "-"),
    }
}

struct Layout {
    systems: Vec<String>,
    metrics: Vec<String>,
}

fn instances_csv<T: Scalar>(rows: &[ScoreRow<T>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let e = |e: csv::Error| Error::Data(e.to_string());
    w.write_record(HEADER).map_err(e)?;
    for r in rows {
        let ratings: Vec<String> = r.ratings.iter().map(u8::to_string).collect();
        w.write_record([
            r.id.clone(),
            r.system.clone(),
            r.metric.clone(),
            r.raw.to_string(),
            r.augmented.to_string(),
            r.mwp.to_string(),
            r.phrase_score.to_string(),
            ratings.join(";"),
            r.orientation.as_str().to_owned(),
            r.canonical_raw.to_string(),
            r.mwp_raw.to_string(),
            r.phrase_score_raw.to_string(),
        ])
        .map_err(e)?;
    }
    w.into_inner().map_err(|err| Error::Data(err.to_string()))
}

fn means_csv<T: Scalar>(means: &RatingMeans<T>) -> String {
    let mut out = String::from("system,metric,variant,rating,mean,count\n");
    for (k, levels) in means {
        for (r, m) in levels {
            let _ = writeln!(
                out,
                "{},{},{},{r},{},{}",
                k.system, k.metric, k.variant, m.mean, m.count
            );
        }
    }
    out
}

fn means_txt<T: Scalar>(means: &RatingMeans<T>, layout: &Layout, fusion: RatingFusion) -> String {
    let mut out = format!("# rating fusion: {}\n", fusion.as_str());
    let col = layout.metrics.iter().map(|m| m.len()).max().unwrap_or(0) + " (without)".len() + 2;
    for system in &layout.systems {
        let _ = write!(out, "\n{system}\n{:>6}", "rating");
        for m in &layout.metrics {
            for v in [Variant::Raw, Variant::Augmented] {
                let _ = write!(out, "{:>col$}", format!("{m} ({v})"));
            }
        }
        out.push('\n');
        let levels = table_levels(means, system);
        for r in levels {
            let _ = write!(out, "{r:>6}");
            for m in &layout.metrics {
                for variant in [Variant::Raw, Variant::Augmented] {
                    let key = SeriesKey {
                        system: system.clone(),
                        metric: m.clone(),
                        variant,
                    };
                    let v = means.get(&key).and_then(|l| l.get(&r)).map(|l| l.mean);
                    out.push_str(&fmt_opt(v, col));
                }
            }
            out.push('\n');
        }
    }
    out
}

// Rating rows shown in the tables; rating 1 lies outside every bucket.
fn table_levels<T>(means: &RatingMeans<T>, system: &str) -> Vec<u8> {
    let mut levels: Vec<u8> = means
        .iter()
        .filter(|(k, _)| k.system == system)
        .flat_map(|(_, l)| l.keys().copied())
        .filter(|&r| r >= 2)
        .collect();
    levels.sort_unstable();
    levels.dedup();
    levels
}

type Correlations<T> = BTreeMap<(String, String, String, Variant), Option<T>>;

fn correlations<T: Scalar>(means: &RatingMeans<T>, buckets: &[Bucket]) -> Correlations<T> {
    let mut out = BTreeMap::new();
    for (k, series) in means {
        for b in buckets {
            out.insert(
                (k.system.clone(), k.metric.clone(), b.label.clone(), k.variant),
                bucket_correlation(series, b).ok(),
            );
        }
    }
    out
}

fn csv_num<T: Scalar>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_owned(), |v| v.to_string())
}

fn correlations_csv<T: Scalar>(corr: &Correlations<T>, layout: &Layout, buckets: &[Bucket]) -> String {
    let mut out = String::from("system,metric,bucket,lo,hi,without,with\n");
    for s in &layout.systems {
        for m in &layout.metrics {
            for b in buckets {
                let get = |v| corr.get(&(s.clone(), m.clone(), b.label.clone(), v)).copied().flatten();
                let _ = writeln!(
                    out,
                    "{s},{m},{},{},{},{},{}",
                    b.label,
                    b.lo,
                    b.hi,
                    csv_num(get(Variant::Raw)),
                    csv_num(get(Variant::Augmented))
                );
            }
        }
    }
    out
}

fn correlations_txt<T: Scalar>(
    corr: &Correlations<T>,
    layout: &Layout,
    buckets: &[Bucket],
    fusion: RatingFusion,
) -> String {
    let mut out = format!(
        "# rating fusion: {}\n# pearson r over (rating, mean score) pairs\n",
        fusion.as_str()
    );
    let mw = layout.metrics.iter().map(String::len).max().unwrap_or(0).max(6) + 2;
    for s in &layout.systems {
        let col = buckets
            .iter()
            .map(|b| format!("{} {}-{} (without)", b.label, b.lo, b.hi).len())
            .max()
            .unwrap_or(0)
            + 2;
        let _ = write!(out, "\n{s}\n{:<mw$}", "metric");
        for b in buckets {
            for v in [Variant::Raw, Variant::Augmented] {
                let _ = write!(out, "{:>col$}", format!("{} {}-{} ({v})", b.label, b.lo, b.hi));
            }
        }
        out.push('\n');
        for m in &layout.metrics {
            let _ = write!(out, "{m:<mw$}");
            for b in buckets {
                for v in [Variant::Raw, Variant::Augmented] {
                    let r = corr.get(&(s.clone(), m.clone(), b.label.clone(), v)).copied().flatten();
                    out.push_str(&fmt_opt(r, col));
                }
            }
            out.push('\n');
        }
    }
    out
}

fn agreement_csv<T: Scalar>(means: &RatingMeans<T>, layout: &Layout) -> String {
    let all = &Bucket::standard()[0];
    let agreement = variant_agreement(means, all);
    let mut out = String::from("system,metric,r\n");
    for s in &layout.systems {
        for m in &layout.metrics {
            let r = agreement
                .get(&(s.clone(), m.clone()))
                .and_then(|r| r.as_ref().ok().copied());
            let _ = writeln!(out, "{s},{m},{}", csv_num(r));
        }
    }
    out
}

/// Writes the instance dump, rating-mean tables, bucket correlations and the
/// raw/augmented agreement table into `out_dir`. Returns the written paths.
pub fn emit_report<T: Scalar>(report: &ScoreReport<T>, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    if report.rows.is_empty() {
        return Err(Error::EmptyResults);
    }
    let layout = Layout {
        systems: first_seen(report.rows.iter().map(|r| r.system.as_str())),
        metrics: first_seen(report.rows.iter().map(|r| r.metric.as_str())),
    };
    let buckets = Bucket::standard();
    let means = report.rating_means()?;
    let corr = correlations(&means, &buckets);
    let files: Vec<(&str, Vec<u8>)> = vec![
        (INSTANCES_FILE, instances_csv(&report.rows)?),
        (RATING_MEANS_CSV, means_csv(&means).into_bytes()),
        (RATING_MEANS_TXT, means_txt(&means, &layout, report.fusion).into_bytes()),
        (
            CORRELATIONS_CSV,
            correlations_csv(&corr, &layout, &buckets).into_bytes(),
        ),
        (
            CORRELATIONS_TXT,
            correlations_txt(&corr, &layout, &buckets, report.fusion).into_bytes(),
        ),
        (AGREEMENT_CSV, agreement_csv(&means, &layout).into_bytes()),
    ];
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, metric: &str, ratings: &[u8], raw: f64, aug: f64) -> ScoreRow<f64> {
        ScoreRow {
            id: id.into(),
            system: "WAC".into(),
            metric: metric.into(),
            orientation: Orientation::HigherBetter,
            ratings: ratings.to_vec(),
            raw,
            augmented: aug,
            mwp: 0.1,
            phrase_score: 0.25,
            canonical_raw: raw,
            mwp_raw: 1.5,
            phrase_score_raw: -0.125,
        }
    }

    fn sample() -> ScoreReport<f64> {
        let rows = (1..=10u8)
            .flat_map(|r| {
                let id = format!("i{r}");
                [
                    row(&id, "bleu", &[r, (r % 10) + 1], 0.05 * r as f64, 0.09 * r as f64),
                    row(&id, "wer", &[r, (r % 10) + 1], 1.0 - 0.05 * r as f64, 0.5),
                ]
            })
            .collect();
        ScoreReport::new(RatingFusion::PerRating, rows)
    }

    #[test]
    fn empty_report_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("out");
        let r = ScoreReport::<f64>::new(RatingFusion::PerRating, Vec::new());
        assert!(matches!(emit_report(&r, &out), Err(Error::EmptyResults)));
        assert!(!out.exists());
    }

    #[test]
    fn single_instance_one_row_per_metric() {
        let dir = tempfile::tempdir().unwrap();
        let r = ScoreReport::new(
            RatingFusion::PerRating,
            vec![row("1", "bleu", &[9, 8], 0.5, 0.7), row("1", "nist", &[9, 8], 1.5, 1.7)],
        );
        emit_report(&r, dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join(INSTANCES_FILE)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("id,system,metric,raw,augmented,mwp,phrase_score"));
        assert!(lines[1].starts_with("1,WAC,bleu,0.5,0.7,"));
    }

    #[test]
    fn round_trip_instances() {
        let dir = tempfile::tempdir().unwrap();
        let r = sample();
        emit_report(&r, dir.path()).unwrap();
        let back =
            ScoreReport::<f64>::read_instances(dir.path().join(INSTANCES_FILE), RatingFusion::PerRating).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn output_is_deterministic() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let pa = emit_report(&sample(), a.path()).unwrap();
        let pb = emit_report(&sample(), b.path()).unwrap();
        assert_eq!(pa.len(), 6);
        for (x, y) in pa.iter().zip(&pb) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
        }
    }

    #[test]
    fn tables_skip_rating_one() {
        let dir = tempfile::tempdir().unwrap();
        emit_report(&sample(), dir.path()).unwrap();
        let txt = fs::read_to_string(dir.path().join(RATING_MEANS_TXT)).unwrap();
        assert!(txt.starts_with("# rating fusion: per-rating"));
        let rows: Vec<&str> = txt
            .lines()
            .filter(|l| l.trim_start().starts_with(char::is_numeric))
            .collect();
        assert_eq!(rows.len(), 9);
        assert!(rows[0].trim_start().starts_with('2'));
        let corr = fs::read_to_string(dir.path().join(CORRELATIONS_CSV)).unwrap();
        assert!(corr.contains("WAC,bleu,bucket1,2,10,"));
        assert_eq!(corr.lines().count(), 1 + 2 * 3);
    }

    #[test]
    fn undefined_correlation_is_na() {
        let dir = tempfile::tempdir().unwrap();
        let r = ScoreReport::new(RatingFusion::PerRating, vec![row("1", "bleu", &[9], 0.5, 0.7)]);
        emit_report(&r, dir.path()).unwrap();
        let corr = fs::read_to_string(dir.path().join(CORRELATIONS_CSV)).unwrap();
        assert!(corr.lines().skip(1).all(|l| l.ends_with("NA,NA")));
    }

    #[test]
    fn rejects_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        fs::write(&p, "a,b\n1,2\n").unwrap();
        assert!(ScoreReport::<f64>::read_instances(&p, RatingFusion::PerRating).is_err());
    }
}
