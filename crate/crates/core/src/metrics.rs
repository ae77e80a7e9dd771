//! Sentence-level string metrics and the adapter for externally computed
//! scores.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textnorm::{Sentence, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    HigherBetter,
    LowerBetter,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::HigherBetter => "higher",
            Orientation::LowerBetter => "lower",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "higher" | "higher-better" | "higher_better" => Some(Orientation::HigherBetter),
            "lower" | "lower-better" | "lower_better" => Some(Orientation::LowerBetter),
            _ => None,
        }
    }
}

/// Inclusive value range; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreRange<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> ScoreRange<T> {
    pub fn new(lo: T, hi: T) -> Self {
        ScoreRange { lo, hi }
    }

    pub fn unit() -> Self {
        Self::new(T::zero(), T::one())
    }

    pub fn non_negative() -> Self {
        Self::new(T::zero(), T::infinity())
    }

    pub fn unbounded() -> Self {
        Self::new(T::neg_infinity(), T::infinity())
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn clamp(&self, x: T) -> T {
        crate::scalar::clamp(x, self.lo, self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricScore<T> {
    pub name: String,
    pub value: T,
    pub orientation: Orientation,
    pub range: ScoreRange<T>,
}

/// Built-in metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NativeMetric {
    Bleu,
    Nist,
    Wer,
    Ter,
}

impl NativeMetric {
    pub const ALL: [NativeMetric; 4] = [
        NativeMetric::Bleu,
        NativeMetric::Nist,
        NativeMetric::Wer,
        NativeMetric::Ter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NativeMetric::Bleu => "bleu",
            NativeMetric::Nist => "nist",
            NativeMetric::Wer => "wer",
            NativeMetric::Ter => "ter",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s))
    }

    pub fn orientation(self) -> Orientation {
        match self {
            NativeMetric::Bleu | NativeMetric::Nist => Orientation::HigherBetter,
            NativeMetric::Wer | NativeMetric::Ter => Orientation::LowerBetter,
        }
    }

    pub fn range<T: Scalar>(self) -> ScoreRange<T> {
        match self {
            NativeMetric::Bleu => ScoreRange::unit(),
            _ => ScoreRange::non_negative(),
        }
    }

    pub fn score<T: Scalar>(self, cand: &Sentence, refs: &[Sentence], cfg: &MetricConfig<T>) -> Result<MetricScore<T>> {
        let value = match self {
            NativeMetric::Bleu => bleu_with(cand, refs, cfg.bleu_max_order, cfg.bleu_epsilon)?,
            NativeMetric::Nist => nist_with(cand, refs, cfg.nist_max_order)?,
            NativeMetric::Wer => wer_value(cand, refs)?,
            NativeMetric::Ter => ter_value(cand, refs)?,
        };
        Ok(MetricScore {
            name: self.name().to_owned(),
            value,
            orientation: self.orientation(),
            range: self.range(),
        })
    }
}

impl fmt::Display for NativeMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricConfig<T> {
    pub bleu_max_order: usize,
    /// Stand-in precision for an n-gram order with no matches.
    pub bleu_epsilon: T,
    pub nist_max_order: usize,
}

impl<T: Scalar> Default for MetricConfig<T> {
    fn default() -> Self {
        MetricConfig {
            bleu_max_order: 4,
            bleu_epsilon: T::lit(1e-9),
            nist_max_order: 5,
        }
    }
}

impl<T: Scalar> MetricConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.bleu_max_order == 0 || self.nist_max_order == 0 {
            return Err(Error::Config("n-gram orders must be >= 1".into()));
        }
        if !(self.bleu_epsilon > T::zero() && self.bleu_epsilon < T::one()) {
            return Err(Error::Config("bleu_epsilon must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

type Counts<'a> = HashMap<&'a [Token], usize>;

fn ngram_counts(s: &[Token], n: usize) -> Counts<'_> {
    let mut counts = HashMap::new();
    if n > 0 && s.len() >= n {
        for g in s.windows(n) {
            *counts.entry(g).or_insert(0) += 1;
        }
    }
    counts
}

/// Per n-gram maximum count over the references.
fn max_ref_counts<'a>(refs: &'a [Sentence], n: usize) -> Counts<'a> {
    let mut out: Counts<'a> = HashMap::new();
    for r in refs {
        for (g, c) in ngram_counts(r, n) {
            let e = out.entry(g).or_insert(0);
            *e = (*e).max(c);
        }
    }
    out
}

fn clipped_matches(cand: &Counts<'_>, refs: &Counts<'_>) -> usize {
    cand.iter()
        .map(|(g, &c)| c.min(refs.get(g).copied().unwrap_or(0)))
        .sum()
}

/// Reference length closest to `c`, preferring the shorter on ties.
fn closest_ref_len(c: usize, refs: &[Sentence]) -> usize {
    refs.iter()
        .map(|r| r.len())
        .min_by_key(|&r| (r.abs_diff(c), r))
        .unwrap_or(0)
}

pub fn bleu<T: Scalar>(cand: &Sentence, refs: &[Sentence]) -> Result<MetricScore<T>> {
    NativeMetric::Bleu.score(cand, refs, &MetricConfig::default())
}

/// Sentence BLEU with clipped multi-reference counts. Orders longer than the
/// candidate are left out of the geometric mean; an order with no matches
/// contributes `epsilon` as its precision.
pub fn bleu_with<T: Scalar>(cand: &Sentence, refs: &[Sentence], max_order: usize, epsilon: T) -> Result<T> {
    if refs.is_empty() {
        return Err(Error::NoReferences);
    }
    let c = cand.len();
    if c == 0 {
        return Ok(T::zero());
    }
    let orders = max_order.min(c);
    let mut log_sum = T::zero();
    for n in 1..=orders {
        let cand_counts = ngram_counts(cand, n);
        let total = c + 1 - n;
        let matched = clipped_matches(&cand_counts, &max_ref_counts(refs, n));
        let p = if matched == 0 {
            epsilon
        } else {
            T::from_count(matched) / T::from_count(total)
        };
        log_sum += p.ln();
    }
    let r = closest_ref_len(c, refs);
    let bp = if c >= r {
        T::one()
    } else {
        (T::one() - T::from_count(r) / T::from_count(c)).exp()
    };
    Ok(crate::scalar::clamp(
        bp * (log_sum / T::from_count(orders)).exp(),
        T::zero(),
        T::one(),
    ))
}

pub fn nist<T: Scalar>(cand: &Sentence, refs: &[Sentence]) -> Result<MetricScore<T>> {
    NativeMetric::Nist.score(cand, refs, &MetricConfig::default())
}

/// Sentence NIST. Information weights come from n-gram counts pooled over
/// the references; matches are clipped by the per-reference maximum count.
pub fn nist_with<T: Scalar>(cand: &Sentence, refs: &[Sentence], max_order: usize) -> Result<T> {
    if refs.is_empty() {
        return Err(Error::NoReferences);
    }
    if cand.is_empty() {
        return Ok(T::zero());
    }
    let pooled: Vec<Counts<'_>> = (0..=max_order)
        .map(|n| {
            let mut out: Counts<'_> = HashMap::new();
            for r in refs {
                for (g, c) in ngram_counts(r, n) {
                    *out.entry(g).or_insert(0) += c;
                }
            }
            out
        })
        .collect();
    let total_ref_words: usize = refs.iter().map(|r| r.len()).sum();
    let two = T::lit(2.0);
    let info = |g: &[Token]| -> T {
        let count = pooled[g.len()][g];
        let prefix = if g.len() == 1 {
            total_ref_words
        } else {
            pooled[g.len() - 1][&g[..g.len() - 1]]
        };
        (T::from_count(prefix) / T::from_count(count)).log(two)
    };

    let mut score = T::zero();
    for n in 1..=max_order.min(cand.len()) {
        let cand_counts = ngram_counts(cand, n);
        let ref_max = max_ref_counts(refs, n);
        let mut gained = T::zero();
        // first-occurrence order keeps the float sum reproducible
        let mut seen = HashSet::new();
        for g in cand.windows(n).filter(|g| seen.insert(*g)) {
            let c = cand_counts[g];
            let m = c.min(ref_max.get(g).copied().unwrap_or(0));
            if m > 0 {
                gained += T::from_count(m) * info(g);
            }
        }
        score += gained / T::from_count(cand.len() + 1 - n);
    }

    let avg_ref = T::from_count(total_ref_words) / T::from_count(refs.len());
    let ratio = (T::from_count(cand.len()) / avg_ref).min(T::one());
    // penalty of one half at two thirds of the reference length
    let beta = T::lit(0.5).ln() / T::lit(1.5).ln().powi(2);
    let bp = (beta * ratio.ln().powi(2)).exp();
    Ok((score * bp).max(T::zero()))
}

/// Token-level Levenshtein distance with unit costs.
pub fn levenshtein<A: PartialEq>(a: &[A], b: &[A]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn check_refs(refs: &[Sentence]) -> Result<()> {
    if refs.is_empty() {
        return Err(Error::NoReferences);
    }
    if refs.iter().any(|r| r.is_empty()) {
        return Err(Error::EmptyReference);
    }
    Ok(())
}

pub fn wer<T: Scalar>(cand: &Sentence, refs: &[Sentence]) -> Result<MetricScore<T>> {
    NativeMetric::Wer.score(cand, refs, &MetricConfig::default())
}

fn wer_value<T: Scalar>(cand: &Sentence, refs: &[Sentence]) -> Result<T> {
    check_refs(refs)?;
    Ok(refs
        .iter()
        .map(|r| wer_single(cand, r))
        .fold(T::infinity(), |a, b| a.min(b)))
}

/// Word error rate against one non-empty reference.
pub fn wer_single<T: Scalar>(cand: &[Token], reference: &[Token]) -> T {
    T::from_count(levenshtein(cand, reference)) / T::from_count(reference.len())
}

pub fn ter<T: Scalar>(cand: &Sentence, refs: &[Sentence]) -> Result<MetricScore<T>> {
    NativeMetric::Ter.score(cand, refs, &MetricConfig::default())
}

fn ter_value<T: Scalar>(cand: &Sentence, refs: &[Sentence]) -> Result<T> {
    check_refs(refs)?;
    Ok(refs
        .iter()
        .map(|r| ter_single(cand, r))
        .fold(T::infinity(), |a, b| a.min(b)))
}

/// Translation edit rate against one non-empty reference.
pub fn ter_single<T: Scalar>(cand: &[Token], reference: &[Token]) -> T {
    T::from_count(ter_edits(cand, reference)) / T::from_count(reference.len())
}

const MAX_SHIFT_SIZE: usize = 10;
const MAX_SHIFT_DIST: usize = 50;

struct Alignment {
    distance: usize,
    hyp_err: Vec<bool>,
    ref_err: Vec<bool>,
    /// Hypothesis position each reference word lines up with. A reference
    /// word with no counterpart maps to the next hypothesis position.
    ref_to_hyp: Vec<usize>,
}

fn align<A: PartialEq>(h: &[A], r: &[A]) -> Alignment {
    let (n, m) = (h.len(), r.len());
    let mut d = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[i - 1][j - 1] + usize::from(h[i - 1] != r[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }

    #[derive(Clone, Copy)]
    enum Op {
        Diag,
        ExtraHyp,
        MissingRef,
    }
    let mut ops = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + usize::from(h[i - 1] != r[j - 1]) {
            ops.push(Op::Diag);
            i -= 1;
            j -= 1;
        } else if i > 0 && d[i][j] == d[i - 1][j] + 1 {
            ops.push(Op::ExtraHyp);
            i -= 1;
        } else {
            ops.push(Op::MissingRef);
            j -= 1;
        }
    }
    ops.reverse();

    let mut hyp_err = vec![false; n];
    let mut ref_err = vec![false; m];
    let mut ref_to_hyp = vec![0; m];
    let (mut hi, mut ri) = (0, 0);
    for op in ops {
        match op {
            Op::Diag => {
                let wrong = h[hi] != r[ri];
                hyp_err[hi] = wrong;
                ref_err[ri] = wrong;
                ref_to_hyp[ri] = hi;
                hi += 1;
                ri += 1;
            }
            Op::ExtraHyp => {
                hyp_err[hi] = true;
                hi += 1;
            }
            Op::MissingRef => {
                ref_err[ri] = true;
                ref_to_hyp[ri] = hi;
                ri += 1;
            }
        }
    }
    Alignment {
        distance: d[n][m],
        hyp_err,
        ref_err,
        ref_to_hyp,
    }
}

/// Moves `words[start..start + len]` so that it lands before original
/// position `target`.
fn perform_shift<A: Clone>(words: &[A], start: usize, len: usize, target: usize) -> Vec<A> {
    let block = &words[start..start + len];
    let mut rest: Vec<A> = Vec::with_capacity(words.len());
    rest.extend_from_slice(&words[..start]);
    rest.extend_from_slice(&words[start + len..]);
    let pos = if target > start + len { target - len } else { target }.min(rest.len());
    let mut out = Vec::with_capacity(words.len());
    out.extend_from_slice(&rest[..pos]);
    out.extend_from_slice(block);
    out.extend_from_slice(&rest[pos..]);
    out
}

/// Best single shift, if any lowers the edit distance. Returns the shifted
/// hypothesis and its new distance.
fn best_shift<A: PartialEq + Clone>(h: &[A], r: &[A], al: &Alignment) -> Option<(Vec<A>, usize)> {
    let mut best: Option<(Vec<A>, usize)> = None;
    for start_h in 0..h.len() {
        for start_r in 0..r.len() {
            if start_h.abs_diff(start_r) > MAX_SHIFT_DIST {
                continue;
            }
            let mut len = 0;
            while len < MAX_SHIFT_SIZE
                && start_h + len < h.len()
                && start_r + len < r.len()
                && h[start_h + len] == r[start_r + len]
            {
                len += 1;
                if !al.hyp_err[start_h..start_h + len].iter().any(|&e| e) {
                    continue;
                }
                if !al.ref_err[start_r..start_r + len].iter().any(|&e| e) {
                    continue;
                }
                let anchor = al.ref_to_hyp[start_r];
                if start_h <= anchor && anchor < start_h + len {
                    continue;
                }
                let mut prev = None;
                for offset in -1..len as isize {
                    let k = start_r as isize + offset;
                    let target = if k < 0 { 0 } else { al.ref_to_hyp[k as usize] + 1 };
                    if prev == Some(target) {
                        continue;
                    }
                    prev = Some(target);
                    let shifted = perform_shift(h, start_h, len, target);
                    let dist = levenshtein(&shifted, r);
                    if best.as_ref().map_or(dist < al.distance, |(_, b)| dist < *b) {
                        best = Some((shifted, dist));
                    }
                }
            }
        }
    }
    best
}

/// Shift count plus remaining edit distance after greedy block shifting.
pub fn ter_edits<A: PartialEq + Clone>(cand: &[A], reference: &[A]) -> usize {
    let mut hyp = cand.to_vec();
    let mut shifts = 0;
    loop {
        let al = align(&hyp, reference);
        if al.distance == 0 {
            return shifts;
        }
        match best_shift(&hyp, reference, &al) {
            Some((shifted, _)) => {
                hyp = shifted;
                shifts += 1;
            }
            None => return shifts + al.distance,
        }
    }
}

/// Scores for one metric supplied from outside, keyed by instance id.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalScores<T> {
    pub name: String,
    pub orientation: Orientation,
    pub range: ScoreRange<T>,
    scores: HashMap<String, T>,
}

impl<T: Scalar> ExternalScores<T> {
    /// Parses `name <NAME> orientation <higher|lower> [range <lo> <hi>]`
    /// followed by `id<TAB>value` lines.
    pub fn from_reader<R: BufRead>(reader: R, origin: &str) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = loop {
            match lines.next() {
                None => return Err(Error::parse(origin, 1, "missing header line")),
                Some((idx, line)) => {
                    let line = line.map_err(|e| Error::parse(origin, idx + 1, e.to_string()))?;
                    if !line.trim().is_empty() {
                        break line;
                    }
                }
            }
        };
        let (name, orientation, range) = parse_external_header(&header).map_err(|m| Error::parse(origin, 1, m))?;
        let mut scores = HashMap::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::parse(origin, lineno, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let (id, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, lineno, "expected `instance_id<TAB>value`"))?;
            let v: T = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(origin, lineno, format!("non-numeric value `{value}`")))?;
            if !v.is_finite() || !range.contains(v) {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("value {value} outside declared range [{}, {}]", range.lo, range.hi),
                ));
            }
            if scores.insert(id.to_owned(), v).is_some() {
                return Err(Error::parse(origin, lineno, format!("duplicate instance id `{id}`")));
            }
        }
        Ok(ExternalScores {
            name,
            orientation,
            range,
            scores,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(BufReader::new(file), &path.display().to_string())
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn value(&self, id: &str) -> Option<T> {
        self.scores.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Result<MetricScore<T>> {
        let value = self.value(id).ok_or_else(|| Error::MissingExternalScore {
            metric: self.name.clone(),
            id: id.to_owned(),
        })?;
        Ok(MetricScore {
            name: self.name.clone(),
            value,
            orientation: self.orientation,
            range: self.range,
        })
    }
}

pub fn load_external_scores<T: Scalar>(path: impl AsRef<Path>) -> Result<ExternalScores<T>> {
    ExternalScores::load(path)
}

fn parse_external_header<T: Scalar>(line: &str) -> std::result::Result<(String, Orientation, ScoreRange<T>), String> {
    let f: Vec<&str> = line.split_whitespace().collect();
    let mut name = None;
    let mut orientation = None;
    let mut range = ScoreRange::unbounded();
    let mut i = 0;
    while i < f.len() {
        match f[i] {
            "name" if i + 1 < f.len() => {
                name = Some(f[i + 1].to_owned());
                i += 2;
            }
            "orientation" if i + 1 < f.len() => {
                orientation =
                    Some(Orientation::parse(f[i + 1]).ok_or_else(|| format!("unknown orientation `{}`", f[i + 1]))?);
                i += 2;
            }
            "range" if i + 2 < f.len() => {
                let lo: T = f[i + 1]
                    .parse()
                    .map_err(|_| format!("bad range bound `{}`", f[i + 1]))?;
                let hi: T = f[i + 2]
                    .parse()
                    .map_err(|_| format!("bad range bound `{}`", f[i + 2]))?;
                if !(lo <= hi) {
                    return Err(format!("empty range [{lo}, {hi}]"));
                }
                range = ScoreRange::new(lo, hi);
                i += 3;
            }
            other => return Err(format!("unexpected header field `{other}`")),
        }
    }
    let name = name.ok_or("header lacks `name`")?;
    if NativeMetric::from_name(&name).is_some() {
        return Err(format!("external metric name `{name}` collides with a built-in metric"));
    }
    let orientation = orientation.ok_or("header lacks `orientation`")?;
    Ok((name, orientation, range))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(words: &[&str]) -> Sentence {
        Sentence::from_words(words)
    }

    fn bleu_v(c: &[&str], refs: &[&[&str]]) -> f64 {
        let refs: Vec<Sentence> = refs.iter().map(|r| s(r)).collect();
        bleu::<f64>(&s(c), &refs).unwrap().value
    }

    fn nist_v(c: &[&str], refs: &[&[&str]]) -> f64 {
        let refs: Vec<Sentence> = refs.iter().map(|r| s(r)).collect();
        nist::<f64>(&s(c), &refs).unwrap().value
    }

    // Recursive edit distance, no table.
    fn brute_lev(a: &[&str], b: &[&str]) -> usize {
        match (a.split_first(), b.split_first()) {
            (None, _) => b.len(),
            (_, None) => a.len(),
            (Some((x, ra)), Some((y, rb))) => (brute_lev(ra, rb) + usize::from(x != y))
                .min(brute_lev(ra, b) + 1)
                .min(brute_lev(a, rb) + 1),
        }
    }

    // Every way of moving one contiguous block to another position.
    fn all_single_shifts(h: &[&'static str]) -> Vec<Vec<&'static str>> {
        let mut out = Vec::new();
        for start in 0..h.len() {
            for len in 1..=h.len() - start {
                let block = &h[start..start + len];
                let rest: Vec<&str> = h[..start].iter().chain(&h[start + len..]).copied().collect();
                for pos in 0..=rest.len() {
                    let mut v = rest[..pos].to_vec();
                    v.extend_from_slice(block);
                    v.extend_from_slice(&rest[pos..]);
                    out.push(v);
                }
            }
        }
        out
    }

    #[test]
    fn bleu_perfect_match() {
        assert_eq!(
            bleu_v(
                &["koi", "dusra", "human", "being", "yeh", "kahe"],
                &[&["koi", "dusra", "human", "being", "yeh", "kahe"]]
            ),
            1.0
        );
        assert_eq!(bleu_v(&["a"], &[&["a"]]), 1.0);
    }

    #[test]
    fn bleu_disjoint_is_epsilon_scale() {
        let v = bleu_v(&["x", "y", "z"], &[&["a", "b", "c"]]);
        assert!(v > 0.0 && v <= 1e-9 * (1.0 + 1e-12), "{v}");
    }

    #[test]
    fn bleu_short_candidate_brevity_penalty() {
        // p1 = 3/3, p2 = 2/2, p3 = 1/1; no 4-grams in the candidate;
        // bp = exp(1 - 4/3)
        let v = bleu_v(&["the", "cat", "sat"], &[&["the", "cat", "sat", "down"]]);
        assert!((v - (-1.0f64 / 3.0).exp()).abs() < 1e-12);
        assert!((v - 0.716_531_310_573_789_2).abs() < 1e-12);
    }

    #[test]
    fn bleu_clipping_and_closest_length() {
        // p1 = 3/4 ("the" clipped to 2), p2 = 2/3, p3 = p4 = eps; the
        // closest reference has length 4 so bp = 1
        let v = bleu_v(
            &["the", "the", "the", "cat"],
            &[&["the", "cat", "is", "here"], &["the", "the", "dog"]],
        );
        let expected = (0.75f64 * (2.0 / 3.0) * 1e-9 * 1e-9).powf(0.25);
        assert!((v - expected).abs() < 1e-15, "{v} vs {expected}");
    }

    #[test]
    fn bleu_rejects_missing_references() {
        assert!(matches!(bleu::<f64>(&s(&["a"]), &[]), Err(Error::NoReferences)));
        assert_eq!(bleu_v(&[], &[&["a"]]), 0.0);
    }

    #[test]
    fn nist_self_scores() {
        assert!((nist_v(&["a", "b", "c"], &[&["a", "b", "c"]]) - 3f64.log2()).abs() < 1e-12);
        // unigrams 4*1/4, bigrams (0+1+0)/3, trigrams (1+0)/2, 4-gram 0
        let v = nist_v(&["a", "b", "a", "b"], &[&["a", "b", "a", "b"]]);
        assert!((v - 11.0 / 6.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn nist_is_bit_reproducible() {
        let c = ["a", "b", "c", "d", "a", "b", "e", "f", "c", "d", "g"];
        let r: &[&str] = &["a", "b", "c", "d", "e", "f", "g", "a", "b"];
        let first = nist_v(&c, &[r, &["c", "d", "g", "a"]]);
        for _ in 0..50 {
            assert_eq!(nist_v(&c, &[r, &["c", "d", "g", "a"]]).to_bits(), first.to_bits());
        }
    }

    #[test]
    fn nist_no_overlap_is_zero() {
        assert_eq!(nist_v(&["x", "y"], &[&["a", "b", "c"]]), 0.0);
    }

    #[test]
    fn nist_duplicate_reference_no_effect() {
        let r: &[&str] = &["koi", "dusra", "human", "being"];
        assert_eq!(nist_v(r, &[r]), nist_v(r, &[r, r]));
    }

    #[test]
    fn nist_brevity_half_at_two_thirds() {
        // cand is 2/3 of the reference length; every unigram of the
        // candidate occurs once in a six-word reference.
        let v = nist_v(&["a", "b", "c", "d"], &[&["a", "b", "c", "d", "e", "f"]]);
        // unigram info log2(6) each; bigrams ab,bc,cd info log2(1/1) = 0
        assert!((v - 0.5 * 6f64.log2()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn wer_examples() {
        let w = |c: &[&str], refs: &[&[&str]]| {
            let refs: Vec<Sentence> = refs.iter().map(|r| s(r)).collect();
            wer::<f64>(&s(c), &refs).unwrap().value
        };
        assert_eq!(w(&["a", "b"], &[&["a", "b"]]), 0.0);
        assert!((w(&["a", "b", "c"], &[&["a", "x", "c"]]) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(w(&["a", "b"], &[&["a", "b"], &["a", "b", "c", "d"]]), 0.0);
        assert!(matches!(
            wer::<f64>(&s(&["a"]), &[Sentence::default()]),
            Err(Error::EmptyReference)
        ));
    }

    #[test]
    fn ter_examples() {
        let t = |c: &[&str], r: &[&str]| ter::<f64>(&s(c), &[s(r)]).unwrap().value;
        assert_eq!(t(&["a", "b"], &["a", "b"]), 0.0);
        assert!((t(&["c", "a", "b"], &["a", "b", "c"]) - 1.0 / 3.0).abs() < 1e-15);
        assert!((t(&["a", "b", "c"], &["a", "x", "c"]) - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            ter::<f64>(&s(&["a"]), &[Sentence::default()]),
            Err(Error::EmptyReference)
        ));
    }

    #[test]
    fn ter_single_shift_oracle() {
        let h = ["c", "a", "b"];
        let r = ["a", "b", "c"];
        let oracle = all_single_shifts(&h)
            .iter()
            .map(|v| 1 + brute_lev(v, &r))
            .chain([brute_lev(&h, &r)])
            .min()
            .unwrap();
        assert_eq!(oracle, 1);
        assert_eq!(ter_edits(&h, &r), oracle);

        // a phrase moved from the end to the front
        let h = ["the", "market", "in", "went", "i"];
        let r = ["i", "went", "in", "the", "market"];
        assert!(ter_edits(&h, &r) < levenshtein(&h, &r));
    }

    #[test]
    fn perform_shift_cases() {
        let w = ["a", "b", "c", "d", "e"];
        assert_eq!(perform_shift(&w, 3, 2, 1), ["a", "d", "e", "b", "c"]);
        assert_eq!(perform_shift(&w, 0, 2, 4), ["c", "d", "a", "b", "e"]);
        assert_eq!(perform_shift(&w, 0, 1, 9), ["b", "c", "d", "e", "a"]);
    }

    #[test]
    fn metric_names_round_trip() {
        for m in NativeMetric::ALL {
            assert_eq!(NativeMetric::from_name(m.name()), Some(m));
        }
        assert_eq!(NativeMetric::from_name("BLEU"), Some(NativeMetric::Bleu));
        assert_eq!(NativeMetric::from_name("bs"), None);
    }

    #[test]
    fn external_scores_parse() {
        let ext = ExternalScores::<f64>::from_reader(
            "name BS orientation higher range 0 1\n42\t0.851\n".as_bytes(),
            "bs.tsv",
        )
        .unwrap();
        assert_eq!(ext.name, "BS");
        assert_eq!(ext.orientation, Orientation::HigherBetter);
        assert_eq!(ext.value("42"), Some(0.851));
        let m = ext.get("42").unwrap();
        assert_eq!((m.value, m.range), (0.851, ScoreRange::unit()));
        assert!(matches!(ext.get("43"), Err(Error::MissingExternalScore { .. })));
    }

    #[test]
    fn external_scores_errors() {
        let bad = |text: &str| ExternalScores::<f64>::from_reader(text.as_bytes(), "x").unwrap_err();
        assert!(matches!(
            bad("name BS orientation higher range 0 1\n1\t0.5\n1\t0.6\n"),
            Error::Parse { line: 3, .. }
        ));
        assert!(matches!(
            bad("name BS orientation higher range 0 1\n1\t1.2\n"),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(
            bad("name BS orientation higher\n1\tabc\n"),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(bad("name BS\n1\t0.5\n"), Error::Parse { line: 1, .. }));
        assert!(matches!(
            bad("name bleu orientation higher\n"),
            Error::Parse { line: 1, .. }
        ));
        assert!(matches!(bad(""), Error::Parse { .. }));
    }

    fn sentence_strategy(max: usize) -> impl Strategy<Value = Vec<&'static str>> {
        proptest::collection::vec(proptest::sample::select(vec!["a", "b", "c", "d"]), 1..=max)
    }

    proptest! {
        #[test]
        fn wer_matches_recursive_oracle(c in sentence_strategy(6), r in sentence_strategy(6)) {
            let expected = brute_lev(&c, &r) as f64 / r.len() as f64;
            prop_assert_eq!(wer_single::<f64>(&s(&c), &s(&r)), expected);
        }

        #[test]
        fn ter_never_exceeds_wer(c in sentence_strategy(8), r in sentence_strategy(8)) {
            let t = ter_single::<f64>(&s(&c), &s(&r));
            prop_assert!(t <= wer_single::<f64>(&s(&c), &s(&r)));
            prop_assert!(t >= 0.0);
        }

        #[test]
        fn reference_order_irrelevant(c in sentence_strategy(6), r1 in sentence_strategy(6), r2 in sentence_strategy(6)) {
            let a = [s(&r1), s(&r2)];
            let b = [s(&r2), s(&r1)];
            let cand = s(&c);
            for m in NativeMetric::ALL {
                let x = m.score::<f64>(&cand, &a, &MetricConfig::default()).unwrap().value;
                let y = m.score::<f64>(&cand, &b, &MetricConfig::default()).unwrap().value;
                prop_assert!((x - y).abs() <= 1e-12, "{} {} {}", m, x, y);
            }
        }

        #[test]
        fn identical_is_best(c in sentence_strategy(8)) {
            let cand = s(&c);
            let refs = [cand.clone()];
            prop_assert!((bleu::<f64>(&cand, &refs).unwrap().value - 1.0).abs() <= 1e-9);
            prop_assert_eq!(wer::<f64>(&cand, &refs).unwrap().value, 0.0);
            prop_assert_eq!(ter::<f64>(&cand, &refs).unwrap().value, 0.0);
            let b = bleu::<f64>(&cand, &refs).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&b));
        }
    }
}
