//! Inverse document frequency over a sentence corpus.
//!
//! `idf(w) = ln(n_docs / df(w))`, with words that occur in every sentence
//! floored at [`IDF_FLOOR`] so that every stored weight is positive. Words not
//! in the table weigh `mu_miss`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textnorm::tokenize;

pub const IDF_FLOOR: f64 = 1e-6;
pub const DEFAULT_MU_MISS: f64 = 20.0;

#[derive(Debug, Clone, PartialEq)]
pub struct IdfDictionary<T> {
    table: HashMap<String, T>,
    n_docs: u64,
    mu_miss: T,
}

impl<T: Scalar> IdfDictionary<T> {
    /// Builds the table from document frequencies. Every `df` must lie in
    /// `1..=n_docs`.
    pub fn from_document_frequencies<I, S>(n_docs: u64, dfs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        if n_docs == 0 {
            return Err(Error::EmptyCorpus);
        }
        let n = T::from_u64(n_docs).expect("count fits");
        let floor = T::lit(IDF_FLOOR);
        let mut table = HashMap::new();
        for (word, df) in dfs {
            let word = word.into();
            if df == 0 || df > n_docs {
                return Err(Error::Data(format!(
                    "document frequency {df} of `{word}` outside 1..={n_docs}"
                )));
            }
            let ratio = n / T::from_u64(df).expect("count fits");
            table.insert(word, ratio.ln().max(floor));
        }
        Ok(IdfDictionary {
            table,
            n_docs,
            mu_miss: T::lit(DEFAULT_MU_MISS),
        })
    }

    pub fn with_mu_miss(mut self, mu_miss: T) -> Self {
        self.mu_miss = mu_miss;
        self
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn mu_miss(&self) -> T {
        self.mu_miss
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Stored weight, or `mu_miss` for unseen words.
    pub fn idf(&self, word: &str) -> T {
        self.table.get(word).copied().unwrap_or(self.mu_miss)
    }

    pub fn get(&self, word: &str) -> Option<T> {
        self.table.get(word).copied()
    }

    /// Entries sorted by word.
    pub fn entries(&self) -> Vec<(&str, T)> {
        let mut v: Vec<(&str, T)> = self.table.iter().map(|(k, &v)| (k.as_str(), v)).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n_docs {} mu_miss {}", self.n_docs, self.mu_miss)?;
        for (word, v) in self.entries() {
            writeln!(out, "{word}\t{v}")?;
        }
        out.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(BufWriter::new(file)).map_err(|e| Error::io(path, e))
    }

    pub fn read_from<R: BufRead>(reader: R, origin: &str) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (n_docs, mu_miss) = loop {
            let Some((idx, line)) = lines.next() else {
                return Err(Error::parse(origin, 1, "missing `n_docs <int> mu_miss <float>` header"));
            };
            let line = line.map_err(|e| Error::parse(origin, idx + 1, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            break parse_header::<T>(&line)
                .ok_or_else(|| Error::parse(origin, idx + 1, "missing `n_docs <int> mu_miss <float>` header"))?;
        };
        if n_docs == 0 {
            return Err(Error::parse(origin, 1, "n_docs must be positive"));
        }
        if !(mu_miss > T::zero()) || !mu_miss.is_finite() {
            return Err(Error::parse(origin, 1, "mu_miss must be positive"));
        }
        let mut table = HashMap::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::parse(origin, lineno, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let (word, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, lineno, "expected `word<TAB>idf`"))?;
            if word.is_empty() {
                return Err(Error::parse(origin, lineno, "empty word"));
            }
            let v: T = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(origin, lineno, format!("non-numeric idf `{value}`")))?;
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("idf must be positive, got {value}"),
                ));
            }
            if table.insert(word.to_owned(), v).is_some() {
                return Err(Error::parse(origin, lineno, format!("duplicate word `{word}`")));
            }
        }
        Ok(IdfDictionary { table, n_docs, mu_miss })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(file), &path.display().to_string())
    }
}

fn parse_header<T: Scalar>(line: &str) -> Option<(u64, T)> {
    let f: Vec<&str> = line.split_whitespace().collect();
    match f.as_slice() {
        ["n_docs", n, "mu_miss", m] => Some((n.parse().ok()?, m.parse().ok()?)),
        _ => None,
    }
}

/// Counts, per word, the number of sentences containing it.
#[derive(Debug, Default)]
pub struct IdfBuilder {
    n_docs: u64,
    df: BTreeMap<String, u64>,
}

impl IdfBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sentence(&mut self, text: &str) {
        self.n_docs += 1;
        let s = tokenize(text);
        let distinct: HashSet<&str> = s.iter().map(|t| t.as_str()).collect();
        for w in distinct {
            *self.df.entry(w.to_owned()).or_insert(0) += 1;
        }
    }

    pub fn n_docs(&self) -> u64 {
        self.n_docs
    }

    pub fn finish<T: Scalar>(self) -> Result<IdfDictionary<T>> {
        IdfDictionary::from_document_frequencies(self.n_docs, self.df)
    }
}

/// Builds a dictionary from a stream of raw sentences.
pub fn build_idf<T, I, S>(corpus: I) -> Result<IdfDictionary<T>>
where
    T: Scalar,
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut b = IdfBuilder::new();
    for s in corpus {
        b.add_sentence(s.as_ref());
    }
    b.finish()
}

/// Builds a dictionary from a file with one sentence per line. Blank lines
/// are skipped.
pub fn build_idf_from_file<T: Scalar>(path: impl AsRef<Path>) -> Result<IdfDictionary<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut b = IdfBuilder::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if !line.trim().is_empty() {
            b.add_sentence(&line);
        }
    }
    b.finish()
}
