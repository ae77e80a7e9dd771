use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::textnorm::{tokenize, Sentence};

/// One rated candidate with its references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalInstance {
    pub id: String,
    pub system: String,
    pub candidate: String,
    pub references: Vec<String>,
    pub ratings: Vec<u8>,
}

impl EvalInstance {
    pub fn candidate_sentence(&self) -> Sentence {
        tokenize(&self.candidate)
    }

    pub fn reference_sentences(&self) -> Vec<Sentence> {
        self.references.iter().map(|r| tokenize(r)).collect()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    id: String,
    system: String,
    candidate: String,
    references: Vec<String>,
    ratings: Vec<i64>,
}

fn validate(rec: Record, origin: &str, line: usize) -> Result<EvalInstance> {
    let err = |m: String| Error::parse(origin, line, m);
    if rec.id.is_empty() {
        return Err(err("empty id".into()));
    }
    if rec.references.is_empty() {
        return Err(err(format!("instance `{}` has no references", rec.id)));
    }
    if let Some(i) = rec.references.iter().position(|r| tokenize(r).is_empty()) {
        return Err(err(format!("instance `{}`: reference {i} has no words", rec.id)));
    }
    let mut ratings = Vec::with_capacity(rec.ratings.len());
    for r in rec.ratings {
        if !(1..=10).contains(&r) {
            return Err(err(format!("instance `{}`: rating {r} outside 1..=10", rec.id)));
        }
        ratings.push(r as u8);
    }
    Ok(EvalInstance {
        id: rec.id,
        system: rec.system,
        candidate: rec.candidate,
        references: rec.references,
        ratings,
    })
}

/// Reads JSON lines, one instance per line. Blank lines are skipped.
pub fn parse_dataset<R: BufRead>(reader: R, origin: &str) -> Result<Vec<EvalInstance>> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(origin, lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(&line).map_err(|e| Error::parse(origin, lineno, e.to_string()))?;
        let inst = validate(rec, origin, lineno)?;
        if !ids.insert(inst.id.clone()) {
            return Err(Error::parse(origin, lineno, format!("duplicate id `{}`", inst.id)));
        }
        out.push(inst);
    }
    Ok(out)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<EvalInstance>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(BufReader::new(file), &path.display().to_string())
}
