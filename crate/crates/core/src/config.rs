//! TOML configuration covering every tunable parameter. Missing keys fall
//! back to the defaults.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::RatingFusion;
use crate::metrics::MetricConfig;
use crate::phonetic::PhoneticCostTable;
use crate::scalar::Scalar;
use crate::scoring::AdjustmentConfig;
use crate::sws::SwsConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct PhoneticSection<T> {
    pub add_default: T,
    pub del_default: T,
    pub sub_default: T,
    pub rho_sub: T,
    pub rho_add: T,
    pub rho_del: T,
    pub rho_sil: T,
    pub vowel_pairs_similar: bool,
    /// Two-character strings, e.g. `"ck"`.
    pub similar_pairs: Vec<String>,
    pub vowels: String,
    pub silent_chars: String,
}

impl<T: Scalar> Default for PhoneticSection<T> {
    fn default() -> Self {
        PhoneticSection::from(&PhoneticCostTable::default())
    }
}

impl<T: Scalar> From<&PhoneticCostTable<T>> for PhoneticSection<T> {
    fn from(t: &PhoneticCostTable<T>) -> Self {
        PhoneticSection {
            add_default: t.add_default,
            del_default: t.del_default,
            sub_default: t.sub_default,
            rho_sub: t.rho_sub,
            rho_add: t.rho_add,
            rho_del: t.rho_del,
            rho_sil: t.rho_sil,
            vowel_pairs_similar: t.vowel_pairs_similar,
            similar_pairs: t.similar_pairs().map(|(a, b)| format!("{a}{b}")).collect(),
            vowels: t.vowels().collect(),
            silent_chars: t.silent_chars().collect(),
        }
    }
}

impl<T: Scalar> PhoneticSection<T> {
    pub fn to_table(&self) -> Result<PhoneticCostTable<T>> {
        let mut t = PhoneticCostTable::default();
        t.add_default = self.add_default;
        t.del_default = self.del_default;
        t.sub_default = self.sub_default;
        t.rho_sub = self.rho_sub;
        t.rho_add = self.rho_add;
        t.rho_del = self.rho_del;
        t.rho_sil = self.rho_sil;
        t.vowel_pairs_similar = self.vowel_pairs_similar;
        let mut pairs = Vec::with_capacity(self.similar_pairs.len());
        for p in &self.similar_pairs {
            let cs: Vec<char> = p.chars().collect();
            match cs.as_slice() {
                [a, b] => pairs.push((*a, *b)),
                _ => {
                    return Err(Error::Config(format!(
                        "similar pair `{p}` must be exactly two characters"
                    )))
                }
            }
        }
        t.set_similar_pairs(pairs)?;
        t.set_vowels(self.vowels.chars());
        t.set_silent_chars(self.silent_chars.chars());
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct IdfSection<T> {
    /// Overrides the weight stored in the dictionary file for unseen words.
    pub mu_miss: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessSection {
    pub rating_fusion: RatingFusion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct MipeConfig<T> {
    pub phonetic: PhoneticSection<T>,
    pub sws: SwsConfig<T>,
    pub scoring: AdjustmentConfig<T>,
    pub idf: IdfSection<T>,
    pub metrics: MetricConfig<T>,
    pub harness: HarnessSection,
}

impl<T: Scalar> Default for MipeConfig<T> {
    fn default() -> Self {
        MipeConfig {
            phonetic: PhoneticSection::default(),
            sws: SwsConfig::default(),
            scoring: AdjustmentConfig::default(),
            idf: IdfSection { mu_miss: None },
            metrics: MetricConfig::default(),
            harness: HarnessSection::default(),
        }
    }
}

impl<T> MipeConfig<T>
where
    T: Scalar + Serialize + for<'de> Deserialize<'de>,
{
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.phonetic.to_table()?;
        self.sws.validate()?;
        self.scoring.validate()?;
        self.metrics.validate()?;
        if let Some(m) = self.idf.mu_miss {
            if !(m > T::zero()) || !m.is_finite() {
                return Err(Error::Config("mu_miss must be positive".into()));
            }
        }
        Ok(())
    }
}
