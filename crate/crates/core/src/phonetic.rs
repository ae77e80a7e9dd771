//! Phonetic dissimilarity: a weighted edit distance whose costs are discounted
//! for similar-sounding substitutions, vowel insertions/deletions and silent
//! characters. Repeated characters are collapsed before comparison.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textnorm::collapse_chars;

/// Default similar-sounding consonant pairs.
pub const DEFAULT_SIMILAR_PAIRS: &[(char, char)] = &[
    ('c', 'k'),
    ('k', 'q'),
    ('c', 's'),
    ('s', 'z'),
    ('j', 'z'),
    ('g', 'j'),
    ('b', 'p'),
    ('v', 'w'),
    ('f', 'v'),
];
pub const DEFAULT_VOWELS: &str = "aeiou";
pub const DEFAULT_SILENT: &str = "he";

/// Edit costs and character classes driving [`pds`].
///
/// "Addition" inserts a character into the first argument, "deletion"
/// removes one from it. When a character is both a vowel and silent the
/// vowel cost wins.
#[derive(Debug, Clone, PartialEq)]
pub struct PhoneticCostTable<T> {
    pub add_default: T,
    pub del_default: T,
    pub sub_default: T,
    pub rho_sub: T,
    pub rho_add: T,
    pub rho_del: T,
    pub rho_sil: T,
    /// Treat any vowel/vowel substitution as similar-sounding.
    pub vowel_pairs_similar: bool,
    similar_pairs: BTreeSet<(char, char)>,
    vowels: BTreeSet<char>,
    silent_chars: BTreeSet<char>,
}

impl<T: Scalar> Default for PhoneticCostTable<T> {
    fn default() -> Self {
        let mut table = PhoneticCostTable {
            add_default: T::one(),
            del_default: T::one(),
            sub_default: T::lit(2.0),
            rho_sub: T::lit(0.75),
            rho_add: T::lit(0.75),
            rho_del: T::lit(0.25),
            rho_sil: T::lit(0.75),
            vowel_pairs_similar: true,
            similar_pairs: BTreeSet::new(),
            vowels: DEFAULT_VOWELS.chars().collect(),
            silent_chars: DEFAULT_SILENT.chars().collect(),
        };
        table
            .set_similar_pairs(DEFAULT_SIMILAR_PAIRS.iter().copied())
            .expect("default pairs are irreflexive");
        table
    }
}

fn ordered(a: char, b: char) -> (char, char) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl<T: Scalar> PhoneticCostTable<T> {
    /// Default costs with every character class emptied, so the distance
    /// degenerates to plain Levenshtein with substitution cost `sub_default`.
    pub fn without_discounts() -> Self {
        PhoneticCostTable {
            vowel_pairs_similar: false,
            similar_pairs: BTreeSet::new(),
            vowels: BTreeSet::new(),
            silent_chars: BTreeSet::new(),
            ..Self::default()
        }
    }

    /// Replaces the similar-sounding pair set. Pairs are stored unordered;
    /// a pair of identical characters is rejected.
    pub fn set_similar_pairs<I>(&mut self, pairs: I) -> Result<()>
    where
        I: IntoIterator<Item = (char, char)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::Config(format!("similar pair ({a},{b}) is reflexive")));
            }
            set.insert(ordered(a, b));
        }
        self.similar_pairs = set;
        Ok(())
    }

    pub fn set_vowels<I: IntoIterator<Item = char>>(&mut self, chars: I) {
        self.vowels = chars.into_iter().collect();
    }

    pub fn set_silent_chars<I: IntoIterator<Item = char>>(&mut self, chars: I) {
        self.silent_chars = chars.into_iter().collect();
    }

    /// Unordered pairs, each listed once with the smaller character first.
    pub fn similar_pairs(&self) -> impl Iterator<Item = (char, char)> + '_ {
        self.similar_pairs.iter().copied()
    }

    pub fn vowels(&self) -> impl Iterator<Item = char> + '_ {
        self.vowels.iter().copied()
    }

    pub fn silent_chars(&self) -> impl Iterator<Item = char> + '_ {
        self.silent_chars.iter().copied()
    }

    pub fn is_vowel(&self, c: char) -> bool {
        self.vowels.contains(&c)
    }

    pub fn is_silent(&self, c: char) -> bool {
        self.silent_chars.contains(&c)
    }

    pub fn is_similar(&self, a: char, b: char) -> bool {
        a != b
            && (self.similar_pairs.contains(&ordered(a, b))
                || (self.vowel_pairs_similar && self.is_vowel(a) && self.is_vowel(b)))
    }

    #[inline]
    pub fn substitution(&self, a: char, b: char) -> T {
        if a == b {
            T::zero()
        } else if self.is_similar(a, b) {
            self.rho_sub
        } else {
            self.sub_default
        }
    }

    #[inline]
    pub fn insertion(&self, c: char) -> T {
        if self.is_vowel(c) {
            self.rho_add
        } else if self.is_silent(c) {
            self.rho_sil
        } else {
            self.add_default
        }
    }

    #[inline]
    pub fn deletion(&self, c: char) -> T {
        if self.is_vowel(c) {
            self.rho_del
        } else if self.is_silent(c) {
            self.rho_sil
        } else {
            self.del_default
        }
    }

    /// Checks the cost ordering constraints.
    pub fn validate(&self) -> Result<()> {
        let costs = [
            ("add_default", self.add_default),
            ("del_default", self.del_default),
            ("sub_default", self.sub_default),
            ("rho_sub", self.rho_sub),
            ("rho_add", self.rho_add),
            ("rho_del", self.rho_del),
            ("rho_sil", self.rho_sil),
        ];
        for (name, v) in costs {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        let rules = [
            (self.rho_add > self.rho_del, "rho_add > rho_del"),
            (self.rho_sub < self.sub_default, "rho_sub < sub_default"),
            (self.rho_add <= self.add_default, "rho_add <= add_default"),
            (self.rho_del <= self.del_default, "rho_del <= del_default"),
            (self.rho_sil <= self.add_default, "rho_sil <= add_default"),
        ];
        for (ok, rule) in rules {
            if !ok {
                return Err(Error::Config(format!("phonetic costs violate {rule}")));
            }
        }
        Ok(())
    }
}

/// Minimum cost of editing `w1` into `w2` after both are repeat-collapsed.
pub fn pds_directed<T: Scalar>(w1: &str, w2: &str, costs: &PhoneticCostTable<T>) -> T {
    let a = collapse_chars(w1);
    let b = collapse_chars(w2);
    edit_cost(&a, &b, costs)
}

/// Symmetric phonetic dissimilarity: the smaller of the two directed costs.
pub fn pds<T: Scalar>(w1: &str, w2: &str, costs: &PhoneticCostTable<T>) -> T {
    let a = collapse_chars(w1);
    let b = collapse_chars(w2);
    let forward = edit_cost(&a, &b, costs);
    let backward = edit_cost(&b, &a, costs);
    forward.min(backward)
}

fn edit_cost<T: Scalar>(a: &[char], b: &[char], costs: &PhoneticCostTable<T>) -> T {
    let mut prev: Vec<T> = Vec::with_capacity(b.len() + 1);
    prev.push(T::zero());
    for &cb in b {
        let last = *prev.last().unwrap();
        prev.push(last + costs.insertion(cb));
    }
    let mut cur = vec![T::zero(); b.len() + 1];
    for &ca in a {
        let del = costs.deletion(ca);
        cur[0] = prev[0] + del;
        for (j, &cb) in b.iter().enumerate() {
            let diag = prev[j] + costs.substitution(ca, cb);
            let up = prev[j + 1] + del;
            let left = cur[j] + costs.insertion(cb);
            cur[j + 1] = diag.min(up).min(left);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
