//! Tokenization and surface normalization for romanized code-mixed text.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

#[inline]
fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// A lowercase run of letters and digits.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Token(String);

impl Token {
    /// Accepts `s` only if it is non-empty and made of word characters.
    /// Case is not altered; use [`tokenize`] to normalize raw text.
    pub fn new(s: impl Into<String>) -> Option<Self> {
        let s = s.into();
        if !s.is_empty() && s.chars().all(is_word_char) {
            Some(Token(s))
        } else {
            None
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl Deref for Token {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for Token {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        Token::new(s.clone()).ok_or_else(|| format!("`{s}` is not a valid token"))
    }
}

impl From<Token> for String {
    fn from(t: Token) -> String {
        t.0
    }
}

impl PartialEq<str> for Token {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for Token {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

/// Ordered token sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Sentence(Vec<Token>);

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Self {
        Sentence(tokens)
    }

    /// Builds a sentence from words that are already valid tokens.
    ///
    /// Panics if any word is not a valid [`Token`]. Intended for fixtures.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        Sentence(
            words
                .iter()
                .map(|w| Token::new(w.as_ref()).unwrap_or_else(|| panic!("invalid token {:?}", w.as_ref())))
                .collect(),
        )
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Token> {
        self.0.iter()
    }

    pub fn into_tokens(self) -> Vec<Token> {
        self.0
    }

    /// Space-joined surface form; `tokenize(&s.detokenize()) == s`.
    pub fn detokenize(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(t);
        }
        out
    }
}

impl Deref for Sentence {
    type Target = [Token];
    fn deref(&self) -> &[Token] {
        &self.0
    }
}

impl<'a> IntoIterator for &'a Sentence {
    type Item = &'a Token;
    type IntoIter = std::slice::Iter<'a, Token>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Token> for Sentence {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        Sentence(iter.into_iter().collect())
    }
}

/// Splits `text` into lowercase runs of letters and digits. Everything else
/// (whitespace, punctuation, symbols) separates tokens and is dropped.
pub fn tokenize(text: &str) -> Sentence {
    let mut tokens = Vec::new();
    for run in text.split(|c: char| !is_word_char(c)).filter(|r| !r.is_empty()) {
        let lower = run.to_lowercase();
        // Lowercasing may expand into combining marks (e.g. U+0130), which
        // are not word characters.
        for part in lower.split(|c: char| !is_word_char(c)).filter(|p| !p.is_empty()) {
            tokens.push(Token(part.to_owned()));
        }
    }
    Sentence(tokens)
}

/// Replaces every maximal run of one repeated character by a single copy.
pub fn collapse_repeats(w: &Token) -> Token {
    Token(collapse_chars(w).into_iter().collect())
}

pub(crate) fn collapse_chars(w: &str) -> Vec<char> {
    let mut out: Vec<char> = Vec::with_capacity(w.len());
    for c in w.chars() {
        if out.last() != Some(&c) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(s: &Sentence) -> Vec<&str> {
        s.iter().map(|t| t.as_str()).collect()
    }

    #[test]
    fn tokenize_hinglish_question() {
        let s = tokenize("kya aapko samaj aaya?");
        assert_eq!(words(&s), ["kya", "aapko", "samaj", "aaya"]);
    }

    #[test]
    fn tokenize_english_lowercases_and_drops_punct() {
        let s = tokenize("Do you understand this?");
        assert_eq!(words(&s), ["do", "you", "understand", "this"]);
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ,,, !? ").is_empty());
    }

    #[test]
    fn tokenize_keeps_digits() {
        let s = tokenize("2,132,184 sentences, 300-dim");
        assert_eq!(words(&s), ["2", "132", "184", "sentences", "300", "dim"]);
    }

    #[test]
    fn tokenize_quoted_speech() {
        let s = tokenize("koi dusra human being yeh kahe, \"Do you understand this?\"");
        assert_eq!(
            words(&s),
            [
                "koi",
                "dusra",
                "human",
                "being",
                "yeh",
                "kahe",
                "do",
                "you",
                "understand",
                "this"
            ]
        );
    }

    #[test]
    fn collapse_examples() {
        let t = |s: &str| Token::new(s).unwrap();
        assert_eq!(collapse_repeats(&t("koee")), "koe");
        assert_eq!(collapse_repeats(&t("abc")), "abc");
        assert_eq!(collapse_repeats(&t("aaabbba")), "aba");
        assert_eq!(collapse_repeats(&t("connect")), "conect");
    }

    #[test]
    fn token_rejects_separators() {
        assert!(Token::new("").is_none());
        assert!(Token::new("a b").is_none());
        assert!(Token::new("a,").is_none());
        assert!(Token::new("ab1").is_some());
    }

    proptest! {
        #[test]
        fn tokenize_round_trips(text in "\\PC{0,40}") {
            let s = tokenize(&text);
            prop_assert_eq!(tokenize(&s.detokenize()), s.clone());
            for t in &s {
                prop_assert!(!t.is_empty());
                prop_assert!(t.chars().all(|c| c.is_alphanumeric()));
            }
        }

        #[test]
        fn collapse_is_idempotent_and_shrinks(w in "[a-z]{1,12}") {
            let t = Token::new(w).unwrap();
            let once = collapse_repeats(&t);
            prop_assert_eq!(collapse_repeats(&once), once.clone());
            prop_assert!(once.chars().count() <= t.chars().count());
            let cs: Vec<char> = once.chars().collect();
            prop_assert!(cs.windows(2).all(|p| p[0] != p[1]));
        }
    }
}
