use std::fmt;
use std::ops::{Deref, Range};

use crate::error::{Error, Result};

/// A single whitespace-free, non-empty token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(text));
        }
        Ok(Token(text))
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

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered list of tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Sentence {
    tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(tokens: Vec<Token>) -> Self {
        Sentence { tokens }
    }

    /// Builds a sentence from string slices, validating each token.
    pub fn from_words<I, S>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        words
            .into_iter()
            .map(Token::new)
            .collect::<Result<Vec<_>>>()
            .map(Sentence::new)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn into_tokens(self) -> Vec<Token> {
        self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(Token::as_str)
    }
}

impl Deref for Sentence {
    type Target = [Token];

    fn deref(&self) -> &[Token] {
        &self.tokens
    }
}

impl FromIterator<Token> for Sentence {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        Sentence::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t)?;
        }
        Ok(())
    }
}

/// Splits a pre-tokenized line on whitespace.
pub fn tokenize(line: &str) -> Sentence {
    line.split_whitespace()
        .map(|w| Token(w.to_string()))
        .collect()
}

/// A tokenized (source, target) pair with each source token mapped to a
/// contiguous span of target tokens.
///
/// Spans are in order, non-overlapping and cover the whole target. Target
/// tokens inserted before the first source token are counted in
/// `leading_insertions` and belong to the first span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedPair {
    pub source: Sentence,
    pub target: Sentence,
    pub spans: Vec<Range<usize>>,
    pub leading_insertions: usize,
}

impl AlignedPair {
    /// Target tokens aligned to source token `i`.
    pub fn span_tokens(&self, i: usize) -> &[Token] {
        &self.target[self.spans[i].clone()]
    }

    /// Checks the coverage invariant: spans are contiguous and tile the target.
    pub fn is_consistent(&self) -> bool {
        if self.spans.len() != self.source.len() {
            return false;
        }
        let mut cursor = 0;
        for span in &self.spans {
            if span.start != cursor || span.end < span.start {
                return false;
            }
            cursor = span.end;
        }
        cursor == self.target.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_splits_on_whitespace() {
        assert_eq!(tokenize("He go .").words().collect::<Vec<_>>(), ["He", "go", "."]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t ").is_empty());
        assert_eq!(tokenize("well-known").len(), 1);
    }

    #[test]
    fn token_rejects_whitespace_and_empty() {
        assert!(Token::new("").is_err());
        assert!(Token::new("a b").is_err());
        assert!(Token::new("a\tb").is_err());
        assert!(Token::new("ok").is_ok());
    }

    #[test]
    fn display_joins_with_single_spaces() {
        assert_eq!(tokenize("a  b\tc").to_string(), "a b c");
    }
}
