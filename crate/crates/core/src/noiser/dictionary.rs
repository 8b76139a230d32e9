use std::collections::BTreeMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::seq2edit::align;
use crate::types::{tokenize, AlignedPair};

/// Observed human substitutions, keyed by the corrected token and applied
/// in reverse (correct → erroneous) when corrupting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditDictionary {
    entries: BTreeMap<String, BTreeMap<String, u64>>,
}

impl EditDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, correct: &str, erroneous: &str) {
        *self
            .entries
            .entry(correct.to_string())
            .or_default()
            .entry(erroneous.to_string())
            .or_insert(0) += 1;
    }

    /// Adds every single-token substitution of an (erroneous, corrected)
    /// alignment.
    pub fn add_pair(&mut self, pair: &AlignedPair) {
        for (i, src) in pair.source.iter().enumerate() {
            if let [tgt] = pair.span_tokens(i) {
                if tgt != src {
                    self.record(tgt, src);
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Erroneous variants of `correct` with their counts.
    pub fn variants(&self, correct: &str) -> Option<&BTreeMap<String, u64>> {
        self.entries.get(correct)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BTreeMap<String, u64>)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Builds a dictionary from aligned (erroneous, corrected) pairs.
pub fn build_edit_dictionary<'a>(pairs: impl IntoIterator<Item = &'a AlignedPair>) -> EditDictionary {
    let mut dict = EditDictionary::new();
    for pair in pairs {
        dict.add_pair(pair);
    }
    dict
}

/// Builds a dictionary from `source<TAB>target` lines. Blank lines and
/// lines with an empty source are skipped.
pub fn read_edit_dictionary(reader: impl BufRead, name: &str) -> Result<EditDictionary> {
    let mut dict = EditDictionary::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let (src, tgt) = line.split_once('\t').ok_or_else(|| Error::Data {
            file: name.to_string(),
            line: i + 1,
            reason: "expected source<TAB>target".into(),
        })?;
        let src = tokenize(src);
        if src.is_empty() {
            continue;
        }
        dict.add_pair(&align(&src, &tokenize(tgt))?);
    }
    Ok(dict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &str, b: &str) -> AlignedPair {
        align(&tokenize(a), &tokenize(b)).unwrap()
    }

    #[test]
    fn records_reverse_substitutions() {
        let dict = build_edit_dictionary(&[pair("I am hapy", "I am happy")]);
        assert_eq!(dict.len(), 1);
        assert_eq!(dict.variants("happy").unwrap()["hapy"], 1);
    }

    #[test]
    fn identity_corpus_is_empty() {
        assert!(build_edit_dictionary(&[pair("a b", "a b")]).is_empty());
    }

    #[test]
    fn counts_accumulate() {
        let pairs = [pair("I am hapy", "I am happy"), pair("so hapy", "so happy")];
        assert_eq!(build_edit_dictionary(&pairs).variants("happy").unwrap()["hapy"], 2);
    }

    #[test]
    fn reads_parallel_lines() {
        let text = "I am hapy\tI am happy\n\nno tab here\n";
        let err = read_edit_dictionary(text.as_bytes(), "pairs.tsv").unwrap_err();
        assert!(matches!(err, Error::Data { line: 3, .. }));
        let dict = read_edit_dictionary("I am hapy\tI am happy\n".as_bytes(), "p").unwrap();
        assert_eq!(dict.len(), 1);
    }
}
