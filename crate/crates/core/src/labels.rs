//! Per-token label streams for the multi-head tagger and their JSON-lines
//! encoding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{EditSequence, EditTag, Sentence, TagFamily};

/// The six binary subtasks, in serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryHead {
    Deletion,
    Insertion,
    Substitution,
    Merge,
    Transformation,
    Detection,
}

impl BinaryHead {
    pub const ALL: [BinaryHead; 6] = [
        BinaryHead::Deletion,
        BinaryHead::Insertion,
        BinaryHead::Substitution,
        BinaryHead::Merge,
        BinaryHead::Transformation,
        BinaryHead::Detection,
    ];

    /// The five edit-type heads; detection is their union.
    pub const TYPES: [BinaryHead; 5] = [
        BinaryHead::Deletion,
        BinaryHead::Insertion,
        BinaryHead::Substitution,
        BinaryHead::Merge,
        BinaryHead::Transformation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BinaryHead::Deletion => "deletion",
            BinaryHead::Insertion => "insertion",
            BinaryHead::Substitution => "substitution",
            BinaryHead::Merge => "merge",
            BinaryHead::Transformation => "transformation",
            BinaryHead::Detection => "detection",
        }
    }

    /// Label of this head for one correction tag.
    pub fn label(self, tag: &EditTag) -> u8 {
        let family = tag.family();
        let on = match self {
            BinaryHead::Deletion => family == TagFamily::Delete,
            BinaryHead::Insertion => family == TagFamily::Append,
            BinaryHead::Substitution => family == TagFamily::Replace,
            BinaryHead::Merge => family == TagFamily::Merge,
            BinaryHead::Transformation => tag.is_char_level(),
            BinaryHead::Detection => !tag.is_keep(),
        };
        u8::from(on)
    }
}

/// Seven parallel streams over the source tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHeadLabels {
    pub deletion: Vec<u8>,
    pub insertion: Vec<u8>,
    pub substitution: Vec<u8>,
    pub merge: Vec<u8>,
    pub transformation: Vec<u8>,
    pub detection: Vec<u8>,
    pub correction: EditSequence,
}

impl MultiHeadLabels {
    pub fn len(&self) -> usize {
        self.correction.len()
    }

    pub fn is_empty(&self) -> bool {
        self.correction.is_empty()
    }

    pub fn stream(&self, head: BinaryHead) -> &[u8] {
        match head {
            BinaryHead::Deletion => &self.deletion,
            BinaryHead::Insertion => &self.insertion,
            BinaryHead::Substitution => &self.substitution,
            BinaryHead::Merge => &self.merge,
            BinaryHead::Transformation => &self.transformation,
            BinaryHead::Detection => &self.detection,
        }
    }

    /// Builds the streams from a correction sequence alone.
    pub fn from_edits(edits: EditSequence) -> Self {
        let stream = |h: BinaryHead| edits.iter().map(|t| h.label(t)).collect::<Vec<u8>>();
        MultiHeadLabels {
            deletion: stream(BinaryHead::Deletion),
            insertion: stream(BinaryHead::Insertion),
            substitution: stream(BinaryHead::Substitution),
            merge: stream(BinaryHead::Merge),
            transformation: stream(BinaryHead::Transformation),
            detection: stream(BinaryHead::Detection),
            correction: edits,
        }
    }

    /// Checks the stream invariants, returning the first offending index.
    pub fn check(&self) -> std::result::Result<(), usize> {
        let n = self.len();
        for i in 0..n {
            let tag = &self.correction.tags()[i];
            let active: u8 = BinaryHead::TYPES.iter().map(|h| self.stream(*h)[i]).sum();
            let detect = self.detection[i];
            let ok = if *tag == EditTag::Unknown {
                active == 0 && detect == 1
            } else {
                active <= 1 && detect == active && BinaryHead::ALL.iter().all(|h| self.stream(*h)[i] == h.label(tag))
            };
            if !ok || BinaryHead::ALL.iter().any(|h| self.stream(*h).len() != n) {
                return Err(i);
            }
        }
        Ok(())
    }
}

/// Derives the label streams for `source` from its correction tags.
pub fn derive_labels(source: &Sentence, edits: &EditSequence) -> Result<MultiHeadLabels> {
    if source.len() != edits.len() {
        return Err(Error::LengthMismatch {
            expected: source.len(),
            found: edits.len(),
        });
    }
    Ok(MultiHeadLabels::from_edits(edits.clone()))
}

/// One JSON-lines record: a source sentence and its seven streams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledRecord {
    pub tokens: Vec<String>,
    pub deletion: Vec<u8>,
    pub insertion: Vec<u8>,
    pub substitution: Vec<u8>,
    pub merge: Vec<u8>,
    pub transformation: Vec<u8>,
    pub detection: Vec<u8>,
    pub correction: Vec<String>,
}

/// A source sentence with its labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledExample {
    pub source: Sentence,
    pub labels: MultiHeadLabels,
}

impl LabeledExample {
    pub fn new(source: Sentence, edits: &EditSequence) -> Result<Self> {
        let labels = derive_labels(&source, edits)?;
        Ok(LabeledExample { source, labels })
    }

    pub fn to_record(&self) -> LabeledRecord {
        let l = &self.labels;
        LabeledRecord {
            tokens: self.source.words().map(str::to_string).collect(),
            deletion: l.deletion.clone(),
            insertion: l.insertion.clone(),
            substitution: l.substitution.clone(),
            merge: l.merge.clone(),
            transformation: l.transformation.clone(),
            detection: l.detection.clone(),
            correction: l.correction.iter().map(|t| t.to_string()).collect(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("records always serialize")
    }

    /// Parses one record. The binary streams are re-derived from the
    /// correction stream and must agree with the stored ones.
    pub fn from_json_line(line: &str) -> std::result::Result<Self, String> {
        let rec: LabeledRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let source =
            Sentence::from_words(rec.tokens.iter().map(String::as_str)).map_err(|e| e.to_string())?;
        let edits = rec
            .correction
            .iter()
            .map(|s| s.parse::<EditTag>().map_err(|e| format!("tag `{s}`: {}", e.reason)))
            .collect::<std::result::Result<EditSequence, _>>()?;
        let example = LabeledExample::new(source, &edits).map_err(|e| e.to_string())?;
        let l = &example.labels;
        let stored = [
            &rec.deletion,
            &rec.insertion,
            &rec.substitution,
            &rec.merge,
            &rec.transformation,
            &rec.detection,
        ];
        for (head, given) in BinaryHead::ALL.iter().zip(stored) {
            if given.as_slice() != l.stream(*head) {
                return Err(format!("{} stream disagrees with correction tags", head.name()));
            }
        }
        Ok(example)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::tokenize;

    fn edits(s: &str) -> EditSequence {
        s.parse().unwrap()
    }

    #[test]
    fn all_keep_is_all_zero() {
        let l = derive_labels(&tokenize("a b c"), &EditSequence::all_keep(3)).unwrap();
        for h in BinaryHead::ALL {
            assert_eq!(l.stream(h), [0, 0, 0]);
        }
    }

    #[test]
    fn deletion_and_transform_streams() {
        let l = derive_labels(&tokenize("a b"), &edits("$DELETE $KEEP")).unwrap();
        assert_eq!(l.deletion, [1, 0]);
        assert_eq!(l.detection, [1, 0]);
        assert_eq!(l.insertion, [0, 0]);
        let l = derive_labels(&tokenize("it easy"), &edits("$KEEP $SUFFIXTRANSFORM_Y_TO_ILY")).unwrap();
        assert_eq!(l.transformation, [0, 1]);
        assert_eq!(l.detection, [0, 1]);
        assert_eq!(l.substitution, [0, 0]);
    }

    #[test]
    fn unknown_detects_without_a_type() {
        let l = derive_labels(&tokenize("a"), &edits("$UNKNOWN")).unwrap();
        assert_eq!(l.detection, [1]);
        assert!(BinaryHead::TYPES.iter().all(|h| l.stream(*h) == [0]));
        assert!(l.check().is_ok());
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(derive_labels(&tokenize("a b"), &edits("$KEEP")).is_err());
    }

    #[test]
    fn json_line_roundtrip_and_field_order() {
        let ex = LabeledExample::new(tokenize("a b"), &edits("$APPEND_the $KEEP")).unwrap();
        let line = ex.to_json_line();
        assert!(line.starts_with(r#"{"tokens":["a","b"],"deletion":[0,0],"insertion":[1,0]"#));
        assert_eq!(LabeledExample::from_json_line(&line).unwrap(), ex);
        let tampered = line.replace(r#""insertion":[1,0]"#, r#""insertion":[0,0]"#);
        assert!(LabeledExample::from_json_line(&tampered).is_err());
    }
}
