//! The edit-tag vocabulary: token-level operations (keep, delete, append,
//! replace, merge) and character-level transformations (case, agreement,
//! verb form, literal suffix edits).
//!
//! Tag strings follow the `$FAMILY_payload` convention, e.g. `$APPEND_the`,
//! `$MERGE_HYPHEN`, `$TRANSFORM_VERB_VB_VBD`, `$SUFFIXTRANSFORM_Y_TO_ILY`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::sentence::Token;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{reason}")]
pub struct TagParseError {
    pub reason: String,
}

fn parse_err(reason: impl Into<String>) -> TagParseError {
    TagParseError {
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TagFamily {
    Keep,
    Delete,
    Append,
    Replace,
    Merge,
    Transform,
    SuffixTransform,
    Unknown,
}

impl TagFamily {
    pub const ALL: [TagFamily; 8] = [
        TagFamily::Keep,
        TagFamily::Delete,
        TagFamily::Append,
        TagFamily::Replace,
        TagFamily::Merge,
        TagFamily::Transform,
        TagFamily::SuffixTransform,
        TagFamily::Unknown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TagFamily::Keep => "KEEP",
            TagFamily::Delete => "DELETE",
            TagFamily::Append => "APPEND",
            TagFamily::Replace => "REPLACE",
            TagFamily::Merge => "MERGE",
            TagFamily::Transform => "TRANSFORM",
            TagFamily::SuffixTransform => "SUFFIXTRANSFORM",
            TagFamily::Unknown => "UNKNOWN",
        }
    }
}

/// Penn Treebank verb forms covered by the verb lexicon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VerbForm {
    Vb,
    Vbd,
    Vbg,
    Vbn,
    Vbz,
}

impl VerbForm {
    pub const ALL: [VerbForm; 5] = [
        VerbForm::Vb,
        VerbForm::Vbd,
        VerbForm::Vbg,
        VerbForm::Vbn,
        VerbForm::Vbz,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VerbForm::Vb => "VB",
            VerbForm::Vbd => "VBD",
            VerbForm::Vbg => "VBG",
            VerbForm::Vbn => "VBN",
            VerbForm::Vbz => "VBZ",
        }
    }

    /// Column position in the lexicon (VB is the lemma column).
    pub fn index(self) -> usize {
        self as usize
    }

    fn parse(s: &str) -> Option<Self> {
        VerbForm::ALL.into_iter().find(|f| f.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MergeKind {
    Hyphen,
    Space,
}

impl MergeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MergeKind::Hyphen => "HYPHEN",
            MergeKind::Space => "SPACE",
        }
    }

    pub fn joiner(self) -> &'static str {
        match self {
            MergeKind::Hyphen => "-",
            MergeKind::Space => "",
        }
    }
}

/// Whole-token rewrites that are not literal suffix edits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transform {
    AgreementPlural,
    AgreementSingular,
    CaseCapital,
    CaseLower,
    CaseUpper,
    SplitHyphen,
    Verb(VerbForm, VerbForm),
}

use VerbForm::{Vb, Vbd, Vbg, Vbn, Vbz};

/// Every transform in tagset order.
pub const TRANSFORMS: [Transform; 26] = [
    Transform::AgreementPlural,
    Transform::AgreementSingular,
    Transform::CaseCapital,
    Transform::CaseLower,
    Transform::CaseUpper,
    Transform::SplitHyphen,
    Transform::Verb(Vbd, Vb),
    Transform::Verb(Vbd, Vbg),
    Transform::Verb(Vbd, Vbn),
    Transform::Verb(Vbd, Vbz),
    Transform::Verb(Vbg, Vb),
    Transform::Verb(Vbg, Vbd),
    Transform::Verb(Vbg, Vbn),
    Transform::Verb(Vbg, Vbz),
    Transform::Verb(Vbn, Vb),
    Transform::Verb(Vbn, Vbd),
    Transform::Verb(Vbn, Vbg),
    Transform::Verb(Vbn, Vbz),
    Transform::Verb(Vbz, Vb),
    Transform::Verb(Vbz, Vbd),
    Transform::Verb(Vbz, Vbg),
    Transform::Verb(Vbz, Vbn),
    Transform::Verb(Vb, Vbd),
    Transform::Verb(Vb, Vbg),
    Transform::Verb(Vb, Vbn),
    Transform::Verb(Vb, Vbz),
];

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::AgreementPlural => f.write_str("AGREEMENT_PLURAL"),
            Transform::AgreementSingular => f.write_str("AGREEMENT_SINGULAR"),
            Transform::CaseCapital => f.write_str("CASE_CAPITAL"),
            Transform::CaseLower => f.write_str("CASE_LOWER"),
            Transform::CaseUpper => f.write_str("CASE_UPPER"),
            Transform::SplitHyphen => f.write_str("SPLIT_HYPHEN"),
            Transform::Verb(from, to) => write!(f, "VERB_{}_{}", from.as_str(), to.as_str()),
        }
    }
}

impl FromStr for Transform {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = match s {
            "AGREEMENT_PLURAL" => Transform::AgreementPlural,
            "AGREEMENT_SINGULAR" => Transform::AgreementSingular,
            "CASE_CAPITAL" => Transform::CaseCapital,
            "CASE_LOWER" => Transform::CaseLower,
            "CASE_UPPER" => Transform::CaseUpper,
            "SPLIT_HYPHEN" => Transform::SplitHyphen,
            _ => {
                let pair = s
                    .strip_prefix("VERB_")
                    .ok_or_else(|| parse_err(format!("unknown transform `{s}`")))?;
                let (from, to) = pair
                    .split_once('_')
                    .and_then(|(a, b)| Some((VerbForm::parse(a)?, VerbForm::parse(b)?)))
                    .ok_or_else(|| parse_err(format!("unknown verb transform `{s}`")))?;
                if from == to {
                    return Err(parse_err(format!("identity verb transform `{s}`")));
                }
                Transform::Verb(from, to)
            }
        };
        Ok(t)
    }
}

/// A literal suffix edit on the token's characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SuffixTransform {
    Append(&'static str),
    Remove(&'static str),
    Replace(&'static str, &'static str),
}

use SuffixTransform::{Append as SA, Remove as SR, Replace as SP};

/// Every suffix transform in tagset order.
pub const SUFFIX_TRANSFORMS: [SuffixTransform; 70] = [
    SP("al", "e"),
    SA("able"),
    SA("age"),
    SA("al"),
    SA("ation"),
    SA("d"),
    SA("ed"),
    SA("er"),
    SA("es"),
    SA("est"),
    SA("ful"),
    SA("ing"),
    SA("ist"),
    SA("ive"),
    SA("ly"),
    SA("n"),
    SA("ness"),
    SA("ship"),
    SA("wise"),
    SA("y"),
    SP("ation", "ing"),
    SP("ce", "t"),
    SP("d", "s"),
    SP("d", "t"),
    SP("ed", "ing"),
    SP("ed", "s"),
    SP("er", "est"),
    SP("est", "er"),
    SP("e", "al"),
    SP("e", "ing"),
    SP("ical", "y"),
    SP("ic", "y"),
    SP("ies", "y"),
    SP("ily", "y"),
    SP("ing", "ation"),
    SP("ing", "e"),
    SP("ing", "ed"),
    SP("ing", "ion"),
    SP("ing", "s"),
    SP("ion", "ing"),
    SP("n", "ing"),
    SR("able"),
    SR("age"),
    SR("al"),
    SR("ation"),
    SR("d"),
    SR("ed"),
    SR("er"),
    SR("es"),
    SR("est"),
    SR("ful"),
    SR("ing"),
    SR("ive"),
    SR("less"),
    SR("ly"),
    SR("n"),
    SR("ness"),
    SR("y"),
    SP("s", "d"),
    SP("s", "ed"),
    SP("s", "ing"),
    SP("s", "t"),
    SP("t", "ce"),
    SP("t", "d"),
    SP("t", "s"),
    SP("y", "ic"),
    SP("y", "ical"),
    SP("y", "ied"),
    SP("y", "ies"),
    SP("y", "ily"),
];

impl SuffixTransform {
    /// Applies the literal edit, or `None` when the token lacks the suffix
    /// being removed or replaced.
    pub fn apply(self, word: &str) -> Option<String> {
        match self {
            SuffixTransform::Append(s) => Some(format!("{word}{s}")),
            SuffixTransform::Remove(s) => word.strip_suffix(s).map(str::to_string),
            SuffixTransform::Replace(from, to) => {
                word.strip_suffix(from).map(|stem| format!("{stem}{to}"))
            }
        }
    }
}

impl fmt::Display for SuffixTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuffixTransform::Append(s) => write!(f, "APPEND_{s}"),
            SuffixTransform::Remove(s) => write!(f, "REMOVE_{s}"),
            SuffixTransform::Replace(from, to) => write!(
                f,
                "{}_TO_{}",
                from.to_ascii_uppercase(),
                to.to_ascii_uppercase()
            ),
        }
    }
}

impl FromStr for SuffixTransform {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SUFFIX_TRANSFORMS
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| parse_err(format!("unknown suffix transform `{s}`")))
    }
}

/// One edit operation on a source token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EditTag {
    Keep,
    Delete,
    Append(Token),
    Replace(Token),
    Merge(MergeKind),
    Transform(Transform),
    SuffixTransform(SuffixTransform),
    Unknown,
}

impl EditTag {
    pub fn family(&self) -> TagFamily {
        match self {
            EditTag::Keep => TagFamily::Keep,
            EditTag::Delete => TagFamily::Delete,
            EditTag::Append(_) => TagFamily::Append,
            EditTag::Replace(_) => TagFamily::Replace,
            EditTag::Merge(_) => TagFamily::Merge,
            EditTag::Transform(_) => TagFamily::Transform,
            EditTag::SuffixTransform(_) => TagFamily::SuffixTransform,
            EditTag::Unknown => TagFamily::Unknown,
        }
    }

    pub fn is_keep(&self) -> bool {
        matches!(self, EditTag::Keep)
    }

    /// Character-level tags: transforms and suffix transforms.
    pub fn is_char_level(&self) -> bool {
        matches!(self, EditTag::Transform(_) | EditTag::SuffixTransform(_))
    }

    pub fn append(word: &str) -> Option<EditTag> {
        Token::new(word).ok().map(EditTag::Append)
    }

    pub fn replace(word: &str) -> Option<EditTag> {
        Token::new(word).ok().map(EditTag::Replace)
    }
}

impl fmt::Display for EditTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditTag::Keep => f.write_str("$KEEP"),
            EditTag::Delete => f.write_str("$DELETE"),
            EditTag::Append(t) => write!(f, "$APPEND_{t}"),
            EditTag::Replace(t) => write!(f, "$REPLACE_{t}"),
            EditTag::Merge(m) => write!(f, "$MERGE_{}", m.as_str()),
            EditTag::Transform(t) => write!(f, "$TRANSFORM_{t}"),
            EditTag::SuffixTransform(t) => write!(f, "$SUFFIXTRANSFORM_{t}"),
            EditTag::Unknown => f.write_str("$UNKNOWN"),
        }
    }
}

impl FromStr for EditTag {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "$KEEP" => return Ok(EditTag::Keep),
            "$DELETE" => return Ok(EditTag::Delete),
            "$UNKNOWN" => return Ok(EditTag::Unknown),
            "$MERGE_HYPHEN" => return Ok(EditTag::Merge(MergeKind::Hyphen)),
            "$MERGE_SPACE" => return Ok(EditTag::Merge(MergeKind::Space)),
            _ => {}
        }
        let token = |rest: &str| {
            Token::new(rest).map_err(|_| parse_err(format!("invalid token payload in `{s}`")))
        };
        if let Some(rest) = s.strip_prefix("$APPEND_") {
            Ok(EditTag::Append(token(rest)?))
        } else if let Some(rest) = s.strip_prefix("$REPLACE_") {
            Ok(EditTag::Replace(token(rest)?))
        } else if let Some(rest) = s.strip_prefix("$TRANSFORM_") {
            Ok(EditTag::Transform(rest.parse()?))
        } else if let Some(rest) = s.strip_prefix("$SUFFIXTRANSFORM_") {
            Ok(EditTag::SuffixTransform(rest.parse()?))
        } else {
            Err(parse_err(format!("unknown tag family in `{s}`")))
        }
    }
}

/// One tag per source token.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EditSequence(Vec<EditTag>);

impl EditSequence {
    pub fn new(tags: Vec<EditTag>) -> Self {
        EditSequence(tags)
    }

    pub fn all_keep(len: usize) -> Self {
        EditSequence(vec![EditTag::Keep; len])
    }

    pub fn tags(&self) -> &[EditTag] {
        &self.0
    }

    pub fn into_tags(self) -> Vec<EditTag> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_all_keep(&self) -> bool {
        self.0.iter().all(EditTag::is_keep)
    }

    /// True when applying the sequence cannot change the sentence.
    pub fn is_noop(&self) -> bool {
        self.0
            .iter()
            .all(|t| matches!(t, EditTag::Keep | EditTag::Unknown))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EditTag> {
        self.0.iter()
    }
}

impl FromIterator<EditTag> for EditSequence {
    fn from_iter<I: IntoIterator<Item = EditTag>>(iter: I) -> Self {
        EditSequence(iter.into_iter().collect())
    }
}

impl fmt::Display for EditSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for EditSequence {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace().map(str::parse).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_family() {
        for s in [
            "$KEEP",
            "$DELETE",
            "$APPEND_the",
            "$REPLACE_!",
            "$MERGE_HYPHEN",
            "$MERGE_SPACE",
            "$TRANSFORM_VERB_VB_VBD",
            "$TRANSFORM_SPLIT_HYPHEN",
            "$SUFFIXTRANSFORM_Y_TO_ILY",
            "$SUFFIXTRANSFORM_REMOVE_ness",
            "$SUFFIXTRANSFORM_APPEND_wise",
            "$UNKNOWN",
        ] {
            let tag: EditTag = s.parse().unwrap();
            assert_eq!(tag.to_string(), s);
        }
    }

    #[test]
    fn rejects_malformed_tags() {
        for s in [
            "KEEP",
            "$APPEND_",
            "$MERGE_DASH",
            "$TRANSFORM_VERB_VB_VB",
            "$TRANSFORM_VERB_VB_XX",
            "$SUFFIXTRANSFORM_APPEND_xyz",
            "$SUFFIXTRANSFORM_REMOVE_ist",
            "$FOO_bar",
        ] {
            assert!(s.parse::<EditTag>().is_err(), "{s} should not parse");
        }
    }

    #[test]
    fn transform_inventories_have_expected_sizes() {
        let appends = SUFFIX_TRANSFORMS
            .iter()
            .filter(|t| matches!(t, SuffixTransform::Append(_)))
            .count();
        let removes = SUFFIX_TRANSFORMS
            .iter()
            .filter(|t| matches!(t, SuffixTransform::Remove(_)))
            .count();
        assert_eq!((appends, removes, SUFFIX_TRANSFORMS.len() - appends - removes), (19, 17, 34));
        assert_eq!(TRANSFORMS.iter().filter(|t| matches!(t, Transform::Verb(..))).count(), 20);
    }

    #[test]
    fn suffix_apply_is_literal() {
        assert_eq!(SP("y", "ily").apply("easy").as_deref(), Some("easily"));
        assert_eq!(SR("ness").apply("kindness").as_deref(), Some("kind"));
        assert_eq!(SR("ness").apply("kind"), None);
        assert_eq!(SA("ing").apply("run").as_deref(), Some("runing"));
    }
}
