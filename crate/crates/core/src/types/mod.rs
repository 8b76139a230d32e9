//! Shared value types: tokens, sentences, edit tags and the tagset.

mod sentence;
mod tags;
mod tagset;

pub use sentence::{tokenize, AlignedPair, Sentence, Token};
pub use tags::{
    EditSequence, EditTag, MergeKind, SuffixTransform, TagFamily, TagParseError, Transform,
    VerbForm, SUFFIX_TRANSFORMS, TRANSFORMS,
};
pub use tagset::TagSet;
