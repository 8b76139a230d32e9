//! Edit-tag machinery for grammatical error correction: converting sentence
//! pairs to per-token edit tags and back, multi-head label streams, a
//! synthetic error generator, a small trainable tagger and scoring.

pub mod edit2seq;
pub mod error;
pub mod eval;
pub mod labels;
pub mod lexicon;
pub mod morph;
pub mod noiser;
pub mod sample_corpus;
pub mod seq2edit;
pub mod tagger;
pub mod types;

pub use edit2seq::{apply_tag, edit2seq, refine, RefineError, RefineOptions, Refinement};
pub use error::{Error, Result, TagApplicationError};
pub use labels::{derive_labels, MultiHeadLabels};
pub use lexicon::{Lexicon, PatternInventories};
pub use seq2edit::{align, classify_edit, seq2edit, Seq2Edit};
pub use types::{tokenize, AlignedPair, EditSequence, EditTag, Sentence, TagSet, Token};
