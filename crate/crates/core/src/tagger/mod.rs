//! A small linear multi-head tagger over hashed token features.

mod features;
mod io;
mod model;
mod predict;
mod train;

pub use features::{FeatureEncoder, Template, TokenFeatures, DEFAULT_DIM, DEFAULT_TEMPLATES};
pub use io::{from_bytes, load, save, to_bytes, FORMAT_VERSION};
pub use model::{head_set, Example, Forward, Gradient, Head, MultiHeadModel, DEFAULT_LAMBDA};
pub use predict::{decode, predict, token_accuracy, Tweaks};
pub use train::{gradient_check, train, TrainConfig, TrainReport, GRADIENT_CHECK_STEP};

use crate::edit2seq::{refine, RefineError, RefineOptions, Refinement};
use crate::error::Result;
use crate::lexicon::Lexicon;
use crate::types::{EditSequence, EditTag, Sentence, TagSet};

/// `$KEEP`, `$DELETE`, `$UNKNOWN` plus every tag used in `gold`, in order
/// of the base tagset. Tags absent from `base` are appended in first-seen
/// order.
pub fn observed_tagset<'a>(gold: impl IntoIterator<Item = &'a EditSequence>, base: &TagSet) -> Result<TagSet> {
    let mut seen = std::collections::HashSet::new();
    let mut extra = Vec::new();
    for tag in [EditTag::Keep, EditTag::Delete, EditTag::Unknown] {
        seen.insert(tag);
    }
    for seq in gold {
        for tag in seq.iter() {
            if seen.insert(tag.clone()) && !base.contains(tag) {
                extra.push(tag.clone());
            }
        }
    }
    let tags = base
        .tags()
        .iter()
        .filter(|t| seen.contains(*t))
        .cloned()
        .chain(extra);
    TagSet::from_tags(tags)
}

/// Iterative correction with the model as the predictor.
pub fn correct(
    model: &MultiHeadModel,
    source: &Sentence,
    tweaks: &Tweaks,
    options: &RefineOptions,
    lexicon: &Lexicon,
) -> std::result::Result<Refinement, RefineError> {
    refine(source, |s| Ok(predict(model, s, tweaks)), options, lexicon)
}
