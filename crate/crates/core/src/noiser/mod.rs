//! Synthetic error generation: corrupting clean sentences into errorful
//! sources for pretraining pairs.

mod corrupt;
mod dictionary;
mod generate;
mod profile;

pub use corrupt::{corrupt_sentence, splitmix64, Corruption, Noiser, COMMON_WORDS};
pub use dictionary::{build_edit_dictionary, read_edit_dictionary, EditDictionary};
pub use generate::{generate_corpus, NoiseStats};
pub use profile::{NoiseOp, NoiseProfile, DEFAULT_EXPECTED_ERRORS};
