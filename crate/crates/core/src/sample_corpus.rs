//! Deterministic template sentences for demos, tests and toy training.
//!
//! Every sentence contains a determiner, a preposition, a past-tense verb,
//! nouns and an -ly adverb, so each type-based noise operation has a site.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lexicon::Lexicon;
use crate::morph;
use crate::types::{tokenize, Sentence};

const AGENTS: &[&str] = &[
    "teacher", "student", "doctor", "farmer", "driver", "writer", "worker", "player", "singer",
    "baker", "nurse", "friend",
];
const ADJECTIVES: &[&str] = &["old", "young", "tall", "small", "busy", "kind", "new", "quiet"];
const VERBS: &[&str] = &[
    "cleaned", "opened", "painted", "visited", "watched", "finished", "moved", "carried",
    "bought", "found", "took", "made", "left", "saw", "washed", "fixed", "wanted", "needed",
];
const OBJECTS: &[&str] = &[
    "car", "door", "window", "table", "book", "letter", "box", "garden", "room", "bag",
    "picture", "bottle",
];
const PREPOSITIONS: &[&str] = &["in", "at", "near", "behind", "under", "by", "on", "from"];
const PLACES: &[&str] = &[
    "park", "station", "museum", "kitchen", "school", "library", "market", "hospital",
    "street", "house",
];
const ADVERBS: &[&str] = &[
    "quickly", "slowly", "carefully", "quietly", "happily", "easily", "loudly", "gently",
];
const DETERMINERS: &[&str] = &["the", "a", "this", "that"];

const TEMPLATES: &[&str] = &[
    "The {adj} {agent} {verb} the {object} {prep} the {place} .",
    "{Det} {agent} {adv} {verb} {det} {object} {prep} the {place} .",
    "The {agents} {verb} {det} {object} {prep} the {place} {adv} .",
    "Yesterday the {adj} {agent} {verb} the {objects} {prep} the {place} {adv} .",
    "My {agent} {adv} {verb} the {adj} {object} {prep} {det} {place} .",
];

fn fill(template: &str, rng: &mut ChaCha8Rng) -> String {
    let mut out = String::with_capacity(template.len() + 32);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = open + rest[open..].find('}').expect("templates are balanced");
        let slot = &rest[open + 1..close];
        let pick = |list: &[&'static str], rng: &mut ChaCha8Rng| *list.choose(rng).expect("lists are non-empty");
        let word = match slot {
            "agent" => pick(AGENTS, rng).to_string(),
            "adj" => pick(ADJECTIVES, rng).to_string(),
            "verb" => pick(VERBS, rng).to_string(),
            "object" => pick(OBJECTS, rng).to_string(),
            "objects" => morph::pluralize(pick(OBJECTS, rng), Lexicon::bundled()),
            "agents" => morph::pluralize(pick(AGENTS, rng), Lexicon::bundled()),
            "prep" => pick(PREPOSITIONS, rng).to_string(),
            "place" => pick(PLACES, rng).to_string(),
            "adv" => pick(ADVERBS, rng).to_string(),
            "det" => pick(DETERMINERS, rng).to_string(),
            "Det" => morph::capitalize(pick(DETERMINERS, rng)),
            other => panic!("unknown template slot {other}"),
        };
        out.push_str(&word);
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    out
}

/// `n` clean sentences, reproducible from `seed`.
pub fn sample_lines(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let t = TEMPLATES[rng.random_range(0..TEMPLATES.len())];
            fill(t, &mut rng)
        })
        .collect()
}

pub fn sample_sentences(n: usize, seed: u64) -> Vec<Sentence> {
    sample_lines(n, seed).iter().map(|l| tokenize(l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_filled() {
        let a = sample_lines(50, 3);
        assert_eq!(a, sample_lines(50, 3));
        assert_ne!(a, sample_lines(50, 4));
        for line in &a {
            assert!(!line.contains('{'), "{line}");
            assert!(line.ends_with(" ."));
            assert!(!line.contains("  "));
        }
    }
}
