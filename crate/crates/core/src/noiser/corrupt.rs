use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::dictionary::EditDictionary;
use super::profile::{NoiseOp, NoiseProfile};
use crate::error::Result;
use crate::lexicon::{Lexicon, PatternInventories};
use crate::morph::{self, guess_pos, Pos};
use crate::seq2edit::Seq2Edit;
use crate::types::{EditTag, Sentence, TagSet, Token, VerbForm};

/// Frequent function words used by the n-gram insert and replace
/// operations.
pub const COMMON_WORDS: [&str; 20] = [
    "the", "a", "of", "to", "and", "in", "is", "that", "it", "for", "on", "with", "as", "was",
    "at", "be", "by", "this", "have", "from",
];

/// Upper bound on realization attempts for one sampled operation.
const MAX_TRIES: usize = 32;

/// A corrupted sentence and the operations realized on it, in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Corruption {
    pub sentence: Sentence,
    pub realized: Vec<NoiseOp>,
    /// Sampled error count; some may have found no applicable operation.
    pub requested: usize,
    /// Per operation (by [`NoiseOp::index`]), its share of the profile
    /// weight among the operations that had a site, summed over draws.
    pub target_share: [f64; NoiseOp::ALL.len()],
}

/// A window of the current sentence and the rewrites it admits.
struct Site {
    start: usize,
    end: usize,
    options: Vec<Vec<String>>,
    /// Relative option weights; uniform when absent.
    weights: Option<Vec<f64>>,
}

impl Site {
    fn new(start: usize, end: usize, options: Vec<Vec<String>>) -> Option<Site> {
        (!options.is_empty()).then_some(Site {
            start,
            end,
            options,
            weights: None,
        })
    }

    fn word(p: usize, words: BTreeSet<String>, current: &str) -> Option<Site> {
        let options = words
            .into_iter()
            .filter(|w| !w.is_empty() && w != current)
            .map(|w| vec![w])
            .collect();
        Site::new(p, p + 1, options)
    }
}

/// Per-sentence corruption state: tokens plus a lock per token so that
/// realized errors never overlap or touch.
struct Draft {
    words: Vec<String>,
    locked: Vec<bool>,
}

impl Draft {
    fn free(&self, start: usize, end: usize) -> bool {
        !self.locked[start..end].iter().any(|&l| l)
    }

    /// A deletion of `start..end` is fixed by an append on the previous
    /// token, which therefore must exist and be untouched.
    fn deletable(&self, start: usize, end: usize) -> bool {
        start >= 1 && end <= self.words.len() && !self.locked[start - 1] && self.free(start, end)
    }

    fn insertable(&self, p: usize) -> bool {
        (p == 0 || !self.locked[p - 1]) && (p == self.words.len() || !self.locked[p])
    }

    fn splice(&self, start: usize, end: usize, replacement: &[String]) -> Vec<String> {
        let mut out = Vec::with_capacity(self.words.len() + replacement.len());
        out.extend_from_slice(&self.words[..start]);
        out.extend_from_slice(replacement);
        out.extend_from_slice(&self.words[end..]);
        out
    }

    fn commit(&mut self, start: usize, end: usize, words: Vec<String>, added: usize) {
        self.words = words;
        self.locked.splice(start..end, std::iter::repeat_n(true, added));
        if start > 0 {
            self.locked[start - 1] = true;
        }
        if let Some(l) = self.locked.get_mut(start + added) {
            *l = true;
        }
    }
}

fn is_word(w: &str) -> bool {
    w.chars().count() >= 2 && w.chars().all(|c| c.is_alphabetic())
}

/// Verb form for one of the inventory's verb types.
fn verb_type_form(kind: &str) -> Option<VerbForm> {
    Some(match kind {
        "inf" | "1sg" | "2sg" | "pl" => VerbForm::Vb,
        "3sg" => VerbForm::Vbz,
        "part" => VerbForm::Vbg,
        "p" | "1sgp" | "2sgp" | "3sgp" | "ppl" => VerbForm::Vbd,
        "ppart" => VerbForm::Vbn,
        _ => return None,
    })
}

const BE_FORMS: [&str; 8] = ["be", "am", "are", "is", "was", "were", "being", "been"];

fn be_form(kind: &str) -> Option<&'static str> {
    Some(match kind {
        "inf" => "be",
        "1sg" => "am",
        "2sg" | "pl" => "are",
        "3sg" => "is",
        "part" => "being",
        "p" | "1sgp" | "3sgp" => "was",
        "2sgp" | "ppl" => "were",
        "ppart" => "been",
        _ => return None,
    })
}

/// Base form under a guessed tag, then re-inflected to another tag.
fn pos_base(word: &str, pos: Pos, lexicon: &Lexicon) -> Option<String> {
    let strip = |suffix: &str| {
        word.strip_suffix(suffix)
            .filter(|b| b.len() >= 2)
            .map(str::to_string)
    };
    match pos {
        Pos::Nns => morph::singularize(word, lexicon),
        Pos::Jjr => strip("er"),
        Pos::Jjs => strip("est"),
        Pos::Rb => strip("ly"),
        Pos::Nn | Pos::Vb | Pos::Jj => Some(word.to_string()),
    }
}

fn pos_inflect(base: &str, pos: Pos, lexicon: &Lexicon) -> String {
    match pos {
        Pos::Nns => morph::pluralize(base, lexicon),
        Pos::Jjr => format!("{base}er"),
        Pos::Jjs => format!("{base}est"),
        Pos::Rb => format!("{base}ly"),
        Pos::Nn | Pos::Vb | Pos::Jj => base.to_string(),
    }
}

/// Corrupts clean sentences under a profile.
#[derive(Debug, Clone, Copy)]
pub struct Noiser<'a> {
    profile: &'a NoiseProfile,
    dict: &'a EditDictionary,
    lexicon: &'a Lexicon,
    patterns: &'a PatternInventories,
    tagset: &'a TagSet,
}

impl<'a> Noiser<'a> {
    pub fn new(
        profile: &'a NoiseProfile,
        dict: &'a EditDictionary,
        lexicon: &'a Lexicon,
        patterns: &'a PatternInventories,
        tagset: &'a TagSet,
    ) -> Result<Self> {
        profile.validate(patterns)?;
        Ok(Noiser {
            profile,
            dict,
            lexicon,
            patterns,
            tagset,
        })
    }

    pub fn profile(&self) -> &NoiseProfile {
        self.profile
    }

    /// Deterministic generator for one line.
    pub fn line_rng(&self, line_seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(splitmix64(self.profile.seed ^ splitmix64(line_seed)))
    }

    /// Corrupts `clean`; a pure function of the inputs and `line_seed`.
    pub fn corrupt(&self, clean: &Sentence, line_seed: u64) -> Corruption {
        let mut rng = self.line_rng(line_seed);
        let requested = match Poisson::new(self.profile.expected_errors) {
            Ok(d) if !clean.is_empty() => d.sample(&mut rng) as usize,
            _ => 0,
        };
        let mut draft = Draft {
            words: clean.words().map(str::to_string).collect(),
            locked: vec![false; clean.len()],
        };
        let mut realized = Vec::new();
        let mut target_share = [0.0; NoiseOp::ALL.len()];
        for _ in 0..requested {
            if let Some(op) = self.one_error(clean, &mut draft, &mut target_share, &mut rng) {
                realized.push(op);
            }
        }
        let sentence = Sentence::from_words(draft.words.iter().map(String::as_str))
            .expect("noise operations produce valid tokens");
        Corruption {
            sentence,
            realized,
            requested,
            target_share,
        }
    }

    fn one_error(
        &self,
        clean: &Sentence,
        draft: &mut Draft,
        target_share: &mut [f64; NoiseOp::ALL.len()],
        rng: &mut ChaCha8Rng,
    ) -> Option<NoiseOp> {
        let mut pool: Vec<(NoiseOp, Vec<Site>)> = self
            .profile
            .active_ops()
            .map(|op| (op, self.sites(op, draft, rng)))
            .filter(|(_, sites)| !sites.is_empty())
            .collect();
        let applicable: f64 = pool.iter().map(|(op, _)| self.profile.weight(*op)).sum();
        for (op, _) in &pool {
            target_share[op.index()] += self.profile.weight(*op) / applicable;
        }
        while !pool.is_empty() {
            let total: f64 = pool.iter().map(|(op, _)| self.profile.weight(*op)).sum();
            let mut x = rng.random::<f64>() * total;
            let mut pick = pool.len() - 1;
            for (i, (op, _)) in pool.iter().enumerate() {
                x -= self.profile.weight(*op);
                if x < 0.0 {
                    pick = i;
                    break;
                }
            }
            let (op, mut sites) = pool.swap_remove(pick);
            if self.realize(clean, draft, &mut sites, rng) {
                return Some(op);
            }
        }
        None
    }

    fn realize(&self, clean: &Sentence, draft: &mut Draft, sites: &mut [Site], rng: &mut ChaCha8Rng) -> bool {
        sites.shuffle(rng);
        let mut tries = 0;
        for site in sites.iter() {
            let mut order: Vec<usize> = (0..site.options.len()).collect();
            match &site.weights {
                Some(w) => {
                    let mut keyed: Vec<(f64, usize)> = order
                        .iter()
                        .map(|&i| (rng.random::<f64>().powf(1.0 / w[i]), i))
                        .collect();
                    keyed.sort_by(|a, b| b.0.total_cmp(&a.0));
                    order = keyed.into_iter().map(|(_, i)| i).collect();
                }
                None => order.shuffle(rng),
            }
            for i in order {
                if tries == MAX_TRIES {
                    return false;
                }
                tries += 1;
                let replacement = &site.options[i];
                let words = draft.splice(site.start, site.end, replacement);
                if self.acceptable(clean, &words) {
                    draft.commit(site.start, site.end, words, replacement.len());
                    return true;
                }
            }
        }
        false
    }

    /// The corrected direction must be expressible: converting the
    /// candidate back to the clean sentence needs no `$UNKNOWN`.
    fn acceptable(&self, clean: &Sentence, words: &[String]) -> bool {
        if !self.profile.expressible_only {
            return true;
        }
        let Ok(candidate) = Sentence::from_words(words.iter().map(String::as_str)) else {
            return false;
        };
        Seq2Edit::new(self.lexicon, self.tagset)
            .convert(&candidate, clean)
            .is_ok_and(|e| !e.iter().any(|t| *t == EditTag::Unknown))
    }

    fn sites(&self, op: NoiseOp, draft: &Draft, rng: &mut ChaCha8Rng) -> Vec<Site> {
        let words = &draft.words;
        let n = words.len();
        let singles = |f: &dyn Fn(usize, &str) -> Option<Site>| -> Vec<Site> {
            (0..n)
                .filter(|&p| draft.free(p, p + 1))
                .filter_map(|p| f(p, &words[p]))
                .collect()
        };
        match op {
            NoiseOp::TokenDict => singles(&|p, w| {
                let variants = self.dict.variants(w)?;
                let (options, weights) = variants
                    .iter()
                    .filter(|(v, _)| v.as_str() != w && Token::new(v.as_str()).is_ok())
                    .map(|(v, c)| (vec![v.clone()], *c as f64))
                    .unzip();
                let mut site = Site::new(p, p + 1, options)?;
                site.weights = Some(weights);
                Some(site)
            }),
            NoiseOp::TypePreposition => self.closed_class(draft, &self.patterns.prepositions),
            NoiseOp::TypeDeterminer => self.closed_class(draft, &self.patterns.determiners),
            NoiseOp::TypeVerbform => singles(&|p, w| {
                let lower = w.to_lowercase();
                let forms: BTreeSet<String> = if BE_FORMS.contains(&lower.as_str()) {
                    self.patterns
                        .verb_types
                        .iter()
                        .filter_map(|k| be_form(k))
                        .map(|f| morph::match_case(w, f))
                        .collect()
                } else {
                    let readings = self.lexicon.verb_readings(&lower);
                    readings
                        .iter()
                        .flat_map(|&(id, _)| {
                            self.patterns
                                .verb_types
                                .iter()
                                .filter_map(|k| verb_type_form(k))
                                .map(move |f| morph::match_case(w, self.lexicon.verb_form(id, f)))
                        })
                        .collect()
                };
                Site::word(p, forms, w)
            }),
            NoiseOp::TypeNounNumber => singles(&|p, w| {
                if !is_word(w) {
                    return None;
                }
                let guesses = guess_pos(w, self.lexicon);
                let mut forms = BTreeSet::new();
                if guesses.contains(&Pos::Nn) {
                    forms.insert(morph::pluralize(w, self.lexicon));
                }
                if guesses.contains(&Pos::Nns) {
                    forms.extend(morph::singularize(w, self.lexicon));
                }
                Site::word(p, forms, w)
            }),
            NoiseOp::TypePos => singles(&|p, w| {
                if !is_word(w) {
                    return None;
                }
                let targets: Vec<Pos> =
                    self.patterns.pos_types.iter().filter_map(|s| Pos::parse(s)).collect();
                let mut forms = BTreeSet::new();
                for from in guess_pos(w, self.lexicon) {
                    let Some(base) = pos_base(w, from, self.lexicon) else {
                        continue;
                    };
                    for &to in targets.iter().filter(|&&t| t != from) {
                        forms.insert(pos_inflect(&base, to, self.lexicon));
                    }
                }
                Site::word(p, forms, w)
            }),
            NoiseOp::AdjectiveAdverb => singles(&|p, w| {
                if !is_word(w) {
                    return None;
                }
                let guesses = guess_pos(w, self.lexicon);
                let mut forms = BTreeSet::new();
                if guesses.contains(&Pos::Rb) {
                    forms.extend(w.strip_suffix("ly").filter(|b| b.len() >= 2).map(str::to_string));
                }
                if guesses.contains(&Pos::Jj) {
                    forms.insert(format!("{w}ly"));
                }
                Site::word(p, forms, w)
            }),
            NoiseOp::CharPattern => singles(&|p, w| {
                if !is_word(w) {
                    return None;
                }
                let mut forms = BTreeSet::new();
                for (key, value) in &self.patterns.letter_patterns {
                    for (at, _) in w.match_indices(key.as_str()) {
                        forms.insert(format!("{}{value}{}", &w[..at], &w[at + key.len()..]));
                    }
                }
                Site::word(p, forms, w)
            }),
            NoiseOp::VowelSwap => singles(&|p, w| {
                if !is_word(w) {
                    return None;
                }
                let mut forms = BTreeSet::new();
                for combo in &self.patterns.vowel_combinations {
                    let swapped: String = combo.chars().rev().collect();
                    for (at, _) in w.match_indices(combo.as_str()) {
                        forms.insert(format!("{}{swapped}{}", &w[..at], &w[at + combo.len()..]));
                    }
                }
                Site::word(p, forms, w)
            }),
            NoiseOp::SimilarSound => singles(&|p, w| {
                if !is_word(w) {
                    return None;
                }
                let mut forms = BTreeSet::new();
                for (at, c) in w.char_indices() {
                    for &(from, to) in &self.patterns.similar_sound {
                        if c == from {
                            forms.insert(format!("{}{to}{}", &w[..at], &w[at + c.len_utf8()..]));
                        }
                    }
                }
                Site::word(p, forms, w)
            }),
            NoiseOp::NgramSwap => {
                let mut sites = Vec::new();
                for size in [2, 3] {
                    for p in (0..n.saturating_sub(size - 1)).filter(|&p| draft.free(p, p + size)) {
                        let window = &words[p..p + size];
                        let reversed: Vec<String> = window.iter().rev().cloned().collect();
                        if reversed != window {
                            sites.extend(Site::new(p, p + size, vec![reversed]));
                        }
                    }
                }
                sites
            }
            NoiseOp::NgramInsert => (0..=n)
                .filter(|&p| draft.insertable(p))
                .filter_map(|p| Site::new(p, p, self.common_ngrams(rng)))
                .collect(),
            NoiseOp::NgramDelete => {
                let sizes: &[usize] = if self.profile.single_edit { &[1] } else { &[1, 2] };
                let mut sites = Vec::new();
                for &size in sizes {
                    for p in (1..n).filter(|&p| draft.deletable(p, p + size)) {
                        sites.extend(Site::new(p, p + size, vec![Vec::new()]));
                    }
                }
                sites
            }
            NoiseOp::NgramReplace => {
                let sizes: &[usize] = if self.profile.single_edit { &[1] } else { &[1, 2] };
                let mut sites = Vec::new();
                for &size in sizes {
                    for p in (0..n.saturating_sub(size - 1)).filter(|&p| draft.free(p, p + size)) {
                        let options: Vec<Vec<String>> = self
                            .common_ngrams_of(size, rng)
                            .into_iter()
                            .filter(|g| g.as_slice() != &words[p..p + size])
                            .collect();
                        sites.extend(Site::new(p, p + size, options));
                    }
                }
                sites
            }
        }
    }

    /// Swaps within a closed word class; the empty entry deletes.
    fn closed_class(&self, draft: &Draft, class: &[String]) -> Vec<Site> {
        let mut sites = Vec::new();
        for (p, w) in draft.words.iter().enumerate() {
            let lower = w.to_lowercase();
            if !draft.free(p, p + 1) || !class.iter().any(|c| !c.is_empty() && *c == lower) {
                continue;
            }
            let mut options: Vec<Vec<String>> = class
                .iter()
                .filter(|c| !c.is_empty() && **c != lower)
                .map(|c| vec![morph::match_case(w, c)])
                .collect();
            if class.iter().any(String::is_empty) && draft.deletable(p, p + 1) {
                options.push(Vec::new());
            }
            sites.extend(Site::new(p, p + 1, options));
        }
        sites
    }

    fn common_ngrams(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<String>> {
        let mut out = self.common_ngrams_of(1, rng);
        if !self.profile.single_edit {
            out.extend(self.common_ngrams_of(2, rng));
        }
        out
    }

    /// All common unigrams, or a random sample of common bigrams.
    fn common_ngrams_of(&self, size: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<String>> {
        if size == 1 {
            return COMMON_WORDS.iter().map(|w| vec![w.to_string()]).collect();
        }
        (0..COMMON_WORDS.len())
            .map(|_| {
                (0..size)
                    .map(|_| COMMON_WORDS[rng.random_range(0..COMMON_WORDS.len())].to_string())
                    .collect()
            })
            .collect()
    }
}

/// SplitMix64 finalizer, used to decorrelate per-line seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Corrupts one sentence with the bundled inventories and default tagset.
pub fn corrupt_sentence(
    clean: &Sentence,
    profile: &NoiseProfile,
    dict: &EditDictionary,
    lexicon: &Lexicon,
    line_seed: u64,
) -> Result<Sentence> {
    let noiser = Noiser::new(
        profile,
        dict,
        lexicon,
        PatternInventories::bundled(),
        TagSet::default_tagset(),
    )?;
    Ok(noiser.corrupt(clean, line_seed).sentence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::tokenize;

    fn run(profile: &NoiseProfile, line: &str, seed: u64) -> Corruption {
        let dict = EditDictionary::new();
        let noiser = Noiser::new(
            profile,
            &dict,
            Lexicon::bundled(),
            PatternInventories::bundled(),
            TagSet::default_tagset(),
        )
        .unwrap();
        noiser.corrupt(&tokenize(line), seed)
    }

    #[test]
    fn zero_profile_is_identity() {
        let p = NoiseProfile::default();
        for seed in 0..20 {
            let c = run(&p, "I live in Rome .", seed);
            assert_eq!(c.sentence, tokenize("I live in Rome ."));
            assert!(c.realized.is_empty());
        }
    }

    #[test]
    fn preposition_swaps_stay_in_the_list() {
        let mut p = NoiseProfile::uniform(&[NoiseOp::TypePreposition]);
        p.expected_errors = 3.0;
        let preps = &PatternInventories::bundled().prepositions;
        let mut changed = 0;
        for seed in 0..50 {
            let c = run(&p, "I live in Rome", seed);
            let out: Vec<&str> = c.sentence.words().collect();
            assert_eq!(&out[..2], ["I", "live"]);
            assert!(out.len() == 3 || out.len() == 4);
            if out.len() == 4 {
                assert_eq!(out[3], "Rome");
                assert!(preps.iter().any(|w| w == out[2]));
                changed += usize::from(out[2] != "in");
            }
        }
        assert!(changed > 0);
    }

    #[test]
    fn char_pattern_on_station() {
        let mut p = NoiseProfile::uniform(&[NoiseOp::CharPattern]);
        p.expected_errors = 5.0;
        let seen: BTreeSet<String> = (0..40)
            .map(|s| run(&p, "station", s).sentence.to_string())
            .collect();
        assert!(seen.contains("stasion"), "{seen:?}");
    }

    #[test]
    fn deterministic_per_seed() {
        let p = NoiseProfile::bundled();
        let line = "The old teacher cleaned the window in the kitchen quickly .";
        for seed in 0..20 {
            assert_eq!(run(&p, line, seed), run(&p, line, seed));
        }
    }

    #[test]
    fn corruption_is_expressible() {
        let mut p = NoiseProfile::bundled();
        p.expected_errors = 2.0;
        let line = "The old teachers walked to the station near the river slowly .";
        let clean = tokenize(line);
        let lex = Lexicon::bundled();
        let set = TagSet::default_tagset();
        for seed in 0..200 {
            let c = run(&p, line, seed);
            let e = crate::seq2edit(&c.sentence, &clean, lex, set).unwrap();
            assert!(!e.iter().any(|t| *t == EditTag::Unknown), "{} -> {e}", c.sentence);
        }
    }

    #[test]
    fn verb_types_map_to_forms() {
        assert_eq!(verb_type_form("3sg"), Some(VerbForm::Vbz));
        assert_eq!(verb_type_form("ppart"), Some(VerbForm::Vbn));
        assert_eq!(be_form("1sg"), Some("am"));
        assert_eq!(be_form("2sgp"), Some("were"));
    }
}
