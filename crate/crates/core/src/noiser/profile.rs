use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexicon::PatternInventories;

/// The corruption operations a profile can weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseOp {
    TokenDict,
    TypePreposition,
    TypeDeterminer,
    TypeVerbform,
    TypeNounNumber,
    TypePos,
    NgramSwap,
    NgramInsert,
    NgramDelete,
    NgramReplace,
    CharPattern,
    VowelSwap,
    SimilarSound,
    AdjectiveAdverb,
}

impl NoiseOp {
    pub const ALL: [NoiseOp; 14] = [
        NoiseOp::TokenDict,
        NoiseOp::TypePreposition,
        NoiseOp::TypeDeterminer,
        NoiseOp::TypeVerbform,
        NoiseOp::TypeNounNumber,
        NoiseOp::TypePos,
        NoiseOp::NgramSwap,
        NoiseOp::NgramInsert,
        NoiseOp::NgramDelete,
        NoiseOp::NgramReplace,
        NoiseOp::CharPattern,
        NoiseOp::VowelSwap,
        NoiseOp::SimilarSound,
        NoiseOp::AdjectiveAdverb,
    ];

    /// Profile-file key.
    pub fn key(self) -> &'static str {
        match self {
            NoiseOp::TokenDict => "token_dict",
            NoiseOp::TypePreposition => "type_preposition",
            NoiseOp::TypeDeterminer => "type_determiner",
            NoiseOp::TypeVerbform => "type_verbform",
            NoiseOp::TypeNounNumber => "type_noun_number",
            NoiseOp::TypePos => "type_pos",
            NoiseOp::NgramSwap => "ngram_swap",
            NoiseOp::NgramInsert => "ngram_insert",
            NoiseOp::NgramDelete => "ngram_delete",
            NoiseOp::NgramReplace => "ngram_replace",
            NoiseOp::CharPattern => "char_pattern",
            NoiseOp::VowelSwap => "vowel_swap",
            NoiseOp::SimilarSound => "similar_sound",
            NoiseOp::AdjectiveAdverb => "adjective_adverb",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(key: &str) -> Option<NoiseOp> {
        NoiseOp::ALL.into_iter().find(|op| op.key() == key)
    }
}

impl fmt::Display for NoiseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

pub const DEFAULT_EXPECTED_ERRORS: f64 = 1.0;

const DEFAULT_PROFILE: &str = include_str!("../../data/default.profile");

/// Operation weights and sampling parameters for the noiser.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProfile {
    weights: [f64; 14],
    /// Mean of the per-sentence Poisson error count.
    pub expected_errors: f64,
    pub seed: u64,
    /// Keep every realized error fixable by one tag per token: deletions
    /// and insertions are single tokens.
    pub single_edit: bool,
    /// Only realize errors whose correction is expressible in the tagset.
    pub expressible_only: bool,
}

impl Default for NoiseProfile {
    /// All weights zero.
    fn default() -> Self {
        NoiseProfile {
            weights: [0.0; 14],
            expected_errors: DEFAULT_EXPECTED_ERRORS,
            seed: 0,
            single_edit: false,
            expressible_only: true,
        }
    }
}

impl NoiseProfile {
    /// Weight 1 on each of `ops`, zero elsewhere.
    pub fn uniform(ops: &[NoiseOp]) -> Self {
        let mut p = NoiseProfile::default();
        for op in ops {
            p.weights[op.index()] = 1.0;
        }
        p
    }

    /// The bundled default profile.
    pub fn bundled() -> Self {
        Self::parse(DEFAULT_PROFILE).expect("bundled profile is valid")
    }

    pub fn weight(&self, op: NoiseOp) -> f64 {
        self.weights[op.index()]
    }

    pub fn set_weight(&mut self, op: NoiseOp, weight: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::Profile(format!("{op} weight {weight} is outside [0, 1]")));
        }
        self.weights[op.index()] = weight;
        Ok(())
    }

    pub fn active_ops(&self) -> impl Iterator<Item = NoiseOp> + '_ {
        NoiseOp::ALL.into_iter().filter(|op| self.weight(*op) > 0.0)
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = NoiseProfile::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::Profile(format!("line {}: {reason}", i + 1));
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad(format!("expected key = value, got `{line}`")))?;
            let number = || {
                value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("`{value}` is not a number")))
            };
            let flag = || match value {
                "true" | "1" => Ok(true),
                "false" | "0" => Ok(false),
                _ => Err(bad(format!("`{value}` is not a boolean"))),
            };
            match key {
                "expected_errors" => {
                    let v = number()?;
                    if v < 0.0 {
                        return Err(bad("expected_errors must be nonnegative".into()));
                    }
                    p.expected_errors = v;
                }
                "seed" => {
                    p.seed = value
                        .parse()
                        .map_err(|_| bad(format!("`{value}` is not an unsigned integer")))?
                }
                "single_edit" => p.single_edit = flag()?,
                "expressible_only" => p.expressible_only = flag()?,
                _ => {
                    let op = NoiseOp::parse(key).ok_or_else(|| bad(format!("unknown key `{key}`")))?;
                    p.set_weight(op, number()?).map_err(|e| bad(e.to_string()))?;
                }
            }
        }
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Renders the profile file format.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for op in NoiseOp::ALL {
            out.push_str(&format!("{} = {}\n", op.key(), self.weight(op)));
        }
        out.push_str(&format!("expected_errors = {}\n", self.expected_errors));
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("single_edit = {}\n", self.single_edit));
        out.push_str(&format!("expressible_only = {}\n", self.expressible_only));
        out
    }

    /// Checks that every weighted operation has a non-empty inventory.
    pub fn validate(&self, patterns: &PatternInventories) -> Result<()> {
        for op in self.active_ops() {
            let empty = match op {
                NoiseOp::TypePreposition => patterns.prepositions.is_empty(),
                NoiseOp::TypeDeterminer => patterns.determiners.is_empty(),
                NoiseOp::TypeVerbform => patterns.verb_types.is_empty(),
                NoiseOp::TypePos => patterns.pos_types.is_empty(),
                NoiseOp::CharPattern => patterns.letter_patterns.is_empty(),
                NoiseOp::VowelSwap => patterns.vowel_combinations.is_empty(),
                NoiseOp::SimilarSound => patterns.similar_sound.is_empty(),
                _ => false,
            };
            if empty {
                return Err(Error::Profile(format!("{op} has weight but its inventory is empty")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_roundtrip() {
        let p = NoiseProfile::parse(
            "# prepositions only\ntype_preposition = 1\nexpected_errors=2.5\nseed = 9\nsingle_edit = true\n",
        )
        .unwrap();
        assert_eq!(p.weight(NoiseOp::TypePreposition), 1.0);
        assert_eq!(p.weight(NoiseOp::CharPattern), 0.0);
        assert_eq!(p.expected_errors, 2.5);
        assert_eq!(p.seed, 9);
        assert!(p.single_edit);
        assert_eq!(NoiseProfile::parse(&p.render()).unwrap(), p);
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            "type_pos = 1.5",
            "type_pos = -0.1",
            "typo = 1",
            "expected_errors = -1",
            "seed = x",
            "type_pos",
            "single_edit = maybe",
        ] {
            assert!(matches!(NoiseProfile::parse(text), Err(Error::Profile(_))), "{text}");
        }
    }

    #[test]
    fn bundled_profile_is_valid() {
        let p = NoiseProfile::bundled();
        p.validate(PatternInventories::bundled()).unwrap();
        assert_eq!(p.weight(NoiseOp::TokenDict), 0.0);
        assert!(p.active_ops().count() >= 10);
    }
}
