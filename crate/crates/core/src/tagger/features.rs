use std::hash::Hasher;

use fnv::FnvHasher;

use crate::error::{Error, Result};
use crate::types::Sentence;

/// One feature template of the hashed encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Template {
    Word,
    Lower,
    Char2,
    Char3,
    /// Lowercased neighbor at a relative offset in -2..=2.
    Neighbor(i8),
    /// First or last position of the sentence.
    Boundary,
    Bias,
}

impl Template {
    pub fn name(self) -> String {
        match self {
            Template::Word => "word".into(),
            Template::Lower => "lower".into(),
            Template::Char2 => "char2".into(),
            Template::Char3 => "char3".into(),
            Template::Neighbor(k) => format!("nbr{k:+}"),
            Template::Boundary => "boundary".into(),
            Template::Bias => "bias".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Template> {
        Some(match s {
            "word" => Template::Word,
            "lower" => Template::Lower,
            "char2" => Template::Char2,
            "char3" => Template::Char3,
            "boundary" => Template::Boundary,
            "bias" => Template::Bias,
            _ => {
                let k: i8 = s.strip_prefix("nbr")?.parse().ok()?;
                if k == 0 || !(-2..=2).contains(&k) {
                    return None;
                }
                Template::Neighbor(k)
            }
        })
    }
}

pub const DEFAULT_TEMPLATES: [Template; 10] = [
    Template::Word,
    Template::Lower,
    Template::Char2,
    Template::Char3,
    Template::Neighbor(-2),
    Template::Neighbor(-1),
    Template::Neighbor(1),
    Template::Neighbor(2),
    Template::Boundary,
    Template::Bias,
];

pub const DEFAULT_DIM: usize = 1 << 14;

/// Sparse binary features of one token: hashed indices, repeats allowed.
pub type TokenFeatures = Vec<u32>;

/// Maps each token in context to hashed feature indices in `0..dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureEncoder {
    dim: usize,
    templates: Vec<Template>,
}

impl Default for FeatureEncoder {
    fn default() -> Self {
        FeatureEncoder {
            dim: DEFAULT_DIM,
            templates: DEFAULT_TEMPLATES.to_vec(),
        }
    }
}

impl FeatureEncoder {
    pub fn new(dim: usize, templates: Vec<Template>) -> Result<Self> {
        if dim == 0 || dim > u32::MAX as usize {
            return Err(Error::Model(format!("feature dimension {dim} out of range")));
        }
        if templates.is_empty() {
            return Err(Error::Model("no feature templates".into()));
        }
        Ok(FeatureEncoder { dim, templates })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    fn index(&self, template: Template, value: &str) -> u32 {
        let mut h = FnvHasher::default();
        h.write(template.name().as_bytes());
        h.write_u8(0xff);
        h.write(value.as_bytes());
        (h.finish() % self.dim as u64) as u32
    }

    pub fn encode(&self, sentence: &Sentence) -> Vec<TokenFeatures> {
        let lower: Vec<String> = sentence.words().map(str::to_lowercase).collect();
        let n = lower.len();
        (0..n)
            .map(|i| {
                let mut out = Vec::with_capacity(32);
                for &t in &self.templates {
                    match t {
                        Template::Word => out.push(self.index(t, &sentence[i])),
                        Template::Lower => out.push(self.index(t, &lower[i])),
                        Template::Char2 | Template::Char3 => {
                            let k = if t == Template::Char2 { 2 } else { 3 };
                            let chars: Vec<char> =
                                std::iter::once('^').chain(lower[i].chars()).chain(std::iter::once('$')).collect();
                            for w in chars.windows(k) {
                                out.push(self.index(t, &w.iter().collect::<String>()));
                            }
                        }
                        Template::Neighbor(k) => {
                            let j = i as isize + k as isize;
                            let value = if j < 0 {
                                "<s>"
                            } else if j as usize >= n {
                                "</s>"
                            } else {
                                &lower[j as usize]
                            };
                            out.push(self.index(t, value));
                        }
                        Template::Boundary => {
                            if i == 0 || i + 1 == n {
                                out.push(self.index(t, if i == 0 { "first" } else { "last" }));
                            }
                        }
                        Template::Bias => out.push(self.index(t, "")),
                    }
                }
                out
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::tokenize;

    #[test]
    fn deterministic_and_in_range() {
        let enc = FeatureEncoder::new(101, DEFAULT_TEMPLATES.to_vec()).unwrap();
        let s = tokenize("He go to school");
        let a = enc.encode(&s);
        assert_eq!(a, enc.encode(&s));
        assert_eq!(a.len(), 4);
        assert!(a.iter().flatten().all(|&f| (f as usize) < 101));
    }

    #[test]
    fn identical_context_gives_identical_features() {
        let enc = FeatureEncoder::default();
        let a = enc.encode(&tokenize("a b c d e f g"));
        let b = enc.encode(&tokenize("x b c d e f y"));
        assert_eq!(a[3], b[3]);
        assert_ne!(a[1], b[1]);
    }

    #[test]
    fn template_names_roundtrip() {
        for t in DEFAULT_TEMPLATES {
            assert_eq!(Template::parse(&t.name()), Some(t));
        }
        assert_eq!(Template::parse("nbr+0"), None);
        assert_eq!(Template::parse("nbr+3"), None);
    }
}
