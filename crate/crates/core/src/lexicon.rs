//! Bundled linguistic data: the verb-form lexicon, irregular plurals, and the
//! error-pattern inventories used by the noiser.
//!
//! Every data file is listed in `MANIFEST` with its SHA-256 digest. Loading
//! from a directory verifies each file it reads against the manifest.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::morph;
use crate::types::VerbForm;

const VERBS: &str = include_str!("../data/verbs.tsv");
const PLURALS: &str = include_str!("../data/plurals.tsv");
const PREPOSITIONS: &str = include_str!("../data/prepositions.txt");
const DETERMINERS: &str = include_str!("../data/determiners.txt");
const VERB_TYPES: &str = include_str!("../data/verb_types.txt");
const LETTER_PATTERNS: &str = include_str!("../data/letter_patterns.tsv");
const VOWEL_COMBINATIONS: &str = include_str!("../data/vowel_combinations.txt");
const SIMILAR_SOUND: &str = include_str!("../data/similar_sound.tsv");
const POS_TYPES: &str = include_str!("../data/pos_types.txt");
const MANIFEST: &str = include_str!("../data/MANIFEST");

/// Marker used in one-entry-per-line files for the empty string.
pub const EMPTY_ENTRY: &str = "<empty>";

/// Bundled files and their contents, in manifest order.
pub(crate) const BUNDLED_FILES: [(&str, &str); 10] = [
    ("determiners.txt", DETERMINERS),
    ("letter_patterns.tsv", LETTER_PATTERNS),
    ("plurals.tsv", PLURALS),
    ("pos_types.txt", POS_TYPES),
    ("prepositions.txt", PREPOSITIONS),
    ("similar_sound.tsv", SIMILAR_SOUND),
    ("tagset.txt", include_str!("../data/tagset.txt")),
    ("verb_types.txt", VERB_TYPES),
    ("verbs.tsv", VERBS),
    ("vowel_combinations.txt", VOWEL_COMBINATIONS),
];

/// Verb inflections and irregular noun plurals.
///
/// Lookups lowercase the query; results are re-cased to match it.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    verbs: Vec<[String; 5]>,
    by_form: [HashMap<String, usize>; 5],
    plural_of: HashMap<String, String>,
    singular_of: HashMap<String, String>,
}

impl Lexicon {
    /// Parses `lemma<TAB>VBD<TAB>VBG<TAB>VBN<TAB>VBZ` rows and
    /// `singular<TAB>plural` rows.
    pub fn parse(verbs_tsv: &str, plurals_tsv: &str) -> Result<Self> {
        let mut lex = Lexicon::default();
        for (i, line) in verbs_tsv.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 5 || cols.iter().any(|c| c.is_empty() || c.contains(' ')) {
                return Err(Error::Data {
                    file: "verbs.tsv".into(),
                    line: i + 1,
                    reason: "expected lemma, VBD, VBG, VBN, VBZ separated by tabs".into(),
                });
            }
            let forms: [String; 5] = std::array::from_fn(|k| cols[k].to_lowercase());
            lex.add_verb(forms);
        }
        for (i, line) in plurals_tsv.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let Some((sg, pl)) = line.split_once('\t').filter(|(a, b)| {
                !a.is_empty() && !b.is_empty() && !b.contains('\t')
            }) else {
                return Err(Error::Data {
                    file: "plurals.tsv".into(),
                    line: i + 1,
                    reason: "expected singular<TAB>plural".into(),
                });
            };
            let (sg, pl) = (sg.to_lowercase(), pl.to_lowercase());
            lex.singular_of.entry(pl.clone()).or_insert_with(|| sg.clone());
            lex.plural_of.entry(sg).or_insert(pl);
        }
        Ok(lex)
    }

    fn add_verb(&mut self, forms: [String; 5]) {
        let id = self.verbs.len();
        for form in VerbForm::ALL {
            self.by_form[form.index()]
                .entry(forms[form.index()].clone())
                .or_insert(id);
        }
        self.verbs.push(forms);
    }

    /// Loads `verbs.tsv` and `plurals.tsv` from `dir`, verifying checksums.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest = Manifest::load(dir)?;
        let verbs = manifest.read_verified(dir, "verbs.tsv")?;
        let plurals = manifest.read_verified(dir, "plurals.tsv")?;
        Self::parse(&verbs, &plurals)
    }

    /// The bundled lexicon.
    pub fn bundled() -> &'static Lexicon {
        static LEX: OnceLock<Lexicon> = OnceLock::new();
        LEX.get_or_init(|| Lexicon::parse(VERBS, PLURALS).expect("bundled lexicon is valid"))
    }

    pub fn verb_count(&self) -> usize {
        self.verbs.len()
    }

    /// Rewrites `word` from verb form `from` to `to`, or `None` when `word`
    /// is not a known `from` form.
    pub fn convert_verb(&self, word: &str, from: VerbForm, to: VerbForm) -> Option<String> {
        let lower = word.to_lowercase();
        let id = *self.by_form[from.index()].get(&lower)?;
        Some(morph::match_case(word, &self.verbs[id][to.index()]))
    }

    /// Every (lemma id, form) reading of `word`.
    pub fn verb_readings(&self, word: &str) -> Vec<(usize, VerbForm)> {
        let lower = word.to_lowercase();
        VerbForm::ALL
            .into_iter()
            .filter_map(|f| self.by_form[f.index()].get(&lower).map(|&id| (id, f)))
            .collect()
    }

    /// Surface form `form` of lemma `id`.
    pub fn verb_form(&self, id: usize, form: VerbForm) -> &str {
        &self.verbs[id][form.index()]
    }

    pub fn irregular_plural(&self, singular: &str) -> Option<&str> {
        self.plural_of.get(singular).map(String::as_str)
    }

    pub fn irregular_singular(&self, plural: &str) -> Option<&str> {
        self.singular_of.get(plural).map(String::as_str)
    }
}

/// The error-pattern inventories driving synthetic corruption.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternInventories {
    /// Includes the empty string, which realizes as deletion.
    pub prepositions: Vec<String>,
    /// Includes the empty string, which realizes as deletion.
    pub determiners: Vec<String>,
    pub verb_types: Vec<String>,
    /// Substring rewrites applied key → value.
    pub letter_patterns: Vec<(String, String)>,
    pub vowel_combinations: Vec<String>,
    /// Letter → similar-sounding letter, one pair per alternative.
    pub similar_sound: Vec<(char, char)>,
    pub pos_types: Vec<String>,
}

impl PatternInventories {
    fn parse(files: &dyn Fn(&str) -> Result<String>) -> Result<Self> {
        let list = |name: &str| -> Result<Vec<String>> {
            Ok(files(name)?
                .lines()
                .map(|l| if l == EMPTY_ENTRY { String::new() } else { l.to_string() })
                .collect())
        };
        let pairs = |name: &str| -> Result<Vec<(String, String)>> {
            files(name)?
                .lines()
                .enumerate()
                .map(|(i, l)| {
                    l.split_once('\t')
                        .map(|(k, v)| (k.to_string(), v.to_string()))
                        .ok_or_else(|| Error::Data {
                            file: name.to_string(),
                            line: i + 1,
                            reason: "expected key<TAB>value".into(),
                        })
                })
                .collect()
        };
        let similar_sound = pairs("similar_sound.tsv")?
            .into_iter()
            .enumerate()
            .map(|(i, (k, v))| {
                let one = |s: &str| {
                    let mut it = s.chars();
                    match (it.next(), it.next()) {
                        (Some(c), None) => Some(c),
                        _ => None,
                    }
                };
                one(&k).zip(one(&v)).ok_or_else(|| Error::Data {
                    file: "similar_sound.tsv".into(),
                    line: i + 1,
                    reason: "expected single letters".into(),
                })
            })
            .collect::<Result<_>>()?;
        let inv = PatternInventories {
            prepositions: list("prepositions.txt")?,
            determiners: list("determiners.txt")?,
            verb_types: list("verb_types.txt")?,
            letter_patterns: pairs("letter_patterns.tsv")?,
            vowel_combinations: list("vowel_combinations.txt")?,
            similar_sound,
            pos_types: list("pos_types.txt")?,
        };
        Ok(inv)
    }

    /// The bundled inventories.
    pub fn bundled() -> &'static PatternInventories {
        static INV: OnceLock<PatternInventories> = OnceLock::new();
        INV.get_or_init(|| {
            PatternInventories::parse(&|name| {
                BUNDLED_FILES
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, text)| text.to_string())
                    .ok_or_else(|| Error::InvalidInput(format!("no bundled file {name}")))
            })
            .expect("bundled inventories are valid")
        })
    }
}

/// Loads the pattern inventories from `dir`, verifying each file against
/// the directory's `MANIFEST`.
pub fn load_patterns(dir: impl AsRef<Path>) -> Result<PatternInventories> {
    let dir = dir.as_ref();
    let manifest = Manifest::load(dir)?;
    PatternInventories::parse(&|name| manifest.read_verified(dir, name))
}

/// `sha256  filename` lines.
#[derive(Debug, Clone)]
pub struct Manifest {
    digests: HashMap<String, String>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut digests = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let Some((digest, name)) = line.split_once("  ") else {
                return Err(Error::Data {
                    file: "MANIFEST".into(),
                    line: i + 1,
                    reason: "expected `<sha256>  <file>`".into(),
                });
            };
            digests.insert(name.to_string(), digest.to_string());
        }
        Ok(Manifest { digests })
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join("MANIFEST");
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::parse(&text)
    }

    pub fn bundled() -> Self {
        Self::parse(MANIFEST).expect("bundled manifest is valid")
    }

    pub fn files(&self) -> impl Iterator<Item = &str> {
        self.digests.keys().map(String::as_str)
    }

    pub fn verify(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let expected = self.digests.get(name).ok_or_else(|| Error::Data {
            file: name.to_string(),
            line: 0,
            reason: "file is not listed in MANIFEST".into(),
        })?;
        let found = hex::encode(Sha256::digest(bytes));
        if &found != expected {
            return Err(Error::Checksum {
                file: name.to_string(),
                expected: expected.clone(),
                found,
            });
        }
        Ok(())
    }

    fn read_verified(&self, dir: &Path, name: &str) -> Result<String> {
        let path = dir.join(name);
        let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
        self.verify(name, &bytes)?;
        String::from_utf8(bytes).map_err(|_| Error::Data {
            file: name.to_string(),
            line: 0,
            reason: "not UTF-8".into(),
        })
    }
}

/// Writes the bundled data files and manifest into `dir`.
pub fn export_bundled(dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, text) in BUNDLED_FILES.iter().copied().chain([("MANIFEST", MANIFEST)]) {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
