//! Small morphology helpers: case patterns, rule-based pluralization, and a
//! suffix-heuristic part-of-speech guesser.

use crate::lexicon::Lexicon;
use crate::types::VerbForm;

/// Re-cases `word` after the pattern of `template`: all-caps, capitalized,
/// or left as given.
pub fn match_case(template: &str, word: &str) -> String {
    let mut letters = template.chars().filter(|c| c.is_alphabetic());
    let first_upper = template.chars().next().is_some_and(char::is_uppercase);
    let all_upper = template.chars().filter(|c| c.is_alphabetic()).count() > 1
        && letters.all(char::is_uppercase);
    if all_upper {
        word.to_uppercase()
    } else if first_upper {
        upper_first(word)
    } else {
        word.to_string()
    }
}

fn upper_first(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// First letter upper-cased, the rest lower-cased.
pub fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars.flat_map(char::to_lowercase)).collect(),
        None => String::new(),
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// Plural of `word` from the irregular list, else by suffix rules.
pub fn pluralize(word: &str, lexicon: &Lexicon) -> String {
    let lower = word.to_lowercase();
    if let Some(pl) = lexicon.irregular_plural(&lower) {
        return match_case(word, pl);
    }
    let chars: Vec<char> = lower.chars().collect();
    let plural = if chars.len() > 1 && lower.ends_with('y') && !is_vowel(chars[chars.len() - 2]) {
        format!("{}ies", &lower[..lower.len() - 1])
    } else if ["s", "x", "z", "ch", "sh"].iter().any(|s| lower.ends_with(s)) {
        format!("{lower}es")
    } else {
        format!("{lower}s")
    };
    match_case(word, &plural)
}

/// Singular of `word`, or `None` when it does not look plural.
pub fn singularize(word: &str, lexicon: &Lexicon) -> Option<String> {
    let lower = word.to_lowercase();
    if let Some(sg) = lexicon.irregular_singular(&lower) {
        return Some(match_case(word, sg));
    }
    let singular = if lower.chars().count() > 3 && lower.ends_with("ies") {
        format!("{}y", &lower[..lower.len() - 3])
    } else if ["ses", "xes", "zes", "ches", "shes"].iter().any(|s| lower.ends_with(s)) {
        lower[..lower.len() - 2].to_string()
    } else if lower.ends_with('s') && !lower.ends_with("ss") && lower.len() > 1 {
        lower[..lower.len() - 1].to_string()
    } else {
        return None;
    };
    Some(match_case(word, &singular))
}

/// Coarse part-of-speech classes used by the noiser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Nn,
    Nns,
    Vb,
    Jj,
    Jjr,
    Jjs,
    Rb,
}

impl Pos {
    pub const ALL: [Pos; 7] = [Pos::Nn, Pos::Nns, Pos::Vb, Pos::Jj, Pos::Jjr, Pos::Jjs, Pos::Rb];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Nn => "NN",
            Pos::Nns => "NNS",
            Pos::Vb => "VB",
            Pos::Jj => "JJ",
            Pos::Jjr => "JJR",
            Pos::Jjs => "JJS",
            Pos::Rb => "RB",
        }
    }

    pub fn parse(s: &str) -> Option<Pos> {
        Pos::ALL.into_iter().find(|p| p.as_str() == s)
    }
}

const CLOSED_CLASS: &[&str] = &[
    "i", "me", "my", "mine", "you", "your", "yours", "he", "him", "his", "she", "her", "hers",
    "it", "its", "we", "us", "our", "ours", "they", "them", "their", "theirs", "this", "that",
    "these", "those", "the", "a", "an", "and", "or", "but", "nor", "so", "yet", "if", "than",
    "then", "because", "while", "who", "whom", "whose", "which", "what", "where", "when", "why",
    "how", "not", "no", "yes", "is", "are", "was", "were", "am", "be", "been", "being", "has",
    "have", "had", "do", "does", "did", "will", "would", "shall", "should", "can", "could",
    "may", "might", "must", "there", "here", "some", "any", "all", "each", "every", "both",
    "either", "neither", "many", "much", "few", "more", "most", "less", "least", "very", "too",
    "also", "only", "just", "as", "of", "with", "at", "from", "into", "during", "including",
    "until", "against", "among", "throughout", "despite", "towards", "upon", "concerning", "to",
    "in", "for", "on", "by", "about", "like", "through", "over", "before", "between", "after",
    "since", "without", "under", "within", "along", "following", "across", "behind", "beyond",
    "plus", "except", "up", "out", "around", "down", "off", "above", "near", "always", "never",
    "early", "only", "family", "reply", "supply", "apply", "fly", "july", "italy", "ally",
];

const ADJECTIVE_SUFFIXES: &[&str] = &[
    "ous", "ful", "ive", "able", "ible", "al", "ic", "less", "ish", "ant", "ent", "ary",
];

/// Plausible coarse tags for `word`, guessed from closed-class lists, the
/// verb lexicon and suffix heuristics. Approximate by construction.
pub fn guess_pos(word: &str, lexicon: &Lexicon) -> Vec<Pos> {
    if word.chars().count() < 2 || !word.chars().all(|c| c.is_ascii_alphabetic()) {
        return Vec::new();
    }
    let lower = word.to_lowercase();
    if CLOSED_CLASS.contains(&lower.as_str()) {
        return Vec::new();
    }
    let readings = lexicon.verb_readings(&lower);
    let mut out = Vec::new();
    if lower.len() > 4 && lower.ends_with("ly") {
        out.push(Pos::Rb);
        return out;
    }
    if lower.len() > 5 && lower.ends_with("est") {
        out.push(Pos::Jjs);
    } else if lower.len() > 4 && lower.ends_with("er") && readings.is_empty() {
        out.push(Pos::Jjr);
    }
    if ADJECTIVE_SUFFIXES.iter().any(|s| lower.len() > s.len() + 2 && lower.ends_with(s)) {
        out.push(Pos::Jj);
    }
    // A third-person -s form doubles as a plural noun often enough to keep.
    let inflected_verb = readings
        .iter()
        .any(|(_, f)| !matches!(f, VerbForm::Vb | VerbForm::Vbz));
    if readings.iter().any(|(_, f)| *f == VerbForm::Vb) {
        out.push(Pos::Vb);
    }
    let looks_plural = lexicon.irregular_singular(&lower).is_some()
        || (lower.ends_with('s')
            && !lower.ends_with("ss")
            && !lower.ends_with("us")
            && !lower.ends_with("is"));
    if looks_plural && !inflected_verb {
        out.push(Pos::Nns);
    } else if !inflected_verb && !out.contains(&Pos::Rb) {
        out.push(Pos::Nn);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_matching() {
        assert_eq!(match_case("Go", "went"), "Went");
        assert_eq!(match_case("GO", "went"), "WENT");
        assert_eq!(match_case("go", "went"), "went");
        assert_eq!(match_case("I", "me"), "Me");
        assert_eq!(capitalize("hELLO"), "Hello");
    }

    #[test]
    fn plural_rules_and_irregulars() {
        let lex = Lexicon::bundled();
        for (sg, pl) in [
            ("book", "books"),
            ("box", "boxes"),
            ("church", "churches"),
            ("city", "cities"),
            ("day", "days"),
            ("child", "children"),
            ("house", "houses"),
            ("Dog", "Dogs"),
        ] {
            assert_eq!(pluralize(sg, lex), pl);
            assert_eq!(singularize(pl, lex).as_deref(), Some(sg), "{pl}");
        }
        assert_eq!(singularize("glass", lex), None);
    }

    #[test]
    fn pos_guesses() {
        let lex = Lexicon::bundled();
        assert!(guess_pos("quickly", lex).contains(&Pos::Rb));
        assert!(guess_pos("dogs", lex).contains(&Pos::Nns));
        assert!(guess_pos("beautiful", lex).contains(&Pos::Jj));
        assert!(guess_pos("walk", lex).contains(&Pos::Vb));
        assert!(guess_pos("the", lex).is_empty());
        assert!(guess_pos(",", lex).is_empty());
    }
}
