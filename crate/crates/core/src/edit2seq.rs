//! Applying edit tags to a source sentence, one pass or iteratively.

use log::warn;
use thiserror::Error;

use crate::error::{Error, Result, TagApplicationError};
use crate::lexicon::Lexicon;
use crate::morph;
use crate::types::{EditSequence, EditTag, Sentence, Token, Transform};

/// Why a tag could not be applied to a token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct Inapplicable(pub String);

/// Output of a single tag application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    pub tokens: Vec<Token>,
    /// The following source token was merged into the output.
    pub consumed_next: bool,
}

impl Applied {
    fn tokens(tokens: Vec<Token>) -> Self {
        Applied {
            tokens,
            consumed_next: false,
        }
    }
}

fn token(text: String) -> Result<Token, Inapplicable> {
    Token::new(text).map_err(|e| Inapplicable(format!("produces an invalid token: {e}")))
}

/// Rewrites `word` with a character-level transform.
pub fn apply_transform(
    word: &str,
    transform: Transform,
    lexicon: &Lexicon,
) -> Result<Vec<Token>, Inapplicable> {
    let single = |s: String| token(s).map(|t| vec![t]);
    match transform {
        Transform::AgreementPlural => single(morph::pluralize(word, lexicon)),
        Transform::AgreementSingular => morph::singularize(word, lexicon)
            .ok_or_else(|| Inapplicable("not a plural form".into()))
            .and_then(single),
        Transform::CaseCapital => single(morph::capitalize(word)),
        Transform::CaseLower => single(word.to_lowercase()),
        Transform::CaseUpper => single(word.to_uppercase()),
        Transform::SplitHyphen => {
            let (head, tail) = word
                .split_once('-')
                .ok_or_else(|| Inapplicable("token has no hyphen".into()))?;
            Ok(vec![token(head.to_string())?, token(tail.to_string())?])
        }
        Transform::Verb(from, to) => lexicon
            .convert_verb(word, from, to)
            .ok_or_else(|| Inapplicable(format!("not a {} form in the lexicon", from.as_str())))
            .and_then(single),
    }
}

/// Applies one tag to `token`. `next` is the following source token, used
/// by merges.
pub fn apply_tag(
    token: &Token,
    next: Option<&Token>,
    tag: &EditTag,
    lexicon: &Lexicon,
) -> Result<Applied, Inapplicable> {
    let applied = match tag {
        EditTag::Keep | EditTag::Unknown => Applied::tokens(vec![token.clone()]),
        EditTag::Delete => Applied::tokens(Vec::new()),
        EditTag::Append(t) => Applied::tokens(vec![token.clone(), t.clone()]),
        EditTag::Replace(t) => Applied::tokens(vec![t.clone()]),
        EditTag::Merge(kind) => {
            let next = next.ok_or_else(|| Inapplicable("no following token to merge".into()))?;
            let joined = format!("{token}{}{next}", kind.joiner());
            Applied {
                tokens: vec![self::token(joined)?],
                consumed_next: true,
            }
        }
        EditTag::Transform(t) => Applied::tokens(apply_transform(token, *t, lexicon)?),
        EditTag::SuffixTransform(s) => {
            let out = s
                .apply(token)
                .ok_or_else(|| Inapplicable("token lacks the suffix".into()))?;
            Applied::tokens(vec![self::token(out)?])
        }
    };
    Ok(applied)
}

fn check_lengths(source: &Sentence, edits: &EditSequence) -> Result<()> {
    if source.len() != edits.len() {
        return Err(Error::LengthMismatch {
            expected: source.len(),
            found: edits.len(),
        });
    }
    Ok(())
}

fn application_error(index: usize, token: &Token, tag: &EditTag, e: Inapplicable) -> TagApplicationError {
    TagApplicationError {
        index,
        token: token.to_string(),
        tag: tag.to_string(),
        reason: e.0,
    }
}

/// Reconstructs the corrected sentence by applying `edits` left to right.
/// Tokens consumed by a preceding merge are skipped.
pub fn edit2seq(source: &Sentence, edits: &EditSequence, lexicon: &Lexicon) -> Result<Sentence> {
    check_lengths(source, edits)?;
    let mut out = Vec::with_capacity(source.len() + 2);
    let mut i = 0;
    while i < source.len() {
        let tag = &edits.tags()[i];
        let applied = apply_tag(&source[i], source.get(i + 1), tag, lexicon)
            .map_err(|e| application_error(i, &source[i], tag, e))?;
        out.extend(applied.tokens);
        i += if applied.consumed_next { 2 } else { 1 };
    }
    Ok(Sentence::new(out))
}

/// Like [`edit2seq`], but a tag that cannot be applied leaves its token
/// unchanged; the failures are returned alongside the output.
pub fn edit2seq_lenient(
    source: &Sentence,
    edits: &EditSequence,
    lexicon: &Lexicon,
) -> Result<(Sentence, Vec<TagApplicationError>)> {
    check_lengths(source, edits)?;
    let mut out = Vec::with_capacity(source.len() + 2);
    let mut failures = Vec::new();
    let mut i = 0;
    while i < source.len() {
        let tag = &edits.tags()[i];
        match apply_tag(&source[i], source.get(i + 1), tag, lexicon) {
            Ok(applied) => {
                out.extend(applied.tokens);
                i += if applied.consumed_next { 2 } else { 1 };
            }
            Err(e) => {
                failures.push(application_error(i, &source[i], tag, e));
                out.push(source[i].clone());
                i += 1;
            }
        }
    }
    Ok((Sentence::new(out), failures))
}

pub const DEFAULT_MAX_ITERS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefineOptions {
    pub max_iters: usize,
    /// Abort on the first inapplicable tag instead of leaving the token
    /// unchanged.
    pub strict: bool,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            max_iters: DEFAULT_MAX_ITERS,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub sentence: Sentence,
    /// Number of predictor calls made.
    pub iterations: usize,
    /// A pass proposed no change before the iteration cap.
    pub converged: bool,
    /// Tags that were skipped in lenient mode.
    pub skipped: Vec<TagApplicationError>,
}

/// Error from a strict refinement, carrying the sentence reached so far.
#[derive(Debug, Error)]
#[error("refinement pass {iteration} failed on `{partial}`: {cause}")]
pub struct RefineError {
    pub iteration: usize,
    pub partial: Sentence,
    #[source]
    pub cause: Error,
}

/// Repeatedly predicts edits for the current sentence and applies them,
/// until a pass proposes no change or `max_iters` passes have run.
pub fn refine<F>(
    source: &Sentence,
    mut predictor: F,
    options: &RefineOptions,
    lexicon: &Lexicon,
) -> Result<Refinement, RefineError>
where
    F: FnMut(&Sentence) -> Result<EditSequence>,
{
    let mut current = source.clone();
    let mut skipped = Vec::new();
    if options.max_iters == 0 {
        return Err(RefineError {
            iteration: 0,
            partial: current,
            cause: Error::InvalidInput("max_iters must be at least 1".into()),
        });
    }
    if current.is_empty() {
        return Ok(Refinement {
            sentence: current,
            iterations: 0,
            converged: true,
            skipped,
        });
    }
    for iteration in 1..=options.max_iters {
        let fail = |partial: &Sentence, cause: Error| RefineError {
            iteration,
            partial: partial.clone(),
            cause,
        };
        let edits = predictor(&current).map_err(|e| fail(&current, e))?;
        if edits.is_noop() {
            check_lengths(&current, &edits).map_err(|e| fail(&current, e))?;
            return Ok(Refinement {
                sentence: current,
                iterations: iteration,
                converged: true,
                skipped,
            });
        }
        let next = if options.strict {
            edit2seq(&current, &edits, lexicon).map_err(|e| fail(&current, e))?
        } else {
            let (next, failures) =
                edit2seq_lenient(&current, &edits, lexicon).map_err(|e| fail(&current, e))?;
            for f in &failures {
                warn!("refine pass {iteration}: {f}");
            }
            skipped.extend(failures);
            next
        };
        if next == current {
            return Ok(Refinement {
                sentence: current,
                iterations: iteration,
                converged: true,
                skipped,
            });
        }
        current = next;
    }
    Ok(Refinement {
        sentence: current,
        iterations: options.max_iters,
        converged: false,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{tokenize, MergeKind, VerbForm};

    fn tag(s: &str) -> EditTag {
        s.parse().unwrap()
    }

    fn tok(s: &str) -> Token {
        Token::new(s).unwrap()
    }

    fn seq(s: &str) -> EditSequence {
        s.parse().unwrap()
    }

    #[test]
    fn single_tag_semantics() {
        let lex = Lexicon::bundled();
        let apply = |t: &str, next: Option<&str>, g: &str| {
            let next = next.map(tok);
            apply_tag(&tok(t), next.as_ref(), &tag(g), lex)
        };
        let words = |a: Applied| a.tokens.iter().map(|t| t.to_string()).collect::<Vec<_>>();
        assert_eq!(words(apply("go", None, "$TRANSFORM_VERB_VB_VBD").unwrap()), ["went"]);
        assert_eq!(words(apply("anything", None, "$UNKNOWN").unwrap()), ["anything"]);
        let merged = apply("well", Some("known"), "$MERGE_HYPHEN").unwrap();
        assert!(merged.consumed_next);
        assert_eq!(words(merged), ["well-known"]);
        assert_eq!(words(apply("over", Some("all"), "$MERGE_SPACE").unwrap()), ["overall"]);
        assert_eq!(words(apply("a", None, "$APPEND_b").unwrap()), ["a", "b"]);
        assert_eq!(words(apply("a", None, "$REPLACE_b").unwrap()), ["b"]);
        assert!(words(apply("a", None, "$DELETE").unwrap()).is_empty());
        assert_eq!(words(apply("well-known", None, "$TRANSFORM_SPLIT_HYPHEN").unwrap()), ["well", "known"]);
        assert_eq!(words(apply("paris", None, "$TRANSFORM_CASE_CAPITAL").unwrap()), ["Paris"]);
        assert_eq!(words(apply("usa", None, "$TRANSFORM_CASE_UPPER").unwrap()), ["USA"]);
        assert_eq!(words(apply("The", None, "$TRANSFORM_CASE_LOWER").unwrap()), ["the"]);
        assert_eq!(words(apply("book", None, "$TRANSFORM_AGREEMENT_PLURAL").unwrap()), ["books"]);
        assert_eq!(words(apply("easy", None, "$SUFFIXTRANSFORM_Y_TO_ILY").unwrap()), ["easily"]);
    }

    #[test]
    fn inapplicable_tags() {
        let lex = Lexicon::bundled();
        assert!(apply_tag(&tok("end"), None, &tag("$MERGE_SPACE"), lex).is_err());
        assert!(apply_tag(&tok("xyzzy"), None, &tag("$TRANSFORM_VERB_VB_VBD"), lex).is_err());
        assert!(apply_tag(&tok("kind"), None, &tag("$SUFFIXTRANSFORM_REMOVE_ness"), lex).is_err());
        assert!(apply_tag(&tok("ly"), None, &tag("$SUFFIXTRANSFORM_REMOVE_ly"), lex).is_err());
        assert!(apply_tag(&tok("-x"), None, &tag("$TRANSFORM_SPLIT_HYPHEN"), lex).is_err());
    }

    #[test]
    fn edit2seq_examples() {
        let lex = Lexicon::bundled();
        let x = tokenize("He go to school");
        assert_eq!(edit2seq(&x, &EditSequence::all_keep(4), lex).unwrap(), x);
        assert_eq!(
            edit2seq(&tokenize("a b"), &seq("$DELETE $KEEP"), lex).unwrap(),
            tokenize("b")
        );
        assert_eq!(
            edit2seq(&x, &seq("$KEEP $TRANSFORM_VERB_VB_VBD $KEEP $KEEP"), lex).unwrap(),
            tokenize("He went to school")
        );
        assert_eq!(
            edit2seq(&tokenize("over all fine"), &seq("$MERGE_SPACE $KEEP $KEEP"), lex).unwrap(),
            tokenize("overall fine")
        );
    }

    #[test]
    fn edit2seq_errors_name_index_and_tag() {
        let lex = Lexicon::bundled();
        assert!(matches!(
            edit2seq(&tokenize("a b"), &seq("$KEEP"), lex),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        ));
        match edit2seq(&tokenize("a b"), &seq("$KEEP $MERGE_SPACE"), lex) {
            Err(Error::TagApplication(e)) => {
                assert_eq!(e.index, 1);
                assert_eq!(e.tag, "$MERGE_SPACE");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lenient_application_keeps_token() {
        let lex = Lexicon::bundled();
        let (out, failures) =
            edit2seq_lenient(&tokenize("a b"), &seq("$DELETE $MERGE_SPACE"), lex).unwrap();
        assert_eq!(out, tokenize("b"));
        assert_eq!(failures.len(), 1);
    }

    #[test]
    fn refine_fixpoint_after_one_iteration() {
        let lex = Lexicon::bundled();
        let x = tokenize("a b c");
        let r = refine(&x, |s| Ok(EditSequence::all_keep(s.len())), &RefineOptions::default(), lex)
            .unwrap();
        assert_eq!(r.sentence, x);
        assert_eq!(r.iterations, 1);
        assert!(r.converged);
    }

    #[test]
    fn refine_strict_reports_partial_result() {
        let lex = Lexicon::bundled();
        let x = tokenize("go home");
        let mut calls = 0;
        let predictor = |s: &Sentence| {
            calls += 1;
            Ok(if calls == 1 {
                EditSequence::new(vec![
                    EditTag::Transform(Transform::Verb(VerbForm::Vb, VerbForm::Vbd)),
                    EditTag::Keep,
                ])
            } else {
                let mut tags = vec![EditTag::Keep; s.len()];
                tags[s.len() - 1] = EditTag::Merge(MergeKind::Space);
                EditSequence::new(tags)
            })
        };
        let opts = RefineOptions {
            max_iters: 4,
            strict: true,
        };
        let err = refine(&x, predictor, &opts, lex).unwrap_err();
        assert_eq!(err.iteration, 2);
        assert_eq!(err.partial, tokenize("went home"));
    }

    #[test]
    fn refine_rejects_zero_iterations() {
        let lex = Lexicon::bundled();
        let opts = RefineOptions {
            max_iters: 0,
            strict: false,
        };
        assert!(refine(&tokenize("a"), |s| Ok(EditSequence::all_keep(s.len())), &opts, lex).is_err());
    }
}
