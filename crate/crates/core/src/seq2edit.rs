//! Token alignment and conversion of (source, target) pairs to edit tags.

use crate::edit2seq::apply_tag;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::types::{
    AlignedPair, EditSequence, EditTag, MergeKind, Sentence, Token, Transform, SUFFIX_TRANSFORMS,
    TRANSFORMS,
};

/// Cost unit of one insertion or deletion. Costs are integers so that
/// tie-breaking is exact.
pub const INDEL_COST: u32 = 1000;

/// Character overlap 2·LCS/(|a|+|b|) at or above which a substitution is
/// discounted.
pub const SIMILARITY_THRESHOLD: f64 = 0.5;

/// One step of a token alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignOp {
    Match { src: usize, tgt: usize },
    Substitute { src: usize, tgt: usize },
    Delete { src: usize },
    Insert { tgt: usize },
}

fn lcs_len(a: &[char], b: &[char]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &ca in a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Case-insensitive character overlap in [0, 1].
pub fn char_overlap(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.to_lowercase().chars().collect();
    let b: Vec<char> = b.to_lowercase().chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    2.0 * lcs_len(&a, &b) as f64 / (a.len() + b.len()) as f64
}

/// Cost of aligning `a` with `b`: 0 when equal, discounted below
/// [`INDEL_COST`] for similar tokens, [`INDEL_COST`] otherwise.
pub fn substitution_cost(a: &str, b: &str) -> u32 {
    if a == b {
        return 0;
    }
    let overlap = char_overlap(a, b);
    if overlap >= SIMILARITY_THRESHOLD {
        INDEL_COST - (500.0 * overlap).round() as u32
    } else {
        INDEL_COST
    }
}

/// Minimum-cost monotone alignment. Ties prefer substitution, then
/// deletion, then insertion, scanning from the end.
pub fn alignment_ops(source: &[Token], target: &[Token]) -> Vec<AlignOp> {
    let (n, m) = (source.len(), target.len());
    let sub: Vec<Vec<u32>> = source
        .iter()
        .map(|s| target.iter().map(|t| substitution_cost(s, t)).collect())
        .collect();
    let mut cost = vec![vec![0u32; m + 1]; n + 1];
    for i in 1..=n {
        cost[i][0] = i as u32 * INDEL_COST;
    }
    for j in 1..=m {
        cost[0][j] = j as u32 * INDEL_COST;
    }
    for i in 1..=n {
        for j in 1..=m {
            cost[i][j] = (cost[i - 1][j - 1] + sub[i - 1][j - 1])
                .min(cost[i - 1][j] + INDEL_COST)
                .min(cost[i][j - 1] + INDEL_COST);
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && cost[i][j] == cost[i - 1][j - 1] + sub[i - 1][j - 1] {
            ops.push(if sub[i - 1][j - 1] == 0 {
                AlignOp::Match { src: i - 1, tgt: j - 1 }
            } else {
                AlignOp::Substitute { src: i - 1, tgt: j - 1 }
            });
            i -= 1;
            j -= 1;
        } else if i > 0 && cost[i][j] == cost[i - 1][j] + INDEL_COST {
            ops.push(AlignOp::Delete { src: i - 1 });
            i -= 1;
        } else {
            ops.push(AlignOp::Insert { tgt: j - 1 });
            j -= 1;
        }
    }
    ops.reverse();
    ops
}

/// Total cost of an op sequence under the alignment cost model.
pub fn alignment_cost(source: &[Token], target: &[Token], ops: &[AlignOp]) -> u32 {
    ops.iter()
        .map(|op| match *op {
            AlignOp::Match { src, tgt } | AlignOp::Substitute { src, tgt } => {
                substitution_cost(&source[src], &target[tgt])
            }
            AlignOp::Delete { .. } | AlignOp::Insert { .. } => INDEL_COST,
        })
        .sum()
}

/// Maps every source token to a contiguous target span. Inserted target
/// tokens join the span of the preceding source token.
pub fn align(source: &Sentence, target: &Sentence) -> Result<AlignedPair> {
    if source.is_empty() {
        return Err(Error::EmptySource);
    }
    let mut spans = vec![0..0; source.len()];
    let mut leading = 0;
    let mut last = None;
    let mut cursor = 0;
    for op in alignment_ops(source, target) {
        match op {
            AlignOp::Match { src, tgt } | AlignOp::Substitute { src, tgt } => {
                spans[src] = tgt..tgt + 1;
                last = Some(src);
                cursor = tgt + 1;
            }
            AlignOp::Delete { src } => {
                spans[src] = cursor..cursor;
                last = Some(src);
            }
            AlignOp::Insert { tgt } => {
                match last {
                    Some(s) => spans[s].end = tgt + 1,
                    None => leading += 1,
                }
                cursor = tgt + 1;
            }
        }
    }
    spans[0].start = 0;
    Ok(AlignedPair {
        source: source.clone(),
        target: target.clone(),
        spans,
        leading_insertions: leading,
    })
}

/// Converter from aligned pairs to edit tags over a given tagset.
#[derive(Debug, Clone, Copy)]
pub struct Seq2Edit<'a> {
    pub lexicon: &'a Lexicon,
    pub tagset: &'a crate::types::TagSet,
    /// Whether the transform and suffix-transform families may be emitted.
    pub char_transforms: bool,
}

impl<'a> Seq2Edit<'a> {
    pub fn new(lexicon: &'a Lexicon, tagset: &'a crate::types::TagSet) -> Self {
        Seq2Edit {
            lexicon,
            tagset,
            char_transforms: true,
        }
    }

    pub fn without_char_transforms(mut self) -> Self {
        self.char_transforms = false;
        self
    }

    fn produces(&self, src: &Token, tag: &EditTag, expected: &[Token]) -> bool {
        self.tagset.contains(tag)
            && apply_tag(src, None, tag, self.lexicon).is_ok_and(|a| a.tokens == expected)
    }

    fn classify_single(&self, src: &Token, tgt: &Token) -> EditTag {
        let expected = std::slice::from_ref(tgt);
        if self.char_transforms {
            let transforms = [
                Transform::CaseCapital,
                Transform::CaseLower,
                Transform::CaseUpper,
                Transform::AgreementPlural,
                Transform::AgreementSingular,
            ]
            .into_iter()
            .chain(TRANSFORMS.into_iter().filter(|t| matches!(t, Transform::Verb(..))))
            .map(EditTag::Transform)
            .chain(SUFFIX_TRANSFORMS.into_iter().map(EditTag::SuffixTransform));
            for tag in transforms {
                if self.produces(src, &tag, expected) {
                    return tag;
                }
            }
        }
        let replace = EditTag::Replace(tgt.clone());
        if self.tagset.contains(&replace) {
            replace
        } else {
            EditTag::Unknown
        }
    }

    /// Tag for one source token given its aligned target span. When the
    /// span holds a replacement plus insertions, only the replacement is
    /// encoded and the insertions are left for a later pass.
    pub fn classify(&self, src: &Token, span: &[Token]) -> EditTag {
        match span {
            [] => return EditTag::Delete,
            [t] if t == src => return EditTag::Keep,
            [t] => return self.classify_single(src, t),
            _ => {}
        }
        let split = EditTag::Transform(Transform::SplitHyphen);
        if self.char_transforms && self.produces(src, &split, &span[..2]) {
            return split;
        }
        if &span[0] == src {
            let append = EditTag::Append(span[1].clone());
            return if self.tagset.contains(&append) {
                append
            } else {
                EditTag::Unknown
            };
        }
        self.classify_single(src, &span[0])
    }

    fn merge_kind(&self, a: &Token, b: &Token, joined: &Token) -> Option<MergeKind> {
        [MergeKind::Space, MergeKind::Hyphen].into_iter().find(|&k| {
            self.tagset.contains(&EditTag::Merge(k))
                && joined.len() == a.len() + k.joiner().len() + b.len()
                && joined.starts_with(a.as_str())
                && joined.ends_with(b.as_str())
                && joined[a.len()..joined.len() - b.len()] == *k.joiner()
        })
    }

    /// Edit tags for an aligned pair, one per source token.
    pub fn tags_for(&self, pair: &AlignedPair) -> EditSequence {
        let src = &pair.source;
        let n = src.len();
        let mut tags: Vec<Option<EditTag>> = vec![None; n];
        let mut i = 0;
        while i + 1 < n {
            let combined = &pair.target[pair.spans[i].start..pair.spans[i + 1].end];
            let merge = combined
                .first()
                .filter(|_| !(i == 0 && pair.leading_insertions > 0))
                .and_then(|first| self.merge_kind(&src[i], &src[i + 1], first));
            if let Some(kind) = merge {
                tags[i] = Some(EditTag::Merge(kind));
                tags[i + 1] = Some(if combined.len() == 1 {
                    EditTag::Keep
                } else {
                    self.classify(&src[i + 1], &combined[1..])
                });
                i += 2;
            } else {
                i += 1;
            }
        }
        if pair.leading_insertions > 0 && tags[0].is_none() {
            tags[0] = Some(EditTag::Unknown);
        }
        tags.into_iter()
            .enumerate()
            .map(|(i, t)| t.unwrap_or_else(|| self.classify(&src[i], pair.span_tokens(i))))
            .collect()
    }

    pub fn convert(&self, source: &Sentence, target: &Sentence) -> Result<EditSequence> {
        Ok(self.tags_for(&align(source, target)?))
    }
}

/// Tag for `src_token` aligned to `tgt_span`, by fixed priority over the
/// tag families. Total: falls back to `$UNKNOWN`.
pub fn classify_edit(
    src_token: &Token,
    tgt_span: &[Token],
    lexicon: &Lexicon,
    tagset: &crate::types::TagSet,
) -> EditTag {
    Seq2Edit::new(lexicon, tagset).classify(src_token, tgt_span)
}

/// Edit sequence turning `source` into `target`, same length as `source`.
pub fn seq2edit(
    source: &Sentence,
    target: &Sentence,
    lexicon: &Lexicon,
    tagset: &crate::types::TagSet,
) -> Result<EditSequence> {
    Seq2Edit::new(lexicon, tagset).convert(source, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edit2seq::edit2seq;
    use crate::types::{tokenize, TagSet};

    fn tok(s: &str) -> Token {
        Token::new(s).unwrap()
    }

    fn toks(s: &str) -> Vec<Token> {
        tokenize(s).into_tokens()
    }

    /// Minimal alignment cost by exhaustive recursion over monotone scripts.
    fn brute_cost(a: &[Token], b: &[Token]) -> u32 {
        match (a, b) {
            ([], _) => b.len() as u32 * INDEL_COST,
            (_, []) => a.len() as u32 * INDEL_COST,
            _ => (substitution_cost(&a[0], &b[0]) + brute_cost(&a[1..], &b[1..]))
                .min(INDEL_COST + brute_cost(&a[1..], b))
                .min(INDEL_COST + brute_cost(a, &b[1..])),
        }
    }

    #[test]
    fn insertion_attaches_left() {
        let pair = align(&tokenize("a c"), &tokenize("a b c")).unwrap();
        assert_eq!(pair.spans, vec![0..2, 2..3]);
        assert!(pair.is_consistent());
        let ops = alignment_ops(&toks("a c"), &toks("a b c"));
        assert_eq!(
            alignment_cost(&toks("a c"), &toks("a b c"), &ops),
            brute_cost(&toks("a c"), &toks("a b c"))
        );
    }

    #[test]
    fn forced_substitution_and_identity() {
        let pair = align(&tokenize("He go"), &tokenize("He went")).unwrap();
        assert_eq!(pair.spans, vec![0..1, 1..2]);
        let pair = align(&tokenize("He go"), &tokenize("He go")).unwrap();
        assert_eq!(pair.spans, vec![0..1, 1..2]);
        assert!(align(&tokenize(""), &tokenize("a")).is_err());
    }

    #[test]
    fn leading_insertion_joins_first_span() {
        let pair = align(&tokenize("cat sat"), &tokenize("the cat sat")).unwrap();
        assert_eq!(pair.leading_insertions, 1);
        assert_eq!(pair.spans, vec![0..2, 2..3]);
        assert!(pair.is_consistent());
    }

    #[test]
    fn alignment_matches_exhaustive_minimum() {
        let words = ["a", "b", "ab", "ba", "cat", "cats", "dog"];
        let mut state = 7u64;
        let mut next = |k: usize| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % k
        };
        for _ in 0..300 {
            let a: Vec<Token> = (0..1 + next(5)).map(|_| tok(words[next(words.len())])).collect();
            let b: Vec<Token> = (0..next(6)).map(|_| tok(words[next(words.len())])).collect();
            let ops = alignment_ops(&a, &b);
            assert_eq!(alignment_cost(&a, &b, &ops), brute_cost(&a, &b), "{a:?} {b:?}");
            let pair = align(&Sentence::new(a), &Sentence::new(b)).unwrap();
            assert!(pair.is_consistent());
        }
    }

    #[test]
    fn classification_priority() {
        let lex = Lexicon::bundled();
        let set = TagSet::default_tagset();
        let c = |s: &str, span: &str| classify_edit(&tok(s), &toks(span), lex, set).to_string();
        assert_eq!(c("go", "went"), "$TRANSFORM_VERB_VB_VBD");
        assert_eq!(c("book", "books"), "$TRANSFORM_AGREEMENT_PLURAL");
        assert_eq!(c("x", "x"), "$KEEP");
        assert_eq!(c("x", ""), "$DELETE");
        assert_eq!(c("easy", "easily"), "$SUFFIXTRANSFORM_Y_TO_ILY");
        assert_eq!(c("the", "The"), "$TRANSFORM_CASE_CAPITAL");
        assert_eq!(c("well-known", "well known"), "$TRANSFORM_SPLIT_HYPHEN");
        assert_eq!(c("go", "go to"), "$APPEND_to");
        assert_eq!(c("go", "go qwzx"), "$UNKNOWN");
        assert_eq!(c("in", "at"), "$REPLACE_at");
    }

    #[test]
    fn classification_verifies_by_application() {
        let lex = Lexicon::bundled();
        let set = TagSet::default_tagset();
        for (s, t) in [("go", "went"), ("book", "books"), ("easy", "easily"), ("in", "at")] {
            let tag = classify_edit(&tok(s), &toks(t), lex, set);
            let out = apply_tag(&tok(s), None, &tag, lex).unwrap();
            assert_eq!(out.tokens, toks(t));
        }
    }

    #[test]
    fn seq2edit_examples() {
        let lex = Lexicon::bundled();
        let set = TagSet::default_tagset();
        let run = |a: &str, b: &str| {
            seq2edit(&tokenize(a), &tokenize(b), lex, set).unwrap().to_string()
        };
        assert_eq!(
            run("He go to school", "He went to school"),
            "$KEEP $TRANSFORM_VERB_VB_VBD $KEEP $KEEP"
        );
        assert_eq!(run("a b c", "a b c"), "$KEEP $KEEP $KEEP");
        assert_eq!(run("over all fine", "overall fine"), "$MERGE_SPACE $KEEP $KEEP");
        assert_eq!(run("well known fact", "well-known fact"), "$MERGE_HYPHEN $KEEP $KEEP");
        assert_eq!(run("a b", ""), "$DELETE $DELETE");
    }

    #[test]
    fn roundtrip_on_single_edits() {
        let lex = Lexicon::bundled();
        let set = TagSet::default_tagset();
        for (a, b) in [
            ("He go to school", "He went to school"),
            ("I live at Rome", "I live in Rome"),
            ("the the cat", "the cat"),
            ("She walk home", "She walks home"),
            ("over all fine", "overall fine"),
            ("cat sat", "The cat sat"),
        ] {
            let (x, y) = (tokenize(a), tokenize(b));
            let e = seq2edit(&x, &y, lex, set).unwrap();
            assert_eq!(e.len(), x.len());
            if !e.iter().any(|t| *t == EditTag::Unknown) {
                assert_eq!(edit2seq(&x, &e, lex).unwrap(), y, "{a} -> {b}: {e}");
            }
        }
    }

    #[test]
    fn disabling_char_transforms_falls_back() {
        let lex = Lexicon::bundled();
        let set = TagSet::default_tagset();
        let plain = Seq2Edit::new(lex, set).without_char_transforms();
        assert_eq!(plain.classify(&tok("go"), &toks("went")).to_string(), "$REPLACE_went");
        assert_eq!(plain.classify(&tok("angry"), &toks("angrily")), EditTag::Unknown);
    }
}
