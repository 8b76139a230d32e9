use edittag::edit2seq::edit2seq;
use edittag::noiser::{EditDictionary, NoiseProfile, Noiser};
use edittag::*;
use proptest::prelude::*;

const VOCAB: &[&str] = &[
    "the", "The", "a", "go", "went", "goes", "book", "books", "well-known", "well", "known", "in",
    "at", "to", "easy", "easily", "cat", "cats", "some", "thing", "something", "happy", ".", ",",
];

fn words(min: usize) -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(VOCAB), min..12)
}

fn sent(w: &[&str]) -> Sentence {
    Sentence::from_words(w.iter().copied()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn edits_match_source_length(src in words(1), tgt in words(0)) {
        let (x, y) = (sent(&src), sent(&tgt));
        let e = seq2edit(&x, &y, Lexicon::bundled(), TagSet::default_tagset()).unwrap();
        prop_assert_eq!(e.len(), x.len());
        let pair = align(&x, &y).unwrap();
        prop_assert!(pair.is_consistent());
    }
}

proptest! {
    #[test]
    fn all_keep_is_identity(src in words(0)) {
        let x = sent(&src);
        prop_assert_eq!(edit2seq(&x, &EditSequence::all_keep(x.len()), Lexicon::bundled()).unwrap(), x);
    }

    #[test]
    fn classification_is_pure(src in prop::sample::select(VOCAB), span in words(0)) {
        let (lex, set) = (Lexicon::bundled(), TagSet::default_tagset());
        let t = Token::new(src).unwrap();
        let span: Vec<Token> = sent(&span).to_vec();
        prop_assert_eq!(classify_edit(&t, &span, lex, set), classify_edit(&t, &span, lex, set));
    }

    #[test]
    fn char_transforms_never_raise_unknowns(src in words(1), tgt in words(0)) {
        let (x, y) = (sent(&src), sent(&tgt));
        let (lex, set) = (Lexicon::bundled(), TagSet::default_tagset());
        let count = |c: Seq2Edit| c.convert(&x, &y).unwrap().iter().filter(|t| **t == EditTag::Unknown).count();
        prop_assert!(count(Seq2Edit::new(lex, set)) <= count(Seq2Edit::new(lex, set).without_char_transforms()));
    }

    #[test]
    fn extra_refine_passes_do_not_change_a_fixpoint(src in words(1), tgt in words(1)) {
        let (x, y) = (sent(&src), sent(&tgt));
        let lex = Lexicon::bundled();
        let oracle = |s: &Sentence| seq2edit(s, &y, lex, TagSet::default_tagset());
        let opts = |max_iters| RefineOptions { max_iters, strict: false };
        let short = refine(&x, oracle, &opts(8), lex).unwrap();
        if short.converged {
            let long = refine(&x, oracle, &opts(16), lex).unwrap();
            prop_assert_eq!(long.sentence, short.sentence);
        }
    }
}

// Pairs from the noiser with several edits per sentence reach the clean
// target within eight passes unless a pass gets stuck on an edit outside
// the tagset.
#[test]
fn iterative_roundtrip_on_noised_pairs() {
    let (lex, set) = (Lexicon::bundled(), TagSet::default_tagset());
    let mut profile = NoiseProfile::bundled();
    profile.expected_errors = 2.5;
    let dict = EditDictionary::new();
    let noiser = Noiser::new(&profile, &dict, lex, PatternInventories::bundled(), set).unwrap();
    let mut checked = 0;
    for (i, clean) in sample_corpus::sample_sentences(500, 7).iter().enumerate() {
        let noisy = noiser.corrupt(clean, i as u64).sentence;
        let oracle = |s: &Sentence| seq2edit(s, clean, lex, set);
        let out = refine(&noisy, oracle, &RefineOptions { max_iters: 8, strict: true }, lex).unwrap();
        if &out.sentence == clean {
            checked += 1;
        } else {
            let rest = seq2edit(&out.sentence, clean, lex, set).unwrap();
            assert!(rest.iter().any(|t| *t == EditTag::Unknown), "{noisy} -> {}", out.sentence);
        }
    }
    assert!(checked >= 450, "{checked}");
}

#[test]
fn multiple_insertions_need_two_editing_passes() {
    let lex = Lexicon::bundled();
    let x = tokenize("I went school");
    let y = tokenize("I went to the school");
    let oracle = |s: &Sentence| seq2edit(s, &y, lex, TagSet::default_tagset());
    let out = refine(&x, oracle, &RefineOptions::default(), lex).unwrap();
    assert_eq!(out.sentence, y);
    assert!(out.converged);
    assert_eq!(out.iterations, 3);
    let one = refine(&x, oracle, &RefineOptions { max_iters: 1, strict: false }, lex).unwrap();
    assert_eq!(one.sentence, tokenize("I went to school"));
    assert!(!one.converged);
}
