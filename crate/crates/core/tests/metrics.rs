use edittag::eval::*;
use edittag::*;
use proptest::prelude::*;

fn words() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(&["a", "b", "c", "d", "the", "cat"][..]), 1..10)
}

fn sent(w: &[&str]) -> Sentence {
    Sentence::from_words(w.iter().copied()).unwrap()
}

proptest! {
    #[test]
    fn f_half_bounds(matched in 0usize..20, extra_h in 0usize..20, extra_r in 0usize..20) {
        let c = SpanCounts { hypothesis: matched + extra_h, reference: matched + extra_r, matched };
        let p = c.prf();
        prop_assert!(p.f_half <= p.precision.max(p.recall) + 1e-12);
        if p.precision > p.recall {
            prop_assert!(p.f_half > f_beta(p.precision, p.recall, 1.0));
        }
    }

    #[test]
    fn same_edits_score_perfectly(src in words(), tgt in words()) {
        let (x, y) = (sent(&src), sent(&tgt));
        let e = extract_spans(&x, &y);
        prop_assume!(!e.is_empty());
        let p = f_half(&e, &e);
        prop_assert_eq!((p.precision, p.recall, p.f_half), (1.0, 1.0, 1.0));
    }

    #[test]
    fn spans_rebuild_the_target(src in words(), tgt in words()) {
        let (x, y) = (sent(&src), sent(&tgt));
        let mut out: Vec<String> = Vec::new();
        let mut i = 0;
        for e in extract_spans(&x, &y) {
            out.extend(x[i..e.start].iter().map(|t| t.to_string()));
            out.extend(e.replacement.split(' ').filter(|w| !w.is_empty()).map(String::from));
            i = e.end;
        }
        out.extend(x[i..].iter().map(|t| t.to_string()));
        prop_assert_eq!(out, y.words().map(String::from).collect::<Vec<_>>());
    }

    #[test]
    fn gleu_ignores_corpus_order(rows in prop::collection::vec((words(), words(), words()), 1..6)) {
        let cols = |k: usize| -> Vec<Sentence> {
            rows.iter().map(|r| sent(match k { 0 => &r.0, 1 => &r.1, _ => &r.2 })).collect()
        };
        let (s, h, r) = (cols(0), cols(1), cols(2));
        let refs: Vec<Vec<Sentence>> = r.iter().map(|x| vec![x.clone()]).collect();
        let a = gleu(&s, &h, &refs, 4, 0).unwrap();
        let rev = |v: &[Sentence]| v.iter().rev().cloned().collect::<Vec<_>>();
        let refs_rev: Vec<Vec<Sentence>> = refs.iter().rev().cloned().collect();
        let b = gleu(&rev(&s), &rev(&h), &refs_rev, 4, 0).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn unchanged_correct_text_scores_one(src in words(), hyp in words()) {
        let s = vec![sent(&src)];
        prop_assume!(s[0].len() >= 4);
        let refs = vec![s.clone()];
        prop_assert_eq!(gleu(&s, &s, &refs, 4, 0).unwrap(), 1.0);
        let g = gleu(&s, &[sent(&hyp)], &refs, 4, 0).unwrap();
        prop_assert!((0.0..=1.0).contains(&g));
    }
}

// Drifting one token at a time away from the reference never helps.
#[test]
fn gleu_falls_as_hypothesis_diverges() {
    let src = vec![tokenize("he go to the school every days by bus")];
    let reference = tokenize("he goes to school every day by bus");
    let refs = vec![vec![reference.clone()]];
    let mut hyp: Vec<String> = reference.words().map(String::from).collect();
    let mut last = gleu(&src, &[reference.clone()], &refs, 4, 0).unwrap();
    for i in 0..hyp.len() {
        hyp[i] = format!("zz{i}");
        let score = gleu(&src, &[Sentence::from_words(hyp.iter().map(String::as_str)).unwrap()], &refs, 4, 0).unwrap();
        assert!(score <= last, "{score} > {last}");
        last = score;
    }
}

#[test]
fn pooled_counts_use_corpus_totals() {
    let src = vec![tokenize("a b c"), tokenize("d e f")];
    let hyp = vec![tokenize("a x c"), tokenize("d e f")];
    let refs = vec![vec![tokenize("a x c")], vec![tokenize("d y f")]];
    let p = corpus_f_half(&src, &hyp, &refs).unwrap();
    assert_eq!((p.precision, p.recall), (1.0, 0.5));
    let same = corpus_f_half(&src, &src, &[vec![src[0].clone()], vec![src[1].clone()]]).unwrap();
    assert_eq!(same.f_half, 1.0);
}
