use proptest::prelude::*;
use twopath::corpus::Document;
use twopath::lexicon::{learn_terms, match_terms, seed_lexicon, LearnThresholds};
use twopath::Corpus;

fn words() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(
        prop::sample::select(vec!["faggot", "faggots", "coon", "fine", "day", "days", "chinking", "twat", "a", "<url>", "mob", "mobs"]),
        0..10,
    )
}

fn corpus_of(docs: &[Vec<&str>]) -> Corpus {
    Corpus::from_documents(docs.iter().enumerate().map(|(i, w)| Document::new(format!("d{i}"), None, w.join(" "))))
}

/// Thresholds that admit every candidate, so `hateful_count` exposes the raw
/// pool count of each non-seed token.
fn everything() -> LearnThresholds {
    LearnThresholds { min_count: 1, ratio_threshold: 1e-12 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn matches_are_doc_tokens_and_lexicon_terms(w in words()) {
        let lex = seed_lexicon();
        let doc = Document::new("x", None, w.join(" "));
        for term in match_terms(&doc, &lex) {
            prop_assert!(doc.tokens.iter().any(|t| t == term));
            prop_assert!(lex.contains(term));
        }
        prop_assert_eq!(match_terms(&doc, &lex).is_empty(), !twopath::lexicon::is_match(&doc, &lex));
    }

    #[test]
    fn pool_counts_grow_with_the_pool(docs in prop::collection::vec(words(), 2..25), split in 1usize..25) {
        let corpus = corpus_of(&docs);
        prop_assume!(!corpus.is_empty());
        let all: Vec<&Document> = corpus.documents().iter().collect();
        let cut = split.min(all.len());
        let small = &all[..cut];
        prop_assume!(small.iter().any(|d| !d.tokens.is_empty()));
        let lex = seed_lexicon();
        let a = learn_terms(small.iter().copied(), &corpus, &lex, everything(), 1).unwrap();
        let b = learn_terms(all.iter().copied(), &corpus, &lex, everything(), 1).unwrap();
        // Inflected copies carry their base term's count, so only tokens that
        // occur in the pool report their own c_H.
        let own = |pool: &[&Document], term: &str| pool.iter().flat_map(|d| &d.tokens).filter(|t| *t == term).count() as u64;
        for e in a.iter().filter(|e| own(small, &e.term) > 0) {
            prop_assert_eq!(e.hateful_count, own(small, &e.term));
            let bigger = b.iter().find(|x| x.term == e.term);
            prop_assert!(bigger.is_some(), "{} vanished", e.term);
            prop_assert_eq!(bigger.unwrap().hateful_count, own(&all, &e.term));
            prop_assert!(bigger.unwrap().hateful_count >= e.hateful_count);
        }
    }

    #[test]
    fn seeds_are_a_fixed_point(docs in prop::collection::vec(words(), 1..25)) {
        let corpus = corpus_of(&docs);
        let pool: Vec<&Document> = corpus.documents().iter().collect();
        prop_assume!(pool.iter().any(|d| !d.tokens.is_empty()));
        let mut lex = seed_lexicon();
        let before: Vec<_> = lex.entries().cloned().collect();
        let learned = learn_terms(pool.iter().copied(), &corpus, &lex, everything(), 1).unwrap();
        prop_assert!(learned.iter().all(|e| !e.is_seed && !before.iter().any(|s| s.term == e.term)));
        lex.extend(learned);
        for s in &before {
            prop_assert_eq!(lex.get(&s.term), Some(s));
        }
    }
}
