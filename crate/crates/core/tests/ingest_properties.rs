use std::collections::HashSet;

use proptest::prelude::*;
use twopath::corpus::{count_tokens, ingest, CorpusFormat};

#[derive(Debug, Clone)]
enum Line {
    Good { id: u8, text: &'static str, ts: Option<i64> },
    Malformed(&'static str),
    Blank,
}

fn line_strategy() -> impl Strategy<Value = Line> {
    let text = prop::sample::select(vec!["hello world", "@a #b :)", "   ", "", "x 42 http://t.co/z", "😂!"]);
    prop_oneof![
        4 => (0u8..12, text, prop::option::of(0i64..2_000_000_000)).prop_map(|(id, text, ts)| Line::Good { id, text, ts }),
        1 => prop::sample::select(vec!["{", "[]", "{\"id\": 3, \"text\": \"x\"}", "{\"id\": \"q\"}", "{\"id\":\"z\",\"text\":\"t\",\"ts\":\"soon\"}"])
            .prop_map(Line::Malformed),
        1 => Just(Line::Blank),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kept_plus_dropped_is_record_count(lines in prop::collection::vec(line_strategy(), 0..40)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let rendered: Vec<String> = lines
            .iter()
            .map(|l| match l {
                Line::Good { id, text, ts } => serde_json::json!({ "id": format!("d{id}"), "text": text, "ts": ts }).to_string(),
                Line::Malformed(s) => s.to_string(),
                Line::Blank => String::new(),
            })
            .collect();
        std::fs::write(&path, rendered.join("\n")).unwrap();
        let corpus = ingest(&path, CorpusFormat::Jsonl).unwrap();

        let records = lines.iter().filter(|l| !matches!(l, Line::Blank)).count();
        prop_assert_eq!(corpus.len() + corpus.dropped_count(), records);

        // Independent expectation: first occurrence of an id with a
        // non-empty normalization is kept.
        let mut seen = HashSet::new();
        let mut kept = 0;
        for l in &lines {
            if let Line::Good { id, text, .. } = l {
                if !twopath::corpus::normalize(text).is_empty() && seen.insert(*id) {
                    kept += 1;
                }
            }
        }
        prop_assert_eq!(corpus.len(), kept);
        prop_assert_eq!(&count_tokens(corpus.documents()), corpus.token_totals());
    }
}
