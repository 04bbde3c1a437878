//! Tokenizes a few tweet-like strings and ingests a small JSONL corpus.
//!
//! ```text
//! cargo run --example normalize
//! ```

use twopath::corpus::{self, extract_metadata, normalize, CorpusFormat};

fn main() -> twopath::Result<()> {
    let samples = [
        "@jack Check https://t.co/xyz :) we won 3-1!!! #Election2016",
        "They are SUBHUMANS :( and nobody cares",
        "Ünïcode text with 😀 emoji and the number 1,000",
    ];
    for text in samples {
        let (mentions, hashtags) = extract_metadata(text);
        println!("{text}");
        println!("  tokens   {:?}", normalize(text));
        println!("  mentions {mentions:?} hashtags {hashtags:?}");
    }

    let dir = std::env::temp_dir().join("twopath-normalize-example");
    std::fs::create_dir_all(&dir).map_err(|e| twopath::Error::Io { path: dir.clone(), source: e })?;
    let path = dir.join("tiny.jsonl");
    let lines = [
        r#"{"id": "1", "ts": 1478649600, "text": "Hello @world"}"#,
        r#"{"id": "1", "ts": 1478649601, "text": "duplicate id, dropped"}"#,
        r#"{"id": "2", "text": "no timestamp is fine"}"#,
        r#"not json"#,
        r#"{"id": "3", "text": "   "}"#,
    ];
    std::fs::write(&path, lines.join("\n")).map_err(|e| twopath::Error::Io { path: path.clone(), source: e })?;
    let c = corpus::ingest(&path, CorpusFormat::Jsonl)?;
    println!("\ningested {} documents, dropped {}", c.len(), c.dropped_count());
    for doc in c.documents() {
        println!("  {} ts={:?} {:?}", doc.id, doc.timestamp, doc.tokens);
    }
    Ok(())
}
