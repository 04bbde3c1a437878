//! Document ingestion, tweet-style normalization and labeled-pool persistence.
//!
//! Normalization is a fixed sequence of rewrites followed by a tokenizer:
//!
//! 1. lowercase
//! 2. URLs become `<url>`
//! 3. `@handle` becomes `<user>`
//! 4. numbers become `<number>`
//! 5. emoticons and emoji become `<smile>`, `<sadface>` or `<emoji>` using the
//!    bundled table in `data/emoticons.tsv`
//! 6. `#` is stripped from hashtags
//! 7. split on whitespace and punctuation, keeping contractions such as
//!    `don't` as one token
//!
//! The output is stable under re-normalization: joining tokens with spaces and
//! normalizing again yields the same tokens.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::engine::{LabelPool, LabelSource, PoolEntry};
use crate::error::{Error, Result};

pub const URL_TOKEN: &str = "<url>";
pub const USER_TOKEN: &str = "<user>";
pub const NUMBER_TOKEN: &str = "<number>";
pub const EMOJI_TOKEN: &str = "<emoji>";
pub const SMILE_TOKEN: &str = "<smile>";
pub const SADFACE_TOKEN: &str = "<sadface>";

/// Placeholder tokens produced by [`normalize`].
pub const SPECIAL_TOKENS: [&str; 6] = [
    URL_TOKEN,
    USER_TOKEN,
    NUMBER_TOKEN,
    EMOJI_TOKEN,
    SMILE_TOKEN,
    SADFACE_TOKEN,
];

const EMOTICON_TABLE: &str = include_str!("../data/emoticons.tsv");

pub fn is_special_token(token: &str) -> bool {
    SPECIAL_TOKENS.contains(&token)
}

/// One tweet-like text unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub timestamp: Option<i64>,
    pub raw_text: String,
    pub tokens: Vec<String>,
    pub mentions: BTreeSet<String>,
    pub hashtags: BTreeSet<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, timestamp: Option<i64>, raw_text: impl Into<String>) -> Self {
        let raw_text = raw_text.into();
        let (mentions, hashtags) = extract_metadata(&raw_text);
        let tokens = normalize(&raw_text);
        Document {
            id: id.into(),
            timestamp,
            raw_text,
            tokens,
            mentions,
            hashtags,
        }
    }
}

/// A raw input record before normalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ts: Option<i64>,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Jsonl,
    Tsv,
}

impl std::str::FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "tsv" => Ok(CorpusFormat::Tsv),
            other => Err(Error::InvalidArgument(format!("unknown corpus format `{other}`"))),
        }
    }
}

/// Indexed document collection with corpus-wide token statistics.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    documents: Vec<Document>,
    index: HashMap<String, usize>,
    token_totals: HashMap<String, u64>,
    total_token_count: u64,
    dropped_count: usize,
}

impl Corpus {
    /// Builds a corpus from already-normalized documents. Duplicate ids (first
    /// wins) and documents without tokens are dropped and tallied.
    pub fn from_documents<I>(documents: I) -> Self
    where
        I: IntoIterator<Item = Document>,
    {
        let mut corpus = Corpus::default();
        for doc in documents {
            corpus.admit(doc);
        }
        corpus
    }

    pub fn from_records<I>(records: I) -> Self
    where
        I: IntoIterator<Item = RawRecord>,
    {
        Corpus::from_documents(
            records
                .into_iter()
                .map(|r| Document::new(r.id, r.ts, r.text)),
        )
    }

    fn admit(&mut self, doc: Document) -> bool {
        if doc.tokens.is_empty() || self.index.contains_key(&doc.id) {
            self.dropped_count += 1;
            return false;
        }
        for token in &doc.tokens {
            *self.token_totals.entry(token.clone()).or_insert(0) += 1;
        }
        self.total_token_count += doc.tokens.len() as u64;
        self.index.insert(doc.id.clone(), self.documents.len());
        self.documents.push(doc);
        true
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.index.get(id).map(|&i| &self.documents[i])
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn token_totals(&self) -> &HashMap<String, u64> {
        &self.token_totals
    }

    pub fn token_count(&self, token: &str) -> u64 {
        self.token_totals.get(token).copied().unwrap_or(0)
    }

    pub fn total_token_count(&self) -> u64 {
        self.total_token_count
    }

    pub fn dropped_count(&self) -> usize {
        self.dropped_count
    }
}

/// Counts token occurrences over a set of documents.
pub fn count_tokens<'a, I>(docs: I) -> HashMap<String, u64>
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut counts = HashMap::new();
    for doc in docs {
        for token in &doc.tokens {
            *counts.entry(token.clone()).or_insert(0) += 1;
        }
    }
    counts
}

/// Commutative merge of shard-level token counts.
pub fn merge_counts(into: &mut HashMap<String, u64>, other: HashMap<String, u64>) {
    for (token, n) in other {
        *into.entry(token).or_insert(0) += n;
    }
}

/// Reads a corpus file. Unreadable files are fatal; malformed records,
/// duplicate ids and documents that normalize to nothing are skipped and
/// counted in `dropped_count`. Blank lines are not records.
pub fn ingest(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut corpus = Corpus::default();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = match format {
            CorpusFormat::Jsonl => parse_jsonl_record(&line),
            CorpusFormat::Tsv => parse_tsv_record(&line),
        };
        match record {
            Some(r) => {
                corpus.admit(Document::new(r.id, r.ts, r.text));
            }
            None => {
                log::debug!("{}:{}: skipping malformed record", path.display(), lineno + 1);
                corpus.dropped_count += 1;
            }
        }
    }
    Ok(corpus)
}

fn parse_jsonl_record(line: &str) -> Option<RawRecord> {
    let value: serde_json::Value = serde_json::from_str(line).ok()?;
    let obj = value.as_object()?;
    let id = obj.get("id")?.as_str()?.to_string();
    let text = obj.get("text")?.as_str()?.to_string();
    let ts = match obj.get("ts") {
        None | Some(serde_json::Value::Null) => None,
        Some(v) => Some(v.as_i64()?),
    };
    Some(RawRecord { id, ts, text })
}

fn parse_tsv_record(line: &str) -> Option<RawRecord> {
    let mut parts = line.splitn(3, '\t');
    let id = parts.next()?.to_string();
    let ts = parts.next()?;
    let text = parts.next()?.to_string();
    if id.is_empty() {
        return None;
    }
    let ts = if ts.is_empty() {
        None
    } else {
        Some(ts.parse().ok()?)
    };
    Some(RawRecord { id, ts, text })
}

/// Writes records as JSONL in the ingest format.
pub fn write_jsonl(path: impl AsRef<Path>, records: &[RawRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

struct Patterns {
    url: Regex,
    mention: Regex,
    number: Regex,
    token: Regex,
    meta_mention: Regex,
    meta_hashtag: Regex,
    emoticons: HashMap<String, &'static str>,
    emoji_chars: HashMap<char, &'static str>,
}

fn patterns() -> &'static Patterns {
    static PATTERNS: OnceLock<Patterns> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        let mut emoticons = HashMap::new();
        let mut emoji_chars = HashMap::new();
        for line in EMOTICON_TABLE.lines() {
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            let (surface, class) = line.split_once('\t').expect("emoticon table row");
            let class = SPECIAL_TOKENS
                .iter()
                .copied()
                .find(|t| *t == class)
                .expect("emoticon class");
            let mut chars = surface.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if !c.is_ascii() => {
                    emoji_chars.insert(c, class);
                }
                _ => {
                    emoticons.insert(surface.to_string(), class);
                }
            }
        }
        Patterns {
            url: Regex::new(r"\bhttps?://\S+|\bwww\.\S+").unwrap(),
            mention: Regex::new(r"@\w+").unwrap(),
            number: Regex::new(r"\b\d+(?:[.,]\d+)*\b").unwrap(),
            token: Regex::new(
                r"<(?:url|user|number|emoji|smile|sadface)>|\w+(?:'\w+)*|\S",
            )
            .unwrap(),
            meta_mention: Regex::new(r"@\w+").unwrap(),
            meta_hashtag: Regex::new(r"#\w+").unwrap(),
            emoticons,
            emoji_chars,
        }
    })
}

fn is_emoji_modifier(c: char) -> bool {
    matches!(c as u32, 0x200D | 0xFE0E | 0xFE0F | 0x1F3FB..=0x1F3FF | 0x20E3)
}

fn is_emoji(c: char) -> bool {
    matches!(c as u32,
        0x1F000..=0x1FAFF | 0x2600..=0x27BF | 0x2B00..=0x2BFF)
}

fn replace_emoticons(text: &str, p: &Patterns) -> String {
    let mut out = String::with_capacity(text.len() + 8);
    for (i, chunk) in text.split_whitespace().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        if let Some(class) = p.emoticons.get(chunk) {
            out.push_str(class);
            continue;
        }
        for c in chunk.chars() {
            if is_emoji_modifier(c) {
                continue;
            }
            if let Some(class) = p.emoji_chars.get(&c) {
                out.push(' ');
                out.push_str(class);
                out.push(' ');
            } else if is_emoji(c) {
                out.push(' ');
                out.push_str(EMOJI_TOKEN);
                out.push(' ');
            } else {
                out.push(c);
            }
        }
    }
    out
}

fn is_word_char(c: char) -> bool {
    // Approximates the regex `\w` class used by the tokenizer.
    c.is_alphanumeric() || c == '_'
}

fn strip_hashtags(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    for (i, &c) in chars.iter().enumerate() {
        if c == '#' {
            let prev_is_word = i > 0 && is_word_char(chars[i - 1]);
            let next_is_word = chars.get(i + 1).is_some_and(|&n| is_word_char(n));
            if next_is_word && !prev_is_word {
                continue;
            }
        }
        out.push(c);
    }
    out
}

/// Tweet-style normalization into tokens.
pub fn normalize(raw_text: &str) -> Vec<String> {
    let p = patterns();
    let text = raw_text.to_lowercase();
    let text = p.url.replace_all(&text, " <url> ");
    let text = p.mention.replace_all(&text, " <user> ");
    let text = p.number.replace_all(&text, " <number> ");
    let text = replace_emoticons(&text, p);
    let text = strip_hashtags(&text);
    p.token
        .find_iter(&text)
        .map(|m| m.as_str().to_string())
        .collect()
}

/// Lowercased `@mention` and `#hashtag` sets of a raw text.
pub fn extract_metadata(raw_text: &str) -> (BTreeSet<String>, BTreeSet<String>) {
    let p = patterns();
    let mentions = p
        .meta_mention
        .find_iter(raw_text)
        .map(|m| m.as_str().to_lowercase())
        .collect();
    let hashtags = p
        .meta_hashtag
        .find_iter(raw_text)
        .map(|m| m.as_str().to_lowercase())
        .collect();
    (mentions, hashtags)
}

#[derive(Serialize, Deserialize)]
struct PoolLine {
    id: String,
    source: String,
    iteration: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    score: Option<f64>,
}

/// Writes a label pool as JSONL (`id`, `source`, `iteration`, optional `score`).
pub fn save_labeled(pool: &LabelPool, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for (id, entry) in pool.iter() {
        let line = PoolLine {
            id: id.to_string(),
            source: entry.source.as_str().to_string(),
            iteration: entry.iteration,
            score: entry.score,
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn load_labeled(path: impl AsRef<Path>) -> Result<LabelPool> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut pool = LabelPool::default();
    let mut seen = HashSet::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let parsed: PoolLine = serde_json::from_str(&line)
            .map_err(|e| Error::format(path, lineno, e.to_string()))?;
        let source: LabelSource = parsed.source.parse().map_err(|_| {
            Error::format(path, lineno, format!("unknown source tag `{}`", parsed.source))
        })?;
        if !seen.insert(parsed.id.clone()) {
            return Err(Error::format(path, lineno, format!("duplicate id `{}`", parsed.id)));
        }
        pool.insert(
            parsed.id,
            PoolEntry {
                source,
                iteration: parsed.iteration,
                score: parsed.score,
            },
        );
    }
    Ok(pool)
}
