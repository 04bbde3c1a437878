//! Seed and learned hate-indicator terms.
//!
//! Terms are single normalized tokens. A learned term must occur at least
//! `min_count` times in the hateful pool and its relative frequency there must
//! be at least `ratio_threshold` times its relative frequency in the whole
//! unlabeled corpus:
//!
//! ```text
//! score(w) = (c_H(w) / T_H) / (c_U(w) / T_U)
//! ```
//!
//! where `T_H` and `T_U` are total token counts of the pool and the corpus.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{is_special_token, Corpus, Document};
use crate::error::{Error, Result};

pub const DEFAULT_MIN_COUNT: u64 = 10;
pub const DEFAULT_RATIO_THRESHOLD: f64 = 100.0;

/// The twenty seed slur terms.
pub const SEED_TERMS: [&str; 20] = [
    "bimbo", "chink", "commie", "coon", "cunt", "fag", "faggot", "feminazi", "honky", "islamist",
    "libtard", "muzzie", "negro", "nigger", "paki", "skank", "subhuman", "tranny", "twat",
    "wanker",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexEntry {
    pub term: String,
    /// Relative-frequency ratio; `f64::INFINITY` for seeds.
    pub score: f64,
    pub is_seed: bool,
    pub iteration_found: u32,
    pub hateful_count: u64,
    pub unlabeled_count: u64,
    /// Set when the term was absent from the corpus and its count smoothed to 1.
    #[serde(default)]
    pub smoothed: bool,
}

impl LexEntry {
    fn seed(term: String) -> Self {
        LexEntry {
            term,
            score: f64::INFINITY,
            is_seed: true,
            iteration_found: 0,
            hateful_count: 0,
            unlabeled_count: 0,
            smoothed: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Lexicon {
    entries: BTreeMap<String, LexEntry>,
}

impl Lexicon {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.entries.contains_key(term)
    }

    pub fn get(&self, term: &str) -> Option<&LexEntry> {
        self.entries.get(term)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Inserts an entry unless the term is already present. Returns whether it
    /// was inserted.
    pub fn insert(&mut self, entry: LexEntry) -> bool {
        if self.entries.contains_key(&entry.term) {
            return false;
        }
        self.entries.insert(entry.term.clone(), entry);
        true
    }

    pub fn extend<I: IntoIterator<Item = LexEntry>>(&mut self, entries: I) -> usize {
        entries.into_iter().filter(|e| self.insert(e.clone())).count()
    }

    /// Writes `term<TAB>score<TAB>is_seed<TAB>iteration` lines.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        for e in self.entries.values() {
            let score = if e.score.is_infinite() {
                "inf".to_string()
            } else {
                e.score.to_string()
            };
            writeln!(w, "{}\t{}\t{}\t{}", e.term, score, e.is_seed, e.iteration_found)
                .map_err(|err| Error::io(path, err))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lex = Lexicon::default();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::format(path, i + 1, msg);
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(bad("expected 4 tab-separated columns"));
            }
            let score: f64 = cols[1].parse().map_err(|_| bad("bad score"))?;
            let is_seed: bool = cols[2].parse().map_err(|_| bad("bad is_seed flag"))?;
            let iteration_found: u32 = cols[3].parse().map_err(|_| bad("bad iteration"))?;
            let entry = LexEntry {
                term: cols[0].to_string(),
                score,
                is_seed,
                iteration_found,
                hateful_count: 0,
                unlabeled_count: 0,
                smoothed: false,
            };
            if !lex.insert(entry) {
                return Err(bad("duplicate term"));
            }
        }
        Ok(lex)
    }
}

fn plural(term: &str) -> String {
    let ends_with_sibilant = ["s", "x", "z", "ch", "sh"].iter().any(|s| term.ends_with(s));
    if ends_with_sibilant {
        return format!("{term}es");
    }
    let mut chars = term.chars().rev();
    if let (Some('y'), Some(prev)) = (chars.next(), chars.next()) {
        if !"aeiou".contains(prev) {
            return format!("{}ies", &term[..term.len() - 1]);
        }
    }
    format!("{term}s")
}

/// The singular and plural surface forms of a term.
pub fn inflect(term: &str) -> BTreeSet<String> {
    BTreeSet::from([term.to_string(), plural(term)])
}

pub fn seed_lexicon() -> Lexicon {
    let mut lex = Lexicon::default();
    for base in SEED_TERMS {
        for form in inflect(base) {
            lex.insert(LexEntry::seed(form));
        }
    }
    lex
}

/// Lexicon terms that occur as whole tokens of the document.
pub fn match_terms<'a>(doc: &Document, lex: &'a Lexicon) -> BTreeSet<&'a str> {
    doc.tokens
        .iter()
        .filter_map(|t| lex.entries.get_key_value(t.as_str()).map(|(k, _)| k.as_str()))
        .collect()
}

pub fn is_match(doc: &Document, lex: &Lexicon) -> bool {
    doc.tokens.iter().any(|t| lex.contains(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnThresholds {
    pub min_count: u64,
    pub ratio_threshold: f64,
}

impl Default for LearnThresholds {
    fn default() -> Self {
        LearnThresholds {
            min_count: DEFAULT_MIN_COUNT,
            ratio_threshold: DEFAULT_RATIO_THRESHOLD,
        }
    }
}

/// Scores unigrams of the hateful pool against the corpus and returns new
/// entries that clear both thresholds, each expanded to its singular and
/// plural forms. Terms already in `lex` and normalization placeholders are
/// never emitted. Output is sorted by term.
pub fn learn_terms<'a, I>(
    pool_docs: I,
    corpus: &Corpus,
    lex: &Lexicon,
    thresholds: LearnThresholds,
    iteration: u32,
) -> Result<Vec<LexEntry>>
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut hateful: HashMap<&str, u64> = HashMap::new();
    let mut pool_tokens: u64 = 0;
    for doc in pool_docs {
        pool_tokens += doc.tokens.len() as u64;
        for t in &doc.tokens {
            *hateful.entry(t.as_str()).or_insert(0) += 1;
        }
    }
    if pool_tokens == 0 {
        return Err(Error::Empty("hateful pool"));
    }
    let corpus_tokens = corpus.total_token_count();
    if corpus_tokens == 0 {
        return Err(Error::Empty("corpus"));
    }

    let mut admitted: BTreeMap<String, LexEntry> = BTreeMap::new();
    let mut candidates: Vec<(&str, u64)> = hateful
        .into_iter()
        .filter(|&(w, c)| c >= thresholds.min_count && !is_special_token(w) && !lex.contains(w))
        .collect();
    candidates.sort_unstable();
    for (term, c_h) in candidates {
        let raw_c_u = corpus.token_count(term);
        let c_u = raw_c_u.max(1);
        let numerator = c_h as u128 * corpus_tokens as u128;
        let denominator = c_u as u128 * pool_tokens as u128;
        let score = numerator as f64 / denominator as f64;
        if score >= thresholds.ratio_threshold {
            admitted.insert(
                term.to_string(),
                LexEntry {
                    term: term.to_string(),
                    score,
                    is_seed: false,
                    iteration_found: iteration,
                    hateful_count: c_h,
                    unlabeled_count: raw_c_u,
                    smoothed: raw_c_u == 0,
                },
            );
        }
    }

    let mut out = admitted.clone();
    for (term, entry) in &admitted {
        for form in inflect(term) {
            if lex.contains(&form) || out.contains_key(&form) {
                continue;
            }
            out.insert(
                form.clone(),
                LexEntry {
                    term: form,
                    ..entry.clone()
                },
            );
        }
    }
    Ok(out.into_values().collect())
}

/// Set of terms, handy for comparisons in tests and reports.
pub fn term_set(entries: &[LexEntry]) -> HashSet<String> {
    entries.iter().map(|e| e.term.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, text: &str) -> Document {
        Document::new(id, None, text)
    }

    #[test]
    fn inflect_rules() {
        assert_eq!(inflect("bimbo"), BTreeSet::from(["bimbo".into(), "bimbos".into()]));
        assert_eq!(inflect("tranny"), BTreeSet::from(["tranny".into(), "trannies".into()]));
        assert_eq!(inflect("chink"), BTreeSet::from(["chink".into(), "chinks".into()]));
        assert!(inflect("box").contains("boxes"));
        assert!(inflect("witch").contains("witches"));
        assert!(inflect("day").contains("days"));
    }

    #[test]
    fn seed_lexicon_shape() {
        let lex = seed_lexicon();
        assert_eq!(lex.len(), 40);
        assert!(lex.contains("faggot") && lex.contains("faggots"));
        assert!(!lex.contains("gypsy"));
        assert!(lex.entries().all(|e| e.is_seed && e.iteration_found == 0 && e.score.is_infinite()));
    }

    #[test]
    fn match_whole_tokens_only() {
        let lex = seed_lexicon();
        let d = doc("1", "you faggot coward");
        assert_eq!(match_terms(&d, &lex), BTreeSet::from(["faggot"]));
        assert!(match_terms(&doc("2", "chinking sound"), &lex).is_empty());
        assert_eq!(
            match_terms(&doc("3", "commie libtard"), &lex),
            BTreeSet::from(["commie", "libtard"])
        );
    }

    fn corpus_with(counts: &[(&str, usize)], filler: usize) -> Corpus {
        let mut docs = Vec::new();
        let mut n = 0;
        for &(tok, c) in counts {
            for _ in 0..c {
                docs.push(doc(&format!("d{n}"), tok));
                n += 1;
            }
        }
        for _ in 0..filler {
            docs.push(doc(&format!("d{n}"), "filler"));
            n += 1;
        }
        Corpus::from_documents(docs)
    }

    #[test]
    fn learn_ratio_example() {
        // c_H = 12, T_H = 200, c_U = 15, T_U = 50,000 -> score 200.
        let corpus = corpus_with(&[("zorg", 15)], 50_000 - 15);
        let mut pool: Vec<Document> = (0..12).map(|i| doc(&format!("p{i}"), "zorg")).collect();
        pool.extend((0..188).map(|i| doc(&format!("q{i}"), "filler")));
        let learned =
            learn_terms(&pool, &corpus, &seed_lexicon(), LearnThresholds::default(), 1).unwrap();
        let zorg = learned.iter().find(|e| e.term == "zorg").unwrap();
        assert!((zorg.score - 200.0).abs() < 1e-9);
        assert_eq!((zorg.hateful_count, zorg.unlabeled_count), (12, 15));
        assert!(learned.iter().any(|e| e.term == "zorgs"));
        assert!(!learned.iter().any(|e| e.term == "filler"));
    }

    #[test]
    fn learn_respects_min_count() {
        let corpus = corpus_with(&[("zorg", 9)], 50_000);
        let pool: Vec<Document> = (0..9).map(|i| doc(&format!("p{i}"), "zorg")).collect();
        let learned =
            learn_terms(&pool, &corpus, &seed_lexicon(), LearnThresholds::default(), 1).unwrap();
        assert!(learned.is_empty());
    }

    #[test]
    fn learn_skips_known_and_special_terms() {
        let corpus = corpus_with(&[("libtard", 12), ("<url>", 12)], 50_000);
        let pool: Vec<Document> = (0..12)
            .map(|i| doc(&format!("p{i}"), "libtard http://x.co"))
            .collect();
        let learned =
            learn_terms(&pool, &corpus, &seed_lexicon(), LearnThresholds::default(), 1).unwrap();
        assert!(learned.is_empty(), "{learned:?}");
    }

    #[test]
    fn learn_smooths_absent_terms() {
        let corpus = corpus_with(&[], 50_000);
        let pool: Vec<Document> = (0..10).map(|i| doc(&format!("p{i}"), "ghost")).collect();
        let learned =
            learn_terms(&pool, &corpus, &Lexicon::default(), LearnThresholds::default(), 2).unwrap();
        let ghost = learned.iter().find(|e| e.term == "ghost").unwrap();
        assert!(ghost.smoothed);
        assert_eq!(ghost.unlabeled_count, 0);
        assert_eq!(ghost.iteration_found, 2);
    }

    #[test]
    fn learn_empty_pool_is_error() {
        let corpus = corpus_with(&[], 10);
        let empty: Vec<Document> = Vec::new();
        assert!(learn_terms(&empty, &corpus, &seed_lexicon(), LearnThresholds::default(), 1).is_err());
    }

    #[test]
    fn lexicon_file_round_trip() {
        let mut lex = seed_lexicon();
        lex.insert(LexEntry {
            term: "scumbag".into(),
            score: 153.25,
            is_seed: false,
            iteration_found: 2,
            hateful_count: 0,
            unlabeled_count: 0,
            smoothed: false,
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lex.tsv");
        lex.save(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("faggot\tinf\ttrue\t0"));
        assert_eq!(Lexicon::load(&path).unwrap(), lex);
    }
}
