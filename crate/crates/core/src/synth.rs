//! Deterministic synthetic corpus with planted hateful signal and ground truth.
//!
//! Four document kinds are generated:
//!
//! * `background`: Zipf-distributed pseudo-words, never containing more than
//!   one pattern word;
//! * `seed`: a seed term plus one or more "tier A" planted slurs, sometimes an
//!   implicit pattern pair as well;
//! * `explicit`: a planted slur without any seed term;
//! * `implicit`: both words of a pattern pair, each word individually common
//!   in background text. Some also carry a "tier B" slur, which never
//!   co-occurs with seed terms and is therefore only learnable once the
//!   classifier has pulled implicit documents into the pool.
//!
//! Embeddings reserve coordinate 0 as a hate channel. Seed terms and the
//! even-numbered slurs load fully on it; odd-numbered slurs are left out of the
//! table so only the lexicon path can see them. Pattern words get ordinary
//! vectors: one alone is not hateful, and only their co-occurrence is, so the
//! classifier has to learn the pair from pooled examples.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::corpus::{self, Corpus, Document, RawRecord, SPECIAL_TOKENS};
use crate::embedding::EmbeddingTable;
use crate::engine::{BootstrapConfig, Mode};
use crate::error::{Error, Result};
use crate::evaluation::LabeledDocument;
use crate::lexicon::{inflect, SEED_TERMS};
use crate::neuralnet::TrainConfig;

/// Learning rate tuned for the small synthetic embeddings.
pub const SYNTH_LEARNING_RATE: f64 = 0.2;
/// Minibatch size tuned alongside [`SYNTH_LEARNING_RATE`].
pub const SYNTH_BATCH_SIZE: usize = 8;

/// 2016-11-01T00:00:00Z.
const START_TS: i64 = 1_477_958_400;
const DAY: i64 = 86_400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub docs: usize,
    pub planted_slurs: usize,
    pub implicit_patterns: usize,
    pub seed: u64,
    pub vocab_size: usize,
    pub dimension: usize,
    /// Fraction of documents that carry a seed term.
    pub seed_fraction: f64,
    /// Seed documents each tier-A slur appears in.
    pub seed_cooccurrence: usize,
    /// Additional seed-free documents per tier-A slur.
    pub explicit_per_slur: usize,
    pub implicit_per_pattern: usize,
    /// Implicit documents carrying each tier-B slur.
    pub tier_b_implicit: usize,
    /// Seed-free, pattern-free documents per tier-B slur.
    pub tier_b_explicit: usize,
    /// Probability that a seed document also carries an implicit pattern pair.
    pub seed_pattern_rate: f64,
    /// Same for tier-A explicit documents.
    pub explicit_pattern_rate: f64,
    /// Most frequent vocabulary rank eligible for pattern words.
    pub pattern_min_rank: usize,
    pub validation_docs: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            docs: 100_000,
            planted_slurs: 30,
            implicit_patterns: 10,
            seed: 7,
            vocab_size: 3000,
            dimension: 16,
            seed_fraction: 0.0015,
            seed_cooccurrence: 12,
            explicit_per_slur: 6,
            implicit_per_pattern: 20,
            tier_b_implicit: 16,
            tier_b_explicit: 4,
            seed_pattern_rate: 0.5,
            explicit_pattern_rate: 0.33,
            pattern_min_rank: 100,
            validation_docs: 600,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocKind {
    Background,
    Seed,
    Explicit,
    Implicit,
}

impl DocKind {
    pub fn is_hateful(self) -> bool {
        self != DocKind::Background
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DocKind::Background => "background",
            DocKind::Seed => "seed",
            DocKind::Explicit => "explicit",
            DocKind::Implicit => "implicit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSlur {
    pub term: String,
    /// `true` for slurs that co-occur with seed terms.
    pub tier_a: bool,
    pub in_embeddings: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub config: SynthConfig,
    pub records: Vec<RawRecord>,
    pub kinds: Vec<DocKind>,
    pub slurs: Vec<PlantedSlur>,
    pub patterns: Vec<(String, String)>,
    pub embeddings: EmbeddingTable,
    pub validation: Vec<(RawRecord, bool)>,
}

impl SynthCorpus {
    pub fn corpus(&self) -> Corpus {
        Corpus::from_records(self.records.iter().cloned())
    }

    /// Ground truth keyed by document id.
    pub fn truth(&self) -> HashMap<String, bool> {
        self.records
            .iter()
            .zip(&self.kinds)
            .map(|(r, k)| (r.id.clone(), k.is_hateful()))
            .collect()
    }

    pub fn validation_documents(&self) -> Vec<LabeledDocument> {
        self.validation
            .iter()
            .map(|(r, h)| LabeledDocument {
                document: Document::new(r.id.clone(), r.ts, r.text.clone()),
                hateful: *h,
            })
            .collect()
    }

    /// Training setup that suits this corpus: hidden size equal to the
    /// embedding dimension and a faster SGD schedule than the default.
    pub fn train_config(&self) -> TrainConfig {
        TrainConfig { learning_rate: SYNTH_LEARNING_RATE, batch_size: SYNTH_BATCH_SIZE, ..TrainConfig::default() }
    }

    pub fn bootstrap_config(&self, mode: Mode) -> BootstrapConfig {
        BootstrapConfig {
            mode,
            hidden_size: self.config.dimension,
            train: self.train_config(),
            rng_seed: self.config.seed,
            validation: self.validation_documents(),
            ..BootstrapConfig::default()
        }
    }

    pub fn count_kind(&self, kind: DocKind) -> usize {
        self.kinds.iter().filter(|k| **k == kind).count()
    }

    /// Writes `corpus.jsonl`, `truth.tsv`, `embeddings.txt`, `validation.csv`,
    /// `planted.tsv`, `patterns.tsv` and a matching `run.json` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        corpus::write_jsonl(dir.join("corpus.jsonl"), &self.records)?;

        write_lines(&dir.join("truth.tsv"), |w| {
            writeln!(w, "id\thateful\tkind")?;
            for (r, k) in self.records.iter().zip(&self.kinds) {
                writeln!(w, "{}\t{}\t{}", r.id, u8::from(k.is_hateful()), k.as_str())?;
            }
            Ok(())
        })?;
        write_lines(&dir.join("embeddings.txt"), |w| self.embeddings.dump(w))?;
        write_lines(&dir.join("planted.tsv"), |w| {
            writeln!(w, "term\ttier\tin_embeddings")?;
            for s in &self.slurs {
                writeln!(w, "{}\t{}\t{}", s.term, if s.tier_a { "a" } else { "b" }, s.in_embeddings)?;
            }
            Ok(())
        })?;
        write_lines(&dir.join("patterns.tsv"), |w| {
            for (a, b) in &self.patterns {
                writeln!(w, "{a}\t{b}")?;
            }
            Ok(())
        })?;

        let run = RunConfig {
            corpus: vec!["corpus.jsonl".into()],
            embeddings: Some("embeddings.txt".into()),
            validation: Some("validation.csv".into()),
            hidden_size: self.config.dimension,
            train: self.train_config(),
            out: Some("run".into()),
            rng_seed: self.config.seed,
            ..RunConfig::default()
        };
        let path = dir.join("run.json");
        let json = serde_json::to_string_pretty(&run)?;
        fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;

        let path = dir.join("validation.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["id", "text", "label"])?;
        for (r, h) in &self.validation {
            w.write_record([r.id.as_str(), r.text.as_str(), if *h { "1" } else { "0" }])?;
        }
        w.flush().map_err(|e| Error::io(&path, e))
    }
}

fn write_lines(path: &Path, f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// Reads a `truth.tsv` written by [`SynthCorpus::write`].
pub fn load_truth(path: impl AsRef<Path>) -> Result<HashMap<String, bool>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let cols: Vec<&str> = line.split('\t').collect();
        match cols.as_slice() {
            [id, "0", ..] => out.insert(id.to_string(), false),
            [id, "1", ..] => out.insert(id.to_string(), true),
            _ => return Err(Error::format(path, i + 1, "expected `id<TAB>0|1<TAB>kind`")),
        };
    }
    Ok(out)
}

const ONSETS: [&str; 16] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "tr"];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];
const SLUR_ONSETS: [&str; 8] = ["gr", "sk", "kr", "pl", "dr", "bl", "sn", "fl"];
const SLUR_CODAS: [&str; 6] = ["x", "rk", "mp", "nt", "g", "ck"];

fn pseudo_word<R: Rng>(rng: &mut R, syllables: usize) -> String {
    (0..syllables)
        .map(|_| format!("{}{}", ONSETS.choose(rng).unwrap(), VOWELS.choose(rng).unwrap()))
        .collect()
}

fn slur_word<R: Rng>(rng: &mut R) -> String {
    format!(
        "{}{}{}{}",
        SLUR_ONSETS.choose(rng).unwrap(),
        VOWELS.choose(rng).unwrap(),
        ONSETS.choose(rng).unwrap(),
        SLUR_CODAS.choose(rng).unwrap()
    )
}

/// Zipf(1.05) sampler over ranks `0..n`.
struct Zipf {
    cdf: Vec<f64>,
}

impl Zipf {
    fn new(n: usize) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = (1..=n)
            .map(|r| {
                acc += 1.0 / (r as f64).powf(1.05);
                acc
            })
            .collect();
        cdf.iter_mut().for_each(|c| *c /= acc);
        Zipf { cdf }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1)
    }
}

struct Generator {
    rng: ChaCha8Rng,
    vocab: Vec<String>,
    zipf: Zipf,
    /// Pattern index for each vocabulary rank that belongs to a pair.
    pattern_of: HashMap<usize, usize>,
    patterns: Vec<(usize, usize)>,
    handles: Vec<String>,
}

impl Generator {
    fn filler(&mut self, len: usize) -> Vec<String> {
        loop {
            let ranks: Vec<usize> = (0..len).map(|_| self.zipf.sample(&mut self.rng)).collect();
            let loaded: HashSet<usize> = ranks.iter().copied().filter(|r| self.pattern_of.contains_key(r)).collect();
            if loaded.len() < 2 {
                return ranks.into_iter().map(|r| self.vocab[r].clone()).collect();
            }
        }
    }

    fn insert_at_random(&mut self, tokens: &mut Vec<String>, word: &str) {
        let pos = self.rng.gen_range(0..=tokens.len());
        tokens.insert(pos, word.to_string());
    }

    fn insert_pattern(&mut self, tokens: &mut Vec<String>, p: usize) {
        let (a, b) = self.pattern_words(p);
        self.insert_at_random(tokens, &a);
        self.insert_at_random(tokens, &b);
    }

    fn pattern_words(&self, p: usize) -> (String, String) {
        let (a, b) = self.patterns[p];
        (self.vocab[a].clone(), self.vocab[b].clone())
    }

    /// Renders tokens as tweet-like text with occasional mentions, hashtags
    /// and links.
    fn render(&mut self, tokens: Vec<String>, hateful: bool) -> String {
        let mut parts = tokens;
        let mention_p = if hateful { 0.5 } else { 0.15 };
        if self.rng.gen_bool(mention_p) {
            let pool = if hateful { 3 } else { self.handles.len() };
            let h = self.handles[self.rng.gen_range(0..pool)].clone();
            parts.insert(0, format!("@{h}"));
        }
        if self.rng.gen_bool(0.1) {
            let i = self.rng.gen_range(0..parts.len());
            if !parts[i].starts_with('@') {
                parts[i] = format!("#{}", parts[i]);
            }
        }
        if self.rng.gen_bool(0.05) {
            parts.push("https://t.co/x".to_string());
        }
        parts.join(" ")
    }

    fn timestamp(&mut self, hateful: bool) -> Option<i64> {
        if !hateful && self.rng.gen_bool(0.005) {
            return None;
        }
        let offset = if hateful && self.rng.gen_bool(0.5) {
            // Election-week spike.
            6 * DAY + self.rng.gen_range(0..6 * DAY)
        } else {
            self.rng.gen_range(0..20 * DAY)
        };
        Some(START_TS + offset)
    }

    fn doc_len(&mut self) -> usize {
        self.rng.gen_range(8..=16)
    }
}

fn validate(cfg: &SynthConfig) -> Result<()> {
    if cfg.planted_slurs < 2 || cfg.implicit_patterns == 0 {
        return Err(Error::InvalidArgument("need at least 2 planted slurs and 1 implicit pattern".into()));
    }
    if cfg.vocab_size < 4 * cfg.implicit_patterns + 60 {
        return Err(Error::InvalidArgument("vocabulary too small for the requested patterns".into()));
    }
    let rates = [cfg.seed_fraction, cfg.seed_pattern_rate, cfg.explicit_pattern_rate];
    if rates.iter().any(|r| !(0.0..=1.0).contains(r)) {
        return Err(Error::InvalidArgument("rates and fractions must lie in [0, 1]".into()));
    }
    if cfg.dimension < 2 {
        return Err(Error::InvalidArgument("embedding dimension must be >= 2".into()));
    }
    Ok(())
}

/// Generates a corpus; identical configs give identical output.
pub fn generate(cfg: &SynthConfig) -> Result<SynthCorpus> {
    validate(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let reserved: HashSet<String> = SEED_TERMS.iter().flat_map(|t| inflect(t)).collect();
    let mut taken: HashSet<String> = reserved.clone();
    let mut vocab = Vec::with_capacity(cfg.vocab_size);
    while vocab.len() < cfg.vocab_size {
        let syl = rng.gen_range(2..=3);
        let w = pseudo_word(&mut rng, syl);
        if taken.insert(w.clone()) {
            vocab.push(w);
        }
    }
    // Keep plurals of vocabulary words out of the way of learned inflections.
    for w in &vocab {
        taken.extend(inflect(w));
    }
    let mut slur_terms = Vec::with_capacity(cfg.planted_slurs);
    while slur_terms.len() < cfg.planted_slurs {
        let w = slur_word(&mut rng);
        if inflect(&w).iter().all(|f| !taken.contains(f)) {
            taken.extend(inflect(&w));
            slur_terms.push(w);
        }
    }
    let tier_b = (cfg.planted_slurs / 6).max(1);
    let tier_a = cfg.planted_slurs - tier_b;
    let slurs: Vec<PlantedSlur> = slur_terms
        .iter()
        .enumerate()
        .map(|(i, t)| PlantedSlur {
            term: t.clone(),
            tier_a: i < tier_a,
            in_embeddings: i % 2 == 0,
        })
        .collect();

    // Pattern words come from mid-frequency ranks so neither word alone is
    // indicative.
    let lo = cfg.pattern_min_rank.min(cfg.vocab_size / 4);
    let mut mid: Vec<usize> = (lo..(lo + 8 * cfg.implicit_patterns).min(cfg.vocab_size)).collect();
    mid.shuffle(&mut rng);
    let patterns: Vec<(usize, usize)> = (0..cfg.implicit_patterns).map(|p| (mid[2 * p], mid[2 * p + 1])).collect();
    let mut pattern_of = HashMap::new();
    for (p, &(a, b)) in patterns.iter().enumerate() {
        pattern_of.insert(a, p);
        pattern_of.insert(b, p);
    }

    let handles: Vec<String> = (0..40).map(|_| pseudo_word(&mut rng, 3)).collect();
    let embeddings = build_embeddings(&mut rng, cfg, &vocab, &slurs)?;

    let mut g = Generator {
        rng,
        zipf: Zipf::new(cfg.vocab_size),
        vocab,
        pattern_of,
        patterns,
        handles,
    };

    let mut docs: Vec<(Vec<String>, DocKind)> = Vec::new();

    // Seed documents, each tier-A slur spread over exactly
    // `seed_cooccurrence` of them.
    let n_seed = ((cfg.docs as f64 * cfg.seed_fraction).round() as usize).max(cfg.seed_cooccurrence).max(1);
    let mut seed_docs: Vec<Vec<String>> = (0..n_seed)
        .map(|_| {
            let len = g.doc_len();
            let mut t = g.filler(len);
            let base = SEED_TERMS[g.rng.gen_range(0..SEED_TERMS.len())];
            let form = if g.rng.gen_bool(0.25) { inflect(base).into_iter().next_back().unwrap() } else { base.to_string() };
            g.insert_at_random(&mut t, &form);
            t
        })
        .collect();
    for slur in slurs.iter().filter(|s| s.tier_a) {
        for d in rand::seq::index::sample(&mut g.rng, n_seed, cfg.seed_cooccurrence.min(n_seed)) {
            let mut t = std::mem::take(&mut seed_docs[d]);
            g.insert_at_random(&mut t, &slur.term);
            seed_docs[d] = t;
        }
    }
    for mut t in seed_docs {
        if g.rng.gen_bool(cfg.seed_pattern_rate) {
            let p = g.rng.gen_range(0..g.patterns.len());
            g.insert_pattern(&mut t, p);
        }
        docs.push((t, DocKind::Seed));
    }

    // Seed-free explicit documents.
    for slur in &slurs {
        let n = if slur.tier_a { cfg.explicit_per_slur } else { cfg.tier_b_explicit };
        for _ in 0..n {
            let len = g.doc_len();
            let mut t = g.filler(len);
            g.insert_at_random(&mut t, &slur.term);
            if slur.tier_a && g.rng.gen_bool(cfg.explicit_pattern_rate) {
                let p = g.rng.gen_range(0..g.patterns.len());
                g.insert_pattern(&mut t, p);
            }
            docs.push((t, DocKind::Explicit));
        }
    }

    // Implicit documents; the first few of each pattern carry tier-B slurs.
    let tier_b_slurs: Vec<&PlantedSlur> = slurs.iter().filter(|s| !s.tier_a).collect();
    let mut implicit: Vec<Vec<String>> = Vec::new();
    for p in 0..g.patterns.len() {
        for _ in 0..cfg.implicit_per_pattern {
            let len = g.doc_len();
            let mut t = g.filler(len);
            g.insert_pattern(&mut t, p);
            implicit.push(t);
        }
    }
    let total_implicit = implicit.len();
    for slur in &tier_b_slurs {
        for d in rand::seq::index::sample(&mut g.rng, total_implicit, cfg.tier_b_implicit.min(total_implicit)) {
            let mut t = std::mem::take(&mut implicit[d]);
            g.insert_at_random(&mut t, &slur.term);
            implicit[d] = t;
        }
    }
    docs.extend(implicit.into_iter().map(|t| (t, DocKind::Implicit)));

    if docs.len() > cfg.docs {
        return Err(Error::InvalidArgument(format!(
            "{} planted documents exceed the requested {} documents",
            docs.len(),
            cfg.docs
        )));
    }
    while docs.len() < cfg.docs {
        let len = g.doc_len();
        let t = g.filler(len);
        docs.push((t, DocKind::Background));
    }
    docs.shuffle(&mut g.rng);

    let width = cfg.docs.to_string().len();
    let mut records = Vec::with_capacity(docs.len());
    let mut kinds = Vec::with_capacity(docs.len());
    for (i, (tokens, kind)) in docs.into_iter().enumerate() {
        let text = g.render(tokens, kind.is_hateful());
        let ts = g.timestamp(kind.is_hateful());
        records.push(RawRecord { id: format!("syn{i:0width$}"), ts, text });
        kinds.push(kind);
    }

    let validation = build_validation(&mut g, cfg, &slurs);

    Ok(SynthCorpus {
        config: cfg.clone(),
        records,
        kinds,
        slurs,
        patterns: g.patterns.iter().map(|&(a, b)| (g.vocab[a].clone(), g.vocab[b].clone())).collect(),
        embeddings,
        validation,
    })
}

/// Held-out labeled documents: one quarter hateful (mixed kinds), the rest
/// background with a third of those carrying a single pattern word.
fn build_validation(g: &mut Generator, cfg: &SynthConfig, slurs: &[PlantedSlur]) -> Vec<(RawRecord, bool)> {
    let mut out = Vec::with_capacity(cfg.validation_docs);
    for i in 0..cfg.validation_docs {
        let len = g.doc_len();
        let mut t = g.filler(len);
        let hateful = i % 4 == 0;
        if hateful {
            match (i / 4) % 3 {
                0 => {
                    let base = SEED_TERMS[g.rng.gen_range(0..SEED_TERMS.len())];
                    g.insert_at_random(&mut t, base);
                }
                1 => {
                    let s = slurs[g.rng.gen_range(0..slurs.len())].term.clone();
                    g.insert_at_random(&mut t, &s);
                }
                _ => {
                    let p = g.rng.gen_range(0..g.patterns.len());
                    g.insert_pattern(&mut t, p);
                }
            }
        } else if i % 3 == 0 {
            let p = g.rng.gen_range(0..g.patterns.len());
            let (a, b) = g.pattern_words(p);
            let w = if g.rng.gen_bool(0.5) { a } else { b };
            g.insert_at_random(&mut t, &w);
        }
        let text = g.render(t, hateful);
        let ts = g.timestamp(hateful);
        out.push((RawRecord { id: format!("val{i:05}"), ts, text }, hateful));
    }
    out
}

fn build_embeddings<R: Rng>(
    rng: &mut R,
    cfg: &SynthConfig,
    vocab: &[String],
    slurs: &[PlantedSlur],
) -> Result<EmbeddingTable> {
    let d = cfg.dimension;
    let vector = |hate: f64, rng: &mut R| -> Vec<f64> {
        (0..d)
            .map(|j| match j {
                0 => hate + rng.gen_range(-0.05..0.05),
                _ => rng.gen_range(-0.5..0.5),
            })
            .collect()
    };
    // BTreeMap keeps the dump order stable.
    let mut rows: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for w in vocab {
        rows.insert(w.clone(), vector(0.0, rng));
    }
    for t in SPECIAL_TOKENS {
        rows.insert(t.to_string(), vector(0.0, rng));
    }
    for base in SEED_TERMS {
        for form in inflect(base) {
            rows.insert(form, vector(1.0, rng));
        }
    }
    for s in slurs.iter().filter(|s| s.in_embeddings) {
        rows.insert(s.term.clone(), vector(1.0, rng));
    }
    EmbeddingTable::from_pairs(d, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon;

    fn small() -> SynthConfig {
        SynthConfig { docs: 20_000, vocab_size: 1500, validation_docs: 40, ..SynthConfig::default() }
    }

    #[test]
    fn deterministic() {
        let a = generate(&small()).unwrap();
        let b = generate(&small()).unwrap();
        assert_eq!(a, b);
        let c = generate(&SynthConfig { seed: 8, ..small() }).unwrap();
        assert_ne!(a.records, c.records);
    }

    #[test]
    fn planted_counts() {
        let cfg = small();
        let s = generate(&cfg).unwrap();
        assert_eq!(s.records.len(), cfg.docs);
        assert_eq!(s.slurs.len(), cfg.planted_slurs);
        assert_eq!(s.count_kind(DocKind::Implicit), cfg.implicit_patterns * cfg.implicit_per_pattern);
        let corpus = s.corpus();
        assert_eq!(corpus.len(), cfg.docs);
        let tier_a = s.slurs.iter().find(|p| p.tier_a).unwrap();
        let seed_lex = lexicon::seed_lexicon();
        let with_seed = corpus
            .documents()
            .iter()
            .filter(|d| d.tokens.contains(&tier_a.term) && lexicon::is_match(d, &seed_lex))
            .count();
        assert_eq!(with_seed, cfg.seed_cooccurrence);
    }

    #[test]
    fn background_never_holds_a_full_pair() {
        let s = generate(&small()).unwrap();
        let corpus = s.corpus();
        for (doc, kind) in corpus.documents().iter().zip(&s.kinds) {
            if *kind == DocKind::Background {
                for (a, b) in &s.patterns {
                    assert!(!(doc.tokens.contains(a) && doc.tokens.contains(b)), "{}", doc.raw_text);
                }
            }
        }
    }

    #[test]
    fn write_and_reload() {
        let s = generate(&small()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        s.write(dir.path()).unwrap();
        assert_eq!(load_truth(dir.path().join("truth.tsv")).unwrap(), s.truth());
        let emb = crate::embedding::load_embeddings(dir.path().join("embeddings.txt")).unwrap();
        assert_eq!(emb.len(), s.embeddings.len());
        let val = crate::evaluation::load_labeled_documents(dir.path().join("validation.csv")).unwrap();
        assert_eq!(val.len(), s.validation.len());
        let run = RunConfig::load(dir.path().join("run.json")).unwrap();
        assert_eq!(run.load_corpus().unwrap().len(), s.records.len());
        assert_eq!(run.rng_seed, s.config.seed);
    }
}
