//! The two-path bootstrapping loop.
//!
//! Starting from documents matched by the seed lexicon, each iteration runs
//! two learners against the same frozen pool snapshot:
//!
//! * the slur path learns new terms from the pool and matches them against the
//!   unlabeled documents;
//! * the classifier path retrains an LSTM from scratch on the pool (positives)
//!   plus sampled negatives and labels unlabeled documents scoring at least the
//!   confidence threshold.
//!
//! Both addition sets are merged into the pool (slur first), then the loop
//! checks its stopping rule: validation precision below `stop_precision`, no
//! additions from either path, or `max_iterations` reached.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::corpus::{self, Corpus, Document};
use crate::embedding::{EmbeddingTable, TokenIds};
use crate::error::{Error, Result};
use crate::evaluation::LabeledDocument;
use crate::lexicon::{self, LearnThresholds, Lexicon};
use crate::neuralnet::{self, checkpoint, LstmModel, TrainConfig, DEFAULT_HIDDEN_SIZE};

pub const DEFAULT_MAX_ITERATIONS: u32 = 4;
pub const DEFAULT_STOP_PRECISION: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSource {
    Seed,
    Slur,
    Lstm,
}

impl LabelSource {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelSource::Seed => "seed",
            LabelSource::Slur => "slur",
            LabelSource::Lstm => "lstm",
        }
    }
}

impl std::str::FromStr for LabelSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seed" => Ok(LabelSource::Seed),
            "slur" => Ok(LabelSource::Slur),
            "lstm" => Ok(LabelSource::Lstm),
            other => Err(Error::InvalidArgument(format!("unknown label source `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolEntry {
    pub source: LabelSource,
    pub iteration: u32,
    pub score: Option<f64>,
}

/// Automatically labeled hateful documents in admission order. The first
/// labeler of a document wins.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LabelPool {
    entries: IndexMap<String, PoolEntry>,
}

impl LabelPool {
    /// Admits `id` unless already present. Returns whether it was added.
    pub fn insert(&mut self, id: String, entry: PoolEntry) -> bool {
        if self.entries.contains_key(&id) {
            return false;
        }
        self.entries.insert(id, entry);
        true
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    pub fn get(&self, id: &str) -> Option<&PoolEntry> {
        self.entries.get(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PoolEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn count_source(&self, source: LabelSource) -> usize {
        self.entries.values().filter(|e| e.source == source).count()
    }

    /// Pool members present in `corpus`, in admission order.
    pub fn documents<'c>(&self, corpus: &'c Corpus) -> Vec<&'c Document> {
        self.ids().filter_map(|id| corpus.get(id)).collect()
    }
}

/// Every corpus document matching at least one term becomes a seed label.
pub fn seed_label(corpus: &Corpus, lexicon: &Lexicon) -> LabelPool {
    let mut pool = LabelPool::default();
    for doc in corpus.documents() {
        if lexicon::is_match(doc, lexicon) {
            pool.insert(
                doc.id.clone(),
                PoolEntry {
                    source: LabelSource::Seed,
                    iteration: 0,
                    score: None,
                },
            );
        }
    }
    pool
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    TwoPath,
    SlurOnly,
    LstmOnly,
}

impl Mode {
    pub fn uses_slur(self) -> bool {
        matches!(self, Mode::TwoPath | Mode::SlurOnly)
    }

    pub fn uses_lstm(self) -> bool {
        matches!(self, Mode::TwoPath | Mode::LstmOnly)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::TwoPath => "two_path",
            Mode::SlurOnly => "slur_only",
            Mode::LstmOnly => "lstm_only",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_path" => Ok(Mode::TwoPath),
            "slur_only" => Ok(Mode::SlurOnly),
            "lstm_only" => Ok(Mode::LstmOnly),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub mode: Mode,
    pub max_iterations: u32,
    /// `None` disables the validation-precision stopping rule.
    pub stop_precision: Option<f64>,
    pub thresholds: LearnThresholds,
    pub hidden_size: usize,
    pub train: TrainConfig,
    pub rng_seed: u64,
    #[serde(skip)]
    pub validation: Vec<LabeledDocument>,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            mode: Mode::TwoPath,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            stop_precision: Some(DEFAULT_STOP_PRECISION),
            thresholds: LearnThresholds::default(),
            hidden_size: DEFAULT_HIDDEN_SIZE,
            train: TrainConfig::default(),
            rng_seed: 0,
            validation: Vec::new(),
        }
    }
}

impl BootstrapConfig {
    fn validate(&self) -> Result<()> {
        if let Some(p) = self.stop_precision {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidArgument("stop_precision must lie in (0, 1)".into()));
            }
            if self.mode.uses_lstm() && self.validation.is_empty() {
                return Err(Error::InvalidArgument(
                    "stop_precision is set but the validation set is empty".into(),
                ));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be > 0".into()));
        }
        self.train.validate()
    }
}

/// Per-iteration pool growth.
///
/// `new_by_lstm` counts classifier hits not already admitted by the slur path
/// in the same iteration; `overlap` counts those that were. Thus
/// `pool_size_after = pool_size_before + new_by_slur + new_by_lstm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationLog {
    pub iteration: u32,
    pub pool_size_before: usize,
    pub new_by_slur: usize,
    pub new_by_lstm: usize,
    pub overlap: usize,
    pub pool_size_after: usize,
    pub new_terms: usize,
    pub lexicon_size: usize,
    pub validation_precision: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    PrecisionBelowThreshold { iteration: u32, precision: f64 },
    NoAdditions { iteration: u32 },
    MaxIterations { iteration: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub pool: LabelPool,
    pub lexicon: Lexicon,
    pub model: Option<LstmModel>,
    pub logs: Vec<IterationLog>,
    pub stop_reason: StopReason,
}

/// State handed to observers after each iteration.
pub struct IterationSnapshot<'a> {
    pub log: &'a IterationLog,
    pub pool: &'a LabelPool,
    pub lexicon: &'a Lexicon,
    pub model: Option<&'a LstmModel>,
    pub train: &'a TrainConfig,
}

pub trait IterationObserver {
    fn on_seed(&mut self, _pool: &LabelPool, _lexicon: &Lexicon) -> Result<()> {
        Ok(())
    }

    fn on_iteration(&mut self, snapshot: &IterationSnapshot<'_>) -> Result<()>;
}

impl<F> IterationObserver for F
where
    F: FnMut(&IterationSnapshot<'_>) -> Result<()>,
{
    fn on_iteration(&mut self, snapshot: &IterationSnapshot<'_>) -> Result<()> {
        self(snapshot)
    }
}

struct NoObserver;

impl IterationObserver for NoObserver {
    fn on_iteration(&mut self, _: &IterationSnapshot<'_>) -> Result<()> {
        Ok(())
    }
}

/// Seed for the classifier trained at `iteration`. Independent of mode so the
/// first-iteration classifier is shared by all modes.
pub fn iteration_seed(rng_seed: u64, iteration: u32) -> u64 {
    rng_seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(u64::from(iteration).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Fraction of validation documents scoring at least `threshold` that are
/// truly hateful; 1.0 when nothing clears the threshold.
pub fn validation_precision(
    model: &LstmModel,
    validation: &[LabeledDocument],
    table: &EmbeddingTable,
    threshold: f64,
    max_len: usize,
) -> f64 {
    let seqs: Vec<TokenIds> = validation
        .iter()
        .map(|v| table.encode(&v.document.tokens, max_len))
        .collect();
    let scores = neuralnet::score_encoded(model, table, &seqs);
    let (mut flagged, mut correct) = (0usize, 0usize);
    for (v, s) in validation.iter().zip(scores) {
        if s >= threshold {
            flagged += 1;
            correct += usize::from(v.hateful);
        }
    }
    if flagged == 0 {
        1.0
    } else {
        correct as f64 / flagged as f64
    }
}

pub fn run(corpus: &Corpus, table: Option<&EmbeddingTable>, cfg: &BootstrapConfig) -> Result<RunOutcome> {
    run_observed(corpus, table, cfg, &mut NoObserver)
}

pub fn run_observed<O: IterationObserver + ?Sized>(
    corpus: &Corpus,
    table: Option<&EmbeddingTable>,
    cfg: &BootstrapConfig,
    observer: &mut O,
) -> Result<RunOutcome> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let table = match (cfg.mode.uses_lstm(), table) {
        (true, None) => {
            return Err(Error::InvalidArgument("classifier path needs an embedding table".into()))
        }
        (_, t) => t,
    };

    let mut lexicon = lexicon::seed_lexicon();
    let mut pool = seed_label(corpus, &lexicon);
    if pool.is_empty() {
        return Err(Error::Empty("seed pool (no document matches a seed term)"));
    }
    observer.on_seed(&pool, &lexicon)?;

    let encoded: Option<Vec<TokenIds>> = table.map(|t| {
        corpus
            .documents()
            .iter()
            .map(|d| t.encode(&d.tokens, cfg.train.max_len))
            .collect()
    });

    let mut logs = Vec::new();
    let mut model: Option<LstmModel> = None;
    let threshold = cfg.train.confidence_threshold;

    for iteration in 1..=cfg.max_iterations {
        let before = pool.len();
        let snapshot: HashSet<&str> = pool.ids().collect();
        let pool_docs = pool.documents(corpus);

        let mut slur_hits: Vec<&Document> = Vec::new();
        let mut new_terms = 0;
        if cfg.mode.uses_slur() {
            let learned = lexicon::learn_terms(
                pool_docs.iter().copied(),
                corpus,
                &lexicon,
                cfg.thresholds,
                iteration,
            )?;
            new_terms = lexicon.extend(learned);
            slur_hits = corpus
                .documents()
                .iter()
                .filter(|d| !snapshot.contains(d.id.as_str()) && lexicon::is_match(d, &lexicon))
                .collect();
        }

        let mut lstm_hits: Vec<(String, f64)> = Vec::new();
        let mut precision = None;
        if let (true, Some(table), Some(encoded)) = (cfg.mode.uses_lstm(), table, encoded.as_ref()) {
            let seed = iteration_seed(cfg.rng_seed, iteration);
            let fresh = neuralnet::init_model(seed, table.dimension(), cfg.hidden_size)?;
            let negatives: Vec<&Document> = corpus
                .documents()
                .iter()
                .filter(|d| !snapshot.contains(d.id.as_str()))
                .collect();
            let (trained, report) = neuralnet::train(fresh, &pool_docs, &negatives, &cfg.train, table)?;
            log::info!(
                "iteration {iteration}: trained on {} pos / {} neg, final loss {:.4}",
                report.positives,
                report.negatives,
                report.epoch_losses.last().copied().unwrap_or(f64::NAN)
            );

            let unlabeled: Vec<usize> = (0..corpus.len())
                .filter(|&i| !snapshot.contains(corpus.documents()[i].id.as_str()))
                .collect();
            let seqs: Vec<TokenIds> = unlabeled.iter().map(|&i| encoded[i].clone()).collect();
            let scores = neuralnet::score_encoded(&trained, table, &seqs);
            lstm_hits = unlabeled
                .iter()
                .zip(scores)
                .filter(|(_, s)| *s >= threshold)
                .map(|(&i, s)| (corpus.documents()[i].id.clone(), s))
                .collect();
            neuralnet::sort_by_score(&mut lstm_hits);

            if cfg.stop_precision.is_some() {
                precision = Some(validation_precision(
                    &trained,
                    &cfg.validation,
                    table,
                    threshold,
                    cfg.train.max_len,
                ));
            }
            model = Some(trained);
        }

        let mut new_by_slur = 0;
        for doc in &slur_hits {
            if pool.insert(
                doc.id.clone(),
                PoolEntry {
                    source: LabelSource::Slur,
                    iteration,
                    score: None,
                },
            ) {
                new_by_slur += 1;
            }
        }
        let (mut new_by_lstm, mut overlap) = (0, 0);
        for (id, score) in lstm_hits {
            let added = pool.insert(
                id,
                PoolEntry {
                    source: LabelSource::Lstm,
                    iteration,
                    score: Some(score),
                },
            );
            if added {
                new_by_lstm += 1;
            } else {
                overlap += 1;
            }
        }

        let log = IterationLog {
            iteration,
            pool_size_before: before,
            new_by_slur,
            new_by_lstm,
            overlap,
            pool_size_after: pool.len(),
            new_terms,
            lexicon_size: lexicon.len(),
            validation_precision: precision,
        };
        log::info!("{log:?}");
        observer.on_iteration(&IterationSnapshot {
            log: &log,
            pool: &pool,
            lexicon: &lexicon,
            model: model.as_ref(),
            train: &cfg.train,
        })?;
        logs.push(log);

        let stop = match (precision, cfg.stop_precision) {
            (Some(p), Some(limit)) if p < limit => Some(StopReason::PrecisionBelowThreshold {
                iteration,
                precision: p,
            }),
            _ if new_by_slur + new_by_lstm == 0 => Some(StopReason::NoAdditions { iteration }),
            _ if iteration == cfg.max_iterations => Some(StopReason::MaxIterations { iteration }),
            _ => None,
        };
        if let Some(stop_reason) = stop {
            return Ok(RunOutcome {
                pool,
                lexicon,
                model,
                logs,
                stop_reason,
            });
        }
    }
    unreachable!("loop always returns at max_iterations")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentCounts {
    pub intersection: usize,
    pub lstm_only: usize,
    pub slur_only: usize,
}

impl SegmentCounts {
    pub fn lstm_total(&self) -> usize {
        self.intersection + self.lstm_only
    }

    pub fn slur_total(&self) -> usize {
        self.intersection + self.slur_only
    }

    pub fn union_total(&self) -> usize {
        self.intersection + self.lstm_only + self.slur_only
    }
}

/// Splits two tagged sets into mutually exclusive segments.
pub fn segment_counts(slur_tagged: &LabelPool, lstm_tagged: &LabelPool) -> SegmentCounts {
    let intersection = slur_tagged.ids().filter(|id| lstm_tagged.contains(id)).count();
    SegmentCounts {
        intersection,
        lstm_only: lstm_tagged.len() - intersection,
        slur_only: slur_tagged.len() - intersection,
    }
}

/// Applies a finished lexicon and classifier to a corpus, returning the
/// documents each path tags.
pub fn tag_corpus(
    corpus: &Corpus,
    lexicon: &Lexicon,
    model: Option<&LstmModel>,
    table: Option<&EmbeddingTable>,
    train: &TrainConfig,
) -> Result<(LabelPool, LabelPool)> {
    let mut slur = LabelPool::default();
    for doc in corpus.documents() {
        if lexicon::is_match(doc, lexicon) {
            slur.insert(
                doc.id.clone(),
                PoolEntry {
                    source: LabelSource::Slur,
                    iteration: 0,
                    score: None,
                },
            );
        }
    }
    let mut lstm = LabelPool::default();
    if let (Some(model), Some(table)) = (model, table) {
        let docs: Vec<&Document> = corpus.documents().iter().collect();
        for (id, score) in
            neuralnet::predict_batch(model, &docs, table, train.confidence_threshold, train.max_len)?
        {
            lstm.insert(
                id,
                PoolEntry {
                    source: LabelSource::Lstm,
                    iteration: 0,
                    score: Some(score),
                },
            );
        }
    }
    Ok((slur, lstm))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotPaths {
    pub iteration: u32,
    pub pool: PathBuf,
    pub lexicon: PathBuf,
    pub model: Option<PathBuf>,
}

/// Record of a run written as `manifest.json`. Paths are relative to the
/// manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: BootstrapConfig,
    pub corpus_documents: usize,
    pub corpus_dropped: usize,
    pub validation_documents: usize,
    pub iterations: Vec<IterationLog>,
    pub stop_reason: Option<StopReason>,
    pub snapshots: Vec<SnapshotPaths>,
    pub final_pool_size: usize,
    pub final_lexicon_size: usize,
}

impl RunManifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Observer that writes per-iteration pool, lexicon and model snapshots.
pub struct SnapshotWriter {
    root: PathBuf,
    pub snapshots: Vec<SnapshotPaths>,
}

impl SnapshotWriter {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        SnapshotWriter {
            root: root.into(),
            snapshots: Vec::new(),
        }
    }

    fn write(
        &mut self,
        iteration: u32,
        pool: &LabelPool,
        lexicon: &Lexicon,
        model: Option<(&LstmModel, &TrainConfig)>,
    ) -> Result<()> {
        let rel = PathBuf::from(format!("iter_{iteration}"));
        let dir = self.root.join(&rel);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        corpus::save_labeled(pool, dir.join("pool.jsonl"))?;
        lexicon.save(dir.join("lexicon.tsv"))?;
        let model_path = match model {
            Some((m, cfg)) => {
                checkpoint::save(m, cfg, dir.join("model.ckpt"))?;
                Some(rel.join("model.ckpt"))
            }
            None => None,
        };
        self.snapshots.push(SnapshotPaths {
            iteration,
            pool: rel.join("pool.jsonl"),
            lexicon: rel.join("lexicon.tsv"),
            model: model_path,
        });
        Ok(())
    }
}

impl IterationObserver for SnapshotWriter {
    fn on_seed(&mut self, pool: &LabelPool, lexicon: &Lexicon) -> Result<()> {
        self.write(0, pool, lexicon, None)
    }

    fn on_iteration(&mut self, s: &IterationSnapshot<'_>) -> Result<()> {
        self.write(s.log.iteration, s.pool, s.lexicon, s.model.map(|m| (m, s.train)))
    }
}

/// Runs the loop, writing snapshots and `manifest.json` under `out_dir`.
pub fn run_to_dir(
    corpus: &Corpus,
    table: Option<&EmbeddingTable>,
    cfg: &BootstrapConfig,
    out_dir: impl AsRef<Path>,
) -> Result<(RunOutcome, RunManifest)> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut writer = SnapshotWriter::new(out_dir);
    let outcome = run_observed(corpus, table, cfg, &mut writer)?;
    let manifest = RunManifest {
        config: cfg.clone(),
        corpus_documents: corpus.len(),
        corpus_dropped: corpus.dropped_count(),
        validation_documents: cfg.validation.len(),
        iterations: outcome.logs.clone(),
        stop_reason: Some(outcome.stop_reason.clone()),
        snapshots: writer.snapshots,
        final_pool_size: outcome.pool.len(),
        final_lexicon_size: outcome.lexicon.len(),
    };
    let path = out_dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest)?;
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok((outcome, manifest))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool_of(ids: &[&str]) -> LabelPool {
        let mut p = LabelPool::default();
        for id in ids {
            p.insert(
                id.to_string(),
                PoolEntry {
                    source: LabelSource::Slur,
                    iteration: 0,
                    score: None,
                },
            );
        }
        p
    }

    #[test]
    fn pool_first_labeler_wins() {
        let mut p = LabelPool::default();
        let seed = PoolEntry { source: LabelSource::Seed, iteration: 0, score: None };
        let lstm = PoolEntry { source: LabelSource::Lstm, iteration: 1, score: Some(0.95) };
        assert!(p.insert("a".into(), seed));
        assert!(!p.insert("a".into(), lstm));
        assert_eq!(p.get("a").unwrap().source, LabelSource::Seed);
    }

    #[test]
    fn seed_label_matches() {
        let mut docs: Vec<Document> = (0..1000)
            .map(|i| Document::new(format!("d{i}"), None, format!("plain text {i}")))
            .collect();
        for i in [3, 100, 500, 501, 999] {
            docs[i] = Document::new(format!("d{i}"), None, "what a libtard");
        }
        let corpus = Corpus::from_documents(docs);
        let pool = seed_label(&corpus, &lexicon::seed_lexicon());
        assert_eq!(pool.len(), 5);
        assert!(pool.iter().all(|(_, e)| e.source == LabelSource::Seed && e.iteration == 0));
    }

    #[test]
    fn no_seed_hits_is_an_error() {
        let corpus = Corpus::from_documents(vec![Document::new("a", None, "nothing here")]);
        let cfg = BootstrapConfig { mode: Mode::SlurOnly, ..BootstrapConfig::default() };
        assert!(matches!(run(&corpus, None, &cfg), Err(Error::Empty(_))));
    }

    #[test]
    fn lstm_modes_need_validation_when_precision_rule_on() {
        let corpus = Corpus::from_documents(vec![Document::new("a", None, "libtard")]);
        let cfg = BootstrapConfig::default();
        assert!(matches!(run(&corpus, None, &cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn segments() {
        let c = segment_counts(&pool_of(&["a", "b", "c"]), &pool_of(&["b", "c", "d", "e"]));
        assert_eq!(c, SegmentCounts { intersection: 2, lstm_only: 2, slur_only: 1 });
        assert_eq!(c.lstm_total(), 4);
        assert_eq!(c.slur_total(), 3);
        let disjoint = segment_counts(&pool_of(&["a"]), &pool_of(&["b"]));
        assert_eq!(disjoint.intersection, 0);
    }

    #[test]
    fn slur_only_halts_without_new_terms() {
        // Hateful signal beyond the seeds is implicit only: no unigram clears
        // the ratio threshold, so the first iteration adds nothing.
        let mut docs = Vec::new();
        for i in 0..30 {
            docs.push(Document::new(format!("s{i}"), None, "libtard welfare army"));
        }
        for i in 0..3000 {
            docs.push(Document::new(format!("b{i}"), None, "welfare army jobs today"));
        }
        let corpus = Corpus::from_documents(docs);
        let cfg = BootstrapConfig { mode: Mode::SlurOnly, stop_precision: None, ..BootstrapConfig::default() };
        let out = run(&corpus, None, &cfg).unwrap();
        assert_eq!(out.logs.len(), 1);
        assert_eq!(out.stop_reason, StopReason::NoAdditions { iteration: 1 });
        assert_eq!(out.pool.len(), 30);
    }

    #[test]
    fn mode_parse() {
        assert_eq!("two_path".parse::<Mode>().unwrap(), Mode::TwoPath);
        assert!("both".parse::<Mode>().is_err());
    }
}
