//! JSON run configuration for the command-line tool.
//!
//! Every key is optional and defaults to the reference setting; unknown keys
//! are rejected. Example:
//!
//! ```json
//! {
//!   "corpus": ["tweets.jsonl"],
//!   "embeddings": "glove.txt",
//!   "validation": "validation.csv",
//!   "mode": "two_path",
//!   "out": "run1",
//!   "rng_seed": 7,
//!   "train": { "epochs": 10, "learning_rate": 0.05 }
//! }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{self, Corpus, CorpusFormat};
use crate::engine::{BootstrapConfig, Mode, DEFAULT_MAX_ITERATIONS, DEFAULT_STOP_PRECISION};
use crate::error::{Error, Result};
use crate::evaluation::LabeledDocument;
use crate::lexicon::{LearnThresholds, DEFAULT_MIN_COUNT, DEFAULT_RATIO_THRESHOLD};
use crate::neuralnet::{TrainConfig, DEFAULT_HIDDEN_SIZE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Vec<PathBuf>,
    pub corpus_format: CorpusFormat,
    pub embeddings: Option<PathBuf>,
    pub validation: Option<PathBuf>,
    pub mode: Mode,
    pub max_iterations: u32,
    /// `null` disables the precision stopping rule.
    pub stop_precision: Option<f64>,
    pub min_count: u64,
    pub ratio_threshold: f64,
    pub hidden_size: usize,
    pub train: TrainConfig,
    pub out: Option<PathBuf>,
    pub rng_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: Vec::new(),
            corpus_format: CorpusFormat::Jsonl,
            embeddings: None,
            validation: None,
            mode: Mode::TwoPath,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            stop_precision: Some(DEFAULT_STOP_PRECISION),
            min_count: DEFAULT_MIN_COUNT,
            ratio_threshold: DEFAULT_RATIO_THRESHOLD,
            hidden_size: DEFAULT_HIDDEN_SIZE,
            train: TrainConfig::default(),
            out: None,
            rng_seed: 0,
        }
    }
}

impl RunConfig {
    /// Parses a config file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)?;
        if let Some(base) = path.parent() {
            cfg.resolve_paths(base);
        }
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.corpus.iter_mut().for_each(fix);
        self.embeddings.iter_mut().for_each(fix);
        self.validation.iter_mut().for_each(fix);
        self.out.iter_mut().for_each(fix);
    }

    /// Reads and concatenates every corpus file; the first occurrence of an
    /// id wins.
    pub fn load_corpus(&self) -> Result<Corpus> {
        if self.corpus.is_empty() {
            return Err(Error::InvalidArgument("no corpus path configured".into()));
        }
        let mut documents = Vec::new();
        for path in &self.corpus {
            let part = corpus::ingest(path, self.corpus_format)?;
            documents.extend(part.documents().iter().cloned());
        }
        Ok(Corpus::from_documents(documents))
    }

    pub fn bootstrap_config(&self, validation: Vec<LabeledDocument>) -> BootstrapConfig {
        BootstrapConfig {
            mode: self.mode,
            max_iterations: self.max_iterations,
            stop_precision: self.stop_precision,
            thresholds: LearnThresholds {
                min_count: self.min_count,
                ratio_threshold: self.ratio_threshold,
            },
            hidden_size: self.hidden_size,
            train: self.train.clone(),
            rng_seed: self.rng_seed,
            validation,
        }
    }
}
