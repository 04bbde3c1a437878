//! Two-path bootstrapping of a hateful-document labeler.
//!
//! A handful of seed slur terms label an initial pool of documents. Each
//! iteration then grows the pool along two complementary paths: a lexicon
//! learner that mines new indicator terms by relative frequency, and an LSTM
//! classifier retrained on the pool that catches implicit cases without a
//! telltale term. The crate also provides sampling-based evaluation, temporal
//! and top-k reports, and a synthetic corpus generator with ground truth.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod analysis;
pub mod config;
pub mod corpus;
pub mod embedding;
pub mod engine;
pub mod error;
pub mod evaluation;
pub mod lexicon;
pub mod neuralnet;
pub mod synth;

pub use corpus::{Corpus, Document};
pub use embedding::EmbeddingTable;
pub use engine::{BootstrapConfig, LabelPool, Mode};
pub use error::{Error, Result};
pub use lexicon::Lexicon;
pub use neuralnet::{LstmModel, TrainConfig};
