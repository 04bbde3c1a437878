//! Single-layer LSTM binary classifier trained by backpropagation through time.

mod backward;
pub mod checkpoint;
pub mod gradcheck;
mod model;
mod train;

pub use backward::{backward, batch_loss, loss, Gradients, PROB_CLAMP};
pub use model::{
    init_model, Dense, DropoutMasks, Encoded, LstmModel, Sequence, FORGET_BIAS_INIT, GATE_CELL,
    GATE_FORGET, GATE_INPUT, GATE_OUTPUT, INIT_RANGE,
};
pub use train::{
    mean_loss, predict_batch, score_document, score_encoded, train, Example, TrainConfig,
    TrainReport, Trainer,
};

pub(crate) use train::sort_by_score;

/// Hidden units used by the reference configuration.
pub const DEFAULT_HIDDEN_SIZE: usize = 100;
