use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::backward::{accumulate, loss, Gradients, Workspace};
use super::model::{DropoutMasks, Encoded, LstmModel, Scratch, Sequence};
use crate::corpus::Document;
use crate::embedding::{EmbeddingTable, TokenIds, DEFAULT_MAX_LEN};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epochs: usize,
    pub input_dropout: f64,
    pub recurrent_dropout: f64,
    pub neg_pos_ratio: usize,
    /// Defaults to `neg_pos_ratio` when unset.
    pub pos_class_weight: Option<f64>,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub confidence_threshold: f64,
    pub clip_norm: f64,
    pub max_len: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            input_dropout: 0.2,
            recurrent_dropout: 0.2,
            neg_pos_ratio: 10,
            pos_class_weight: None,
            learning_rate: 0.05,
            batch_size: 32,
            confidence_threshold: 0.9,
            clip_norm: 5.0,
            max_len: DEFAULT_MAX_LEN,
        }
    }
}

impl TrainConfig {
    pub fn pos_weight(&self) -> f64 {
        self.pos_class_weight.unwrap_or(self.neg_pos_ratio as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if !(0.0..1.0).contains(&self.input_dropout) || !(0.0..1.0).contains(&self.recurrent_dropout) {
            return bad("dropout rates must lie in [0, 1)");
        }
        if !(self.confidence_threshold > 0.0 && self.confidence_threshold < 1.0) {
            return bad("confidence_threshold must lie in (0, 1)");
        }
        if self.batch_size == 0 || self.max_len == 0 {
            return bad("batch_size and max_len must be > 0");
        }
        // Written negated so NaN fails too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.learning_rate > 0.0) || !(self.pos_weight() > 0.0) {
            return bad("learning_rate and pos_class_weight must be > 0");
        }
        Ok(())
    }
}

/// A training example: token ids and a 0/1 label.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub ids: TokenIds,
    pub label: f64,
}

/// Shuffled minibatch gradient descent over a fixed example set.
pub struct Trainer<'a> {
    model: LstmModel,
    table: &'a EmbeddingTable,
    examples: Vec<Example>,
    cfg: TrainConfig,
    rng: ChaCha8Rng,
    order: Vec<usize>,
    grads: Gradients,
    ws: Workspace,
}

impl<'a> Trainer<'a> {
    pub fn new(model: LstmModel, table: &'a EmbeddingTable, examples: Vec<Example>, cfg: TrainConfig) -> Result<Self> {
        cfg.validate()?;
        if table.dimension() != model.input_size {
            return Err(Error::Dimension {
                expected: model.input_size,
                found: table.dimension(),
            });
        }
        if examples.is_empty() {
            return Err(Error::Empty("training examples"));
        }
        // Stream 1 keeps shuffling and dropout independent of initialization.
        let mut rng = ChaCha8Rng::seed_from_u64(model.rng_seed);
        rng.set_stream(1);
        let grads = Gradients::zeros_like(&model);
        let order = (0..examples.len()).collect();
        Ok(Trainer {
            model,
            table,
            examples,
            cfg,
            rng,
            order,
            grads,
            ws: Workspace::new(),
        })
    }

    pub fn model(&self) -> &LstmModel {
        &self.model
    }

    pub fn into_model(self) -> LstmModel {
        self.model
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    /// One pass over the shuffled examples. Returns the mean training loss
    /// under dropout.
    pub fn run_epoch(&mut self) -> Result<f64> {
        self.order.shuffle(&mut self.rng);
        let pos_weight = self.cfg.pos_weight();
        let (d, h) = (self.model.input_size, self.model.hidden_size);
        let mut total = 0.0;
        let order = std::mem::take(&mut self.order);
        for batch in order.chunks(self.cfg.batch_size) {
            self.grads.clear();
            let scale = 1.0 / batch.len() as f64;
            for &i in batch {
                let ex = &self.examples[i];
                let masks = DropoutMasks::sample(
                    &mut self.rng,
                    d,
                    h,
                    self.cfg.input_dropout,
                    self.cfg.recurrent_dropout,
                );
                let seq = Encoded { ids: &ex.ids, table: self.table };
                total += accumulate(
                    &self.model,
                    &seq,
                    ex.label,
                    pos_weight,
                    Some(&masks),
                    scale,
                    &mut self.grads,
                    &mut self.ws,
                );
            }
            self.grads.check_finite()?;
            let norm = self.grads.global_norm();
            if norm > self.cfg.clip_norm {
                self.grads.scale(self.cfg.clip_norm / norm);
            }
            let lr = self.cfg.learning_rate;
            for ((_, p), (_, g)) in self.model.tensors_mut().into_iter().zip(self.grads.tensors()) {
                p.iter_mut().zip(g).for_each(|(p, g)| *p -= lr * g);
            }
        }
        self.order = order;
        Ok(total / self.examples.len() as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub positives: usize,
    pub negatives: usize,
    pub epoch_losses: Vec<f64>,
}

/// Trains `model` on all positives plus `neg_pos_ratio × |positives|`
/// negatives sampled without replacement from `negatives`.
pub fn train(
    model: LstmModel,
    positives: &[&Document],
    negatives: &[&Document],
    cfg: &TrainConfig,
    table: &EmbeddingTable,
) -> Result<(LstmModel, TrainReport)> {
    if positives.is_empty() {
        return Err(Error::Empty("positives"));
    }
    let needed = cfg.neg_pos_ratio * positives.len();
    if negatives.len() < needed {
        return Err(Error::InsufficientNegatives {
            needed,
            available: negatives.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(model.rng_seed);
    rng.set_stream(2);
    let sampled = rand::seq::index::sample(&mut rng, negatives.len(), needed);
    let mut examples: Vec<Example> = positives
        .iter()
        .map(|d| Example { ids: table.encode(&d.tokens, cfg.max_len), label: 1.0 })
        .collect();
    examples.extend(sampled.iter().map(|i| Example {
        ids: table.encode(&negatives[i].tokens, cfg.max_len),
        label: 0.0,
    }));
    let mut trainer = Trainer::new(model, table, examples, cfg.clone())?;
    let mut epoch_losses = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let l = trainer.run_epoch()?;
        log::debug!("epoch {} loss {:.5}", epoch + 1, l);
        epoch_losses.push(l);
    }
    Ok((
        trainer.into_model(),
        TrainReport {
            positives: positives.len(),
            negatives: needed,
            epoch_losses,
        },
    ))
}

/// Mean loss with dropout off.
pub fn mean_loss(model: &LstmModel, examples: &[Example], table: &EmbeddingTable, pos_weight: f64) -> f64 {
    let mut scratch = Scratch::new(model.hidden_size);
    let total: f64 = examples
        .iter()
        .map(|ex| {
            let p = model.forward_fast(&Encoded { ids: &ex.ids, table }, &mut scratch);
            loss(p, ex.label, pos_weight)
        })
        .sum();
    total / examples.len().max(1) as f64
}

/// Scores encoded sequences with dropout off.
pub fn score_encoded(model: &LstmModel, table: &EmbeddingTable, seqs: &[TokenIds]) -> Vec<f64> {
    let mut scratch = Scratch::new(model.hidden_size);
    seqs.iter()
        .map(|ids| model.forward_fast(&Encoded { ids, table }, &mut scratch))
        .collect()
}

pub fn score_document(model: &LstmModel, doc: &Document, table: &EmbeddingTable, max_len: usize) -> Result<f64> {
    let ids = table.encode(&doc.tokens, max_len);
    model.forward(&Encoded { ids: &ids, table })
}

/// Documents scoring at least `threshold`, highest first (ties by id).
pub fn predict_batch(
    model: &LstmModel,
    docs: &[&Document],
    table: &EmbeddingTable,
    threshold: f64,
    max_len: usize,
) -> Result<Vec<(String, f64)>> {
    if table.dimension() != model.input_size {
        return Err(Error::Dimension {
            expected: model.input_size,
            found: table.dimension(),
        });
    }
    let mut scratch = Scratch::new(model.hidden_size);
    let mut out: Vec<(String, f64)> = docs
        .iter()
        .filter_map(|doc| {
            let ids = table.encode(&doc.tokens, max_len);
            let seq = Encoded { ids: &ids, table };
            debug_assert!(seq.steps() <= max_len);
            let p = model.forward_fast(&seq, &mut scratch);
            (p >= threshold).then(|| (doc.id.clone(), p))
        })
        .collect();
    sort_by_score(&mut out);
    Ok(out)
}

pub(crate) fn sort_by_score(v: &mut [(String, f64)]) {
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralnet::model::init_model;

    fn table() -> EmbeddingTable {
        let words = ["good", "bad", "x", "y", "z", "w"];
        EmbeddingTable::from_pairs(
            4,
            words.iter().enumerate().map(|(i, w)| {
                let v = (0..4).map(|j| ((i * 4 + j) as f64 * 1.3).sin()).collect();
                (w.to_string(), v)
            }),
        )
        .unwrap()
    }

    fn docs(prefix: &str, n: usize, with: &str) -> Vec<Document> {
        let fill = ["x", "y", "z", "w"];
        (0..n)
            .map(|i| {
                let mut words: Vec<&str> = (0..5).map(|k| fill[(i + k * 3) % 4]).collect();
                if !with.is_empty() {
                    words.insert(i % 5, with);
                }
                Document::new(format!("{prefix}{i}"), None, words.join(" "))
            })
            .collect()
    }

    #[test]
    fn samples_ratio_negatives() {
        let pos = docs("p", 10, "bad");
        let neg = docs("n", 150, "");
        let pos_refs: Vec<&Document> = pos.iter().collect();
        let neg_refs: Vec<&Document> = neg.iter().collect();
        let cfg = TrainConfig { epochs: 1, ..TrainConfig::default() };
        let model = init_model(1, 4, 3).unwrap();
        let (_, report) = train(model, &pos_refs, &neg_refs, &cfg, &table()).unwrap();
        assert_eq!(report.negatives, 100);

        let model = init_model(1, 4, 3).unwrap();
        let err = train(model, &pos_refs, &neg_refs[..99], &cfg, &table()).unwrap_err();
        assert!(matches!(err, Error::InsufficientNegatives { needed: 100, .. }));

        let model = init_model(1, 4, 3).unwrap();
        assert!(matches!(
            train(model, &[], &neg_refs, &cfg, &table()),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn training_is_deterministic() {
        let pos = docs("p", 8, "bad");
        let neg = docs("n", 100, "good");
        let pos_refs: Vec<&Document> = pos.iter().collect();
        let neg_refs: Vec<&Document> = neg.iter().collect();
        let cfg = TrainConfig { epochs: 2, ..TrainConfig::default() };
        let a = train(init_model(7, 4, 3).unwrap(), &pos_refs, &neg_refs, &cfg, &table()).unwrap();
        let b = train(init_model(7, 4, 3).unwrap(), &pos_refs, &neg_refs, &cfg, &table()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn predict_threshold_and_order() {
        let t = table();
        let m = init_model(2, 4, 3).unwrap();
        let ds = docs("d", 6, "");
        let refs: Vec<&Document> = ds.iter().collect();
        let all = predict_batch(&m, &refs, &t, 0.0, 50).unwrap();
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0].1 >= w[1].1));
        assert!(predict_batch(&m, &[], &t, 0.9, 50).unwrap().is_empty());

        // Threshold rule on known scores.
        let mid = all[2].1;
        let above = predict_batch(&m, &refs, &t, mid, 50).unwrap();
        assert!(above.iter().all(|(_, s)| *s >= mid));
        assert_eq!(above.len(), all.iter().filter(|(_, s)| *s >= mid).count());
    }

    #[test]
    fn padding_amount_does_not_change_scores() {
        let t = table();
        let m = init_model(3, 4, 5).unwrap();
        let d = Document::new("a", None, "good x bad y z");
        let short = crate::embedding::embed(&d.tokens, &t, 20).unwrap();
        let long = crate::embedding::embed(&d.tokens, &t, 50).unwrap();
        assert_eq!(m.forward(&short).unwrap(), m.forward(&long).unwrap());
        assert_eq!(m.forward(&short).unwrap(), score_document(&m, &d, &t, 50).unwrap());
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        assert_eq!(TrainConfig::default().pos_weight(), 10.0);
        let bad = TrainConfig { input_dropout: 1.0, ..TrainConfig::default() };
        assert!(bad.validate().is_err());
        let bad = TrainConfig { confidence_threshold: 1.0, ..TrainConfig::default() };
        assert!(bad.validate().is_err());
    }
}
