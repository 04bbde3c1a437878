//! Trains the LSTM on a toy task: a document is positive when it contains a
//! marker word. Prints the loss curve and scores on held-out strings.
//!
//! ```text
//! cargo run --release --example lstm_training
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twopath::neuralnet::{init_model, score_document, train, TrainConfig};
use twopath::{Document, EmbeddingTable};

fn main() -> twopath::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let words: Vec<String> = (0..40).map(|i| format!("w{i}")).collect();
    let mut rows: Vec<(String, Vec<f64>)> = words
        .iter()
        .map(|w| (w.clone(), (0..4).map(|_| rng.gen_range(-0.5..0.5)).collect()))
        .collect();
    rows.push(("marker".into(), vec![1.0, 0.0, 0.0, 0.0]));
    let table = EmbeddingTable::from_pairs(4, rows)?;

    let mut doc = |i: usize, positive: bool| {
        let mut toks: Vec<&str> = (0..rng.gen_range(3..8)).map(|_| words[rng.gen_range(0..words.len())].as_str()).collect();
        if positive {
            let at = rng.gen_range(0..=toks.len());
            toks.insert(at, "marker");
        }
        Document::new(format!("d{i}"), None, toks.join(" "))
    };
    let pos: Vec<Document> = (0..40).map(|i| doc(i, true)).collect();
    let neg: Vec<Document> = (40..440).map(|i| doc(i, false)).collect();

    let cfg = TrainConfig { epochs: 30, learning_rate: 0.2, batch_size: 8, ..TrainConfig::default() };
    let model = init_model(42, 4, 8)?;
    let (model, report) = train(model, &pos.iter().collect::<Vec<_>>(), &neg.iter().collect::<Vec<_>>(), &cfg, &table)?;
    println!("trained on {} positives, {} negatives", report.positives, report.negatives);
    for (e, l) in report.epoch_losses.iter().enumerate() {
        if e % 5 == 4 {
            println!("  epoch {:>2} loss {l:.4}", e + 1);
        }
    }
    for text in ["w1 w2 marker w3", "w1 w2 w3", "marker", "w7 w8 w9 w10 w11 w12"] {
        let p = score_document(&model, &Document::new("q", None, text), &table, cfg.max_len)?;
        println!("  P(hateful | {text:?}) = {p:.3}");
    }
    Ok(())
}
