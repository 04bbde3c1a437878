//! Seed labeling followed by one round of relative-frequency term mining.
//!
//! ```text
//! cargo run --release --example lexicon_learning
//! ```

use twopath::engine::seed_label;
use twopath::lexicon::{learn_terms, seed_lexicon, LearnThresholds};
use twopath::synth::{self, SynthConfig};

fn main() -> twopath::Result<()> {
    let s = synth::generate(&SynthConfig { docs: 30_000, ..SynthConfig::default() })?;
    let corpus = s.corpus();
    let mut lexicon = seed_lexicon();
    println!("seed lexicon: {} forms", lexicon.len());

    let pool = seed_label(&corpus, &lexicon);
    println!("seed pool: {} of {} documents", pool.len(), corpus.len());

    let learned = learn_terms(pool.documents(&corpus), &corpus, &lexicon, LearnThresholds::default(), 1)?;
    println!("learned {} terms (count >= 10, ratio >= 100):", learned.len());
    for e in learned.iter().take(12) {
        println!("  {:<12} ratio {:>8.1} pool {:>3} corpus {:>3}", e.term, e.score, e.hateful_count, e.unlabeled_count);
    }
    lexicon.extend(learned);

    let planted = s.slurs.iter().filter(|p| lexicon.contains(&p.term)).count();
    println!("planted slurs now in lexicon: {planted}/{}", s.slurs.len());
    Ok(())
}
