//! Generates a planted synthetic corpus and compares the two-path loop with
//! its single-path ablations against ground truth.
//!
//! ```text
//! cargo run --release --example synthetic_bootstrap -- [docs] [seed]
//! ```

use std::time::Instant;

use twopath::engine::{self, Mode};
use twopath::evaluation::exact_evaluate;
use twopath::synth::{self, SynthConfig};

fn main() -> twopath::Result<()> {
    env_logger::init();
    let mut args = std::env::args().skip(1);
    let docs = args.next().map_or(100_000, |a| a.parse().expect("docs"));
    let seed = args.next().map_or(7, |a| a.parse().expect("seed"));

    let t = Instant::now();
    let synth = synth::generate(&SynthConfig { docs, seed, ..SynthConfig::default() })?;
    let corpus = synth.corpus();
    let truth = synth.truth();
    println!(
        "corpus: {} docs, {} hateful, generated in {:.1}s",
        corpus.len(),
        truth.values().filter(|h| **h).count(),
        t.elapsed().as_secs_f64()
    );

    for mode in [Mode::TwoPath, Mode::SlurOnly, Mode::LstmOnly] {
        let t = Instant::now();
        let cfg = synth.bootstrap_config(mode);
        let out = engine::run(&corpus, Some(&synth.embeddings), &cfg)?;
        let report = exact_evaluate(out.pool.ids(), &truth);
        let recovered = synth.slurs.iter().filter(|s| out.lexicon.contains(&s.term)).count();
        println!("\n== {} ({:.1}s) stop: {:?}", mode.as_str(), t.elapsed().as_secs_f64(), out.stop_reason);
        for log in &out.logs {
            println!(
                "  iter {}: before {} +slur {} +lstm {} overlap {} terms {} precision {:?}",
                log.iteration,
                log.pool_size_before,
                log.new_by_slur,
                log.new_by_lstm,
                log.overlap,
                log.new_terms,
                log.validation_precision
            );
        }
        println!(
            "  pool {} | TP {} | P {:.3} R {:.3} F1 {:.3} | planted slurs recovered {}/{}",
            report.tagged,
            report.true_positives,
            report.precision,
            report.recall,
            report.f1,
            recovered,
            synth.slurs.len()
        );
    }
    Ok(())
}
