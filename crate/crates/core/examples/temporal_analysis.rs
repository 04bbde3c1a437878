//! Per-day hateful ratio and top hashtags after a lexicon-only run over a
//! synthetic corpus.
//!
//! ```text
//! cargo run --release --example temporal_analysis
//! ```

use twopath::analysis::{temporal_distribution, top_k, write_temporal_csv, write_top_csv, DayZone, Field};
use twopath::engine::{self, Mode};
use twopath::synth::{self, SynthConfig};

fn main() -> twopath::Result<()> {
    let s = synth::generate(&SynthConfig { docs: 50_000, ..SynthConfig::default() })?;
    let corpus = s.corpus();
    let out = engine::run(&corpus, None, &s.bootstrap_config(Mode::SlurOnly))?;
    let pool = out.pool;
    println!("pool of {} documents", pool.len());

    let hist = temporal_distribution(&pool, &corpus, DayZone::Est)?;
    println!("{} untimestamped documents skipped", hist.skipped);
    write_temporal_csv(&hist, std::io::stdout().lock())?;

    println!();
    write_top_csv(&top_k(&pool, &corpus, Field::Hashtags, 5), std::io::stdout().lock())?;
    Ok(())
}
