//! Sample-based precision, recall and F1 estimates for five systems run over
//! a 62M-tweet corpus, followed by an annotation round trip.
//!
//! ```text
//! cargo run --example sampled_estimate
//! ```

use twopath::evaluation::{self, estimate, DEFAULT_BASE_RATE};
use twopath::{Corpus, Document};

const CORPUS_SIZE: u64 = 62_000_000;

fn main() -> twopath::Result<()> {
    let rows = [
        ("logistic regression", 88, 1_380_825),
        ("supervised LSTM", 791, 62_226),
        ("weakly supervised LSTM", 419, 483_298),
        ("slur matching", 565, 261_183),
        ("union (two-path)", 422, 509_897),
    ];
    println!("{:<24} {:>9} {:>9} {:>7} {:>7} {:>10}", "system", "precision", "recall", "f1", "tagged", "est. hate");
    for (name, n, tagged) in rows {
        let r = estimate(n, 1000, tagged, CORPUS_SIZE, DEFAULT_BASE_RATE)?;
        println!(
            "{name:<24} {:>9.3} {:>9.3} {:>7.3} {:>7} {:>10.0}",
            r.precision, r.recall_estimate, r.f1, r.tagged_count, r.estimated_hateful
        );
    }

    // Annotation workflow: sample, export for labeling, import, estimate.
    let corpus = Corpus::from_documents((0..50).map(|i| Document::new(format!("t{i}"), None, format!("tweet number {i}"))));
    let tagged: Vec<&str> = corpus.documents().iter().map(|d| d.id.as_str()).collect();
    let sample = evaluation::draw_sample(tagged.iter().copied(), 10, 7)?;
    let dir = std::env::temp_dir().join("twopath-estimate-example");
    std::fs::create_dir_all(&dir).map_err(|e| twopath::Error::Io { path: dir.clone(), source: e })?;
    let path = dir.join("sample.csv");
    evaluation::export_annotation_csv(&sample, &corpus, &path)?;

    // Pretend an annotator marked every even-numbered tweet hateful.
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["id", "text", "label"])?;
    for id in &sample {
        let even = id[1..].parse::<u32>().unwrap() % 2 == 0;
        w.write_record([id.as_str(), corpus.get(id).unwrap().raw_text.as_str(), if even { "1" } else { "0" }])?;
    }
    w.flush().map_err(|e| twopath::Error::Io { path: path.clone(), source: e })?;

    let labeled = evaluation::import_annotation_csv(&path, Some(&sample))?;
    let n = evaluation::count_hateful(&labeled);
    let r = estimate(n, labeled.len() as u64, tagged.len() as u64, 1000, 0.05)?;
    println!("\nannotated {n}/{} hateful -> precision {:.2} recall {:.2} f1 {:.2}", labeled.len(), r.precision, r.recall_estimate, r.f1);
    Ok(())
}
