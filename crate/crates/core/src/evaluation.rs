//! Sampling-based precision, recall and F1 estimates for a tagged set, plus
//! annotation sample export and import.
//!
//! Precision comes from annotating a uniform sample of the tagged documents.
//! Recall is normalized by an assumed total number of hateful documents,
//! `base_rate × corpus_size`, since the true total is unknown.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};

pub const DEFAULT_SAMPLE_SIZE: usize = 1000;
pub const DEFAULT_BASE_RATE: f64 = 0.006;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall_estimate: f64,
    pub f1: f64,
    pub tagged_count: u64,
    pub estimated_hateful: f64,
    pub corpus_size: u64,
    pub base_rate: f64,
    /// Set when the raw recall estimate exceeded 1 and was capped.
    pub recall_capped: bool,
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

/// Uniform sample of `k` tagged ids without replacement (all of them when
/// fewer than `k` exist). Ids are sorted first so the result depends only on
/// the set and the seed.
pub fn draw_sample<'a, I>(tagged: I, k: usize, seed: u64) -> Result<Vec<String>>
where
    I: IntoIterator<Item = &'a str>,
{
    let ids: Vec<&str> = tagged.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    if ids.is_empty() {
        return Err(Error::Empty("tagged set"));
    }
    let k = k.min(ids.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rand::seq::index::sample(&mut rng, ids.len(), k)
        .iter()
        .map(|i| ids[i].to_string())
        .collect())
}

/// Estimates precision, recall and F1 from `n` hateful documents found in a
/// sample of `k` drawn from `tagged` system-tagged documents.
pub fn estimate(n: u64, k: u64, tagged: u64, corpus_size: u64, base_rate: f64) -> Result<EvalReport> {
    if k == 0 || n > k {
        return Err(Error::InvalidArgument(format!("need 0 <= n <= k and k > 0 (n={n}, k={k})")));
    }
    if tagged < k {
        return Err(Error::InvalidArgument(format!("tagged count {tagged} is smaller than sample size {k}")));
    }
    if !(base_rate.is_finite() && base_rate >= 0.0) {
        return Err(Error::InvalidArgument("base rate must be a non-negative number".into()));
    }
    let total_hateful = base_rate * corpus_size as f64;
    if total_hateful <= 0.0 {
        return Err(Error::InvalidArgument("base_rate × corpus_size must be positive".into()));
    }
    let precision = n as f64 / k as f64;
    let estimated_hateful = precision * tagged as f64;
    let raw_recall = estimated_hateful / total_hateful;
    let recall_capped = raw_recall > 1.0;
    if recall_capped {
        log::warn!("recall estimate {raw_recall:.4} exceeds 1; capping");
    }
    let recall = raw_recall.min(1.0);
    Ok(EvalReport {
        precision,
        recall_estimate: recall,
        f1: f1_score(precision, recall),
        tagged_count: tagged,
        estimated_hateful,
        corpus_size,
        base_rate,
        recall_capped,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct AnnotationRow {
    id: String,
    text: String,
    label: String,
}

/// Writes `id,text,label` rows for the sampled ids with an empty label column.
pub fn export_annotation_csv(sample: &[String], corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path)?;
    for id in sample {
        let doc = corpus
            .get(id)
            .ok_or_else(|| Error::InvalidArgument(format!("sample id `{id}` is not in the corpus")))?;
        w.serialize(AnnotationRow {
            id: id.clone(),
            text: doc.raw_text.clone(),
            label: String::new(),
        })?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub id: String,
    pub text: String,
    pub hateful: bool,
}

/// Reads an annotation file. When `sample` is given every id must belong to
/// it. Labels must be `0` or `1`; errors carry the file line number.
pub fn import_annotation_csv(path: impl AsRef<Path>, sample: Option<&[String]>) -> Result<Vec<Annotation>> {
    let path = path.as_ref();
    let allowed: Option<HashSet<&str>> = sample.map(|s| s.iter().map(String::as_str).collect());
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["id", "text", "label"] {
        return Err(Error::format(path, 1, "header must be `id,text,label`"));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row: AnnotationRow = record.deserialize(Some(&headers))?;
        let hateful = match row.label.trim() {
            "0" => false,
            "1" => true,
            other => return Err(Error::format(path, line, format!("label must be 0 or 1, got `{other}`"))),
        };
        if let Some(allowed) = &allowed {
            if !allowed.contains(row.id.as_str()) {
                return Err(Error::format(path, line, format!("id `{}` is not in the sample", row.id)));
            }
        }
        if !seen.insert(row.id.clone()) {
            return Err(Error::format(path, line, format!("duplicate id `{}`", row.id)));
        }
        out.push(Annotation {
            id: row.id,
            text: row.text,
            hateful,
        });
    }
    Ok(out)
}

/// Number of annotated hateful documents, the `n` of [`estimate`].
pub fn count_hateful(annotations: &[Annotation]) -> u64 {
    annotations.iter().filter(|a| a.hateful).count() as u64
}

/// A document with a known label, used for validation and exact evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDocument {
    pub document: Document,
    pub hateful: bool,
}

/// Loads an annotation file as labeled documents (text is re-normalized).
pub fn load_labeled_documents(path: impl AsRef<Path>) -> Result<Vec<LabeledDocument>> {
    Ok(import_annotation_csv(path, None)?
        .into_iter()
        .map(|a| LabeledDocument {
            document: Document::new(a.id, None, a.text),
            hateful: a.hateful,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    pub tagged: usize,
    pub true_positives: usize,
    pub total_positive: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Exact precision and recall against ground truth, for synthetic corpora.
/// An empty tagged set has precision 0.
pub fn exact_evaluate<'a, I>(tagged: I, truth: &HashMap<String, bool>) -> ExactReport
where
    I: IntoIterator<Item = &'a str>,
{
    let tagged: HashSet<&str> = tagged.into_iter().collect();
    let true_positives = tagged.iter().filter(|id| truth.get(**id).copied().unwrap_or(false)).count();
    let total_positive = truth.values().filter(|&&h| h).count();
    let precision = if tagged.is_empty() { 0.0 } else { true_positives as f64 / tagged.len() as f64 };
    let recall = if total_positive == 0 { 0.0 } else { true_positives as f64 / total_positive as f64 };
    ExactReport {
        tagged: tagged.len(),
        true_positives,
        total_positive,
        precision,
        recall,
        f1: f1_score(precision, recall),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weak_lstm_row() {
        let r = estimate(419, 1000, 483_298, 62_000_000, 0.006).unwrap();
        assert_abs_diff_eq!(r.precision, 0.419);
        assert_abs_diff_eq!(r.recall_estimate, 0.5444, epsilon = 5e-5);
        assert_abs_diff_eq!(r.f1, 0.4735, epsilon = 5e-5);
        assert_eq!(r.estimated_hateful, r.precision * 483_298.0);
    }

    #[test]
    fn union_row() {
        let r = estimate(422, 1000, 509_897, 62_000_000, 0.006).unwrap();
        assert_abs_diff_eq!(r.recall_estimate, 0.5784, epsilon = 5e-5);
        assert_abs_diff_eq!(r.f1, 0.4880, epsilon = 1e-4);
    }

    #[test]
    fn zero_hits() {
        let r = estimate(0, 1000, 5000, 1_000_000, 0.006).unwrap();
        assert_eq!((r.precision, r.recall_estimate, r.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn errors_and_cap() {
        assert!(estimate(1, 10, 100, 0, 0.006).is_err());
        assert!(estimate(11, 10, 100, 1000, 0.006).is_err());
        assert!(estimate(1, 10, 5, 1000, 0.006).is_err());
        let r = estimate(10, 10, 1000, 1000, 0.006).unwrap();
        assert!(r.recall_capped);
        assert_eq!(r.recall_estimate, 1.0);
    }

    #[test]
    fn sampling_clamps_and_repeats() {
        let ids: Vec<String> = (0..10).map(|i| format!("t{i}")).collect();
        let s = draw_sample(ids.iter().map(String::as_str), 1000, 3).unwrap();
        assert_eq!(s.len(), 10);
        let big: Vec<String> = (0..50_000).map(|i| format!("t{i}")).collect();
        let a = draw_sample(big.iter().map(String::as_str), 1000, 9).unwrap();
        let b = draw_sample(big.iter().rev().map(String::as_str), 1000, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().collect::<HashSet<_>>().len(), 1000);
        assert!(draw_sample(std::iter::empty(), 5, 0).is_err());
    }

    #[test]
    fn annotation_round_trip_and_validation() {
        let corpus = Corpus::from_documents(vec![
            Document::new("a", None, "one, \"quoted\" text"),
            Document::new("b", None, "two\nlines"),
        ]);
        let sample = vec!["a".to_string(), "b".to_string()];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        export_annotation_csv(&sample, &corpus, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap().replace(",\n", ",1\n");
        std::fs::write(&path, &text).unwrap();
        let ann = import_annotation_csv(&path, Some(&sample)).unwrap();
        assert_eq!(count_hateful(&ann), 2);
        assert_eq!(ann[1].text, "two\nlines");

        std::fs::write(&path, "id,text,label\na,x,1\nb,y,2\n").unwrap();
        match import_annotation_csv(&path, Some(&sample)) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        std::fs::write(&path, "id,text,label\nzz,x,1\n").unwrap();
        assert!(import_annotation_csv(&path, Some(&sample)).is_err());
    }

    #[test]
    fn exact_mode() {
        let truth: HashMap<String, bool> =
            [("a", true), ("b", true), ("c", false), ("d", true)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let r = exact_evaluate(["a", "c"], &truth);
        assert_eq!(r.true_positives, 1);
        assert_abs_diff_eq!(r.precision, 0.5);
        assert_abs_diff_eq!(r.recall, 1.0 / 3.0);
    }
}
