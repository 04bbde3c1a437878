//! Post-hoc reports over a labeled pool: daily hateful counts and ratios, and
//! the most frequent mentions or hashtags in hateful documents.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, FixedOffset, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::engine::LabelPool;
use crate::error::{Error, Result};

pub const DEFAULT_TOP_K: usize = 30;

/// Day boundaries for bucketing. `Est` is a fixed UTC−5 offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DayZone {
    #[default]
    Utc,
    Est,
}

impl DayZone {
    fn offset(self) -> FixedOffset {
        match self {
            DayZone::Utc => FixedOffset::east_opt(0).unwrap(),
            DayZone::Est => FixedOffset::west_opt(5 * 3600).unwrap(),
        }
    }
}

impl std::str::FromStr for DayZone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "utc" => Ok(DayZone::Utc),
            "est" => Ok(DayZone::Est),
            other => Err(Error::InvalidArgument(format!("unknown timezone `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayBucket {
    pub day: NaiveDate,
    pub hateful_count: u64,
    pub total_count: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalHistogram {
    pub buckets: Vec<DayBucket>,
    /// Documents without a timestamp, excluded from every bucket.
    pub skipped: usize,
}

fn day_of(ts: i64, zone: DayZone) -> Result<NaiveDate> {
    let utc = DateTime::from_timestamp(ts, 0)
        .ok_or_else(|| Error::InvalidArgument(format!("timestamp {ts} out of range")))?;
    Ok(utc.with_timezone(&zone.offset()).date_naive())
}

/// Per-day hateful and total counts covering the corpus date span with no gaps.
pub fn temporal_distribution(pool: &LabelPool, corpus: &Corpus, zone: DayZone) -> Result<TemporalHistogram> {
    let mut days: BTreeMap<NaiveDate, (u64, u64)> = BTreeMap::new();
    let mut skipped = 0;
    for doc in corpus.documents() {
        let Some(ts) = doc.timestamp else {
            skipped += 1;
            continue;
        };
        let slot = days.entry(day_of(ts, zone)?).or_default();
        slot.1 += 1;
        if pool.contains(&doc.id) {
            slot.0 += 1;
        }
    }
    let (Some(&first), Some(&last)) = (days.keys().next(), days.keys().next_back()) else {
        return Err(Error::Empty("timestamped documents"));
    };
    let buckets = first
        .iter_days()
        .take_while(|d| *d <= last)
        .map(|day| {
            let (hateful_count, total_count) = days.get(&day).copied().unwrap_or((0, 0));
            let ratio = if total_count > 0 { hateful_count as f64 / total_count as f64 } else { 0.0 };
            DayBucket { day, hateful_count, total_count, ratio }
        })
        .collect();
    Ok(TemporalHistogram { buckets, skipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Mentions,
    Hashtags,
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mentions" => Ok(Field::Mentions),
            "hashtags" => Ok(Field::Hashtags),
            other => Err(Error::InvalidArgument(format!("unknown field `{other}`"))),
        }
    }
}

/// The `k` most frequent items among pool documents, counted once per
/// document. Ties are broken lexicographically.
pub fn top_k(pool: &LabelPool, corpus: &Corpus, field: Field, k: usize) -> Vec<(String, u64)> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for doc in pool.documents(corpus) {
        let items = match field {
            Field::Mentions => &doc.mentions,
            Field::Hashtags => &doc.hashtags,
        };
        for item in items {
            *counts.entry(item.as_str()).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(String, u64)> = counts.into_iter().map(|(i, c)| (i.to_string(), c)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

pub fn write_temporal_csv<W: Write>(hist: &TemporalHistogram, w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["day", "hateful", "total", "ratio"])?;
    for b in &hist.buckets {
        w.write_record([
            b.day.to_string(),
            b.hateful_count.to_string(),
            b.total_count.to_string(),
            format!("{:.6}", b.ratio),
        ])?;
    }
    w.flush().map_err(|e| Error::io(Path::new("<temporal csv>"), e))
}

pub fn write_top_csv<W: Write>(items: &[(String, u64)], w: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["rank", "item", "count"])?;
    for (rank, (item, count)) in items.iter().enumerate() {
        w.write_record([(rank + 1).to_string(), item.clone(), count.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(Path::new("<top csv>"), e))
}
