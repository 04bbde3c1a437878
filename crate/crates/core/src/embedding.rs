//! Pretrained word vectors in the textual word2vec/GloVe layout.
//!
//! An optional header line `<vocab_size> <dimension>` is followed by one line
//! per word: `word v1 v2 ... vd`. Unknown tokens map to the zero vector.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_LEN: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    words: Vec<String>,
    index: HashMap<String, usize>,
    /// Row-major `words.len() × dimension`.
    vectors: Vec<f64>,
    oov: Vec<f64>,
}

impl EmbeddingTable {
    /// Builds a table from `(word, vector)` pairs. Duplicates keep the first
    /// vector.
    pub fn from_pairs<I>(dimension: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Vec<f64>)>,
    {
        if dimension == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be > 0".into()));
        }
        let mut table = EmbeddingTable {
            dimension,
            words: Vec::new(),
            index: HashMap::new(),
            vectors: Vec::new(),
            oov: vec![0.0; dimension],
        };
        for (word, vector) in pairs {
            if vector.len() != dimension {
                return Err(Error::Dimension {
                    expected: dimension,
                    found: vector.len(),
                });
            }
            table.push(word, &vector);
        }
        Ok(table)
    }

    fn push(&mut self, word: String, vector: &[f64]) {
        if self.index.contains_key(&word) {
            return;
        }
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.vectors.extend_from_slice(vector);
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn row(&self, id: usize) -> &[f64] {
        &self.vectors[id * self.dimension..(id + 1) * self.dimension]
    }

    pub fn vector(&self, word: &str) -> &[f64] {
        match self.id(word) {
            Some(id) => self.row(id),
            None => &self.oov,
        }
    }

    pub fn oov_vector(&self) -> &[f64] {
        &self.oov
    }

    /// Maps tokens to row ids (`None` for OOV), keeping at most `max_len`
    /// tokens from the front.
    pub fn encode(&self, tokens: &[String], max_len: usize) -> TokenIds {
        TokenIds(tokens.iter().take(max_len).map(|t| self.id(t)).collect())
    }

    /// Writes the table with a header line.
    pub fn dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.words.len(), self.dimension)?;
        for (i, word) in self.words.iter().enumerate() {
            write!(w, "{word}")?;
            for v in self.row(i) {
                write!(w, " {v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingTable> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut dimension: Option<usize> = None;
    let mut declared_vocab: Option<usize> = None;
    let mut table: Option<EmbeddingTable> = None;
    let mut body_lines = 0usize;

    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if lineno == 1 && fields.len() == 2 {
            if let (Ok(v), Ok(d)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                if d == 0 {
                    return Err(Error::format(path, lineno, "header dimension is zero"));
                }
                declared_vocab = Some(v);
                dimension = Some(d);
                continue;
            }
        }
        let word = fields[0].to_string();
        let values: Vec<f64> = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::format(path, lineno, format!("bad float: {e}")))?;
        let d = *dimension.get_or_insert(values.len());
        if values.len() != d || d == 0 {
            return Err(Error::format(
                path,
                lineno,
                format!("expected {d} components, found {}", values.len()),
            ));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::format(path, lineno, format!("non-finite component {}", bad + 1)));
        }
        let t = table.get_or_insert_with(|| EmbeddingTable {
            dimension: d,
            words: Vec::new(),
            index: HashMap::new(),
            vectors: Vec::new(),
            oov: vec![0.0; d],
        });
        t.push(word, &values);
        body_lines += 1;
    }

    if let Some(v) = declared_vocab {
        if v != body_lines {
            return Err(Error::format(
                path,
                1,
                format!("header declares {v} words but body has {body_lines}"),
            ));
        }
    }
    match (table, dimension) {
        (Some(t), _) => Ok(t),
        (None, Some(d)) => EmbeddingTable::from_pairs(d, std::iter::empty()),
        (None, None) => Err(Error::Empty("embedding file")),
    }
}

/// Row ids of a token sequence; `None` marks an out-of-vocabulary token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenIds(pub Vec<Option<usize>>);

impl TokenIds {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A pre-padded `max_len × d` input matrix plus the unpadded length.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedded {
    pub max_len: usize,
    pub dimension: usize,
    /// Row-major `max_len × dimension`.
    pub rows: Vec<f64>,
    pub true_len: usize,
}

impl Embedded {
    pub fn row(&self, t: usize) -> &[f64] {
        &self.rows[t * self.dimension..(t + 1) * self.dimension]
    }

    /// Rows holding real tokens, in order.
    pub fn real_rows(&self) -> impl Iterator<Item = &[f64]> {
        (self.max_len - self.true_len..self.max_len).map(move |t| self.row(t))
    }
}

/// Embeds tokens into a fixed-size matrix: truncate from the end to `max_len`,
/// then pre-pad with zero rows.
pub fn embed(tokens: &[String], table: &EmbeddingTable, max_len: usize) -> Result<Embedded> {
    if max_len == 0 {
        return Err(Error::InvalidArgument("max_len must be > 0".into()));
    }
    let d = table.dimension();
    let true_len = tokens.len().min(max_len);
    let mut rows = vec![0.0; max_len * d];
    let offset = max_len - true_len;
    for (t, token) in tokens.iter().take(true_len).enumerate() {
        rows[(offset + t) * d..(offset + t + 1) * d].copy_from_slice(table.vector(token));
    }
    Ok(Embedded {
        max_len,
        dimension: d,
        rows,
        true_len,
    })
}
