//! Document records and the variable universe derived from them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Tokenization and time-slicing settings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusConfig {
    /// Lowercase words removed from titles.
    pub stopwords: BTreeSet<String>,
    /// Tokens with fewer characters are dropped.
    pub min_token_length: usize,
    /// Number of consecutive years folded into one time slice.
    pub slice_years: u32,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { stopwords: BTreeSet::new(), min_token_length: 1, slice_years: 1 }
    }
}

impl CorpusConfig {
    pub fn with_stopwords<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.stopwords = words.into_iter().map(|w| lowercase(w.as_ref().trim())).collect();
        self
    }
}

/// A document as read from an input row, before normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDocument {
    /// 1-based source line, used in diagnostics.
    pub line: usize,
    pub doc_id: String,
    pub title: String,
    pub authors: Vec<String>,
    pub references: Vec<String>,
    pub year: i32,
}

/// One bibliographic unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentRecord {
    pub doc_id: String,
    pub title_tokens: Vec<String>,
    pub authors: Vec<String>,
    pub references: Vec<String>,
    pub year: i32,
    pub time_slice: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VariableKind {
    Word,
    Author,
    Reference,
}

impl VariableKind {
    pub const ALL: [VariableKind; 3] = [VariableKind::Word, VariableKind::Author, VariableKind::Reference];

    pub fn as_str(self) -> &'static str {
        match self {
            VariableKind::Word => "word",
            VariableKind::Author => "author",
            VariableKind::Reference => "reference",
        }
    }

    fn labels(self, doc: &DocumentRecord) -> &[String] {
        match self {
            VariableKind::Word => &doc.title_tokens,
            VariableKind::Author => &doc.authors,
            VariableKind::Reference => &doc.references,
        }
    }
}

impl fmt::Display for VariableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for VariableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().trim_end_matches('s') {
            "word" => Ok(VariableKind::Word),
            "author" => Ok(VariableKind::Author),
            "reference" | "ref" => Ok(VariableKind::Reference),
            other => Err(Error::InvalidArgument(alloc::format!("unknown variable kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub label: String,
    pub kind: VariableKind,
    /// Number of distinct documents the variable occurs in.
    pub doc_frequency: usize,
}

/// Ordered set of variables that become matrix columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableUniverse {
    entries: Vec<Variable>,
    index: BTreeMap<(VariableKind, String), usize>,
}

impl VariableUniverse {
    pub fn entries(&self) -> &[Variable] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, kind: VariableKind, label: &str) -> Option<usize> {
        self.index.get(&(kind, label.to_string())).copied()
    }

    /// Column labels, suffixed with the kind only where the same label is
    /// used by more than one kind.
    pub fn display_labels(&self) -> Vec<String> {
        let mut kinds_per_label: BTreeMap<&str, usize> = BTreeMap::new();
        for v in &self.entries {
            *kinds_per_label.entry(v.label.as_str()).or_default() += 1;
        }
        self.entries
            .iter()
            .map(|v| {
                if kinds_per_label[v.label.as_str()] > 1 {
                    alloc::format!("{} ({})", v.label, v.kind)
                } else {
                    v.label.clone()
                }
            })
            .collect()
    }
}

pub(crate) fn lowercase(s: &str) -> String {
    s.chars().flat_map(char::to_lowercase).collect()
}

/// Splits a title into lowercase alphanumeric tokens, dropping stopwords and
/// tokens shorter than the configured minimum.
pub fn tokenize_title(title: &str, cfg: &CorpusConfig) -> Vec<String> {
    title
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(lowercase)
        .filter(|t| t.chars().count() >= cfg.min_token_length.max(1))
        .filter(|t| !cfg.stopwords.contains(t))
        .collect()
}

/// Maps years to contiguous slice indices: years are bucketed by
/// `slice_years` and the distinct buckets ranked from 0.
pub fn assign_time_slices(years: &[i32], slice_years: u32) -> Result<Vec<usize>> {
    if slice_years == 0 {
        return Err(Error::InvalidArgument("slice granularity must be at least one year".into()));
    }
    let Some(&min) = years.iter().min() else {
        return Ok(Vec::new());
    };
    let bucket = |y: i32| (i64::from(y) - i64::from(min)) / i64::from(slice_years);
    let distinct: BTreeSet<i64> = years.iter().map(|&y| bucket(y)).collect();
    let rank: BTreeMap<i64, usize> = distinct.into_iter().enumerate().map(|(r, b)| (b, r)).collect();
    Ok(years.iter().map(|&y| rank[&bucket(y)]).collect())
}

fn clean_names(names: &[String]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    names
        .iter()
        .map(|n| n.trim())
        .filter(|n| !n.is_empty())
        .filter(|n| seen.insert(n.to_string()))
        .map(ToString::to_string)
        .collect()
}

/// Normalizes raw rows into document records and assigns time slices.
pub fn ingest(raw: &[RawDocument], cfg: &CorpusConfig) -> Result<Vec<DocumentRecord>> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in raw {
        if let Some(&first) = seen.get(doc.doc_id.as_str()) {
            return Err(Error::DuplicateDocument { id: doc.doc_id.clone(), first, second: doc.line });
        }
        seen.insert(doc.doc_id.as_str(), doc.line);
    }
    let years: Vec<i32> = raw.iter().map(|d| d.year).collect();
    let slices = assign_time_slices(&years, cfg.slice_years)?;
    Ok(raw
        .iter()
        .zip(slices)
        .map(|(doc, time_slice)| DocumentRecord {
            doc_id: doc.doc_id.trim().to_string(),
            title_tokens: tokenize_title(&doc.title, cfg),
            authors: clean_names(&doc.authors),
            references: clean_names(&doc.references),
            year: doc.year,
            time_slice,
        })
        .collect())
}

/// Collects every variable of the requested kinds that occurs in at least
/// `min_occurrence` distinct documents.
///
/// Entries are grouped by kind (word, author, reference), then sorted by
/// descending document frequency with ties broken lexicographically.
pub fn build_universe(
    docs: &[DocumentRecord],
    kinds: &[VariableKind],
    min_occurrence: usize,
) -> Result<VariableUniverse> {
    if min_occurrence == 0 {
        return Err(Error::InvalidArgument("min_occurrence must be at least 1".into()));
    }
    let kinds: BTreeSet<VariableKind> = kinds.iter().copied().collect();
    let mut entries = Vec::new();
    for &kind in &kinds {
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in docs {
            let distinct: BTreeSet<&str> = kind.labels(doc).iter().map(String::as_str).collect();
            for label in distinct {
                *df.entry(label).or_default() += 1;
            }
        }
        let mut vars: Vec<Variable> = df
            .into_iter()
            .filter(|&(_, n)| n >= min_occurrence)
            .map(|(label, doc_frequency)| Variable { label: label.to_string(), kind, doc_frequency })
            .collect();
        vars.sort_by(|a, b| b.doc_frequency.cmp(&a.doc_frequency).then_with(|| a.label.cmp(&b.label)));
        entries.extend(vars);
    }
    if entries.is_empty() {
        return Err(Error::EmptyUniverse { min_occurrence });
    }
    let index = entries.iter().enumerate().map(|(i, v)| ((v.kind, v.label.clone()), i)).collect();
    Ok(VariableUniverse { entries, index })
}

/// Documents belonging to one time slice.
pub fn slice_documents(docs: &[DocumentRecord], time_slice: usize) -> Vec<DocumentRecord> {
    docs.iter().filter(|d| d.time_slice == time_slice).cloned().collect()
}
