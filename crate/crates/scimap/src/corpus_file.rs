//! The pipe-delimited corpus format.
//!
//! ```text
//! # doc_id | title | author;author | year [| ref;ref]
//! d1 | Mapping Science Maps | Smith; Jones | 2010
//! ```

use scimap_core::corpus::{ingest, CorpusConfig, DocumentRecord, RawDocument};

use crate::error::{syntax, Result};

/// Splits corpus text into raw rows. Blank lines and `#` comments are skipped.
pub fn parse_raw(text: &str) -> Result<Vec<RawDocument>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let n = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('|').map(str::trim).collect();
        if fields.len() != 4 && fields.len() != 5 {
            return Err(syntax(n, format!("expected 4 or 5 `|`-separated fields, found {}", fields.len())));
        }
        if fields[0].is_empty() {
            return Err(syntax(n, "empty document id"));
        }
        let year =
            fields[3].parse::<i32>().map_err(|_| syntax(n, format!("year `{}` is not an integer", fields[3])))?;
        out.push(RawDocument {
            line: n,
            doc_id: fields[0].to_string(),
            title: fields[1].to_string(),
            authors: split_list(fields[2]),
            references: fields.get(4).map(|f| split_list(f)).unwrap_or_default(),
            year,
        });
    }
    Ok(out)
}

fn split_list(field: &str) -> Vec<String> {
    field.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

/// Parses and normalizes a corpus.
pub fn parse_corpus(text: &str, cfg: &CorpusConfig) -> Result<Vec<DocumentRecord>> {
    Ok(ingest(&parse_raw(text)?, cfg)?)
}
