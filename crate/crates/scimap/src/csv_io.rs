//! CSV layouts shared by the command-line stages.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a
//! write followed by a read reproduces every value bit for bit.

use std::io::{Read, Write};

use scimap_core::dynamic::{AnimationFrame, FrameNode};
use scimap_core::layout::Positions;
use scimap_core::linalg::Matrix;
use scimap_core::matrix::{Measure, OccurrenceMatrix, SimilarityMatrix};
use scimap_core::stats::FactorModel;

use crate::error::{syntax, Error, Result};

/// A matrix with row and column labels, as stored in a matrix CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Matrix,
}

impl LabeledMatrix {
    pub fn from_occurrence(m: &OccurrenceMatrix) -> Self {
        Self { row_labels: m.row_ids().to_vec(), col_labels: m.labels().to_vec(), values: m.values().clone() }
    }

    pub fn from_similarity(m: &SimilarityMatrix) -> Self {
        Self { row_labels: m.labels().to_vec(), col_labels: m.labels().to_vec(), values: m.values().clone() }
    }

    pub fn into_occurrence(self) -> Result<OccurrenceMatrix> {
        Ok(OccurrenceMatrix::new(self.row_labels, self.col_labels, self.values)?)
    }

    /// Row labels must repeat the column labels in the same order.
    pub fn into_similarity(self, measure: Measure) -> Result<SimilarityMatrix> {
        if self.row_labels != self.col_labels {
            return Err(Error::Invalid("row labels differ from column labels; not a square labelled matrix".into()));
        }
        Ok(SimilarityMatrix::new(self.col_labels, self.values, measure)?)
    }
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(r)
}

fn line_of(rec: &csv::StringRecord) -> usize {
    rec.position().map_or(0, |p| p.line() as usize)
}

fn parse_f64(rec: &csv::StringRecord, field: usize) -> Result<f64> {
    let raw = rec.get(field).unwrap_or("");
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(syntax(line_of(rec), format!("`{raw}` is not a finite number"))),
    }
}

fn expect_header(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let h = rdr.headers()?;
    if h.iter().ne(expected.iter().copied()) {
        return Err(syntax(1, format!("expected header `{}`", expected.join(","))));
    }
    Ok(())
}

pub fn write_matrix<W: Write>(w: W, m: &LabeledMatrix) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_field("")?;
    wtr.write_record(&m.col_labels)?;
    for (i, label) in m.row_labels.iter().enumerate() {
        wtr.write_field(label)?;
        wtr.write_record(m.values.row(i).iter().map(|v| v.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_matrix<R: Read>(r: R) -> Result<LabeledMatrix> {
    let mut rdr = reader(r);
    let header = rdr.headers()?.clone();
    if header.is_empty() {
        return Err(syntax(1, "missing header row"));
    }
    let col_labels: Vec<String> = header.iter().skip(1).map(String::from).collect();
    let mut row_labels = Vec::new();
    let mut data = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        row_labels.push(rec[0].to_string());
        for j in 1..rec.len() {
            data.push(parse_f64(&rec, j)?);
        }
    }
    let values = Matrix::from_row_major(row_labels.len(), col_labels.len(), data)?;
    Ok(LabeledMatrix { row_labels, col_labels, values })
}

pub fn write_coordinates<W: Write>(w: W, labels: &[String], pos: &Positions) -> Result<()> {
    if labels.len() != pos.len() {
        return Err(Error::Invalid(format!("{} labels for {} positions", labels.len(), pos.len())));
    }
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["label", "x", "y"])?;
    for (label, p) in labels.iter().zip(pos.as_slice()) {
        wtr.write_record([label.clone(), p[0].to_string(), p[1].to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_coordinates<R: Read>(r: R) -> Result<(Vec<String>, Positions)> {
    let mut rdr = reader(r);
    expect_header(&mut rdr, &["label", "x", "y"])?;
    let mut labels = Vec::new();
    let mut pts = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        labels.push(rec[0].to_string());
        pts.push([parse_f64(&rec, 1)?, parse_f64(&rec, 2)?]);
    }
    Ok((labels, Positions::new(pts)?))
}

const FRAME_HEADER: [&str; 6] = ["t", "label", "x", "y", "opacity", "cluster"];

pub fn write_frames<W: Write>(w: W, frames: &[AnimationFrame]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(FRAME_HEADER)?;
    for (t, frame) in frames.iter().enumerate() {
        for n in &frame.nodes {
            wtr.write_record([
                t.to_string(),
                n.label.clone(),
                n.position[0].to_string(),
                n.position[1].to_string(),
                n.opacity.to_string(),
                n.cluster.map(|c| c.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Frame indices must start at 0 and never decrease.
pub fn read_frames<R: Read>(r: R) -> Result<Vec<AnimationFrame>> {
    let mut rdr = reader(r);
    expect_header(&mut rdr, &FRAME_HEADER)?;
    let mut frames: Vec<AnimationFrame> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = line_of(&rec);
        let t: usize = rec[0].parse().map_err(|_| syntax(line, format!("bad frame index `{}`", &rec[0])))?;
        if t + 1 < frames.len() || t > frames.len() {
            return Err(syntax(line, format!("frame index {t} out of sequence")));
        }
        if t == frames.len() {
            frames.push(AnimationFrame { nodes: Vec::new() });
        }
        let cluster = match &rec[5] {
            "" => None,
            c => Some(c.parse().map_err(|_| syntax(line, format!("bad cluster `{c}`")))?),
        };
        frames[t].nodes.push(FrameNode {
            label: rec[1].to_string(),
            position: [parse_f64(&rec, 2)?, parse_f64(&rec, 3)?],
            opacity: parse_f64(&rec, 4)?,
            cluster,
            construct: false,
        });
    }
    Ok(frames)
}

pub fn write_partition<W: Write>(w: W, labels: &[String], assignment: &[usize]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["label", "community"])?;
    for (label, c) in labels.iter().zip(assignment) {
        wtr.write_record([label.clone(), c.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads the `label` and `community` columns, wherever they sit in the
/// header; other columns are ignored. Empty community cells mean "none".
pub fn read_partition<R: Read>(r: R) -> Result<Vec<(String, Option<usize>)>> {
    let mut rdr = reader(r);
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| syntax(1, format!("header has no `{name}` column")))
    };
    let (label, community) = (col("label")?, col("community")?);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let c = match rec.get(community).unwrap_or("") {
            "" => None,
            raw => Some(raw.parse().map_err(|_| syntax(line_of(&rec), format!("bad community `{raw}`")))?),
        };
        out.push((rec.get(label).unwrap_or("").to_string(), c));
    }
    Ok(out)
}

pub fn write_factors<W: Write>(w: W, model: &FactorModel) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let r = model.factors();
    wtr.write_field("label")?;
    wtr.write_record((1..=r).map(|k| format!("loading_{k}")))?;
    for (i, label) in model.labels().iter().enumerate() {
        wtr.write_field(label)?;
        wtr.write_record(model.loadings().row(i).iter().map(|v| v.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_factors<R: Read>(r: R) -> Result<FactorModel> {
    let mut rdr = reader(r);
    let header = rdr.headers()?.clone();
    let r = header.len().saturating_sub(1);
    let ok = header.get(0) == Some("label")
        && header.iter().skip(1).enumerate().all(|(k, h)| h == format!("loading_{}", k + 1));
    if !ok || r == 0 {
        return Err(syntax(1, "expected header `label,loading_1,...`"));
    }
    let mut labels = Vec::new();
    let mut data = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        labels.push(rec[0].to_string());
        for k in 1..=r {
            data.push(parse_f64(&rec, k)?);
        }
    }
    let loadings = Matrix::from_row_major(labels.len(), r, data)?;
    Ok(FactorModel::from_loadings(labels, loadings)?)
}

pub fn write_trace<W: Write>(w: W, trace: &[f64]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["stress"])?;
    for v in trace {
        wtr.write_record([v.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}
