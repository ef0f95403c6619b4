//! Deterministic SVG output for maps and animation frames.
//!
//! Every number is printed with three decimals. Coordinates are mapped into
//! the canvas with a 5% margin on each side, y pointing up.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use scimap_core::dynamic::AnimationFrame;
use scimap_core::graph::WeightedGraph;
use scimap_core::layout::Positions;
use scimap_core::stats::degree_centrality;

use crate::error::{Error, Result};

/// Qualitative palette; indices wrap after twelve.
pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78",
];

const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SizeSource {
    #[default]
    Degree,
    WeightedDegree,
    Constant,
}

/// Both `Community` and `Factor` read the node's `cluster` field. Nodes
/// without one are painted with the neutral color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorSource {
    #[default]
    Community,
    Factor,
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisualEncoding {
    pub node_size_source: SizeSource,
    pub node_color_source: ColorSource,
    pub neutral_color: String,
    /// Stroke width for the lightest and heaviest edge.
    pub edge_width: (f64, f64),
    /// Circle radius for the smallest and largest size value.
    pub node_radius: (f64, f64),
    pub width: f64,
    pub height: f64,
    pub labels: bool,
}

impl Default for VisualEncoding {
    fn default() -> Self {
        Self {
            node_size_source: SizeSource::Degree,
            node_color_source: ColorSource::Community,
            neutral_color: "#ffffff".into(),
            edge_width: (0.5, 4.0),
            node_radius: (3.0, 15.0),
            width: 800.0,
            height: 600.0,
            labels: true,
        }
    }
}

fn f3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Affine map from layout coordinates to the canvas, shared by all frames.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Viewport {
    center: [f64; 2],
    scale: f64,
    canvas: [f64; 2],
}

impl Viewport {
    fn fit<'a>(points: impl Iterator<Item = &'a [f64; 2]>, enc: &VisualEncoding) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if lo[0] > hi[0] {
            lo = [0.0; 2];
            hi = [0.0; 2];
        }
        let usable = [enc.width * (1.0 - 2.0 * MARGIN), enc.height * (1.0 - 2.0 * MARGIN)];
        let span = [hi[0] - lo[0], hi[1] - lo[1]];
        let mut scale = f64::INFINITY;
        for k in 0..2 {
            if span[k] > 0.0 {
                scale = scale.min(usable[k] / span[k]);
            }
        }
        if !scale.is_finite() {
            scale = 1.0;
        }
        Self { center: [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0], scale, canvas: [enc.width, enc.height] }
    }

    fn map(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.canvas[0] / 2.0 + (p[0] - self.center[0]) * self.scale,
            self.canvas[1] / 2.0 - (p[1] - self.center[1]) * self.scale,
        ]
    }
}

fn open_document(out: &mut String, enc: &VisualEncoding, title: Option<&str>) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = f3(enc.width),
        h = f3(enc.height)
    )
    .unwrap();
    if let Some(t) = title {
        writeln!(out, "<title>{}</title>", escape(t)).unwrap();
    }
}

/// Radius whose area grows linearly with `value` between the configured
/// extremes.
fn radius(value: f64, max_value: f64, enc: &VisualEncoding) -> f64 {
    let (r0, r1) = enc.node_radius;
    let frac = if max_value > 0.0 { (value / max_value).clamp(0.0, 1.0) } else { 0.5 };
    (r0 * r0 + (r1 * r1 - r0 * r0) * frac).sqrt()
}

fn fill(cluster: Option<usize>, enc: &VisualEncoding) -> String {
    match (enc.node_color_source, cluster) {
        (ColorSource::Constant, _) => PALETTE[0].to_string(),
        (_, Some(c)) => PALETTE[c % PALETTE.len()].to_string(),
        (_, None) => enc.neutral_color.clone(),
    }
}

/// Draws `g` at `pos` (indexed like the graph's nodes).
pub fn render_map(g: &WeightedGraph, pos: &Positions, enc: &VisualEncoding) -> Result<String> {
    if pos.len() < g.node_count() {
        return Err(Error::MissingPosition(g.nodes()[pos.len()].label.clone()));
    }
    let pts = &pos.as_slice()[..g.node_count()];
    let view = Viewport::fit(pts.iter(), enc);
    let sizes = match enc.node_size_source {
        SizeSource::Degree => degree_centrality(g, false),
        SizeSource::WeightedDegree => degree_centrality(g, true),
        SizeSource::Constant => vec![0.0; g.node_count()],
    };
    let max_size = sizes.iter().cloned().fold(0.0, f64::max);

    let mut out = String::new();
    open_document(&mut out, enc, None);

    let (lo, hi) =
        g.edges().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e.weight), hi.max(e.weight)));
    let (w0, w1) = enc.edge_width;
    out.push_str("<g class=\"edges\" stroke=\"#999999\" stroke-linecap=\"round\">\n");
    for e in g.edges() {
        let width = if hi > lo { w0 + (w1 - w0) * (e.weight - lo) / (hi - lo) } else { (w0 + w1) / 2.0 };
        let (a, b) = (view.map(pts[e.a]), view.map(pts[e.b]));
        writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke-width=\"{}\"/>",
            f3(a[0]),
            f3(a[1]),
            f3(b[0]),
            f3(b[1]),
            f3(width)
        )
        .unwrap();
    }
    out.push_str("</g>\n");

    out.push_str("<g class=\"nodes\" stroke=\"#333333\" stroke-width=\"0.750\">\n");
    for (i, node) in g.nodes().iter().enumerate() {
        let c = view.map(pts[i]);
        writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>",
            f3(c[0]),
            f3(c[1]),
            f3(radius(sizes[i], max_size, enc)),
            escape(&fill(node.cluster, enc))
        )
        .unwrap();
    }
    out.push_str("</g>\n");

    if enc.labels {
        write_labels(&mut out, g.nodes().iter().enumerate().map(|(i, n)| (n.label.as_str(), view.map(pts[i]), 1.0)));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn write_labels<'a>(out: &mut String, items: impl Iterator<Item = (&'a str, [f64; 2], f64)>) {
    out.push_str("<g class=\"labels\" font-family=\"sans-serif\" font-size=\"10.000\" text-anchor=\"middle\">\n");
    for (label, p, opacity) in items {
        write!(out, "<text x=\"{}\" y=\"{}\"", f3(p[0]), f3(p[1] - 4.0)).unwrap();
        if opacity < 1.0 {
            write!(out, " opacity=\"{}\"", f3(opacity)).unwrap();
        }
        writeln!(out, ">{}</text>", escape(label)).unwrap();
    }
    out.push_str("</g>\n");
}

/// Looks up each graph node's coordinates by label.
pub fn positions_by_label(g: &WeightedGraph, labels: &[String], pos: &Positions) -> Result<Positions> {
    let index: std::collections::HashMap<&str, usize> =
        labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let pts = g
        .nodes()
        .iter()
        .map(|n| index.get(n.label.as_str()).map(|&i| pos[i]).ok_or_else(|| Error::MissingPosition(n.label.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Positions::new(pts)?)
}

/// One document per frame, all drawn with one viewport fitted to every
/// frame. Construct nodes are drawn as squares.
pub fn render_frames(frames: &[AnimationFrame], enc: &VisualEncoding) -> Result<Vec<String>> {
    let view = Viewport::fit(frames.iter().flat_map(|f| f.nodes.iter().map(|n| &n.position)), enc);
    let r = radius(1.0, 2.0, enc);
    let mut docs = Vec::with_capacity(frames.len());
    for (t, frame) in frames.iter().enumerate() {
        let mut out = String::new();
        open_document(&mut out, enc, Some(&format!("frame {t}")));
        out.push_str("<g class=\"nodes\" stroke=\"#333333\" stroke-width=\"0.750\">\n");
        for n in &frame.nodes {
            let c = view.map(n.position);
            let opacity = if n.opacity < 1.0 { format!(" opacity=\"{}\"", f3(n.opacity)) } else { String::new() };
            let color = escape(&fill(n.cluster, enc));
            if n.construct {
                writeln!(
                    out,
                    "<rect x=\"{}\" y=\"{}\" width=\"{w}\" height=\"{w}\" fill=\"{color}\"{opacity}/>",
                    f3(c[0] - r),
                    f3(c[1] - r),
                    w = f3(2.0 * r)
                )
                .unwrap();
            } else {
                writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{color}\"{opacity}/>",
                    f3(c[0]),
                    f3(c[1]),
                    f3(r)
                )
                .unwrap();
            }
        }
        out.push_str("</g>\n");
        if enc.labels {
            write_labels(&mut out, frame.nodes.iter().map(|n| (n.label.as_str(), view.map(n.position), n.opacity)));
        }
        out.push_str("</svg>\n");
        docs.push(out);
    }
    Ok(docs)
}

/// Writes `<dir>/<prefix>_0000.svg`, `<prefix>_0001.svg`, ...
pub fn write_numbered(dir: &Path, prefix: &str, docs: &[String]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(docs.len());
    for (i, doc) in docs.iter().enumerate() {
        let path = dir.join(format!("{prefix}_{i:04}.svg"));
        std::fs::write(&path, doc)?;
        paths.push(path);
    }
    Ok(paths)
}
