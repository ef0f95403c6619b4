//! Pajek `.net` files restricted to undirected edges.
//!
//! ```text
//! *Vertices 3
//! 1 "alpha" 0.100000 0.200000
//! 2 "beta" 0.300000 0.400000
//! 3 "gamma" 0.500000 0.600000
//! *Edges
//! 1 2 0.500000
//! ```
//!
//! A label runs from the first to the last double quote on its line, so
//! labels may themselves contain quotes. Lines starting with `%` are
//! comments.

use std::fmt::Write as _;

use scimap_core::graph::{Node, WeightedGraph};
use scimap_core::layout::Positions;

use crate::error::{syntax, Error, Result};

/// Writes `g` with vertices renumbered in label order (ties keep the graph
/// order). Weights and coordinates use six decimals.
pub fn write_network(g: &WeightedGraph, pos: Option<&Positions>) -> Result<String> {
    let n = g.node_count();
    if let Some(p) = pos {
        if p.len() != n {
            return Err(Error::Invalid(format!("{} positions for {n} vertices", p.len())));
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.nodes()[a].label.cmp(&g.nodes()[b].label));
    let mut file_id = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        file_id[v] = k + 1;
    }

    let mut out = String::new();
    writeln!(out, "*Vertices {n}").unwrap();
    for (k, &v) in order.iter().enumerate() {
        write!(out, "{} \"{}\"", k + 1, g.nodes()[v].label).unwrap();
        if let Some(p) = pos {
            let [x, y] = p[v];
            write!(out, " {} {}", fixed6(x), fixed6(y)).unwrap();
        }
        out.push('\n');
    }
    out.push_str("*Edges\n");
    let mut edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (file_id[e.a], file_id[e.b]);
            (a.min(b), a.max(b), e.weight)
        })
        .collect();
    edges.sort_by_key(|e| (e.0, e.1));
    for (a, b, w) in edges {
        writeln!(out, "{a} {b} {}", fixed6(w)).unwrap();
    }
    Ok(out)
}

fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

#[derive(PartialEq)]
enum Section {
    Start,
    Vertices,
    Edges,
}

/// Parses a network. Positions are returned only when every vertex line
/// carries coordinates.
pub fn read_network(text: &str) -> Result<(WeightedGraph, Option<Positions>)> {
    let mut section = Section::Start;
    let mut declared = 0usize;
    let mut vertices: Vec<Option<(String, Option<[f64; 2]>)>> = Vec::new();
    let mut seen = 0usize;
    let mut pending_edges: Vec<(usize, usize, usize, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('*') {
            let mut parts = rest.split_whitespace();
            let keyword = parts.next().unwrap_or("").to_ascii_lowercase();
            match keyword.as_str() {
                "vertices" if section == Section::Start => {
                    let count = parts.next().ok_or_else(|| syntax(line, "missing vertex count"))?;
                    declared = count.parse().map_err(|_| syntax(line, format!("bad vertex count `{count}`")))?;
                    if parts.next().is_some() {
                        return Err(syntax(line, "two-mode vertex headers are not supported"));
                    }
                    vertices = vec![None; declared];
                    section = Section::Vertices;
                }
                "edges" if section == Section::Vertices => {
                    if seen != declared {
                        return Err(syntax(line, format!("{declared} vertices declared but {seen} listed")));
                    }
                    section = Section::Edges;
                }
                "vertices" | "edges" => return Err(syntax(line, format!("unexpected `*{keyword}` section"))),
                _ => return Err(syntax(line, format!("unsupported section `*{keyword}`"))),
            }
            continue;
        }
        match section {
            Section::Start => return Err(syntax(line, "content before `*Vertices`")),
            Section::Vertices => {
                let (id, label, coords) = parse_vertex(trimmed).map_err(|m| syntax(line, m))?;
                if id == 0 || id > declared {
                    return Err(syntax(line, format!("vertex id {id} outside 1..={declared}")));
                }
                if vertices[id - 1].is_some() {
                    return Err(syntax(line, format!("vertex {id} listed twice")));
                }
                vertices[id - 1] = Some((label, coords));
                seen += 1;
            }
            Section::Edges => {
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                if fields.len() != 2 && fields.len() != 3 {
                    return Err(syntax(line, "expected `u v [weight]`"));
                }
                let endpoint = |s: &str| -> Result<usize> {
                    let v: usize = s.parse().map_err(|_| syntax(line, format!("bad vertex id `{s}`")))?;
                    if v == 0 || v > declared {
                        return Err(syntax(line, format!("edge endpoint {v} is not a declared vertex")));
                    }
                    Ok(v - 1)
                };
                let (a, b) = (endpoint(fields[0])?, endpoint(fields[1])?);
                let w = match fields.get(2) {
                    None => 1.0,
                    Some(s) => s.parse::<f64>().map_err(|_| syntax(line, format!("bad weight `{s}`")))?,
                };
                pending_edges.push((line, a, b, w));
            }
        }
    }
    match section {
        Section::Start => return Err(syntax(1, "missing `*Vertices` header")),
        Section::Vertices if seen != declared => {
            return Err(syntax(text.lines().count(), format!("{declared} vertices declared but {seen} listed")))
        }
        _ => {}
    }

    let vertices: Vec<(String, Option<[f64; 2]>)> = vertices.into_iter().map(Option::unwrap).collect();
    let mut g = WeightedGraph::new(vertices.iter().map(|(l, _)| Node::new(l.clone())).collect());
    for (line, a, b, w) in pending_edges {
        g.add_edge(a, b, w).map_err(|e| syntax(line, e.to_string()))?;
    }
    let pos = if declared > 0 && vertices.iter().all(|(_, c)| c.is_some()) {
        Some(Positions::new(vertices.iter().map(|(_, c)| c.unwrap()).collect())?)
    } else {
        None
    };
    Ok((g, pos))
}

fn parse_vertex(line: &str) -> std::result::Result<(usize, String, Option<[f64; 2]>), String> {
    let (id_str, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
    let id: usize = id_str.parse().map_err(|_| format!("bad vertex id `{id_str}`"))?;
    let rest = rest.trim_start();
    let (label, tail) = if let Some(inner) = rest.strip_prefix('"') {
        let end = inner.rfind('"').ok_or("unterminated label")?;
        (inner[..end].to_string(), &inner[end + 1..])
    } else if rest.is_empty() {
        (id_str.to_string(), "")
    } else {
        let (l, t) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        (l.to_string(), t)
    };
    let nums: Vec<&str> = tail.split_whitespace().collect();
    let coords = match nums.len() {
        0 => None,
        2 | 3 => {
            let parse =
                |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(format!("bad coordinate `{s}`"));
            Some([parse(nums[0])?, parse(nums[1])?])
        }
        _ => return Err(format!("unexpected trailing fields `{}`", tail.trim())),
    };
    Ok((id, label, coords))
}
