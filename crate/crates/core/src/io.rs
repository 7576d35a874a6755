//! Text formats for graphs and partitions.
//!
//! Edge list: one edge per line as two whitespace-separated labels. Blank
//! lines and lines starting with `#` are ignored; `v <label>` declares a
//! vertex (used for isolated vertices).
//!
//! Partition: one part per line, whitespace-separated labels.

use std::cmp::Ordering;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::partition::Partition;
use crate::vertex_set::VertexSet;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut b = GraphBuilder::new();
    for (line, tokens) in content_lines(text) {
        match tokens.as_slice() {
            ["v", label] => {
                b.vertex(label);
            }
            [u, v] => b.edge(u, v, line)?,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected two labels, found {} tokens", tokens.len()),
                })
            }
        }
    }
    Ok(b.build())
}

/// Edges in input order, then a `v` line for every isolated vertex.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v)).unwrap();
    }
    for v in g.isolated_vertices().iter() {
        writeln!(out, "v {}", g.label(v)).unwrap();
    }
    out
}

pub fn parse_partition(g: &Graph, text: &str) -> Result<Partition> {
    let mut parts = Vec::new();
    for (_, tokens) in content_lines(text) {
        let mut part = VertexSet::with_capacity(g.n());
        for label in tokens {
            let v = g
                .vertex_by_label(label)
                .ok_or_else(|| Error::UnknownVertex(label.to_string()))?;
            if !part.insert(v) {
                return Err(Error::InvalidPartition(format!(
                    "vertex `{label}` listed twice in one part"
                )));
            }
        }
        parts.push(part);
    }
    Partition::new(g.n(), parts).map_err(|e| match e {
        Error::InvalidPartition(msg) => Error::InvalidPartition(relabel_message(g, &msg)),
        other => other,
    })
}

// Partition errors speak in dense indices; files speak in labels.
fn relabel_message(g: &Graph, msg: &str) -> String {
    let mut words: Vec<String> = msg.split(' ').map(str::to_string).collect();
    for i in 1..words.len() {
        if words[i - 1] == "vertex" {
            if let Ok(v) = words[i].parse::<usize>() {
                if v < g.n() {
                    words[i] = format!("`{}`", g.label(v));
                }
            }
        }
    }
    words.join(" ")
}

/// Orders labels numerically when both are integers, otherwise as strings.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

/// Parts as label lists: members sorted by label, parts by their first label.
pub fn labelled_parts(g: &Graph, p: &Partition) -> Vec<Vec<String>> {
    let mut parts: Vec<Vec<String>> = p
        .parts()
        .iter()
        .map(|part| {
            let mut labels: Vec<String> = part.iter().map(|v| g.label(v).to_string()).collect();
            labels.sort_by(|a, b| label_cmp(a, b));
            labels
        })
        .collect();
    parts.sort_by(|a, b| label_cmp(&a[0], &b[0]));
    parts
}

pub fn write_partition(g: &Graph, p: &Partition) -> String {
    let mut out = String::new();
    for part in labelled_parts(g, p) {
        writeln!(out, "{}", part.join(" ")).unwrap();
    }
    out
}
