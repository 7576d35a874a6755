//! PACE `.td` files.
//!
//! ```text
//! c optional comments
//! s td <bags> <max bag size> <vertices>
//! b <id> <v> <v> ...
//! <id> <id>
//! ```
//!
//! Bag ids run from 1. A wire vertex number is matched against the graph's
//! labels when every label is a non-negative integer; otherwise wire vertex
//! `i` is the graph's `i`-th vertex, counting from 1.

use std::collections::HashMap;
use std::fmt::Write;

use super::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

/// A parsed `.td` file, vertices still in wire numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaceTd {
    pub declared_vertices: u64,
    pub declared_width: usize,
    pub bags: Vec<Vec<u64>>,
    /// Tree edges between 0-based bag positions.
    pub edges: Vec<(usize, usize)>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("expected a number, found `{tok}`")))
}

pub fn parse_td(text: &str) -> Result<PaceTd> {
    let mut header: Option<(usize, usize, u64)> = None;
    let mut bags: Vec<Option<Vec<u64>>> = Vec::new();
    let mut raw_edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first().copied() {
            None | Some("c") => {}
            Some("s") => {
                if header.is_some() {
                    return Err(parse_err(line_no, "second header line"));
                }
                let ["s", "td", nb, mb, nv] = tokens.as_slice() else {
                    return Err(parse_err(line_no, "malformed header, expected `s td <bags> <max bag> <vertices>`"));
                };
                let nb: usize = number(nb, line_no)?;
                header = Some((nb, number(mb, line_no)?, number(nv, line_no)?));
                bags = vec![None; nb];
            }
            Some(_) if header.is_none() => {
                return Err(parse_err(line_no, "content before the `s td` header"));
            }
            Some("b") => {
                let id: usize = number(tokens.get(1).ok_or_else(|| parse_err(line_no, "bag line without id"))?, line_no)?;
                if id == 0 || id > bags.len() {
                    return Err(parse_err(line_no, format!("bag id {id} outside 1..={}", bags.len())));
                }
                if bags[id - 1].is_some() {
                    return Err(parse_err(line_no, format!("bag {id} declared twice")));
                }
                let members = tokens[2..]
                    .iter()
                    .map(|t| number(t, line_no))
                    .collect::<Result<Vec<u64>>>()?;
                bags[id - 1] = Some(members);
            }
            Some(_) => {
                let [a, b] = tokens.as_slice() else {
                    return Err(parse_err(line_no, "expected a tree edge `<id> <id>`"));
                };
                raw_edges.push((line_no, number::<usize>(a, line_no)?, number::<usize>(b, line_no)?));
            }
        }
    }
    let (_, declared_width, declared_vertices) =
        header.ok_or_else(|| parse_err(0, "missing `s td` header"))?;
    let mut edges = Vec::new();
    for (line_no, a, b) in raw_edges {
        for id in [a, b] {
            if id == 0 || id > bags.len() || bags[id - 1].is_none() {
                return Err(parse_err(line_no, format!("tree edge refers to undeclared bag {id}")));
            }
        }
        edges.push((a - 1, b - 1));
    }
    if let Some(missing) = bags.iter().position(Option::is_none) {
        return Err(parse_err(0, format!("bag {} declared in header but never given", missing + 1)));
    }
    let bags: Vec<Vec<u64>> = bags.into_iter().map(Option::unwrap).collect();
    let actual = bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual > declared_width {
        return Err(parse_err(0, format!("bag of size {actual} exceeds declared maximum {declared_width}")));
    }
    // Cycle detection happens here so that parse errors stay parse errors.
    let shape = vec![VertexSet::new(); bags.len()];
    TreeDecomposition::new(shape, edges.clone()).map_err(|e| parse_err(0, e.to_string()))?;
    Ok(PaceTd {
        declared_vertices,
        declared_width,
        bags,
        edges,
    })
}

enum Numbering {
    Labels(HashMap<u64, usize>),
    Dense,
}

fn numbering(g: &Graph) -> Numbering {
    let parsed: Option<HashMap<u64, usize>> = g
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| l.parse::<u64>().ok().map(|x| (x, i)))
        .collect();
    match parsed {
        Some(map) if g.n() > 0 => Numbering::Labels(map),
        _ => Numbering::Dense,
    }
}

impl PaceTd {
    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Maps wire vertices onto `g` (see the module docs).
    pub fn resolve(&self, g: &Graph) -> Result<TreeDecomposition> {
        let numbering = numbering(g);
        let bags = self
            .bags
            .iter()
            .map(|bag| {
                bag.iter()
                    .map(|&x| {
                        let v = match &numbering {
                            Numbering::Labels(map) => map.get(&x).copied(),
                            Numbering::Dense => (x as usize).checked_sub(1).filter(|&v| v < g.n()),
                        };
                        v.ok_or_else(|| Error::UnknownVertex(x.to_string()))
                    })
                    .collect::<Result<VertexSet>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TreeDecomposition::new(bags, self.edges.clone())
    }
}

/// Serialises `td` using the same vertex numbering as [`PaceTd::resolve`].
pub fn write_td(g: &Graph, td: &TreeDecomposition) -> String {
    let numbering = numbering(g);
    let wire = |v: usize| match numbering {
        Numbering::Labels(_) => g.label(v).to_string(),
        Numbering::Dense => (v + 1).to_string(),
    };
    let mut out = String::new();
    let max_bag = td.bags().iter().map(|b| b.len()).max().unwrap_or(0);
    writeln!(out, "s td {} {} {}", td.len(), max_bag, g.n()).unwrap();
    for (i, bag) in td.bags().iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag.iter() {
            write!(out, " {}", wire(v)).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treedecomp::validate;

    #[test]
    fn single_bag() {
        let td = parse_td("s td 1 2 2\nb 1 1 2\n").unwrap();
        assert_eq!(td.bags, vec![vec![1, 2]]);
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn two_bags_with_edge() {
        let td = parse_td("c path\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap();
        assert_eq!(td.width(), 1);
        assert_eq!(td.edges, vec![(0, 1)]);
    }

    #[test]
    fn errors() {
        assert!(parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 3\n").is_err());
        assert!(parse_td("s tw 1 2 2\nb 1 1 2\n").is_err());
        assert!(parse_td("b 1 1 2\n").is_err());
        assert!(parse_td("s td 2 2 3\nb 1 1 2\n").is_err());
        assert!(parse_td("s td 3 1 3\nb 1 1\nb 2 2\nb 3 3\n1 2\n2 3\n3 1\n").is_err());
        assert!(parse_td("s td 1 1 2\nb 1 1 2\n").is_err());
    }

    #[test]
    fn numeric_labels_are_wire_numbers() {
        let g = crate::io::parse_edge_list("2 3\n1 2\n").unwrap();
        let td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap().resolve(&g).unwrap();
        assert!(validate(&g, &td).is_empty());
        let again = parse_td(&write_td(&g, &td)).unwrap().resolve(&g).unwrap();
        assert_eq!(again, td);
    }

    #[test]
    fn symbolic_labels_use_positions() {
        let g = crate::io::parse_edge_list("a b\nb c\n").unwrap();
        let td = parse_td("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n").unwrap().resolve(&g).unwrap();
        assert!(validate(&g, &td).is_empty());
        assert!(parse_td("s td 1 1 4\nb 1 4\n").unwrap().resolve(&g).is_err());
    }
}
