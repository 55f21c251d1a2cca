//! Plain-text edge lists.
//!
//! One `u v` pair per line, `#` starts a comment. An optional `vertices N`
//! line fixes the vertex count so isolated vertices survive a round trip;
//! otherwise the count is one more than the largest id.

use super::{Graph, Vertex};
use crate::error::{Error, Result};
use std::collections::HashSet;
use std::fmt::Write;

/// Strips a trailing `#` comment and surrounding whitespace.
pub(crate) fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub(crate) fn parse_vertex(tok: &str, line: usize) -> Result<Vertex> {
    tok.parse::<Vertex>()
        .map_err(|_| Error::parse(line, format!("expected a vertex id, found {tok:?}")))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(Vertex, Vertex, usize)> = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "vertices" {
            if toks.len() != 2 || declared.is_some() || !edges.is_empty() {
                return Err(Error::parse(lineno, "misplaced or malformed vertices line"));
            }
            declared = Some(parse_vertex(toks[1], lineno)?);
            continue;
        }
        if toks.len() != 2 {
            return Err(Error::parse(lineno, "expected two vertex ids"));
        }
        let u = parse_vertex(toks[0], lineno)?;
        let v = parse_vertex(toks[1], lineno)?;
        if u == v {
            return Err(Error::parse(lineno, format!("loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(lineno, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v, lineno));
    }
    let max_id = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) => {
            if let Some(&(u, v, line)) = edges.iter().find(|&&(u, v, _)| u.max(v) >= n) {
                return Err(Error::parse(
                    line,
                    format!("edge {u} {v} exceeds the declared {n} vertices"),
                ));
            }
            n
        }
        None => max_id,
    };
    let mut g = Graph::empty(n);
    for (u, v, _) in edges {
        g.add_edge(u, v)?;
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "vertices {}", g.n()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
