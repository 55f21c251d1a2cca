//! Text form of decompositions.
//!
//! ```text
//! nodes 3
//! 0 1
//! 1 2
//! bag 0: 0 1 2
//! bag 1: 2 3
//! bag 2: 3 4
//! ```
//!
//! A partial decomposition adds a `support: ...` line.

use super::{GraphDecomposition, PartialDecomposition};
use crate::error::{Error, Result};
use crate::graph::io::{parse_vertex, strip_comment};
use crate::graph::{Graph, VertexSet};
use std::fmt::Write;

pub fn write_decomposition(d: &GraphDecomposition) -> String {
    let mut out = String::new();
    writeln!(out, "nodes {}", d.node_count()).unwrap();
    for (a, b) in d.graph.edges() {
        writeln!(out, "{a} {b}").unwrap();
    }
    for (h, bag) in d.bags.iter().enumerate() {
        writeln!(out, "bag {h}: {bag}").unwrap();
    }
    out
}

pub fn write_partial(pd: &PartialDecomposition) -> String {
    let mut out = write_decomposition(&pd.inner);
    writeln!(out, "support: {}", pd.support).unwrap();
    out
}

/// Parses either form; `support` is `None` when the line is absent.
pub fn parse_decomposition(text: &str) -> Result<(GraphDecomposition, Option<VertexSet>)> {
    let mut graph: Option<Graph> = None;
    let mut bags: Vec<Option<VertexSet>> = Vec::new();
    let mut support = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("nodes") {
            if graph.is_some() {
                return Err(Error::parse(lineno, "second nodes line"));
            }
            let n = parse_vertex(rest.trim(), lineno)?;
            graph = Some(Graph::empty(n));
            bags = vec![None; n];
            continue;
        }
        let h = graph
            .as_mut()
            .ok_or_else(|| Error::parse(lineno, "decomposition must start with a nodes line"))?;
        let parse_set = |toks: &str| -> Result<VertexSet> {
            let vs = toks
                .split_whitespace()
                .map(|t| parse_vertex(t, lineno))
                .collect::<Result<Vec<_>>>()?;
            let set: VertexSet = vs.iter().copied().collect();
            if set.len() != vs.len() {
                return Err(Error::parse(lineno, "vertex listed twice"));
            }
            Ok(set)
        };
        if let Some(rest) = line.strip_prefix("support:") {
            if support.is_some() {
                return Err(Error::parse(lineno, "second support line"));
            }
            support = Some(parse_set(rest)?);
        } else if let Some(rest) = line.strip_prefix("bag") {
            let (head, tail) = rest
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno, "expected `bag h: ...`"))?;
            let node = parse_vertex(head.trim(), lineno)?;
            let slot = bags
                .get_mut(node)
                .ok_or_else(|| Error::parse(lineno, format!("no node {node}")))?;
            if slot.is_some() {
                return Err(Error::parse(lineno, format!("bag {node} given twice")));
            }
            *slot = Some(parse_set(tail)?);
        } else {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::parse(lineno, "expected an edge of the decomposition graph"));
            }
            let a = parse_vertex(toks[0], lineno)?;
            let b = parse_vertex(toks[1], lineno)?;
            match h.add_edge(a, b) {
                Ok(true) => {}
                Ok(false) => return Err(Error::parse(lineno, format!("duplicate edge {a} {b}"))),
                Err(e) => return Err(Error::parse(lineno, e.to_string())),
            }
        }
    }
    let graph = graph.ok_or_else(|| Error::parse(0, "missing nodes line"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(h, b)| b.ok_or_else(|| Error::parse(0, format!("missing bag {h}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((GraphDecomposition { graph, bags }, support))
}
