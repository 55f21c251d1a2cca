//! Text form of minor models.
//!
//! ```text
//! pattern 4
//! 0 1
//! ...
//! branch 0: 3 4 5
//! path 0 1: 5 9 10
//! ```

use super::MinorModel;
use crate::error::{Error, Result};
use crate::graph::io::{parse_vertex, strip_comment};
use crate::graph::{Graph, Path, Vertex, VertexSet};
use std::fmt::Write;

pub fn write_model(m: &MinorModel) -> String {
    let mut out = String::new();
    writeln!(out, "pattern {}", m.pattern.n()).unwrap();
    for (a, b) in m.pattern.edges() {
        writeln!(out, "{a} {b}").unwrap();
    }
    for (x, set) in m.branch_sets.iter().enumerate() {
        writeln!(out, "branch {x}: {set}").unwrap();
    }
    for ((a, b), p) in m.pattern.edges().into_iter().zip(&m.paths) {
        let vs: Vec<String> = p.vertices().iter().map(|v| v.to_string()).collect();
        writeln!(out, "path {a} {b}: {}", vs.join(" ")).unwrap();
    }
    out
}

fn split_label(line: &str, lineno: usize) -> Result<(Vec<&str>, Vec<&str>)> {
    let (head, tail) = line
        .split_once(':')
        .ok_or_else(|| Error::parse(lineno, "expected `label: vertices`"))?;
    Ok((
        head.split_whitespace().collect(),
        tail.split_whitespace().collect(),
    ))
}

fn vertices(toks: &[&str], lineno: usize) -> Result<Vec<Vertex>> {
    toks.iter().map(|t| parse_vertex(t, lineno)).collect()
}

pub fn parse_model(text: &str) -> Result<MinorModel> {
    let mut pattern: Option<Graph> = None;
    let mut branch: Vec<Option<VertexSet>> = Vec::new();
    let mut paths: Vec<((Vertex, Vertex), Path, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("pattern") {
            if pattern.is_some() {
                return Err(Error::parse(lineno, "second pattern line"));
            }
            let k = parse_vertex(rest.trim(), lineno)?;
            pattern = Some(Graph::empty(k));
            branch = vec![None; k];
            continue;
        }
        let x = pattern
            .as_mut()
            .ok_or_else(|| Error::parse(lineno, "model must start with a pattern line"))?;
        if line.starts_with("branch") {
            let (head, tail) = split_label(line, lineno)?;
            if head.len() != 2 {
                return Err(Error::parse(lineno, "expected `branch x: ...`"));
            }
            let i = parse_vertex(head[1], lineno)?;
            let slot = branch
                .get_mut(i)
                .ok_or_else(|| Error::parse(lineno, format!("no pattern vertex {i}")))?;
            if slot.is_some() {
                return Err(Error::parse(lineno, format!("branch set {i} given twice")));
            }
            let vs = vertices(&tail, lineno)?;
            let set: VertexSet = vs.iter().copied().collect();
            if set.len() != vs.len() {
                return Err(Error::parse(lineno, "branch set repeats a vertex"));
            }
            *slot = Some(set);
        } else if line.starts_with("path") {
            let (head, tail) = split_label(line, lineno)?;
            if head.len() != 3 {
                return Err(Error::parse(lineno, "expected `path a b: ...`"));
            }
            let a = parse_vertex(head[1], lineno)?;
            let b = parse_vertex(head[2], lineno)?;
            let p = Path::new(vertices(&tail, lineno)?)
                .map_err(|e| Error::parse(lineno, e.to_string()))?;
            paths.push(((a.min(b), a.max(b)), p, lineno));
        } else {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::parse(lineno, "expected a pattern edge"));
            }
            let a = parse_vertex(toks[0], lineno)?;
            let b = parse_vertex(toks[1], lineno)?;
            match x.add_edge(a, b) {
                Ok(true) => {}
                Ok(false) => return Err(Error::parse(lineno, "duplicate pattern edge")),
                Err(e) => return Err(Error::parse(lineno, e.to_string())),
            }
        }
    }
    let pattern = pattern.ok_or_else(|| Error::parse(0, "missing pattern line"))?;
    let branch_sets = branch
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| Error::parse(0, format!("missing branch set {i}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut ordered = Vec::new();
    for e in pattern.edges() {
        let mut found = paths.iter().filter(|(k, _, _)| *k == e);
        let (_, p, _) = found
            .next()
            .ok_or_else(|| Error::parse(0, format!("missing path {} {}", e.0, e.1)))?;
        if let Some((_, _, line)) = found.next() {
            return Err(Error::parse(*line, "path given twice"));
        }
        ordered.push(p.clone());
    }
    if let Some((_, _, line)) = paths.iter().find(|(k, _, _)| !pattern.has_edge(k.0, k.1)) {
        return Err(Error::parse(*line, "path for a non-edge of the pattern"));
    }
    Ok(MinorModel::new(pattern, branch_sets, ordered))
}
