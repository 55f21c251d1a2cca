//! Quasi-isometries from decompositions, with an exhaustive checker.
//!
//! A map `φ: V(H) → V(G)` is an `(M, A)`-quasi-isometry when
//! `d_H/M - A ≤ d_G(φh, φh') ≤ M·d_H + A` for all node pairs and every vertex
//! of `G` lies within `A` of the image.

use crate::decomp::{irs, orw, GraphDecomposition};
use crate::error::{Error, Result};
use crate::graph::io::{parse_vertex, strip_comment};
use crate::graph::{bfs, Dist, DistCache, Graph, Vertex, UNREACHED};
use num_rational::Ratio;
use std::fmt::Write;

pub type Rational = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsometry {
    /// `map[h] = φ(h)`.
    pub map: Vec<Vertex>,
    pub m: Rational,
    pub a: Rational,
}

fn as_i64(d: Dist) -> Result<i64> {
    d.finite()
        .map(|x| x as i64)
        .ok_or_else(|| Error::precondition("decomposition has a bag or trace of infinite radius"))
}

/// `φ(h)` is a center of `V_h`, with constants `M = A = max(2·R0, 2·R1)`
/// (and `M` at least one).
pub fn from_decomposition_with_bounds(
    g: &Graph,
    d: &GraphDecomposition,
    r0: usize,
    r1: usize,
) -> Result<QuasiIsometry> {
    let o = orw(g, d);
    let s = irs(d);
    if !o.at_most(r0) || !s.at_most(r1) {
        return Err(Error::precondition(format!(
            "decomposition has radius {o} and spread {s}, above the stated {r0} and {r1}"
        )));
    }
    let gc = DistCache::new(g);
    let map = d
        .bags
        .iter()
        .enumerate()
        .map(|(h, bag)| {
            gc.center(bag)
                .map(|(v, _)| v)
                .ok_or_else(|| Error::precondition(format!("bag {h} is empty")))
        })
        .collect::<Result<Vec<_>>>()?;
    let c = (2 * r0).max(2 * r1) as i64;
    Ok(QuasiIsometry {
        map,
        m: Rational::from_integer(c.max(1)),
        a: Rational::from_integer(c),
    })
}

/// As [`from_decomposition_with_bounds`] with the measured radius and spread.
pub fn from_decomposition(g: &Graph, d: &GraphDecomposition) -> Result<QuasiIsometry> {
    let r0 = as_i64(orw(g, d))? as usize;
    let r1 = as_i64(irs(d))? as usize;
    from_decomposition_with_bounds(g, d, r0, r1)
}

/// Constants of a quasi-inverse `G → H` for an `(M, A)`-quasi-isometry `H → G`.
pub fn invert_constants(m: Rational, a: Rational) -> (Rational, Rational) {
    (m, Rational::from_integer(3) * a * m)
}

/// Checks (Q2) on every vertex and (Q1) on every node pair.
///
/// Infinite distances must match: nodes in different components of `H`
/// map to different components of `G`, and conversely.
pub fn verify_qi(g: &Graph, h: &Graph, q: &QuasiIsometry) -> Result<()> {
    if q.map.len() != h.n() {
        return Err(Error::structural(format!(
            "map has {} entries for {} nodes",
            q.map.len(),
            h.n()
        )));
    }
    if let Some(&v) = q.map.iter().find(|&&v| v >= g.n()) {
        return Err(Error::structural(format!("map names vertex {v} outside G")));
    }
    if q.m <= Rational::from_integer(0) || q.a < Rational::from_integer(0) {
        return Err(Error::structural("constants must satisfy M > 0 and A >= 0"));
    }
    // (Q2) first, naming the vertex farthest from the image.
    let near = bfs(g, &q.map);
    if let Some(v) = g.vertices().max_by_key(|&v| (near[v], std::cmp::Reverse(v))) {
        let d = near[v];
        if d == UNREACHED || Rational::from_integer(d as i64) > q.a {
            return Err(Error::structural(format!(
                "vertex {v} is {} from the image, farther than A",
                Dist::from_raw(d)
            )));
        }
    }
    let gc = DistCache::new(g);
    for x in h.vertices() {
        let dh = bfs(h, &[x]);
        for y in x + 1..h.n() {
            let dg = gc.raw(q.map[x], q.map[y]);
            match (dh[y] == UNREACHED, dg == UNREACHED) {
                (true, true) => continue,
                (true, false) | (false, true) => {
                    return Err(Error::structural(format!(
                        "nodes {x} and {y}: one distance is infinite and the other is not"
                    )))
                }
                _ => {}
            }
            let dhr = Rational::from_integer(dh[y] as i64);
            let dgr = Rational::from_integer(dg as i64);
            if dgr > q.m * dhr + q.a {
                return Err(Error::structural(format!(
                    "nodes {x} and {y}: d_G = {dg} exceeds M*{} + A",
                    dh[y]
                )));
            }
            if dhr / q.m - q.a > dgr {
                return Err(Error::structural(format!(
                    "nodes {x} and {y}: d_G = {dg} is below {}/M - A",
                    dh[y]
                )));
            }
        }
    }
    Ok(())
}

fn write_rational(r: Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(tok: &str, line: usize) -> Result<Rational> {
    let bad = || Error::parse(line, format!("expected a rational, found {tok:?}"));
    match tok.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.parse().map_err(|_| bad())?;
            let q: i64 = q.parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

/// `M A` on the first line, then one `h -> v` line per node.
pub fn write_qi(q: &QuasiIsometry) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", write_rational(q.m), write_rational(q.a)).unwrap();
    for (h, v) in q.map.iter().enumerate() {
        writeln!(out, "{h} -> {v}").unwrap();
    }
    out
}

pub fn parse_qi(text: &str) -> Result<QuasiIsometry> {
    let mut header: Option<(Rational, Rational)> = None;
    let mut entries: Vec<Option<Vertex>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::parse(lineno, "expected the `M A` header"));
            }
            header = Some((parse_rational(toks[0], lineno)?, parse_rational(toks[1], lineno)?));
            continue;
        }
        let (h, v) = line
            .split_once("->")
            .ok_or_else(|| Error::parse(lineno, "expected `h -> v`"))?;
        let h = parse_vertex(h.trim(), lineno)?;
        let v = parse_vertex(v.trim(), lineno)?;
        if entries.len() <= h {
            entries.resize(h + 1, None);
        }
        if entries[h].replace(v).is_some() {
            return Err(Error::parse(lineno, format!("node {h} mapped twice")));
        }
    }
    let (m, a) = header.ok_or_else(|| Error::parse(0, "missing `M A` header"))?;
    let map = entries
        .into_iter()
        .enumerate()
        .map(|(h, v)| v.ok_or_else(|| Error::parse(0, format!("node {h} is not mapped"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuasiIsometry { map, m, a })
}
