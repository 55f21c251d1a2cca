//! Small set and path helpers shared by the K4 steps.

use crate::graph::{bfs, shortest_path, Dist, Graph, Path, Vertex, VertexSet};
use std::collections::HashMap;

/// `N(S)`: vertices outside `S` with a neighbour in `S`.
pub(crate) fn neighborhood(g: &Graph, s: &VertexSet) -> VertexSet {
    let inside = s.mask(g.n());
    let mut out = vec![false; g.n()];
    for &v in s {
        for &x in g.neighbors(v) {
            if !inside[x] {
                out[x] = true;
            }
        }
    }
    VertexSet::from_mask(&out)
}

/// `S ∪ N(S)`.
pub(crate) fn closed(g: &Graph, s: &VertexSet) -> VertexSet {
    s.union(&neighborhood(g, s))
}

/// `d_G(A, B)`; infinite when either side is empty.
pub(crate) fn set_dist(g: &Graph, a: &VertexSet, b: &VertexSet) -> Dist {
    if a.is_empty() || b.is_empty() {
        return Dist::Infinite;
    }
    let d = bfs(g, a.as_slice());
    b.iter().map(|&v| Dist::from_raw(d[v])).min().unwrap()
}

pub(crate) fn far_apart(g: &Graph, a: &VertexSet, b: &VertexSet, k: usize) -> bool {
    match set_dist(g, a, b) {
        Dist::Infinite => true,
        Dist::Finite(d) => d >= k,
    }
}

/// Erases the loops of a walk, keeping its ends.
pub(crate) fn erase_loops(walk: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::with_capacity(walk.len());
    let mut pos: HashMap<Vertex, usize> = HashMap::new();
    for &v in walk {
        if let Some(&i) = pos.get(&v) {
            for u in out.drain(i + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

/// Appends `tail` to `walk`, skipping a repeated joint vertex.
pub(crate) fn extend_walk(walk: &mut Vec<Vertex>, tail: &[Vertex]) {
    let skip = usize::from(!walk.is_empty() && tail.first() == walk.last());
    walk.extend_from_slice(&tail[skip..]);
}

/// The `A`–`B` path inside a walk: from the last `A` vertex before the first
/// `B` vertex, after erasing loops.
pub(crate) fn segment(walk: &[Vertex], a: &[bool], b: &[bool]) -> Option<Path> {
    let w = erase_loops(walk);
    let j = w.iter().position(|&v| b[v])?;
    let i = w[..=j].iter().rposition(|&v| a[v])?;
    Path::new(w[i..=j].to_vec()).ok()
}

/// Shortest `X`–`Y` path using only vertices of `within`.
pub(crate) fn path_within(g: &Graph, x: &VertexSet, y: &VertexSet, within: &VertexSet) -> Option<Path> {
    shortest_path(g, x, y, Some(&within.mask(g.n())))
}

/// Graph on the same vertex ids with the edges of `g` kept by `keep`.
pub(crate) fn edge_subgraph(g: &Graph, keep: impl Fn(Vertex, Vertex) -> bool) -> Graph {
    let mut out = Graph::empty(g.n());
    for u in g.vertices() {
        for &v in g.neighbors(u) {
            if u < v && keep(u, v) {
                out.add_edge(u, v).expect("edges of a simple graph");
            }
        }
    }
    out
}

/// Edges of `g` with both ends in one of the given masks.
pub(crate) fn union_of_induced(g: &Graph, masks: &[&[bool]]) -> Graph {
    edge_subgraph(g, |u, v| masks.iter().any(|m| m[u] && m[v]))
}

/// Indices of `0..len` from the middle outwards.
pub(crate) fn middle_out(len: usize) -> impl Iterator<Item = usize> {
    let mid = len / 2;
    (0..len).map(move |i| if i % 2 == 0 { mid + i / 2 } else { mid - i / 2 - 1 })
        .filter(move |&i| i < len)
}
