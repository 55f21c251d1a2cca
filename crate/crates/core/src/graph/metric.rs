use super::{Dist, Graph, Path, Vertex, VertexSet};
use crate::error::{Error, Result};
use std::collections::VecDeque;

/// Marker for vertices a search did not reach.
pub const UNREACHED: u32 = u32::MAX;

/// Multi-source BFS distances in `g`.
pub fn bfs(g: &Graph, sources: &[Vertex]) -> Vec<u32> {
    bfs_impl(g, sources, None, u32::MAX)
}

/// Multi-source BFS using only vertices with `allowed[v]`.
pub fn bfs_within(g: &Graph, sources: &[Vertex], allowed: &[bool]) -> Vec<u32> {
    bfs_impl(g, sources, Some(allowed), u32::MAX)
}

fn bfs_impl(g: &Graph, sources: &[Vertex], allowed: Option<&[bool]>, limit: u32) -> Vec<u32> {
    let mut d = vec![UNREACHED; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if allowed.is_none_or(|a| a[s]) && d[s] == UNREACHED {
            d[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = d[u];
        if du >= limit {
            continue;
        }
        for &v in g.neighbors(u) {
            if d[v] == UNREACHED && allowed.is_none_or(|a| a[v]) {
                d[v] = du + 1;
                queue.push_back(v);
            }
        }
    }
    d
}

/// `B_G(U, r)`: all vertices within distance `r` of `U`.
pub fn ball(g: &Graph, set: &VertexSet, r: usize) -> VertexSet {
    ball_impl(g, set.as_slice(), r, None)
}

/// Ball measured inside the subgraph induced by `allowed`.
pub fn ball_within(g: &Graph, set: &VertexSet, r: usize, allowed: &[bool]) -> VertexSet {
    ball_impl(g, set.as_slice(), r, Some(allowed))
}

fn ball_impl(g: &Graph, sources: &[Vertex], r: usize, allowed: Option<&[bool]>) -> VertexSet {
    // Bounded search touching only the ball, so small balls in large graphs stay cheap.
    let mut seen = std::collections::HashMap::new();
    let mut queue = VecDeque::new();
    for &s in sources {
        if allowed.is_none_or(|a| a[s]) && !seen.contains_key(&s) {
            seen.insert(s, 0usize);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = seen[&u];
        if du >= r {
            continue;
        }
        for &v in g.neighbors(u) {
            if allowed.is_none_or(|a| a[v]) && !seen.contains_key(&v) {
                seen.insert(v, du + 1);
                queue.push_back(v);
            }
        }
    }
    seen.into_keys().collect()
}

/// Distance between two non-empty sets.
pub fn dist(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<Dist> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("distance to an empty set is undefined"));
    }
    let d = bfs(g, a.as_slice());
    Ok(b.iter()
        .map(|&v| Dist::from_raw(d[v]))
        .min()
        .expect("b is non-empty"))
}

/// Vertex of `g` minimising the largest distance to `set`, with that distance.
///
/// Ties go to the smallest id. `None` for the empty set.
pub fn set_center(g: &Graph, set: &VertexSet) -> Option<(Vertex, Dist)> {
    if set.is_empty() {
        return None;
    }
    let mut ecc = vec![0u32; g.n()];
    for &u in set {
        let d = bfs(g, &[u]);
        for (e, x) in ecc.iter_mut().zip(d) {
            *e = (*e).max(x);
        }
    }
    best_center(&ecc)
}

pub(crate) fn best_center(ecc: &[u32]) -> Option<(Vertex, Dist)> {
    let (v, &e) = ecc
        .iter()
        .enumerate()
        .min_by_key(|&(v, &e)| (e, v))?;
    Some((v, Dist::from_raw(e)))
}

/// `rad_G(U)`: zero for the empty set, infinite if `U` spans components.
pub fn rad_of_set(g: &Graph, set: &VertexSet) -> Dist {
    set_center(g, set).map_or(Dist::Finite(0), |(_, r)| r)
}

/// Whether `G[U]` is connected. The empty set counts as connected.
pub fn is_connected_set(g: &Graph, set: &VertexSet) -> bool {
    let Some(s) = set.first() else {
        return true;
    };
    let d = bfs_within(g, &[s], &set.mask(g.n()));
    set.iter().all(|&v| d[v] != UNREACHED)
}

/// A component of `G - X` together with its attachment data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: VertexSet,
    /// `∂C`: vertices of the component with a neighbour in `X`.
    pub boundary: VertexSet,
    /// `N(C)`: vertices of `X` adjacent to the component.
    pub neighborhood: VertexSet,
}

/// Components of `G - removed`, ordered by smallest vertex.
pub fn components(g: &Graph, removed: &VertexSet) -> Vec<Component> {
    let removed_mask = removed.mask(g.n());
    let keep: Vec<bool> = removed_mask.iter().map(|&b| !b).collect();
    components_of(g, &keep)
        .into_iter()
        .map(|vertices| {
            let mut boundary = Vec::new();
            let mut nb = Vec::new();
            for &v in &vertices {
                let mut on_boundary = false;
                for &w in g.neighbors(v) {
                    if removed_mask[w] {
                        on_boundary = true;
                        nb.push(w);
                    }
                }
                if on_boundary {
                    boundary.push(v);
                }
            }
            Component {
                vertices,
                boundary: VertexSet::from_sorted(boundary),
                neighborhood: nb.into_iter().collect(),
            }
        })
        .collect()
}

/// Vertex sets of the components of `G[allowed]`, ordered by smallest vertex.
pub fn components_of(g: &Graph, allowed: &[bool]) -> Vec<VertexSet> {
    let mut label = vec![usize::MAX; g.n()];
    let mut out = Vec::new();
    for s in g.vertices() {
        if !allowed[s] || label[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[s] = id;
        let mut stack = vec![s];
        let mut members = vec![s];
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if allowed[v] && label[v] == usize::MAX {
                    label[v] = id;
                    stack.push(v);
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(VertexSet::from_sorted(members));
    }
    out
}

/// Shortest `X`–`Y` path, optionally inside the vertices marked `allowed`.
///
/// A shortest such path meets `X` only in its first vertex and `Y` only in
/// its last. The search is deterministic: ties resolve towards smaller ids.
pub fn shortest_path(
    g: &Graph,
    from: &VertexSet,
    to: &VertexSet,
    allowed: Option<&[bool]>,
) -> Option<Path> {
    let n = g.n();
    let target = to.mask(n);
    let ok = |v: Vertex| allowed.is_none_or(|a| a[v]);
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in from {
        if ok(s) {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if target[u] {
            let mut p = vec![u];
            let mut x = u;
            while parent[x] != usize::MAX {
                x = parent[x];
                p.push(x);
            }
            p.reverse();
            return Some(Path::new(p).expect("BFS tree paths are simple"));
        }
        for &v in g.neighbors(u) {
            if !seen[v] && ok(v) {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    None
}
