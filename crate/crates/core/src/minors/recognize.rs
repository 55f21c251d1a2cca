use super::Pattern;
use crate::graph::{Graph, Vertex};
use std::collections::BTreeSet;

/// Exact minor-freeness for the fixed small patterns.
///
/// * K3: the graph is a forest.
/// * K4⁻: every block is an edge or a cycle.
/// * K4: series-parallel reduction empties the graph.
pub fn is_minor_free(g: &Graph, pattern: Pattern) -> bool {
    match pattern {
        Pattern::K3 => is_forest(g),
        Pattern::K4Minus => is_cactus(g),
        Pattern::K4 => sp_reduces(g),
    }
}

fn is_forest(g: &Graph) -> bool {
    let comps = crate::graph::components_of(g, &vec![true; g.n()]);
    g.m() + comps.len() == g.n()
}

/// Every block is a single edge or an induced cycle.
pub fn is_cactus(g: &Graph) -> bool {
    blocks(g).into_iter().all(|(nv, ne)| ne == 1 || ne == nv)
}

/// `(vertex count, edge count)` of every block, via an iterative Hopcroft–Tarjan pass.
fn blocks(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<(Vertex, Vertex)> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // Frames: (vertex, parent, next neighbour index).
        let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&(u, parent, idx)) = stack.last() {
            if idx < g.degree(u) {
                let v = g.neighbors(u)[idx];
                stack.last_mut().expect("stack is non-empty").2 += 1;
                if v == parent {
                    continue;
                }
                if disc[v] == usize::MAX {
                    edge_stack.push((u, v));
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    stack.push((v, u, 0));
                } else if disc[v] < disc[u] {
                    edge_stack.push((u, v));
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut verts = Vec::new();
                        let mut ne = 0;
                        while let Some(e) = edge_stack.pop() {
                            ne += 1;
                            verts.push(e.0);
                            verts.push(e.1);
                            if e == (p, u) {
                                break;
                            }
                        }
                        verts.sort_unstable();
                        verts.dedup();
                        out.push((verts.len(), ne));
                    }
                }
            }
        }
    }
    out
}

/// Deletes vertices of degree at most one, suppresses degree two, merges
/// parallel edges; the graph has no K4 minor iff nothing survives.
fn sp_reduces(g: &Graph) -> bool {
    let n = g.n();
    let mut adj: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
    for (u, v) in g.edges() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut alive = vec![true; n];
    // Sets merge parallel edges on insertion.
    let mut queue: Vec<Vertex> = (0..n).collect();
    while let Some(u) = queue.pop() {
        if !alive[u] || adj[u].len() > 2 {
            continue;
        }
        let nbrs: Vec<Vertex> = adj[u].iter().copied().collect();
        alive[u] = false;
        for &w in &nbrs {
            adj[w].remove(&u);
        }
        adj[u].clear();
        if let [a, b] = nbrs[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        queue.extend(nbrs);
    }
    alive.iter().all(|&a| !a)
}
