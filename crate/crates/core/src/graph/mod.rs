//! Finite simple graphs with dense vertex ids and the metric primitives built on them.

mod cache;
pub mod io;
mod metric;
mod path;
mod set;

pub use cache::DistCache;
pub use metric::{
    ball, ball_within, bfs, bfs_within, components, components_of, dist, is_connected_set,
    rad_of_set, set_center, shortest_path, Component, UNREACHED,
};
pub use path::Path;
pub use set::VertexSet;

use crate::error::{Error, Result};
use std::fmt;

pub type Vertex = usize;

/// Distance in a graph: finite, or infinite between different components.
///
/// The derived order puts every finite value below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dist {
    Finite(usize),
    Infinite,
}

impl Default for Dist {
    fn default() -> Self {
        Dist::Finite(0)
    }
}

impl Dist {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn from_raw(d: u32) -> Dist {
        if d == UNREACHED {
            Dist::Infinite
        } else {
            Dist::Finite(d as usize)
        }
    }

    /// `self <= bound` for a finite bound.
    pub fn at_most(self, bound: usize) -> bool {
        matches!(self, Dist::Finite(d) if d <= bound)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Infinite => write!(f, "inf"),
        }
    }
}

/// Undirected simple graph on `0..n`. Neighbour lists are kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::domain(format!("duplicate edge {u} {v}")));
            }
        }
        Ok(g)
    }

    pub fn path_graph(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are simple")
    }

    pub fn cycle_graph(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).expect("cycle edges are simple")
    }

    pub fn complete_graph(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("complete graph edges are simple");
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Returns `Ok(false)` if the edge was already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<bool> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::domain(format!(
                "edge {u} {v} out of range for {n} vertices"
            )));
        }
        if u == v {
            return Err(Error::domain(format!("loop at vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).expect("adjacency is symmetric");
                self.adj[v].remove(pos);
                self.m -= 1;
                true
            }
            Err(_) => false,
        }
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Same vertex ids, only the edges with both ends in `keep`.
    pub fn restricted(&self, keep: &[bool]) -> Graph {
        let mut adj = vec![Vec::new(); self.n()];
        let mut m = 0;
        for u in self.vertices() {
            if !keep[u] {
                continue;
            }
            for &v in &self.adj[u] {
                if keep[v] {
                    adj[u].push(v);
                    if u < v {
                        m += 1;
                    }
                }
            }
        }
        Graph { adj, m }
    }

    /// Union of edge sets over a common vertex range.
    pub fn union_edges(&mut self, other: &Graph) {
        for (u, v) in other.edges() {
            self.add_edge(u, v).expect("ids agree between the two graphs");
        }
    }

    /// Adds the edges of a path.
    pub fn add_path_edges(&mut self, p: &Path) {
        for w in p.vertices().windows(2) {
            self.add_edge(w[0], w[1]).expect("path edges are simple");
        }
    }

    /// Induced subgraph relabelled to `0..|set|`, with the map back to old ids.
    pub fn induced(&self, set: &VertexSet) -> (Graph, Vec<Vertex>) {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in set.iter().enumerate() {
            index[v] = i;
        }
        let mut h = Graph::empty(set.len());
        for (i, &v) in set.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    h.add_edge(i, j).expect("induced edges are simple");
                }
            }
        }
        (h, set.iter().copied().collect())
    }

    pub fn mask(&self, set: &VertexSet) -> Vec<bool> {
        set.mask(self.n())
    }
}
