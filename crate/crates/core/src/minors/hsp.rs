use super::{is_minor_free, Pattern};
use crate::error::{Error, Result};
use crate::graph::{components_of, Graph, Vertex};

/// A graph with a source and a sink, closed under the series-parallel
/// operations below.
///
/// `in_hsp` is the membership test: the terminals differ and adding the
/// edge between them leaves the graph connected and K4-minor-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTerminalGraph {
    pub graph: Graph,
    pub source: Vertex,
    pub sink: Vertex,
}

/// Disjoint union of `a` and `b` with the listed `(a, b)` pairs identified.
/// Returns the union and the new id of every vertex of `b`.
fn glue(a: &Graph, b: &Graph, identify: &[(Vertex, Vertex)]) -> (Graph, Vec<Vertex>) {
    let mut g = a.clone();
    let mut map = vec![usize::MAX; b.n()];
    for &(x, y) in identify {
        map[y] = x;
    }
    for slot in map.iter_mut() {
        if *slot == usize::MAX {
            *slot = g.add_vertex();
        }
    }
    for (u, v) in b.edges() {
        // Parallel edges collapse; the result stays simple.
        let _ = g.add_edge(map[u], map[v]);
    }
    (g, map)
}

impl TwoTerminalGraph {
    pub fn new(graph: Graph, source: Vertex, sink: Vertex) -> Result<Self> {
        if source >= graph.n() || sink >= graph.n() {
            return Err(Error::domain("terminal out of range"));
        }
        Ok(TwoTerminalGraph {
            graph,
            source,
            sink,
        })
    }

    /// A single edge from source `0` to sink `1`.
    pub fn edge() -> Self {
        TwoTerminalGraph {
            graph: Graph::path_graph(2),
            source: 0,
            sink: 1,
        }
    }

    pub fn in_hsp(&self) -> bool {
        if self.source == self.sink {
            return false;
        }
        let mut g = self.graph.clone();
        let _ = g.add_edge(self.source, self.sink);
        components_of(&g, &vec![true; g.n()]).len() == 1 && is_minor_free(&g, Pattern::K4)
    }

    /// Identifies the sink of `self` with the source of `other`.
    pub fn series(&self, other: &TwoTerminalGraph) -> Self {
        let (graph, map) = glue(&self.graph, &other.graph, &[(self.sink, other.source)]);
        TwoTerminalGraph {
            graph,
            source: self.source,
            sink: map[other.sink],
        }
    }

    /// Identifies the two sources and the two sinks.
    pub fn parallel(&self, other: &TwoTerminalGraph) -> Self {
        let (graph, _) = glue(
            &self.graph,
            &other.graph,
            &[(self.source, other.source), (self.sink, other.sink)],
        );
        TwoTerminalGraph {
            graph,
            source: self.source,
            sink: self.sink,
        }
    }

    /// Replaces the edge `u v` by a path of length two; returns the new vertex.
    pub fn subdivide(&mut self, u: Vertex, v: Vertex) -> Result<Vertex> {
        if !self.graph.remove_edge(u, v) {
            return Err(Error::domain(format!("{u} {v} is not an edge")));
        }
        let w = self.graph.add_vertex();
        self.graph.add_edge(u, w)?;
        self.graph.add_edge(w, v)?;
        Ok(w)
    }

    /// Adds a new path of length `len >= 2` between adjacent `u` and `v`.
    pub fn add_long_path(&mut self, u: Vertex, v: Vertex, len: usize) -> Result<()> {
        if !self.graph.has_edge(u, v) || len < 2 {
            return Err(Error::domain("long paths join adjacent vertices and have length at least two"));
        }
        let mut prev = u;
        for _ in 1..len {
            let w = self.graph.add_vertex();
            self.graph.add_edge(prev, w)?;
            prev = w;
        }
        self.graph.add_edge(prev, v)?;
        Ok(())
    }

    /// Glues a K4-minor-free graph onto `self` at a single vertex.
    pub fn one_sum(&self, other: &Graph, at_self: Vertex, at_other: Vertex) -> Result<Self> {
        if !is_minor_free(other, Pattern::K4) {
            return Err(Error::domain("1-sums take a K4-minor-free graph"));
        }
        let (graph, _) = glue(&self.graph, other, &[(at_self, at_other)]);
        Ok(TwoTerminalGraph {
            graph,
            source: self.source,
            sink: self.sink,
        })
    }
}
