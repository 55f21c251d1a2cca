use super::metric::{best_center, bfs};
use super::{Dist, Graph, Vertex, VertexSet, UNREACHED};
use std::sync::OnceLock;

/// Lazily filled single-source distance rows for one graph.
///
/// Rows are computed on first use and shared afterwards, so repeated radius
/// queries over overlapping sets cost one BFS per distinct vertex.
pub struct DistCache<'g> {
    g: &'g Graph,
    rows: Vec<OnceLock<Box<[u32]>>>,
}

impl<'g> DistCache<'g> {
    pub fn new(g: &'g Graph) -> Self {
        DistCache {
            g,
            rows: (0..g.n()).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn row(&self, v: Vertex) -> &[u32] {
        self.rows[v].get_or_init(|| bfs(self.g, &[v]).into_boxed_slice())
    }

    pub fn raw(&self, u: Vertex, v: Vertex) -> u32 {
        self.row(u)[v]
    }

    pub fn d(&self, u: Vertex, v: Vertex) -> Dist {
        Dist::from_raw(self.raw(u, v))
    }

    /// `d(u, v) >= k`, with unreachable counting as far.
    pub fn at_least(&self, u: Vertex, v: Vertex, k: usize) -> bool {
        let d = self.raw(u, v);
        d == UNREACHED || d as usize >= k
    }

    /// Largest distance from `v` to a member of `set`.
    pub fn ecc_to(&self, v: Vertex, set: &VertexSet) -> Dist {
        let row = self.row(v);
        set.iter()
            .map(|&u| Dist::from_raw(row[u]))
            .max()
            .unwrap_or(Dist::Finite(0))
    }

    /// Center and radius of `set`, ties to the smallest id.
    pub fn center(&self, set: &VertexSet) -> Option<(Vertex, Dist)> {
        if set.is_empty() {
            return None;
        }
        let mut ecc = vec![0u32; self.g.n()];
        for &u in set {
            for (e, &x) in ecc.iter_mut().zip(self.row(u)) {
                *e = (*e).max(x);
            }
        }
        best_center(&ecc)
    }

    pub fn rad(&self, set: &VertexSet) -> Dist {
        self.center(set).map_or(Dist::Finite(0), |(_, r)| r)
    }

    /// Largest pairwise distance inside `set`.
    pub fn diameter(&self, set: &VertexSet) -> Dist {
        let mut best = Dist::Finite(0);
        for &u in set {
            let row = self.row(u);
            for &v in set {
                best = best.max(Dist::from_raw(row[v]));
            }
        }
        best
    }

    /// Vertices within distance `r` of `v`, read off the cached row.
    pub fn ball(&self, v: Vertex, r: usize) -> VertexSet {
        let row = self.row(v);
        VertexSet::from_sorted(
            (0..self.g.n())
                .filter(|&x| row[x] != UNREACHED && row[x] as usize <= r)
                .collect(),
        )
    }
}
