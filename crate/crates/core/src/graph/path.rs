use super::{Graph, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Vertex sequence without repeats. `len` counts edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path(Vec<Vertex>);

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::domain("a path has at least one vertex"));
        }
        let set: VertexSet = vertices.iter().copied().collect();
        if set.len() != vertices.len() {
            return Err(Error::domain("path repeats a vertex"));
        }
        Ok(Path(vertices))
    }

    pub fn trivial(v: Vertex) -> Self {
        Path(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }

    pub fn first(&self) -> Vertex {
        self.0[0]
    }

    pub fn last(&self) -> Vertex {
        *self.0.last().expect("paths are non-empty")
    }

    pub fn get(&self, i: usize) -> Vertex {
        self.0[i]
    }

    /// Vertices strictly between the ends.
    pub fn interior(&self) -> &[Vertex] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// Vertices `i..=j`.
    pub fn subpath(&self, i: usize, j: usize) -> Path {
        assert!(i <= j && j < self.0.len(), "subpath {i}..={j} out of range");
        Path(self.0[i..=j].to_vec())
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.0.clone();
        v.reverse();
        Path(v)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }

    /// Consecutive vertices adjacent in `g`.
    pub fn is_path_in(&self, g: &Graph) -> bool {
        self.0.iter().all(|&v| v < g.n()) && self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    /// Joins `self` and `other` where `self.last() == other.first()`.
    pub fn concat(&self, other: &Path) -> Result<Path> {
        if self.last() != other.first() {
            return Err(Error::internal("concatenated paths do not meet"));
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Path::new(v)
    }
}
