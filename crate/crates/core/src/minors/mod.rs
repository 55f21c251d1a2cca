//! Fat minor models, their checker, and minor-freeness tests for small patterns.

mod brute;
mod hsp;
pub mod io;
mod recognize;

pub use brute::{brute_force_fat_minor, DEFAULT_BUDGET};
pub use hsp::TwoTerminalGraph;
pub use recognize::{is_cactus, is_minor_free};

use crate::error::{Error, Result};
use crate::graph::{bfs, is_connected_set, Dist, Graph, Path, VertexSet};
use std::fmt;
use std::str::FromStr;

/// The small patterns the library looks for.
///
/// Vertex labels are fixed: in `K4Minus` the missing edge is `2 3`, so `0`
/// and `1` are the two vertices of degree three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    K3,
    K4Minus,
    K4,
}

impl Pattern {
    pub fn order(self) -> usize {
        match self {
            Pattern::K3 => 3,
            Pattern::K4Minus | Pattern::K4 => 4,
        }
    }

    pub fn edges(self) -> Vec<(usize, usize)> {
        match self {
            Pattern::K3 => vec![(0, 1), (0, 2), (1, 2)],
            Pattern::K4Minus => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)],
            Pattern::K4 => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        }
    }

    pub fn graph(self) -> Graph {
        Graph::from_edges(self.order(), &self.edges()).expect("patterns are simple")
    }

    /// Classes of pattern vertices that automorphisms may permute freely.
    pub(crate) fn symmetry_classes(self) -> Vec<Vec<usize>> {
        match self {
            Pattern::K3 => vec![vec![0, 1, 2]],
            Pattern::K4 => vec![vec![0, 1, 2, 3]],
            Pattern::K4Minus => vec![vec![0, 1], vec![2, 3]],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pattern::K3 => "k3",
            Pattern::K4Minus => "k4minus",
            Pattern::K4 => "k4",
        }
    }

    /// Recognises the pattern graph up to the fixed labelling above.
    pub fn of_graph(x: &Graph) -> Option<Pattern> {
        [Pattern::K3, Pattern::K4Minus, Pattern::K4]
            .into_iter()
            .find(|p| p.graph() == *x)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k3" => Ok(Pattern::K3),
            "k4minus" | "k4-" | "diamond" => Ok(Pattern::K4Minus),
            "k4" => Ok(Pattern::K4),
            other => Err(Error::domain(format!("unknown pattern {other:?}"))),
        }
    }
}

/// A model of the pattern graph `X` in `G`: a branch set per vertex of `X`
/// and a branch path per edge of `X`, listed in `X.edges()` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub pattern: Graph,
    pub branch_sets: Vec<VertexSet>,
    pub paths: Vec<Path>,
}

impl MinorModel {
    pub fn new(pattern: Graph, branch_sets: Vec<VertexSet>, paths: Vec<Path>) -> Self {
        MinorModel {
            pattern,
            branch_sets,
            paths,
        }
    }

    /// Every member of the model as a vertex set: branch sets first, then paths.
    pub fn members(&self) -> Vec<VertexSet> {
        self.branch_sets
            .iter()
            .cloned()
            .chain(self.paths.iter().map(|p| p.vertex_set()))
            .collect()
    }

    /// Whether the pair of members `(i, j)` is exempt from the fatness bound.
    fn exempt(&self, i: usize, j: usize) -> bool {
        let k = self.branch_sets.len();
        let edges = self.pattern.edges();
        let (lo, hi) = (i.min(j), i.max(j));
        lo < k && hi >= k && {
            let (a, b) = edges[hi - k];
            lo == a || lo == b
        }
    }
}

/// Checks the model axioms, naming the first violation.
pub fn validate_model(g: &Graph, m: &MinorModel) -> Result<()> {
    let n = g.n();
    let k = m.pattern.n();
    let edges = m.pattern.edges();
    if m.branch_sets.len() != k {
        return Err(Error::structural(format!(
            "{} branch sets for a pattern on {k} vertices",
            m.branch_sets.len()
        )));
    }
    if m.paths.len() != edges.len() {
        return Err(Error::structural(format!(
            "{} branch paths for a pattern with {} edges",
            m.paths.len(),
            edges.len()
        )));
    }
    let mut owner = vec![usize::MAX; n];
    for (x, set) in m.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::structural(format!("branch set {x} is empty")));
        }
        if let Some(&v) = set.iter().find(|&&v| v >= n) {
            return Err(Error::structural(format!("branch set {x} names vertex {v} outside G")));
        }
        for &v in set {
            if owner[v] != usize::MAX {
                return Err(Error::structural(format!(
                    "branch sets {} and {x} share vertex {v}",
                    owner[v]
                )));
            }
            owner[v] = x;
        }
        if !is_connected_set(g, set) {
            return Err(Error::structural(format!("branch set {x} is not connected")));
        }
    }
    let mut interior_owner = vec![usize::MAX; n];
    for (e, (p, &(a, b))) in m.paths.iter().zip(&edges).enumerate() {
        if let Some(&v) = p.vertices().iter().find(|&&v| v >= n) {
            return Err(Error::structural(format!("path {a}-{b} names vertex {v} outside G")));
        }
        if !p.is_path_in(g) {
            return Err(Error::structural(format!("path {a}-{b} uses a non-edge")));
        }
        let (s, t) = (owner[p.first()], owner[p.last()]);
        if !((s == a && t == b) || (s == b && t == a)) {
            return Err(Error::structural(format!(
                "path {a}-{b} does not run between branch sets {a} and {b}"
            )));
        }
        for &v in p.interior() {
            if owner[v] != usize::MAX {
                return Err(Error::structural(format!(
                    "interior of path {a}-{b} meets branch set {} at {v}",
                    owner[v]
                )));
            }
            if interior_owner[v] != usize::MAX {
                let (c, d) = edges[interior_owner[v]];
                return Err(Error::structural(format!(
                    "interiors of paths {c}-{d} and {a}-{b} share vertex {v}"
                )));
            }
            interior_owner[v] = e;
        }
    }
    Ok(())
}

/// Smallest distance between two members not exempt from the fatness bound.
///
/// Infinite when no pair is constrained. The model must be valid.
pub fn fatness(g: &Graph, m: &MinorModel) -> Result<Dist> {
    validate_model(g, m)?;
    let members = m.members();
    let mut best = Dist::Infinite;
    for (i, a) in members.iter().enumerate() {
        if !(i + 1..members.len()).any(|j| !m.exempt(i, j)) {
            continue;
        }
        let d = bfs(g, a.as_slice());
        for (j, b) in members.iter().enumerate().skip(i + 1) {
            if m.exempt(i, j) {
                continue;
            }
            let dij = b
                .iter()
                .map(|&v| d[v])
                .min()
                .map_or(Dist::Infinite, Dist::from_raw);
            best = best.min(dij);
        }
    }
    Ok(best)
}

/// Whether `m` is a valid `k`-fat model in `g`.
pub fn is_fat_model(g: &Graph, m: &MinorModel, k: usize) -> bool {
    match fatness(g, m) {
        Ok(Dist::Infinite) => true,
        Ok(Dist::Finite(d)) => d >= k,
        Err(_) => false,
    }
}
