//! Graph-decompositions: bags of `G` indexed by the nodes of a graph `H`.

mod driver;
mod extend;
pub mod io;

pub use driver::{extension_driver, Ball, DriverParams, StepDecomposition, StepOutcome};
pub use extend::{
    check_attachment, glue, is_ball_componental, is_component_feasible, make_ball_componental,
    Attachment, BallComponental, GlueOutcome,
};

use crate::graph::{Dist, DistCache, Graph, Vertex, VertexSet};
use crate::minors::MinorModel;

/// `(H, (V_h))`. Node `h` of `graph` owns `bags[h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDecomposition {
    pub graph: Graph,
    pub bags: Vec<VertexSet>,
}

/// A decomposition of `G[support]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialDecomposition {
    pub inner: GraphDecomposition,
    pub support: VertexSet,
}

/// What a driver hands back: a decomposition or a fat minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Decomposition(GraphDecomposition),
    Witness(MinorModel),
}

impl GraphDecomposition {
    pub fn new(graph: Graph, bags: Vec<VertexSet>) -> Self {
        assert_eq!(graph.n(), bags.len(), "one bag per node");
        GraphDecomposition { graph, bags }
    }

    /// One node whose bag is `bag`.
    pub fn single(bag: VertexSet) -> Self {
        GraphDecomposition {
            graph: Graph::empty(1),
            bags: vec![bag],
        }
    }

    /// The trivial decomposition `H = G`, `V_h = {h}`.
    pub fn identity(g: &Graph) -> Self {
        GraphDecomposition {
            graph: g.clone(),
            bags: g.vertices().map(VertexSet::singleton).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.graph.n()
    }

    pub fn add_node(&mut self, bag: VertexSet) -> usize {
        self.bags.push(bag);
        self.graph.add_vertex()
    }

    /// `H_v` for every vertex below `n`: the nodes whose bags contain it.
    pub fn traces(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); n];
        for (h, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v < n {
                    out[v].push(h);
                }
            }
        }
        out
    }

    pub fn trace(&self, v: Vertex) -> Vec<usize> {
        (0..self.bags.len())
            .filter(|&h| self.bags[h].contains(v))
            .collect()
    }

    /// Union of all bags.
    pub fn covered(&self) -> VertexSet {
        VertexSet::union_all(&self.bags)
    }

    pub fn is_honest(&self) -> bool {
        self.dishonest_edges().is_empty()
    }

    pub fn dishonest_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .into_iter()
            .filter(|&(a, b)| !self.bags[a].intersects(&self.bags[b]))
            .collect()
    }

    pub fn into_partial(self, support: VertexSet) -> PartialDecomposition {
        PartialDecomposition {
            inner: self,
            support,
        }
    }
}

impl PartialDecomposition {
    /// `V'_h = V_h ∩ S`, support `Y ∩ S`.
    pub fn restrict(&self, s: &VertexSet) -> PartialDecomposition {
        PartialDecomposition {
            inner: GraphDecomposition {
                graph: self.inner.graph.clone(),
                bags: self.inner.bags.iter().map(|b| b.intersection(s)).collect(),
            },
            support: self.support.intersection(s),
        }
    }

    /// Drops nodes with empty bags, renumbering the rest in order.
    pub fn drop_empty_nodes(&self) -> (PartialDecomposition, Vec<Option<usize>>) {
        let d = &self.inner;
        let mut map = vec![None; d.node_count()];
        let mut bags = Vec::new();
        for (h, bag) in d.bags.iter().enumerate() {
            if !bag.is_empty() {
                map[h] = Some(bags.len());
                bags.push(bag.clone());
            }
        }
        let mut graph = Graph::empty(bags.len());
        for (a, b) in d.graph.edges() {
            if let (Some(x), Some(y)) = (map[a], map[b]) {
                graph.add_edge(x, y).expect("renumbering keeps edges simple");
            }
        }
        (
            PartialDecomposition {
                inner: GraphDecomposition { graph, bags },
                support: self.support.clone(),
            },
            map,
        )
    }
}

/// Outcome of checking the decomposition axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    /// Bag vertices that lie outside the support or outside `G`.
    pub stray_vertices: Vec<Vertex>,
    /// Support vertices in no bag.
    pub uncovered_vertices: Vec<Vertex>,
    /// Edges of `G[Y]` inside no single bag.
    pub uncovered_edges: Vec<(Vertex, Vertex)>,
    /// Vertices whose trace `H_v` is disconnected.
    pub disconnected_traces: Vec<Vertex>,
    /// Edges of `H` whose bags are disjoint.
    pub dishonest_edges: Vec<(usize, usize)>,
    /// `rad_G(V_h)` per node.
    pub bag_radii: Vec<Dist>,
    /// `max_v rad_H(H_v)` over covered vertices.
    pub spread: Dist,
}

impl ValidationReport {
    /// (H1) and (H2) hold.
    pub fn is_valid(&self) -> bool {
        self.stray_vertices.is_empty()
            && self.uncovered_vertices.is_empty()
            && self.uncovered_edges.is_empty()
            && self.disconnected_traces.is_empty()
    }

    pub fn is_honest(&self) -> bool {
        self.dishonest_edges.is_empty()
    }

    pub fn orw(&self) -> Dist {
        self.bag_radii.iter().copied().max().unwrap_or(Dist::Finite(0))
    }

    /// Human-readable description of the first violation, if any.
    pub fn first_violation(&self) -> Option<String> {
        if let Some(v) = self.stray_vertices.first() {
            return Some(format!("covering: bag vertex {v} lies outside the decomposed graph"));
        }
        if let Some(v) = self.uncovered_vertices.first() {
            return Some(format!("covering: vertex {v} lies in no bag"));
        }
        if let Some((u, v)) = self.uncovered_edges.first() {
            return Some(format!("covering: edge {u} {v} lies in no bag"));
        }
        if let Some(v) = self.disconnected_traces.first() {
            return Some(format!("connectivity: the nodes whose bags contain {v} are not connected"));
        }
        if let Some((a, b)) = self.dishonest_edges.first() {
            return Some(format!("honesty: adjacent nodes {a} and {b} have disjoint bags"));
        }
        None
    }
}

/// Checks a decomposition of the whole of `g`.
pub fn validate(g: &Graph, d: &GraphDecomposition) -> ValidationReport {
    let all = VertexSet::from_sorted(g.vertices().collect());
    validate_on(g, d, &all)
}

/// Checks a decomposition of `G[pd.support]`.
pub fn validate_partial(g: &Graph, pd: &PartialDecomposition) -> ValidationReport {
    validate_on(g, &pd.inner, &pd.support)
}

fn validate_on(g: &Graph, d: &GraphDecomposition, support: &VertexSet) -> ValidationReport {
    let n = g.n();
    let mut report = ValidationReport::default();
    if d.bags.len() != d.graph.n() {
        report.stray_vertices.push(usize::MAX);
        return report;
    }
    let in_support = support.mask(n);
    let mut stray = VertexSet::new();
    for bag in &d.bags {
        for &v in bag {
            if v >= n || !in_support[v] {
                stray.insert(v);
            }
        }
    }
    report.stray_vertices = stray.into_vec();
    if !report.stray_vertices.is_empty() {
        return report;
    }
    let traces = d.traces(n);
    report.uncovered_vertices = support
        .iter()
        .copied()
        .filter(|&v| traces[v].is_empty())
        .collect();
    for (u, v) in g.edges() {
        if in_support[u] && in_support[v] && !shares_node(&traces[u], &traces[v]) {
            report.uncovered_edges.push((u, v));
        }
    }
    let hc = DistCache::new(&d.graph);
    let mut spread = Dist::Finite(0);
    for v in support {
        let t = &traces[*v];
        if t.is_empty() {
            continue;
        }
        let set = VertexSet::from_sorted(t.clone());
        if !crate::graph::is_connected_set(&d.graph, &set) {
            report.disconnected_traces.push(*v);
        }
        spread = spread.max(hc.rad(&set));
    }
    report.spread = spread;
    report.dishonest_edges = d.dishonest_edges();
    let gc = DistCache::new(g);
    report.bag_radii = d.bags.iter().map(|b| gc.rad(b)).collect();
    report
}

fn shares_node(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// `max_h rad_G(V_h)`.
pub fn orw(g: &Graph, d: &GraphDecomposition) -> Dist {
    orw_cached(&DistCache::new(g), d)
}

pub fn orw_cached(gc: &DistCache<'_>, d: &GraphDecomposition) -> Dist {
    d.bags
        .iter()
        .map(|b| gc.rad(b))
        .max()
        .unwrap_or(Dist::Finite(0))
}

/// `rad_H(H_v)`, measured in `H`.
pub fn irs_at(d: &GraphDecomposition, v: Vertex) -> Dist {
    let hc = DistCache::new(&d.graph);
    hc.rad(&VertexSet::from_sorted(d.trace(v)))
}

/// `max_v rad_H(H_v)` over all vertices in some bag.
pub fn irs(d: &GraphDecomposition) -> Dist {
    let n = d.covered().last().map_or(0, |m| m + 1);
    let hc = DistCache::new(&d.graph);
    d.traces(n)
        .into_iter()
        .filter(|t| !t.is_empty())
        .map(|t| hc.rad(&VertexSet::from_sorted(t)))
        .max()
        .unwrap_or(Dist::Finite(0))
}

/// `max_{v ∈ S} rad_H(H_v)`.
pub fn irs_on(d: &GraphDecomposition, s: &VertexSet) -> Dist {
    let n = s.last().map_or(0, |m| m + 1);
    let hc = DistCache::new(&d.graph);
    let traces = d.traces(n);
    s.iter()
        .filter(|&&v| !traces[v].is_empty())
        .map(|&v| hc.rad(&VertexSet::from_sorted(traces[v].clone())))
        .max()
        .unwrap_or(Dist::Finite(0))
}
