//! Growing a partial decomposition: feasibility, ball-componental closure, gluing.

use super::{GraphDecomposition, PartialDecomposition, StepDecomposition};
use crate::error::{Error, Result};
use crate::graph::{components, Component, DistCache, Graph, Vertex, VertexSet};

/// A component of `G - Y` waiting for a star step.
///
/// `component` is a component of `G - B(center, radius)`, and its
/// neighbourhood lies in the bag of `node`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment {
    pub component: Component,
    pub center: Vertex,
    pub radius: usize,
    pub node: usize,
}

#[derive(Clone, Debug)]
pub struct BallComponental {
    pub decomposition: PartialDecomposition,
    pub attachments: Vec<Attachment>,
}

#[derive(Clone, Debug)]
pub struct GlueOutcome {
    pub decomposition: PartialDecomposition,
    /// `renaming[i][x]`: node of the glued graph that node `x` of the
    /// `i`-th glued piece became.
    pub renaming: Vec<Vec<usize>>,
}

/// Nodes whose bag contains every vertex of `set`.
fn nodes_containing(traces: &[Vec<usize>], set: &VertexSet) -> Vec<usize> {
    let mut it = set.iter();
    let Some(&first) = it.next() else {
        return Vec::new();
    };
    let mut cand = traces[first].clone();
    for &v in it {
        cand.retain(|h| traces[v].binary_search(h).is_ok());
        if cand.is_empty() {
            break;
        }
    }
    cand
}

/// Checks `R`-component-feasibility: every component of `G - Y` has its
/// neighbourhood inside one bag of radius at most `r`.
///
/// With `within`, only components meeting that set are checked. Returns each
/// checked component with the smallest witnessing node.
pub fn is_component_feasible(
    gc: &DistCache<'_>,
    pd: &PartialDecomposition,
    r: usize,
    within: Option<&VertexSet>,
) -> Result<Vec<(Component, usize)>> {
    let g = gc.graph();
    let traces = pd.inner.traces(g.n());
    let mut out = Vec::new();
    for comp in components(g, &pd.support) {
        if within.is_some_and(|w| !comp.vertices.intersects(w)) {
            continue;
        }
        if comp.neighborhood.is_empty() {
            return Err(Error::structural(format!(
                "component at vertex {} does not attach to the support",
                comp.vertices.as_slice()[0]
            )));
        }
        let h = nodes_containing(&traces, &comp.neighborhood)
            .into_iter()
            .find(|&h| gc.rad(&pd.inner.bags[h]).at_most(r))
            .ok_or_else(|| {
                Error::structural(format!(
                    "no bag of radius at most {r} holds the neighbourhood of the component at vertex {}",
                    comp.vertices.as_slice()[0]
                ))
            })?;
        out.push((comp, h));
    }
    Ok(out)
}

/// Enlarges bags so that every component of `G - Y` becomes a component of
/// `G - B(v_h, r)` for a node `h` with `V_h ⊆ B(v_h, r)`.
///
/// `V'_h = V_h ∪ (B(v_h, r) ∩ ⋃ C)` over the components assigned to `h`.
pub fn make_ball_componental(
    gc: &DistCache<'_>,
    pd: &PartialDecomposition,
    r: usize,
) -> Result<BallComponental> {
    let g = gc.graph();
    let feasible = is_component_feasible(gc, pd, r, None)?;
    let mut bags = pd.inner.bags.clone();
    let mut centers: Vec<Option<Vertex>> = vec![None; bags.len()];
    let mut owner = vec![usize::MAX; g.n()];
    let mut absorbed_all = Vec::new();
    for (i, (comp, h)) in feasible.iter().enumerate() {
        let center = *centers[*h].get_or_insert_with(|| {
            gc.center(&pd.inner.bags[*h])
                .expect("feasible bags contain the neighbourhood and are non-empty")
                .0
        });
        let row = gc.row(center);
        let absorbed: VertexSet = comp
            .vertices
            .iter()
            .copied()
            .filter(|&v| (row[v] as usize) <= r)
            .collect();
        for &v in &comp.vertices {
            owner[v] = i;
        }
        absorbed_all.extend(absorbed.iter().copied());
        bags[*h] = bags[*h].union(&absorbed);
    }
    let support = pd.support.union(&absorbed_all.into_iter().collect());
    let decomposition = PartialDecomposition {
        inner: GraphDecomposition {
            graph: pd.inner.graph.clone(),
            bags,
        },
        support,
    };
    let attachments = components(g, &decomposition.support)
        .into_iter()
        .map(|component| {
            let i = owner[component.vertices.as_slice()[0]];
            let h = feasible[i].1;
            Attachment {
                component,
                center: centers[h].expect("set above"),
                radius: r,
                node: h,
            }
        })
        .collect();
    Ok(BallComponental {
        decomposition,
        attachments,
    })
}

/// Whether every component of `G - Y` is a component of `G - B(v, r)` for a
/// node `h` and vertex `v` with `V_h ⊆ B(v, r)` and `N(C) ⊆ V_h`.
pub fn is_ball_componental(gc: &DistCache<'_>, pd: &PartialDecomposition, r: usize) -> bool {
    let g = gc.graph();
    let traces = pd.inner.traces(g.n());
    components(g, &pd.support).into_iter().all(|comp| {
        nodes_containing(&traces, &comp.neighborhood)
            .into_iter()
            .any(|h| {
                let bag = &pd.inner.bags[h];
                g.vertices().any(|v| {
                    gc.ecc_to(v, bag).at_most(r)
                        && comp.vertices.iter().all(|&x| !gc.d(v, x).at_most(r))
                })
            })
    })
}

/// Checks that a star-step result may be glued at node `at` for `comp`:
/// its anchor bag is `N(C)`, `N(C) ⊆ V_at`, and `∂C ⊆ Y^C ⊆ C ∪ N(C)`.
pub fn check_attachment(
    base: &PartialDecomposition,
    comp: &Component,
    at: usize,
    step: &StepDecomposition,
) -> Result<()> {
    let sd = &step.partial;
    if step.anchor >= sd.inner.node_count() {
        return Err(Error::internal("anchor node out of range"));
    }
    if sd.inner.bags[step.anchor] != comp.neighborhood {
        return Err(Error::internal("anchor bag differs from N(C)"));
    }
    if !comp.neighborhood.is_subset(&base.inner.bags[at]) {
        return Err(Error::internal("N(C) is not inside the attachment bag"));
    }
    if !comp.boundary.is_subset(&sd.support) {
        return Err(Error::internal("the step does not cover the boundary of C"));
    }
    let closed = comp.vertices.union(&comp.neighborhood);
    if !sd.support.is_subset(&closed) {
        return Err(Error::internal("the step reaches outside C and N(C)"));
    }
    Ok(())
}

/// Glues star-step results onto `base`, identifying each anchor with its
/// attachment node. Attachment bags keep their own contents.
pub fn glue(base: &PartialDecomposition, parts: &[(usize, &StepDecomposition)]) -> GlueOutcome {
    let mut graph: Graph = base.inner.graph.clone();
    let mut bags = base.inner.bags.clone();
    let mut support = base.support.clone();
    let mut renaming = Vec::with_capacity(parts.len());
    for &(at, step) in parts {
        let sd = &step.partial.inner;
        let mut map = vec![usize::MAX; sd.node_count()];
        for (x, slot) in map.iter_mut().enumerate() {
            if x == step.anchor {
                *slot = at;
            } else {
                bags.push(sd.bags[x].clone());
                *slot = graph.add_vertex();
            }
        }
        for (a, b) in sd.graph.edges() {
            graph
                .add_edge(map[a], map[b])
                .expect("renamed edges stay loop-free");
        }
        support = support.union(&step.partial.support);
        renaming.push(map);
    }
    GlueOutcome {
        decomposition: PartialDecomposition {
            inner: GraphDecomposition { graph, bags },
            support,
        },
        renaming,
    }
}
