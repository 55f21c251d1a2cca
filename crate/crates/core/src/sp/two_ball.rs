//! Components between two far balls, and the bipartitioned-boundary step.

use super::menger::{check_two_ball_input, far_from_component, far_path_past_ball};
use super::three::find_common_node;
use super::util::{closed, neighborhood, path_within};
use super::{found, hitting_ball_in_component, Found, SpContext};
use crate::decomp::{
    is_component_feasible, validate_partial, Ball, GraphDecomposition, PartialDecomposition,
    StepDecomposition,
};
use crate::error::{Error, Result};
use crate::graph::{bfs, components, components_of, shortest_path, Component, Graph, Path, Vertex, VertexSet};
use crate::minors::{is_minor_free, Pattern};

/// A partial decomposition with two terminal nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoBallDecomposition {
    pub partial: PartialDecomposition,
    pub source: usize,
    pub sink: usize,
}

struct Node {
    center: Vertex,
    radius: usize,
    bag: VertexSet,
}

struct Task {
    comp: VertexSet,
    a: usize,
    b: usize,
    path: Path,
}

/// Decomposes a component `C` of `G - (B1 ∪ B2)` that attaches to both balls,
/// given a `B1`–`B2` path `P` at distance at least `5K` from `C ∪ N(C)`.
///
/// Terminal bags are `N(C) ∩ B_i`. While two adjacent nodes have far
/// centres, a hitting ball `B(u, R0)` between them becomes a new node, and
/// the pieces of the component it cuts off on either side are handled the
/// same way. Finally edges between far nodes are dropped and every other
/// edge is subdivided by a node holding both bags.
pub fn two_ball_component_decomposition(
    cx: &SpContext<'_, '_>,
    v: [Vertex; 2],
    r: [usize; 2],
    comp: &VertexSet,
    p: &Path,
) -> Result<Found<TwoBallDecomposition>> {
    let g = cx.graph();
    let n = g.n();
    let k = cx.k();
    let r0 = cx.consts.r0;
    let balls = check_two_ball_input(cx, v, r, comp, p)?;
    let nc = neighborhood(g, comp);
    let mut nodes = vec![
        Node { center: v[0], radius: r[0], bag: nc.intersection(&balls[0]) },
        Node { center: v[1], radius: r[1], bag: nc.intersection(&balls[1]) },
    ];
    let mut edges = vec![(0usize, 1usize)];
    let long = |x: &Node, y: &Node| cx.gc.at_least(x.center, y.center, x.radius + y.radius + 5 * k + 2);
    let mut tasks = vec![Task { comp: comp.clone(), a: 0, b: 1, path: p.clone() }];
    while let Some(t) = tasks.pop() {
        cx.budget.spend("two-ball recursion")?;
        if nodes.len() > n + 2 {
            return Err(Error::internal("the two-ball recursion does not terminate"));
        }
        let (na, nb) = (&nodes[t.a], &nodes[t.b]);
        if !long(na, nb) {
            continue;
        }
        let (cv, rv) = ([na.center, nb.center], [na.radius, nb.radius]);
        let hit = found!(hitting_ball_in_component(cx, cv, rv, &t.comp, &t.path)?);
        let u = hit.center;
        let ball_u = cx.gc.ball(u, r0);
        let x = nodes.len();
        nodes.push(Node { center: u, radius: r0, bag: ball_u.intersection(&closed(g, &t.comp)) });
        edges.push((t.a, x));
        edges.push((x, t.b));
        let rest = t.comp.difference(&ball_u);
        for child in components_of(g, &rest.mask(n)) {
            let nb_child = neighborhood(g, &child);
            let (ba, bb, bx) = (&nodes[t.a].bag, &nodes[t.b].bag, &nodes[x].bag);
            if nb_child.is_subset(ba) || nb_child.is_subset(bb) || nb_child.is_subset(bx) {
                continue;
            }
            let side = match (nb_child.intersects(ba), nb_child.intersects(bb)) {
                (true, false) => 0,
                (false, true) => 1,
                (true, true) => {
                    return Err(Error::internal(format!(
                        "a piece of the component at vertex {} still joins both sides of the hitting ball",
                        child.as_slice()[0]
                    )))
                }
                (false, false) => {
                    return Err(Error::internal("a piece of the component attaches nowhere"));
                }
            };
            let path = far_path_past_ball(cx, cv, rv, &t.comp, &t.path, u, side)?;
            if !far_from_component(cx, &path, &child) {
                return Err(Error::internal("the extended far path comes too close to a piece"));
            }
            let (a, b) = if side == 0 { (t.a, x) } else { (x, t.b) };
            tasks.push(Task { comp: child, a, b, path });
        }
    }

    let mut gd = GraphDecomposition::new(
        Graph::empty(nodes.len()),
        nodes.iter().map(|x| x.bag.clone()).collect(),
    );
    for &(a, b) in &edges {
        if long(&nodes[a], &nodes[b]) {
            continue;
        }
        let s = gd.add_node(nodes[a].bag.union(&nodes[b].bag));
        gd.graph.add_edge(a, s)?;
        gd.graph.add_edge(s, b)?;
    }
    let support = VertexSet::union_all(&gd.bags);
    let out = TwoBallDecomposition { partial: gd.into_partial(support), source: 0, sink: 1 };
    if cx.check {
        check_two_ball(cx, v, r, comp, &out).map_err(|e| Error::internal(format!("two-ball decomposition: {e}")))?;
    }
    Ok(Found::Value(out))
}

/// Checks the guarantees of [`two_ball_component_decomposition`].
///
/// An honest partial decomposition of a subgraph of `G[C ∪ N(C)]` on `H`
/// with `H + h1h2` K4-minor-free; terminal bags `N(C) ∩ B_i`; bags two steps
/// away from both terminals of radius at most `R0'`; bags next to `h_i`
/// within `r_i + 2R0 + 5K + 1` of `v_i`; spread at most 3, with vertices of
/// `N(C) ∩ B_i` only in bags within three steps of `h_i`; and every leftover
/// component in `C` seen by one bag.
pub fn check_two_ball(
    cx: &SpContext<'_, '_>,
    v: [Vertex; 2],
    r: [usize; 2],
    comp: &VertexSet,
    out: &TwoBallDecomposition,
) -> Result<()> {
    let g = cx.graph();
    let c = &cx.consts;
    let k = cx.k();
    let pd = &out.partial;
    let rep = validate_partial(g, pd);
    if let Some(e) = rep.first_violation() {
        return Err(Error::structural(e));
    }
    let nc = neighborhood(g, comp);
    if !pd.support.is_subset(&comp.union(&nc)) {
        return Err(Error::structural("the support leaves C ∪ N(C)"));
    }
    let h = &pd.inner.graph;
    let mut plus = h.clone();
    let _ = plus.add_edge(out.source, out.sink);
    if !is_minor_free(&plus, Pattern::K4) {
        return Err(Error::structural("the model graph plus the terminal edge has a K4 minor"));
    }
    let terms = [out.source, out.sink];
    for i in 0..2 {
        let want = nc.intersection(&cx.gc.ball(v[i], r[i]));
        if pd.inner.bags[terms[i]] != want {
            return Err(Error::structural(format!("terminal bag {i} is not N(C) ∩ B_{}", i + 1)));
        }
    }
    let dh = [bfs(h, &[out.source]), bfs(h, &[out.sink])];
    for (x, bag) in pd.inner.bags.iter().enumerate() {
        let near = [dh[0][x] <= 1, dh[1][x] <= 1];
        if dh[0][x] >= 2 && dh[1][x] >= 2 {
            let rad = cx.gc.rad(bag);
            if !rad.at_most(c.r0p) {
                return Err(Error::structural(format!("inner bag {x} has radius {rad}, above {}", c.r0p)));
            }
        }
        for i in 0..2 {
            if near[i] {
                let bound = r[i] + 2 * c.r0 + 5 * k + 1;
                if !cx.gc.ecc_to(v[i], bag).at_most(bound) {
                    return Err(Error::structural(format!("bag {x} reaches further than {bound} from v{}", i + 1)));
                }
            }
        }
    }
    if !rep.spread.at_most(3) {
        return Err(Error::structural(format!("spread {} exceeds 3", rep.spread)));
    }
    for i in 0..2 {
        for &x in pd.inner.bags[terms[i]].iter() {
            if let Some(&far) = pd.inner.trace(x).iter().find(|&&t| dh[i][t] > 3) {
                return Err(Error::structural(format!(
                    "vertex {x} of N(C) ∩ B_{} sits in bag {far}, more than three steps from the terminal",
                    i + 1
                )));
            }
        }
    }
    let traces = pd.inner.traces(g.n());
    for cm in components(g, &pd.support) {
        if cm.vertices.intersects(comp) && find_common_node(&traces, &cm.neighborhood).is_none() {
            return Err(Error::structural(format!(
                "no bag holds the neighbourhood of the component at vertex {}",
                cm.vertices.as_slice()[0]
            )));
        }
    }
    Ok(())
}

/// Glues two-terminal pieces in parallel onto nodes `0` (sources) and `1`
/// (sinks) of a graph with `base` nodes and the given extra edges. Terminal
/// bags are the unions of the pieces' terminal bags; the other base nodes
/// get empty bags.
pub(crate) fn assemble(
    subs: &[TwoBallDecomposition],
    base: usize,
    extra: &[(usize, usize)],
) -> (GraphDecomposition, VertexSet) {
    let mut gd = GraphDecomposition::new(Graph::empty(base), vec![VertexSet::new(); base]);
    for &(a, b) in extra {
        gd.graph.add_edge(a, b).expect("base edges are distinct");
    }
    let mut support = VertexSet::new();
    for sub in subs {
        let inner = &sub.partial.inner;
        let mut id = vec![0; inner.node_count()];
        for (x, bag) in inner.bags.iter().enumerate() {
            id[x] = if x == sub.source {
                gd.bags[0] = gd.bags[0].union(bag);
                0
            } else if x == sub.sink {
                gd.bags[1] = gd.bags[1].union(bag);
                1
            } else {
                gd.add_node(bag.clone())
            };
        }
        for (x, y) in inner.graph.edges() {
            gd.graph.add_edge(id[x], id[y]).expect("terminals are distinct");
        }
        support = support.union(&sub.partial.support);
    }
    (gd, support)
}

/// Star-step branch for a component `C` of `G - B(w, r)` whose boundary lies
/// in `B(v1, R1) ∪ B(v2, R1)` with `d(v1, v2) >= 2R1 + 5K + 2`.
///
/// Every component between the two balls inside `C` that attaches to both
/// is decomposed by [`two_ball_component_decomposition`] along a far path
/// through the centre; the pieces are glued in parallel and closed into a
/// cycle through the anchor `g` with bag `N(C)`.
pub fn bipartitioned_boundary_step(
    cx: &SpContext<'_, '_>,
    b: Ball,
    comp: &Component,
    v1: Vertex,
    v2: Vertex,
) -> Result<Found<StepDecomposition>> {
    let g = cx.graph();
    let c = &cx.consts;
    let k = cx.k();
    let r1 = c.r1;
    if !comp.boundary.contains(v1) || !comp.boundary.contains(v2) {
        return Err(Error::precondition("v1 and v2 must lie on the boundary"));
    }
    if !cx.gc.at_least(v1, v2, 2 * r1 + 5 * k + 2) {
        return Err(Error::precondition(format!("v1 and v2 are closer than {}", 2 * r1 + 5 * k + 2)));
    }
    let bi = [cx.gc.ball(v1, r1), cx.gc.ball(v2, r1)];
    let both = bi[0].union(&bi[1]);
    if !comp.boundary.is_subset(&both) {
        return Err(Error::precondition("the boundary is not covered by the two balls"));
    }
    if !comp.neighborhood.is_subset(&cx.gc.ball(b.center, b.radius)) {
        return Err(Error::precondition("the component is not a component outside the ball"));
    }
    let w = VertexSet::singleton(b.center);
    let legs = [
        shortest_path(g, &w, &bi[0], None).ok_or_else(|| Error::precondition("v1 is unreachable"))?,
        shortest_path(g, &w, &bi[1], None).ok_or_else(|| Error::precondition("v2 is unreachable"))?,
    ];
    let span = legs[0].vertex_set().union(&legs[1].vertex_set());
    let p = path_within(g, &bi[0].intersection(&span), &bi[1].intersection(&span), &span)
        .ok_or_else(|| Error::internal("the legs through the centre do not join the balls"))?;

    let mut subs = Vec::new();
    for cp in components(g, &both) {
        if !cp.vertices.is_subset(&comp.vertices) {
            continue;
        }
        if !(cp.neighborhood.intersects(&bi[0]) && cp.neighborhood.intersects(&bi[1])) {
            continue;
        }
        subs.push(found!(two_ball_component_decomposition(cx, [v1, v2], [r1, r1], &cp.vertices, &p)?));
    }
    // h1 = 0, h2 = 1, g = 2.
    let (mut gd, support) = assemble(&subs, 3, &[(0, 2), (2, 1)]);
    let nc = &comp.neighborhood;
    for (i, &vi) in [v1, v2].iter().enumerate() {
        let own = bi[i].intersection(&comp.vertices).union(&nc.intersection(&cx.gc.ball(vi, r1 + 1)));
        gd.bags[i] = gd.bags[i].union(&own);
    }
    gd.bags[2] = nc.clone();
    let support = support.union(&both.intersection(&comp.vertices)).union(nc);
    let step = StepDecomposition { partial: gd.into_partial(support), anchor: 2 };
    if cx.check {
        check_step_properties(cx, comp, &step, c.f0, 7)
            .map_err(|e| Error::internal(format!("bipartitioned step: {e}")))?;
    }
    Ok(Found::Value(step))
}

/// Checks a star-step result for the component `C`: an honest partial
/// decomposition on a K4-minor-free graph whose anchor bag is `N(C)`, with
/// `∂C ⊆ Y ⊆ C ∪ N(C)`, bag radius and spread within the given bounds, and
/// every leftover component in `C` seen by one bag of radius at most `R2`.
pub fn check_step_properties(
    cx: &SpContext<'_, '_>,
    comp: &Component,
    step: &StepDecomposition,
    orw_bound: usize,
    irs_bound: usize,
) -> Result<()> {
    let g = cx.graph();
    let pd = &step.partial;
    let rep = validate_partial(g, pd);
    if let Some(e) = rep.first_violation() {
        return Err(Error::structural(e));
    }
    if pd.inner.bags.get(step.anchor) != Some(&comp.neighborhood) {
        return Err(Error::structural("the anchor bag is not N(C)"));
    }
    if !comp.boundary.is_subset(&pd.support) || !pd.support.is_subset(&comp.vertices.union(&comp.neighborhood)) {
        return Err(Error::structural("the support does not sit between the boundary and C ∪ N(C)"));
    }
    if !rep.orw().at_most(orw_bound) {
        return Err(Error::structural(format!("bag radius {} exceeds {orw_bound}", rep.orw())));
    }
    if !rep.spread.at_most(irs_bound) {
        return Err(Error::structural(format!("spread {} exceeds {irs_bound}", rep.spread)));
    }
    if !is_minor_free(&pd.inner.graph, Pattern::K4) {
        return Err(Error::structural("the model graph has a K4 minor"));
    }
    is_component_feasible(cx.gc, pd, cx.consts.r2, Some(&comp.vertices))?;
    Ok(())
}
