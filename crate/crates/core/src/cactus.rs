//! The K4⁻ pipeline.
//!
//! Either every component left over by a ball has a boundary that is coarsely
//! one or two blobs, in which case it is covered by a short path of ball
//! unions, or three boundary vertices are far apart and a fat K4⁻ falls out.

use crate::decomp::{
    extension_driver, Ball, DriverParams, GraphDecomposition, Outcome, PartialDecomposition,
    StepDecomposition, StepOutcome,
};
use crate::error::{Error, Result};
use crate::graph::{
    ball, bfs, components, shortest_path, Component, DistCache, Graph, Path, Vertex, VertexSet,
    UNREACHED,
};
use crate::minors::{fatness, validate_model, MinorModel, Pattern};

/// Seed radius and step bag-radius bound: `42K + 1`.
pub fn radius(k: usize) -> usize {
    42 * k + 1
}

/// Bounds `(orw, irs)` of the final decomposition: `(42K + 1, 28K + 3)`.
pub fn bounds(k: usize) -> (usize, usize) {
    (42 * k + 1, 28 * k + 3)
}

pub fn driver_params(k: usize) -> DriverParams {
    DriverParams {
        radius: radius(k),
        step_orw: radius(k),
        step_irs: 28 * k + 1,
        step_irs_attach: 1,
        target: Pattern::K4Minus,
        fatness: k,
        check_invariants: cfg!(debug_assertions),
    }
}

fn require_positive(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("fatness K must be at least 1"));
    }
    Ok(())
}

/// Checks that `comp` is a whole component of `G - ball`.
fn check_component_of(g: &Graph, ball: &VertexSet, comp: &VertexSet) -> Result<()> {
    if comp.is_empty() {
        return Err(Error::precondition("the component is empty"));
    }
    if comp.intersects(ball) {
        return Err(Error::precondition("the component meets the ball"));
    }
    if !crate::graph::is_connected_set(g, comp) {
        return Err(Error::precondition("the component is not connected"));
    }
    for &v in comp {
        for &x in g.neighbors(v) {
            if !comp.contains(x) && !ball.contains(x) {
                return Err(Error::precondition(format!(
                    "vertex {x} is adjacent to the component but outside the ball"
                )));
            }
        }
    }
    Ok(())
}

/// A K4⁻ model from three boundary vertices of a component of `G - B(w, r)`
/// that are pairwise at least `7K` apart.
///
/// Branch sets are `C`, the inner ball `B(w, r + 1 - 3K)`, and the middle
/// thirds of shortest paths from `u1` and `u2` down to the inner ball. The
/// model is checked to be `K`-fat before it is returned.
pub fn fat_k4minus_from_triple(
    gc: &DistCache<'_>,
    w: Vertex,
    r: usize,
    comp: &VertexSet,
    u: [Vertex; 3],
    k: usize,
) -> Result<MinorModel> {
    require_positive(k)?;
    let g = gc.graph();
    let outer = gc.ball(w, r);
    check_component_of(g, &outer, comp)?;
    for &x in &u {
        if !comp.contains(x) || !g.neighbors(x).iter().any(|&y| outer.contains(y)) {
            return Err(Error::precondition(format!(
                "vertex {x} is not on the boundary of the component"
            )));
        }
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        if !gc.at_least(u[a], u[b], 7 * k) {
            return Err(Error::precondition(format!(
                "vertices {} and {} are {} apart, closer than {}",
                u[a],
                u[b],
                gc.d(u[a], u[b]),
                7 * k
            )));
        }
    }
    if r + 1 < 3 * k {
        return Err(Error::precondition("ball radius too small for the construction"));
    }
    let inner = gc.ball(w, r + 1 - 3 * k);
    let mut q = Vec::with_capacity(3);
    for &x in &u {
        let p = shortest_path(g, &VertexSet::singleton(x), &inner, None)
            .ok_or_else(|| Error::internal("boundary vertex cannot reach the inner ball"))?;
        if p.len() != 3 * k {
            return Err(Error::internal(format!(
                "path from {x} to the inner ball has length {}",
                p.len()
            )));
        }
        q.push(p);
    }
    let (k1, k2, k3) = (k, 2 * k, 3 * k);
    let model = MinorModel::new(
        Pattern::K4Minus.graph(),
        vec![
            comp.clone(),
            inner,
            q[0].subpath(k1, k2).vertex_set(),
            q[1].subpath(k1, k2).vertex_set(),
        ],
        // Aligned with the pattern's edges 01 02 03 12 13.
        vec![
            q[2].clone(),
            q[0].subpath(0, k1),
            q[1].subpath(0, k1),
            q[0].subpath(k2, k3),
            q[1].subpath(k2, k3),
        ],
    );
    certify(g, model, k)
}

fn certify(g: &Graph, model: MinorModel, k: usize) -> Result<MinorModel> {
    validate_model(g, &model)
        .map_err(|e| Error::internal(format!("constructed K4- model is invalid: {e}")))?;
    let f = fatness(g, &model)?;
    if !f.is_finite() || f.finite().unwrap() >= k {
        Ok(model)
    } else {
        Err(Error::internal(format!(
            "constructed K4- model is only {f}-fat, below {k}"
        )))
    }
}

/// The path decomposition whose node `h` has bag `⋃ B(p_j, r)` over
/// `|j - h| <= r + 1`. `p` must be a shortest path between its ends.
pub fn path_ball_decomposition(g: &Graph, p: &Path, r: usize) -> Result<PartialDecomposition> {
    if !p.is_path_in(g) {
        return Err(Error::domain("the path is not a path of the graph"));
    }
    let d = bfs(g, &[p.first()]);
    if d[p.last()] as usize != p.len() {
        return Err(Error::domain(format!(
            "the path has length {} but its ends are {} apart",
            p.len(),
            crate::graph::Dist::from_raw(d[p.last()])
        )));
    }
    let balls: Vec<VertexSet> = p
        .vertices()
        .iter()
        .map(|&v| ball(g, &VertexSet::singleton(v), r))
        .collect();
    let n = p.len();
    let bags = (0..=n)
        .map(|h| {
            let lo = h.saturating_sub(r + 1);
            let hi = (h + r + 1).min(n);
            VertexSet::union_all(&balls[lo..=hi])
        })
        .collect();
    let support = VertexSet::union_all(&balls);
    Ok(GraphDecomposition::new(Graph::path_graph(n + 1), bags).into_partial(support))
}

/// Farthest pair in `set` with its distance; `None` if `set` is empty.
fn farthest_pair(gc: &DistCache<'_>, set: &VertexSet) -> Option<(Vertex, Vertex, u32)> {
    let mut best: Option<(Vertex, Vertex, u32)> = None;
    for &a in set {
        let row = gc.row(a);
        for &b in set {
            if b > a && best.is_none_or(|(_, _, d)| row[b] > d) {
                best = Some((a, b, row[b]));
            }
        }
    }
    best.or_else(|| set.first().map(|a| (a, a, 0)))
}

/// Pair from a double BFS sweep; exhaustive search when the sweep falls short of `need`.
fn far_pair(gc: &DistCache<'_>, set: &VertexSet, need: usize) -> Option<(Vertex, Vertex)> {
    let start = set.first()?;
    let sweep = |from: Vertex| {
        let row = gc.row(from);
        set.iter().copied().max_by_key(|&x| (row[x], std::cmp::Reverse(x))).unwrap()
    };
    let a = sweep(start);
    let b = sweep(a);
    if (gc.raw(a, b) as usize) >= need {
        return Some((a.min(b), a.max(b)));
    }
    let (a, b, d) = farthest_pair(gc, set)?;
    ((d as usize) >= need).then_some((a, b))
}

/// Three members of `set` pairwise at least `d` apart, if some are found.
///
/// Exhaustive on small sets; a farthest-point sweep from every start otherwise.
pub fn far_triple(gc: &DistCache<'_>, set: &VertexSet, d: usize) -> Option<[Vertex; 3]> {
    let far = |a: Vertex, b: Vertex| gc.at_least(a, b, d);
    let s = set.as_slice();
    if s.len() <= 64 {
        for (i, &a) in s.iter().enumerate() {
            for (j, &b) in s.iter().enumerate().skip(i + 1) {
                if !far(a, b) {
                    continue;
                }
                if let Some(&c) = s[j + 1..].iter().find(|&&c| far(a, c) && far(b, c)) {
                    return Some([a, b, c]);
                }
            }
        }
        return None;
    }
    for &a in s {
        let ra = gc.row(a);
        let b = *s.iter().max_by_key(|&&x| ra[x])?;
        if !far(a, b) {
            continue;
        }
        let rb = gc.row(b);
        let c = *s.iter().max_by_key(|&&x| ra[x].min(rb[x]))?;
        if far(a, c) && far(b, c) {
            return Some([a, b, c]);
        }
    }
    None
}

/// Result of the path step: a path decomposition on nodes `0..=n` or a witness.
#[derive(Clone, Debug)]
pub enum PathStepOutcome {
    Path(PartialDecomposition),
    Witness(MinorModel),
}

/// Decomposes `C ∪ N(C)` along a shortest path between the two far ends of
/// `∂C`, where `C` is a component of `G - B(w, r)` whose boundary has two
/// vertices at least `42K + 1` apart.
///
/// The result is a path `p_0 .. p_n` of bags where only the end bags meet
/// `N(C)`, and every component of `G - Y` inside `C` has its neighbourhood
/// in one bag. When either fails, a fat K4⁻ is built instead.
pub fn path_decomposition_step(
    gc: &DistCache<'_>,
    b: Ball,
    comp: &Component,
    k: usize,
) -> Result<PathStepOutcome> {
    require_positive(k)?;
    let g = gc.graph();
    let (w, r) = (b.center, b.radius);
    let c = &comp.vertices;
    let bd = &comp.boundary;
    let witness = |u: [Vertex; 3]| -> Result<PathStepOutcome> {
        fat_k4minus_from_triple(gc, w, r, c, u, k).map(PathStepOutcome::Witness)
    };
    let (v1, v2) = far_pair(gc, bd, 42 * k + 1).ok_or_else(|| {
        Error::precondition(format!("no two boundary vertices are {} apart", 42 * k + 1))
    })?;
    let close = |v: Vertex, x: Vertex| (gc.raw(v, x) as usize) < 7 * k;
    let n1: VertexSet = bd.iter().copied().filter(|&x| close(v1, x)).collect();
    let n2: VertexSet = bd.iter().copied().filter(|&x| close(v2, x)).collect();
    if let Some(&u) = bd.iter().find(|&&x| !n1.contains(x) && !n2.contains(x)) {
        return witness([v1, v2, u]);
    }

    let mut allowed = c.mask(g.n());
    for v in gc.ball(v1, 21 * k - 1).iter().chain(gc.ball(v2, 21 * k - 1).iter()) {
        allowed[*v] = true;
    }
    let gp = g.restricted(&allowed);
    let p = shortest_path(&gp, &n1, &n2, None)
        .ok_or_else(|| Error::internal("no path joins the two ends of the boundary"))?;
    let (p0, pn) = (p.first(), p.last());
    if let Some(&u) = n1.iter().find(|&&x| !close(p0, x)) {
        return witness([u, p0, v2]);
    }
    if let Some(&u) = n2.iter().find(|&&x| !close(pn, x)) {
        return witness([u, pn, v1]);
    }
    if !p.vertices().iter().all(|&v| c.contains(v)) {
        return Err(Error::internal("the joining path leaves the component"));
    }

    let rp = 14 * k;
    let base = path_ball_decomposition(&gp, &p, rp)?;
    let closed = c.union(&comp.neighborhood);
    let y = base.support.intersection(&closed);
    let n = p.len();
    let bags: Vec<VertexSet> = base
        .inner
        .bags
        .iter()
        .enumerate()
        .map(|(h, bag)| {
            let bag = bag.intersection(&y);
            if h == 0 || h == n {
                bag
            } else {
                bag.difference(&comp.neighborhood)
            }
        })
        .collect();
    let ends = bags[0].union(&bags[n]);
    if !comp.neighborhood.union(bd).is_subset(&ends) {
        return Err(Error::internal("the end bags miss part of N(C) or the boundary"));
    }
    let pd = GraphDecomposition::new(Graph::path_graph(n + 1), bags).into_partial(y);

    // Every leftover component inside C must see a single bag.
    let traces = pd.inner.traces(g.n());
    for cc in components(g, &pd.support) {
        if !cc.vertices.intersects(c) {
            continue;
        }
        let mut common: Option<Vec<usize>> = None;
        for &v in &cc.neighborhood {
            let t = &traces[v];
            common = Some(match common {
                None => t.clone(),
                Some(mut s) => {
                    s.retain(|h| t.binary_search(h).is_ok());
                    s
                }
            });
        }
        if common.is_some_and(|s| !s.is_empty()) {
            continue;
        }
        if let Some(m) = straddling_witness(gc, b, &p, &cc, k)? {
            return Ok(PathStepOutcome::Witness(m));
        }
        return Err(Error::internal(format!(
            "component at vertex {} sees two far bags but no K4- witness was found",
            cc.vertices.as_slice()[0]
        )));
    }
    Ok(PathStepOutcome::Path(pd))
}

/// A component `C'` of `G - Y` whose neighbourhood touches balls around
/// `p_{j1}` and `p_{j2}` with `j2 - j1 > 2(14K + 1)`: build the ball and
/// triple from the case analysis, falling back to a search along `P`.
fn straddling_witness(
    gc: &DistCache<'_>,
    b: Ball,
    p: &Path,
    cc: &Component,
    k: usize,
) -> Result<Option<MinorModel>> {
    let g = gc.graph();
    let rp = 14 * k;
    let pv = p.vertices();
    let n = p.len();
    // Index ranges of path vertices within r_P of each neighbour of C'.
    let mut lo_max = (0usize, usize::MAX); // (j, y) maximising min J_y
    let mut hi_min = (usize::MAX, usize::MAX); // (j, y) minimising max J_y
    for &y in &cc.neighborhood {
        let row = gc.row(y);
        let js: Vec<usize> = (0..=n).filter(|&j| (row[pv[j]] as usize) <= rp).collect();
        let (Some(&lo), Some(&hi)) = (js.first(), js.last()) else {
            continue;
        };
        if lo_max.1 == usize::MAX || lo > lo_max.0 {
            lo_max = (lo, y);
        }
        if hi < hi_min.0 {
            hi_min = (hi, y);
        }
    }
    let (j1, y1) = hi_min;
    let (j2, _) = lo_max;
    if j1 != usize::MAX && j2 != usize::MAX && j2 > j1 + 2 * (rp + 1) {
        let z1 = *g
            .neighbors(y1)
            .iter()
            .find(|&&z| cc.vertices.contains(z))
            .expect("y1 is a neighbour of the component");
        let attempt = if j1 > 7 * k {
            let q1 = shortest_path(g, &VertexSet::singleton(pv[j1]), &VertexSet::singleton(z1), None);
            q1.filter(|q| q.len() > 7 * k + 1).map(|q| {
                (7 * k, [pv[j1 - 7 * k - 1], pv[j1 + 7 * k + 1], q.get(7 * k + 1)])
            })
        } else {
            let w1 = shortest_path(
                g,
                &VertexSet::singleton(b.center),
                &VertexSet::singleton(pv[0]),
                None,
            );
            w1.and_then(|w1| {
                let i = (b.radius + j1).checked_sub(14 * k)?;
                (i <= w1.len()).then(|| (14 * k, [w1.get(i), pv[j1 + 14 * k + 1], z1]))
            })
        };
        if let Some((t, u)) = attempt {
            if let Some(m) = triple_in_one_component(gc, pv[j1], t, u, k)? {
                return Ok(Some(m));
            }
        }
    }
    // Generic search: some ball along P cuts off a component with a far triple.
    for &c in pv {
        for t in 7 * k..=14 * k {
            let bl = gc.ball(c, t);
            for comp in components(g, &bl) {
                if let Some(u) = far_triple(gc, &comp.boundary, 7 * k) {
                    return fat_k4minus_from_triple(gc, c, t, &comp.vertices, u, k).map(Some);
                }
            }
        }
    }
    Ok(None)
}

/// Runs the triple construction if `u` sits on the boundary of one component of `G - B(c, t)`.
fn triple_in_one_component(
    gc: &DistCache<'_>,
    c: Vertex,
    t: usize,
    u: [Vertex; 3],
    k: usize,
) -> Result<Option<MinorModel>> {
    let g = gc.graph();
    let bl = gc.ball(c, t);
    let Some(comp) = components(g, &bl)
        .into_iter()
        .find(|cm| cm.vertices.contains(u[0]))
    else {
        return Ok(None);
    };
    let ok = u.iter().all(|&x| comp.boundary.contains(x))
        && [(0, 1), (0, 2), (1, 2)]
            .iter()
            .all(|&(a, b)| gc.at_least(u[a], u[b], 7 * k));
    if !ok {
        return Ok(None);
    }
    fat_k4minus_from_triple(gc, c, t, &comp.vertices, u, k).map(Some)
}

/// One star step for the K4⁻ pipeline.
///
/// A far triple on `∂C` gives a witness. Otherwise a boundary of diameter at
/// most `42K` is covered by two nodes `N(C)` and `N(C) ∪ ∂C`; a longer one by
/// the path step closed into a cycle through a node with bag `N(C)`.
pub fn cactus_star_step(
    gc: &DistCache<'_>,
    b: Ball,
    comp: &Component,
    k: usize,
) -> Result<StepOutcome> {
    require_positive(k)?;
    if b.radius > radius(k) {
        return Err(Error::precondition(format!(
            "ball radius {} exceeds {}",
            b.radius,
            radius(k)
        )));
    }
    let bd = &comp.boundary;
    let nc = &comp.neighborhood;
    if let Some(u) = far_triple(gc, bd, 7 * k) {
        return fat_k4minus_from_triple(gc, b.center, b.radius, &comp.vertices, u, k)
            .map(StepOutcome::Witness);
    }
    let (_, _, diam) = farthest_pair(gc, bd)
        .ok_or_else(|| Error::precondition("the component has an empty boundary"))?;
    if diam != UNREACHED && (diam as usize) <= 42 * k {
        let mut graph = Graph::empty(2);
        graph.add_edge(0, 1)?;
        let top = nc.union(bd);
        let d = GraphDecomposition::new(graph, vec![nc.clone(), top.clone()]);
        return Ok(StepOutcome::Decomposition(StepDecomposition {
            partial: d.into_partial(top),
            anchor: 0,
        }));
    }
    match path_decomposition_step(gc, b, comp, k)? {
        PathStepOutcome::Witness(m) => Ok(StepOutcome::Witness(m)),
        PathStepOutcome::Path(mut pd) => {
            let last = pd.inner.node_count() - 1;
            let h = pd.inner.add_node(nc.clone());
            pd.inner.graph.add_edge(h, 0)?;
            pd.inner.graph.add_edge(h, last)?;
            pd.support = pd.support.union(nc);
            Ok(StepOutcome::Decomposition(StepDecomposition {
                partial: pd,
                anchor: h,
            }))
        }
    }
}

/// Decomposes `G` on a K4⁻-minor-free graph with bag radius at most `42K + 1`
/// and spread at most `28K + 3`, or returns a `K`-fat K4⁻ model.
pub fn decompose_cactus(g: &Graph, k: usize) -> Result<Outcome> {
    require_positive(k)?;
    extension_driver(g, &driver_params(k), |gc, b, comp| {
        cactus_star_step(gc, b, comp, k)
    })
}
