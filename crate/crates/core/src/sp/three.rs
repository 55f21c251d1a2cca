//! Components whose boundary holds three far vertices.

use super::menger::far_from_component;
use super::two_ball::{assemble, check_step_properties, two_ball_component_decomposition, TwoBallDecomposition};
use super::util::{erase_loops, extend_walk, neighborhood, segment, set_dist, union_of_induced};
use super::{fat_k4_from_three_paths, found, Found, SpContext};
use crate::decomp::{validate_partial, Ball, GraphDecomposition, StepDecomposition};
use crate::error::{Error, Result};
use crate::graph::{
    bfs, bfs_within, components, is_connected_set, shortest_path, Component, DistCache, Graph,
    Path, Vertex, VertexSet, UNREACHED,
};
use crate::minors::{is_minor_free, MinorModel, Pattern};

/// Three paths from `B(w', 2d)` to `B(w, r - ℓ)`, pairwise at least `d`
/// apart, with `w'` in the component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePaths {
    pub w_prime: Vertex,
    pub paths: [Path; 3],
}

/// Checks the output of [`three_paths_far_apart`].
pub fn check_three_paths(
    gc: &DistCache<'_>,
    w: Vertex,
    r: usize,
    comp: &Component,
    ell: usize,
    d: usize,
    tp: &ThreePaths,
) -> Result<()> {
    let g = gc.graph();
    let n = g.n();
    if !comp.vertices.contains(tp.w_prime) {
        return Err(Error::structural(format!("w' = {} is not in the component", tp.w_prime)));
    }
    let a = gc.ball(tp.w_prime, 2 * d).mask(n);
    let inner = gc.ball(w, r - ell).mask(n);
    for (i, p) in tp.paths.iter().enumerate() {
        let v = p.vertices();
        let ok = p.is_path_in(g)
            && a[p.first()]
            && inner[p.last()]
            && v[1..v.len() - 1].iter().all(|&x| !a[x] && !inner[x]);
        if !ok {
            return Err(Error::structural(format!("path {i} does not run from B(w', 2d) to B(w, r - l)")));
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let dd = set_dist(g, &tp.paths[i].vertex_set(), &tp.paths[j].vertex_set());
        if !dd.finite().is_none_or(|x| x >= d) {
            return Err(Error::structural(format!("paths {i} and {j} are {dd} apart, closer than {d}")));
        }
    }
    Ok(())
}

/// Depth below the boundary inside `C` and the `U_i` membership tables.
struct Descent {
    depth: Vec<u32>,
    /// `inside[i][v]`: every boundary vertex reached by descending from `v`
    /// is closer than `s` to `u_i`.
    inside: [Vec<bool>; 3],
}

impl Descent {
    fn new(gc: &DistCache<'_>, comp: &Component, u: [Vertex; 3], s: usize) -> Self {
        let g = gc.graph();
        let n = g.n();
        let cmask = comp.vertices.mask(n);
        let depth = bfs_within(g, comp.boundary.as_slice(), &cmask);
        let mut order: Vec<Vertex> = comp.vertices.iter().copied().collect();
        order.sort_by_key(|&v| depth[v]);
        let rows = u.map(|x| gc.row(x));
        let mut inside = [vec![false; n], vec![false; n], vec![false; n]];
        for &v in &order {
            for i in 0..3 {
                inside[i][v] = if depth[v] == 0 {
                    (rows[i][v] as usize) < s
                } else {
                    g.neighbors(v)
                        .iter()
                        .filter(|&&y| cmask[y] && depth[y] + 1 == depth[v])
                        .all(|&y| inside[i][y])
                };
            }
        }
        Descent { depth, inside }
    }

    fn preds<'a>(&'a self, g: &'a Graph, v: Vertex) -> impl Iterator<Item = Vertex> + 'a {
        let dv = self.depth[v];
        g.neighbors(v)
            .iter()
            .copied()
            .filter(move |&y| dv > 0 && self.depth[y] != UNREACHED && self.depth[y] + 1 == dv)
    }

    /// Descends from `v` to the boundary along smallest predecessors.
    fn descend(&self, g: &Graph, v: Vertex) -> Vec<Vertex> {
        let mut out = vec![v];
        let mut cur = v;
        while self.depth[cur] > 0 {
            cur = self.preds(g, cur).min().expect("every vertex below the boundary has a predecessor");
            out.push(cur);
        }
        out
    }

    /// A descending path from `v` to a boundary vertex accepted by `ok`.
    fn descend_to(&self, g: &Graph, v: Vertex, ok: impl Fn(Vertex) -> bool) -> Option<Vec<Vertex>> {
        let mut parent = std::collections::HashMap::new();
        let mut stack = vec![v];
        parent.insert(v, v);
        while let Some(x) = stack.pop() {
            if self.depth[x] == 0 && ok(x) {
                let mut out = vec![x];
                let mut cur = x;
                while cur != v {
                    cur = parent[&cur];
                    out.push(cur);
                }
                out.reverse();
                return Some(out);
            }
            let mut next: Vec<Vertex> = self.preds(g, x).filter(|y| !parent.contains_key(y)).collect();
            next.sort_unstable_by(|a, b| b.cmp(a));
            for y in next {
                parent.insert(y, x);
                stack.push(y);
            }
        }
        None
    }
}

/// For a component `C` of `G - B(w, r)` with three boundary vertices
/// pairwise at least `4(2ℓ + d + 2)` apart: a vertex `w' ∈ C` and three
/// `B(w', 2d)`–`B(w, r - ℓ)` paths pairwise at least `d` apart.
///
/// The construction follows a path `P` through `C` between the regions that
/// descend onto two of the far boundary vertices, a path `Q` from the third
/// towards `P`, and a descent `W` from `P` past the boundary into the ball.
/// Labels, tie-breaks and the choice of boundary vertex are varied until the
/// checked output comes out right.
pub fn three_paths_far_apart(
    gc: &DistCache<'_>,
    w: Vertex,
    r: usize,
    comp: &Component,
    ell: usize,
    d: usize,
    triple: [Vertex; 3],
) -> Result<ThreePaths> {
    let g = gc.graph();
    let s = 2 * ell + d + 2;
    if r < ell {
        return Err(Error::precondition(format!("ball radius {r} is below l = {ell}")));
    }
    if !neighborhood(g, &comp.vertices).is_subset(&gc.ball(w, r)) || comp.vertices.contains(w) {
        return Err(Error::precondition("the component is not a component outside the ball"));
    }
    for &x in &triple {
        if !comp.boundary.contains(x) {
            return Err(Error::precondition(format!("vertex {x} is not on the boundary")));
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if !gc.at_least(triple[i], triple[j], 4 * s) {
            return Err(Error::precondition(format!(
                "boundary vertices {} and {} are closer than {}",
                triple[i],
                triple[j],
                4 * s
            )));
        }
    }
    let desc = Descent::new(gc, comp, triple, s);
    let mut last = None;
    for rot in 0..3 {
        let order = [rot, (rot + 1) % 3, (rot + 2) % 3];
        for smallest in [true, false] {
            match attempt(gc, w, r, comp, ell, d, s, &desc, triple, order, smallest) {
                Ok(tp) => {
                    if check_three_paths(gc, w, r, comp, ell, d, &tp).is_ok() {
                        return Ok(tp);
                    }
                    last = check_three_paths(gc, w, r, comp, ell, d, &tp).err();
                }
                Err(e) => last = Some(e),
            }
        }
    }
    Err(Error::internal(format!(
        "no variant of the three-path construction checked out: {}",
        last.map_or_else(String::new, |e| e.to_string())
    )))
}

#[allow(clippy::too_many_arguments)]
fn attempt(
    gc: &DistCache<'_>,
    w: Vertex,
    r: usize,
    comp: &Component,
    ell: usize,
    d: usize,
    s: usize,
    desc: &Descent,
    triple: [Vertex; 3],
    order: [usize; 3],
    smallest: bool,
) -> Result<ThreePaths> {
    let g = gc.graph();
    let n = g.n();
    let cmask = comp.vertices.mask(n);
    let set_of = |i: usize| VertexSet::from_mask(&desc.inside[i]);
    let (i1, i2, i3) = (order[0], order[1], order[2]);
    let u1set = set_of(i1);
    let p_prime = shortest_path(g, &u1set, &set_of(i2).union(&set_of(i3)), Some(&cmask))
        .ok_or_else(|| Error::internal("the component does not join the descent regions"))?;
    let (mut i2, i3) = if desc.inside[i3][p_prime.last()] { (i3, i2) } else { (i2, i3) };
    // P runs from the boundary below u1 to the boundary below u2.
    let mut pw: Vec<Vertex> = desc.descend(g, p_prime.first());
    pw.reverse();
    extend_walk(&mut pw, p_prime.vertices());
    extend_walk(&mut pw, &desc.descend(g, p_prime.last()));
    let mut pw = erase_loops(&pw);
    let u3 = triple[i3];
    let near_p = crate::graph::ball(g, &pw.iter().copied().collect(), 2 * d).intersection(&comp.vertices);
    let q = shortest_path(g, &VertexSet::singleton(u3), &near_p, Some(&cmask))
        .ok_or_else(|| Error::internal("the third boundary vertex cannot reach P"))?;
    let qrow = gc.row(q.last());
    let p = *pw
        .iter()
        .filter(|&&x| (qrow[x] as usize) <= 2 * d)
        .min_by_key(|&&x| qrow[x])
        .ok_or_else(|| Error::internal("no vertex of P near the end of Q"))?;
    let r3 = gc.row(u3);
    let down = desc
        .descend_to(g, p, |x| r3[x] as usize >= s)
        .ok_or_else(|| Error::internal("every descent from p ends near u3"))?;
    let x = *down.last().unwrap();
    if (gc.raw(x, triple[i2]) as usize) < 2 * s {
        // Swap the roles of the two ends of P.
        pw.reverse();
        i2 = i1;
    }
    if (gc.raw(x, triple[i2]) as usize) < 2 * s {
        return Err(Error::internal("the descent ends near both ends of P"));
    }
    let wrow = gc.row(w);
    let y = *g
        .neighbors(x)
        .iter()
        .filter(|&&y| wrow[y] as usize == r)
        .min()
        .ok_or_else(|| Error::internal("a boundary vertex has no neighbour in the ball"))?;
    let mut wv = down.clone();
    wv.push(y);
    let mut cur = y;
    for _ in 0..ell {
        cur = *g
            .neighbors(cur)
            .iter()
            .filter(|&&z| wrow[z] + 1 == wrow[cur])
            .min()
            .expect("a vertex at positive distance has a neighbour closer to w");
        wv.push(cur);
    }
    let k = wv.len() - 1;
    let dw = bfs(g, &wv);
    let near_w = |v: Vertex| (dw[v] as usize) <= 2 * d;
    let qv = q.vertices();
    let t3 = qv.iter().position(|&v| near_w(v)).expect("the end of Q is near p");
    let t2 = pw.iter().rposition(|&v| near_w(v)).expect("p itself lies on W");
    let index_of = |x: Vertex| -> usize {
        let row = gc.row(x);
        if smallest {
            (0..=k).find(|&i| (row[wv[i]] as usize) <= 2 * d).unwrap()
        } else {
            (0..=k).min_by_key(|&i| (row[wv[i]], i)).unwrap()
        }
    };
    let (x2, x3) = (pw[t2], qv[t3]);
    let (j2, j3) = (index_of(x2), index_of(x3));
    // Arm: start vertex, tail to the boundary, index on W.
    let arm_p: (Vertex, Vec<Vertex>, usize) = (x2, pw[t2..].to_vec(), j2);
    let mut q_back: Vec<Vertex> = qv[..=t3].to_vec();
    q_back.reverse();
    let arm_q: (Vertex, Vec<Vertex>, usize) = (x3, q_back, j3);
    let (direct, bent) = if j3 <= j2 { (arm_p, arm_q) } else { (arm_q, arm_p) };
    let hi = direct.2;
    if hi + 2 * d > k {
        return Err(Error::internal("the descent W is too short"));
    }
    let w_prime = wv[hi];
    let a_mask = gc.ball(w_prime, 2 * d).mask(n);
    let inner = gc.ball(w, r - ell);
    let inner_mask = inner.mask(n);
    let to_inner = |e: Vertex| -> Result<Vec<Vertex>> {
        shortest_path(g, &VertexSet::singleton(e), &inner, None)
            .map(|p| p.vertices().to_vec())
            .ok_or_else(|| Error::internal("the inner ball is unreachable"))
    };
    let p1: Vec<Vertex> = wv[hi + 2 * d..].to_vec();
    let mut p2 = direct.1.clone();
    let e2 = *p2.last().unwrap();
    extend_walk(&mut p2, &to_inner(e2)?);
    let rpath = shortest_path(g, &VertexSet::singleton(bent.0), &VertexSet::singleton(wv[bent.2]), None)
        .expect("connected");
    let mut rp: Vec<Vertex> = rpath.vertices().to_vec();
    let lo = bent.2;
    if lo <= hi {
        extend_walk(&mut rp, &wv[lo..=hi]);
    } else {
        let mut back: Vec<Vertex> = wv[hi..=lo].to_vec();
        back.reverse();
        extend_walk(&mut rp, &back);
    }
    let rb = rp.iter().position(|&v| a_mask[v]).expect("the walk ends at w'");
    let mut p3: Vec<Vertex> = rp[..=rb].to_vec();
    p3.reverse();
    extend_walk(&mut p3, &bent.1);
    let e3 = *p3.last().unwrap();
    extend_walk(&mut p3, &to_inner(e3)?);
    let trim = |walk: &[Vertex]| {
        segment(walk, &a_mask, &inner_mask).ok_or_else(|| Error::internal("a walk misses one of the balls"))
    };
    Ok(ThreePaths {
        w_prime,
        paths: [trim(&p1)?, trim(&p2)?, trim(&p3)?],
    })
}

/// A fat K4 from three paths that all come within `5K` of one component
/// between `B(w, r_in)` and `A`: shorten them to
/// `B(w, r_in - 3K)`–`B(w', 19K)` paths and apply the three-path construction.
fn near_paths_witness(
    cx: &SpContext<'_, '_>,
    w: Vertex,
    r_in: usize,
    w_prime: Vertex,
    paths: &[Path; 3],
) -> Result<MinorModel> {
    let g = cx.graph();
    let n = g.n();
    let k = cx.k();
    if r_in < 3 * k {
        return Err(Error::precondition("inner radius too small"));
    }
    let b1 = cx.gc.ball(w, r_in - 3 * k);
    let b2 = cx.gc.ball(w_prime, 19 * k);
    let base = union_of_induced(g, &[&cx.gc.ball(w, r_in).mask(n), &cx.gc.ball(w_prime, 22 * k).mask(n)]);
    let shortened: Vec<Path> = paths
        .iter()
        .map(|p| {
            let mut h = base.clone();
            h.add_path_edges(p);
            shortest_path(&h, &b1, &b2, None).ok_or_else(|| Error::internal("a path does not join the shrunken balls"))
        })
        .collect::<Result<_>>()?;
    let arr: [Path; 3] = shortened.try_into().expect("three paths");
    fat_k4_from_three_paths(cx.gc, [w, w_prime], [r_in - 3 * k, 19 * k], &arr, k)
}

/// For a component `C` of `G - B(w, r)` with three far boundary vertices: a
/// vertex `w' ∈ C` and three far paths such that every component between
/// `B(w, r - ℓ)` and `B(w', 22K)` attaching to both is `5K` away from one
/// of them, or a fat K4.
pub fn ball_and_three_components(
    cx: &SpContext<'_, '_>,
    w: Vertex,
    r: usize,
    comp: &Component,
    ell: usize,
    triple: [Vertex; 3],
) -> Result<Found<ThreePaths>> {
    let g = cx.graph();
    let k = cx.k();
    let tp = three_paths_far_apart(cx.gc, w, r, comp, ell, 11 * k, triple)?;
    let a = cx.gc.ball(tp.w_prime, 22 * k);
    let bp = cx.gc.ball(w, r - ell);
    for d in components(g, &a.union(&bp)) {
        if !(d.neighborhood.intersects(&a) && d.neighborhood.intersects(&bp)) {
            continue;
        }
        if !tp.paths.iter().any(|p| far_from_component(cx, p, &d.vertices)) {
            return near_paths_witness(cx, w, r - ell, tp.w_prime, &tp.paths).map(Found::Witness);
        }
    }
    Ok(Found::Value(tp))
}

/// Two-ball decomposition where the second ball is absorbed whole.
///
/// Runs [`two_ball_component_decomposition`] with the second radius cut to
/// `r2 - ℓ - 1`, contracts every node whose bag comes within one of
/// `B(v2, r2)` into the sink, and sets the terminal bags to `B(v1, r1)` and
/// the merged bags together with `B(v2, r2)`.
pub fn two_ball_decomposition_absorbing(
    cx: &SpContext<'_, '_>,
    v: [Vertex; 2],
    r: [usize; 2],
    comp: &VertexSet,
    p: &Path,
) -> Result<Found<TwoBallDecomposition>> {
    let c = &cx.consts;
    if r[0] > c.r0 || r[1] <= c.ell + 1 {
        return Err(Error::precondition(format!(
            "radii must satisfy r1 <= {} and r2 > {}",
            c.r0,
            c.ell + 1
        )));
    }
    if !cx.gc.at_least(v[0], v[1], r[0] + r[1] + 2) {
        return Err(Error::precondition("the centres are too close"));
    }
    let inner = found!(two_ball_component_decomposition(cx, v, [r[0], r[1] - c.ell - 1], comp, p)?);
    let h1 = &inner.partial.inner;
    let reach = cx.gc.ball(v[1], r[1] + 1);
    let tilde: Vec<bool> = h1.bags.iter().map(|b| b.intersects(&reach)).collect();
    if !tilde[inner.sink] || tilde[inner.source] {
        return Err(Error::internal("the absorbed part must hold the sink and not the source"));
    }
    let tilde_set: VertexSet = (0..tilde.len()).filter(|&h| tilde[h]).collect();
    if !is_connected_set(&h1.graph, &tilde_set) {
        return Err(Error::internal("the nodes near the second ball are not connected"));
    }
    // Contract: the sink takes the slot of the whole absorbed part.
    let mut id = vec![usize::MAX; tilde.len()];
    let mut next = 0;
    for h in 0..tilde.len() {
        if !tilde[h] || h == inner.sink {
            id[h] = next;
            next += 1;
        }
    }
    let sink = id[inner.sink];
    for h in 0..tilde.len() {
        if tilde[h] {
            id[h] = sink;
        }
    }
    let b1 = cx.gc.ball(v[0], r[0]);
    let b2 = cx.gc.ball(v[1], r[1]);
    let mut bags = vec![VertexSet::new(); next];
    for (h, bag) in h1.bags.iter().enumerate() {
        bags[id[h]] = bags[id[h]].union(bag);
    }
    let source = id[inner.source];
    bags[source] = bags[source].union(&b1);
    bags[sink] = bags[sink].union(&b2);
    let mut graph = Graph::empty(next);
    for (x, y) in h1.graph.edges() {
        if id[x] != id[y] {
            graph.add_edge(id[x], id[y])?;
        }
    }
    let support = inner.partial.support.union(&b1).union(&b2);
    let out = TwoBallDecomposition {
        partial: GraphDecomposition::new(graph, bags).into_partial(support),
        source,
        sink,
    };
    if cx.check {
        check_absorbing(cx, v, r, comp, &out).map_err(|e| Error::internal(format!("absorbing two-ball step: {e}")))?;
    }
    Ok(Found::Value(out))
}

/// Checks the guarantees of [`two_ball_decomposition_absorbing`]: an honest
/// decomposition on a series-parallel graph with terminal bags `B1` and
/// `⊇ B2`, radii `R0'` away from the sink and `r2 + 2R0' + 1` at it, spread
/// at most 3, and every leftover component meeting `D` on the `v1` side seen
/// by one bag, with neighbourhood radius at most `R2 - 1`.
pub fn check_absorbing(
    cx: &SpContext<'_, '_>,
    v: [Vertex; 2],
    r: [usize; 2],
    comp: &VertexSet,
    out: &TwoBallDecomposition,
) -> Result<()> {
    let g = cx.graph();
    let c = &cx.consts;
    let pd = &out.partial;
    let rep = validate_partial(g, pd);
    if let Some(e) = rep.first_violation() {
        return Err(Error::structural(e));
    }
    let mut h = pd.inner.graph.clone();
    let _ = h.add_edge(out.source, out.sink);
    if !is_minor_free(&h, Pattern::K4) {
        return Err(Error::structural("the model graph plus the terminal edge has a K4 minor"));
    }
    let b1 = cx.gc.ball(v[0], r[0]);
    let b2 = cx.gc.ball(v[1], r[1]);
    if pd.inner.bags[out.source] != b1 || !b2.is_subset(&pd.inner.bags[out.sink]) {
        return Err(Error::structural("terminal bags are not B1 and a superset of B2"));
    }
    let allowed = b1.union(&comp.union(&neighborhood(g, comp))).union(&b2);
    if !pd.support.is_subset(&allowed) {
        return Err(Error::structural("the support leaves B1 ∪ D ∪ N(D) ∪ B2"));
    }
    for (x, bag) in pd.inner.bags.iter().enumerate() {
        let rad = cx.gc.rad(bag);
        let bound = if x == out.sink { r[1] + 2 * c.r0p + 1 } else { c.r0p };
        if !rad.at_most(bound) {
            return Err(Error::structural(format!("bag {x} has radius {rad}, above {bound}")));
        }
    }
    if !rep.spread.at_most(3) {
        return Err(Error::structural(format!("spread {} exceeds 3", rep.spread)));
    }
    let side = components(g, &b2)
        .into_iter()
        .find(|cm| cm.vertices.contains(v[0]))
        .map(|cm| cm.vertices)
        .unwrap_or_default();
    let traces = pd.inner.traces(g.n());
    for cm in components(g, &pd.support) {
        if !cm.vertices.intersects(comp) || !cm.vertices.intersects(&side) {
            continue;
        }
        if !cx.gc.rad(&cm.neighborhood).at_most(c.r2 - 1) {
            return Err(Error::structural("a leftover component has a wide neighbourhood"));
        }
        if !common_node(&traces, &cm.neighborhood) {
            return Err(Error::structural(format!(
                "no bag holds the neighbourhood of the component at vertex {}",
                cm.vertices.as_slice()[0]
            )));
        }
    }
    Ok(())
}

pub(crate) fn common_node(traces: &[Vec<usize>], set: &VertexSet) -> bool {
    find_common_node(traces, set).is_some()
}

pub(crate) fn find_common_node(traces: &[Vec<usize>], set: &VertexSet) -> Option<usize> {
    let mut it = set.iter();
    let mut cand = traces[*it.next()?].clone();
    for &v in it {
        cand.retain(|h| traces[v].binary_search(h).is_ok());
    }
    cand.first().copied()
}

/// Star step for a component `C` of `G - B(w, r)` when some component `C*`
/// of `C` minus the collar has three boundary vertices pairwise at least
/// `R1` apart.
///
/// Three far paths give a second centre `w'`. Every component `D` between
/// `B(w', 22K)` and the inner ball that meets `C` gets an absorbing two-ball
/// decomposition; these are glued in parallel, closed by the anchor `g` with
/// bag `N(C)`, given pendant bags for leftover pieces, and restricted to
/// `C ∪ N(C)`.
pub fn three_vertices_step(
    cx: &SpContext<'_, '_>,
    b: Ball,
    comp: &Component,
    star: &Component,
    triple: [Vertex; 3],
) -> Result<Found<StepDecomposition>> {
    let g = cx.graph();
    let c = &cx.consts;
    let k = cx.k();
    let (w, r) = (b.center, b.radius);
    let collar = r + c.collar();
    if !star.vertices.is_subset(&comp.vertices) || !neighborhood(g, &star.vertices).is_subset(&cx.gc.ball(w, collar)) {
        return Err(Error::precondition("C* is not a component of C outside the collar"));
    }
    if r <= c.ell + 1 {
        return Err(Error::precondition(format!("ball radius {r} is too small for this step")));
    }
    let ell_total = c.ell + c.collar();
    let tp = found!(ball_and_three_components(cx, w, collar, star, ell_total, triple)?);
    let wp = tp.w_prime;
    let b1 = cx.gc.ball(wp, 22 * k);
    let cut = r - c.ell - 1;
    let b2p = cx.gc.ball(w, cut);
    // Paths end in B(w, r - ℓ); one more step reaches B(w, r - ℓ - 1).
    let wrow = cx.gc.row(w);
    let paths: Vec<Path> = tp
        .paths
        .iter()
        .map(|p| {
            let mut walk = p.vertices().to_vec();
            let end = *walk.last().unwrap();
            if wrow[end] as usize > cut {
                let next = *g.neighbors(end).iter().filter(|&&z| wrow[z] + 1 == wrow[end]).min().unwrap();
                walk.push(next);
            }
            segment(&walk, &b1.mask(g.n()), &b2p.mask(g.n()))
                .ok_or_else(|| Error::internal("a far path does not join the two balls"))
        })
        .collect::<Result<_>>()?;

    let closed_c = comp.vertices.union(&comp.neighborhood);
    let removed = b1.union(&b2p);
    let mut subs = Vec::new();
    for d in components(g, &removed) {
        if !d.vertices.intersects(&comp.vertices) || !d.neighborhood.intersects(&b2p) {
            continue;
        }
        if !d.neighborhood.intersects(&b1) {
            return Err(Error::internal("a component between the balls misses the ball around w'"));
        }
        let Some(p) = paths.iter().find(|p| far_from_component(cx, p, &d.vertices)) else {
            let arr: [Path; 3] = paths.clone().try_into().expect("three paths");
            return near_paths_witness(cx, w, cut, wp, &arr).map(Found::Witness);
        };
        let sub = found!(two_ball_decomposition_absorbing(cx, [wp, w], [22 * k, r], &d.vertices, p)?);
        subs.push(sub);
    }
    if subs.is_empty() {
        return Err(Error::internal("no component joins the two balls inside C"));
    }

    // h1 = 0, h2 = 1, g = 2; h2 - g closes the parallel composition.
    let (mut gd, support) = assemble(&subs, 3, &[(1, 2)]);
    gd.bags[2] = comp.neighborhood.clone();
    let y1 = support.union(&comp.neighborhood);
    let traces = gd.traces(g.n());
    let mut extra = VertexSet::new();
    for cc in components(g, &y1) {
        if !cc.vertices.intersects(&comp.vertices) {
            continue;
        }
        let home = components(g, &removed).into_iter().find(|d| d.vertices.contains(cc.vertices.as_slice()[0]));
        let Some(home) = home else { continue };
        if !home.neighborhood.intersects(&b2p) {
            continue;
        }
        let h = find_common_node(&traces, &cc.neighborhood).ok_or_else(|| {
            Error::internal(format!(
                "no bag holds the neighbourhood of the leftover component at vertex {}",
                cc.vertices.as_slice()[0]
            ))
        })?;
        let x = gd.add_node(cc.neighborhood.union(&cc.boundary));
        gd.graph.add_edge(h, x)?;
        extra = extra.union(&cc.boundary);
    }
    let y2 = y1.union(&extra);
    let full = gd.into_partial(y2);
    let restricted = full.restrict(&closed_c.intersection(&full.support));
    let (mut pd, map) = restricted.drop_empty_nodes();
    for (x, y) in pd.inner.dishonest_edges() {
        pd.inner.graph.remove_edge(x, y);
    }
    let anchor = map[2].ok_or_else(|| Error::internal("the anchor bag vanished"))?;
    let step = StepDecomposition { partial: pd, anchor };
    if cx.check {
        check_step_properties(cx, comp, &step, (r + 2 * c.r0p + 2).max(c.r2), 7)
            .map_err(|e| Error::internal(format!("three-vertex step: {e}")))?;
    }
    Ok(Found::Value(step))
}
