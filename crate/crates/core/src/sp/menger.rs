//! Coarse Menger: one ball hits every `X`–`Y` path, or two paths are far apart.

use super::util::{
    closed, erase_loops, extend_walk, far_apart, middle_out, neighborhood, path_within, segment,
    union_of_induced,
};
use super::{fat_k4_from_three_paths, Budget, Found, SpContext};
use crate::error::{Error, Result};
use crate::graph::{ball, bfs_within, is_connected_set, shortest_path, Graph, Path, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MengerOutcome {
    /// Removing `B(center, radius)` separates `X` from `Y`.
    HittingBall { center: Vertex, radius: usize },
    /// Two `X`–`Y` paths at distance at least `d`.
    TwoPaths(Path, Path),
}

/// Whether removing `removed` leaves no `X`–`Y` path in `h`.
fn separates(h: &Graph, x: &VertexSet, y: &VertexSet, removed: &VertexSet) -> bool {
    let n = h.n();
    let mut allowed = vec![true; n];
    for &v in removed {
        allowed[v] = false;
    }
    let sources: Vec<Vertex> = x.iter().copied().filter(|&v| allowed[v]).collect();
    let d = bfs_within(h, &sources, &allowed);
    !y.iter().any(|&v| allowed[v] && d[v] != crate::graph::UNREACHED)
}

/// Scans `q` from the middle for a vertex whose `host`-ball of radius `rad`
/// cuts every `X`–`Y` path in `h`.
fn hitting_scan(host: &Graph, h: &Graph, x: &VertexSet, y: &VertexSet, q: &Path, rad: usize) -> Option<Vertex> {
    middle_out(q.vertices().len())
        .map(|i| q.get(i))
        .find(|&z| separates(h, x, y, &ball(host, &VertexSet::singleton(z), rad)))
}

/// Searches for two `X`–`Y` paths in `h` at `host`-distance at least `d`.
///
/// Candidates for the first path are shortest paths from single vertices of
/// `X`, to single vertices of `Y`, and shortest paths dodging balls along
/// `q`; the second is a shortest path outside `B(first, d - 1)`. On graphs of
/// at most 24 vertices every simple path is tried as well.
fn far_pair_search(
    host: &Graph,
    h: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    d: usize,
    q: &Path,
    factor: usize,
    budget: &Budget,
) -> Result<Option<(Path, Path)>> {
    const STAGE: &str = "far path search";
    let n = h.n();
    let mut tried = std::collections::HashSet::new();
    let mut attempt = |first: Path| -> Result<Option<(Path, Path)>> {
        if !tried.insert(first.vertices().to_vec()) {
            return Ok(None);
        }
        budget.spend(STAGE)?;
        let blocked = ball(host, &first.vertex_set(), d.saturating_sub(1));
        let mut allowed = vec![true; n];
        for &v in &blocked {
            allowed[v] = false;
        }
        let second = shortest_path(h, x, y, Some(&allowed));
        Ok(second.map(|s| (first, s)))
    };
    if let Some(found) = attempt(q.clone())? {
        return Ok(Some(found));
    }
    for &s in x {
        if let Some(p) = shortest_path(h, &VertexSet::singleton(s), y, None) {
            if let Some(found) = attempt(p)? {
                return Ok(Some(found));
            }
        }
    }
    for &t in y {
        if let Some(p) = shortest_path(h, x, &VertexSet::singleton(t), None) {
            if let Some(found) = attempt(p)? {
                return Ok(Some(found));
            }
        }
    }
    let mut t = d.max(1);
    while t <= factor * d {
        for &z in q.vertices() {
            budget.spend(STAGE)?;
            let removed = ball(host, &VertexSet::singleton(z), t);
            let mut allowed = vec![true; n];
            for &v in &removed {
                allowed[v] = false;
            }
            if let Some(p) = shortest_path(h, x, y, Some(&allowed)) {
                if let Some(found) = attempt(p)? {
                    return Ok(Some(found));
                }
            }
        }
        t *= 2;
    }
    if n <= 24 {
        let mut all = Vec::new();
        simple_paths(h, x, y, budget, &mut all)?;
        for p in all {
            if let Some(found) = attempt(p)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// Every `X`–`Y` path of `h` meeting `X` and `Y` only at its ends.
fn simple_paths(h: &Graph, x: &VertexSet, y: &VertexSet, budget: &Budget, out: &mut Vec<Path>) -> Result<()> {
    fn go(
        h: &Graph,
        x: &VertexSet,
        y: &VertexSet,
        stack: &mut Vec<Vertex>,
        on: &mut [bool],
        budget: &Budget,
        out: &mut Vec<Path>,
    ) -> Result<()> {
        let u = *stack.last().unwrap();
        if y.contains(u) {
            budget.spend("simple path enumeration")?;
            out.push(Path::new(stack.clone()).expect("stack holds a simple path"));
            return Ok(());
        }
        for &v in h.neighbors(u) {
            if !on[v] && !x.contains(v) {
                on[v] = true;
                stack.push(v);
                go(h, x, y, stack, on, budget, out)?;
                stack.pop();
                on[v] = false;
            }
        }
        Ok(())
    }
    let mut on = vec![false; h.n()];
    for &s in x {
        on[s] = true;
        let mut stack = vec![s];
        go(h, x, y, &mut stack, &mut on, budget, out)?;
        on[s] = false;
    }
    Ok(())
}

/// Coarse Menger for two paths: either a vertex `z` on a shortest `X`–`Y`
/// path with `B(z, factor·d)` meeting every `X`–`Y` path, or two `X`–`Y`
/// paths at distance at least `d`.
///
/// The first alternative is decided exactly for each scanned `z`. The second
/// is a heuristic search; when it finds nothing a budget error is returned,
/// since the question is then still open.
pub fn coarse_menger_two_paths(
    g: &Graph,
    x: &VertexSet,
    y: &VertexSet,
    d: usize,
    factor: usize,
    budget: &Budget,
) -> Result<MengerOutcome> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::precondition("both sides must be non-empty"));
    }
    let q = shortest_path(g, x, y, None)
        .ok_or_else(|| Error::precondition("no path joins the two sides"))?;
    let radius = factor * d;
    if let Some(center) = hitting_scan(g, g, x, y, &q, radius) {
        return Ok(MengerOutcome::HittingBall { center, radius });
    }
    match far_pair_search(g, g, x, y, d, &q, factor, budget)? {
        Some((p1, p2)) => Ok(MengerOutcome::TwoPaths(p1, p2)),
        None => Err(budget.exhausted("far path search (no candidate left)")),
    }
}

/// The hitting vertex `u` of [`hitting_ball_in_component`], and the path
/// `Q` it was found on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub center: Vertex,
    pub scanned: Path,
}

/// Checks the shared hypotheses: far centres, `C` a component of
/// `G - (B1 ∪ B2)` attaching to both balls, and `P` a `B1`–`B2` path at
/// distance at least `5K` from `C ∪ N(C)`.
pub(crate) fn check_two_ball_input(
    cx: &SpContext<'_, '_>,
    v: [Vertex; 2],
    r: [usize; 2],
    comp: &VertexSet,
    p: &Path,
) -> Result<[VertexSet; 2]> {
    let g = cx.graph();
    let k = cx.k();
    let need = r[0] + r[1] + 5 * k + 2;
    if !cx.gc.at_least(v[0], v[1], need) {
        return Err(Error::precondition(format!(
            "centres {} and {} are {} apart, closer than {need}",
            v[0],
            v[1],
            cx.gc.d(v[0], v[1])
        )));
    }
    let b = [cx.gc.ball(v[0], r[0]), cx.gc.ball(v[1], r[1])];
    let both = b[0].union(&b[1]);
    if comp.is_empty() || comp.intersects(&both) || !is_connected_set(g, comp) {
        return Err(Error::precondition("the component is empty, meets a ball, or is disconnected"));
    }
    let nc = neighborhood(g, comp);
    if !nc.is_subset(&both) {
        return Err(Error::precondition("the component is not a whole component between the balls"));
    }
    if !nc.intersects(&b[0]) || !nc.intersects(&b[1]) {
        return Err(Error::precondition("the component does not attach to both balls"));
    }
    let ends_ok = (b[0].contains(p.first()) && b[1].contains(p.last()))
        || (b[1].contains(p.first()) && b[0].contains(p.last()));
    if !p.is_path_in(g) || !ends_ok {
        return Err(Error::precondition("P is not a path from one ball to the other"));
    }
    if !far_apart(g, &p.vertex_set(), &comp.union(&nc), 5 * k) {
        return Err(Error::precondition(format!("P is closer than {} to the component", 5 * k)));
    }
    Ok(b)
}

/// For a component `C` of `G - (B1 ∪ B2)` and a far path `P`: a vertex
/// `u ∈ B(C, 1)` such that `B(u, m·5K)` meets every `N1`–`N2` path of `G'`,
/// or a fat K4.
///
/// Here `N_i = N(C) ∩ B_i` and `G'` is `G[C ∪ N(C)]` together with the
/// induced graphs on `B(v_i, r_i + ⌈5K/2⌉)`. The scan runs along a shortest
/// `N1`–`N2` path through `C` from its middle outwards; if no ball hits, two
/// far `N1`–`N2` paths of `G'` and `P` give the K4.
pub fn hitting_ball_in_component(
    cx: &SpContext<'_, '_>,
    v: [Vertex; 2],
    r: [usize; 2],
    comp: &VertexSet,
    p: &Path,
) -> Result<Found<Hit>> {
    let g = cx.graph();
    let n = g.n();
    let k = cx.k();
    let b = check_two_ball_input(cx, v, r, comp, p)?;
    let nc = neighborhood(g, comp);
    let ends = [nc.intersection(&b[0]), nc.intersection(&b[1])];
    let through = comp.union(&nc);
    let q = path_within(g, &ends[0], &ends[1], &through)
        .ok_or_else(|| Error::internal("the component does not join its two attachments"))?;
    let wide = (5 * k).div_ceil(2);
    let shells = [
        cx.gc.ball(v[0], r[0] + wide).mask(n),
        cx.gc.ball(v[1], r[1] + wide).mask(n),
    ];
    let gp = union_of_induced(g, &[&through.mask(n), &shells[0], &shells[1]]);
    let rad = cx.consts.hitting_radius();
    if let Some(center) = hitting_scan(g, &gp, &ends[0], &ends[1], &q, rad) {
        let hit = Hit { center, scanned: q };
        return Ok(Found::Value(hit));
    }
    let pair = far_pair_search(g, &gp, &ends[0], &ends[1], 5 * k, &q, cx.consts.menger, &cx.budget)?;
    let Some((q1, q2)) = pair else {
        return Err(cx.budget.exhausted("far path search in a two-ball component (no candidate left)"));
    };
    let (m0, m1) = (b[0].mask(n), b[1].mask(n));
    let trim = |p: &Path| {
        segment(p.vertices(), &m0, &m1)
            .ok_or_else(|| Error::internal("a far path does not cross between the balls"))
    };
    let paths = [trim(&q1)?, trim(&q2)?, p.clone()];
    fat_k4_from_three_paths(cx.gc, v, r, &paths, k).map(Found::Witness)
}

/// Extends `P` past the far ball to a path from `B_side` to `B' = B(u, R0)`
/// that stays far from the components `C` splits into on side `side`.
///
/// The walk is `P`, then a path from `P`'s end in the other ball into `C`,
/// then on through `C` to `B'`; when `B'` meets the other ball the detour
/// through `C` is skipped. The result is a shortest `B_side`–`B'` path inside
/// the walk's vertices.
pub fn far_path_past_ball(
    cx: &SpContext<'_, '_>,
    v: [Vertex; 2],
    r: [usize; 2],
    comp: &VertexSet,
    p: &Path,
    u: Vertex,
    side: usize,
) -> Result<Path> {
    let g = cx.graph();
    let b = [cx.gc.ball(v[0], r[0]), cx.gc.ball(v[1], r[1])];
    let other = 1 - side;
    let bp = cx.gc.ball(u, cx.consts.r0);
    let p = if b[side].contains(p.first()) { p.clone() } else { p.reversed() };
    let start = VertexSet::singleton(p.last());
    let mut walk: Vec<Vertex> = p.vertices().to_vec();
    let hit = b[other].intersection(&bp);
    if hit.is_empty() {
        let p1 = path_within(g, &start, comp, &b[other].union(comp))
            .ok_or_else(|| Error::internal("the far ball does not reach the component"))?;
        let p2 = path_within(g, &VertexSet::singleton(p1.last()), &bp, &comp.union(&bp))
            .ok_or_else(|| Error::internal("the component does not reach the hitting ball"))?;
        extend_walk(&mut walk, p1.vertices());
        extend_walk(&mut walk, p2.vertices());
    } else {
        let p1 = path_within(g, &start, &hit, &b[other])
            .ok_or_else(|| Error::internal("the far ball does not reach the hitting ball"))?;
        extend_walk(&mut walk, p1.vertices());
    }
    let span: VertexSet = erase_loops(&walk).into_iter().collect();
    path_within(g, &b[side].intersection(&span), &bp.intersection(&span), &span)
        .ok_or_else(|| Error::internal("the extended walk does not join the two balls"))
}

/// `d(P', C ∪ N(C)) >= 5K`.
pub(crate) fn far_from_component(cx: &SpContext<'_, '_>, p: &Path, comp: &VertexSet) -> bool {
    far_apart(cx.graph(), &p.vertex_set(), &closed(cx.graph(), comp), 5 * cx.k())
}
