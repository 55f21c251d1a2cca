//! A fat K4 from two far balls joined by three far paths.

use super::util::{path_within, union_of_induced};
use crate::error::{Error, Result};
use crate::graph::{components, shortest_path, DistCache, Graph, Path, Vertex, VertexSet};
use crate::minors::{fatness, validate_model, MinorModel, Pattern};

/// Orients `p` as a `B1`–`B2` path: first vertex in `B1`, last in `B2`, and
/// no other vertex in either.
fn orient(p: &Path, b1: &[bool], b2: &[bool]) -> Option<Path> {
    let p = if b1[p.first()] { p.clone() } else { p.reversed() };
    let v = p.vertices();
    let ok = b1[v[0]]
        && b2[v[v.len() - 1]]
        && v[1..v.len() - 1].iter().all(|&x| !b1[x] && !b2[x])
        && !b2[v[0]];
    ok.then_some(p)
}

/// A `K`-fat K4 from balls `B1 = B(v1, r1)`, `B2 = B(v2, r2)` with
/// `d(v1, v2) >= r1 + r2 + 5K` and `r_i > 2K`, and three `B1`–`B2` paths that
/// are pairwise at least `5K` apart, two of whose interiors lie in one
/// component of `G - (B1 ∪ B2)`.
///
/// The shrunken balls `B(v_i, r_i - 2K)` are two branch sets; the other two
/// are middle stretches of two of the paths, joined by a path through the
/// shared component. Every assignment of roles is tried and the first model
/// that checks out as valid and `K`-fat is returned.
pub fn fat_k4_from_three_paths(
    gc: &DistCache<'_>,
    v: [Vertex; 2],
    r: [usize; 2],
    paths: &[Path; 3],
    k: usize,
) -> Result<MinorModel> {
    if k == 0 {
        return Err(Error::domain("fatness K must be at least 1"));
    }
    let g = gc.graph();
    let n = g.n();
    if !gc.at_least(v[0], v[1], r[0] + r[1] + 5 * k) {
        return Err(Error::precondition(format!(
            "centres {} and {} are {} apart, closer than {}",
            v[0],
            v[1],
            gc.d(v[0], v[1]),
            r[0] + r[1] + 5 * k
        )));
    }
    if r.iter().any(|&x| x <= 2 * k) {
        return Err(Error::precondition(format!("ball radii must exceed {}", 2 * k)));
    }
    let b1 = gc.ball(v[0], r[0]);
    let b2 = gc.ball(v[1], r[1]);
    let (m1, m2) = (b1.mask(n), b2.mask(n));
    let mut ps = Vec::with_capacity(3);
    for (i, p) in paths.iter().enumerate() {
        if !p.is_path_in(g) {
            return Err(Error::precondition(format!("path {i} is not a path of the graph")));
        }
        ps.push(orient(p, &m1, &m2).ok_or_else(|| {
            Error::precondition(format!("path {i} is not a path from one ball to the other"))
        })?);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = super::util::set_dist(g, &ps[i].vertex_set(), &ps[j].vertex_set());
        if !(d.finite().is_none_or(|d| d >= 5 * k)) {
            return Err(Error::precondition(format!(
                "paths {i} and {j} are {d} apart, closer than {}",
                5 * k
            )));
        }
    }
    let comps = components(g, &b1.union(&b2));
    let mut comp_of = vec![usize::MAX; n];
    for (i, c) in comps.iter().enumerate() {
        for &x in &c.vertices {
            comp_of[x] = i;
        }
    }
    let home: Vec<usize> = ps.iter().map(|p| comp_of[p.get(1)]).collect();
    if !(home[0] == home[1] || home[0] == home[2] || home[1] == home[2]) {
        return Err(Error::precondition(
            "no two path interiors lie in the same component between the balls",
        ));
    }

    let inner1 = gc.ball(v[0], r[0] - 2 * k);
    let inner2 = gc.ball(v[1], r[1] - 2 * k);
    let balls = union_of_induced(g, &[&m1, &m2]);
    let q: Vec<Path> = ps
        .iter()
        .map(|p| {
            let mut h = balls.clone();
            h.add_path_edges(p);
            shortest_path(&h, &inner1, &inner2, None)
                .ok_or_else(|| Error::internal("a path and the balls do not join the inner balls"))
        })
        .collect::<Result<_>>()?;

    let mut last_err = None;
    for (a, bb, c) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
        if home[a] != home[bb] {
            continue;
        }
        match build(gc, &comps[home[a]].vertices, &ps[a], [&q[a], &q[bb], &q[c]], [&inner1, &inner2], k) {
            Ok(m) => return Ok(m),
            Err(e) => last_err = Some(e),
        }
    }
    Err(Error::internal(format!(
        "no role assignment gave a fat K4: {}",
        last_err.map_or_else(|| "nothing to try".to_string(), |e| e.to_string())
    )))
}

fn build(
    gc: &DistCache<'_>,
    comp: &VertexSet,
    p1: &Path,
    q: [&Path; 3],
    inner: [&VertexSet; 2],
    k: usize,
) -> Result<MinorModel> {
    let g = gc.graph();
    let n = g.n();
    let interior: VertexSet = p1.interior().iter().copied().collect();
    let near_q2 = crate::graph::ball(g, &q[1].vertex_set(), k);
    let target = near_q2.intersection(comp);
    let w = path_within(g, &interior, &target, comp)
        .ok_or_else(|| Error::internal("the shared component does not join the two paths"))?;
    // Extend W to Q² inside B(Q², K).
    let near = near_q2.mask(n);
    let mut h = super::util::edge_subgraph(g, |x, y| near[x] && near[y]);
    h.add_path_edges(&w);
    let wp = shortest_path(&h, &VertexSet::singleton(w.first()), &q[1].vertex_set(), None)
        .ok_or_else(|| Error::internal("cannot reach the second path from the connector"))?;
    let (n1, n2, m) = (q[0].len(), q[1].len(), wp.len());
    if n1 < 2 * k || n2 < 2 * k || m < 2 * k {
        return Err(Error::internal("a path of the construction is too short"));
    }
    let v1 = q[0].subpath(k, n1 - k).vertex_set().union(&wp.subpath(0, k).vertex_set());
    let v2 = q[1].subpath(k, n2 - k).vertex_set().union(&wp.subpath(m - k, m).vertex_set());
    let model = MinorModel::new(
        Pattern::K4.graph(),
        vec![v1, v2, inner[0].clone(), inner[1].clone()],
        // Pattern edge order: 01 02 03 12 13 23.
        vec![
            wp.subpath(k, m - k),
            q[0].subpath(0, k),
            q[0].subpath(n1 - k, n1),
            q[1].subpath(0, k),
            q[1].subpath(n2 - k, n2),
            q[2].clone(),
        ],
    );
    certify(g, model, k)
}

pub(crate) fn certify(g: &Graph, model: MinorModel, k: usize) -> Result<MinorModel> {
    validate_model(g, &model)
        .map_err(|e| Error::internal(format!("constructed K4 model is invalid: {e}")))?;
    match fatness(g, &model)?.finite() {
        Some(f) if f < k => Err(Error::internal(format!(
            "constructed K4 model is only {f}-fat, below {k}"
        ))),
        _ => Ok(model),
    }
}
