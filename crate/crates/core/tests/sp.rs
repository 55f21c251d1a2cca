use fatdecomp::corpus::{grid, theta, trap};
use fatdecomp::decomp::validate;
use fatdecomp::graph::{bfs, components, shortest_path, DistCache, Graph, Path, VertexSet};
use fatdecomp::minors::{fatness, is_minor_free, validate_model};
use fatdecomp::quasi::{invert_constants, Rational};
use fatdecomp::sp::{
    coarse_menger_two_paths, constants, decompose_series_parallel, decompose_series_parallel_with,
    fat_k4_from_three_paths, hitting_ball_in_component, three_paths_far_apart,
    two_ball_component_decomposition, Budget, Constants, Found, MengerOutcome, SpConfig, SpContext,
};
use fatdecomp::{Dist, Error, MinorModel, Outcome, Pattern};

fn set(v: impl IntoIterator<Item = usize>) -> VertexSet {
    v.into_iter().collect()
}

/// Distance between two vertex sets by a fresh BFS.
fn dist(g: &Graph, a: &VertexSet, b: &VertexSet) -> Option<u32> {
    let d = bfs(g, a.as_slice());
    b.iter().map(|&v| d[v]).filter(|&x| x != u32::MAX).min()
}

fn ball_of(g: &Graph, v: usize, r: u32) -> VertexSet {
    let d = bfs(g, &[v]);
    set((0..g.n()).filter(|&x| d[x] <= r))
}

fn assert_fat_k4(g: &Graph, m: &MinorModel, k: usize) {
    validate_model(g, m).unwrap();
    assert_eq!(m.pattern, Pattern::K4.graph());
    assert!(fatness(g, m).unwrap() >= Dist::Finite(k));
}

/// Checks a driver outcome against the bounds, without trusting the driver.
fn assert_outcome(g: &Graph, out: &Outcome, c: &Constants) {
    match out {
        Outcome::Decomposition(d) => {
            let rep = validate(g, d);
            assert_eq!(rep.first_violation(), None);
            assert!(rep.orw().at_most(c.f0), "orw {} above {}", rep.orw(), c.f0);
            assert!(rep.spread.at_most(c.f1), "spread {} above {}", rep.spread, c.f1);
            assert!(is_minor_free(&d.graph, Pattern::K4));
            // Radius of each bag, measured directly.
            for bag in &d.bags {
                if bag.is_empty() {
                    continue;
                }
                let best = g
                    .vertices()
                    .map(|v| {
                        let dv = bfs(g, &[v]);
                        bag.iter().map(|&x| dv[x]).max().unwrap()
                    })
                    .min()
                    .unwrap();
                assert!(best as usize <= c.f0);
            }
        }
        Outcome::Witness(m) => assert_fat_k4(g, m, c.k),
    }
}

#[test]
fn constants_match_a_direct_computation() {
    for k in 1..=100usize {
        let c = constants(k).unwrap();
        // Written out from the definitions one term at a time.
        let r0 = 130 * 5 * k;
        let r0p = r0 + r0 + r0 + 5 * k + 1;
        let ell = r0 + r0 + 5 * k + 2;
        let r1 = 8 * (ell + 22 * k + 1) + 44 * k + 8;
        let r2 = r1 + r1 + 5 * k + 3;
        assert_eq!((c.r0, c.r0p, c.ell, c.r1, c.r2), (r0, r0p, ell, r1, r2), "K = {k}");
        assert_eq!(c.f0, r2 + 2 * r0p + 2);
        assert_eq!(c.f1, 22);
        assert_eq!(c.bounds(), (c.f0, 22));
        assert!(!c.is_scaled());
    }
    let c = constants(1).unwrap();
    assert_eq!((c.r0, c.r0p, c.ell, c.r1, c.r2, c.f0), (650, 1956, 1307, 10692, 21392, 25306));
    assert_eq!(constants(2).unwrap().f0, 50541);
    assert!(matches!(constants(0), Err(Error::Domain(_))));
}

#[test]
fn constants_closed_forms() {
    for k in 1..=100usize {
        let c = constants(k).unwrap();
        assert_eq!(c.r1, 10660 * k + 32);
        assert_eq!(c.r2, 21325 * k + 67);
        assert_eq!(c.f0, 25235 * k + 71);
        let q = 50470 * k as i64 + 142;
        let (m, a) = c.qi_constants();
        assert_eq!((m as i64, a as i64), (q, q));
        let (mi, ai) = invert_constants(Rational::from_integer(q), Rational::from_integer(q));
        assert_eq!((mi, ai), (Rational::from_integer(q), Rational::from_integer(3 * q * q)));
    }
}

#[test]
fn scaled_constants() {
    let c = Constants::scaled(1, 4).unwrap();
    assert_eq!((c.r0, c.r0p, c.ell, c.r1, c.r2, c.f0), (25, 81, 57, 692, 1392, 1556));
    assert_eq!(c.hitting_radius(), 20);
    assert!(c.is_scaled());
    // The inner ball of radius 22K must fit inside R0.
    assert!(Constants::scaled(1, 3).is_err());
    assert_eq!(Constants::scaled(2, 129).unwrap(), constants(2).unwrap());
}

#[test]
fn small_graphs_fit_in_one_bag() {
    for g in [Graph::cycle_graph(80), grid(10, 10), theta(&[7, 9, 11]).unwrap(), trap(Pattern::K4, 20)] {
        match decompose_series_parallel(&g, 1).unwrap() {
            Outcome::Decomposition(d) => {
                assert_eq!(d.bags.len(), 1);
                assert_eq!(d.bags[0], set(0..g.n()));
                assert_outcome(&g, &Outcome::Decomposition(d), &constants(1).unwrap());
            }
            Outcome::Witness(_) => panic!("a single ball covers the graph"),
        }
    }
}

#[test]
fn zero_fatness_is_rejected() {
    assert!(matches!(decompose_series_parallel(&Graph::cycle_graph(5), 0), Err(Error::Domain(_))));
}

/// Cuts `p` down to the part between its last vertex in `a` and the first
/// vertex in `b` after it.
fn trim(p: &Path, a: &VertexSet, b: &VertexSet) -> Path {
    let v = p.vertices();
    let j = v.iter().position(|x| b.contains(*x)).unwrap();
    let i = v[..=j].iter().rposition(|x| a.contains(*x)).unwrap();
    Path::new(v[i..=j].to_vec()).unwrap()
}

/// Path through the given corners of a subdivided K4, avoiding the others.
fn corner_path(g: &Graph, corners: &[usize]) -> Path {
    let mut allowed = vec![true; g.n()];
    for c in 0..4 {
        allowed[c] = corners.contains(&c);
    }
    let mut out = Path::trivial(corners[0]);
    for w in corners.windows(2) {
        let seg = shortest_path(g, &set([w[0]]), &set([w[1]]), Some(&allowed)).unwrap();
        out = out.concat(&seg).unwrap();
    }
    out
}

#[test]
fn fat_k4_on_a_subdivided_k4() {
    for (k, s, r) in [(1, 30, 3), (2, 60, 5), (3, 90, 8)] {
        let g = trap(Pattern::K4, s);
        let gc = DistCache::new(&g);
        let b1 = ball_of(&g, 0, r as u32);
        let b2 = ball_of(&g, 1, r as u32);
        let raw = [corner_path(&g, &[0, 1]), corner_path(&g, &[0, 2, 1]), corner_path(&g, &[0, 3, 1])];
        let paths = raw.map(|p| trim(&p, &b1, &b2));
        let m = fat_k4_from_three_paths(&gc, [0, 1], [r, r], &paths, k).unwrap();
        assert_fat_k4(&g, &m, k);
    }
}

#[test]
fn fat_k4_preconditions() {
    let g = trap(Pattern::K4, 30);
    let gc = DistCache::new(&g);
    let b1 = ball_of(&g, 0, 3);
    let b2 = ball_of(&g, 1, 3);
    let raw = [corner_path(&g, &[0, 1]), corner_path(&g, &[0, 2, 1]), corner_path(&g, &[0, 3, 1])];
    let paths = raw.map(|p| trim(&p, &b1, &b2));
    // Radii must exceed 2K.
    assert!(matches!(
        fat_k4_from_three_paths(&gc, [0, 1], [2, 2], &paths, 1),
        Err(Error::Precondition(_))
    ));
    // Centres too close for K = 6.
    assert!(matches!(
        fat_k4_from_three_paths(&gc, [0, 1], [13, 13], &paths, 6),
        Err(Error::Precondition(_))
    ));
    // A theta has no component shared by two path interiors.
    let t = theta(&[40, 40, 40]).unwrap();
    let tc = DistCache::new(&t);
    let (c1, c2) = (ball_of(&t, 0, 3), ball_of(&t, 1, 3));
    let arms: Vec<Path> = (0..3)
        .map(|i| {
            let mut allowed = vec![false; t.n()];
            allowed[0] = true;
            allowed[1] = true;
            for v in 2 + 39 * i..2 + 39 * (i + 1) {
                allowed[v] = true;
            }
            trim(&shortest_path(&t, &set([0]), &set([1]), Some(&allowed)).unwrap(), &c1, &c2)
        })
        .collect();
    let arms = [arms[0].clone(), arms[1].clone(), arms[2].clone()];
    assert!(matches!(
        fat_k4_from_three_paths(&tc, [0, 1], [3, 3], &arms, 1),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        fat_k4_from_three_paths(&gc, [0, 1], [3, 3], &paths, 0),
        Err(Error::Domain(_))
    ));
}

#[test]
fn coarse_menger_finds_two_far_paths_on_a_cycle() {
    let g = Graph::cycle_graph(100);
    let (x, y) = (set([0, 50]), set([25, 75]));
    match coarse_menger_two_paths(&g, &x, &y, 5, 3, &Budget::new(10_000)).unwrap() {
        MengerOutcome::TwoPaths(p, q) => {
            for path in [&p, &q] {
                assert!(path.is_path_in(&g));
                let ends = [path.first(), path.last()];
                assert!(ends.iter().any(|e| x.contains(*e)) && ends.iter().any(|e| y.contains(*e)));
            }
            assert!(dist(&g, &p.vertex_set(), &q.vertex_set()).unwrap() >= 5);
        }
        other => panic!("expected two paths, got {other:?}"),
    }
}

#[test]
fn coarse_menger_hits_a_narrow_strip() {
    let g = grid(60, 3);
    let x = set([0, 60, 120]);
    let y = set([59, 119, 179]);
    match coarse_menger_two_paths(&g, &x, &y, 2, 3, &Budget::new(10_000)).unwrap() {
        MengerOutcome::HittingBall { center, radius } => {
            assert_eq!(radius, 6);
            let removed = ball_of(&g, center, 6);
            let mut allowed = vec![true; g.n()];
            for &v in &removed {
                allowed[v] = false;
            }
            assert!(shortest_path(&g, &x, &y, Some(&allowed)).is_none());
        }
        other => panic!("expected a hitting ball, got {other:?}"),
    }
    assert!(matches!(
        coarse_menger_two_paths(&g, &VertexSet::new(), &y, 2, 3, &Budget::new(10)),
        Err(Error::Precondition(_))
    ));
}

/// A 400-cycle with balls of radius 20 at 0 and 200: `C` is one arc and the
/// other arc is the far path.
fn cycle_two_balls() -> (Graph, VertexSet, Path) {
    let g = Graph::cycle_graph(400);
    let comp = set(21..180);
    let p = Path::new((220..=380).collect()).unwrap();
    (g, comp, p)
}

#[test]
fn two_ball_decomposition_of_an_arc() {
    let (g, comp, p) = cycle_two_balls();
    let gc = DistCache::new(&g);
    let cx = SpContext::new(&gc, Constants::scaled(1, 4).unwrap(), 10_000);
    let hit = hitting_ball_in_component(&cx, [0, 200], [20, 20], &comp, &p).unwrap().value().unwrap();
    assert!(hit.scanned.vertices().contains(&hit.center));
    let out = two_ball_component_decomposition(&cx, [0, 200], [20, 20], &comp, &p)
        .unwrap()
        .value()
        .unwrap();
    let pd = &out.partial;
    // Terminal bags are the attachments at each ball.
    assert_eq!(pd.inner.bags[out.source], set([20]));
    assert_eq!(pd.inner.bags[out.sink], set([180]));
    // Edges inside the support lie in a bag; what is left of the arc hangs
    // off a single bag.
    for v in 20..180 {
        if pd.support.contains(v) && pd.support.contains(v + 1) {
            let t = pd.inner.trace(v);
            let u = pd.inner.trace(v + 1);
            assert!(t.iter().any(|x| u.contains(x)), "edge {v}-{} is not covered", v + 1);
        }
    }
    for c in components(&g, &pd.support) {
        if c.vertices.intersects(&comp) {
            assert!(pd.inner.bags.iter().any(|b| c.neighborhood.is_subset(b)));
        }
    }
    assert!(pd.support.len() > 2);
    let mut plus = pd.inner.graph.clone();
    let _ = plus.add_edge(out.source, out.sink);
    assert!(is_minor_free(&plus, Pattern::K4));
    // Bags stay within R0' + R0 of some vertex.
    let c = Constants::scaled(1, 4).unwrap();
    for bag in &pd.inner.bags {
        let best = (0..400)
            .map(|v| {
                let d = bfs(&g, &[v]);
                bag.iter().map(|&x| d[x]).max().unwrap_or(0)
            })
            .min()
            .unwrap();
        assert!(best as usize <= c.r0p + c.r0);
    }
}

#[test]
fn two_ball_input_is_checked() {
    let (g, comp, p) = cycle_two_balls();
    let gc = DistCache::new(&g);
    let cx = SpContext::new(&gc, Constants::scaled(1, 4).unwrap(), 10_000);
    // The far path may not run next to C.
    let near = Path::new((175..=205).collect()).unwrap();
    assert!(matches!(
        two_ball_component_decomposition(&cx, [0, 200], [20, 20], &comp, &near),
        Err(Error::Precondition(_))
    ));
    // Not a component between the balls.
    assert!(matches!(
        two_ball_component_decomposition(&cx, [0, 200], [20, 20], &set(30..60), &p),
        Err(Error::Precondition(_))
    ));
}

/// A theta with three arms of length 200 and a rung of length 40 between the
/// middles of the first two arms.
fn laddered_theta() -> (Graph, VertexSet, Path) {
    let mut g = theta(&[200, 200, 200]).unwrap();
    // Arm `a` has interior vertices 2 + 199a ..= 200 + 199a, in order from pole 0.
    let at = |a: usize, t: usize| 2 + 199 * a + t - 1;
    let mut prev = at(0, 100);
    for _ in 1..40 {
        let x = g.add_vertex();
        g.add_edge(prev, x).unwrap();
        prev = x;
    }
    g.add_edge(prev, at(1, 100)).unwrap();
    let removed = ball_of(&g, 0, 40).union(&ball_of(&g, 1, 40));
    let comp = components(&g, &removed)
        .into_iter()
        .find(|c| c.vertices.contains(at(0, 100)))
        .unwrap()
        .vertices;
    let p = Path::new((40..=160).map(|t| at(2, t)).collect()).unwrap();
    (g, comp, p)
}

#[test]
fn hitting_ball_gives_way_to_a_fat_k4() {
    let (g, comp, p) = laddered_theta();
    let gc = DistCache::new(&g);
    let cx = SpContext::new(&gc, Constants::scaled(1, 4).unwrap(), 10_000);
    let m = hitting_ball_in_component(&cx, [0, 1], [40, 40], &comp, &p).unwrap().witness().unwrap();
    assert_fat_k4(&g, &m, 1);
    match two_ball_component_decomposition(&cx, [0, 1], [40, 40], &comp, &p).unwrap() {
        Found::Witness(m) => assert_fat_k4(&g, &m, 1),
        Found::Value(_) => panic!("the component holds two far paths"),
    }
}

/// Hub `0` with three spokes of `len` edges ending on a cycle of length
/// `3 * gap`.
fn hub_spokes(len: usize, gap: usize) -> (Graph, [usize; 3]) {
    spokes(len, gap, true)
}

/// As [`hub_spokes`], but with the cycle cut open into a path when `close`
/// is false, which leaves no K4 minor.
fn spokes(len: usize, gap: usize, close: bool) -> (Graph, [usize; 3]) {
    let mut g = Graph::empty(1);
    let cyc: Vec<usize> = (0..3 * gap).map(|_| g.add_vertex()).collect();
    for i in 0..cyc.len() - usize::from(!close) {
        g.add_edge(cyc[i], cyc[(i + 1) % cyc.len()]).unwrap();
    }
    let ends = [cyc[0], cyc[gap], cyc[2 * gap]];
    for e in ends {
        let mut prev = 0;
        for _ in 1..len {
            let x = g.add_vertex();
            g.add_edge(prev, x).unwrap();
            prev = x;
        }
        g.add_edge(prev, e).unwrap();
    }
    (g, ends)
}

#[test]
fn three_far_paths_from_three_far_boundary_vertices() {
    let (ell, d, r) = (6, 1, 40);
    let (g, ends) = hub_spokes(r + 1, 80);
    let gc = DistCache::new(&g);
    let comp = components(&g, &ball_of(&g, 0, r as u32))
        .into_iter()
        .find(|c| c.vertices.contains(ends[0]))
        .unwrap();
    assert_eq!(comp.boundary, set(ends));
    let tp = three_paths_far_apart(&gc, 0, r, &comp, ell, d, ends).unwrap();
    let near = ball_of(&g, tp.w_prime, 2 * d as u32);
    let inner = ball_of(&g, 0, (r - ell) as u32);
    assert!(comp.vertices.contains(tp.w_prime));
    for p in &tp.paths {
        assert!(p.is_path_in(&g));
        let ends = [p.first(), p.last()];
        assert!(ends.iter().any(|e| near.contains(*e)));
        assert!(ends.iter().any(|e| inner.contains(*e)));
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let dd = dist(&g, &tp.paths[i].vertex_set(), &tp.paths[j].vertex_set()).unwrap();
        assert!(dd as usize >= d, "paths {i} and {j} are {dd} apart");
    }
}

fn scaled(k: usize) -> SpConfig {
    SpConfig {
        constants: Constants::scaled(k, 4).unwrap(),
        budget: 200_000,
    }
}

#[test]
fn scaled_cycle_runs_the_two_ball_step() {
    let g = Graph::cycle_graph(4500);
    let cfg = scaled(1);
    let out = decompose_series_parallel_with(&g, &cfg).unwrap();
    assert_outcome(&g, &out, &cfg.constants);
    match out {
        Outcome::Decomposition(d) => assert!(d.bags.len() > 3, "only {} bags", d.bags.len()),
        Outcome::Witness(_) => panic!("a cycle has no K4 minor"),
    }
}

#[test]
fn scaled_spoked_cycle_runs_the_three_vertex_step() {
    // A subdivided K4 with long edges: the step finds the fat K4.
    let (g, _) = hub_spokes(1450, 700);
    let cfg = scaled(1);
    let out = decompose_series_parallel_with(&g, &cfg).unwrap();
    assert!(matches!(out, Outcome::Witness(_)));
    assert_outcome(&g, &out, &cfg.constants);
}

#[test]
fn scaled_open_spokes_decompose_through_the_three_vertex_step() {
    let (g, _) = spokes(1450, 700, false);
    assert!(is_minor_free(&g, Pattern::K4));
    let cfg = scaled(1);
    let out = decompose_series_parallel_with(&g, &cfg).unwrap();
    match &out {
        Outcome::Decomposition(d) => assert!(d.bags.len() > 10, "only {} bags", d.bags.len()),
        Outcome::Witness(_) => panic!("the graph has no K4 minor"),
    }
    assert_outcome(&g, &out, &cfg.constants);
}

#[test]
fn scaled_budget_errors_are_reported() {
    let g = Graph::cycle_graph(4500);
    let cfg = SpConfig {
        constants: Constants::scaled(1, 4).unwrap(),
        budget: 0,
    };
    match decompose_series_parallel_with(&g, &cfg) {
        Err(Error::Budget { budget, .. }) => assert_eq!(budget, 0),
        other => panic!("expected a budget error, got {other:?}"),
    }
}
