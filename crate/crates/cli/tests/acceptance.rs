//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use fatdecomp::cactus::{self, path_ball_decomposition};
use fatdecomp::corpus::{builtin, expand, gnp, random_tree, NamedGraph};
use fatdecomp::decomp::io::{parse_decomposition, write_decomposition};
use fatdecomp::decomp::validate_partial;
use fatdecomp::graph::{bfs, components, shortest_path, Graph, VertexSet};
use fatdecomp::minors::io::write_model;
use fatdecomp::minors::{brute_force_fat_minor, is_minor_free};
use fatdecomp::quasi::{from_decomposition, from_decomposition_with_bounds, invert_constants, verify_qi, Rational};
use fatdecomp::sp::constants;
use fatdecomp::{GraphDecomposition, MinorModel, Outcome, Path, Pattern};
use fatdecomp_cli::{check_decomposition, check_model, run_pipeline, verify, Kind, RunOptions, Target, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

struct Check {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Check {
    Check { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Check {
    Check { ok: false, detail: detail.into() }
}

/// Decompositions gathered by the dichotomy runs, for the QI criterion.
type Decomps = Vec<(String, Graph, GraphDecomposition)>;

fn main() {
    let mut decomps: Decomps = Vec::new();
    let mut witnesses: Vec<(Graph, MinorModel, Target)> = Vec::new();
    let mut all_ok = true;
    let mut report = |n: usize, what: &str, limit: Duration, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let c = f();
        let t = start.elapsed();
        let ok = c.ok && t <= limit;
        let time_note = if t > limit { format!(", over the {limit:?} limit") } else { String::new() };
        println!(
            "criterion {n}: {} - {what}: {} [{:.1?}{time_note}]",
            if ok { "PASS" } else { "FAIL" },
            c.detail,
            t
        );
        all_ok &= ok;
    };

    report(1, "constants and quasi-isometry pairs for K = 1..100", Duration::from_secs(1), &mut constants_check);
    report(2, "K4- dichotomy on the corpus, K in {1, 2}", Duration::from_secs(300), &mut || {
        dichotomy(Target::K4minus, &[1, 2], &k4minus_corpus(), None, &mut decomps, &mut witnesses)
    });
    report(3, "K4 dichotomy, production and scaled corridors", Duration::from_secs(900), &mut || {
        let a = dichotomy(Target::K4, &[1], &k4_corpus(), None, &mut decomps, &mut witnesses);
        let b = dichotomy(Target::K4, &[1], &corridors(), Some(4), &mut decomps, &mut witnesses);
        let detail = format!(
            "production: {}; scaled (Menger factor 4, postcondition checks {}): {}",
            a.detail,
            if cfg!(debug_assertions) { "on" } else { "off" },
            b.detail
        );
        Check { ok: a.ok && b.ok, detail }
    });
    report(4, "quasi-isometries from every decomposition above", Duration::from_secs(900), &mut || qi_check(&decomps));
    report(5, "brute force agrees with minor-freeness on connected graphs up to 8 vertices", Duration::from_secs(600), &mut oracle_check);
    report(6, "path-ball decompositions on 50 random instances", Duration::from_secs(60), &mut path_ball_check);
    report(7, "100 mutated certificates are rejected by verify", Duration::from_secs(60), &mut || {
        mutation_check(&decomps, &witnesses)
    });
    if !all_ok {
        std::process::exit(1);
    }
}

fn constants_check() -> Check {
    let single = GraphDecomposition::single(VertexSet::singleton(0));
    let g = Graph::empty(1);
    for k in 1..=100usize {
        let c = match constants(k) {
            Ok(c) => c,
            Err(e) => return fail(format!("K = {k}: {e}")),
        };
        if c.f0 != 25235 * k + 71 || c.f1 != 22 {
            return fail(format!("K = {k}: bounds ({}, {})", c.f0, c.f1));
        }
        let lines = [
            ("K4", (c.f0, c.f1), 50470 * k as i64 + 142),
            ("K4-", cactus::bounds(k), 84 * k as i64 + 2),
        ];
        for (name, (bo, bi), want) in lines {
            if name == "K4-" && (bo, bi) != (42 * k + 1, 28 * k + 3) {
                return fail(format!("K = {k}: K4- bounds ({bo}, {bi})"));
            }
            let q = match from_decomposition_with_bounds(&g, &single, bo, bi) {
                Ok(q) => q,
                Err(e) => return fail(e.to_string()),
            };
            let w = Rational::from_integer(want);
            if (q.m, q.a) != (w, w) {
                return fail(format!("K = {k}, {name}: pair ({}, {})", q.m, q.a));
            }
            if invert_constants(q.m, q.a) != (w, Rational::from_integer(3 * want * want)) {
                return fail(format!("K = {k}, {name}: inverse pair"));
            }
        }
        if c.qi_constants() != (50470 * k + 142, 50470 * k + 142) {
            return fail(format!("K = {k}: qi_constants"));
        }
    }
    pass("f0 = 25235K + 71, pairs (50470K + 142, 3(50470K + 142)^2) and (84K + 2, 3(84K + 2)^2)")
}

fn without(items: Vec<NamedGraph>, prefix: &str) -> Vec<NamedGraph> {
    items.into_iter().filter(|g| !g.name.starts_with(prefix)).collect()
}

fn k4minus_corpus() -> Vec<NamedGraph> {
    without(builtin(), "trap4:")
}

fn k4_corpus() -> Vec<NamedGraph> {
    builtin()
}

/// Hub `0` with three spokes of `len` edges ending on a cycle of length
/// `3 * gap`, cut open into a path unless `close`.
fn spokes(len: usize, gap: usize, close: bool) -> Graph {
    let mut g = Graph::empty(1);
    let cyc: Vec<usize> = (0..3 * gap).map(|_| g.add_vertex()).collect();
    for i in 0..cyc.len() - usize::from(!close) {
        g.add_edge(cyc[i], cyc[(i + 1) % cyc.len()]).unwrap();
    }
    for e in [cyc[0], cyc[gap], cyc[2 * gap]] {
        let mut prev = 0;
        for _ in 1..len {
            let x = g.add_vertex();
            g.add_edge(prev, x).unwrap();
            prev = x;
        }
        g.add_edge(prev, e).unwrap();
    }
    g
}

/// Long graphs that reach the deep K4 branches under the scaled constants.
fn corridors() -> Vec<NamedGraph> {
    let mut out: Vec<NamedGraph> = ["cycle:4500", "theta:1500,1500,1500"]
        .iter()
        .flat_map(|s| expand(s).unwrap())
        .collect();
    out.push(NamedGraph { name: "open-spokes:1450,700".into(), graph: spokes(1450, 700, false) });
    out.push(NamedGraph { name: "spokes:1450,700".into(), graph: spokes(1450, 700, true) });
    out
}

fn dichotomy(
    target: Target,
    ks: &[usize],
    graphs: &[NamedGraph],
    scaled: Option<usize>,
    decomps: &mut Decomps,
    witnesses: &mut Vec<(Graph, MinorModel, Target)>,
) -> Check {
    use rayon::prelude::*;
    let jobs: Vec<(usize, &NamedGraph)> = ks.iter().flat_map(|&k| graphs.iter().map(move |g| (k, g))).collect();
    let results: Vec<(usize, &NamedGraph, Result<Outcome, String>)> = jobs
        .par_iter()
        .map(|&(k, ng)| {
            let opts = RunOptions { scaled, ..RunOptions::new(target, k) };
            let res = run_pipeline(&ng.graph, &opts).map_err(|e| e.to_string()).and_then(|out| {
                let (bo, bi) = opts.bounds().map_err(|e| e.to_string())?;
                match &out {
                    Outcome::Decomposition(d) => check_decomposition(&ng.graph, d, Some(target), Some((bo, bi)))?,
                    Outcome::Witness(m) => check_model(&ng.graph, m, Some(target), k)?,
                };
                Ok(out)
            });
            (k, ng, res)
        })
        .collect();
    let (mut nd, mut nw) = (0, 0);
    let mut bad = Vec::new();
    for (k, ng, res) in results {
        match res {
            Ok(Outcome::Decomposition(d)) => {
                nd += 1;
                decomps.push((format!("{} K={k}", ng.name), ng.graph.clone(), d));
            }
            Ok(Outcome::Witness(m)) => {
                nw += 1;
                witnesses.push((ng.graph.clone(), m, target));
            }
            Err(e) => bad.push(format!("{} K={k}: {e}", ng.name)),
        }
    }
    let detail = format!("{} runs, {nd} decompositions, {nw} witnesses", nd + nw + bad.len());
    if bad.is_empty() {
        pass(detail)
    } else {
        fail(format!("{detail}, {} failed, first: {}", bad.len(), bad[0]))
    }
}

fn qi_check(decomps: &Decomps) -> Check {
    use rayon::prelude::*;
    let bad: Vec<String> = decomps
        .par_iter()
        .filter_map(|(name, g, d)| {
            let q = match from_decomposition(g, d) {
                Ok(q) => q,
                Err(e) => return Some(format!("{name}: {e}")),
            };
            verify_qi(g, &d.graph, &q).err().map(|e| format!("{name}: {e}"))
        })
        .collect();
    if bad.is_empty() {
        pass(format!("{} decompositions checked exhaustively", decomps.len()))
    } else {
        fail(format!("{} failed, first: {}", bad.len(), bad[0]))
    }
}

fn oracle_check() -> Check {
    use rayon::prelude::*;
    let graphs = expand("small:8").unwrap();
    let bad: Vec<String> = graphs
        .par_iter()
        .flat_map(|ng| {
            [Pattern::K4, Pattern::K4Minus]
                .into_iter()
                .filter_map(|p| {
                    let free = is_minor_free(&ng.graph, p);
                    match brute_force_fat_minor(&ng.graph, p, 0, u64::MAX) {
                        Ok(found) if found.is_none() == free => None,
                        Ok(_) => Some(format!("{} {}: disagreement", ng.name, p.name())),
                        Err(e) => Some(format!("{} {}: {e}", ng.name, p.name())),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    if bad.is_empty() {
        pass(format!("{} graphs, both patterns", graphs.len()))
    } else {
        fail(format!("{} disagreements, first: {}", bad.len(), bad[0]))
    }
}

fn path_ball_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for i in 0..50 {
        let g = match i % 3 {
            0 => random_tree(rng.gen_range(20..120), rng.gen()),
            1 => fatdecomp::corpus::grid(rng.gen_range(3..12), rng.gen_range(3..12)),
            _ => {
                // A connected piece of a sparse random graph.
                let g = gnp(60, 0.06, rng.gen());
                let comp = components(&g, &VertexSet::new())
                    .into_iter()
                    .max_by_key(|c| c.vertices.len())
                    .unwrap();
                g.induced(&comp.vertices).0
            }
        };
        let (a, b) = (rng.gen_range(0..g.n()), rng.gen_range(0..g.n()));
        let r = rng.gen_range(0..=5);
        let p = shortest_path(&g, &VertexSet::singleton(a), &VertexSet::singleton(b), None)
            .unwrap_or_else(|| Path::trivial(a));
        let pd = match path_ball_decomposition(&g, &p, r) {
            Ok(pd) => pd,
            Err(e) => return fail(format!("instance {i}: {e}")),
        };
        let rep = validate_partial(&g, &pd);
        if let Some(v) = rep.first_violation() {
            return fail(format!("instance {i}: {v}"));
        }
        if !rep.orw().at_most(2 * r + 1) || !rep.spread.at_most(2 * r + 1) {
            return fail(format!("instance {i}: orw {} irs {} for r = {r}", rep.orw(), rep.spread));
        }
        for (h, bag) in pd.inner.bags.iter().enumerate() {
            let d = bfs(&g, &[p.get(h)]);
            if bag.iter().any(|&v| d[v] as usize > 2 * r + 1) {
                return fail(format!("instance {i}: bag {h} leaves B(p_{h}, {})", 2 * r + 1));
            }
        }
    }
    pass("50 instances (trees, grids, random graphs), r <= 5")
}

/// Rejection of a mutated certificate by the same code path `verify` runs.
fn rejected(g: &Graph, text: &str, kind: Kind, target: Option<Target>) -> bool {
    let graph = fatdecomp::graph::io::write_edge_list(g);
    let opts = VerifyOptions { target, fat: Some(1), ..VerifyOptions::default() };
    !matches!(verify(&graph, text, kind, &opts), Ok(Ok(_)))
}

fn mutation_check(decomps: &Decomps, witnesses: &[(Graph, MinorModel, Target)]) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let usable: Vec<&(String, Graph, GraphDecomposition)> =
        decomps.iter().filter(|(_, g, _)| g.n() >= 2 && g.n() <= 600).collect();
    if usable.is_empty() || witnesses.is_empty() {
        return fail("no certificates to mutate");
    }
    let mut tried = 0;
    let mut missed = Vec::new();
    // Bag deletion: a vertex disappears from every bag.
    for i in 0..34 {
        let (name, g, d) = usable[i % usable.len()];
        let v = rng.gen_range(0..g.n());
        let mut m = d.clone();
        for bag in &mut m.bags {
            *bag = bag.iter().copied().filter(|&x| x != v).collect();
        }
        let text = write_decomposition(&m);
        debug_assert!(parse_decomposition(&text).is_ok());
        tried += 1;
        if !rejected(g, &text, Kind::Decomposition, None) {
            missed.push(format!("{name} without vertex {v}"));
        }
    }
    for i in 0..66 {
        let (g, model, target) = &witnesses[i % witnesses.len()];
        let mut m = model.clone();
        let long: Vec<usize> = (0..m.paths.len()).filter(|&e| m.paths[e].vertices().len() >= 2).collect();
        let what = if i % 2 == 0 && !long.is_empty() {
            // Path truncation: drop the last vertex of a branch path.
            let e = long[rng.gen_range(0..long.len())];
            let v = m.paths[e].vertices();
            m.paths[e] = Path::new(v[..v.len() - 1].to_vec()).unwrap();
            format!("path {e} truncated")
        } else {
            // Branch-set merge: two branch sets become their union.
            let a = rng.gen_range(0..m.branch_sets.len());
            let b = (a + 1 + rng.gen_range(0..m.branch_sets.len() - 1)) % m.branch_sets.len();
            let u = m.branch_sets[a].union(&m.branch_sets[b]);
            m.branch_sets[a] = u.clone();
            m.branch_sets[b] = u;
            format!("branch sets {a} and {b} merged")
        };
        tried += 1;
        if !rejected(g, &write_model(&m), Kind::Model, Some(*target)) {
            missed.push(what);
        }
    }
    if missed.is_empty() {
        pass(format!("{tried} mutants rejected"))
    } else {
        fail(format!("{} of {tried} accepted, first: {}", missed.len(), missed[0]))
    }
}
