//! Test-graph generators and the small exhaustive corpus.
//!
//! Specs are `family:param` strings, e.g. `cycle:60`, `grid:12x12`,
//! `theta:10,10,10`, `gnp:30:0.1:7`, `trap4m:5`, `small:6`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::minors::Pattern;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// A generated graph with the spec that produced it.
#[derive(Clone, Debug)]
pub struct NamedGraph {
    pub name: String,
    pub graph: Graph,
}

pub fn grid(w: usize, h: usize) -> Graph {
    let mut g = Graph::empty(w * h);
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                g.add_edge(v, v + 1).unwrap();
            }
            if y + 1 < h {
                g.add_edge(v, v + w).unwrap();
            }
        }
    }
    g
}

/// Two poles `0` and `1` joined by internally disjoint paths with the given
/// numbers of edges.
pub fn theta(arms: &[usize]) -> Result<Graph> {
    if arms.iter().any(|&a| a == 0) || arms.iter().filter(|&&a| a == 1).count() > 1 {
        return Err(Error::domain("theta arms need length >= 1, at most one of length 1"));
    }
    let mut g = Graph::empty(2);
    for &a in arms {
        add_path_between(&mut g, 0, 1, a);
    }
    Ok(g)
}

/// Adds a path with `len` edges from `u` to `v` through fresh vertices.
fn add_path_between(g: &mut Graph, u: usize, v: usize, len: usize) {
    let mut prev = u;
    for _ in 1..len {
        let x = g.add_vertex();
        g.add_edge(prev, x).unwrap();
        prev = x;
    }
    g.add_edge(prev, v).unwrap();
}

/// Replaces every edge by a path with `s` edges.
pub fn subdivide(g: &Graph, s: usize) -> Graph {
    assert!(s >= 1, "subdivision length must be positive");
    let mut out = Graph::empty(g.n());
    for (u, v) in g.edges() {
        add_path_between(&mut out, u, v, s);
    }
    out
}

/// The pattern with every edge subdivided into `s` edges.
pub fn trap(pattern: Pattern, s: usize) -> Graph {
    subdivide(&pattern.graph(), s)
}

/// Uniform random attachment tree.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for v in 1..n {
        g.add_edge(rng.gen_range(0..v), v).unwrap();
    }
    g
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn adjacency_code(g: &Graph, order: &[usize]) -> u64 {
    // Bit per pair (i, j), i < j, of positions in `order`.
    let mut code = 0u64;
    let n = order.len();
    for i in 0..n {
        for j in i + 1..n {
            code <<= 1;
            if g.has_edge(order[i], order[j]) {
                code |= 1;
            }
        }
    }
    code
}

/// Stable colour refinement; colours are ranks of invariant signatures.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = vec![0; n];
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| distinct.binary_search(s).unwrap())
            .collect();
        let before = color.iter().collect::<HashSet<_>>().len();
        color = next;
        if distinct.len() == before {
            return color;
        }
    }
}

fn permutations(items: &[usize], out: &mut Vec<Vec<usize>>) {
    let mut v = items.to_vec();
    let k = v.len();
    let mut c = vec![0; k];
    out.push(v.clone());
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                v.swap(0, i);
            } else {
                v.swap(c[i], i);
            }
            out.push(v.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Canonical code of a graph with at most 11 vertices: the smallest
/// adjacency code over orderings that respect the refined colours.
pub fn canonical_code(g: &Graph) -> u64 {
    assert!(g.n() <= 11, "canonical codes are limited to 11 vertices");
    let color = refine(g);
    let ncol = color.iter().max().map_or(0, |c| c + 1);
    let cells: Vec<Vec<usize>> = (0..ncol)
        .map(|c| (0..g.n()).filter(|&v| color[v] == c).collect())
        .collect();
    let perms: Vec<Vec<Vec<usize>>> = cells
        .iter()
        .map(|cell| {
            let mut out = Vec::new();
            permutations(cell, &mut out);
            out
        })
        .collect();
    let mut best = u64::MAX;
    let mut idx = vec![0usize; cells.len()];
    loop {
        let order: Vec<usize> = idx
            .iter()
            .enumerate()
            .flat_map(|(c, &i)| perms[c][i].iter().copied())
            .collect();
        best = best.min(adjacency_code(g, &order));
        let mut c = 0;
        loop {
            if c == idx.len() {
                return best;
            }
            idx[c] += 1;
            if idx[c] < perms[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
    }
}

/// All connected graphs on exactly `n` vertices, one per isomorphism class.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 9, "exhaustive generation is limited to 9 vertices");
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            // Every connected graph has a vertex whose removal keeps it connected.
            for mask in 1u32..(1 << (size - 1)) {
                let mut h = g.clone();
                let v = h.add_vertex();
                for u in 0..size - 1 {
                    if mask >> u & 1 == 1 {
                        h.add_edge(u, v).unwrap();
                    }
                }
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

fn num<T: std::str::FromStr>(s: &str, spec: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::domain(format!("bad number {s:?} in corpus spec {spec:?}")))
}

/// Expands one `family:param` item.
pub fn expand(item: &str) -> Result<Vec<NamedGraph>> {
    let item = item.trim();
    let (family, rest) = item.split_once(':').unwrap_or((item, ""));
    let parts: Vec<&str> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(':').collect()
    };
    let arg = |i: usize| -> Result<&str> {
        parts
            .get(i)
            .copied()
            .ok_or_else(|| Error::domain(format!("corpus spec {item:?} is missing a parameter")))
    };
    let one = |g: Graph| vec![NamedGraph { name: item.to_string(), graph: g }];
    Ok(match family {
        "path" => one(Graph::path_graph(num(arg(0)?, item)?)),
        "cycle" => {
            let n: usize = num(arg(0)?, item)?;
            if n < 3 {
                return Err(Error::domain("a cycle needs at least three vertices"));
            }
            one(Graph::cycle_graph(n))
        }
        "complete" => one(Graph::complete_graph(num(arg(0)?, item)?)),
        "tree" => {
            let seed = parts.get(1).map_or(Ok(0), |s| num(s, item))?;
            one(random_tree(num(arg(0)?, item)?, seed))
        }
        "grid" => {
            let a = arg(0)?;
            let (w, h) = a.split_once('x').unwrap_or((a, a));
            one(grid(num(w, item)?, num(h, item)?))
        }
        "theta" => {
            let arms = arg(0)?
                .split(',')
                .map(|s| num(s, item))
                .collect::<Result<Vec<usize>>>()?;
            one(theta(&arms)?)
        }
        "gnp" => {
            let p: f64 = num(arg(1)?, item)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::domain(format!("edge probability {p} outside [0, 1]")));
            }
            let seed = parts.get(2).map_or(Ok(0), |s| num(s, item))?;
            one(gnp(num(arg(0)?, item)?, p, seed))
        }
        "trap4m" => one(trap(Pattern::K4Minus, num(arg(0)?, item)?)),
        "trap4" => one(trap(Pattern::K4, num(arg(0)?, item)?)),
        "small" => {
            let n: usize = num(arg(0)?, item)?;
            if n > 8 {
                return Err(Error::domain("small graphs are generated up to 8 vertices"));
            }
            (1..=n)
                .flat_map(|m| {
                    connected_graphs(m)
                        .into_iter()
                        .enumerate()
                        .map(move |(i, g)| NamedGraph { name: format!("small:{m}#{i}"), graph: g })
                })
                .collect()
        }
        "builtin" => builtin(),
        "empty" => Vec::new(),
        _ => return Err(Error::domain(format!("unknown corpus family {family:?}"))),
    })
}

/// Expands a comma- or whitespace-separated list of items. Theta arms use
/// commas too, so items are split on `;` and whitespace only.
pub fn parse_spec(spec: &str) -> Result<Vec<NamedGraph>> {
    let mut out = Vec::new();
    for item in spec.split(|c: char| c == ';' || c.is_whitespace()) {
        if !item.is_empty() {
            out.extend(expand(item)?);
        }
    }
    Ok(out)
}

/// The standard mixed corpus: paths, cycles, trees, thetas, grids, random
/// graphs and subdivided traps.
pub fn builtin() -> Vec<NamedGraph> {
    let mut items: Vec<String> = Vec::new();
    for n in [1, 2, 5, 40, 100, 250, 500] {
        items.push(format!("path:{n}"));
    }
    for n in [3, 10, 60, 100, 200, 500] {
        items.push(format!("cycle:{n}"));
    }
    for (n, seed) in [(30, 1), (100, 2), (200, 3), (300, 4)] {
        items.push(format!("tree:{n}:{seed}"));
    }
    for arms in ["2,2,2", "10,10,10", "40,40,40", "100,100,100", "150,150,150", "5,120,120", "30,60,90,120"] {
        items.push(format!("theta:{arms}"));
    }
    for (w, h) in [(3, 3), (6, 6), (10, 10), (12, 12), (2, 60)] {
        items.push(format!("grid:{w}x{h}"));
    }
    for (n, p, seed) in [(10, 0.3, 1), (20, 0.15, 2), (30, 0.08, 3), (40, 0.05, 4), (40, 0.2, 5)] {
        items.push(format!("gnp:{n}:{p}:{seed}"));
    }
    for s in [1, 5, 20, 60] {
        items.push(format!("trap4m:{s}"));
        items.push(format!("trap4:{s}"));
    }
    items
        .iter()
        .flat_map(|i| expand(i).expect("builtin items are well formed"))
        .collect()
}
