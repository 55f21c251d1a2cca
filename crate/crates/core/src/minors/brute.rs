//! Exhaustive search for fat minor models in small graphs.
//!
//! Branch sets range over connected vertex subsets, encoded as `u64` masks.
//! For `K = 0` single-edge branch paths suffice: a longer path can always be
//! absorbed into one of its end branch sets. For `K >= 1` branch paths are
//! enumerated by backtracking.

use super::{MinorModel, Pattern};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path, VertexSet};

/// Node expansions allowed when the caller does not say otherwise.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

struct Counter {
    left: u64,
    budget: u64,
}

impl Counter {
    fn tick(&mut self, stage: &str) -> Result<()> {
        if self.left == 0 {
            return Err(Error::Budget {
                stage: stage.to_string(),
                budget: self.budget,
            });
        }
        self.left -= 1;
        Ok(())
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn set_of(m: u64) -> VertexSet {
    VertexSet::from_sorted(bits(m).collect())
}

struct Search<'a> {
    n: usize,
    nb: Vec<u64>,
    k: usize,
    pattern: Pattern,
    edges: Vec<(usize, usize)>,
    subsets: Vec<Subset>,
    counter: &'a mut Counter,
}

#[derive(Clone, Copy)]
struct Subset {
    mask: u64,
    min: usize,
    /// Open neighbourhood.
    nbhd: u64,
    /// `B(S, K-1)` for `K >= 1`, else `S`.
    near: u64,
}

impl Search<'_> {
    fn closed_nbhd(&self, m: u64) -> u64 {
        bits(m).fold(m, |acc, v| acc | self.nb[v])
    }

    /// `B(S, K-1)` as a mask.
    fn near(&self, m: u64) -> u64 {
        let mut b = m;
        for _ in 1..self.k.max(1) {
            b = self.closed_nbhd(b);
        }
        b
    }

    fn enumerate_connected(&mut self) -> Result<()> {
        for v in 0..self.n {
            let below = (1u64 << v) - 1;
            let ext = self.nb[v] & !below & !(1u64 << v);
            self.grow(1u64 << v, ext, below | (1u64 << v))?;
        }
        Ok(())
    }

    /// Each connected set is produced once, from its smallest vertex.
    fn grow(&mut self, s: u64, mut ext: u64, mut excluded: u64) -> Result<()> {
        self.counter.tick("connected subsets")?;
        let nbhd = self.closed_nbhd(s) & !s;
        let near = self.near(s);
        self.subsets.push(Subset {
            mask: s,
            min: s.trailing_zeros() as usize,
            nbhd,
            near,
        });
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            let wb = 1u64 << w;
            ext &= !wb;
            excluded |= wb;
            let new_ext = ext | (self.nb[w] & !excluded & !s);
            self.grow(s | wb, new_ext, excluded)?;
        }
        Ok(())
    }

    fn assign(&mut self, x: usize, chosen: &mut Vec<usize>) -> Result<Option<MinorModel>> {
        let order = self.pattern.order();
        if x == order {
            return self.route(chosen);
        }
        let prev_sym = self
            .pattern
            .symmetry_classes()
            .into_iter()
            .find_map(|c| c.iter().position(|&y| y == x).and_then(|i| i.checked_sub(1).map(|j| c[j])));
        let mut used = 0u64;
        let mut blocked = 0u64;
        for &i in chosen.iter() {
            used |= self.subsets[i].mask;
            blocked |= self.subsets[i].near;
        }
        for i in 0..self.subsets.len() {
            let s = self.subsets[i];
            if s.mask & (used | blocked) != 0 {
                continue;
            }
            if let Some(y) = prev_sym {
                if s.min <= self.subsets[chosen[y]].min {
                    continue;
                }
            }
            if self.k == 0 {
                let adjacent_ok = self
                    .edges
                    .iter()
                    .filter(|&&(a, b)| b == x && a < x)
                    .all(|&(a, _)| self.subsets[chosen[a]].nbhd & s.mask != 0);
                if !adjacent_ok {
                    continue;
                }
            }
            self.counter.tick("branch sets")?;
            chosen.push(i);
            if let Some(m) = self.assign(x + 1, chosen)? {
                return Ok(Some(m));
            }
            chosen.pop();
        }
        Ok(None)
    }

    fn route(&mut self, chosen: &[usize]) -> Result<Option<MinorModel>> {
        let branch: Vec<u64> = chosen.iter().map(|&i| self.subsets[i].mask).collect();
        if self.k == 0 {
            let paths = self
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (u, v) = bits(branch[a])
                        .find_map(|u| bits(self.nb[u] & branch[b]).next().map(|v| (u, v)))
                        .expect("adjacency was checked during assignment");
                    Path::new(vec![u, v]).expect("distinct ends")
                })
                .collect();
            return Ok(Some(self.model(&branch, paths)));
        }
        let mut paths = Vec::new();
        if self.route_edge(0, &branch, 0, &mut paths)? {
            return Ok(Some(self.model(&branch, paths)));
        }
        Ok(None)
    }

    fn model(&self, branch: &[u64], paths: Vec<Path>) -> MinorModel {
        MinorModel::new(
            self.pattern.graph(),
            branch.iter().map(|&m| set_of(m)).collect(),
            paths,
        )
    }

    /// Routes edges `e..` given the masks of paths already placed.
    fn route_edge(
        &mut self,
        e: usize,
        branch: &[u64],
        path_near: u64,
        paths: &mut Vec<Path>,
    ) -> Result<bool> {
        if e == self.edges.len() {
            return Ok(true);
        }
        let (a, b) = self.edges[e];
        let all_branch = branch.iter().fold(0, |acc, m| acc | m);
        let mut forbidden = path_near;
        for (z, &m) in branch.iter().enumerate() {
            if z != a && z != b {
                forbidden |= self.near(m);
            }
        }
        let free = !all_branch & !forbidden;
        let target = branch[b] & !forbidden;
        for s in bits(branch[a] & !forbidden) {
            let mut stack = vec![s];
            if self.extend(e, branch, path_near, paths, &mut stack, 1u64 << s, free, target)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        e: usize,
        branch: &[u64],
        path_near: u64,
        paths: &mut Vec<Path>,
        stack: &mut Vec<usize>,
        on_path: u64,
        free: u64,
        target: u64,
    ) -> Result<bool> {
        self.counter.tick("branch paths")?;
        let u = *stack.last().expect("stack starts with the source");
        for v in bits(self.nb[u] & !on_path) {
            let vb = 1u64 << v;
            if target & vb != 0 {
                stack.push(v);
                let mask = on_path | vb;
                paths.push(Path::new(stack.clone()).expect("simple by construction"));
                let near = self.near(mask);
                if self.route_edge(e + 1, branch, path_near | near, paths)? {
                    return Ok(true);
                }
                paths.pop();
                stack.pop();
            } else if free & vb != 0 {
                stack.push(v);
                if self.extend(e, branch, path_near, paths, stack, on_path | vb, free, target)? {
                    return Ok(true);
                }
                stack.pop();
            }
        }
        Ok(false)
    }
}

/// Searches for a `k`-fat model of `pattern` in `g`.
///
/// `Ok(None)` means the search was exhaustive and found nothing. Running out
/// of `budget` node expansions is an error, never a negative answer.
pub fn brute_force_fat_minor(
    g: &Graph,
    pattern: Pattern,
    k: usize,
    budget: u64,
) -> Result<Option<MinorModel>> {
    let n = g.n();
    if n > 64 {
        return Err(Error::domain("exhaustive search handles at most 64 vertices"));
    }
    let nb: Vec<u64> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |acc, &w| acc | (1u64 << w)))
        .collect();
    let mut counter = Counter {
        left: budget,
        budget,
    };
    let mut search = Search {
        n,
        nb,
        k,
        pattern,
        edges: pattern.edges(),
        subsets: Vec::new(),
        counter: &mut counter,
    };
    search.enumerate_connected()?;
    search.subsets.sort_by_key(|s| (s.min, s.mask.count_ones(), s.mask));
    search.assign(0, &mut Vec::new())
}
