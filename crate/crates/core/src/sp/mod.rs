//! The K4 pipeline.
//!
//! Each star step looks at the components left over once a collar around the
//! current ball is removed. A component whose boundary holds three far
//! vertices is handled by [`three_vertices_step`]; one whose boundary splits
//! into two far blobs by [`bipartitioned_boundary_step`]; anything else sits in
//! a single pendant bag. Both non-trivial branches either produce a
//! decomposition modelled on a series-parallel graph or a fat K4.
//!
//! The production constants are large: with `K = 1` the seed radius is 21392,
//! so every graph that fits in memory is covered by the first ball. The
//! scaled constants ([`Constants::scaled`]) shrink the coarse Menger factor so
//! the deeper branches run on graphs of a few thousand vertices.

mod fat;
mod menger;
mod three;
mod two_ball;
mod util;

pub use fat::fat_k4_from_three_paths;
pub use menger::{coarse_menger_two_paths, far_path_past_ball, hitting_ball_in_component, Hit, MengerOutcome};
pub use three::{
    ball_and_three_components, check_absorbing, check_three_paths, three_paths_far_apart,
    three_vertices_step, two_ball_decomposition_absorbing, ThreePaths,
};
pub use two_ball::{
    bipartitioned_boundary_step, check_step_properties, check_two_ball,
    two_ball_component_decomposition, TwoBallDecomposition,
};

use crate::decomp::{
    extension_driver, Ball, DriverParams, GraphDecomposition, Outcome, StepDecomposition,
    StepOutcome,
};
use crate::error::{Error, Result};
use crate::graph::{Component, DistCache, Graph, Vertex, VertexSet};
use crate::minors::{MinorModel, Pattern};
use std::cell::Cell;

/// The coarse Menger factor of the production constants.
pub const MENGER_FACTOR: usize = 129;

/// Default number of path searches the far-path heuristics may run.
pub const DEFAULT_BUDGET: u64 = 200_000;

/// Radii and bounds of the K4 pipeline for one fatness `K`.
///
/// With Menger factor `m`: `R0 = (m+1)·5K`, `R0' = 3R0 + 5K + 1`,
/// `ℓ = 2R0 + 5K + 2`, `R1 = 4(2(ℓ + 22K + 1) + 11K + 2)`,
/// `R2 = 2R1 + 5K + 3`, `f0 = R2 + 2R0' + 2` and `f1 = 22`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constants {
    pub k: usize,
    pub menger: usize,
    pub r0: usize,
    pub r0p: usize,
    pub ell: usize,
    pub r1: usize,
    pub r2: usize,
    pub f0: usize,
    pub f1: usize,
}

impl Constants {
    pub fn new(k: usize) -> Result<Self> {
        Self::with_factor(k, MENGER_FACTOR)
    }

    /// Constants with a smaller Menger factor `m >= 4`. Outputs are still
    /// checked in full; only the size at which the deep branches start changes.
    /// Below 4 the ball `B(w', 22K)` of the three-vertex step outgrows `R0`.
    pub fn scaled(k: usize, m: usize) -> Result<Self> {
        if m < 4 {
            return Err(Error::domain("the scaled Menger factor must be at least 4"));
        }
        Self::with_factor(k, m)
    }

    fn with_factor(k: usize, m: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("fatness K must be at least 1"));
        }
        let r0 = (m + 1) * 5 * k;
        let r0p = 3 * r0 + 5 * k + 1;
        let ell = 2 * r0 + 5 * k + 2;
        let r1 = 4 * (2 * (ell + 22 * k + 1) + 11 * k + 2);
        let r2 = 2 * r1 + 5 * k + 3;
        Ok(Constants {
            k,
            menger: m,
            r0,
            r0p,
            ell,
            r1,
            r2,
            f0: r2 + 2 * r0p + 2,
            f1: 22,
        })
    }

    pub fn is_scaled(&self) -> bool {
        self.menger != MENGER_FACTOR
    }

    /// Radius of the balls the coarse Menger scan removes: `m·5K`.
    pub fn hitting_radius(&self) -> usize {
        self.menger * 5 * self.k
    }

    /// Width of the collar around the step ball: `22K + 1`.
    pub fn collar(&self) -> usize {
        22 * self.k + 1
    }

    /// Final `(orw, irs)` bounds.
    pub fn bounds(&self) -> (usize, usize) {
        (self.f0, self.f1)
    }

    /// Quasi-isometry constants `(M, A)` read off the bounds: both `2·f0`.
    pub fn qi_constants(&self) -> (usize, usize) {
        let c = 2 * self.f0.max(self.f1);
        (c, c)
    }

    pub fn driver_params(&self) -> DriverParams {
        DriverParams {
            radius: self.r2,
            step_orw: self.f0,
            step_irs: 7,
            step_irs_attach: 7,
            target: Pattern::K4,
            fatness: self.k,
            check_invariants: cfg!(debug_assertions),
        }
    }
}

pub fn constants(k: usize) -> Result<Constants> {
    Constants::new(k)
}

/// A step result or a fat K4 found on the way.
#[derive(Clone, Debug)]
pub enum Found<T> {
    Value(T),
    Witness(MinorModel),
}

impl<T> Found<T> {
    pub fn value(self) -> Option<T> {
        match self {
            Found::Value(v) => Some(v),
            Found::Witness(_) => None,
        }
    }

    pub fn witness(self) -> Option<MinorModel> {
        match self {
            Found::Value(_) => None,
            Found::Witness(m) => Some(m),
        }
    }
}

/// Unwraps a `Found`, returning early with any witness.
macro_rules! found {
    ($e:expr) => {
        match $e {
            $crate::sp::Found::Value(v) => v,
            $crate::sp::Found::Witness(m) => return Ok($crate::sp::Found::Witness(m)),
        }
    };
}
pub(crate) use found;

/// Counts path searches; running out is reported as a budget error.
#[derive(Debug)]
pub struct Budget {
    left: Cell<u64>,
    total: u64,
}

impl Budget {
    pub fn new(total: u64) -> Self {
        Budget {
            left: Cell::new(total),
            total,
        }
    }

    pub fn spend(&self, stage: &str) -> Result<()> {
        let left = self.left.get();
        if left == 0 {
            return Err(self.exhausted(stage));
        }
        self.left.set(left - 1);
        Ok(())
    }

    pub fn exhausted(&self, stage: &str) -> Error {
        Error::Budget {
            stage: stage.to_string(),
            budget: self.total,
        }
    }

    pub fn left(&self) -> u64 {
        self.left.get()
    }
}

/// Everything a K4 step needs: distances, constants, budget, and whether to
/// re-check each sub-result.
pub struct SpContext<'c, 'g> {
    pub gc: &'c DistCache<'g>,
    pub consts: Constants,
    pub budget: Budget,
    pub check: bool,
}

impl<'c, 'g> SpContext<'c, 'g> {
    pub fn new(gc: &'c DistCache<'g>, consts: Constants, budget: u64) -> Self {
        SpContext {
            gc,
            consts,
            budget: Budget::new(budget),
            check: cfg!(debug_assertions),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.gc.graph()
    }

    pub fn k(&self) -> usize {
        self.consts.k
    }
}

/// Tuning for [`decompose_series_parallel_with`].
#[derive(Clone, Copy, Debug)]
pub struct SpConfig {
    pub constants: Constants,
    pub budget: u64,
}

impl SpConfig {
    pub fn new(k: usize) -> Result<Self> {
        Ok(SpConfig {
            constants: Constants::new(k)?,
            budget: DEFAULT_BUDGET,
        })
    }
}

/// Three members of `set` pairwise at least `d` apart.
///
/// Exhaustive (with bitsets) up to 2000 vertices, a farthest-point sweep
/// beyond that.
pub fn far_triple(gc: &DistCache<'_>, set: &VertexSet, d: usize) -> Option<[Vertex; 3]> {
    let s = set.as_slice();
    let far = |a: Vertex, b: Vertex| gc.at_least(a, b, d);
    if s.len() <= 2000 {
        let words = s.len().div_ceil(64);
        let rows: Vec<Vec<u64>> = s
            .iter()
            .map(|&a| {
                let row = gc.row(a);
                let mut bits = vec![0u64; words];
                for (j, &b) in s.iter().enumerate() {
                    if row[b] == crate::graph::UNREACHED || row[b] as usize >= d {
                        bits[j / 64] |= 1 << (j % 64);
                    }
                }
                bits
            })
            .collect();
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if rows[i][j / 64] >> (j % 64) & 1 == 0 {
                    continue;
                }
                // Only third members after j, so each triple is found once.
                for w in j / 64..words {
                    let mut both = rows[i][w] & rows[j][w];
                    if w == j / 64 {
                        both &= u64::MAX.checked_shl((j % 64 + 1) as u32).unwrap_or(0);
                    }
                    if both != 0 {
                        let c = w * 64 + both.trailing_zeros() as usize;
                        return Some([s[i], s[j], s[c]]);
                    }
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

/// Two members of `set` at least `d` apart: a double sweep, then exhaustive.
pub(crate) fn far_pair(gc: &DistCache<'_>, set: &VertexSet, d: usize) -> Option<(Vertex, Vertex)> {
    let start = set.first()?;
    let sweep = |from: Vertex| {
        let row = gc.row(from);
        set.iter().copied().max_by_key(|&x| (row[x], std::cmp::Reverse(x))).unwrap()
    };
    let a = sweep(start);
    let b = sweep(a);
    if gc.at_least(a, b, d) {
        return Some((a.min(b), a.max(b)));
    }
    for &a in set {
        let row = gc.row(a);
        if let Some(&b) = set.iter().find(|&&b| b > a && (row[b] == crate::graph::UNREACHED || row[b] as usize >= d)) {
            return Some((a, b));
        }
    }
    None
}

/// One star step of the K4 pipeline for the component `comp` of `G - B(w, r)`.
///
/// The collar `B(w, r + 22K + 1)` goes into one node `g'` next to the anchor
/// `g` with bag `N(C)`. Every component `D` of `C` minus the collar becomes a
/// pendant bag `N(D)`, a bipartitioned decomposition glued at `g'`, or, when
/// `∂D` has three far vertices, the whole step is handed to
/// [`three_vertices_step`].
pub fn k4_star_step(cx: &SpContext<'_, '_>, b: Ball, comp: &Component) -> Result<StepOutcome> {
    let c = &cx.consts;
    let g = cx.graph();
    if b.radius > c.r2 {
        return Err(Error::precondition(format!(
            "ball radius {} exceeds {}",
            b.radius, c.r2
        )));
    }
    let collar = cx.gc.ball(b.center, b.radius + c.collar());
    let inner: Vec<Component> = crate::graph::components(g, &collar)
        .into_iter()
        .filter(|d| d.vertices.is_subset(&comp.vertices))
        .collect();
    for d in &inner {
        if let Some(t) = far_triple(cx.gc, &d.boundary, c.r1) {
            return Ok(into_step(three_vertices_step(cx, b, comp, d, t)?));
        }
    }

    let nc = &comp.neighborhood;
    let top = collar.intersection(&comp.vertices).union(nc);
    let mut graph = Graph::empty(2);
    graph.add_edge(0, 1)?;
    let mut pd = GraphDecomposition::new(graph, vec![nc.clone(), top.clone()]);
    let mut support = top;
    let wide = 2 * c.r1 + 5 * c.k + 2;
    for d in &inner {
        let pair = far_pair(cx.gc, &d.boundary, wide);
        let Some((v1, v2)) = pair else {
            let h = pd.add_node(d.neighborhood.clone());
            pd.graph.add_edge(1, h)?;
            continue;
        };
        let (b1, b2) = (cx.gc.row(v1), cx.gc.row(v2));
        let near = |x: Vertex| b1[x] as usize <= c.r1 || b2[x] as usize <= c.r1;
        if let Some(&x) = d.boundary.iter().find(|&&x| !near(x)) {
            // Only reachable when the triple search above fell back to a sweep.
            return Ok(into_step(three_vertices_step(cx, b, comp, d, [v1, v2, x])?));
        }
        let outer = Ball::new(b.center, b.radius + c.collar());
        let sub = match bipartitioned_boundary_step(cx, outer, d, v1, v2)? {
            Found::Witness(m) => return Ok(StepOutcome::Witness(m)),
            Found::Value(s) => s,
        };
        let offset = pd.node_count();
        for (x, bag) in sub.partial.inner.bags.iter().enumerate() {
            if x != sub.anchor {
                pd.add_node(bag.clone());
            }
        }
        let map = |x: usize| -> usize {
            match x.cmp(&sub.anchor) {
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => offset + x,
                std::cmp::Ordering::Greater => offset + x - 1,
            }
        };
        for (x, y) in sub.partial.inner.graph.edges() {
            pd.graph.add_edge(map(x), map(y))?;
        }
        support = support.union(&sub.partial.support);
    }
    let step = StepDecomposition {
        partial: pd.into_partial(support),
        anchor: 0,
    };
    if cx.check {
        check_step_properties(cx, comp, &step, c.f0, 7)
            .map_err(|e| Error::internal(format!("star step: {e}")))?;
    }
    Ok(StepOutcome::Decomposition(step))
}

fn into_step(f: Found<StepDecomposition>) -> StepOutcome {
    match f {
        Found::Value(s) => StepOutcome::Decomposition(s),
        Found::Witness(m) => StepOutcome::Witness(m),
    }
}

/// Decomposes `G` on a K4-minor-free graph with bag radius at most `f0` and
/// spread at most 22, or returns a `K`-fat K4 model.
pub fn decompose_series_parallel(g: &Graph, k: usize) -> Result<Outcome> {
    decompose_series_parallel_with(g, &SpConfig::new(k)?)
}

pub fn decompose_series_parallel_with(g: &Graph, config: &SpConfig) -> Result<Outcome> {
    let consts = config.constants;
    let budget = Budget::new(config.budget);
    extension_driver(g, &consts.driver_params(), |gc, b, comp| {
        let cx = SpContext {
            gc,
            consts,
            budget: Budget::new(budget.left()),
            check: cfg!(debug_assertions),
        };
        let out = k4_star_step(&cx, b, comp);
        // The step's spending carries over to the next one.
        budget.left.set(cx.budget.left());
        out.map_err(|e| match e {
            Error::Budget { stage, .. } => Error::Budget {
                stage,
                budget: config.budget,
            },
            e => e,
        })
    })
}
