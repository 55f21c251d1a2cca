//! The round-based extension driver shared by both decomposition pipelines.

use super::extend::{check_attachment, glue, is_component_feasible, make_ball_componental, Attachment};
use super::{irs_on, validate, validate_partial, GraphDecomposition, Outcome, PartialDecomposition};
use crate::error::{Error, Result};
use crate::graph::{components, components_of, Component, Dist, DistCache, Graph, Vertex, VertexSet};
use crate::minors::{fatness, is_minor_free, MinorModel, Pattern};

/// `B_G(center, radius)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Vertex,
    pub radius: usize,
}

impl Ball {
    pub fn new(center: Vertex, radius: usize) -> Self {
        Ball { center, radius }
    }

    pub fn vertices(&self, gc: &DistCache<'_>) -> VertexSet {
        gc.ball(self.center, self.radius)
    }
}

/// A star-step result: a partial decomposition of `G[Y^C]` whose node
/// `anchor` has bag exactly `N(C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepDecomposition {
    pub partial: PartialDecomposition,
    pub anchor: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Decomposition(StepDecomposition),
    Witness(MinorModel),
}

/// Bounds a star step promises, and what the driver enforces on the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DriverParams {
    /// `R`: seed radius and ball-componental radius.
    pub radius: usize,
    /// `f0'`: bag radius bound of a single step.
    pub step_orw: usize,
    /// `f1'`: spread bound of a single step.
    pub step_irs: usize,
    /// `f1''`: spread bound of a single step on `N(C)`.
    pub step_irs_attach: usize,
    /// `H` must exclude this pattern as a minor; witnesses must model it.
    pub target: Pattern,
    pub fatness: usize,
    /// Re-verify every step and glue (slow; on by default in debug builds).
    pub check_invariants: bool,
}

impl DriverParams {
    pub fn orw_bound(&self) -> usize {
        self.step_orw.max(self.radius)
    }

    pub fn irs_bound(&self) -> usize {
        self.step_irs + 2 * self.step_irs_attach + 1
    }
}

fn check_step(
    gc: &DistCache<'_>,
    params: &DriverParams,
    comp: &Component,
    step: &StepDecomposition,
) -> Result<()> {
    let g = gc.graph();
    let sd = &step.partial;
    let report = validate_partial(g, sd);
    if let Some(v) = report.first_violation() {
        return Err(Error::internal(format!("star step output invalid: {v}")));
    }
    let orw = report.orw();
    if !orw.at_most(params.step_orw) {
        return Err(Error::internal(format!(
            "star step bag radius {orw} exceeds {}",
            params.step_orw
        )));
    }
    if !report.spread.at_most(params.step_irs) {
        return Err(Error::internal(format!(
            "star step spread {} exceeds {}",
            report.spread, params.step_irs
        )));
    }
    let attach = irs_on(&sd.inner, &comp.neighborhood);
    if !attach.at_most(params.step_irs_attach) {
        return Err(Error::internal(format!(
            "star step spread on N(C) is {attach}, above {}",
            params.step_irs_attach
        )));
    }
    is_component_feasible(gc, sd, params.radius, Some(&comp.vertices))
        .map_err(|e| Error::internal(format!("star step output not feasible: {e}")))?;
    Ok(())
}

/// Builds a decomposition round by round from seed balls.
///
/// Every component of `G` gets a seed node with bag `B(v, R)` for its
/// smallest vertex `v`. Each round runs `step` on every component of `G - Y`
/// together with its ball, glues the results, and restores
/// ball-componentality. A witness from any step ends the run.
pub fn extension_driver<F>(g: &Graph, params: &DriverParams, mut step: F) -> Result<Outcome>
where
    F: FnMut(&DistCache<'_>, Ball, &Component) -> Result<StepOutcome>,
{
    let gc = DistCache::new(g);
    let r = params.radius;
    let comps = components_of(g, &vec![true; g.n()]);
    let mut seed_of = vec![0usize; g.n()];
    let mut bags = Vec::with_capacity(comps.len());
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            seed_of[v] = i;
        }
        bags.push(gc.ball(c.as_slice()[0], r));
    }
    let support = VertexSet::union_all(&bags);
    let mut pd = PartialDecomposition {
        inner: GraphDecomposition::new(Graph::empty(comps.len()), bags),
        support,
    };
    let mut pending: Vec<Attachment> = components(g, &pd.support)
        .into_iter()
        .map(|component| {
            let i = seed_of[component.vertices.as_slice()[0]];
            Attachment {
                component,
                center: comps[i].as_slice()[0],
                radius: r,
                node: i,
            }
        })
        .collect();

    let mut rounds = 0;
    while !pending.is_empty() {
        rounds += 1;
        if rounds > g.n() + 1 {
            return Err(Error::internal("extension driver did not terminate"));
        }
        let mut results = Vec::with_capacity(pending.len());
        for att in &pending {
            let ball = Ball::new(att.center, att.radius);
            match step(&gc, ball, &att.component)? {
                StepOutcome::Witness(m) => return finish_witness(g, params, m),
                StepOutcome::Decomposition(sd) => {
                    check_attachment(&pd, &att.component, att.node, &sd)?;
                    if params.check_invariants {
                        check_step(&gc, params, &att.component, &sd)?;
                    }
                    results.push((att.node, sd));
                }
            }
        }
        let parts: Vec<(usize, &StepDecomposition)> = results.iter().map(|(h, s)| (*h, s)).collect();
        let before = pd;
        pd = glue(&before, &parts).decomposition;
        if params.check_invariants {
            let report = validate_partial(g, &pd);
            if let Some(v) = report.first_violation() {
                return Err(Error::internal(format!("glued decomposition invalid: {v}")));
            }
            let attached = VertexSet::union_all(pending.iter().map(|a| &a.component.neighborhood));
            check_spread_growth(&before, &pd, &attached, params.step_irs_attach)?;
        }
        let bc = make_ball_componental(&gc, &pd, r)?;
        if params.check_invariants {
            check_growth(&before, &bc.decomposition)?;
        }
        pd = bc.decomposition;
        pending = bc.attachments;
    }
    finish_decomposition(g, params, pd.inner)
}

/// Gluing raises the spread of an attachment vertex by at most twice the
/// step's spread on `N(C)`, and leaves other old vertices alone.
fn check_spread_growth(
    before: &PartialDecomposition,
    after: &PartialDecomposition,
    attached: &VertexSet,
    step_attach: usize,
) -> Result<()> {
    let n = after.support.last().map_or(0, |m| m + 1);
    let old_t = before.inner.traces(n);
    let new_t = after.inner.traces(n);
    let hc_old = DistCache::new(&before.inner.graph);
    let hc_new = DistCache::new(&after.inner.graph);
    for &v in &before.support {
        let old = hc_old.rad(&VertexSet::from_sorted(old_t[v].clone()));
        let new = hc_new.rad(&VertexSet::from_sorted(new_t[v].clone()));
        let ok = match (old, attached.contains(v)) {
            (Dist::Finite(o), true) => new.at_most(o + 2 * step_attach),
            (Dist::Finite(o), false) => new.at_most(o),
            (Dist::Infinite, _) => true,
        };
        if !ok {
            return Err(Error::internal(format!(
                "gluing raised the spread of vertex {v} from {old} to {new}"
            )));
        }
    }
    Ok(())
}

/// Rounds only add nodes, edges and bag vertices.
fn check_growth(before: &PartialDecomposition, after: &PartialDecomposition) -> Result<()> {
    let (b, a) = (&before.inner, &after.inner);
    let grown = a.node_count() >= b.node_count()
        && b.graph.edges().iter().all(|&(x, y)| a.graph.has_edge(x, y))
        && b.bags.iter().zip(&a.bags).all(|(old, new)| old.is_subset(new))
        && before.support.is_subset(&after.support);
    if !grown {
        return Err(Error::internal("a round shrank the running decomposition"));
    }
    Ok(())
}

fn finish_witness(g: &Graph, params: &DriverParams, m: MinorModel) -> Result<Outcome> {
    if m.pattern != params.target.graph() {
        return Err(Error::internal("witness models the wrong pattern"));
    }
    match fatness(g, &m)? {
        Dist::Finite(d) if d < params.fatness => Err(Error::internal(format!(
            "witness is only {d}-fat, below {}",
            params.fatness
        ))),
        _ => Ok(Outcome::Witness(m)),
    }
}

fn finish_decomposition(
    g: &Graph,
    params: &DriverParams,
    d: GraphDecomposition,
) -> Result<Outcome> {
    let report = validate(g, &d);
    if let Some(v) = report.first_violation() {
        return Err(Error::internal(format!("final decomposition invalid: {v}")));
    }
    let orw = report.orw();
    if !orw.at_most(params.orw_bound()) {
        return Err(Error::internal(format!(
            "final bag radius {orw} exceeds {}",
            params.orw_bound()
        )));
    }
    if !report.spread.at_most(params.irs_bound()) {
        return Err(Error::internal(format!(
            "final spread {} exceeds {}",
            report.spread,
            params.irs_bound()
        )));
    }
    if !is_minor_free(&d.graph, params.target) {
        return Err(Error::internal(format!(
            "decomposition graph has a {} minor",
            params.target
        )));
    }
    Ok(Outcome::Decomposition(d))
}
