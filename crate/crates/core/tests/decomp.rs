use fatdecomp::cactus::{decompose_cactus, driver_params};
use fatdecomp::decomp::io::{parse_decomposition, write_decomposition, write_partial};
use fatdecomp::decomp::{
    extension_driver, glue, irs, irs_at, is_ball_componental, is_component_feasible,
    make_ball_componental, orw, validate, validate_partial, StepDecomposition, StepOutcome,
};
use fatdecomp::graph::{components, DistCache, Graph, VertexSet};
use fatdecomp::minors::is_minor_free;
use fatdecomp::{Dist, GraphDecomposition, Outcome, PartialDecomposition, Pattern};

fn set(v: &[usize]) -> VertexSet {
    v.iter().copied().collect()
}

fn k2() -> Graph {
    Graph::path_graph(2)
}

fn p3_on_k2(bags: [&[usize]; 2]) -> GraphDecomposition {
    GraphDecomposition::new(k2(), vec![set(bags[0]), set(bags[1])])
}

#[test]
fn validate_examples() {
    let g = Graph::cycle_graph(7);
    let d = GraphDecomposition::single(set(&(0..7).collect::<Vec<_>>()));
    let r = validate(&g, &d);
    assert!(r.is_valid() && r.is_honest());

    let p3 = Graph::path_graph(3);
    let r = validate(&p3, &p3_on_k2([&[0, 1], &[2]]));
    assert_eq!(r.uncovered_edges, vec![(1, 2)]);
    assert!(!r.is_honest());

    let r = validate(&p3, &p3_on_k2([&[0, 1], &[1, 2]]));
    assert!(r.is_valid() && r.is_honest());
}

#[test]
fn validate_reports_every_violation() {
    // Vertex 1 in two non-adjacent bags, vertex 4 nowhere.
    let g = Graph::path_graph(5);
    let d = GraphDecomposition::new(
        Graph::empty(3),
        vec![set(&[0, 1]), set(&[2, 3]), set(&[1, 2])],
    );
    let r = validate(&g, &d);
    assert_eq!(r.uncovered_vertices, vec![4]);
    assert_eq!(r.uncovered_edges, vec![(3, 4)]);
    assert_eq!(r.disconnected_traces, vec![1, 2]);
    assert!(r.first_violation().unwrap().contains('4'));

    let stray = GraphDecomposition::single(set(&[0, 9]));
    assert_eq!(validate(&g, &stray).stray_vertices, vec![9]);
}

#[test]
fn width_examples() {
    let g = Graph::cycle_graph(9);
    let id = GraphDecomposition::identity(&g);
    assert_eq!(orw(&g, &id), Dist::Finite(0));
    assert_eq!(irs(&id), Dist::Finite(0));

    let p5 = Graph::path_graph(5);
    let one = GraphDecomposition::single(set(&[0, 1, 2, 3, 4]));
    assert_eq!(orw(&p5, &one), Dist::Finite(2));
    assert_eq!(irs(&one), Dist::Finite(0));

    // Vertex 2 sits in all three bags of a path of three nodes.
    let d = GraphDecomposition::new(
        Graph::path_graph(3),
        vec![set(&[0, 1, 2]), set(&[2]), set(&[2, 3, 4])],
    );
    assert_eq!(irs_at(&d, 2), Dist::Finite(1));
    assert_eq!(irs_at(&d, 0), Dist::Finite(0));
}

#[test]
fn restrict_examples() {
    let d = p3_on_k2([&[0, 1], &[1, 2]]).into_partial(set(&[0, 1, 2]));
    assert_eq!(d.restrict(&set(&[0, 1, 2])), d);
    let r = d.restrict(&set(&[0, 1]));
    assert_eq!(r.inner.bags, vec![set(&[0, 1]), set(&[1])]);
    assert!(validate_partial(&Graph::path_graph(3), &r).is_valid());
    let e = d.restrict(&set(&[]));
    assert!(e.support.is_empty());
    let (dropped, map) = e.drop_empty_nodes();
    assert_eq!(dropped.inner.node_count(), 0);
    assert_eq!(map, vec![None, None]);
}

fn ball_seed(gc: &DistCache<'_>, v: usize, r: usize) -> PartialDecomposition {
    let b = gc.ball(v, r);
    GraphDecomposition::single(b.clone()).into_partial(b)
}

#[test]
fn feasibility_examples() {
    let g = Graph::cycle_graph(8);
    let gc = DistCache::new(&g);
    let all = set(&(0..8).collect::<Vec<_>>());
    let full = GraphDecomposition::single(all.clone()).into_partial(all);
    assert!(is_component_feasible(&gc, &full, 0, None).unwrap().is_empty());

    let seed = ball_seed(&gc, 0, 2);
    assert_eq!(is_component_feasible(&gc, &seed, 2, None).unwrap().len(), 1);

    // Support {7,0,1} and {3,4,5} in separate bags: the component {2} sees
    // 1 and 3, and no bag holds both.
    let split = GraphDecomposition::new(
        Graph::path_graph(2),
        vec![set(&[7, 0, 1]), set(&[3, 4, 5])],
    )
    .into_partial(set(&[0, 1, 3, 4, 5, 7]));
    assert!(is_component_feasible(&gc, &split, 8, None).is_err());
}

#[test]
fn ball_componental_on_c12() {
    let g = Graph::cycle_graph(12);
    let gc = DistCache::new(&g);
    // The rest of the cycle attaches at 11 and 3, both in the first bag.
    let d = GraphDecomposition::new(
        Graph::path_graph(2),
        vec![set(&[11, 0, 1, 2, 3]), set(&[2, 3])],
    )
    .into_partial(set(&[11, 0, 1, 2, 3]));
    let before = components(&g, &d.support).len();
    let bc = make_ball_componental(&gc, &d, 4).unwrap();
    let after = &bc.decomposition;
    assert!(validate_partial(&g, after).is_valid());
    assert!(after.support.len() > d.support.len());
    assert!(components(&g, &after.support).len() <= before);
    assert!(is_ball_componental(&gc, after, 4));
    assert!(is_component_feasible(&gc, after, 4, None).is_ok());
    for att in &bc.attachments {
        let b = gc.ball(att.center, att.radius);
        assert!(!att.component.vertices.intersects(&b));
        assert!(att.component.neighborhood.is_subset(&b));
    }
    // Already ball-componental: nothing changes.
    let seed = ball_seed(&gc, 0, 3);
    let bc = make_ball_componental(&gc, &seed, 3).unwrap();
    assert_eq!(bc.decomposition, seed);
}

#[test]
fn glue_examples() {
    let g = Graph::cycle_graph(12);
    let gc = DistCache::new(&g);
    let seed = ball_seed(&gc, 0, 3);
    assert_eq!(glue(&seed, &[]).decomposition, seed);

    let comp = components(&g, &seed.support).remove(0);
    assert_eq!(comp.neighborhood, set(&[3, 9]));
    // A cycle of four nodes: the anchor N(C) and three arcs of C ∪ N(C).
    let h = Graph::cycle_graph(4);
    let step = StepDecomposition {
        partial: GraphDecomposition::new(
            h,
            vec![set(&[3, 9]), set(&[3, 4, 5, 6]), set(&[6, 7]), set(&[7, 8, 9])],
        )
        .into_partial(set(&[3, 4, 5, 6, 7, 8, 9])),
        anchor: 0,
    };
    let out = glue(&seed, &[(0, &step)]);
    let d = &out.decomposition;
    assert_eq!(out.renaming, vec![vec![0, 1, 2, 3]]);
    assert_eq!(d.inner.bags[0], seed.inner.bags[0]);
    let r = validate(&g, &d.inner);
    assert!(r.is_valid() && r.is_honest());
    assert!(is_minor_free(&d.inner.graph, Pattern::K4));
    // Restricting back to the old support recovers the old bags on old nodes.
    let back = d.restrict(&seed.support);
    assert_eq!(back.inner.bags[0], seed.inner.bags[0]);
}

#[test]
fn driver_small_cases() {
    let one = Graph::empty(1);
    let Outcome::Decomposition(d) = decompose_cactus(&one, 1).unwrap() else {
        panic!()
    };
    assert_eq!(d.node_count(), 1);
    assert_eq!(d.bags[0], set(&[0]));

    // A ball of radius R around vertex 0 covers everything: no step runs.
    let g = Graph::path_graph(40);
    let mut calls = 0;
    let out = extension_driver(&g, &driver_params(1), |_, _, _| {
        calls += 1;
        Ok(StepOutcome::Witness(fatdecomp::MinorModel::new(Graph::empty(0), vec![], vec![])))
    })
    .unwrap();
    assert_eq!(calls, 0);
    assert!(matches!(out, Outcome::Decomposition(d) if d.node_count() == 1));
}

#[test]
fn driver_on_p100() {
    let g = Graph::path_graph(100);
    let Outcome::Decomposition(d) = decompose_cactus(&g, 1).unwrap() else {
        panic!("paths have no fat K4-");
    };
    let r = validate(&g, &d);
    assert!(r.is_valid() && r.is_honest());
    assert!(r.orw().at_most(43));
    assert!(r.spread.at_most(31));
}

#[test]
fn driver_rejects_broken_steps() {
    // A step that ignores the boundary of C is caught before gluing.
    let g = Graph::path_graph(100);
    let err = extension_driver(&g, &driver_params(1), |_, _, comp| {
        Ok(StepOutcome::Decomposition(StepDecomposition {
            partial: GraphDecomposition::single(comp.neighborhood.clone())
                .into_partial(comp.neighborhood.clone()),
            anchor: 0,
        }))
    })
    .unwrap_err();
    assert!(err.to_string().contains("boundary"), "{err}");
}

#[test]
fn decomposition_text_round_trip() {
    let d = p3_on_k2([&[0, 1], &[1, 2]]);
    let (back, support) = parse_decomposition(&write_decomposition(&d)).unwrap();
    assert_eq!(back, d);
    assert_eq!(support, None);
    let pd = d.clone().into_partial(set(&[0, 1, 2]));
    let (back, support) = parse_decomposition(&write_partial(&pd)).unwrap();
    assert_eq!(back, d);
    assert_eq!(support, Some(set(&[0, 1, 2])));
    assert!(parse_decomposition("nodes 2\n0 1\nbag 0: 1\n").is_err());
}
