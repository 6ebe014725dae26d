use expocolor::arith::{self, fixed_point_count, Assignment, OddCycleCtx};
use expocolor::colorize::{self, Branch};
use expocolor::expo::{self, Target, DEFAULT_CAP};
use expocolor::graph::{self, Graph};
use expocolor::oracle::reference;
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn arb_assignment(m: usize, k: u32) -> impl Strategy<Value = Assignment> {
    proptest::collection::vec(1..=k, m).prop_map(Assignment::from)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bipartite_iff_no_odd_cycle(g in arb_graph(12)) {
        let odd = graph::odd_cycles(&g, g.vertex_count()).next();
        prop_assert_eq!(graph::bipartition(&g).is_some(), odd.is_none());
        if let Some((a, b)) = graph::bipartition(&g) {
            let mut side = vec![0u32; g.vertex_count()];
            for v in b { side[v] = 1; }
            prop_assert!(a.iter().all(|&v| side[v] == 0));
            prop_assert!(g.edges().all(|(u, v)| side[u] != side[v]));
        }
    }

    #[test]
    fn mycielski_raises_chromatic_number(g in arb_graph(7)) {
        let m = graph::make_mycielski(&g);
        prop_assert_eq!(m.vertex_count(), 2 * g.vertex_count() + 1);
        prop_assert_eq!(m.edge_count(), 3 * g.edge_count() + g.vertex_count());
        let chi = graph::chromatic_number_exact(&g).unwrap();
        prop_assert_eq!(graph::chromatic_number_exact(&m).unwrap(), chi + 1);
    }

    #[test]
    fn proper_colorings_restrict_to_induced_subgraphs(g in arb_graph(10), mask in any::<u16>()) {
        let chi = graph::chromatic_number_exact(&g).unwrap();
        let colors = graph::find_coloring(&g, chi).unwrap();
        prop_assert!(graph::is_proper_coloring(&g, &colors, chi as u32).unwrap());
        let keep: Vec<usize> = (0..g.vertex_count()).filter(|v| mask >> v & 1 == 1).collect();
        let sub = g.induced(&keep);
        let sub_colors: Vec<u32> = keep.iter().map(|&v| colors[v]).collect();
        prop_assert!(graph::is_proper_coloring(&sub, &sub_colors, chi as u32).unwrap());
    }

    #[test]
    fn json_round_trip(g in arb_graph(12)) {
        prop_assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn neighbor_stream_matches_definition(f in arb_assignment(5, 3)) {
        let c5 = graph::make_cycle(5).unwrap();
        let streamed: Vec<Assignment> = expo::neighbors(&c5, &f, Target::K3).unwrap().collect();
        let brute: Vec<Assignment> = (0..243)
            .map(|i| expo::decode(i, 3, 5))
            .filter(|g| reference::adjacent_on_cycle(Target::K3, f.values(), g.values()))
            .collect();
        prop_assert_eq!(&streamed, &brute);
        prop_assert_eq!(expo::is_isolated(&c5, &f, Target::K3).unwrap(), brute.is_empty());
    }

    #[test]
    fn label_is_invariant_along_edges(f in arb_assignment(9, 3)) {
        let c9 = graph::make_cycle(9).unwrap();
        let ctx = OddCycleCtx::canonical(4, 3).unwrap();
        let ell = arith::label(&f, &ctx).unwrap();
        for g in expo::neighbors(&c9, &f, Target::K3).unwrap().take(64) {
            prop_assert_eq!(arith::label(&g, &ctx).unwrap(), ell);
        }
    }

    #[test]
    fn adjacent_even_functions_get_distinct_colors(f in arb_assignment(11, 3), edge in 0usize..11) {
        prop_assume!(fixed_point_count(&f) % 2 == 0);
        let c11 = graph::make_cycle(11).unwrap();
        let ctx = OddCycleCtx::new(5, 3, (edge, (edge + 1) % 11)).unwrap();
        let vf = colorize::color_vertex(&f, &ctx).unwrap();
        prop_assert!(vf.check(f[ctx.a()], f[ctx.b()]).is_ok());
        for g in expo::neighbors(&c11, &f, Target::K3).unwrap().take(64) {
            let vg = colorize::color_vertex(&g, &ctx).unwrap();
            prop_assert_ne!(vf.color, vg.color);
            if vf.branch != Branch::EqualEndpoints && vg.branch != Branch::EqualEndpoints {
                prop_assert_ne!(vf.branch, vg.branch);
            }
        }
    }

    #[test]
    fn cycle_target_labels_divisible_by_k(f in arb_assignment(7, 7)) {
        let ctx = OddCycleCtx::canonical(3, 7).unwrap();
        let c7 = graph::make_cycle(7).unwrap();
        match arith::label(&f, &ctx) {
            Ok(ell) => {
                prop_assert!(ell.is_integral());
                prop_assert_eq!(ell.doubled().rem_euclid(14), 0);
                prop_assert!(!expo::is_isolated(&c7, &f, Target::Cycle(7)).unwrap());
            }
            Err(expocolor::Error::Isolated(_)) => {
                prop_assert!(expo::is_isolated(&c7, &f, Target::Cycle(7)).unwrap());
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

#[test]
fn restriction_preserves_adjacency_on_k4() {
    let k4 = graph::make_complete(4).unwrap();
    let e = expo::build_exponential(&k4, Target::K3, DEFAULT_CAP).unwrap();
    let tri = graph::CycleWitness::new(&k4, vec![0, 1, 2]).unwrap();
    let c3 = graph::make_cycle(3).unwrap();
    for i in 0..e.len() {
        for &j in e.neighbors(i) {
            let f = expo::restrict(&k4, &e.vertices()[i], &tri).unwrap();
            let g = expo::restrict(&k4, &e.vertices()[j], &tri).unwrap();
            assert!(expo::are_adjacent(&c3, &f, &g, Target::K3).unwrap());
        }
    }
}

#[test]
fn construction_is_deterministic() {
    let g = graph::make_mycielski(&graph::make_cycle(5).unwrap());
    assert_eq!(g, graph::make_mycielski(&graph::make_cycle(5).unwrap()));
    let a = expo::build_exponential(&graph::make_complete(4).unwrap(), Target::K3, DEFAULT_CAP).unwrap();
    let b = expo::build_exponential(&graph::make_complete(4).unwrap(), Target::K3, DEFAULT_CAP).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn every_context_edge_gives_a_proper_coloring() {
    let ke = colorize::even_class_graph(2, DEFAULT_CAP).unwrap();
    for edge in 0..5 {
        let ctx = OddCycleCtx::new(2, 3, (edge, (edge + 1) % 5)).unwrap();
        let colors: Vec<u32> = ke
            .vertices
            .iter()
            .map(|f| colorize::color_vertex(f, &ctx).unwrap().color)
            .collect();
        assert!(graph::is_proper_coloring(&ke.graph, &colors, 3).unwrap(), "edge {edge}");
    }
}
