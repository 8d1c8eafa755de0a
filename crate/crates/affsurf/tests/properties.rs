use affsurf::divisor::{
    blow_down, blow_up, elementary_flow, is_standard, replay, snc_minimalize, standardize, BlowupCenter,
};
use affsurf::iso::graphs_isomorphic;
use affsurf::{GraphKind, Vertex, WeightedGraph};
use proptest::prelude::*;

fn chain(w: &[i64]) -> WeightedGraph {
    WeightedGraph::chain(GraphKind::Divisor, w)
}

/// Random tree: vertex i > 0 hangs on a random earlier vertex.
fn tree(weights: &[i64], parents: &[usize]) -> WeightedGraph {
    let mut g = WeightedGraph::new(GraphKind::Divisor);
    for (i, &w) in weights.iter().enumerate() {
        g.add_vertex(Vertex::new(format!("t{i:02}"), w)).unwrap();
        if i > 0 {
            let p = parents[i - 1] % i;
            g.add_edge(&format!("t{p:02}"), &format!("t{i:02}"), 1).unwrap();
        }
    }
    g
}

fn arb_tree() -> impl Strategy<Value = WeightedGraph> {
    (1usize..9)
        .prop_flat_map(|n| (prop::collection::vec(-4i64..3, n), prop::collection::vec(0usize..100, n)))
        .prop_map(|(w, p)| tree(&w, &p))
}

proptest! {
    #[test]
    fn standardize_chains(w in prop::collection::vec(-4i64..5, 1..9)) {
        let g = chain(&w);
        let (h, log) = standardize(&g).unwrap();
        prop_assert!(is_standard(&h).standard, "{} -> {}", g, h);
        prop_assert_eq!(replay(&g, &log).unwrap(), h.clone());
        let (h2, log2) = standardize(&h).unwrap();
        prop_assert!(log2.is_empty());
        prop_assert_eq!(h2, h);
    }

    #[test]
    fn standardize_trees(g in arb_tree()) {
        let (h, log) = standardize(&g).unwrap();
        prop_assert!(is_standard(&h).standard, "{} -> {}", g, h);
        prop_assert_eq!(replay(&g, &log).unwrap(), h);
    }

    #[test]
    fn standardize_cycles(w in prop::collection::vec(-3i64..4, 3..8)) {
        let g = WeightedGraph::cycle(GraphKind::Divisor, &w);
        match standardize(&g) {
            Ok((h, log)) => {
                prop_assert!(is_standard(&h).standard);
                prop_assert_eq!(replay(&g, &log).unwrap(), h);
            }
            Err(e) => prop_assert!(matches!(e, affsurf::Error::OutOfScope(_)), "{e}"),
        }
    }

    #[test]
    fn blowup_round_trip(g in arb_tree(), pick in 0usize..100, inner in any::<bool>()) {
        let ids = g.ids();
        let center = if inner && !g.edges().is_empty() {
            let e = &g.edges()[pick % g.edges().len()];
            BlowupCenter::OnEdge(e.u.clone(), e.v.clone())
        } else {
            BlowupCenter::OnVertex(ids[pick % ids.len()].clone())
        };
        let up = blow_up(&g, &center).unwrap();
        let back = blow_down(&up, "E1").unwrap();
        prop_assert!(graphs_isomorphic(&back, &g).is_some());
    }

    #[test]
    fn minimalize_idempotent(g in arb_tree()) {
        let (h, log) = snc_minimalize(&g).unwrap();
        prop_assert_eq!(replay(&g, &log).unwrap(), h.clone());
        let (h2, log2) = snc_minimalize(&h).unwrap();
        prop_assert!(log2.is_empty());
        prop_assert_eq!(h2, h);
    }

    #[test]
    fn interior_flow_preserves_shape_and_weight_sum(
        w in prop::collection::vec(-5i64..5, 3..9), pos in 0usize..100, right in any::<bool>()
    ) {
        let n = w.len();
        let i = 1 + pos % (n - 2);
        let mut w = w;
        w[i] = 0;
        let g = chain(&w);
        let ids = g.ids();
        let toward = if right { &ids[i + 1] } else { &ids[i - 1] };
        let h = elementary_flow(&g, &ids[i], toward).unwrap();
        let sum = |g: &WeightedGraph| g.vertices().map(|v| v.weight).sum::<i64>();
        prop_assert_eq!(sum(&g), sum(&h));
        prop_assert_eq!(g.edges(), h.edges());
    }
}

mod plumbing_props {
    use super::*;
    use affsurf::iso::plumbing_isomorphic;
    use affsurf::plumbing::{
        blow_up_plumbing, continued_fraction_eval, continued_fraction_expand, from_divisor_graph, h1_from_graph,
        move_r3, normalize, reverse_orientation,
    };
    use affsurf::topology::{count_homs_in_order, pi1_presentation, FiniteGroupTable, HOM_BUDGET};
    use num_integer::Integer;

    fn signed_tree(weights: &[i64], parents: &[usize], signs: &[bool]) -> WeightedGraph {
        let mut g = WeightedGraph::new(GraphKind::Plumbing);
        for (i, &w) in weights.iter().enumerate() {
            g.add_vertex(Vertex::new(format!("t{i:02}"), w)).unwrap();
            if i > 0 {
                let p = parents[i - 1] % i;
                let s = if signs[i - 1] { 1 } else { -1 };
                g.add_edge(&format!("t{p:02}"), &format!("t{i:02}"), s).unwrap();
            }
        }
        g
    }

    fn arb_plumbing_tree() -> impl Strategy<Value = WeightedGraph> {
        (1usize..8)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(-4i64..4, n),
                    prop::collection::vec(0usize..100, n),
                    prop::collection::vec(any::<bool>(), n),
                )
            })
            .prop_map(|(w, p, s)| signed_tree(&w, &p, &s))
    }

    proptest! {
        #[test]
        fn inverse_r1_preserves_h1(g in arb_plumbing_tree(), pick in 0usize..100, on_edge in any::<bool>(), pos in any::<bool>()) {
            let h = h1_from_graph(&g).unwrap();
            let center = if on_edge && !g.edges().is_empty() {
                let e = &g.edges()[pick % g.edges().len()];
                BlowupCenter::OnEdge(e.u.clone(), e.v.clone())
            } else {
                BlowupCenter::OnVertex(g.ids()[pick % g.len()].clone())
            };
            let (b, _) = blow_up_plumbing(&g, &center, if pos { 1 } else { -1 }).unwrap();
            prop_assert_eq!(h1_from_graph(&b).unwrap(), h);
        }

        #[test]
        fn r3_preserves_h1(w in prop::collection::vec(-4i64..4, 3..8), at in 0usize..100, s in prop::collection::vec(any::<bool>(), 7)) {
            let i = 1 + at % (w.len() - 2);
            let mut w = w;
            w[i] = 0;
            let mut g = WeightedGraph::new(GraphKind::Plumbing);
            for (k, &x) in w.iter().enumerate() {
                g.add_vertex(Vertex::new(format!("v{k}"), x)).unwrap();
                if k > 0 {
                    g.add_edge(&format!("v{}", k - 1), &format!("v{k}"), if s[k - 1] { 1 } else { -1 }).unwrap();
                }
            }
            let r = move_r3(&g, &format!("v{i}")).unwrap();
            prop_assert_eq!(r.len(), g.len() - 2);
            prop_assert_eq!(h1_from_graph(&r).unwrap(), h1_from_graph(&g).unwrap());
        }

        #[test]
        fn reversal_is_an_involution(d1 in 1usize..6, d2 in 1usize..6) {
            let g = from_divisor_graph(&affsurf::family::build_boundary_graph(d1, d2).unwrap().d_part());
            let nf = normalize(&g).unwrap();
            let back = reverse_orientation(&reverse_orientation(&nf).unwrap()).unwrap();
            prop_assert!(plumbing_isomorphic(&back.graph, &nf.graph).is_some());
        }

        #[test]
        fn continued_fraction_round_trip(q in 1i64..200, extra in 1i64..200) {
            let p = q + extra;
            prop_assume!(p.gcd(&q) == 1);
            let c = continued_fraction_expand(p, q).unwrap();
            prop_assert!(c.entries.iter().all(|&a| a >= 2));
            prop_assert_eq!(continued_fraction_eval(&c), (p, q));
        }

        #[test]
        fn hom_count_independent_of_order(d1 in 1usize..5, d2 in 1usize..5, which in 0usize..24) {
            let p = pi1_presentation(d1, d2).unwrap();
            let g = &FiniteGroupTable::catalog()[which];
            let a = count_homs_in_order(&p, g, &[0, 1, 2], HOM_BUDGET).unwrap();
            let b = count_homs_in_order(&p, g, &[1, 2, 0], HOM_BUDGET).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
