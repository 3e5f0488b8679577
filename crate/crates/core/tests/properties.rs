use num_traits::Zero;
use proptest::prelude::*;
use sgflow::flow::{ratio, Rational};
use sgflow::flowfile::{format_flow_file, parse_flow_file};
use sgflow::solve::{find_nz_k_flow, find_nz_zk_flow};
use sgflow::transform::ConversionState;
use sgflow::{check_flow, is_balanced, FlowAssignment, FlowKind, Orientation, Sign, SignedGraph};

fn graph() -> impl Strategy<Value = SignedGraph> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, any::<bool>()), 1..=7).prop_map(move |es| {
            let t: Vec<(usize, usize, Sign)> = es
                .into_iter()
                .map(|(u, v, neg)| (u, v, if neg { Sign::Negative } else { Sign::Positive }))
                .collect();
            SignedGraph::from_triples(n, &t).unwrap()
        })
    })
}

fn with_subset() -> impl Strategy<Value = (SignedGraph, Vec<usize>)> {
    graph().prop_flat_map(|g| {
        let n = g.num_vertices();
        (Just(g), prop::collection::vec(any::<bool>(), n))
            .prop_map(|(g, mask)| (g, mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()))
    })
}

fn assignment(g: &SignedGraph) -> impl Strategy<Value = FlowAssignment> {
    let m = g.num_edges();
    let g = g.clone();
    (prop::collection::vec(any::<bool>(), m), prop::collection::vec((-9i64..=9, 1i64..=4), m)).prop_map(
        move |(flips, vals)| {
            let flips: Vec<usize> = (0..m).filter(|&e| flips[e]).collect();
            let o = Orientation::from_flips(&g, &flips).unwrap();
            FlowAssignment::new(o, vals.into_iter().map(|(p, q)| ratio(p, q)).collect())
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn switching_twice_is_identity((g, s) in with_subset()) {
        let h = g.switch(&s).unwrap();
        prop_assert_eq!(h.switch(&s).unwrap(), g.clone());
        prop_assert_eq!(is_balanced(&h).is_balanced(), is_balanced(&g).is_balanced());
        prop_assert_eq!(h.is_eulerian(), g.is_eulerian());
        prop_assert_eq!(h.find_bridges(), g.find_bridges());
    }

    #[test]
    fn balance_certificate_substitutes(g in graph()) {
        prop_assert!(is_balanced(&g).verify(&g));
    }

    #[test]
    fn switched_orientation_negates_boundary_on_the_set(
        (g, s, fa) in with_subset().prop_flat_map(|(g, s)| { let a = assignment(&g); (Just(g), Just(s), a) })
    ) {
        let h = g.switch(&s).unwrap();
        let o = fa.orientation.switch(&g, &s).unwrap();
        prop_assert!(o.is_consistent_with(&h));
        let before = fa.boundary(&g);
        let after = FlowAssignment::new(o, fa.values.clone()).boundary(&h);
        for v in 0..g.num_vertices() {
            let expected = if s.contains(&v) { -before[v].clone() } else { before[v].clone() };
            prop_assert_eq!(&after[v], &expected);
        }
    }

    #[test]
    fn flows_survive_switching((g, s) in with_subset()) {
        if let Some(f) = find_nz_k_flow(&g, 4).unwrap() {
            let h = g.switch(&s).unwrap();
            let moved = FlowAssignment::new(f.orientation.switch(&g, &s).unwrap(), f.values.clone());
            prop_assert_eq!(check_flow(&h, &moved, &FlowKind::Integer { k: 4 }).unwrap(), None);
        }
    }

    #[test]
    fn boundary_total_is_zero(
        (g, fa) in graph().prop_flat_map(|g| { let a = assignment(&g); (Just(g), a) })
    ) {
        let mut total: Rational = fa.boundary(&g).into_iter().sum();
        for e in g.negative_edges() {
            total += fa.edge_boundary(e);
        }
        prop_assert!(total.is_zero());
    }

    #[test]
    fn minusing_is_an_involution_preserving_residues(
        (g, edges) in graph().prop_flat_map(|g| {
            let m = g.num_edges();
            (Just(g), prop::collection::vec(any::<bool>(), m))
        })
    ) {
        let Some(z) = find_nz_zk_flow(&g, 5).unwrap() else { return Ok(()) };
        let edges: Vec<usize> = (0..g.num_edges()).filter(|&e| edges[e]).collect();
        let mut st = ConversionState::new(&g, &z, 5).unwrap();
        let (o0, v0) = (st.orientation.clone(), st.values.clone());
        st.minus(&edges);
        let moved = FlowAssignment::from_integers(st.orientation.clone(), &st.values);
        prop_assert_eq!(check_flow(&g, &moved, &FlowKind::Modulo { k: 5 }).unwrap(), None);
        st.minus(&edges);
        prop_assert_eq!(st.orientation, o0);
        prop_assert_eq!(st.values, v0);
    }

    #[test]
    fn flow_file_round_trip(
        (g, fa) in graph().prop_flat_map(|g| { let a = assignment(&g); (Just(g), a) })
    ) {
        let text = format_flow_file(&g, &fa).unwrap();
        prop_assert_eq!(parse_flow_file(&g, &text).unwrap(), fa);
    }

    #[test]
    fn graph_text_round_trip(g in graph()) {
        let text = g.to_text();
        let back = SignedGraph::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back, g);
    }
}

#[test]
fn minus_on_one_edge_moves_boundary_by_k() {
    // two parallel positive edges carrying 2 and 3 modulo 5
    let g = SignedGraph::parse("p 2 2 / e 1 2 + / e 1 2 +").unwrap();
    let fa = FlowAssignment::from_integers(Orientation::canonical(&g), &[2, 3]);
    let mut st = ConversionState::new(&g, &fa, 5).unwrap();
    let b0 = st.boundary();
    st.minus(&[0]);
    let b1 = st.boundary();
    assert_eq!(b1[0] - b0[0], -5);
    assert_eq!(b1[1] - b0[1], 5);
    assert_eq!(st.values, vec![3, 3]);
}
