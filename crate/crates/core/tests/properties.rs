//! Randomized invariants over the catalog.

use proptest::prelude::*;

use pin3::catalog::{self, Family, Grading, GroupSpec};
use pin3::chars;
use pin3::cli::export;
use pin3::dyson;
use pin3::kleinian;
use pin3::mckay;

fn su2_spec() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        (1u32..=12).prop_map(|n| GroupSpec::new(Family::C, n)),
        (1u32..=8).prop_map(|n| GroupSpec::new(Family::BC, n)),
        (1u32..=8).prop_map(|n| GroupSpec::new(Family::BD, n)),
        Just(GroupSpec::poly(Family::BT)),
        Just(GroupSpec::poly(Family::BO)),
    ]
}

fn grading() -> impl Strategy<Value = Grading> {
    let poly = catalog::polyhedral_grading_templates();
    let axial = catalog::axial_grading_templates();
    prop_oneof![
        (0..poly.len()).prop_map(move |k| {
            let (a, b) = poly[k].instantiate(0);
            Grading::new(a, b).unwrap()
        }),
        (0..axial.len(), 1u32..=5).prop_map(move |(k, n)| {
            let (a, b) = axial[k].instantiate(n);
            Grading::new(a, b).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mckay_graphs_are_balanced(s in su2_spec()) {
        let g = mckay::mckay_graph(&catalog::build(&s).unwrap()).unwrap();
        prop_assert!(g.is_balanced());
        prop_assert!(g.is_symmetric());
    }

    #[test]
    fn tensor_products_commute(s in su2_spec(), i in 0usize..64, j in 0usize..64) {
        let t = chars::table_of(&catalog::build(&s).unwrap()).unwrap();
        let r = t.chars.len();
        let (i, j) = (i % r, j % r);
        let m = t.tensor_decompose(i, j).unwrap();
        prop_assert_eq!(&m, &t.tensor_decompose(j, i).unwrap());
        let dim: i64 = m.iter().zip(&t.degrees).map(|(a, d)| a * *d as i64).sum();
        prop_assert_eq!(dim, (t.degrees[i] * t.degrees[j]) as i64);
    }

    #[test]
    fn types_ignore_the_odd_representative(gr in grading(), k in 0usize..1000) {
        let t = chars::table_of(&gr.g).unwrap();
        let coset = gr.odd_coset();
        let sigma = gr.ghat.element(coset[k % coset.len()]).clone();
        let a = dyson::classify(&gr, &t, &gr.odd_rep, dyson::ORIENTATION).unwrap();
        let b = dyson::classify(&gr, &t, &sigma, dyson::ORIENTATION).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(dyson::realizable(&t, &a).is_ok());
    }

    #[test]
    fn dot_lists_every_vertex_and_edge(s in su2_spec()) {
        let g = mckay::mckay_graph(&catalog::build(&s).unwrap()).unwrap();
        let dot = export::to_dot(&s.to_string(), &g, None);
        let c = mckay::collapse(&g);
        let edges: i64 = c.edges.iter().chain(&c.arcs).map(|e| e.2).sum();
        prop_assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), g.len());
        prop_assert_eq!(dot.lines().filter(|l| l.contains(" -- ") || l.contains(" -> ")).count() as i64, edges);
    }

    #[test]
    fn invariant_action_is_a_homomorphism(n in 1u32..=4, a in 0usize..64, b in 0usize..64) {
        let g = catalog::build(&GroupSpec::new(Family::BD, n)).unwrap();
        let (x, y, _) = kleinian::bd_invariants(n);
        let p = x.add(&y.mul(&kleinian::BiPoly::u()));
        let (ga, gb) = (g.element(a % g.order()), g.element(b % g.order()));
        let lhs = kleinian::act(&ga.mul(gb), &p).unwrap();
        let rhs = kleinian::act(ga, &kleinian::act(gb, &p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
