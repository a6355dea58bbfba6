use pin3::catalog::{self, Figure, Grading, GroupSpec};

#[test]
fn orders_match_subscripts() {
    for spec in catalog::all_specs(1..=12) {
        let g = catalog::build(&spec).unwrap_or_else(|e| panic!("{spec}: {e}"));
        assert_eq!(g.order(), spec.expected_order(), "{spec}");
    }
}

#[test]
fn every_figure_edge_verifies() {
    for fig in Figure::ALL {
        for edge in catalog::containment_edges(fig) {
            let ns: Vec<u32> = if fig.is_axial() { (2..=6).collect() } else { vec![0] };
            for n in ns {
                let Some((sub, sup)) = edge.instantiate(n) else { continue };
                let check = catalog::check_edge(&sub, &sup, edge.index).unwrap();
                assert!(check.ok(), "{}: {} in {} -> {:?}", fig.id(), sub, sup, check);
            }
        }
    }
}

#[test]
fn every_grading_is_index_two_normal() {
    let gr = catalog::gradings(1..=6).unwrap();
    assert_eq!(gr.len(), 13 + 20 * 6);
    for g in &gr {
        assert_eq!(g.ghat.order(), 2 * g.g.order(), "{}", g.name());
        assert!(!g.g.contains(&g.odd_rep));
        assert!(g.g.contains(&g.odd_rep.mul(&g.odd_rep)));
    }
}

#[test]
fn tetra_octahedral_isomorphism_classes() {
    let bo = catalog::build(&"BO_48".parse::<GroupSpec>().unwrap()).unwrap();
    let bp = catalog::build(&"BpTO_48".parse::<GroupSpec>().unwrap()).unwrap();
    let bm = catalog::build(&"BmTO_48".parse::<GroupSpec>().unwrap()).unwrap();
    assert_eq!(bo.class_profile(), bp.class_profile());
    assert_ne!(bo.class_profile(), bm.class_profile());
    assert!(pin3::grp::find_isomorphism(&bp, &bo).is_some());
}

#[test]
fn grading_parse() {
    let g: Grading = "BT_24<BO_48".parse().unwrap();
    assert_eq!(g.odd_coset().len(), 24);
}
