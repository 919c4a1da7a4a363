mod common;

use common::joint_graph;
use graphsw_core::marked_graph::packed::{PackedDomain, PairIndex};
use graphsw_core::marked_graph::{
    joint_counts, marginal, parse_domain_graph, parse_graph, project_counts, serialize_domain_graph, serialize_graph,
    superpose, domain_counts, Side,
};
use graphsw_core::Error;
use proptest::prelude::*;

proptest! {
    #[test]
    fn superposing_marginals_recovers_the_joint((marks, j) in joint_graph(8, 0.4)) {
        let g1 = marginal(&j, Side::First);
        let g2 = marginal(&j, Side::Second);
        prop_assert_eq!(superpose(&g1, &g2).unwrap(), j.clone());
        prop_assert!(j.validate(&marks).is_ok());
    }

    #[test]
    fn text_format_round_trips((marks, j) in joint_graph(8, 0.4)) {
        let text = serialize_graph(&j, &marks);
        prop_assert_eq!(parse_graph(&text, &marks).unwrap(), j.clone());
        for side in Side::BOTH {
            let g = marginal(&j, side);
            let t = serialize_domain_graph(&g, &marks);
            prop_assert_eq!(parse_domain_graph(&t, side, &marks).unwrap(), g);
        }
    }

    #[test]
    fn projected_counts_match_marginal_counts((marks, j) in joint_graph(8, 0.5)) {
        let cv = joint_counts(&j, &marks);
        prop_assert_eq!(cv.edge_total() as usize, j.edge_count());
        prop_assert_eq!(cv.vertex_counts.iter().sum::<u64>() as usize, j.n());
        for side in Side::BOTH {
            let pc = project_counts(&cv, side, &marks).unwrap();
            let dc = domain_counts(&marginal(&j, side), &marks);
            let real = &pc.edge_counts[..pc.edge_counts.len() - 1];
            prop_assert_eq!(real, &dc.edge_counts[..]);
            prop_assert_eq!(&pc.vertex_counts, &dc.vertex_counts);
            prop_assert_eq!(pc.edge_counts.iter().sum::<u64>(), cv.edge_total());
        }
    }

    #[test]
    fn packed_form_round_trips((marks, j) in joint_graph(7, 0.5)) {
        let idx = PairIndex::new(j.n()).unwrap();
        let (p1, p2) = PackedDomain::split_joint(&j, &idx, &marks);
        prop_assert_eq!(p1.to_domain(Side::First, &idx), marginal(&j, Side::First));
        prop_assert_eq!(p2.to_domain(Side::Second, &idx), marginal(&j, Side::Second));
        let g = marginal(&j, Side::First);
        prop_assert_eq!(PackedDomain::from_domain(&g, &idx, &marks), p1);
    }
}

#[test]
fn parse_errors_carry_line_numbers() {
    let marks = common::spaces(1, 1, 1, 1);
    let text = "g 2\nv 1 t0:s0\nv 2 t0:s0\ne 1 3 x0:_\n";
    match parse_graph(text, &marks) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("expected a parse error, got {other:?}"),
    }
}
