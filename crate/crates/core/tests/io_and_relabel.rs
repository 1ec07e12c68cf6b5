mod common;

use std::path::Path;

use hcpforge::families::{gen_generalized_petersen, gen_gp_benchmark};
use hcpforge::tsplib::{hcp_to_string, parse_hcp, parse_tour, tour_to_string};
use hcpforge::{
    graph_to_tsp, is_hamiltonian_cycle, read_tour, relabel, relabel_tour, tour_length, write_tour, Family, Graph,
    Relabelling, Tour,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;

use common::{all_cyclic_orders, all_pairs, rng};

fn arb_graph() -> impl Strategy<Value = Graph> {
    (3usize..12).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), all_pairs(n).len()).prop_map(move |keep| {
            let edges = all_pairs(n).into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e);
            Graph::new(format!("P_{n}"), n, edges).unwrap()
        })
    })
}

fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn hcp_text_round_trips(g in arb_graph()) {
        let back = parse_hcp(&hcp_to_string(&g, Some("x")), Path::new("mem")).unwrap().graph;
        prop_assert_eq!(back, g);
    }

    #[test]
    fn relabelling_preserves_shape(g in arb_graph(), seed in any::<u64>()) {
        let r = Relabelling::random(g.n(), seed);
        let h = relabel(&g, &r).unwrap();
        prop_assert_eq!((h.name(), h.n(), h.m()), (g.name(), g.n(), g.m()));
        let mut a = g.degree_multiset();
        let mut b = h.degree_multiset();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        prop_assert_eq!(relabel(&h, &r.inverse()).unwrap(), g);
    }

    #[test]
    fn relabelled_cycles_stay_cycles(order in (3usize..40).prop_flat_map(arb_perm), seed in any::<u64>()) {
        let t = Tour::new(order).unwrap();
        let g = Graph::new("T", t.len(), t.edges()).unwrap();
        let r = Relabelling::random(t.len(), seed);
        let rt = relabel_tour(&t, &r).unwrap();
        prop_assert!(is_hamiltonian_cycle(&relabel(&g, &r).unwrap(), &rt).unwrap());
        prop_assert_eq!(relabel_tour(&rt, &r.inverse()).unwrap(), t);
    }
}

#[test]
fn relabel_tour_over_many_seeds() {
    let (g, _) = gen_gp_benchmark(Family::Gpn, 13, None).unwrap();
    let t = hcpforge::solver::enumerate_hcs(&g, Some(1), &hcpforge::SolveBudget::unlimited()).unwrap().remove(0);
    for seed in 0..1000 {
        let r = Relabelling::random(g.n(), seed);
        assert!(
            is_hamiltonian_cycle(&relabel(&g, &r).unwrap(), &relabel_tour(&t, &r).unwrap()).unwrap(),
            "seed {seed}"
        );
    }
}

#[test]
fn tour_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(1);
    for i in 0..100 {
        let n = 3 + i * 7 % 200;
        let mut order: Vec<usize> = (1..=n).collect();
        order.shuffle(&mut r);
        let t = Tour::new(order).unwrap();
        let path = dir.path().join(format!("t{i}.tour"));
        write_tour(&format!("t{i}"), &t, &path).unwrap();
        assert_eq!(read_tour(&path, n).unwrap(), t);
        assert_eq!(parse_tour(&tour_to_string("x", &t), Path::new("mem"), n).unwrap(), t);
    }
}

#[test]
fn gpn_122_file() {
    let (g, _) = gen_gp_benchmark(Family::Gpn, 61, None).unwrap();
    let text = hcp_to_string(&g, None);
    assert!(text.lines().any(|l| l.replace(' ', "") == "NAME:GPN_122"));
    assert!(text.lines().any(|l| l.replace(' ', "") == "DIMENSION:122"));
    let body: Vec<&str> =
        text.lines().skip_while(|l| *l != "EDGE_DATA_SECTION").skip(1).take_while(|l| *l != "-1").collect();
    assert_eq!(body.len(), 183);
}

#[test]
fn petersen_has_no_zero_tour() {
    let g = gen_generalized_petersen(5, 2).unwrap();
    let m = graph_to_tsp(&g);
    let mut count = 0;
    let mut shortest = u64::MAX;
    all_cyclic_orders(10, |o| {
        count += 1;
        shortest = shortest.min(tour_length(&m, &Tour::new(o.to_vec()).unwrap()).unwrap());
    });
    // Each undirected tour appears once per direction.
    assert_eq!(count / 2, 181_440);
    assert_eq!(shortest, 1);
}

#[test]
fn parser_reports_line_numbers() {
    let bad = "NAME : x\nTYPE : HCP\nDIMENSION : 3\nEDGE_DATA_FORMAT : EDGE_LIST\nEDGE_DATA_SECTION\n1 2\n2 4\n-1\n";
    let e = parse_hcp(bad, Path::new("bad.hcp")).unwrap_err().to_string();
    assert!(e.contains("bad.hcp:7"), "{e}");
    let unterminated = "NAME : x\nTYPE : HCP\nDIMENSION : 3\nEDGE_DATA_SECTION\n1 2\n";
    assert!(parse_hcp(unterminated, Path::new("u.hcp")).is_err());
}
