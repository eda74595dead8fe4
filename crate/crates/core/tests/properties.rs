use proptest::prelude::*;

use lhtw::bounds::bounds_report_with;
use lhtw::constructions::{supertree_to_td, supertree_width_bound, td_to_supertree};
use lhtw::decomposition::{normalize_leaf_based, validate_std, validate_td};
use lhtw::derivations::{dual, line_graph, linear_cover, two_section};
use lhtw::generators::{graph_dual, RandomLinear};
use lhtw::io;
use lhtw::solvers::elimination::{elimination_width, heuristic_upper_bound, minor_min_width};
use lhtw::solvers::{brute_force_treewidth, exact_treewidth, supertree_width};
use lhtw::{Graph, Hypergraph};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |mask| {
            let all = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges = all.zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn linear(max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (5..=max_n, 2usize..=4, 2usize..=3, any::<u64>()).prop_filter_map("generator gave up", |(n, max_size, d, seed)| {
        let m = (d * n).div_ceil(max_size) + (seed % 3) as usize;
        RandomLinear { n, m: m.min(16), min_size: 2, max_size, min_degree: d, seed }.generate().ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_matches_brute_force(g in graph(7)) {
        let r = exact_treewidth(&g, None).unwrap();
        prop_assert_eq!(r.width, brute_force_treewidth(&g).unwrap());
        let td = r.tree_decomposition().unwrap();
        prop_assert!(validate_td(&g, td).is_valid());
        prop_assert_eq!(td.width(), r.width);
    }

    #[test]
    fn heuristics_bracket_treewidth(g in graph(8)) {
        let tw = exact_treewidth(&g, None).unwrap().width;
        let (upper, order) = heuristic_upper_bound(&g);
        prop_assert!(minor_min_width(&g) <= tw);
        prop_assert!(tw <= upper);
        prop_assert_eq!(elimination_width(&g, &order), upper);
        let identity: Vec<usize> = (0..g.n()).collect();
        prop_assert!(elimination_width(&g, &identity) >= tw);
    }

    #[test]
    fn cap_never_hides_a_smaller_width(g in graph(8), cap in 0usize..6) {
        let tw = exact_treewidth(&g, None).unwrap().width;
        match exact_treewidth(&g, Some(cap)) {
            Ok(r) => prop_assert_eq!(r.width, tw),
            Err(_) => prop_assert!(tw > cap),
        }
    }

    #[test]
    fn linear_cover_reproduces_the_graph(g in graph(8)) {
        prop_assume!(g.n() == 0 || (0..g.n()).all(|v| g.degree(v) > 0));
        let h = linear_cover(&g).unwrap();
        prop_assert!(h.is_linear());
        prop_assert_eq!(two_section(&h).edges(), g.edges());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn supertree_width_is_line_treewidth_plus_one(h in linear(12)) {
        let s = supertree_width(&h).unwrap();
        let cert = s.supertree_decomposition().unwrap();
        prop_assert!(validate_std(&h, cert).is_valid());
        prop_assert_eq!(cert.width(), s.width);
        prop_assert_eq!(s.width, exact_treewidth(&line_graph(&h), None).unwrap().width + 1);
    }

    #[test]
    fn every_bound_brackets_treewidth(h in linear(14)) {
        let tw = exact_treewidth(&two_section(&h), None).unwrap().width;
        let stw = supertree_width(&h).unwrap().width;
        let report = bounds_report_with(&h, Some(tw), Some(stw));
        prop_assert!(report.violations().is_empty(), "{:?}", report.violations());
        prop_assert!(report.best_lower() <= tw as i64);
    }

    #[test]
    fn conversions_stay_valid_and_bounded(h in linear(12)) {
        let section = two_section(&h);
        let tw = exact_treewidth(&section, None).unwrap();
        let leaf = normalize_leaf_based(&h, tw.tree_decomposition().unwrap()).unwrap();
        prop_assert!(leaf.check(&h).is_empty());
        prop_assert_eq!(leaf.width(), tw.width);

        let std = td_to_supertree(&h, &leaf).unwrap();
        prop_assert!(validate_std(&h, &std).is_valid());
        prop_assert!(std.width() <= supertree_width_bound(h.max_degree(), tw.width));

        let stw = supertree_width(&h).unwrap();
        let c = supertree_to_td(&h, stw.supertree_decomposition().unwrap()).unwrap();
        prop_assert!(validate_td(&section, &c.td).is_valid());
        prop_assert!(c.within_bound());
        prop_assert!(c.td.width() >= tw.width);
    }

    #[test]
    fn relabeling_preserves_widths(h in linear(12), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..h.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let g = h.relabel(&perm);
        prop_assert!(g.is_linear());
        prop_assert_eq!(
            exact_treewidth(&two_section(&g), None).unwrap().width,
            exact_treewidth(&two_section(&h), None).unwrap().width
        );
    }

    #[test]
    fn text_round_trip(h in linear(14)) {
        prop_assert_eq!(io::parse_hypergraph(&io::write_hypergraph(&h)).unwrap(), h.clone());
        let g = two_section(&h);
        prop_assert_eq!(io::parse_graph(&io::write_graph(&g)).unwrap().edges(), g.edges());
        let s = supertree_width(&h).unwrap();
        let cert = s.supertree_decomposition().unwrap();
        let back = io::parse_decomposition(&io::write_std(cert, h.n())).unwrap().supertree_decomposition().unwrap();
        prop_assert!(validate_std(&h, &back).is_valid());
        prop_assert_eq!(back.width(), cert.width());
    }

    #[test]
    fn graph_dual_dualizes_back(g in graph(8)) {
        prop_assume!(g.is_connected() && g.n() >= 3 && g.min_degree() >= 2);
        let h = graph_dual(&g).unwrap();
        prop_assert!(h.is_linear());
        let back = dual(&h);
        prop_assert!(back.validity.is_ok());
        let mut edges: Vec<(usize, usize)> = back.edges.iter().map(|e| (e[0], e[1])).collect();
        edges.sort();
        prop_assert_eq!(edges, g.edges());
    }
}
