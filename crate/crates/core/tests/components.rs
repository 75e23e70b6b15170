mod common;

use proptest::prelude::*;

use hypercolour::hypergraph::text;
use hypercolour::ProjectedConfig;

/// Union-find over vertices, joined along unsatisfied edges.
fn partition_by_union_find(h: &hypercolour::Hypergraph, y: &ProjectedConfig) -> Vec<Vec<usize>> {
    let n = h.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in 0..h.num_edges() {
        if h.satisfied_by(e, y) {
            continue;
        }
        let edge = h.edge(e);
        for &v in &edge[1..] {
            let (a, b) = (find(&mut parent, edge[0]), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in 0..n {
        let r = find(&mut parent, v);
        classes.entry(r).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pruned_components_match_union_find(
        (seed, n, m) in (any::<u64>(), 3usize..10, 0usize..8),
        s in 1u32..4,
        raw in proptest::collection::vec(proptest::option::weighted(0.7, 1u32..4), 10),
    ) {
        let h = common::random_instance(n, 3, 3, m.min(n), seed);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let y = ProjectedConfig::from_options(
            raw[..n].iter().map(|b| b.map(|b| (b - 1) % s + 1)).collect(),
        );

        let comps = h.pruned_components(&y);
        let mut ours: Vec<Vec<usize>> = comps.iter().map(|c| c.vertices.clone()).collect();
        ours.sort();
        prop_assert_eq!(ours, partition_by_union_find(&h, &y));

        // every edge is either satisfied or inside exactly one component
        for e in 0..h.num_edges() {
            let holders = comps.iter().filter(|c| c.edges.contains(&e)).count();
            prop_assert_eq!(holders, usize::from(!h.satisfied_by(e, &y)));
        }
        for c in &comps {
            prop_assert!(!c.cap_exceeded);
            prop_assert!(c.vertices.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(c.edges.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn cap_flag_is_strict(
        (seed, n, m) in (any::<u64>(), 3usize..10, 1usize..8),
        start in 0usize..10,
        cap in 0usize..6,
    ) {
        let h = common::random_instance(n, 3, 3, m.min(n), seed);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let start = start % n;
        let y = ProjectedConfig::empty(n);
        let full = h.pruned_component(&y, start, usize::MAX);
        let capped = h.pruned_component(&y, start, cap);
        prop_assert_eq!(capped.cap_exceeded, full.num_edges() > cap);
        if !capped.cap_exceeded {
            prop_assert_eq!(capped, full);
        } else {
            prop_assert_eq!(capped.num_edges(), cap + 1);
        }
    }

    #[test]
    fn text_round_trip(
        (seed, n, k, m) in (any::<u64>(), 2usize..12, 2usize..5, 0usize..10),
    ) {
        let h = common::random_instance(n, k, 4, m, seed);
        prop_assume!(h.is_some());
        let h = h.unwrap();
        let written = text::write(&h);
        let parsed = text::parse(&written).unwrap();
        prop_assert_eq!(&parsed, &h);
        prop_assert_eq!(text::write(&parsed), written);
    }
}

#[test]
fn line_graph_matches_pairwise_intersection() {
    let h = common::hg(7, 3, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6], &[0, 3, 6]]);
    let lg = h.line_graph();
    for a in 0..h.num_edges() {
        for b in 0..h.num_edges() {
            let meet = a != b && h.edge(a).iter().any(|v| h.edge(b).contains(v));
            assert_eq!(lg.neighbours(a).contains(&b), meet, "edges {a} {b}");
        }
    }
    assert_eq!(lg.max_degree(), 3);
}
