//! Property tests for graph analysis on random small graphs.

use std::collections::BTreeSet;

use leavitt_core::graph::{count_paths_into, EdgeId, Graph, VertexId};
use proptest::prelude::*;

/// A random graph with at most five vertices and seven edges.
fn graph() -> impl Strategy<Value = Graph> {
    (1usize..=5).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=7).prop_map(move |pairs| {
            let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let edges: Vec<(String, String, String)> = pairs
                .iter()
                .enumerate()
                .map(|(k, &(s, t))| (format!("e{k}"), vertices[s].clone(), vertices[t].clone()))
                .collect();
            Graph::new(&vertices, &edges).unwrap()
        })
    })
}

/// Every path ending at `v` of length at most `max_len`, avoiding `forbidden`,
/// found by extending paths backwards one edge at a time.
fn bfs_paths(
    g: &Graph,
    v: VertexId,
    forbidden: &BTreeSet<EdgeId>,
    max_len: usize,
) -> BTreeSet<Vec<EdgeId>> {
    let mut found = BTreeSet::from([vec![]]);
    let mut layer: Vec<(VertexId, Vec<EdgeId>)> = vec![(v, vec![])];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (start, edges) in &layer {
            for e in 0..g.num_edges() {
                if g.dst(e) == *start && !forbidden.contains(&e) {
                    let mut p = vec![e];
                    p.extend(edges);
                    found.insert(p.clone());
                    next.push((g.src(e), p));
                }
            }
        }
        layer = next;
    }
    found
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn no_exit_matches_brute_force_scan(g in graph()) {
        let report = g.analyze();
        let mut exit_found = false;
        for c in g.cycles() {
            let k = c.edges.len();
            for (i, &e) in c.edges.iter().enumerate() {
                let next = c.edges[(i + 1) % k];
                let v = g.dst(e);
                for out in 0..g.num_edges() {
                    if g.src(out) == v && out != next {
                        exit_found = true;
                    }
                }
            }
        }
        prop_assert_eq!(report.no_exit, !exit_found);
        // independently: a vertex on a cycle with two out-edges gives an exit
        let on_cycle = |v: VertexId| bfs_paths(&g, v, &BTreeSet::new(), g.num_vertices()).iter().any(|p| !p.is_empty() && g.src(p[0]) == v);
        let branching = (0..g.num_vertices()).any(|v| on_cycle(v) && g.out_edges(v).len() > 1);
        prop_assert_eq!(report.no_exit, !branching);
        prop_assert_eq!(report.noetherian, report.no_exit);
        prop_assert_eq!(report.extending_verdict, report.no_exit);
    }

    #[test]
    fn matrix_graph_counts(g in graph(), n in 1usize..=4) {
        let m = g.matrix_graph(n).unwrap();
        prop_assert_eq!(m.num_vertices(), g.num_vertices() * n);
        prop_assert_eq!(m.num_edges(), g.num_edges() + g.num_vertices() * (n - 1));
    }

    #[test]
    fn paths_into_matches_enumeration(g in graph(), v in 0usize..5, mask in prop::collection::vec(any::<bool>(), 7)) {
        let v = v % g.num_vertices();
        let forbidden: BTreeSet<EdgeId> = (0..g.num_edges()).filter(|&e| mask[e]).collect();
        let n = g.num_vertices();
        let oracle = bfs_paths(&g, v, &forbidden, n);
        // a path of length n repeats a vertex, so a cycle reaches v
        let infinite = oracle.iter().any(|p| p.len() == n);
        match g.paths_into(v, &forbidden) {
            Ok(paths) => {
                prop_assert!(!infinite);
                let got: BTreeSet<Vec<EdgeId>> = paths.iter().map(|p| p.edges.clone()).collect();
                prop_assert_eq!(got.len(), paths.len());
                prop_assert_eq!(&got, &oracle);
                prop_assert_eq!(count_paths_into(&g, v, &forbidden), Some(paths.len()));
                for p in &paths {
                    prop_assert_eq!(p.range(&g), v);
                }
            }
            Err(_) => prop_assert!(infinite),
        }
    }

    #[test]
    fn dsl_round_trip(g in graph()) {
        let text = g.to_dsl();
        prop_assert_eq!(leavitt_core::graph::parse_graph(&text).unwrap(), g);
    }
}
