use randreal::graph_realizer::{
    realize_graph_smaller_side, worst_case_arboricity, FamilySampler, Side,
};
use randreal::tree_realizer::in_census_window;
use randreal::{
    forest_partition, predict_dimension_graph, realize_graph, sample_embedding, sample_er_graph,
    verify_realization, worst_case_dimension, CensusParams, FamilySpec, Graph,
};

#[test]
fn arboricity_formula_matches_search() {
    for m in 0..20_000usize {
        let a = (0..).find(|&a: &usize| 2 * a * a >= m).unwrap();
        assert_eq!(worst_case_arboricity(m), a, "m={m}");
    }
    assert_eq!(worst_case_dimension(10, 0).unwrap(), 0);
}

#[test]
fn forest_census_rescan() {
    for seed in 0..20u64 {
        let n = 4 + seed as usize % 10;
        let g = sample_er_graph(n, 0.6, seed).unwrap();
        if g.m() == 0 {
            continue;
        }
        let fam = forest_partition(&g);
        let f = sample_embedding(n, 800, 0.0, 1.0, seed + 50).unwrap();
        let out = realize_graph(&g, &f, &FamilySpec::ForestPartition, &CensusParams::default(), seed).unwrap();
        let ids = out.member_per_coordinate.as_ref().unwrap();
        assert_eq!(ids.len(), f.d());
        assert_eq!(out.family_size, Some(fam.len()));
        for (i, &k) in ids.iter().enumerate() {
            let edges = fam.member_edges(&g, k);
            assert!(!edges.is_empty());
            let agree = edges.iter().filter(|&&(u, v)| f.agrees(u, v, i)).count() as u32;
            let expected = in_census_window(agree, edges.len() as u32, n, 0.25);
            assert_eq!(out.weights.values()[i] == 1.0, expected, "seed {seed} coord {i}");
        }
    }
}

#[test]
fn members_are_drawn_uniformly() {
    let g = Graph::complete(8);
    let fam = forest_partition(&g);
    let k = fam.len();
    assert!(k >= 4);
    let f = sample_embedding(8, 40_000, 0.0, 1.0, 1).unwrap();
    let out = realize_graph(&g, &f, &FamilySpec::ForestPartition, &CensusParams::default(), 2).unwrap();
    let mut counts = vec![0usize; k];
    for &i in out.member_per_coordinate.as_ref().unwrap() {
        counts[i] += 1;
    }
    let mean = 40_000.0 / k as f64;
    let sd = (40_000.0 * (1.0 / k as f64) * (1.0 - 1.0 / k as f64)).sqrt();
    for c in counts {
        assert!((c as f64 - mean).abs() < 4.0 * sd, "{c}");
    }
}

#[test]
fn predicted_dimension_realizes_small_graphs() {
    let cases = [(Graph::cycle(6).unwrap(), FamilySpec::ForestPartition), (Graph::complete(5), FamilySpec::SpanningTrees)];
    for (g, spec) in cases {
        let r_min = FamilySampler::new(&g, &spec).unwrap().r_min().unwrap();
        let d = predict_dimension_graph(g.n(), r_min).unwrap() as usize;
        let mut ok = 0;
        for s in 0..5u64 {
            let f = sample_embedding(g.n(), d, 0.0, 1.0, s).unwrap();
            let out = realize_graph(&g, &f, &spec, &CensusParams::default(), s + 100).unwrap();
            ok += verify_realization(&g, &f, &out.weights).unwrap().realized as usize;
        }
        assert_eq!(ok, 5, "{} d={d}", spec.name());
    }
}

#[test]
fn dense_graphs_go_through_the_complement() {
    // K_8 minus a perfect matching: the complement is a single forest.
    let g = Graph::complete(8);
    let edges: Vec<_> = g.edges().iter().copied().filter(|&(u, v)| !(u % 2 == 0 && v == u + 1)).collect();
    let g = Graph::new(8, edges).unwrap();
    let f = sample_embedding(8, 20_000, 0.0, 1.0, 7).unwrap();
    let (out, side) = realize_graph_smaller_side(&g, &f, &CensusParams::default(), 3).unwrap();
    assert_eq!(side, Side::Complement);
    assert!(verify_realization(&g, &f, &out.weights).unwrap().realized);
}
