use proptest::prelude::*;
use randreal::{
    feature_vector, realize_tree, sample_embedding, sample_random_tree, verify_realization,
    weighted_l1_distance, weighted_sq_distance, CensusParams, Embedding, WeightVector,
};

fn weights(d: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..10.0, d)
}

fn instance() -> impl Strategy<Value = (Embedding, Vec<f64>)> {
    (2usize..9, 1usize..150, any::<u64>(), -5.0f64..5.0, 0.1f64..4.0).prop_flat_map(|(n, d, seed, x, s)| {
        let f = sample_embedding(n, d, x, x + s, seed).unwrap();
        (Just(f), weights(d))
    })
}

proptest! {
    #[test]
    fn distances_are_symmetric((f, w) in instance()) {
        let w = WeightVector::nonnegative(w).unwrap();
        for u in 0..f.n() {
            prop_assert_eq!(weighted_sq_distance(&f, u, u, &w).unwrap(), 0.0);
            for v in 0..f.n() {
                prop_assert_eq!(weighted_sq_distance(&f, u, v, &w).unwrap(), weighted_sq_distance(&f, v, u, &w).unwrap());
                prop_assert_eq!(weighted_l1_distance(&f, u, v, &w).unwrap(), weighted_l1_distance(&f, v, u, &w).unwrap());
            }
        }
    }

    #[test]
    fn raising_a_weight_never_shrinks_a_distance((f, w) in instance(), i in any::<prop::sample::Index>(), bump in 0.0f64..5.0) {
        let i = i.index(f.d());
        let mut raised = w.clone();
        raised[i] += bump;
        let (w, raised) = (WeightVector::nonnegative(w).unwrap(), WeightVector::nonnegative(raised).unwrap());
        for u in 0..f.n() {
            for v in u + 1..f.n() {
                prop_assert!(weighted_sq_distance(&f, u, v, &raised).unwrap() >= weighted_sq_distance(&f, u, v, &w).unwrap());
                prop_assert!(weighted_l1_distance(&f, u, v, &raised).unwrap() >= weighted_l1_distance(&f, u, v, &w).unwrap());
            }
        }
    }

    #[test]
    fn feature_vector_inner_product((f, w) in instance()) {
        let w = WeightVector::nonnegative(w).unwrap();
        for u in 0..f.n() {
            for v in 0..f.n() {
                let direct: f64 = (0..f.d()).map(|i| w.values()[i] * (f.value(u, i) - f.value(v, i)).powi(2)).sum();
                let g = feature_vector(&f, u, v).unwrap();
                let dist = weighted_sq_distance(&f, u, v, &w).unwrap();
                prop_assert!((g.dot(&w) - dist).abs() <= 1e-12 * dist.max(1.0));
                prop_assert!((direct - dist).abs() <= 1e-9 * dist.max(1.0));
            }
        }
    }

    #[test]
    fn scaling_weights_scales_distances_exactly(n in 2usize..8, d in 1usize..80, seed in any::<u64>(), c in prop::sample::select(vec![0.5, 2.0, 3.0, 10.0])) {
        let f = sample_embedding(n, d, 0.0, 1.0, seed).unwrap();
        let ints: Vec<f64> = (0..d).map(|i| ((seed >> (i % 60)) & 7) as f64).collect();
        let w = WeightVector::nonnegative(ints).unwrap();
        let cw = w.scaled(c);
        for u in 0..n {
            for v in 0..n {
                prop_assert_eq!(weighted_sq_distance(&f, u, v, &cw).unwrap(), c * weighted_sq_distance(&f, u, v, &w).unwrap());
            }
        }
    }

    #[test]
    fn boolean_l1_is_sq_over_s(n in 2usize..8, d in 1usize..200, seed in any::<u64>(), s in 0.25f64..8.0, mask in any::<u64>()) {
        let f = sample_embedding(n, d, 0.0, s, seed).unwrap();
        let sel: Vec<bool> = (0..d).map(|i| mask >> (i % 64) & 1 == 1).collect();
        let w = WeightVector::boolean(&sel);
        for u in 0..n {
            for v in 0..n {
                let sq = weighted_sq_distance(&f, u, v, &w).unwrap();
                let l1 = weighted_l1_distance(&f, u, v, &w).unwrap();
                prop_assert!((l1 - sq / s).abs() <= 1e-9 * l1.max(1.0));
            }
        }
    }

    #[test]
    fn census_ignores_the_alphabet(n in 2usize..15, d in 1usize..300, seed in any::<u64>(), x in -3.0f64..3.0, s in 0.1f64..5.0) {
        let t = sample_random_tree(n, seed).unwrap();
        let f = sample_embedding(n, d, 0.0, 1.0, seed ^ 1).unwrap();
        let g = f.relabeled(x, x + s);
        let params = CensusParams::default();
        prop_assert_eq!(realize_tree(&t, &f, &params).unwrap().0, realize_tree(&t, &g, &params).unwrap().0);
        // Same seed, different alphabet: identical bits.
        let h = sample_embedding(n, d, x, x + s, seed ^ 1).unwrap();
        let (hd, fd) = (h.to_dump(), f.to_dump());
        prop_assert_eq!(hd.lines().skip(1).collect::<Vec<_>>(), fd.lines().skip(1).collect::<Vec<_>>());
    }

    #[test]
    fn realization_is_invariant_under_scaling(n in 2usize..8, d in 1usize..60, seed in any::<u64>(), c in prop::sample::select(vec![0.5, 3.0, 10.0])) {
        let t = sample_random_tree(n, seed).unwrap();
        let f = sample_embedding(n, d, 0.0, 1.0, seed ^ 5).unwrap();
        let ints: Vec<f64> = (0..d).map(|i| ((seed >> (i % 61)) & 3) as f64).collect();
        let w = WeightVector::nonnegative(ints).unwrap();
        let a = verify_realization(t.graph(), &f, &w).unwrap();
        let b = verify_realization(t.graph(), &f, &w.scaled(c)).unwrap();
        prop_assert_eq!(a.realized, b.realized);
        prop_assert_eq!(a.separable, b.separable);
        if let (Some(x), Some(y)) = (a.theta_window, b.theta_window) {
            prop_assert_eq!(x.lower * c, y.lower);
            prop_assert_eq!(x.upper * c, y.upper);
        }
    }

    #[test]
    fn dump_round_trip(n in 1usize..10, d in 1usize..130, seed in any::<u64>()) {
        let f = sample_embedding(n, d, 0.0, 2.0, seed).unwrap();
        prop_assert_eq!(Embedding::from_dump(&f.to_dump()).unwrap(), f);
    }
}

#[test]
fn hand_examples() {
    let f = Embedding::from_columns(0.0, 1.0, &[vec![false, false, true], vec![true, false, true]]).unwrap();
    let w = WeightVector::boolean(&[true, true, false]);
    assert_eq!(weighted_sq_distance(&f, 0, 1, &w).unwrap(), 1.0);
    assert_eq!(weighted_sq_distance(&f, 0, 1, &WeightVector::zeros(3)).unwrap(), 0.0);
    let f2 = f.relabeled(0.0, 2.0);
    assert_eq!(weighted_l1_distance(&f2, 0, 1, &w).unwrap(), 2.0);
    assert!(weighted_sq_distance(&f, 0, 1, &WeightVector::ones(2)).is_err());
}
