use fracgreen::discrete::io::{from_text, to_text};
use fracgreen::discrete::{
    handy_lemma_check, max_f_check, minimality_bound, ptolemy_check, quasi_metric_constant, random_quasi_metric_space,
    rearrangement_check, riesz_space, tilde_kernel, wmp_constant, KernelSpace, RandomSpaceSpec, WmpOptions,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

const INF: f64 = f64::INFINITY;

fn spec(points: usize, dim: usize, power: f64) -> RandomSpaceSpec {
    RandomSpaceSpec {
        points,
        dim,
        power,
        quantize_bits: Some(10),
        infinite_diagonal: false,
    }
}

fn random_points(seed: u64, n: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect()
}

#[test]
fn riesz_points_kappa_below_triangle_bound() {
    // min(|x−y|, |y−z|)^{−2}... ≤ 2² |x−z|^{−2} by the triangle inequality.
    let s = riesz_space(random_points(3, 50, 3), 0.5, vec![1.0; 50]).unwrap();
    let q = quasi_metric_constant(&s);
    assert!(q.kappa <= 4.0 * (1.0 + 1e-12), "{}", q.kappa);
    assert!(q.kappa > 1.5);
}

#[test]
fn collinear_midpoint_attains_triangle_bound() {
    let pts = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![2.0, 0.0, 0.0]];
    let s = riesz_space(pts, 0.5, vec![1.0; 3]).unwrap();
    assert!((quasi_metric_constant(&s).kappa - 4.0).abs() < 1e-12);
}

#[test]
fn ptolemy_on_riesz_points() {
    let s = riesz_space(random_points(5, 12, 3), 0.5, vec![1.0; 12]).unwrap();
    let p = ptolemy_check(&s, None).unwrap();
    assert!(p.holds, "{p:?}");
    assert!(p.minimal_constant >= 1.0);
}

#[test]
fn ptolemy_degenerate_repeats() {
    let s = KernelSpace::new(vec![vec![INF, 2.0], vec![2.0, INF]], vec![1.0; 2], None).unwrap();
    let p = ptolemy_check(&s, Some(0)).unwrap();
    assert!(p.holds);
    assert_eq!(p.minimal_constant, 1.0);
}

#[test]
fn wmp_on_seeded_spaces_is_below_kappa() {
    for seed in 0..20 {
        let s = random_quasi_metric_space(&spec(6, 2, 1.5), seed).unwrap();
        let q = quasi_metric_constant(&s);
        let w = wmp_constant(&s, &WmpOptions::default()).unwrap();
        assert!(w.exact && w.exhaustive);
        assert!(w.constant_b <= q.kappa, "seed {seed}: b={} kappa={}", w.constant_b, q.kappa);
    }
}

#[test]
fn wmp_witness_reproduces_value() {
    let s = random_quasi_metric_space(&spec(5, 1, 2.0), 11).unwrap();
    let w = wmp_constant(&s, &WmpOptions::default()).unwrap();
    if let Some(wit) = &w.witness {
        let pot: f64 = wit.subset.iter().zip(&wit.weights).map(|(&j, &v)| s.k(wit.target, j) * v).sum();
        assert!((pot - w.constant_b).abs() <= 1e-12 * w.constant_b);
        for &i in &wit.subset {
            let on: f64 = wit.subset.iter().zip(&wit.weights).map(|(&j, &v)| s.k(i, j) * v).sum();
            assert!(on <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn wmp_is_stable_under_right_multiplication() {
    // K̃(x,y) = K(x,y) η(y) gives K̃_ν 1 = K_ν η, so the weak maximum principle
    // for K̃ is the `f = η` form of the principle for K.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    for seed in 0..5 {
        let s = random_quasi_metric_space(&spec(5, 2, 1.0), seed).unwrap();
        let b = wmp_constant(&s, &WmpOptions::default()).unwrap().constant_b;
        let eta: Vec<f64> = (0..5).map(|_| rng.gen_range(0.1..10.0)).collect();
        for mask in 1u32..31 {
            let subset: Vec<usize> = (0..5).filter(|&i| mask >> i & 1 == 1).collect();
            let r = max_f_check(&s, &eta, &subset, b).unwrap();
            assert!(r.holds, "seed {seed} mask {mask}: {r:?}");
        }
    }
}

#[test]
fn wmp_sampled_subsets_beyond_exact_limit() {
    let s = random_quasi_metric_space(&spec(12, 2, 1.0), 4).unwrap();
    let opts = WmpOptions {
        samples: 200,
        seed: 1,
        ..WmpOptions::default()
    };
    let w = wmp_constant(&s, &opts).unwrap();
    assert!(!w.exhaustive);
    assert!(w.constant_b <= quasi_metric_constant(&s).kappa);
    assert_eq!(wmp_constant(&s, &opts).unwrap(), w);
}

#[test]
fn tilde_kernel_examples() {
    let s = riesz_space(random_points(8, 10, 3), 0.5, vec![1.0; 10]).unwrap();
    let kappa = quasi_metric_constant(&s).kappa;
    for c in [1.0, 1e300] {
        let t = tilde_kernel(&s, 0, c).unwrap();
        assert!(quasi_metric_constant(&t).kappa <= kappa * kappa * (1.0 + 1e-12));
    }
    let two = riesz_space(random_points(9, 2, 3), 0.5, vec![1.0; 2]).unwrap();
    let t = tilde_kernel(&two, 0, 1.0).unwrap();
    let k2 = quasi_metric_constant(&two).kappa;
    assert!(quasi_metric_constant(&t).kappa <= k2 * k2);
}

#[test]
fn minimality_examples() {
    let pts = random_points(12, 8, 3);
    let mut w = vec![0.0; 8];
    w[3] = 1.0;
    let s = riesz_space(pts.clone(), 0.5, w).unwrap();
    let r = minimality_bound(&s, 0, 1.0).unwrap();
    assert!(r.holds, "{r:?}");

    let uniform = riesz_space(pts[..5].to_vec(), 0.5, vec![0.2; 5]).unwrap();
    assert!(minimality_bound(&uniform, 0, 0.5).unwrap().holds);

    let flat = KernelSpace::new(vec![vec![INF, 1.0, 1.0], vec![1.0, INF, 1.0], vec![1.0, 1.0, INF]], vec![0.0, 1.0, 0.0], None)
        .unwrap();
    let r = minimality_bound(&flat, 0, 0.5).unwrap();
    assert_eq!(r.bound, 0.5);
    assert!(r.holds);

    let empty = flat.with_weights(vec![0.0; 3]).unwrap();
    assert!(minimality_bound(&empty, 0, 1.0).is_err());
}

#[test]
fn rearrangement_constant_f() {
    let r = rearrangement_check(&[0.3, 0.5, 0.2], &[1.0, 1.0, 1.0], |t: f64| t.powi(3)).unwrap();
    assert!((r.rhs - 1.0).abs() < 1e-15);
    assert!(r.holds);
}

#[test]
fn text_round_trip_of_random_space() {
    let s = random_quasi_metric_space(
        &RandomSpaceSpec {
            quantize_bits: None,
            ..spec(7, 3, 1.3)
        },
        21,
    )
    .unwrap();
    assert_eq!(from_text(&to_text(&s)).unwrap(), s);
}

fn space_strategy() -> impl Strategy<Value = KernelSpace> {
    (3usize..=6, 1usize..=3, 0.5f64..3.0, any::<u64>(), any::<bool>()).prop_map(|(n, d, p, seed, inf)| {
        random_quasi_metric_space(
            &RandomSpaceSpec {
                points: n,
                dim: d,
                power: p,
                quantize_bits: Some(10),
                infinite_diagonal: inf,
            },
            seed,
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wmp_below_kappa(s in space_strategy()) {
        let w = wmp_constant(&s, &WmpOptions::default()).unwrap();
        prop_assert!(w.constant_b >= 1.0);
        prop_assert!(w.constant_b <= quasi_metric_constant(&s).kappa);
    }

    #[test]
    fn truncation_keeps_kappa(s in space_strategy(), frac in 0.01f64..2.0) {
        let kappa = quasi_metric_constant(&s).kappa;
        let kn = s.truncated(frac * s.max_off_diagonal());
        prop_assert!(quasi_metric_constant(&kn).kappa <= kappa * (1.0 + 1e-12));
    }

    #[test]
    fn monotone_truncations_respect_limit_bound(s in space_strategy()) {
        let kappa = quasi_metric_constant(&s).kappa;
        let m = s.max_off_diagonal();
        let mut prev = 0.0;
        for scale in [0.5, 2.0, 1e3, 1e6] {
            let b = wmp_constant(&s, &WmpOptions { truncation: Some(scale * m), ..WmpOptions::default() }).unwrap().constant_b;
            prop_assert!(b <= kappa);
            prev = b;
        }
        prop_assert!(prev >= 1.0);
    }

    #[test]
    fn ptolemy_below_kappa_squared(s in space_strategy()) {
        prop_assert!(ptolemy_check(&s, None).unwrap().holds);
    }

    #[test]
    fn tilde_below_kappa_squared(s in space_strategy(), c in 0.01f64..100.0, o in 0usize..3) {
        let kappa = quasi_metric_constant(&s).kappa;
        let t = tilde_kernel(&s, o, c).unwrap();
        prop_assert!(quasi_metric_constant(&t).kappa <= kappa * kappa * (1.0 + 1e-12));
    }

    #[test]
    fn handy_lemma_holds(s in space_strategy(), f in prop::collection::vec(0.0f64..5.0, 6)) {
        let b = wmp_constant(&s, &WmpOptions::default()).unwrap().constant_b;
        let f = &f[..s.len()];
        prop_assume!(f.iter().any(|&v| v > 0.0));
        let r = handy_lemma_check(&s, f, b).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }

    #[test]
    fn max_f_form_holds(s in space_strategy(), f in prop::collection::vec(0.0f64..5.0, 6), mask in 1u32..63) {
        let n = s.len();
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let f = &f[..n];
        prop_assume!(!subset.is_empty() && subset.iter().any(|&i| f[i] > 0.0));
        // With an infinite diagonal the premise can never be met.
        prop_assume!(s.k(0, 0).is_finite());
        let b = wmp_constant(&s, &WmpOptions::default()).unwrap().constant_b;
        let r = max_f_check(&s, f, &subset, b).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }

    #[test]
    fn minimality_holds(s in space_strategy(), a in 0.01f64..10.0, o in 0usize..3) {
        prop_assert!(minimality_bound(&s, o, a).unwrap().holds);
    }

    #[test]
    fn rearrangement_holds(
        omega in prop::collection::vec(0.0f64..3.0, 1..12),
        seed in any::<u64>(),
        pi in 0usize..3,
    ) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<f64> = omega.iter().map(|_| rng.gen_range(0..4) as f64).collect();
        let r = match pi {
            0 => rearrangement_check(&omega, &f, |t: f64| t),
            1 => rearrangement_check(&omega, &f, |t: f64| t.powf(2.5)),
            _ => rearrangement_check(&omega, &f, |t: f64| (t - 1.0).max(0.0)),
        }
        .unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }
}
