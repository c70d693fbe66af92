use fracgreen::criteria::{
    check_prop_s, check_transience, eval_cond_int1, eval_cond_int1b, eval_cond_int1b_with_tol, eval_cond_int2, evaluate, henon_classify,
    Cond2Grids, Cond2Verdict, ExistenceVerdict, Scenario,
};
use fracgreen::profiles::{MeasureProfile, VolumeProfile};
use fracgreen::quadrature::IntegralStatus;
use proptest::prelude::*;

fn euclid(n: f64) -> VolumeProfile<f64> {
    VolumeProfile::euclidean(n).unwrap()
}

fn scenario(n: f64, meas: MeasureProfile<f64>, alpha: f64, q: f64) -> Scenario {
    Scenario::new(euclid(n), meas, alpha, q)
}

#[test]
fn transience_examples() {
    assert!(check_transience(&euclid(3.0), 0.5).unwrap().is_finite());
    assert!(check_transience(&euclid(2.0), 0.5).unwrap().is_finite());
    let v = VolumeProfile::power_law(1.0, 1.0).unwrap();
    assert_eq!(
        check_transience(&v, 0.5).unwrap().status,
        IntegralStatus::DivergentByExponent
    );
}

#[test]
fn cond_int1_examples() {
    let flat = MeasureProfile::power_density(0.0, 3.0).unwrap();
    assert!(eval_cond_int1(&scenario(3.0, flat.clone(), 0.5, 2.0)).unwrap().is_finite());
    let r = eval_cond_int1(&scenario(3.0, flat, 0.5, 1.4)).unwrap();
    assert_eq!(r.status, IntegralStatus::DivergentByExponent);
    let d = eval_cond_int1(&scenario(3.0, MeasureProfile::dirac(), 0.5, 2.0)).unwrap();
    assert!(d.is_finite());
    // V = r³ gives R(r) = 1/(2r²) and the integrand r^{−5}/2 on [1, ∞).
    let cube = Scenario::new(VolumeProfile::power_law(1.0, 3.0).unwrap(), MeasureProfile::dirac(), 0.5, 2.0);
    let v = eval_cond_int1(&cube).unwrap().value;
    assert!((v - 0.125).abs() < 1e-9, "{v}");
}

#[test]
fn cond_int1b_examples() {
    assert!(eval_cond_int1b(&euclid(3.0), 0.5, 2.0, 1.0).unwrap().is_finite());
    assert_eq!(
        eval_cond_int1b(&euclid(3.0), 0.5, 1.5, 1.0).unwrap().status,
        IntegralStatus::DivergentByExponent
    );
}

#[test]
fn log_corrected_table_uses_numeric_windows() {
    // V(r) = r (1 + ln r)² with α = 1/4, q = 2: the integrand is 1/(r (1 + ln r)²),
    // whose antiderivative −1/(1 + ln r) gives exactly 1 on [1, ∞).
    let table = |p: f64| {
        let r: Vec<f64> = fracgreen::scalar::log_grid(1.0, 1e300, 6000);
        let v: Vec<f64> = r.iter().map(|&t| t * (1.0 + t.ln()).powf(p)).collect();
        VolumeProfile::table(r, v, None).unwrap()
    };
    // Logarithmic tails only settle to about 1e-4 before the table ends.
    let res = eval_cond_int1b_with_tol(&table(2.0), 0.25, 2.0, 1.0, 1e-4).unwrap();
    assert_eq!(res.status, IntegralStatus::FiniteNumeric);
    assert!((res.value - 1.0).abs() < 2e-2, "{}", res.value);
    // At the default tolerance the windows run off the table instead.
    assert!(matches!(
        eval_cond_int1b(&table(2.0), 0.25, 2.0, 1.0),
        Err(fracgreen::Error::UnsupportedRange(_))
    ));

    // With (1 + ln r)^{1/2} the integrand is 1/(r (1 + ln r)^{1/2}), which diverges;
    // the windows never settle and run off the table.
    let res = eval_cond_int1b_with_tol(&table(0.5), 0.25, 2.0, 1.0, 1e-4);
    assert!(matches!(res, Err(fracgreen::Error::UnsupportedRange(_))), "{res:?}");
}

#[test]
fn cond_int2_examples() {
    let grids = Cond2Grids::standard(1.0);
    let mu = eval_cond_int2(&scenario(3.0, MeasureProfile::same_as_volume(), 0.5, 2.0), &grids).unwrap();
    assert_eq!(mu.verdict, Cond2Verdict::Bounded);

    let dirac = eval_cond_int2(&scenario(3.0, MeasureProfile::dirac(), 0.5, 2.0), &grids).unwrap();
    assert_eq!(dirac.verdict, Cond2Verdict::UnboundedTrend);

    let henon = MeasureProfile::power_density(1.0, 3.0).unwrap();
    let h = eval_cond_int2(&scenario(3.0, henon, 0.5, 2.0), &grids).unwrap();
    assert_eq!(h.verdict, Cond2Verdict::Bounded);
    assert!(h.samples.iter().all(|s| s.lower <= s.upper));
}

#[test]
fn threshold_case_reports_not_exists() {
    let henon = MeasureProfile::power_density(1.0, 3.0).unwrap();
    let rep = evaluate(&scenario(3.0, henon, 0.5, 2.0), &Cond2Grids::standard(1.0)).unwrap();
    assert_eq!(rep.existence_verdict, ExistenceVerdict::NotExists);
    assert_eq!(rep.henon_threshold, Some(2.0));
    assert_eq!(henon_classify(3.0, 0.5, 1.0, 2.0).unwrap(), ExistenceVerdict::NotExists);
}

#[test]
fn dirac_counterexample() {
    let rep = evaluate(&scenario(3.0, MeasureProfile::dirac(), 0.5, 2.0), &Cond2Grids::standard(1.0)).unwrap();
    assert!(rep.cond_int1.as_ref().unwrap().is_finite());
    assert_eq!(rep.cond_int2.as_ref().unwrap().verdict, Cond2Verdict::UnboundedTrend);
    assert_eq!(rep.existence_verdict, ExistenceVerdict::NotExists);
}

#[test]
fn recurrent_profile_is_not_exists() {
    let sc = Scenario::new(
        VolumeProfile::power_law(1.0, 1.0).unwrap(),
        MeasureProfile::same_as_volume(),
        0.5,
        2.0,
    );
    let rep = evaluate(&sc, &Cond2Grids::standard(1.0)).unwrap();
    assert_eq!(rep.existence_verdict, ExistenceVerdict::NotExists);
    assert!(rep.cond_int1.is_none());
}

#[test]
fn prop_s_piecewise_constant_trials() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        // Non-increasing steps followed by a t^{-3} tail keep both sides finite.
        let mut breaks = vec![1.0];
        let mut levels = vec![1.0];
        for _ in 0..4 {
            breaks.push(breaks.last().unwrap() * rng.gen_range(1.2..4.0));
            levels.push(levels.last().unwrap() * rng.gen_range(0.1..1.0));
        }
        let b_last = *breaks.last().unwrap();
        let l_last = *levels.last().unwrap();
        let phi = |t: f64| {
            if t >= b_last {
                l_last * (b_last / t).powi(3)
            } else {
                let k = breaks.iter().rposition(|&b| b <= t).unwrap_or(0);
                levels[k]
            }
        };
        let s = rng.gen_range(0.1..0.9);
        let alpha = rng.gen_range(0.1..0.9);
        let rep = check_prop_s(phi, s, alpha, 1.0, 1e-9).unwrap();
        assert!(rep.holds, "{rep:?}");
        assert!(rep.minimal_constant <= rep.constant);
    }
}

#[test]
fn henon_grid_agrees_with_criteria() {
    let grids = Cond2Grids::standard(1.0);
    for n in [3.0, 4.0] {
        for alpha in [0.25, 0.75] {
            for gamma in [0.0, 2.0] {
                let q_star = (n + gamma) / (n - 2.0 * alpha);
                for q in [q_star - 0.1, q_star + 0.1] {
                    let meas = MeasureProfile::power_density(gamma, n).unwrap();
                    let rep = evaluate(&scenario(n, meas, alpha, q), &grids).unwrap();
                    assert_eq!(
                        rep.existence_verdict,
                        henon_classify(n, alpha, gamma, q).unwrap(),
                        "n={n} alpha={alpha} gamma={gamma} q={q}"
                    );
                }
            }
        }
    }
}

fn piecewise_profile() -> impl Strategy<Value = VolumeProfile<f64>> {
    (0.5f64..3.0, prop::collection::vec(2.5f64..5.0, 1..4), 0.5f64..2.0).prop_map(|(c0, exps, gap)| {
        let bps: Vec<f64> = (1..exps.len()).map(|i| (1.0 + gap).powi(i as i32)).collect();
        VolumeProfile::piecewise(c0, bps, exps).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn finite_cond_int1b_implies_bounded_cond_int2(v in piecewise_profile(), alpha in 0.2f64..0.8, q in 1.2f64..3.0) {
        let b = eval_cond_int1b(&v, alpha, q, 1.0).unwrap();
        prop_assume!(b.is_finite());
        let sc = Scenario::new(v, MeasureProfile::same_as_volume(), alpha, q);
        let c2 = eval_cond_int2(&sc, &Cond2Grids::standard(1.0)).unwrap();
        prop_assert_eq!(c2.verdict, Cond2Verdict::Bounded);
    }

    #[test]
    fn cond_int1_with_volume_measure_matches_cond_int1b(
        n in 2.0f64..6.0, alpha in 0.1f64..0.9, q in 1.05f64..4.0,
    ) {
        prop_assume!(n > 2.0 * alpha + 0.05);
        let v = VolumeProfile::power_law(1.0, n).unwrap();
        let exponent = 2.0 * alpha * q - 1.0 - n * (q - 1.0);
        prop_assume!((exponent + 1.0).abs() > 1e-3);
        let sc = Scenario::new(v.clone(), MeasureProfile::same_as_volume(), alpha, q);
        let one = eval_cond_int1(&sc).unwrap();
        let b = eval_cond_int1b(&v, alpha, q, 1.0).unwrap();
        prop_assert_eq!(one.is_finite(), b.is_finite());
    }

    #[test]
    fn henon_matches_cond_int1_exponent(
        n in 3usize..6, ai in 0usize..3, gi in 0usize..4, dq in prop::sample::select(vec![-0.3, -0.1, 0.1, 0.3]),
    ) {
        let n = n as f64;
        let alpha = [0.25, 0.5, 0.75][ai];
        let gamma = [-0.25, 0.0, 1.0, 2.0][gi];
        let q = (n + gamma) / (n - 2.0 * alpha) + dq;
        prop_assume!(q > 1.0);
        let meas = MeasureProfile::power_density(gamma, n).unwrap();
        let one = eval_cond_int1(&scenario(n, meas, alpha, q)).unwrap();
        let exists = henon_classify(n, alpha, gamma, q).unwrap() == ExistenceVerdict::Exists;
        prop_assert_eq!(one.is_finite(), exists);
    }

    #[test]
    fn verdicts_invariant_under_volume_rescaling(c in 0.05f64..20.0, ci in 0usize..3) {
        let (meas, q) = [
            (MeasureProfile::same_as_volume(), 2.0),
            (MeasureProfile::dirac(), 2.0),
            (MeasureProfile::same_as_volume(), 1.3),
        ][ci].clone();
        let base = Scenario::new(VolumeProfile::power_law(1.0, 3.0).unwrap(), meas.clone(), 0.5, q);
        let scaled = Scenario::new(VolumeProfile::power_law(c, 3.0).unwrap(), meas, 0.5, q);
        let grids = Cond2Grids::standard(1.0);
        let a = evaluate(&base, &grids).unwrap();
        let b = evaluate(&scaled, &grids).unwrap();
        prop_assert_eq!(a.existence_verdict, b.existence_verdict);
        prop_assert_eq!(
            a.cond_int2.as_ref().unwrap().verdict,
            b.cond_int2.as_ref().unwrap().verdict
        );
        prop_assert_eq!(a.cond_int1.unwrap().is_finite(), b.cond_int1.unwrap().is_finite());
    }
}
