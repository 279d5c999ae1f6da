//! Randomized invariants.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use anticipative::bloch::{trace_product, HermitianOp, Measurement, Vec3};
use anticipative::game::{
    bayes_optimal_post, exclusion_info_map, k_subsets, success_no_cpost, success_with_cpost, ExclusionSet,
    PartialInfoMap, PostProcessing,
};
use anticipative::solver::{
    anticipative_success, auxiliary_success, build_auxiliary, certificate, certify_optimal, success_over_functions,
    theorem_measurement, OutcomeFunction, Order,
};
use anticipative::task::{closed_form, game, MeasurementKind, ScenarioId, TaskParams, INPUTS};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn op() -> impl Strategy<Value = HermitianOp> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(s, x, y, z)| HermitianOp::new(s, Vec3::new(x, y, z)))
}

fn theta() -> impl Strategy<Value = f64> {
    0.01..=FRAC_PI_2
}

fn distribution(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001..1.0f64, n).prop_map(|v| {
        let t: f64 = v.iter().sum();
        v.into_iter().map(|x| x / t).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trace_product_is_symmetric_and_bilinear(a in op(), b in op(), c in op(), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        prop_assert!((trace_product(&a, &b) - trace_product(&b, &a)).abs() < 1e-12);
        let lhs = trace_product(&a.scale(s).add(&b.scale(t)), &c);
        let rhs = s * trace_product(&a, &c) + t * trace_product(&b, &c);
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    /// No post-processing beats the posterior-maximizing one.
    #[test]
    fn bayes_post_processing_is_maximal(
        th in theta(),
        k in 0usize..=2,
        anticipative in any::<bool>(),
        seeds in prop::collection::vec(distribution(4), 24),
    ) {
        let kind = if anticipative { MeasurementKind::Anticipative } else { MeasurementKind::Standard };
        let p = TaskParams::new(th).unwrap();
        let g = game(kind, &p).unwrap();
        let info = exclusion_info_map(&g, k).unwrap();
        let best = bayes_optimal_post(&g, &info).unwrap();
        let mut rules = BTreeMap::new();
        let mut draws = seeds.into_iter().cycle();
        for set in info.support() {
            for z in 0..4 {
                rules.insert((set.clone(), z), draws.next().unwrap());
            }
        }
        let random = PostProcessing::new(INPUTS.to_vec(), kind.outcomes().to_vec(), rules).unwrap();
        let score = |post: &PostProcessing<_, _>| if k == 0 {
            success_no_cpost(&g, post).unwrap()
        } else {
            success_with_cpost(&g, &info, post).unwrap()
        };
        prop_assert!(score(&random) <= score(&best) + 1e-12);
        let expected = closed_form(ScenarioId::new(kind, k).unwrap(), &p);
        prop_assert!((score(&best) - expected).abs() < 1e-12);
    }

    /// Side information that does not depend on the input is worth nothing:
    /// it collapses to the averaged post-processing.
    #[test]
    fn input_independent_information_collapses(th in theta(), k in 1usize..=2, w in distribution(6), seeds in prop::collection::vec(distribution(4), 24)) {
        let p = TaskParams::new(th).unwrap();
        let g = game(MeasurementKind::Standard, &p).unwrap();
        let sets = k_subsets(4, k);
        let weights: BTreeMap<ExclusionSet, f64> = {
            let raw: Vec<f64> = w.into_iter().take(sets.len()).collect();
            let t: f64 = raw.iter().sum();
            sets.iter().cloned().zip(raw.into_iter().map(|x| x / t)).collect()
        };
        let info = PartialInfoMap::input_independent(INPUTS.to_vec(), INPUTS.to_vec(), weights.clone()).unwrap();
        let mut rules = BTreeMap::new();
        let mut draws = seeds.into_iter().cycle();
        for set in &sets {
            for z in 0..4 {
                rules.insert((set.clone(), z), draws.next().unwrap());
            }
        }
        let post = PostProcessing::new(INPUTS.to_vec(), g.outcomes().to_vec(), rules).unwrap();
        let with = success_with_cpost(&g, &info, &post).unwrap();
        let without = success_no_cpost(&g, &post.averaged(&weights).unwrap()).unwrap();
        prop_assert!((with - without).abs() < 1e-12);
        prop_assert!(without <= 0.5 + 1e-12);
    }

    /// `Σ tr[ē M̄] ≤ 2Λ` for random two-outcome projective measurements on
    /// random pairs of outcome functions, and the theorem measurements attain it.
    #[test]
    fn certificate_bound_is_sound(th in theta(), k in 1usize..=2, i in 0usize..4096, j in 0usize..4096, phi in 0.0..std::f64::consts::TAU, z in -1.0..1.0f64) {
        let aux = build_auxiliary(th, k).unwrap();
        let len = aux.family().len();
        let n = aux.len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i != j);
        let r = (1.0 - z * z).sqrt();
        let dir = Vec3::new(r * phi.cos(), r * phi.sin(), z);
        let m = Measurement::new(vec![
            (OutcomeFunction::from_index(i, len), HermitianOp::weighted(0.5, dir)),
            (OutcomeFunction::from_index(j, len), HermitianOp::weighted(0.5, dir.scale(-1.0))),
        ]).unwrap();
        let bound = 2.0 * aux.lambda();
        prop_assert!(auxiliary_success(&aux, &m) <= bound + 1e-12);
        let p = TaskParams::new(th).unwrap();
        for order in [Order::AB, Order::BA] {
            let t = theorem_measurement(&p, k, order).unwrap();
            prop_assert!((auxiliary_success(&aux, &t.measurement) - bound).abs() < 1e-12);
            let original = success_over_functions(&p, k, &t.measurement).unwrap();
            prop_assert!((original - anticipative_success(&aux)).abs() < 1e-12);
        }
        if certify_optimal(&aux, &m, 1e-9) {
            prop_assert!((auxiliary_success(&aux, &m) - bound).abs() < 1e-9);
        }
    }

    #[test]
    fn success_is_two_c_lambda_with_c_four_cubed(th in theta()) {
        let aux = build_auxiliary(th, 1).unwrap();
        prop_assert!((aux.normalization() - 64.0).abs() < 1e-9);
        let p = TaskParams::new(th).unwrap();
        let expected = closed_form(ScenarioId::new(MeasurementKind::Anticipative, 1).unwrap(), &p);
        prop_assert!((2.0 * 64.0 * aux.lambda() - expected).abs() < 1e-12);
    }
}

/// With `a·b = 0` the `(−a, b)` and `(b, −a)` measurements are optimal as
/// well, and the four optimal measurements have pairwise disjoint supports.
#[test]
fn orthogonal_inputs_admit_four_optimal_measurements() {
    let p = TaskParams::new(FRAC_PI_2).unwrap();
    for k in 1..=2 {
        let aux = build_auxiliary(FRAC_PI_2, k).unwrap();
        let all: Vec<_> = Order::ALL
            .iter()
            .map(|o| theorem_measurement(&p, k, *o).unwrap())
            .collect();
        for t in &all {
            assert!(certify_optimal(&aux, &t.measurement, TOL), "{:?} k={k}", t.order);
        }
        for (i, s) in all.iter().enumerate() {
            for t in &all[i + 1..] {
                for f in [&s.plus, &s.minus] {
                    assert!(f != &t.plus && f != &t.minus, "{:?} and {:?} share {f}", s.order, t.order);
                }
            }
        }
    }
    for k in 1..=2 {
        let p = TaskParams::new(1.0).unwrap();
        let aux = build_auxiliary(1.0, k).unwrap();
        for order in [Order::NegAB, Order::BNegA] {
            let t = theorem_measurement(&p, k, order).unwrap();
            assert!(certificate(&aux, &t.measurement).max_residual > 1e-6);
        }
    }
}
