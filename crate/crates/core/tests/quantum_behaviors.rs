use std::f64::consts::{FRAC_PI_4, SQRT_2};

use approx::assert_abs_diff_eq;
use bellkit::quantum::{
    behavior_from_quantum, expectation, intermediate_projector, maximally_entangled, mub_pair,
    partial_state_density, two_qubit_correlators, werner_density, BlochSetting, GeneralState,
    ProjectiveMeasurementSet,
};
use bellkit::{
    behavior_from_correlators, correlators_from_behavior, evaluate_correlation,
    evaluate_probability, nonsignaling_check, Behavior, CorrelationInequality, CorrelatorTable,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};

fn bloch(rng: &mut ChaCha8Rng) -> BlochSetting {
    BlochSetting::new(UnitSphere.sample(rng)).unwrap()
}

#[test]
fn closed_form_matches_trace_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let theta = rng.gen_range(0.0..=FRAC_PI_4);
        let (a, b) = (bloch(&mut rng), bloch(&mut rng));
        let closed = two_qubit_correlators(theta, &a, &b);
        let beh = behavior_from_quantum(
            &partial_state_density(theta).unwrap(),
            &ProjectiveMeasurementSet::from_bloch(&[a]).unwrap(),
            &ProjectiveMeasurementSet::from_bloch(&[b]).unwrap(),
        )
        .unwrap();
        let t = correlators_from_behavior(&beh).unwrap();
        worst = worst
            .max((closed.e - t.e(0, 0)).abs())
            .max((closed.a - t.alice_marginals()[0]).abs())
            .max((closed.b - t.bob_marginals()[0]).abs());
    }
    assert!(worst < 1e-12, "worst deviation {worst:e}");
}

#[test]
fn quantum_behaviors_are_nonsignaling_and_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let theta = rng.gen_range(0.0..=FRAC_PI_4);
        let w = rng.gen_range(0.0..=1.0);
        let alice: Vec<_> = (0..3).map(|_| bloch(&mut rng)).collect();
        let bob: Vec<_> = (0..4).map(|_| bloch(&mut rng)).collect();
        let (ma, mb) = (
            ProjectiveMeasurementSet::from_bloch(&alice).unwrap(),
            ProjectiveMeasurementSet::from_bloch(&bob).unwrap(),
        );
        for state in [
            partial_state_density(theta).unwrap(),
            werner_density(w).unwrap(),
        ] {
            let beh = behavior_from_quantum(&state, &ma, &mb).unwrap();
            let report = nonsignaling_check(&beh, 1e-9);
            assert!(report.passes, "deviation {}", report.max_deviation);
            for x in 0..3 {
                for y in 0..4 {
                    let total: f64 = (0..2)
                        .flat_map(|a| (0..2).map(move |b| (a, b)))
                        .map(|(a, b)| beh.prob(a, b, x, y))
                        .sum();
                    assert!((total - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn qudit_behaviors_are_nonsignaling() {
    for d in 2..=5 {
        let (comp, fourier) = mub_pair(d).unwrap();
        let alice = ProjectiveMeasurementSet::from_bases(&[comp.clone(), fourier.clone()]).unwrap();
        let bob = ProjectiveMeasurementSet::from_bases(&[fourier, comp]).unwrap();
        let state = GeneralState::pure(d, d, &maximally_entangled(d)).unwrap();
        let beh = behavior_from_quantum(&state, &alice.conjugated(), &bob).unwrap();
        assert!(nonsignaling_check(&beh, 1e-9).passes);
        // aligned bases give perfect correlation
        for a in 0..d {
            assert_abs_diff_eq!(beh.prob(a, a, 0, 1), 1.0 / d as f64, epsilon = 1e-12);
        }
    }
}

#[test]
fn mub_overlaps_are_flat() {
    for d in 2..=7 {
        let (comp, fourier) = mub_pair(d).unwrap();
        for u in &comp {
            for v in &fourier {
                assert_abs_diff_eq!(u.dotc(v).norm_sqr(), 1.0 / d as f64, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn intermediate_projector_is_balanced() {
    for d in 2..=6 {
        let (comp, fourier) = mub_pair(d).unwrap();
        for s1 in &comp {
            for s2 in &fourier {
                let p = intermediate_projector(s1, s2).unwrap();
                assert_abs_diff_eq!(expectation(&p, s1), expectation(&p, s2), epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn pr_box_reaches_four_and_signals_nothing() {
    let chsh = CorrelationInequality::from_integers("CHSH", &[vec![1, 1], vec![1, -1]]).unwrap();
    let pr = Behavior::pr_box();
    assert!(nonsignaling_check(&pr, 1e-12).passes);
    assert_eq!(
        evaluate_probability(&chsh.to_probability(), &pr).unwrap(),
        4.0
    );
}

#[test]
fn maximally_entangled_chsh_settings() {
    let chsh = CorrelationInequality::from_integers("CHSH", &[vec![1, 1], vec![1, -1]]).unwrap();
    let alice = [0.0, std::f64::consts::FRAC_PI_2].map(BlochSetting::in_xz_plane);
    let bob = [FRAC_PI_4, -FRAC_PI_4].map(BlochSetting::in_xz_plane);
    let beh = behavior_from_quantum(
        &partial_state_density(FRAC_PI_4).unwrap(),
        &ProjectiveMeasurementSet::from_bloch(&alice).unwrap(),
        &ProjectiveMeasurementSet::from_bloch(&bob).unwrap(),
    )
    .unwrap();
    let value = evaluate_correlation(&chsh, &correlators_from_behavior(&beh).unwrap()).unwrap();
    assert_abs_diff_eq!(value, 2.0 * SQRT_2, epsilon = 1e-12);
}

fn binary_behavior() -> impl Strategy<Value = Behavior> {
    // a convex mixture of deterministic strategies and a PR box is a valid
    // non-signaling behavior with arbitrary marginals
    (2usize..=3, 2usize..=3).prop_flat_map(|(na, nb)| {
        (
            Just((na, nb)),
            prop::collection::vec(
                (
                    prop::collection::vec(0usize..2, na),
                    prop::collection::vec(0usize..2, nb),
                    0.0f64..1.0,
                ),
                1..5,
            ),
        )
            .prop_map(|((na, nb), parts)| {
                let total: f64 = parts.iter().map(|p| p.2).sum::<f64>() + 1e-3;
                Behavior::from_fn((na, nb), (2, 2), |a, b, x, y| {
                    parts
                        .iter()
                        .map(|(al, bo, w)| if al[x] == a && bo[y] == b { *w } else { 0.0 })
                        .sum::<f64>()
                        / total
                        + 1e-3 / total * 0.25
                })
                .unwrap()
            })
    })
}

proptest! {
    #[test]
    fn correlator_round_trip(beh in binary_behavior()) {
        let t = correlators_from_behavior(&beh).unwrap();
        let back = behavior_from_correlators(&t).unwrap();
        for (p, q) in beh.probabilities().iter().zip(back.probabilities()) {
            prop_assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_and_probability_forms_agree(
        beh in binary_behavior(),
        coeffs in prop::collection::vec(-4i64..=4, 9),
    ) {
        let (na, nb) = (beh.n_a(), beh.n_b());
        let rows: Vec<Vec<i64>> = (0..na).map(|x| coeffs[x * 3..x * 3 + nb].to_vec()).collect();
        let ineq = CorrelationInequality::from_integers("r", &rows).unwrap();
        let c = evaluate_correlation(&ineq, &correlators_from_behavior(&beh).unwrap()).unwrap();
        let p = evaluate_probability(&ineq.to_probability(), &beh).unwrap();
        prop_assert!((c - p).abs() < 1e-10);
    }

    #[test]
    fn unbiased_tables_are_valid(e in prop::collection::vec(-1.0f64..=1.0, 4)) {
        let t = CorrelatorTable::unbiased(&[e[..2].to_vec(), e[2..].to_vec()]).unwrap();
        let beh = behavior_from_correlators(&t).unwrap();
        prop_assert!(nonsignaling_check(&beh, 1e-12).passes);
    }
}

#[test]
fn invalid_quantum_inputs() {
    assert!(BlochSetting::new([1.0, 1.0, 0.0]).is_err());
    assert!(werner_density(1.5).is_err());
    assert!(partial_state_density(1.0).is_err());
    let (comp, _) = mub_pair(3).unwrap();
    assert!(intermediate_projector(&comp[0], &comp[1]).is_err());
}
