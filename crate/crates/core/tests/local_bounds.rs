use bellkit::families::{catalog, CATALOG_NAMES};
use bellkit::local::{
    correlation_value, exact_affine_rank, facet_check, facet_check_correlation,
    local_bound_correlation, local_bound_probability, PolytopeSpace,
};
use bellkit::{
    evaluate_probability, AnyInequality, CorrelationInequality, DeterministicStrategy, LocalBound,
};
use num_rational::Rational64;
use proptest::prelude::*;

/// Every sign assignment on both sides, nothing clever.
fn naive_bound(rows: &[Vec<i64>]) -> i64 {
    let (m_a, m_b) = (rows.len(), rows[0].len());
    let mut best = i64::MIN;
    for mask in 0u32..(1 << (m_a + m_b)) {
        let sign = |bit: usize| if mask >> bit & 1 == 1 { -1 } else { 1 };
        let mut total = 0;
        for (x, row) in rows.iter().enumerate() {
            for (y, &c) in row.iter().enumerate() {
                total += c * sign(x) * sign(m_a + y);
            }
        }
        best = best.max(total);
    }
    best
}

fn signs(bits: u32, len: usize) -> Vec<i8> {
    (0..len)
        .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
        .collect()
}

fn matrix(max_a: usize, max_b: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_a, 1..=max_b)
        .prop_flat_map(|(a, b)| prop::collection::vec(prop::collection::vec(-5i64..=5, b), a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_enumeration_matches_naive(rows in matrix(8, 8)) {
        let ineq = CorrelationInequality::from_integers("r", &rows).unwrap();
        prop_assert_eq!(local_bound_correlation(&ineq).unwrap(), Rational64::from(naive_bound(&rows)));
    }

    #[test]
    fn lopsided_shapes_match_naive(rows in matrix(2, 14)) {
        let ineq = CorrelationInequality::from_integers("r", &rows).unwrap();
        prop_assert_eq!(local_bound_correlation(&ineq).unwrap(), Rational64::from(naive_bound(&rows)));
        let t = ineq.transposed().unwrap();
        prop_assert_eq!(local_bound_correlation(&t).unwrap(), Rational64::from(naive_bound(&rows)));
    }

    #[test]
    fn probability_path_agrees(rows in matrix(4, 4)) {
        let ineq = CorrelationInequality::from_integers("r", &rows).unwrap();
        prop_assert_eq!(
            local_bound_probability(&ineq.to_probability()).unwrap(),
            local_bound_correlation(&ineq).unwrap()
        );
    }

    #[test]
    fn positive_scaling_keeps_argmax(rows in matrix(5, 5), p in 1i64..50, q in 1i64..50) {
        let ineq = CorrelationInequality::from_integers("r", &rows).unwrap();
        let c = Rational64::new(p, q);
        let scaled = ineq.scaled(c).unwrap();
        let bound = local_bound_correlation(&ineq).unwrap();
        prop_assert_eq!(local_bound_correlation(&scaled).unwrap(), bound * c);
        let (m_a, m_b) = (ineq.m_a(), ineq.m_b());
        for a in 0u32..(1 << m_a) {
            for b in 0u32..(1 << m_b) {
                let (sa, sb) = (signs(a, m_a), signs(b, m_b));
                let optimal = correlation_value(&ineq, &sa, &sb) == bound;
                let optimal_scaled = correlation_value(&scaled, &sa, &sb) == bound * c;
                prop_assert_eq!(optimal, optimal_scaled);
            }
        }
    }

    #[test]
    fn rank_ignores_vertex_order(
        points in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..20),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = points.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(exact_affine_rank(&points), exact_affine_rank(&shuffled));
    }

    /// Input permutations, outcome flips and party exchange are local symmetries.
    #[test]
    fn chsh_relabelings_stay_facets(
        swap_a in any::<bool>(), swap_b in any::<bool>(), flips in 0u32..16, exchange in any::<bool>(),
    ) {
        let base = [[1i64, 1], [1, -1]];
        let flip = |bit: usize| if flips >> bit & 1 == 1 { -1 } else { 1 };
        let rows: Vec<Vec<i64>> = (0..2)
            .map(|x| {
                (0..2)
                    .map(|y| base[x ^ swap_a as usize][y ^ swap_b as usize] * flip(x) * flip(2 + y))
                    .collect()
            })
            .collect();
        let mut ineq = CorrelationInequality::from_integers("chsh'", &rows).unwrap();
        if exchange {
            ineq = ineq.transposed().unwrap();
        }
        let b = local_bound_correlation(&ineq).unwrap();
        prop_assert_eq!(b, Rational64::from(2));
        let ineq = ineq.with_bound(LocalBound::exact(b));
        for space in [PolytopeSpace::Full, PolytopeSpace::Correlation] {
            prop_assert!(facet_check_correlation(&ineq, space).unwrap().is_facet);
        }
    }
}

#[test]
fn catalog_vertices_respect_and_attain_bounds() {
    for name in CATALOG_NAMES {
        let ineq = catalog(name).unwrap();
        let bound = ineq.bound().unwrap().value;
        let prob = ineq.to_probability();
        let (m_a, m_b) = (ineq.m_a(), ineq.m_b());
        let mut attained = false;
        for a in 0u32..(1 << m_a) {
            for b in 0u32..(1 << m_b) {
                let (sa, sb) = (signs(a, m_a), signs(b, m_b));
                let v = correlation_value(&ineq, &sa, &sb);
                assert!(v <= bound, "{name}");
                attained |= v == bound;
                // the probability evaluator on the same vertex, sampled sparsely
                if (a + b) % 61 == 0 {
                    let beh = DeterministicStrategy::from_signs(&sa, &sb)
                        .to_behavior(2, 2)
                        .unwrap();
                    let p = evaluate_probability(&prob, &beh).unwrap();
                    assert!((p - *v.numer() as f64 / *v.denom() as f64).abs() < 1e-12);
                }
            }
        }
        assert!(attained, "{name} bound not attained");
    }
}

#[test]
fn facet_open_question_as_family() {
    for (name, rank, dim) in [("AS4", 23, 24), ("AS6", 47, 48), ("AS8", 79, 80)] {
        let r = facet_check(&catalog(name).unwrap().into(), PolytopeSpace::Full).unwrap();
        assert!(r.is_facet, "{name}");
        assert_eq!((r.affine_rank, r.polytope_dim), (rank, dim));
    }
}

#[test]
fn s3x4_is_not_a_facet_in_either_space() {
    let s: AnyInequality = catalog("S3x4").unwrap().into();
    let full = facet_check(&s, PolytopeSpace::Full).unwrap();
    assert!(!full.is_facet);
    assert_eq!((full.affine_rank, full.polytope_dim), (7, 19));
    let corr = facet_check(&s, PolytopeSpace::Correlation).unwrap();
    assert!(!corr.is_facet);
    assert_eq!((corr.affine_rank, corr.polytope_dim), (3, 12));
}

#[test]
fn probability_form_facet_check() {
    let chsh = catalog("CHSH").unwrap();
    let p = chsh
        .to_probability()
        .with_bound(LocalBound::exact(Rational64::from(2)));
    let r = facet_check(&p.into(), PolytopeSpace::Full).unwrap();
    assert!(r.is_facet);
    assert_eq!(r.polytope_dim, 8);
}

#[test]
fn bound_free_inequality_cannot_be_checked() {
    let ineq = CorrelationInequality::from_integers("x", &[vec![1, 1], vec![1, -1]]).unwrap();
    assert!(facet_check(&ineq.into(), PolytopeSpace::Full).is_err());
}
