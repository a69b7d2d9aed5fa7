use approx::assert_abs_diff_eq;
use bellkit::families::S3X4_BOB_ROWS;
use bellkit::local::local_bound_probability;
use bellkit::optimizer::{seesaw_value, OptimizerConfig};
use bellkit::shb::{
    shb_correlation_form, shb_inequality, shb_local_formula, shb_local_oracle, shb_quantum_score,
};
use bellkit::BellError;
use num_rational::Rational64;

#[test]
fn oracle_matches_formula_for_binary_alphabet() {
    for n in 1..=4 {
        assert_eq!(
            shb_local_oracle(n, 2).unwrap() as u128,
            shb_local_formula(n),
            "n={n}"
        );
    }
}

#[test]
fn two_enumeration_paths_agree() {
    for (n, m) in [
        (1, 2),
        (1, 3),
        (2, 2),
        (2, 3),
        (2, 4),
        (3, 2),
        (3, 3),
        (4, 2),
        (2, 5),
    ] {
        let ineq = shb_inequality(n, m).unwrap();
        let via_tensor = local_bound_probability(&ineq).unwrap();
        assert_eq!(
            via_tensor,
            Rational64::from(shb_local_oracle(n, m).unwrap()),
            "({n},{m})"
        );
        assert_eq!(ineq.bound().unwrap().value, via_tensor);
    }
}

#[test]
fn two_input_bounds() {
    for m in 2..=4 {
        assert_eq!(shb_local_oracle(2, m).unwrap(), 2, "m={m}");
    }
    assert_eq!(shb_local_oracle(3, 2).unwrap(), 6);
}

/// The closed form has no alphabet dependence; at (3,3) exhaustive search
/// beats it. Reported, not patched.
#[test]
fn formula_undercounts_larger_alphabets() {
    assert_eq!(shb_local_formula(3), 6);
    assert_eq!(shb_local_oracle(3, 3).unwrap(), 9);
}

#[test]
fn quantum_score_is_two_root_m() {
    for m in 2..=8 {
        let q = shb_quantum_score(m).unwrap();
        assert_abs_diff_eq!(q.score, 2.0 * (m as f64).sqrt(), epsilon = 1e-9);
        assert!(q.score > 2.0);
    }
}

#[test]
fn correlation_form_and_its_quantum_ratio() {
    let c = shb_correlation_form().unwrap();
    let rows: Vec<Vec<Rational64>> = S3X4_BOB_ROWS
        .iter()
        .map(|r| r.iter().map(|&v| Rational64::from(v)).collect())
        .collect();
    assert_eq!(c.bob_major_rows(), rows);
    assert_eq!(c.bound().unwrap().value, Rational64::from(6));
    let q = seesaw_value(&c, 3, &OptimizerConfig::default())
        .unwrap()
        .value;
    assert_abs_diff_eq!(q, 4.0 * 3f64.sqrt(), epsilon = 1e-6);
    assert_abs_diff_eq!(q / 6.0, 4.0 * 3f64.sqrt() / 6.0, epsilon = 1e-6);
}

#[test]
fn size_limits() {
    assert!(matches!(
        shb_local_oracle(9, 3),
        Err(BellError::TooLarge(_))
    ));
    assert!(matches!(shb_inequality(17, 2), Err(BellError::TooLarge(_))));
    // the tensor is built but too large to enumerate: no bound attached
    assert!(shb_inequality(9, 3).unwrap().bound().is_none());
}
