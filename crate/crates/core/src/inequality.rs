//! Inequality types.
//!
//! Binary outcomes are written `+1/-1` in correlation form and `0/1` in
//! probability form. The one bijection used everywhere is `+1 <-> 0`,
//! `-1 <-> 1` (see [`sign_to_bit`] and [`bit_to_sign`]).

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{BellError, Result};

/// Map a `±1` outcome to its `{0,1}` label.
pub fn sign_to_bit(sign: i8) -> usize {
    if sign >= 0 {
        0
    } else {
        1
    }
}

/// Map a `{0,1}` outcome label to its `±1` value.
pub fn bit_to_sign(bit: usize) -> i8 {
    if bit == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundProvenance {
    /// Obtained by exhaustive enumeration of deterministic strategies.
    Exact,
    /// Closed form extrapolated beyond the enumeration limit.
    Conjectured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalBound {
    pub value: Rational64,
    pub provenance: BoundProvenance,
}

impl LocalBound {
    pub fn exact(value: Rational64) -> Self {
        Self {
            value,
            provenance: BoundProvenance::Exact,
        }
    }

    pub fn conjectured(value: Rational64) -> Self {
        Self {
            value,
            provenance: BoundProvenance::Conjectured,
        }
    }

    pub fn as_f64(&self) -> f64 {
        rational_to_f64(self.value)
    }

    pub fn is_conjectured(&self) -> bool {
        self.provenance == BoundProvenance::Conjectured
    }
}

pub(crate) fn rational_to_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Scale a list of rationals to integers by the lcm of their denominators.
/// Returns the integer list and the common scale.
pub(crate) fn integer_scaled(coeffs: &[Rational64]) -> Result<(Vec<i64>, i64)> {
    let scale = coeffs.iter().fold(1i64, |acc, c| acc.lcm(c.denom()));
    let mut out = Vec::with_capacity(coeffs.len());
    let mut total: i128 = 0;
    for c in coeffs {
        let v = c.numer().checked_mul(scale / c.denom()).ok_or_else(|| {
            BellError::TooLarge("coefficient overflow after scaling to integers".into())
        })?;
        total += (v as i128).abs();
        out.push(v);
    }
    // every partial sum during enumeration is bounded by the l1 norm
    if total > (i64::MAX / 4) as i128 {
        return Err(BellError::TooLarge(
            "coefficient magnitudes too large for exact enumeration".into(),
        ));
    }
    Ok((out, scale))
}

/// A full-correlation bipartite inequality `sum_xy M_xy E(x,y) <= S_lhv`.
///
/// Rows index Alice's inputs, columns Bob's inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationInequality {
    name: String,
    m_a: usize,
    m_b: usize,
    coeffs: Vec<Rational64>,
    bound: Option<LocalBound>,
}

impl CorrelationInequality {
    pub fn new(name: impl Into<String>, rows: Vec<Vec<Rational64>>) -> Result<Self> {
        let m_a = rows.len();
        if m_a == 0 {
            return Err(BellError::Invalid("correlation matrix has no rows".into()));
        }
        let m_b = rows[0].len();
        if m_b == 0 {
            return Err(BellError::Invalid(
                "correlation matrix has no columns".into(),
            ));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != m_b) {
            return Err(BellError::Dimension(format!(
                "row {bad} has {} entries, expected {m_b}",
                rows[bad].len()
            )));
        }
        Ok(Self {
            name: name.into(),
            m_a,
            m_b,
            coeffs: rows.into_iter().flatten().collect(),
            bound: None,
        })
    }

    pub fn from_integers(name: impl Into<String>, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            name,
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational64::from_integer(v)).collect())
                .collect(),
        )
    }

    /// Build from a matrix printed with Bob's inputs as rows.
    pub fn from_bob_major(name: impl Into<String>, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_integers(name, rows)?.transposed()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn m_a(&self) -> usize {
        self.m_a
    }

    pub fn m_b(&self) -> usize {
        self.m_b
    }

    pub fn coeff(&self, x: usize, y: usize) -> Rational64 {
        self.coeffs[x * self.m_b + y]
    }

    /// Row-major coefficients.
    pub fn coeffs(&self) -> &[Rational64] {
        &self.coeffs
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|&c| rational_to_f64(c)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Rational64>> {
        self.coeffs.chunks(self.m_b).map(|r| r.to_vec()).collect()
    }

    /// The matrix with Bob's inputs as rows.
    pub fn bob_major_rows(&self) -> Vec<Vec<Rational64>> {
        (0..self.m_b)
            .map(|y| (0..self.m_a).map(|x| self.coeff(x, y)).collect())
            .collect()
    }

    /// Swap the roles of Alice and Bob. The local bound is unchanged.
    pub fn transposed(&self) -> Result<Self> {
        let mut t = Self::new(self.name.clone(), self.bob_major_rows())?;
        t.bound = self.bound;
        Ok(t)
    }

    pub fn bound(&self) -> Option<LocalBound> {
        self.bound
    }

    pub fn require_bound(&self) -> Result<LocalBound> {
        self.bound
            .ok_or_else(|| BellError::MissingBound(self.name.clone()))
    }

    pub fn with_bound(mut self, bound: LocalBound) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn clear_bound(&mut self) {
        self.bound = None;
    }

    /// Multiply every coefficient (and the bound, if any) by `factor > 0`.
    pub fn scaled(&self, factor: Rational64) -> Result<Self> {
        if !factor.is_positive() {
            return Err(BellError::Invalid("scale factor must be positive".into()));
        }
        Ok(Self {
            name: self.name.clone(),
            m_a: self.m_a,
            m_b: self.m_b,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
            bound: self.bound.map(|b| LocalBound {
                value: b.value * factor,
                provenance: b.provenance,
            }),
        })
    }

    /// Probability-form embedding `C_ab^xy = M_xy * s(a) s(b)` with `s` the
    /// `{0,1} -> ±1` bijection. The bound carries over unchanged.
    pub fn to_probability(&self) -> ProbabilityInequality {
        let mut coeffs = vec![Rational64::zero(); 4 * self.m_a * self.m_b];
        for a in 0..2 {
            for b in 0..2 {
                let sign = i64::from(bit_to_sign(a) * bit_to_sign(b));
                for x in 0..self.m_a {
                    for y in 0..self.m_b {
                        let idx = ((a * 2 + b) * self.m_a + x) * self.m_b + y;
                        coeffs[idx] = self.coeff(x, y) * sign;
                    }
                }
            }
        }
        ProbabilityInequality {
            name: self.name.clone(),
            n_a: self.m_a,
            n_b: self.m_b,
            k_a: 2,
            k_b: 2,
            coeffs,
            bound: self.bound,
        }
    }
}

/// A bipartite inequality `sum C_ab^xy p(a,b|x,y) <= S_lhv` over a dense
/// coefficient tensor indexed `(a, b, x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityInequality {
    name: String,
    n_a: usize,
    n_b: usize,
    k_a: usize,
    k_b: usize,
    coeffs: Vec<Rational64>,
    bound: Option<LocalBound>,
}

impl ProbabilityInequality {
    /// `coeffs` is flat, ordered as `((a * k_b + b) * n_a + x) * n_b + y`.
    pub fn new(
        name: impl Into<String>,
        (n_a, n_b): (usize, usize),
        (k_a, k_b): (usize, usize),
        coeffs: Vec<Rational64>,
    ) -> Result<Self> {
        if n_a == 0 || n_b == 0 || k_a == 0 || k_b == 0 {
            return Err(BellError::Invalid(
                "input and outcome counts must be positive".into(),
            ));
        }
        let expected = k_a * k_b * n_a * n_b;
        if coeffs.len() != expected {
            return Err(BellError::Dimension(format!(
                "coefficient tensor has {} entries, expected {expected}",
                coeffs.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            n_a,
            n_b,
            k_a,
            k_b,
            coeffs,
            bound: None,
        })
    }

    /// Build from a closure evaluated at every `(a, b, x, y)`.
    pub fn from_fn(
        name: impl Into<String>,
        inputs: (usize, usize),
        outcomes: (usize, usize),
        mut f: impl FnMut(usize, usize, usize, usize) -> Rational64,
    ) -> Result<Self> {
        let (n_a, n_b) = inputs;
        let (k_a, k_b) = outcomes;
        let mut coeffs = Vec::with_capacity(k_a * k_b * n_a * n_b);
        for a in 0..k_a {
            for b in 0..k_b {
                for x in 0..n_a {
                    for y in 0..n_b {
                        coeffs.push(f(a, b, x, y));
                    }
                }
            }
        }
        Self::new(name, inputs, outcomes, coeffs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn k_a(&self) -> usize {
        self.k_a
    }

    pub fn k_b(&self) -> usize {
        self.k_b
    }

    pub fn index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        ((a * self.k_b + b) * self.n_a + x) * self.n_b + y
    }

    pub fn coeff(&self, a: usize, b: usize, x: usize, y: usize) -> Rational64 {
        self.coeffs[self.index(a, b, x, y)]
    }

    pub fn coeffs(&self) -> &[Rational64] {
        &self.coeffs
    }

    pub fn bound(&self) -> Option<LocalBound> {
        self.bound
    }

    pub fn require_bound(&self) -> Result<LocalBound> {
        self.bound
            .ok_or_else(|| BellError::MissingBound(self.name.clone()))
    }

    pub fn with_bound(mut self, bound: LocalBound) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn clear_bound(&mut self) {
        self.bound = None;
    }
}

/// Either inequality form, as read from an inequality file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyInequality {
    Correlation(CorrelationInequality),
    Probability(ProbabilityInequality),
}

impl AnyInequality {
    pub fn name(&self) -> &str {
        match self {
            AnyInequality::Correlation(c) => c.name(),
            AnyInequality::Probability(p) => p.name(),
        }
    }

    pub fn bound(&self) -> Option<LocalBound> {
        match self {
            AnyInequality::Correlation(c) => c.bound(),
            AnyInequality::Probability(p) => p.bound(),
        }
    }

    pub fn as_correlation(&self) -> Result<&CorrelationInequality> {
        match self {
            AnyInequality::Correlation(c) => Ok(c),
            AnyInequality::Probability(p) => Err(BellError::Invalid(format!(
                "`{}` is a probability-form inequality; a correlation inequality is required",
                p.name()
            ))),
        }
    }
}

impl From<CorrelationInequality> for AnyInequality {
    fn from(c: CorrelationInequality) -> Self {
        AnyInequality::Correlation(c)
    }
}

impl From<ProbabilityInequality> for AnyInequality {
    fn from(p: ProbabilityInequality) -> Self {
        AnyInequality::Probability(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_bijection() {
        assert_eq!(sign_to_bit(1), 0);
        assert_eq!(sign_to_bit(-1), 1);
        assert_eq!(bit_to_sign(sign_to_bit(-1)), -1);
        assert_eq!(bit_to_sign(sign_to_bit(1)), 1);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = CorrelationInequality::from_integers("x", &[vec![1, 1], vec![1]]).unwrap_err();
        assert!(matches!(err, BellError::Dimension(_)));
        assert!(CorrelationInequality::from_integers("x", &[]).is_err());
    }

    #[test]
    fn tensor_shape_checked() {
        let err = ProbabilityInequality::new("p", (2, 2), (2, 2), vec![Rational64::zero(); 15])
            .unwrap_err();
        assert!(matches!(err, BellError::Dimension(_)));
    }

    #[test]
    fn transpose_keeps_entries() {
        let c =
            CorrelationInequality::from_bob_major("t", &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert_eq!((c.m_a(), c.m_b()), (3, 2));
        assert_eq!(c.coeff(2, 1), Rational64::from_integer(6));
        assert_eq!(c.bob_major_rows()[0][1], Rational64::from_integer(2));
    }

    #[test]
    fn integer_scaling_uses_lcm() {
        let (ints, scale) = integer_scaled(&[
            Rational64::new(1, 2),
            Rational64::new(2, 3),
            Rational64::from(1),
        ])
        .unwrap();
        assert_eq!(scale, 6);
        assert_eq!(ints, vec![3, 4, 6]);
    }
}
