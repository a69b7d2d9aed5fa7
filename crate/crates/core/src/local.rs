//! Exact local bounds and facet certification.
//!
//! Local bounds are maxima over deterministic strategies, computed in exact
//! integer arithmetic after scaling coefficients by the lcm of their
//! denominators. Facet status is decided by the exact affine rank of the
//! saturating vertices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BellError, Result};
use crate::inequality::{
    bit_to_sign, integer_scaled, AnyInequality, CorrelationInequality, ProbabilityInequality,
};

/// Largest side enumerated by [`local_bound_correlation`].
pub const MAX_CORRELATION_SIDE: usize = 30;
/// Largest Alice strategy space for [`local_bound_probability`].
pub const MAX_PROBABILITY_STRATEGIES: u64 = 10_000_000;
/// Largest number of coefficient reads (`strategies · n_b · k_b · n_a`).
pub const MAX_PROBABILITY_WORK: u64 = 1_000_000_000;
/// Largest vertex count for [`facet_check`].
pub const MAX_FACET_VERTICES: u64 = 1 << 26;

/// Gray-code chunks are split on this many high bits.
const CHUNK_BITS: usize = 8;

/// `max_b sum_x |sum_y M_xy b_y|` over `b in {±1}^{m}`, enumerating the smaller
/// side. Global sign flip symmetry halves the space; each chunk walks a
/// Gray code so every step updates the row sums with one column.
pub fn local_bound_correlation(ineq: &CorrelationInequality) -> Result<Rational64> {
    let (ints, scale) = integer_scaled(ineq.coeffs())?;
    let (rows, cols) = (ineq.m_a(), ineq.m_b());
    // columns[j] holds the coefficients paired with the enumerated variable j
    let (outer, enumerated, columns) = if cols <= rows {
        let columns: Vec<Vec<i64>> = (0..cols)
            .map(|y| (0..rows).map(|x| ints[x * cols + y]).collect())
            .collect();
        (rows, cols, columns)
    } else {
        let columns: Vec<Vec<i64>> = (0..rows)
            .map(|x| ints[x * cols..(x + 1) * cols].to_vec())
            .collect();
        (cols, rows, columns)
    };
    if enumerated > MAX_CORRELATION_SIDE {
        return Err(BellError::TooLarge(format!(
            "{enumerated} inputs on the smaller side exceeds the enumeration limit of \
             {MAX_CORRELATION_SIDE}; use a family closed form instead"
        )));
    }
    let best = max_abs_row_sum(outer, &columns);
    Ok(Rational64::new(best, scale))
}

fn max_abs_row_sum(outer: usize, columns: &[Vec<i64>]) -> i64 {
    let m = columns.len();
    // the last variable is pinned to +1
    let free = m - 1;
    let chunk_bits = free.min(CHUNK_BITS);
    let low_bits = free - chunk_bits;
    (0u64..1u64 << chunk_bits)
        .into_par_iter()
        .map(|chunk| {
            // starting assignment: low bits all +1, high bits from the chunk index
            let mut signs = vec![1i64; m];
            for k in 0..chunk_bits {
                if chunk >> k & 1 == 1 {
                    signs[low_bits + k] = -1;
                }
            }
            let mut sums = vec![0i64; outer];
            for (j, col) in columns.iter().enumerate() {
                for (s, &c) in sums.iter_mut().zip(col) {
                    *s += signs[j] * c;
                }
            }
            let mut best: i64 = sums.iter().map(|s| s.abs()).sum();
            for step in 1u64..1u64 << low_bits {
                let j = step.trailing_zeros() as usize;
                let delta = -2 * signs[j];
                signs[j] = -signs[j];
                let mut value = 0i64;
                for (s, &c) in sums.iter_mut().zip(&columns[j]) {
                    *s += delta * c;
                    value += s.abs();
                }
                best = best.max(value);
            }
            best
        })
        .max()
        .unwrap_or(0)
}

/// Maximum over Alice's deterministic strategies of
/// `sum_y max_b sum_x C[a(x), b, x, y]`; Bob answers each input optimally.
pub fn local_bound_probability(ineq: &ProbabilityInequality) -> Result<Rational64> {
    let (n_a, n_b, k_a, k_b) = (ineq.n_a(), ineq.n_b(), ineq.k_a(), ineq.k_b());
    let strategies = (k_a as u64)
        .checked_pow(n_a as u32)
        .filter(|&s| s <= MAX_PROBABILITY_STRATEGIES)
        .ok_or_else(|| {
            BellError::TooLarge(format!(
                "{k_a}^{n_a} Alice strategies exceeds the limit of {MAX_PROBABILITY_STRATEGIES}"
            ))
        })?;
    let work = [n_b, k_b, n_a]
        .iter()
        .try_fold(strategies, |acc, &f| acc.checked_mul(f as u64))
        .filter(|&w| w <= MAX_PROBABILITY_WORK);
    if work.is_none() {
        return Err(BellError::TooLarge(format!(
            "{strategies} Alice strategies against {n_b} Bob inputs exceeds the work limit of \
             {MAX_PROBABILITY_WORK}"
        )));
    }
    let (ints, scale) = integer_scaled(ineq.coeffs())?;
    let best = (0..strategies)
        .into_par_iter()
        .map(|code| {
            let alice = decode_mixed_radix(code, k_a, n_a);
            (0..n_b)
                .map(|y| {
                    (0..k_b)
                        .map(|b| {
                            (0..n_a)
                                .map(|x| ints[ineq.index(alice[x], b, x, y)])
                                .sum::<i64>()
                        })
                        .max()
                        .unwrap_or(0)
                })
                .sum::<i64>()
        })
        .max()
        .unwrap_or(0);
    Ok(Rational64::new(best, scale))
}

/// Digits of `code` in base `radix`, least significant first, `len` digits.
pub(crate) fn decode_mixed_radix(mut code: u64, radix: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % radix as u64) as usize);
        code /= radix as u64;
    }
    out
}

/// Which coordinates embed the local polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeSpace {
    /// Marginals and correlators (or the reduced probabilities, last outcome dropped).
    Full,
    /// Correlators only.
    Correlation,
}

impl std::str::FromStr for PolytopeSpace {
    type Err = BellError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(PolytopeSpace::Full),
            "correlation" => Ok(PolytopeSpace::Correlation),
            other => Err(BellError::Parse(format!(
                "unknown polytope space `{other}` (expected full|correlation)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetReport {
    pub is_facet: bool,
    pub polytope_dim: usize,
    #[serde(rename = "saturating_vertices")]
    pub saturating_vertex_count: usize,
    pub affine_rank: usize,
    pub space: PolytopeSpace,
}

/// Decide whether the inequality defines a facet of the local polytope.
///
/// Correlation inequalities may be checked in either space; probability-form
/// inequalities only in [`PolytopeSpace::Full`], using reduced
/// coordinates.
pub fn facet_check(ineq: &AnyInequality, space: PolytopeSpace) -> Result<FacetReport> {
    match ineq {
        AnyInequality::Correlation(c) => facet_check_correlation(c, space),
        AnyInequality::Probability(p) => {
            if space != PolytopeSpace::Full {
                return Err(BellError::Invalid(
                    "probability-form inequalities are checked in the full space only".into(),
                ));
            }
            facet_check_probability(p)
        }
    }
}

pub fn facet_check_correlation(
    ineq: &CorrelationInequality,
    space: PolytopeSpace,
) -> Result<FacetReport> {
    let bound = ineq.require_bound()?;
    let (m_a, m_b) = (ineq.m_a(), ineq.m_b());
    let bits = m_a + m_b;
    if bits as u32 > MAX_FACET_VERTICES.trailing_zeros() {
        return Err(BellError::TooLarge(format!(
            "2^{bits} vertices exceeds the facet-check limit of 2^26"
        )));
    }
    let (ints, scale) = integer_scaled(ineq.coeffs())?;
    let target = bound.value * scale;
    if !target.is_integer() {
        // a bound not attainable by any integer combination can never be saturated
        return Ok(FacetReport {
            is_facet: false,
            polytope_dim: correlation_space_dim(m_a, m_b, space),
            saturating_vertex_count: 0,
            affine_rank: 0,
            space,
        });
    }
    let target = target.to_integer();

    let saturating: Vec<Vec<i64>> = (0u64..1u64 << bits)
        .into_par_iter()
        .filter_map(|code| {
            let a: Vec<i64> = (0..m_a).map(|x| sign_of_bit(code, x)).collect();
            let b: Vec<i64> = (0..m_b).map(|y| sign_of_bit(code, m_a + y)).collect();
            let mut value = 0i64;
            for x in 0..m_a {
                for y in 0..m_b {
                    value += ints[x * m_b + y] * a[x] * b[y];
                }
            }
            if value != target {
                return None;
            }
            let mut point = Vec::with_capacity(correlation_space_dim(m_a, m_b, space));
            if space == PolytopeSpace::Full {
                point.extend(&a);
                point.extend(&b);
            }
            for &ax in &a {
                for &by in &b {
                    point.push(ax * by);
                }
            }
            Some(point)
        })
        .collect();

    Ok(report(
        saturating,
        correlation_space_dim(m_a, m_b, space),
        space,
    ))
}

fn sign_of_bit(code: u64, bit: usize) -> i64 {
    i64::from(bit_to_sign((code >> bit & 1) as usize))
}

fn correlation_space_dim(m_a: usize, m_b: usize, space: PolytopeSpace) -> usize {
    match space {
        PolytopeSpace::Full => m_a * m_b + m_a + m_b,
        PolytopeSpace::Correlation => m_a * m_b,
    }
}

/// Full-space check in reduced probability coordinates: `p_A(a|x)` and `p_B(b|y)`
/// for all but the last outcome, and `p(a,b|x,y)` for all but the last
/// outcome on each side.
pub fn facet_check_probability(ineq: &ProbabilityInequality) -> Result<FacetReport> {
    let bound = ineq.require_bound()?;
    let (n_a, n_b, k_a, k_b) = (ineq.n_a(), ineq.n_b(), ineq.k_a(), ineq.k_b());
    let alice_count = (k_a as u64).checked_pow(n_a as u32);
    let bob_count = (k_b as u64).checked_pow(n_b as u32);
    let total = alice_count
        .zip(bob_count)
        .and_then(|(a, b)| a.checked_mul(b))
        .filter(|&t| t <= MAX_FACET_VERTICES)
        .ok_or_else(|| {
            BellError::TooLarge("vertex count exceeds the facet-check limit of 2^26".into())
        })?;
    let alice_count = alice_count.unwrap_or(0);
    let dim = (n_a * (k_a - 1) + 1) * (n_b * (k_b - 1) + 1) - 1;
    let (ints, scale) = integer_scaled(ineq.coeffs())?;
    let target = bound.value * scale;
    if !target.is_integer() {
        return Ok(FacetReport {
            is_facet: false,
            polytope_dim: dim,
            saturating_vertex_count: 0,
            affine_rank: 0,
            space: PolytopeSpace::Full,
        });
    }
    let target = target.to_integer();

    let saturating: Vec<Vec<i64>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let alice = decode_mixed_radix(code % alice_count, k_a, n_a);
            let bob = decode_mixed_radix(code / alice_count, k_b, n_b);
            let value: i64 = (0..n_a)
                .flat_map(|x| (0..n_b).map(move |y| (x, y)))
                .map(|(x, y)| ints[ineq.index(alice[x], bob[y], x, y)])
                .sum();
            if value != target {
                return None;
            }
            let mut point = Vec::with_capacity(dim);
            for &ax in &alice {
                for a in 0..k_a - 1 {
                    point.push(i64::from(ax == a));
                }
            }
            for &by in &bob {
                for b in 0..k_b - 1 {
                    point.push(i64::from(by == b));
                }
            }
            for &ax in &alice {
                for &by in &bob {
                    for a in 0..k_a - 1 {
                        for b in 0..k_b - 1 {
                            point.push(i64::from(ax == a && by == b));
                        }
                    }
                }
            }
            Some(point)
        })
        .collect();

    Ok(report(saturating, dim, PolytopeSpace::Full))
}

fn report(saturating: Vec<Vec<i64>>, polytope_dim: usize, space: PolytopeSpace) -> FacetReport {
    let affine_rank = exact_affine_rank(&saturating);
    FacetReport {
        is_facet: affine_rank + 1 == polytope_dim,
        polytope_dim,
        saturating_vertex_count: saturating.len(),
        affine_rank,
        space,
    }
}

/// Dimension of the affine hull of `points`, by fraction-free elimination
/// over the integers. Each reduced row is divided by its content, so entries
/// stay small; no floating point is involved.
pub fn exact_affine_rank(points: &[Vec<i64>]) -> usize {
    let Some((origin, rest)) = points.split_first() else {
        return 0;
    };
    let width = origin.len();
    // (pivot column, row) with zeros at every earlier pivot
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for p in rest {
        if basis.len() == width {
            break;
        }
        let mut row: Vec<BigInt> = p
            .iter()
            .zip(origin)
            .map(|(&v, &o)| BigInt::from(v - o))
            .collect();
        for (pivot, brow) in &basis {
            if row[*pivot].is_zero() {
                continue;
            }
            let factor = row[*pivot].clone();
            let lead = &brow[*pivot];
            for (r, b) in row.iter_mut().zip(brow) {
                *r = &*r * lead - &factor * b;
            }
            normalize_content(&mut row);
        }
        if let Some(pivot) = row.iter().position(|v| !v.is_zero()) {
            basis.push((pivot, row));
        }
    }
    basis.len()
}

fn normalize_content(row: &mut [BigInt]) {
    let g = row
        .iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g > BigInt::from(1) {
        for v in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Sanity check of an attached bound against enumeration.
pub fn verify_bound(ineq: &CorrelationInequality) -> Result<bool> {
    let b = ineq.require_bound()?;
    Ok(local_bound_correlation(ineq)? == b.value)
}

/// Signed `Σ M_xy a_x b_y` of a `±1` assignment, exact.
pub fn correlation_value(ineq: &CorrelationInequality, alice: &[i8], bob: &[i8]) -> Rational64 {
    let mut total = Rational64::zero();
    for (x, &a) in alice.iter().enumerate() {
        for (y, &b) in bob.iter().enumerate() {
            total += ineq.coeff(x, y) * i64::from(a * b);
        }
    }
    total
}
