//! Behaviors `p(a,b|x,y)`, correlator tables and the evaluators that act on them.

use crate::error::{BellError, Result};
use crate::inequality::{
    bit_to_sign, rational_to_f64, sign_to_bit, CorrelationInequality, ProbabilityInequality,
};

const NORMALIZATION_TOL: f64 = 1e-9;
const CLAMP_TOL: f64 = 1e-12;
const CORRELATOR_TOL: f64 = 1e-9;

/// A conditional probability table, stored like [`ProbabilityInequality`]
/// coefficients: flat index `((a * k_b + b) * n_a + x) * n_b + y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    n_a: usize,
    n_b: usize,
    k_a: usize,
    k_b: usize,
    p: Vec<f64>,
}

impl Behavior {
    /// Validates normalization per input pair. Entries in `[-1e-12, 0)` are
    /// clamped to zero; anything more negative is rejected.
    pub fn new(
        (n_a, n_b): (usize, usize),
        (k_a, k_b): (usize, usize),
        mut p: Vec<f64>,
    ) -> Result<Self> {
        if n_a == 0 || n_b == 0 || k_a == 0 || k_b == 0 {
            return Err(BellError::Invalid(
                "input and outcome counts must be positive".into(),
            ));
        }
        if p.len() != n_a * n_b * k_a * k_b {
            return Err(BellError::Dimension(format!(
                "probability table has {} entries, expected {}",
                p.len(),
                n_a * n_b * k_a * k_b
            )));
        }
        for v in p.iter_mut() {
            if !v.is_finite() {
                return Err(BellError::Invalid("non-finite probability".into()));
            }
            if *v < 0.0 {
                if *v < -CLAMP_TOL {
                    return Err(BellError::Invalid(format!("negative probability {v:e}")));
                }
                *v = 0.0;
            }
        }
        let b = Self {
            n_a,
            n_b,
            k_a,
            k_b,
            p,
        };
        for x in 0..n_a {
            for y in 0..n_b {
                let total: f64 = (0..k_a)
                    .flat_map(|a| (0..k_b).map(move |bb| (a, bb)))
                    .map(|(a, bb)| b.prob(a, bb, x, y))
                    .sum();
                if (total - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(BellError::Invalid(format!(
                        "p(.,.|{x},{y}) sums to {total}, not 1"
                    )));
                }
            }
        }
        Ok(b)
    }

    pub fn from_fn(
        inputs: (usize, usize),
        outcomes: (usize, usize),
        mut f: impl FnMut(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let (n_a, n_b) = inputs;
        let (k_a, k_b) = outcomes;
        let mut p = Vec::with_capacity(n_a * n_b * k_a * k_b);
        for a in 0..k_a {
            for b in 0..k_b {
                for x in 0..n_a {
                    for y in 0..n_b {
                        p.push(f(a, b, x, y));
                    }
                }
            }
        }
        Self::new(inputs, outcomes, p)
    }

    pub fn uniform(inputs: (usize, usize), outcomes: (usize, usize)) -> Result<Self> {
        let w = 1.0 / (outcomes.0 * outcomes.1) as f64;
        Self::from_fn(inputs, outcomes, |_, _, _, _| w)
    }

    /// The binary PR-box: `p(a,b|x,y) = 1/2` iff `a xor b = x*y`.
    pub fn pr_box() -> Self {
        Self::from_fn(
            (2, 2),
            (2, 2),
            |a, b, x, y| {
                if (a ^ b) == (x & y) {
                    0.5
                } else {
                    0.0
                }
            },
        )
        .expect("PR-box is a valid behavior")
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

    pub fn prob(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.p[((a * self.k_b + b) * self.n_a + x) * self.n_b + y]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    fn shape(&self) -> (usize, usize, usize, usize) {
        (self.n_a, self.n_b, self.k_a, self.k_b)
    }
}

/// A local deterministic strategy: one outcome label per input on each side.
/// This is a vertex of the local polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl DeterministicStrategy {
    pub fn new(alice: Vec<usize>, bob: Vec<usize>) -> Self {
        Self { alice, bob }
    }

    /// From `±1` outcome assignments.
    pub fn from_signs(alice: &[i8], bob: &[i8]) -> Self {
        Self {
            alice: alice.iter().map(|&s| sign_to_bit(s)).collect(),
            bob: bob.iter().map(|&s| sign_to_bit(s)).collect(),
        }
    }

    pub fn alice_signs(&self) -> Vec<i8> {
        self.alice.iter().map(|&a| bit_to_sign(a)).collect()
    }

    pub fn bob_signs(&self) -> Vec<i8> {
        self.bob.iter().map(|&b| bit_to_sign(b)).collect()
    }

    pub fn to_behavior(&self, k_a: usize, k_b: usize) -> Result<Behavior> {
        if let Some(&a) = self.alice.iter().find(|&&a| a >= k_a) {
            return Err(BellError::Invalid(format!(
                "Alice outcome {a} outside 0..{k_a}"
            )));
        }
        if let Some(&b) = self.bob.iter().find(|&&b| b >= k_b) {
            return Err(BellError::Invalid(format!(
                "Bob outcome {b} outside 0..{k_b}"
            )));
        }
        Behavior::from_fn(
            (self.alice.len(), self.bob.len()),
            (k_a, k_b),
            |a, b, x, y| {
                if self.alice[x] == a && self.bob[y] == b {
                    1.0
                } else {
                    0.0
                }
            },
        )
    }
}

/// Correlators `E(x,y)` and marginals `A_x`, `B_y` of a binary behavior.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTable {
    m_a: usize,
    m_b: usize,
    e: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl CorrelatorTable {
    /// `e` is row-major `m_a x m_b`. Every `1 + sA_x + tB_y + stE_xy` must be
    /// non-negative (within 1e-9), i.e. the table comes from a behavior.
    pub fn new(m_a: usize, m_b: usize, e: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m_a == 0 || m_b == 0 {
            return Err(BellError::Invalid("empty correlator table".into()));
        }
        if e.len() != m_a * m_b || a.len() != m_a || b.len() != m_b {
            return Err(BellError::Dimension(format!(
                "correlator table expects {}+{}+{} entries, got {}+{}+{}",
                m_a * m_b,
                m_a,
                m_b,
                e.len(),
                a.len(),
                b.len()
            )));
        }
        for x in 0..m_a {
            for y in 0..m_b {
                let exy = e[x * m_b + y];
                for s in [1.0, -1.0] {
                    for t in [1.0, -1.0] {
                        if 1.0 + s * a[x] + t * b[y] + s * t * exy < -CORRELATOR_TOL {
                            return Err(BellError::Invalid(format!(
                                "correlators at ({x},{y}) are not realizable by any behavior"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self { m_a, m_b, e, a, b })
    }

    /// Zero marginals, given correlators.
    pub fn unbiased(rows: &[Vec<f64>]) -> Result<Self> {
        let m_a = rows.len();
        let m_b = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m_b) {
            return Err(BellError::Dimension("ragged correlator rows".into()));
        }
        Self::new(m_a, m_b, rows.concat(), vec![0.0; m_a], vec![0.0; m_b])
    }

    pub fn m_a(&self) -> usize {
        self.m_a
    }

    pub fn m_b(&self) -> usize {
        self.m_b
    }

    pub fn e(&self, x: usize, y: usize) -> f64 {
        self.e[x * self.m_b + y]
    }

    pub fn correlators(&self) -> &[f64] {
        &self.e
    }

    pub fn alice_marginals(&self) -> &[f64] {
        &self.a
    }

    pub fn bob_marginals(&self) -> &[f64] {
        &self.b
    }
}

pub fn evaluate_correlation(ineq: &CorrelationInequality, table: &CorrelatorTable) -> Result<f64> {
    if ineq.m_a() != table.m_a || ineq.m_b() != table.m_b {
        return Err(BellError::Dimension(format!(
            "inequality is {}x{}, correlator table is {}x{}",
            ineq.m_a(),
            ineq.m_b(),
            table.m_a,
            table.m_b
        )));
    }
    Ok(ineq
        .coeffs()
        .iter()
        .zip(&table.e)
        .map(|(&c, &e)| rational_to_f64(c) * e)
        .sum())
}

pub fn evaluate_probability(ineq: &ProbabilityInequality, behavior: &Behavior) -> Result<f64> {
    let shape = (ineq.n_a(), ineq.n_b(), ineq.k_a(), ineq.k_b());
    if shape != behavior.shape() {
        return Err(BellError::Dimension(format!(
            "inequality shape (nA,nB,kA,kB)={shape:?} does not match behavior {:?}",
            behavior.shape()
        )));
    }
    Ok(ineq
        .coeffs()
        .iter()
        .zip(&behavior.p)
        .map(|(&c, &p)| rational_to_f64(c) * p)
        .sum())
}

/// `E(x,y) = p(a=b|x,y) - p(a!=b|x,y)` and the `±1` marginals.
pub fn correlators_from_behavior(b: &Behavior) -> Result<CorrelatorTable> {
    if b.k_a != 2 || b.k_b != 2 {
        return Err(BellError::Invalid(format!(
            "correlators need binary outcomes, got k_a={}, k_b={}",
            b.k_a, b.k_b
        )));
    }
    let (m_a, m_b) = (b.n_a, b.n_b);
    let mut e = vec![0.0; m_a * m_b];
    let mut a_marg = vec![0.0; m_a];
    let mut b_marg = vec![0.0; m_b];
    for x in 0..m_a {
        for y in 0..m_b {
            let mut exy = 0.0;
            for a in 0..2 {
                for bb in 0..2 {
                    exy += f64::from(bit_to_sign(a) * bit_to_sign(bb)) * b.prob(a, bb, x, y);
                }
            }
            e[x * m_b + y] = exy;
        }
    }
    // marginals are read at a fixed partner input; for non-signaling input any choice agrees
    for (x, slot) in a_marg.iter_mut().enumerate() {
        *slot = (0..2)
            .map(|a| f64::from(bit_to_sign(a)) * (b.prob(a, 0, x, 0) + b.prob(a, 1, x, 0)))
            .sum();
    }
    for (y, slot) in b_marg.iter_mut().enumerate() {
        *slot = (0..2)
            .map(|bb| f64::from(bit_to_sign(bb)) * (b.prob(0, bb, 0, y) + b.prob(1, bb, 0, y)))
            .sum();
    }
    CorrelatorTable::new(m_a, m_b, e, a_marg, b_marg)
}

/// `p(a,b|x,y) = (1 + s(a) A_x + s(b) B_y + s(a)s(b) E_xy) / 4`.
pub fn behavior_from_correlators(t: &CorrelatorTable) -> Result<Behavior> {
    let mut raw = Vec::with_capacity(4 * t.m_a * t.m_b);
    for a in 0..2 {
        for b in 0..2 {
            let (sa, sb) = (f64::from(bit_to_sign(a)), f64::from(bit_to_sign(b)));
            for x in 0..t.m_a {
                for y in 0..t.m_b {
                    let p = (1.0 + sa * t.a[x] + sb * t.b[y] + sa * sb * t.e(x, y)) / 4.0;
                    if p < -1e-9 {
                        return Err(BellError::Invalid(format!(
                            "correlators give negative probability {p:e} at ({x},{y})"
                        )));
                    }
                    raw.push(p.max(0.0));
                }
            }
        }
    }
    Behavior::new((t.m_a, t.m_b), (2, 2), raw)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalingReport {
    pub passes: bool,
    pub max_deviation: f64,
}

/// Largest spread, across the partner's inputs, of any one-sided marginal.
pub fn nonsignaling_check(b: &Behavior, tol: f64) -> SignalingReport {
    let mut worst: f64 = 0.0;
    for x in 0..b.n_a {
        for a in 0..b.k_a {
            let marg: Vec<f64> = (0..b.n_b)
                .map(|y| (0..b.k_b).map(|bb| b.prob(a, bb, x, y)).sum())
                .collect();
            worst = worst.max(spread(&marg));
        }
    }
    for y in 0..b.n_b {
        for bb in 0..b.k_b {
            let marg: Vec<f64> = (0..b.n_a)
                .map(|x| (0..b.k_a).map(|a| b.prob(a, bb, x, y)).sum())
                .collect();
            worst = worst.max(spread(&marg));
        }
    }
    SignalingReport {
        passes: worst <= tol,
        max_deviation: worst,
    }
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}
