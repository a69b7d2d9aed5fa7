//! The guessing game with a joker.
//!
//! Alice receives `x ∈ {0..n-1}` and answers `a ∈ {0..m-1}`; Bob receives
//! `n` symbols `y_0..y_{n-1}`, each in `{0..m-1}`, and answers `b ∈ {0,1}`.
//! When `b = 1` the round scores `+1` if `a = y_x` and `-1` otherwise; `b = 0`
//! voids it. Bob's input index enumerates the tuples in base-`m`
//! lexicographic order, `y_0` most significant.

use num_rational::Rational64;
use serde::Serialize;

use crate::behavior::evaluate_probability;
use crate::error::{BellError, Result};
use crate::inequality::{CorrelationInequality, LocalBound, ProbabilityInequality};
use crate::local::{local_bound_correlation, local_bound_probability};
use crate::quantum::{
    behavior_from_quantum, intermediate_projector, maximally_entangled, mub_pair, GeneralState,
    ProjectiveMeasurementSet,
};

pub const MAX_INEQUALITY_INPUTS: u64 = 100_000;
pub const MAX_ORACLE_INPUTS: u64 = 10_000;
pub const MAX_QUANTUM_ALPHABET: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShbGame {
    pub n: usize,
    pub m: usize,
}

impl ShbGame {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 1 || m < 2 {
            return Err(BellError::Invalid(format!(
                "game needs n >= 1 and m >= 2, got n={n}, m={m}"
            )));
        }
        Ok(Self { n, m })
    }

    /// `m^n`, or `None` on overflow.
    pub fn bob_inputs(&self) -> Option<u64> {
        (self.m as u64).checked_pow(self.n as u32)
    }

    /// Symbols of Bob's input `index`, `y_0` first.
    pub fn symbols(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = rest % self.m;
            rest /= self.m;
        }
        out
    }

    fn limited_inputs(&self, limit: u64) -> Result<usize> {
        self.bob_inputs()
            .filter(|&c| c <= limit)
            .map(|c| c as usize)
            .ok_or_else(|| {
                BellError::TooLarge(format!(
                    "{}^{} Bob inputs exceeds the limit of {limit}",
                    self.m, self.n
                ))
            })
    }
}

/// The game as a probability-form inequality (Alice: `n` inputs, `m`
/// outcomes; Bob: `m^n` inputs, 2 outcomes). The local bound is attached by
/// enumeration when the strategy space allows it.
pub fn shb_inequality(n: usize, m: usize) -> Result<ProbabilityInequality> {
    let game = ShbGame::new(n, m)?;
    let inputs = game.limited_inputs(MAX_INEQUALITY_INPUTS)?;
    let tuples: Vec<Vec<usize>> = (0..inputs).map(|y| game.symbols(y)).collect();
    let ineq = ProbabilityInequality::from_fn(
        format!("SHB({n},{m})"),
        (n, inputs),
        (m, 2),
        |a, b, x, y| {
            if b == 0 {
                Rational64::from(0)
            } else if tuples[y][x] == a {
                Rational64::from(1)
            } else {
                Rational64::from(-1)
            }
        },
    )?;
    match local_bound_probability(&ineq) {
        Ok(bound) => Ok(ineq.with_bound(LocalBound::exact(bound))),
        Err(BellError::TooLarge(_)) => Ok(ineq),
        Err(e) => Err(e),
    }
}

/// `Σ_{r=0}^{⌊(n-1)/2⌋} (n - 2r) C(n, r)`
pub fn shb_local_formula(n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    (0..=(n - 1) / 2)
        .map(|r| (n - 2 * r) as u128 * binomial(n, r))
        .sum()
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Exhaustive local optimum, straight from the game rules: every Alice
/// strategy, and for each of Bob's inputs the better of voiding or playing.
pub fn shb_local_oracle(n: usize, m: usize) -> Result<i64> {
    let game = ShbGame::new(n, m)?;
    let inputs = game.limited_inputs(MAX_ORACLE_INPUTS)?;
    let strategies = inputs; // m^n Alice strategies as well
    let mut best = i64::MIN;
    for s in 0..strategies {
        let guess = game.symbols(s);
        let total: i64 = (0..inputs)
            .map(|y| {
                let tuple = game.symbols(y);
                let score: i64 = (0..n)
                    .map(|x| if guess[x] == tuple[x] { 1 } else { -1 })
                    .sum();
                score.max(0)
            })
            .sum();
        best = best.max(total);
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct ShbQuantum {
    pub score: f64,
    pub state: GeneralState,
    pub alice: ProjectiveMeasurementSet,
    pub bob: ProjectiveMeasurementSet,
}

/// The two-input strategy: a maximally entangled pair of `m`-level systems,
/// Alice measuring the computational or Fourier basis (complex conjugated,
/// matching the `Σ|jj>` convention), and Bob projecting on the state midway
/// between `e_{y_0}` and `f_{y_1}`, answering 1 on success.
pub fn shb_quantum_score(m: usize) -> Result<ShbQuantum> {
    if !(2..=MAX_QUANTUM_ALPHABET).contains(&m) {
        return Err(BellError::Invalid(format!(
            "alphabet size {m} outside 2..={MAX_QUANTUM_ALPHABET}"
        )));
    }
    let game = ShbGame::new(2, m)?;
    let (computational, fourier) = mub_pair(m)?;
    let alice = ProjectiveMeasurementSet::from_bases(&[computational.clone(), fourier.clone()])?
        .conjugated();
    let projectors = (0..m * m)
        .map(|y| {
            let s = game.symbols(y);
            intermediate_projector(&computational[s[0]], &fourier[s[1]])
        })
        .collect::<Result<Vec<_>>>()?;
    let bob = ProjectiveMeasurementSet::from_binary_projectors(&projectors)?;
    let state = GeneralState::pure(m, m, &maximally_entangled(m))?;
    let behavior = behavior_from_quantum(&state, &alice, &bob)?;
    let ineq = shb_inequality(2, m)?;
    let score = evaluate_probability(&ineq, &behavior)?;
    Ok(ShbQuantum {
        score,
        state,
        alice,
        bob,
    })
}

/// The (n=3, m=2) game rewritten as a 3x4 correlation inequality.
///
/// A tuple and its bitwise complement carry opposite coefficients, so Bob's
/// eight inputs pair into four two-outcome settings: outcome `+1` accepts the
/// even-parity tuple, `-1` its complement. Setting `j`'s coefficient for
/// Alice's input `x` is the score of `a = 0` on the representative, read off
/// the game tensor.
pub fn shb_correlation_form() -> Result<CorrelationInequality> {
    let game = ShbGame::new(3, 2)?;
    let ineq = shb_inequality(3, 2)?;
    let inputs = game.limited_inputs(MAX_INEQUALITY_INPUTS)?;
    let complement = |y: usize| y ^ (inputs - 1);
    let representatives: Vec<usize> = (0..inputs)
        .filter(|&y| game.symbols(y).iter().sum::<usize>() % 2 == 0)
        .collect();
    let mut bob_rows = Vec::with_capacity(representatives.len());
    for &y in &representatives {
        let row: Vec<i64> = (0..game.n)
            .map(|x| {
                let here = ineq.coeff(0, 1, x, y);
                debug_assert_eq!(here, -ineq.coeff(0, 1, x, complement(y)));
                *here.numer()
            })
            .collect();
        bob_rows.push(row);
    }
    let corr = CorrelationInequality::from_bob_major("S3x4", &bob_rows)?;
    let bound = local_bound_correlation(&corr)?;
    Ok(corr.with_bound(LocalBound::exact(bound)))
}
