//! See-saw maximisation over unit-vector strategies, and the thresholds
//! derived from it: visibility, Werner-state crossing and detection efficiency.
//!
//! For a full-correlation bipartite inequality the quantum value is
//! `max Σ M_xy a_x·b_y` over unit vectors. Fixing one side, the other side's
//! optimum is closed form (`a_x ∝ Σ_y M_xy b_y`), so alternating the two
//! updates never decreases the value.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behavior::{correlators_from_behavior, evaluate_correlation};
use crate::error::{BellError, Result};
use crate::inequality::CorrelationInequality;
use crate::quantum::{
    behavior_from_quantum, two_qubit_correlators, werner_density, BlochSetting, GeneralState,
    ProjectiveMeasurementSet,
};

/// Slack allowed for floating-point noise in the per-iteration monotonicity check.
const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            tol: 1e-12,
            max_iters: 10_000,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    /// 32 restarts up to ten inputs per side, 128 beyond.
    pub fn for_inequality(ineq: &CorrelationInequality) -> Self {
        let restarts = if ineq.m_a().max(ineq.m_b()) <= 10 {
            32
        } else {
            128
        };
        Self {
            restarts,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(BellError::Invalid("restarts must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(BellError::Invalid("tolerance must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(BellError::Invalid("max_iters must be at least 1".into()));
        }
        Ok(())
    }

    fn rng(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

/// Unit vectors in `R^d` for each input, with correlators `E = V a_x·b_y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorStrategy {
    pub dim: usize,
    pub a_vectors: Vec<Vec<f64>>,
    pub b_vectors: Vec<Vec<f64>>,
    pub visibility: f64,
}

impl VectorStrategy {
    pub fn new(
        a_vectors: Vec<Vec<f64>>,
        b_vectors: Vec<Vec<f64>>,
        visibility: f64,
    ) -> Result<Self> {
        let dim = a_vectors.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(BellError::Invalid(
                "strategy needs at least one vector".into(),
            ));
        }
        for v in a_vectors.iter().chain(&b_vectors) {
            if v.len() != dim {
                return Err(BellError::Dimension("vectors differ in dimension".into()));
            }
            if (norm(v) - 1.0).abs() > 1e-12 {
                return Err(BellError::Invalid(
                    "strategy vectors must be unit length".into(),
                ));
            }
        }
        if !(0.0..=1.0).contains(&visibility) {
            return Err(BellError::Invalid("visibility outside [0, 1]".into()));
        }
        Ok(Self {
            dim,
            a_vectors,
            b_vectors,
            visibility,
        })
    }

    pub fn correlator(&self, x: usize, y: usize) -> f64 {
        self.visibility * dot(&self.a_vectors[x], &self.b_vectors[y])
    }

    pub fn value(&self, ineq: &CorrelationInequality) -> f64 {
        let m = ineq.coeffs_f64();
        let mb = ineq.m_b();
        (0..ineq.m_a())
            .flat_map(|x| (0..mb).map(move |y| (x, y)))
            .map(|(x, y)| m[x * mb + y] * self.correlator(x, y))
            .sum()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeesawOutcome {
    pub value: f64,
    pub strategy: VectorStrategy,
    /// Value after each full iteration of the winning restart.
    pub trace: Vec<f64>,
    /// Final value of every restart, by restart index.
    pub restart_values: Vec<f64>,
}

struct RestartRun {
    value: f64,
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    trace: Vec<f64>,
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// Best response of one side: `out[i] = normalize(Σ_j w(i, j) other[j])`;
/// a zero sum keeps the previous direction.
fn best_response(
    rows: usize,
    cols: usize,
    weight: impl Fn(usize, usize) -> f64,
    other: &[Vec<f64>],
    out: &mut [Vec<f64>],
) {
    let d = other[0].len();
    for (i, slot) in out.iter_mut().enumerate().take(rows) {
        let mut acc = vec![0.0; d];
        for (j, v) in other.iter().enumerate().take(cols) {
            let w = weight(i, j);
            if w != 0.0 {
                for (s, c) in acc.iter_mut().zip(v) {
                    *s += w * c;
                }
            }
        }
        let n = norm(&acc);
        if n > 1e-300 {
            *slot = acc.into_iter().map(|c| c / n).collect();
        }
    }
}

fn strategy_value(m: &DMatrix<f64>, a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for (x, ax) in a.iter().enumerate() {
        for (y, by) in b.iter().enumerate() {
            total += m[(x, y)] * dot(ax, by);
        }
    }
    total
}

fn run_restart(m: &DMatrix<f64>, d: usize, cfg: &OptimizerConfig, restart: usize) -> RestartRun {
    let (ma, mb) = m.shape();
    let mut rng = cfg.rng(restart);
    let mut a: Vec<Vec<f64>> = (0..ma).map(|_| random_unit(&mut rng, d)).collect();
    let mut b: Vec<Vec<f64>> = (0..mb).map(|_| random_unit(&mut rng, d)).collect();
    let mut value = strategy_value(m, &a, &b);
    let mut trace = Vec::new();
    for _ in 0..cfg.max_iters {
        best_response(ma, mb, |x, y| m[(x, y)], &b, &mut a);
        let half = strategy_value(m, &a, &b);
        best_response(mb, ma, |y, x| m[(x, y)], &a, &mut b);
        let next = strategy_value(m, &a, &b);
        debug_assert!(half >= value - MONOTONE_SLACK * (1.0 + value.abs()));
        debug_assert!(next >= half - MONOTONE_SLACK * (1.0 + half.abs()));
        trace.push(next);
        let improvement = next - value;
        value = next;
        if improvement < cfg.tol {
            break;
        }
    }
    RestartRun { value, a, b, trace }
}

/// Maximise `Σ M_xy a_x·b_y` over unit vectors in `R^d` by alternating
/// closed-form best responses from `cfg.restarts` seeded random starts.
///
/// Restarts run in parallel; the winner is the highest value with ties going
/// to the lowest restart index, so results do not depend on scheduling.
pub fn seesaw_value(
    ineq: &CorrelationInequality,
    d: usize,
    cfg: &OptimizerConfig,
) -> Result<SeesawOutcome> {
    cfg.validate()?;
    if d == 0 {
        return Err(BellError::Invalid(
            "vector dimension must be at least 1".into(),
        ));
    }
    let m = DMatrix::from_row_slice(ineq.m_a(), ineq.m_b(), &ineq.coeffs_f64());
    let runs: Vec<RestartRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(&m, d, cfg, r))
        .collect();
    let restart_values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.value > runs[best].value {
            best = i;
        }
    }
    let winner = runs.into_iter().nth(best).expect("at least one restart");
    Ok(SeesawOutcome {
        value: winner.value,
        strategy: VectorStrategy {
            dim: d,
            a_vectors: winner.a,
            b_vectors: winner.b,
            visibility: 1.0,
        },
        trace: winner.trace,
        restart_values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityResult {
    /// `S_lhv / Q`
    pub visibility: f64,
    pub quantum_value: f64,
    pub local_bound: f64,
    /// The local bound came from a closed form rather than enumeration.
    pub conjectured: bool,
    pub strategy: VectorStrategy,
}

/// Smallest white-noise visibility at which the inequality is still violated.
pub fn visibility_threshold(
    ineq: &CorrelationInequality,
    d: usize,
    cfg: &OptimizerConfig,
) -> Result<VisibilityResult> {
    let bound = ineq.require_bound()?;
    let out = seesaw_value(ineq, d, cfg)?;
    let local = bound.as_f64();
    Ok(VisibilityResult {
        visibility: local / out.value,
        quantum_value: out.value,
        local_bound: local,
        conjectured: bound.is_conjectured(),
        strategy: out.strategy,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub alice_gram: Vec<Vec<f64>>,
    pub bob_gram: Vec<Vec<f64>>,
    /// All vectors, both sides, lie within 1e-6 of one 2-plane through the origin.
    pub planar: bool,
    /// Root of the spectral weight outside the best 2-plane.
    pub out_of_plane: f64,
}

fn gram(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    vectors
        .iter()
        .map(|u| vectors.iter().map(|v| dot(u, v)).collect())
        .collect()
}

pub fn geometry_report(strategy: &VectorStrategy) -> GeometryReport {
    let all: Vec<&Vec<f64>> = strategy
        .a_vectors
        .iter()
        .chain(&strategy.b_vectors)
        .collect();
    let d = strategy.dim;
    let out_of_plane = if d <= 2 || all.len() <= 2 {
        0.0
    } else {
        // scatter matrix Σ v vᵀ; weight beyond the top two eigenvalues
        let mut scatter = DMatrix::<f64>::zeros(d, d);
        for v in &all {
            for i in 0..d {
                for j in 0..d {
                    scatter[(i, j)] += v[i] * v[j];
                }
            }
        }
        let mut eig: Vec<f64> = scatter.symmetric_eigenvalues().iter().cloned().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        eig[2..].iter().map(|e| e.max(0.0)).sum::<f64>().sqrt()
    };
    GeometryReport {
        alice_gram: gram(&strategy.a_vectors),
        bob_gram: gram(&strategy.b_vectors),
        planar: out_of_plane <= 1e-6,
        out_of_plane,
    }
}

/// Per-side detection efficiencies. A missed detection is reported as `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionModel {
    pub eta_a: f64,
    pub eta_b: f64,
}

impl DetectionModel {
    pub fn new(eta_a: f64, eta_b: f64) -> Result<Self> {
        for eta in [eta_a, eta_b] {
            if !(0.0..=1.0).contains(&eta) {
                return Err(BellError::Invalid(format!(
                    "detection efficiency {eta} outside [0, 1]"
                )));
            }
        }
        Ok(Self { eta_a, eta_b })
    }

    pub fn symmetric(eta: f64) -> Result<Self> {
        Self::new(eta, eta)
    }

    /// `E_obs = ηaηb E + ηa(1-ηb) A + (1-ηa)ηb B + (1-ηa)(1-ηb)`
    pub fn observed(&self, e: f64, a: f64, b: f64) -> f64 {
        let (ea, eb) = (self.eta_a, self.eta_b);
        ea * eb * e + ea * (1.0 - eb) * a + (1.0 - ea) * eb * b + (1.0 - ea) * (1.0 - eb)
    }
}

/// Bell value observed with lossy detectors on `cos θ|00> + sin θ|11>`.
pub fn detection_value(
    ineq: &CorrelationInequality,
    theta: f64,
    alice: &[BlochSetting],
    bob: &[BlochSetting],
    model: &DetectionModel,
) -> Result<f64> {
    if alice.len() != ineq.m_a() || bob.len() != ineq.m_b() {
        return Err(BellError::Dimension(format!(
            "inequality is {}x{}, got {} and {} settings",
            ineq.m_a(),
            ineq.m_b(),
            alice.len(),
            bob.len()
        )));
    }
    let m = ineq.coeffs_f64();
    let mb = ineq.m_b();
    let mut total = 0.0;
    for (x, a) in alice.iter().enumerate() {
        for (y, b) in bob.iter().enumerate() {
            let c = two_qubit_correlators(theta, a, b);
            total += m[x * mb + y] * model.observed(c.e, c.a, c.b);
        }
    }
    Ok(total)
}

/// Optimal CHSH-style settings in the x-z plane: Alice at 0 and π/2, Bob at ±π/4.
pub fn chsh_settings() -> (Vec<BlochSetting>, Vec<BlochSetting>) {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    (
        vec![
            BlochSetting::in_xz_plane(0.0),
            BlochSetting::in_xz_plane(FRAC_PI_2),
        ],
        vec![
            BlochSetting::in_xz_plane(FRAC_PI_4),
            BlochSetting::in_xz_plane(-FRAC_PI_4),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EfficiencyShape {
    /// `η_a = η_b = η`
    Symmetric,
    /// `η_a = η` with Bob's efficiency fixed.
    FixedBob(f64),
}

impl EfficiencyShape {
    fn model(&self, eta: f64) -> DetectionModel {
        match *self {
            EfficiencyShape::Symmetric => DetectionModel {
                eta_a: eta,
                eta_b: eta,
            },
            EfficiencyShape::FixedBob(eta_b) => DetectionModel { eta_a: eta, eta_b },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionThreshold {
    pub eta_star: f64,
    /// Angles from +z towards +x of the settings achieving the violation at `eta_star`.
    pub alice_angles: Vec<f64>,
    pub bob_angles: Vec<f64>,
    pub value: f64,
}

struct PlanarSettings {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

/// Coordinate ascent over planar angles. The observed value is affine in
/// `(cos α_x, sin α_x)` for fixed other angles, so each coordinate step is the
/// exact maximiser `atan2(Q, P)`.
fn planar_ascent(
    m: &[f64],
    (ma, mb): (usize, usize),
    theta: f64,
    model: &DetectionModel,
    mut s: PlanarSettings,
    cfg: &OptimizerConfig,
) -> (f64, PlanarSettings) {
    let (sin2, cos2) = ((2.0 * theta).sin(), (2.0 * theta).cos());
    let (ea, eb) = (model.eta_a, model.eta_b);
    let both = ea * eb;
    let value = |s: &PlanarSettings| -> f64 {
        let mut total = 0.0;
        for x in 0..ma {
            let (sa, ca) = s.alpha[x].sin_cos();
            for y in 0..mb {
                let (sb, cb) = s.beta[y].sin_cos();
                let e = ca * cb + sin2 * sa * sb;
                total += m[x * mb + y] * model.observed(e, cos2 * ca, cos2 * cb);
            }
        }
        total
    };
    let mut current = value(&s);
    for _ in 0..cfg.max_iters {
        for x in 0..ma {
            let (mut p, mut q) = (0.0, 0.0);
            for y in 0..mb {
                let (sb, cb) = s.beta[y].sin_cos();
                p += m[x * mb + y] * (both * cb + ea * (1.0 - eb) * cos2);
                q += m[x * mb + y] * both * sin2 * sb;
            }
            if p != 0.0 || q != 0.0 {
                s.alpha[x] = q.atan2(p);
            }
        }
        for y in 0..mb {
            let (mut p, mut q) = (0.0, 0.0);
            for x in 0..ma {
                let (sa, ca) = s.alpha[x].sin_cos();
                p += m[x * mb + y] * (both * ca + (1.0 - ea) * eb * cos2);
                q += m[x * mb + y] * both * sin2 * sa;
            }
            if p != 0.0 || q != 0.0 {
                s.beta[y] = q.atan2(p);
            }
        }
        let next = value(&s);
        let improvement = next - current;
        current = next.max(current);
        if improvement < cfg.tol {
            break;
        }
    }
    (current, s)
}

fn best_planar(
    ineq: &CorrelationInequality,
    theta: f64,
    model: &DetectionModel,
    cfg: &OptimizerConfig,
    warm: Option<&PlanarSettings>,
) -> (f64, PlanarSettings) {
    let m = ineq.coeffs_f64();
    let dims = (ineq.m_a(), ineq.m_b());
    let mut starts: Vec<PlanarSettings> = Vec::with_capacity(cfg.restarts + 1);
    if let Some(w) = warm {
        starts.push(PlanarSettings {
            alpha: w.alpha.clone(),
            beta: w.beta.clone(),
        });
    }
    for r in 0..cfg.restarts {
        let mut rng = cfg.rng(r);
        let tau = std::f64::consts::TAU;
        starts.push(PlanarSettings {
            alpha: (0..dims.0).map(|_| rng.gen::<f64>() * tau).collect(),
            beta: (0..dims.1).map(|_| rng.gen::<f64>() * tau).collect(),
        });
    }
    let runs: Vec<(f64, PlanarSettings)> = starts
        .into_par_iter()
        .map(|s| planar_ascent(&m, dims, theta, model, s, cfg))
        .collect();
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        if r.0 > runs[best].0 {
            best = i;
        }
    }
    runs.into_iter().nth(best).expect("at least one start")
}

/// Maximum over planar settings of [`detection_value`].
pub fn optimized_detection_value(
    ineq: &CorrelationInequality,
    theta: f64,
    model: &DetectionModel,
    cfg: &OptimizerConfig,
) -> Result<(f64, Vec<BlochSetting>, Vec<BlochSetting>)> {
    cfg.validate()?;
    let (value, s) = best_planar(ineq, theta, model, cfg, None);
    Ok((
        value,
        s.alpha
            .iter()
            .map(|&a| BlochSetting::in_xz_plane(a))
            .collect(),
        s.beta
            .iter()
            .map(|&b| BlochSetting::in_xz_plane(b))
            .collect(),
    ))
}

/// Bisection width on `η`.
pub const ETA_TOL: f64 = 1e-6;

/// Smallest efficiency for which optimized settings still violate the bound.
pub fn detection_threshold(
    ineq: &CorrelationInequality,
    theta: f64,
    shape: EfficiencyShape,
    cfg: &OptimizerConfig,
) -> Result<DetectionThreshold> {
    cfg.validate()?;
    if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-15).contains(&theta) {
        return Err(BellError::Invalid(format!(
            "entanglement angle {theta} outside [0, π/4]"
        )));
    }
    if let EfficiencyShape::FixedBob(eta_b) = shape {
        DetectionModel::new(1.0, eta_b)?;
    }
    let bound = ineq.require_bound()?.as_f64();
    let margin = 1e-12 * (1.0 + bound.abs());
    let violates = |v: f64| v > bound + margin;

    let (top, mut warm) = best_planar(ineq, theta, &shape.model(1.0), cfg, None);
    if !violates(top) {
        return Err(BellError::NoViolation(format!(
            "{} is not violated even with perfect detectors (value {top})",
            ineq.name()
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut hi_value = top;
    while hi - lo > ETA_TOL {
        let mid = 0.5 * (lo + hi);
        let (v, s) = best_planar(ineq, theta, &shape.model(mid), cfg, Some(&warm));
        if violates(v) {
            hi = mid;
            hi_value = v;
            warm = s;
        } else {
            lo = mid;
        }
    }
    Ok(DetectionThreshold {
        eta_star: hi,
        alice_angles: warm.alpha,
        bob_angles: warm.beta,
        value: hi_value,
    })
}

/// Bloch settings from a strategy in dimension at most three (zero-padded).
pub fn bloch_settings(strategy: &VectorStrategy) -> Result<(Vec<BlochSetting>, Vec<BlochSetting>)> {
    if strategy.dim > 3 {
        return Err(BellError::Invalid(format!(
            "dimension {} strategy has no Bloch representation",
            strategy.dim
        )));
    }
    let lift = |v: &Vec<f64>| {
        let mut out = [0.0; 3];
        out[..v.len()].copy_from_slice(v);
        BlochSetting::normalized(out)
    };
    Ok((
        strategy.a_vectors.iter().map(lift).collect::<Result<_>>()?,
        strategy.b_vectors.iter().map(lift).collect::<Result<_>>()?,
    ))
}

/// Bell value of a correlation inequality on a two-qubit state, through the
/// Born rule.
pub fn state_bell_value(
    ineq: &CorrelationInequality,
    state: &GeneralState,
    alice: &[BlochSetting],
    bob: &[BlochSetting],
) -> Result<f64> {
    let behavior = behavior_from_quantum(
        state,
        &ProjectiveMeasurementSet::from_bloch(alice)?,
        &ProjectiveMeasurementSet::from_bloch(bob)?,
    )?;
    evaluate_correlation(ineq, &correlators_from_behavior(&behavior)?)
}

/// Optimal Bloch settings for the singlet: see-saw in `R^3`, with Bob's
/// vectors flipped because the singlet has `E = -a·b`.
pub fn singlet_settings(
    ineq: &CorrelationInequality,
    cfg: &OptimizerConfig,
) -> Result<(Vec<BlochSetting>, Vec<BlochSetting>)> {
    let out = seesaw_value(ineq, 3, cfg)?;
    let (alice, bob) = bloch_settings(&out.strategy)?;
    Ok((alice, bob.iter().map(BlochSetting::negated).collect()))
}

/// Optimised Bell value on the Werner state of visibility `w`.
pub fn werner_value(ineq: &CorrelationInequality, w: f64, cfg: &OptimizerConfig) -> Result<f64> {
    let (alice, bob) = singlet_settings(ineq, cfg)?;
    state_bell_value(ineq, &werner_density(w)?, &alice, &bob)
}

/// Werner visibility at which the optimised value crosses the local bound.
pub fn werner_threshold(ineq: &CorrelationInequality, cfg: &OptimizerConfig) -> Result<f64> {
    let bound = ineq.require_bound()?.as_f64();
    let (alice, bob) = singlet_settings(ineq, cfg)?;
    let value = |w: f64| state_bell_value(ineq, &werner_density(w)?, &alice, &bob);
    if value(1.0)? <= bound {
        return Err(BellError::NoViolation(format!(
            "{} is not violated by the singlet",
            ineq.name()
        )));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if value(mid)? > bound {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
