//! Maximizing the Bell value over local measurements for a fixed state.
//!
//! Every setting keeps the spectrum `D = diag(ω^0, …, ω^{d-1})` and is written as
//! `M_s = U_s D U_s†`. Ascent moves act on the left of each frame,
//! `U_s ← exp(i Σ_k x_k G_k) U_s`, with `{G_k}` the `d² - 1` generalized Gell-Mann
//! matrices, so there are `2d(d² - 1)` real coordinates. The gradient at `x = 0` is
//! exact: `∂/∂x_k Tr(M W) = Re(i Tr(G_k [M, W]))`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{expi_hermitian, CMatrix, Ket, RationalPhase};
use crate::operators::{MeasurementSetting, PrimeDim};
use crate::quantum::BellScenario;

/// Schmidt coefficients `c_i >= 0` with `Σ c_i² = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtPoint {
    d: PrimeDim,
    c: Vec<f64>,
}

const SCHMIDT_NORM_TOL: f64 = 1e-10;

impl SchmidtPoint {
    pub fn new(d: PrimeDim, c: Vec<f64>) -> Result<Self> {
        if c.len() != d.size() {
            return Err(Error::DimensionMismatch {
                expected: d.size(),
                found: c.len(),
            });
        }
        if c.iter().any(|&x| x.is_nan() || x < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Schmidt coefficients must be non-negative, got {c:?}"
            )));
        }
        let deviation = (c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs();
        if deviation > SCHMIDT_NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { d, c })
    }

    /// From squared coefficients `c_i²` (a probability vector).
    pub fn from_squares(d: PrimeDim, squares: &[f64]) -> Result<Self> {
        Self::new(d, squares.iter().map(|&s| s.max(0.0).sqrt()).collect())
    }

    /// Normalizes arbitrary non-negative weights.
    pub fn normalized(d: PrimeDim, c: &[f64]) -> Result<Self> {
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidArgument(
                "all Schmidt coefficients are zero".into(),
            ));
        }
        Self::new(d, c.iter().map(|x| x / norm).collect())
    }

    pub fn product(d: PrimeDim) -> Self {
        let mut c = vec![0.0; d.size()];
        c[0] = 1.0;
        Self { d, c }
    }

    pub fn uniform(d: PrimeDim) -> Self {
        Self {
            d,
            c: vec![1.0 / (d.size() as f64).sqrt(); d.size()],
        }
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.c
    }

    pub fn squares(&self) -> Vec<f64> {
        self.c.iter().map(|x| x * x).collect()
    }

    pub fn state(&self) -> Ket {
        schmidt_state(self)
    }

    pub fn entropy(&self) -> f64 {
        entanglement_entropy(self)
    }
}

/// `Σ_i c_i |ii⟩`.
pub fn schmidt_state(pt: &SchmidtPoint) -> Ket {
    let n = pt.d.size();
    let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, &c) in pt.c.iter().enumerate() {
        amps[k * n + k] = Complex64::new(c, 0.0);
    }
    Ket::new(amps)
}

/// `-Σ c_i² log_d c_i²`, with `0 log 0 = 0`; clamped to `[0, 1]`.
pub fn entanglement_entropy(pt: &SchmidtPoint) -> f64 {
    let base = (pt.d.size() as f64).ln();
    let e: f64 =
        pt.c.iter()
            .map(|c| c * c)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.ln() / base)
            .sum();
    e.clamp(0.0, 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub step_init: f64,
    pub gradient_tol: f64,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 20_070_101;

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 3000,
            step_init: 0.1,
            gradient_tol: 1e-8,
            seed: DEFAULT_SEED,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "restarts and max_iterations must be at least 1".into(),
            ));
        }
        if !positive(self.step_init) || !positive(self.gradient_tol) {
            return Err(Error::InvalidArgument(
                "step_init and gradient_tol must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

/// False for NaN as well as non-positive values.
fn positive(x: f64) -> bool {
    x > 0.0
}

/// Stops when one iteration gains less than this.
pub const IMPROVEMENT_TOL: f64 = 1e-12;
const ARMIJO_C: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
const MAX_STEP: f64 = 4.0;

/// Traceless Hermitian basis: generalized Gell-Mann matrices, `Tr(G_a G_b) = 2 δ_ab`.
pub fn gell_mann_generators(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(j, k)] = Complex64::new(1.0, 0.0);
            sym[(k, j)] = Complex64::new(1.0, 0.0);
            out.push(sym);
            let mut anti = CMatrix::zeros(d, d);
            anti[(j, k)] = Complex64::new(0.0, -1.0);
            anti[(k, j)] = Complex64::new(0.0, 1.0);
            out.push(anti);
        }
    }
    for l in 1..d {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(d, d);
        for m in 0..l {
            diag[(m, m)] = Complex64::new(scale, 0.0);
        }
        diag[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
        out.push(diag);
    }
    out
}

/// Frames `U_s` for Alice's settings followed by Bob's.
pub type Frames = Vec<CMatrix>;

/// The Bell value of a fixed bipartite state as a function of the local frames.
#[derive(Clone, Debug)]
pub struct BellObjective {
    d: PrimeDim,
    psi: CMatrix,
    psi_adj: CMatrix,
    generators: Vec<CMatrix>,
}

/// Per-evaluation cache shared by the value and the gradient.
struct Evaluation {
    value: f64,
    /// `alice_powers[n-1][i] = A_i^n`
    alice_powers: Vec<Vec<CMatrix>>,
    bob_powers: Vec<Vec<CMatrix>>,
}

impl BellObjective {
    pub fn new(state: &Ket) -> Result<Self> {
        let n = (state.dim() as f64).sqrt().round() as usize;
        if n * n != state.dim() {
            return Err(Error::InvalidArgument(format!(
                "state dimension {} is not a perfect square",
                state.dim()
            )));
        }
        let d = PrimeDim::new(n as u32)?;
        let deviation = (state.norm() - 1.0).abs();
        if deviation > 1e-10 {
            return Err(Error::NotNormalized { deviation });
        }
        let psi = state.as_bipartite_matrix(n);
        Ok(Self {
            d,
            psi_adj: psi.adjoint(),
            psi,
            generators: gell_mann_generators(n),
        })
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    /// Number of real coordinates, `2d(d² - 1)`.
    pub fn parameter_count(&self) -> usize {
        2 * self.d.size() * self.generators.len()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    fn powers(&self, frame: &CMatrix) -> Vec<CMatrix> {
        let d = self.d;
        let n = d.size();
        let adj = frame.adjoint();
        (1..n as i64)
            .map(|p| {
                let diag: Vec<Complex64> = (0..n as i64).map(|k| d.omega(p * k).eval()).collect();
                let scaled = CMatrix::from_fn(n, n, |r, c| frame[(r, c)] * diag[c]);
                scaled.matmul(&adj)
            })
            .collect()
    }

    fn evaluate(&self, frames: &[CMatrix]) -> Evaluation {
        let d = self.d;
        let n = d.size();
        assert_eq!(frames.len(), 2 * n, "expected 2d frames");
        let per_setting: Vec<Vec<CMatrix>> = frames.iter().map(|f| self.powers(f)).collect();
        let mut alice_powers = vec![Vec::with_capacity(n); n - 1];
        let mut bob_powers = vec![Vec::with_capacity(n); n - 1];
        for (s, powers) in per_setting.into_iter().enumerate() {
            for (p, m) in powers.into_iter().enumerate() {
                if s < n {
                    alice_powers[p].push(m);
                } else {
                    bob_powers[p].push(m);
                }
            }
        }
        let mut value = Complex64::new(0.0, 0.0);
        for (p, (alice, bob)) in alice_powers.iter().zip(&bob_powers).enumerate() {
            for (i, a) in alice.iter().enumerate() {
                let bob_sum = self.weighted_sum(bob, p + 1, i);
                // Tr(Ψ† A Ψ Bsumᵀ) = Σ_kl (Ψ† A Ψ)_kl Bsum_kl
                let x = self.psi_adj.matmul(a).matmul(&self.psi);
                value += x
                    .as_slice()
                    .iter()
                    .zip(bob_sum.as_slice())
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>();
            }
        }
        Evaluation {
            value: value.re / (n - 1) as f64,
            alice_powers,
            bob_powers,
        }
    }

    /// `Σ_m ω^{power·index·m} mats[m]`.
    fn weighted_sum(&self, mats: &[CMatrix], power: usize, index: usize) -> CMatrix {
        let n = self.d.size();
        let mut out = CMatrix::zeros(n, n);
        for (m, mat) in mats.iter().enumerate() {
            out.add_scaled(self.d.omega((power * index * m) as i64).eval(), mat);
        }
        out
    }

    pub fn value(&self, frames: &[CMatrix]) -> f64 {
        self.evaluate(frames).value
    }

    fn gradient_from(&self, ev: &Evaluation) -> Vec<f64> {
        let n = self.d.size();
        let norm = 1.0 / (n - 1) as f64;
        let mut grad = Vec::with_capacity(self.parameter_count());
        // Alice: K_i = Σ_n [A_i^n, Ψ Bsumᵀ Ψ†]
        for i in 0..n {
            let mut k = CMatrix::zeros(n, n);
            for p in 0..n - 1 {
                let bob_sum = self.weighted_sum(&ev.bob_powers[p], p + 1, i);
                let w = self.psi.matmul(&bob_sum.transpose()).matmul(&self.psi_adj);
                let a = &ev.alice_powers[p][i];
                k += &(&a.matmul(&w) - &w.matmul(a));
            }
            self.project(&k, norm, &mut grad);
        }
        // Bob: K_j = Σ_n [B_j^n, (Ψ† Asum Ψ)ᵀ]
        for j in 0..n {
            let mut k = CMatrix::zeros(n, n);
            for p in 0..n - 1 {
                let alice_sum = self.weighted_sum(&ev.alice_powers[p], p + 1, j);
                let y = self
                    .psi_adj
                    .matmul(&alice_sum)
                    .matmul(&self.psi)
                    .transpose();
                let b = &ev.bob_powers[p][j];
                k += &(&b.matmul(&y) - &y.matmul(b));
            }
            self.project(&k, norm, &mut grad);
        }
        grad
    }

    /// Appends `Re(i Tr(G_k K)) · norm` for every generator.
    fn project(&self, k: &CMatrix, norm: f64, out: &mut Vec<f64>) {
        for g in &self.generators {
            let t = g.trace_product(k);
            out.push(-t.im * norm);
        }
    }

    /// Exact gradient with respect to left generator moves at `x = 0`.
    pub fn gradient(&self, frames: &[CMatrix]) -> Vec<f64> {
        self.gradient_from(&self.evaluate(frames))
    }

    /// Frames after the move `U_s ← exp(i Σ_k x_{s,k} G_k) U_s`.
    pub fn moved(&self, frames: &[CMatrix], params: &[f64]) -> Result<Frames> {
        let g = self.generators.len();
        if params.len() != frames.len() * g {
            return Err(Error::DimensionMismatch {
                expected: frames.len() * g,
                found: params.len(),
            });
        }
        let n = self.d.size();
        frames
            .iter()
            .zip(params.chunks(g))
            .map(|(u, x)| {
                if x.iter().all(|&v| v == 0.0) {
                    return Ok(u.clone());
                }
                let mut h = CMatrix::zeros(n, n);
                for (gen, &coef) in self.generators.iter().zip(x) {
                    h.add_scaled(Complex64::new(coef, 0.0), gen);
                }
                Ok(expi_hermitian(&h)?.matmul(u))
            })
            .collect()
    }

    /// Bell value at generator coordinates `params` around `frames`.
    pub fn value_at(&self, frames: &[CMatrix], params: &[f64]) -> Result<f64> {
        Ok(self.value(&self.moved(frames, params)?))
    }

    /// Central finite-difference gradient, step `h`.
    pub fn finite_difference_gradient(&self, frames: &[CMatrix], h: f64) -> Result<Vec<f64>> {
        let count = self.parameter_count();
        let mut x = vec![0.0; count];
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            x[k] = h;
            let plus = self.value_at(frames, &x)?;
            x[k] = -h;
            let minus = self.value_at(frames, &x)?;
            x[k] = 0.0;
            out.push((plus - minus) / (2.0 * h));
        }
        Ok(out)
    }

    /// Frames drawn as `exp(i Σ x_k G_k)` with `x_k` uniform in `[-π, π]`.
    pub fn random_frames(&self, rng: &mut impl Rng) -> Result<Frames> {
        let n = self.d.size();
        let identity = vec![CMatrix::identity(n); 2 * n];
        let params: Vec<f64> = (0..self.parameter_count())
            .map(|_| rng.gen_range(-PI..=PI))
            .collect();
        self.moved(&identity, &params)
    }

    pub fn scenario(&self, frames: &[CMatrix]) -> Result<BellScenario> {
        scenario_from_frames(self.d, frames)
    }
}

/// Settings `M_s = U_s diag(ω^k) U_s†`.
pub fn scenario_from_frames(d: PrimeDim, frames: &[CMatrix]) -> Result<BellScenario> {
    let n = d.size();
    if frames.len() != 2 * n {
        return Err(Error::DimensionMismatch {
            expected: 2 * n,
            found: frames.len(),
        });
    }
    let settings = frames
        .iter()
        .map(|u| {
            let basis = (0..n).map(|c| u.column(c)).collect();
            MeasurementSetting::new(d, basis, (0..n as u32).collect(), RationalPhase::ZERO)
        })
        .collect::<Result<Vec<_>>>()?;
    let (alice, bob) = settings.split_at(n);
    BellScenario::new(d, alice.to_vec(), bob.to_vec())
}

/// Result of a single ascent run.
#[derive(Clone, Debug)]
pub struct AscentRun {
    pub value: f64,
    pub frames: Frames,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

/// Nonlinear conjugate-gradient ascent with Armijo backtracking from `frames`.
pub fn ascend(
    objective: &BellObjective,
    frames: Frames,
    cfg: &OptimizerConfig,
) -> Result<AscentRun> {
    let mut frames = frames;
    let mut ev = objective.evaluate(&frames);
    let mut step = cfg.step_init;
    let mut iterations = 0;
    let mut converged = false;
    let mut grad = objective.gradient_from(&ev);
    let mut grad_norm = inf_norm(&grad);
    let mut direction = grad.clone();
    while iterations < cfg.max_iterations {
        if grad_norm < cfg.gradient_tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut slope: f64 = direction.iter().zip(&grad).map(|(p, g)| p * g).sum();
        if slope <= 0.0 {
            direction = grad.clone();
            slope = grad.iter().map(|g| g * g).sum();
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let params: Vec<f64> = direction.iter().map(|p| p * t).collect();
            let candidate = objective.moved(&frames, &params)?;
            let cand_ev = objective.evaluate(&candidate);
            if cand_ev.value >= ev.value + ARMIJO_C * t * slope {
                accepted = Some((candidate, cand_ev));
                break;
            }
            t *= 0.5;
        }
        let Some((candidate, cand_ev)) = accepted else {
            // No ascent step survives backtracking: numerically stationary.
            converged = true;
            break;
        };
        let gain = cand_ev.value - ev.value;
        frames = candidate;
        ev = cand_ev;
        let next = objective.gradient_from(&ev);
        // Polak-Ribière+; restarts to steepest ascent whenever beta would be negative.
        let prev_sq: f64 = grad.iter().map(|g| g * g).sum();
        let beta = (next
            .iter()
            .zip(&grad)
            .map(|(n, g)| n * (n - g))
            .sum::<f64>()
            / prev_sq)
            .max(0.0);
        direction = next
            .iter()
            .zip(&direction)
            .map(|(n, p)| n + beta * p)
            .collect();
        grad = next;
        grad_norm = inf_norm(&grad);
        step = (2.0 * t).min(MAX_STEP);
        if gain < IMPROVEMENT_TOL {
            converged = true;
            break;
        }
    }
    if !converged && grad_norm < cfg.gradient_tol {
        converged = true;
    }
    Ok(AscentRun {
        value: ev.value,
        frames: reorthonormalize(frames),
        iterations,
        converged,
        gradient_norm: grad_norm,
    })
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Gram-Schmidt on each frame's columns to remove drift from repeated products.
fn reorthonormalize(frames: Frames) -> Frames {
    frames
        .into_iter()
        .map(|u| {
            let n = u.rows();
            let mut cols: Vec<Ket> = Vec::with_capacity(n);
            for c in 0..n {
                let mut v = u.column(c);
                for prev in &cols {
                    let overlap = prev.inner(&v);
                    let proj = prev.scale(overlap);
                    v = Ket::new(
                        v.amplitudes()
                            .iter()
                            .zip(proj.amplitudes())
                            .map(|(a, b)| a - b)
                            .collect(),
                    );
                }
                cols.push(v.normalized());
            }
            CMatrix::from_columns(&cols)
        })
        .collect()
}

/// Mixes a master seed with an index (SplitMix64 finalizer).
pub fn sub_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug)]
pub struct OptimizeOutcome {
    pub best_value: f64,
    pub best_frames: Frames,
    pub best_scenario: BellScenario,
    /// Whether the run that produced the best value met a stopping criterion.
    pub converged: bool,
    pub iterations: usize,
    /// Final value of every start, random restarts first, then warm starts.
    pub start_values: Vec<f64>,
}

/// Best Bell value over `cfg.restarts` random starts.
pub fn optimize_settings(state: &Ket, cfg: &OptimizerConfig) -> Result<OptimizeOutcome> {
    optimize_settings_with_starts(state, cfg, &[])
}

/// As [`optimize_settings`], additionally ascending from each frame set in `warm`.
pub fn optimize_settings_with_starts(
    state: &Ket,
    cfg: &OptimizerConfig,
    warm: &[Frames],
) -> Result<OptimizeOutcome> {
    cfg.validate()?;
    let objective = BellObjective::new(state)?;
    let runs: Vec<AscentRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, r as u64));
            let start = objective.random_frames(&mut rng)?;
            ascend(&objective, start, cfg)
        })
        .chain(
            warm.par_iter()
                .map(|frames| ascend(&objective, frames.clone(), cfg)),
        )
        .collect::<Result<Vec<_>>>()?;
    let start_values = runs.iter().map(|r| r.value).collect();
    // First index wins ties, so the result does not depend on scheduling.
    let best = runs
        .into_iter()
        .reduce(|best, run| if run.value > best.value { run } else { best })
        .expect("at least one start");
    Ok(OptimizeOutcome {
        best_value: best.value,
        best_scenario: objective.scenario(&best.frames)?,
        best_frames: best.frames,
        converged: best.converged,
        iterations: best.iterations,
        start_values,
    })
}

/// Paths through the Schmidt triangle from `|00⟩` to the uniform state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// `c_1 = c_2 <= c_0`.
    R1,
    /// `c_2 = 0` up to the two-level maximally entangled state, then `c_0 = c_1 >= c_2`.
    R2,
}

/// Index of the two-level maximally entangled point on a route with `steps` steps.
pub fn r2_junction(steps: usize) -> usize {
    steps / 2
}

/// The `steps + 1` Schmidt points sampled along a route, qutrits only.
pub fn route_points(route: Route, steps: usize) -> Result<Vec<SchmidtPoint>> {
    if steps < 3 {
        return Err(Error::InvalidArgument(format!(
            "route needs at least 3 steps, got {steps}"
        )));
    }
    let d = PrimeDim::new(3)?;
    let s2 = 2f64.sqrt();
    let points = match route {
        Route::R1 => {
            let t_max = (1.0 / 3f64.sqrt()).acos();
            (0..=steps)
                .map(|k| {
                    let t = t_max * k as f64 / steps as f64;
                    [t.cos(), t.sin() / s2, t.sin() / s2]
                })
                .collect::<Vec<_>>()
        }
        Route::R2 => {
            let h = r2_junction(steps);
            let s_max = (1.0 / 3f64.sqrt()).asin();
            (0..=steps)
                .map(|k| {
                    if k <= h {
                        let t = PI / 4.0 * k as f64 / h as f64;
                        [t.cos(), t.sin(), 0.0]
                    } else {
                        let s = s_max * (k - h) as f64 / (steps - h) as f64;
                        [s.cos() / s2, s.cos() / s2, s.sin()]
                    }
                })
                .collect()
        }
    };
    points
        .into_iter()
        .map(|c| SchmidtPoint::normalized(d, &c))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoutePoint {
    pub point: SchmidtPoint,
    pub entropy: f64,
    pub value: f64,
}

/// `(E, B_Q)` along a route. Each point gets random restarts seeded from
/// `sub_seed(cfg.seed, index)` and is also warm-started from the previous point's optimum.
pub fn route_sweep(route: Route, steps: usize, cfg: &OptimizerConfig) -> Result<Vec<RoutePoint>> {
    let points = route_points(route, steps)?;
    let mut out = Vec::with_capacity(points.len());
    let mut previous: Option<Frames> = None;
    for (k, point) in points.into_iter().enumerate() {
        let warm: Vec<Frames> = previous.iter().cloned().collect();
        let res = optimize_settings_with_starts(
            &point.state(),
            &cfg.with_seed(sub_seed(cfg.seed, k as u64)),
            &warm,
        )?;
        previous = Some(res.best_frames);
        out.push(RoutePoint {
            entropy: point.entropy(),
            point,
            value: res.best_value,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridPoint {
    /// Barycentric lattice indices `(i, j, k)`, `i + j + k = resolution`.
    pub lattice: [usize; 3],
    /// `(c_0², c_1², c_2²)`.
    pub squares: [f64; 3],
    pub value: f64,
}

/// Barycentric lattice on the qutrit Schmidt simplex: `(resolution+1)(resolution+2)/2` points.
pub fn triangle_lattice(resolution: usize) -> Result<Vec<[usize; 3]>> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!(
            "triangle resolution must be at least 2, got {resolution}"
        )));
    }
    let mut out = Vec::with_capacity((resolution + 1) * (resolution + 2) / 2);
    for i in (0..=resolution).rev() {
        for j in (0..=resolution - i).rev() {
            out.push([i, j, resolution - i - j]);
        }
    }
    Ok(out)
}

/// Optimized Bell value at every lattice point of the qutrit Schmidt triangle.
pub fn triangle_grid(resolution: usize, cfg: &OptimizerConfig) -> Result<Vec<GridPoint>> {
    let d = PrimeDim::new(3)?;
    let lattice = triangle_lattice(resolution)?;
    lattice
        .par_iter()
        .enumerate()
        .map(|(index, &ijk)| {
            let squares = ijk.map(|x| x as f64 / resolution as f64);
            let point = SchmidtPoint::from_squares(d, &squares)?;
            let res = optimize_settings(
                &point.state(),
                &cfg.with_seed(sub_seed(cfg.seed, index as u64)),
            )?;
            Ok(GridPoint {
                lattice: ijk,
                squares,
                value: res.best_value,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{paper_expectation, quantum_expectation};

    fn dim(d: u32) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    #[test]
    fn schmidt_states() {
        let d = dim(3);
        assert_eq!(SchmidtPoint::product(d).state(), Ket::basis(9, 0));
        let uniform = SchmidtPoint::uniform(d).state();
        let psi0 = crate::quantum::maximally_entangled(d);
        assert!(uniform.distance(&psi0) < 1e-15);
        let edge = SchmidtPoint::normalized(d, &[1.0, 1.0, 0.0])
            .unwrap()
            .state();
        assert!((edge.norm() - 1.0).abs() < 1e-15);
        assert!(SchmidtPoint::new(d, vec![1.0, 1.0, 0.0]).is_err());
        assert!(SchmidtPoint::new(d, vec![-1.0, 0.0, 0.0]).is_err());
        assert!(SchmidtPoint::new(d, vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn entropy_values() {
        let d = dim(3);
        assert_eq!(SchmidtPoint::product(d).entropy(), 0.0);
        assert!((SchmidtPoint::uniform(d).entropy() - 1.0).abs() < 1e-15);
        let edge = SchmidtPoint::normalized(d, &[1.0, 1.0, 0.0]).unwrap();
        assert!((edge.entropy() - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert!((edge.entropy() - 0.6309).abs() < 5e-5);
    }

    #[test]
    fn generators_are_traceless_orthogonal() {
        for d in [2, 3, 5] {
            let g = gell_mann_generators(d);
            assert_eq!(g.len(), d * d - 1);
            for (a, ga) in g.iter().enumerate() {
                assert!(ga.hermitian_asymmetry() < 1e-15);
                assert!(ga.trace().norm() < 1e-12);
                for (b, gb) in g.iter().enumerate() {
                    let expect = if a == b { 2.0 } else { 0.0 };
                    assert!((ga.trace_product(gb).re - expect).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn objective_matches_bell_operator() {
        let d = dim(3);
        let psi = crate::quantum::paper_state(d).unwrap();
        let objective = BellObjective::new(&psi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let frames = objective.random_frames(&mut rng).unwrap();
        let scenario = objective.scenario(&frames).unwrap();
        let direct = quantum_expectation(&psi, &scenario).unwrap();
        assert!((objective.value(&frames) - direct).abs() < 1e-12);
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let d = dim(3);
        let psi = SchmidtPoint::normalized(d, &[0.8, 0.5, 0.3])
            .unwrap()
            .state();
        let objective = BellObjective::new(&psi).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let frames = objective.random_frames(&mut rng).unwrap();
            let exact = objective.gradient(&frames);
            let fd = objective.finite_difference_gradient(&frames, 1e-6).unwrap();
            let scale = inf_norm(&exact).max(1e-12);
            for (a, b) in exact.iter().zip(&fd) {
                assert!((a - b).abs() / scale < 1e-4);
            }
        }
    }

    #[test]
    fn chsh_optimum() {
        let d = dim(2);
        let psi = crate::quantum::maximally_entangled(d);
        let cfg = OptimizerConfig {
            restarts: 4,
            ..Default::default()
        };
        let res = optimize_settings(&psi, &cfg).unwrap();
        assert!((res.best_value - 2.0 * 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn qutrit_maximally_entangled_reaches_known_value() {
        let d = dim(3);
        let psi = crate::quantum::paper_state(d).unwrap();
        let cfg = OptimizerConfig {
            restarts: 8,
            ..Default::default()
        };
        let res = optimize_settings(&psi, &cfg).unwrap();
        let target = paper_expectation(d).unwrap();
        assert!(res.best_value >= target - cfg.gradient_tol);
        assert!(res.best_value <= 3.0 * 3f64.sqrt() + 1e-9);
        let check = quantum_expectation(&psi, &res.best_scenario).unwrap();
        assert!((check - res.best_value).abs() < 1e-9);
    }

    #[test]
    fn product_state_respects_classical_bound() {
        let d = dim(3);
        let psi = SchmidtPoint::product(d).state();
        let cfg = OptimizerConfig {
            restarts: 6,
            ..Default::default()
        };
        let res = optimize_settings(&psi, &cfg).unwrap();
        assert!(res.best_value <= 4.5 + 1e-6);
        assert!(res.best_value >= 4.5 - 1e-6);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let d = dim(3);
        let psi = SchmidtPoint::normalized(d, &[0.9, 0.4, 0.1])
            .unwrap()
            .state();
        let cfg = OptimizerConfig {
            restarts: 3,
            ..Default::default()
        };
        let a = optimize_settings(&psi, &cfg).unwrap();
        let b = optimize_settings(&psi, &cfg).unwrap();
        assert_eq!(a.best_value, b.best_value);
        assert_eq!(a.start_values, b.start_values);
    }

    #[test]
    fn route_geometry() {
        let r1 = route_points(Route::R1, 10).unwrap();
        assert_eq!(r1.len(), 11);
        assert!(r1[0].entropy().abs() < 1e-15);
        assert!((r1[10].entropy() - 1.0).abs() < 1e-12);
        let r2 = route_points(Route::R2, 10).unwrap();
        let junction = &r2[r2_junction(10)];
        assert!((junction.entropy() - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert!((r2[10].entropy() - 1.0).abs() < 1e-12);
        for w in r2.windows(2).chain(r1.windows(2)) {
            assert!(w[1].entropy() > w[0].entropy());
        }
        assert!(route_points(Route::R1, 2).is_err());
    }

    #[test]
    fn lattice_count() {
        assert_eq!(triangle_lattice(40).unwrap().len(), 861);
        assert_eq!(triangle_lattice(2).unwrap().len(), 6);
        assert!(triangle_lattice(1).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            gradient_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
