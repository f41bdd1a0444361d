//! Bell operators, the violating configurations, and noise robustness.
//!
//! The Bell operator for `d` settings per side is
//!
//! ```text
//! B = 1/(d-1) Σ_{n=1}^{d-1} Σ_{i,j} ω^{n·i·j} A_i^n ⊗ B_j^n
//! ```
//!
//! which is CHSH at `d = 2`. The violating configurations use settings built from
//! `f_{1j} = X Z^j` (pairwise mutually unbiased) and the maximally entangled state
//! `(1 ⊗ P) Σ_k |kk⟩/√d` with a diagonal phase shifter `P`.

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lhv::analytic_bounds;
use crate::linalg::{tensor, CMatrix, Ket, RationalPhase};
use crate::operators::{f_op, MeasurementSetting, PrimeDim};

/// Imaginary part tolerated in the expectation of a Hermitian operator.
pub const IMAGINARY_TOL: f64 = 1e-10;

/// Settings for both parties; all share the local dimension `d`.
#[derive(Clone, Debug)]
pub struct BellScenario {
    dim: PrimeDim,
    alice: Vec<MeasurementSetting>,
    bob: Vec<MeasurementSetting>,
}

impl BellScenario {
    pub fn new(
        dim: PrimeDim,
        alice: Vec<MeasurementSetting>,
        bob: Vec<MeasurementSetting>,
    ) -> Result<Self> {
        for side in [&alice, &bob] {
            if side.len() != dim.size() {
                return Err(Error::DimensionMismatch {
                    expected: dim.size(),
                    found: side.len(),
                });
            }
            if let Some(s) = side.iter().find(|s| s.dim() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim.size(),
                    found: s.dim().size(),
                });
            }
        }
        Ok(Self { dim, alice, bob })
    }

    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn alice(&self) -> &[MeasurementSetting] {
        &self.alice
    }

    pub fn bob(&self) -> &[MeasurementSetting] {
        &self.bob
    }

    /// The `d² × d²` Bell operator.
    pub fn bell_operator(&self) -> Result<CMatrix> {
        let d = self.dim;
        let n_max = d.get() - 1;
        let norm = Complex64::new(1.0 / f64::from(n_max), 0.0);
        let mut out = CMatrix::zeros(d.size() * d.size(), d.size() * d.size());
        for n in 1..=n_max {
            let bob_powers: Vec<CMatrix> = self.bob.iter().map(|s| s.power(n)).collect();
            for (i, a) in self.alice.iter().enumerate() {
                let mut bob_sum = CMatrix::zeros(d.size(), d.size());
                for (j, b) in bob_powers.iter().enumerate() {
                    let k = i64::from(n) * (i * j) as i64;
                    bob_sum.add_scaled(d.omega(k).eval(), b);
                }
                out.add_scaled(norm, &tensor(&a.power(n), &bob_sum)?);
            }
        }
        Ok(out)
    }
}

/// `⟨ψ|B|ψ⟩` including its (numerically vanishing) imaginary part.
pub fn quantum_expectation_complex(state: &Ket, scenario: &BellScenario) -> Result<Complex64> {
    let d = scenario.dim().size();
    if state.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: state.dim(),
        });
    }
    Ok(state.expectation(&scenario.bell_operator()?))
}

/// `Re ⟨ψ|B|ψ⟩` through the explicit Bell-operator matrix.
pub fn quantum_expectation(state: &Ket, scenario: &BellScenario) -> Result<f64> {
    Ok(quantum_expectation_complex(state, scenario)?.re)
}

/// `Σ_k |kk⟩ / √d`.
pub fn maximally_entangled(d: PrimeDim) -> Ket {
    let n = d.size();
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        amps[k * n + k] = amp;
    }
    Ket::new(amps)
}

/// The settings that produce the reported violations.
///
/// * `d = 2`: `A_0 = B_0 = σ_x`, `A_1 = B_1 = σ_y`.
/// * `d = 3`: `A = (f_10, ω² f_11, f_12)`, `B = (f_10, f_12, ω² f_11)`.
/// * `d >= 5`: `A_j = ω^{j(j+1)} f_{1,j}` and
///   `B_j = ω^{((d+1)/2)²(j²+2j)} f_{1, ((d+1)²/2)·j}`, subscripts reduced mod `d`.
pub fn paper_settings(d: PrimeDim) -> Result<BellScenario> {
    let zero = RationalPhase::ZERO;
    let (alice, bob) = match d.get() {
        2 => {
            let sx = MeasurementSetting::weyl(d, zero, 1, 0)?;
            let sy = MeasurementSetting::weyl(d, RationalPhase::new(1, 4), 1, 1)?;
            (vec![sx.clone(), sy.clone()], vec![sx, sy])
        }
        3 => {
            let f10 = MeasurementSetting::weyl(d, zero, 1, 0)?;
            let f11 = MeasurementSetting::weyl(d, d.omega(2), 1, 1)?;
            let f12 = MeasurementSetting::weyl(d, zero, 1, 2)?;
            (
                vec![f10.clone(), f11.clone(), f12.clone()],
                vec![f10, f12, f11],
            )
        }
        n => {
            let n = i64::from(n);
            let half = (n + 1) / 2;
            let bob_phase = half * half;
            let bob_stride = (n + 1) * (n + 1) / 2;
            let alice = (0..n)
                .map(|j| MeasurementSetting::weyl(d, d.omega(j * (j + 1)), 1, j))
                .collect::<Result<Vec<_>>>()?;
            let bob = (0..n)
                .map(|j| {
                    MeasurementSetting::weyl(
                        d,
                        d.omega(bob_phase * (j * j + 2 * j)),
                        1,
                        bob_stride * j,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            (alice, bob)
        }
    };
    BellScenario::new(d, alice, bob)
}

/// Diagonal of the phase shifter `P` applied to Bob's side of `Σ|kk⟩/√d`.
///
/// `d = 2` gives `(1, e^{iπ/4})`, `d = 3` gives `ω^{-k/3}` and `d >= 5` gives `ω^{-θ_k}`.
pub fn shifter_phases(d: PrimeDim) -> Result<Vec<RationalPhase>> {
    let n = d.get();
    match n {
        2 => Ok(vec![RationalPhase::ZERO, RationalPhase::new(1, 8)]),
        3 => Ok((0..3)
            .map(|k| RationalPhase::omega_power(Rational64::new(-k, 3), n))
            .collect()),
        _ => (0..i64::from(n))
            .map(|k| Ok(RationalPhase::omega_power(-theta_k(d, k)?, n)))
            .collect(),
    }
}

/// The maximally entangled state `(1 ⊗ P) Σ_k |kk⟩/√d` that produces the violations.
pub fn paper_state(d: PrimeDim) -> Result<Ket> {
    let n = d.size();
    let phases = shifter_phases(d)?;
    let psi0 = maximally_entangled(d);
    let amps = (0..n * n)
        .map(|idx| psi0[idx] * phases[idx % n].eval())
        .collect();
    Ok(Ket::new(amps))
}

/// `g_d`: `0` for `d ≡ 1, 5 (mod 8)`, `1/(4d)` for `d ≡ 3, 7 (mod 8)`.
pub fn g_d(d: PrimeDim) -> Rational64 {
    let n = i64::from(d.get());
    match n % 8 {
        3 | 7 => Rational64::new(1, 4 * n),
        _ => Rational64::from_integer(0),
    }
}

/// Phase-shifter exponent θ_k for odd primes `d >= 5`, exactly.
///
/// ```text
/// θ_k / (d k) = c_d + (d+1)²/(4 d k) · Σ_{j=1}^{k} j²
/// c_d = (d-1)/8,  (d+3)/8 - g_d,  (d+3)/8,  (d-1)/8 - g_d   for d ≡ 1, 3, 5, 7 (mod 8)
/// ```
///
/// with `θ_0 = 0`. The `d = 3` branch is not used by [`paper_state`], which keeps the
/// separate qutrit shifter `ω^{-k/3}`.
pub fn theta_k(d: PrimeDim, k: i64) -> Result<Rational64> {
    let n = i64::from(d.get());
    if n < 5 {
        return Err(Error::Unsupported(format!(
            "θ_k is defined here for odd primes d >= 5 (got d = {n})"
        )));
    }
    if !(0..n).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "θ_k needs 0 <= k < {n}, got {k}"
        )));
    }
    if k == 0 {
        return Ok(Rational64::from_integer(0));
    }
    let g = g_d(d);
    let offset = match n % 8 {
        1 => Rational64::new(n - 1, 8),
        3 => Rational64::new(n + 3, 8) - g,
        5 => Rational64::new(n + 3, 8),
        _ => Rational64::new(n - 1, 8) - g,
    };
    let squares: i64 = (1..=k).map(|j| j * j).sum();
    let per_dk = offset + Rational64::new((n + 1) * (n + 1) * squares, 4 * n * k);
    Ok(per_dk * (n * k))
}

fn require_odd_ge5(d: PrimeDim) -> Result<i64> {
    let n = i64::from(d.get());
    if n < 5 {
        return Err(Error::Unsupported(format!(
            "the closed-form expectation covers odd primes d >= 5 (got d = {n})"
        )));
    }
    Ok(n)
}

/// Matrix-free evaluation of `⟨ψ|B|ψ⟩` for the `d >= 5` configuration.
///
/// With `A_i^n = ω^{n i(i+1) + i n(n-1)/2} X^n Z^{i n}` (and likewise for Bob with
/// stride `s = (d+1)²/2` and phase `e = ((d+1)/2)²`), only the entries
/// `⟨l+n| · |l⟩` survive and
///
/// ```text
/// ⟨ψ|B|ψ⟩ = 1/(d(d-1)) Σ_{n=1}^{d-1} Σ_{i,j,l} ω^{Φ(i,j,l,n)}
/// Φ = n·i(i+1) + i·n(n-1)/2 + i·n·l + n·i·j
///   + n·e·(j² + 2j) + s·j·n(n-1)/2 + s·j·n·l + θ_{(l+n) mod d} - θ_l
/// ```
///
/// Returns the complex sum; its imaginary part vanishes up to rounding.
pub fn closed_form_sum(d: PrimeDim) -> Result<Complex64> {
    let n_d = require_odd_ge5(d)?;
    let e = ((n_d + 1) / 2).pow(2);
    let s = (n_d + 1) * (n_d + 1) / 2;
    let theta = (0..n_d)
        .map(|k| theta_k(d, k))
        .collect::<Result<Vec<_>>>()?;
    let mut total = Complex64::new(0.0, 0.0);
    for n in 1..n_d {
        for l in 0..n_d {
            let state_phase = theta[((l + n) % n_d) as usize] - theta[l as usize];
            for i in 0..n_d {
                for j in 0..n_d {
                    let integer = n * i * (i + 1)
                        + i * n * (n - 1) / 2
                        + i * n * l
                        + n * i * j
                        + n * e * (j * j + 2 * j)
                        + s * j * n * (n - 1) / 2
                        + s * j * n * l;
                    let exponent = Rational64::from_integer(integer.rem_euclid(n_d)) + state_phase;
                    total += RationalPhase::omega_power(exponent, d.get()).eval();
                }
            }
        }
    }
    Ok(total / (n_d * (n_d - 1)) as f64)
}

/// Real part of [`closed_form_sum`].
pub fn expectation_closed_form(d: PrimeDim) -> Result<f64> {
    Ok(closed_form_sum(d)?.re)
}

/// The quadruple sum with the compact exponent `ξ`:
///
/// ```text
/// ξ = -3 n g_d + n i j + n(n-1)/2 · i + i n p + (3/8) n (d-1) + (3/d)((d+1)/2)² C(j,p,n)
/// C(j,p,n) = Σ_{k=1}^{n} (j+p+k)²
/// ```
///
/// This does not agree with the Bell-operator expectation (at `d = 5` it gives about
/// `-1.23 - 0.88i` instead of `10.113`); it is kept as a
/// reproducible counterexample to that form.
/// [`closed_form_sum`] is the consistent matrix-free path.
pub fn compact_exponent_sum(d: PrimeDim) -> Result<Complex64> {
    let n_d = require_odd_ge5(d)?;
    let g = g_d(d);
    let e = Rational64::new((n_d + 1) * (n_d + 1), 4);
    let mut total = Complex64::new(0.0, 0.0);
    for n in 1..n_d {
        for j in 0..n_d {
            for p in 0..n_d {
                let c: i64 = (1..=n).map(|k| (j + p + k).pow(2)).sum();
                let common = -g * (3 * n)
                    + Rational64::new(3 * n * (n_d - 1), 8)
                    + Rational64::new(3, n_d) * e * c;
                for i in 0..n_d {
                    let xi = common
                        + Rational64::from_integer(n * i * j + n * (n - 1) / 2 * i + i * n * p);
                    total += RationalPhase::omega_power(xi, d.get()).eval();
                }
            }
        }
    }
    Ok(total / (n_d * (n_d - 1)) as f64)
}

/// `⟨ψ|B|ψ⟩` for the violating configuration, via the Bell-operator matrix.
pub fn paper_expectation(d: PrimeDim) -> Result<f64> {
    quantum_expectation(&paper_state(d)?, &paper_settings(d)?)
}

/// Quantum value over the classical maximum `d(2d-3)/(d-1)`.
pub fn violation_ratio(d: PrimeDim) -> Result<f64> {
    Ok(paper_expectation(d)? / analytic_bounds(d).max_f64())
}

/// `p|ψ⟩⟨ψ| + (1-p)/d² · 1⊗1`.
#[derive(Clone, Debug)]
pub struct NoiseMixture {
    p: f64,
    pure_state: Ket,
}

impl NoiseMixture {
    pub fn new(p: f64, pure_state: Ket) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "mixing weight p = {p} outside [0, 1]"
            )));
        }
        let deviation = (pure_state.norm() - 1.0).abs();
        if deviation > 1e-10 {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { p, pure_state })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn density(&self) -> CMatrix {
        let n = self.pure_state.dim();
        let mut rho = self.pure_state.projector().scale(self.p.into());
        rho.add_scaled(((1.0 - self.p) / n as f64).into(), &CMatrix::identity(n));
        rho
    }

    /// `Re Tr(ρ · op)`.
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        self.density().trace_product(op).re
    }
}

/// Minimal pure-state weight for a violation, computed two ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseThreshold {
    /// `classical_max / quantum`, valid because the Bell operator is traceless.
    pub closed_form: f64,
    /// Bisection of `Tr(ρ(p) B) > classical_max` on the explicit density matrix.
    pub bisection: f64,
    pub quantum: f64,
    pub classical_max: f64,
}

impl NoiseThreshold {
    pub fn agreement(&self) -> f64 {
        (self.closed_form - self.bisection).abs()
    }
}

/// Bisection width on `p`.
pub const NOISE_BISECTION_TOL: f64 = 1e-10;

pub fn noise_threshold(d: PrimeDim) -> Result<NoiseThreshold> {
    let state = paper_state(d)?;
    let op = paper_settings(d)?.bell_operator()?;
    let quantum = state.expectation(&op).re;
    let classical_max = analytic_bounds(d).max_f64();
    if quantum <= classical_max {
        return Err(Error::NoViolation {
            d: d.get(),
            quantum,
            classical: classical_max,
        });
    }
    let violates = |p: f64| -> Result<bool> {
        Ok(NoiseMixture::new(p, state.clone())?.expectation(&op) > classical_max)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > NOISE_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if violates(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(NoiseThreshold {
        closed_form: classical_max / quantum,
        bisection: hi,
        quantum,
        classical_max,
    })
}

/// Non-tight quantum ceiling `3√3` for the qutrit Bell operator.
pub fn buhrman_massar_cap(d: PrimeDim) -> Result<f64> {
    if d.get() != 3 {
        return Err(Error::Unsupported(format!(
            "the 3√3 ceiling is only stated for d = 3 (got d = {d})"
        )));
    }
    Ok(3.0 * 3f64.sqrt())
}

/// Max entrywise deviation, for each `i`, between `P† B_i P` and
/// `(ω^{1/12}/√3) Σ_j ω^{(i-j+1)j} f_{1j}` in the qutrit configuration.
pub fn phase_conjugation_check() -> Result<Vec<f64>> {
    let d = PrimeDim::new(3)?;
    let scenario = paper_settings(d)?;
    let p = CMatrix::diagonal(
        &shifter_phases(d)?
            .iter()
            .map(RationalPhase::eval)
            .collect::<Vec<_>>(),
    );
    let prefactor = RationalPhase::omega_power(Rational64::new(1, 12), 3).eval() / 3f64.sqrt();
    (0..3i64)
        .map(|i| {
            let lhs = p
                .adjoint()
                .matmul(&scenario.bob()[i as usize].materialize())
                .matmul(&p);
            let mut rhs = CMatrix::zeros(3, 3);
            for j in 0..3i64 {
                rhs.add_scaled(d.omega((i - j + 1) * j).eval(), &f_op(d, 1, j));
            }
            Ok(lhs.max_abs_diff(&rhs.scale(prefactor)))
        })
        .collect()
}

/// `‖(f_{1i} ⊗ f_{1,-i})|ψ0⟩ - |ψ0⟩‖` with `|ψ0⟩ = Σ_k |kk⟩/√d`.
pub fn perfect_correlation_deviation(d: PrimeDim, i: i64) -> Result<f64> {
    let psi0 = maximally_entangled(d);
    let op = tensor(&f_op(d, 1, i), &f_op(d, 1, -i))?;
    Ok(op.apply(&psi0).distance(&psi0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigensystem;
    use crate::operators::is_mutually_unbiased;
    use std::f64::consts::PI;

    fn dim(d: u32) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    #[test]
    fn chsh_value_and_operator() {
        let d = dim(2);
        let scenario = paper_settings(d).unwrap();
        let op = scenario.bell_operator().unwrap();
        assert!(op.hermitian_asymmetry() < 1e-12);
        let top = hermitian_eigensystem(&op).unwrap().max_value();
        assert!((top - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        let q = paper_expectation(d).unwrap();
        assert!((q - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn qutrit_settings_match_weyl_forms() {
        let d = dim(3);
        let s = paper_settings(d).unwrap();
        let w2 = d.omega(2).eval();
        let expect_a = [f_op(d, 1, 0), f_op(d, 1, 1).scale(w2), f_op(d, 1, 2)];
        let expect_b = [f_op(d, 1, 0), f_op(d, 1, 2), f_op(d, 1, 1).scale(w2)];
        for k in 0..3 {
            assert!(s.alice()[k].materialize().max_abs_diff(&expect_a[k]) < 1e-12);
            assert!(s.bob()[k].materialize().max_abs_diff(&expect_b[k]) < 1e-12);
        }
        for side in [s.alice(), s.bob()] {
            for a in 0..3 {
                for b in a + 1..3 {
                    assert!(is_mutually_unbiased(side[a].basis(), side[b].basis(), 1e-12).unwrap());
                }
            }
        }
    }

    #[test]
    fn qutrit_operator_traceless_and_hermitian() {
        let op = paper_settings(dim(3)).unwrap().bell_operator().unwrap();
        assert_eq!((op.rows(), op.cols()), (9, 9));
        assert!(op.hermitian_asymmetry() < 1e-10);
        assert!(op.trace().norm() < 1e-12);
    }

    #[test]
    fn qutrit_state_phases() {
        let d = dim(3);
        let phases = shifter_phases(d).unwrap();
        for (k, p) in phases.iter().enumerate() {
            assert_eq!(*p, RationalPhase::new(-(k as i64), 9));
        }
        let psi = paper_state(d).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn qutrit_expectation() {
        let q = paper_expectation(dim(3)).unwrap();
        let expect = 3.0 * 3f64.sqrt() * (PI / 18.0).cos();
        assert!((q - expect).abs() < 1e-12);
        assert!((q - 5.117).abs() < 5e-4);
        let cap = buhrman_massar_cap(dim(3)).unwrap();
        assert!((cap - 5.196).abs() < 5e-4);
        assert!(q < cap);
        assert!(buhrman_massar_cap(dim(5)).is_err());
    }

    #[test]
    fn theta_values() {
        let d5 = dim(5);
        assert_eq!(theta_k(d5, 0).unwrap(), Rational64::from_integer(0));
        assert_eq!(theta_k(d5, 1).unwrap(), Rational64::from_integer(14));
        // d = 5, k = 2: 10·(1 + 36·5/40) = 55
        assert_eq!(theta_k(d5, 2).unwrap(), Rational64::from_integer(55));
        assert_eq!(g_d(d5), Rational64::from_integer(0));
        assert_eq!(g_d(dim(17)), Rational64::from_integer(0));
        assert_eq!(g_d(dim(7)), Rational64::new(1, 28));
        // d = 7, k = 1: 7·((6/8 - 1/28) + 64/28) = 21
        assert_eq!(theta_k(dim(7), 1).unwrap(), Rational64::from_integer(21));
        assert!(theta_k(dim(3), 1).is_err());
        assert!(theta_k(d5, 5).is_err());
    }

    #[test]
    fn quint_expectation_both_paths() {
        let d = dim(5);
        let expect = 25.0 * (1.0 + 5f64.sqrt()) / 8.0;
        let matrix = paper_expectation(d).unwrap();
        assert!((matrix - expect).abs() < 1e-9);
        let closed = closed_form_sum(d).unwrap();
        assert!(closed.im.abs() < 1e-8);
        assert!((closed.re - matrix).abs() < 1e-8);
    }

    #[test]
    fn compact_exponent_disagrees_with_matrix_path() {
        let d = dim(5);
        let compact = compact_exponent_sum(d).unwrap();
        let matrix = paper_expectation(d).unwrap();
        assert!((compact - Complex64::new(matrix, 0.0)).norm() > 1.0);
    }

    #[test]
    fn closed_form_matches_matrix_for_seven() {
        let d = dim(7);
        let closed = closed_form_sum(d).unwrap();
        let matrix = paper_expectation(d).unwrap();
        assert!((closed.re - matrix).abs() < 1e-8);
        assert!(matrix < analytic_bounds(d).max_f64());
    }

    #[test]
    fn ratios() {
        assert!((violation_ratio(dim(3)).unwrap() - 1.137).abs() < 5e-4);
        assert!((violation_ratio(dim(5)).unwrap() - 1.156).abs() < 5e-4);
    }

    #[test]
    fn noise_thresholds() {
        let t3 = noise_threshold(dim(3)).unwrap();
        assert!((t3.closed_form - 0.88).abs() < 5e-3);
        assert!(t3.agreement() < 1e-9);
        let t5 = noise_threshold(dim(5)).unwrap();
        assert!(t5.agreement() < 1e-9);
        // 8.75 / (25(1+√5)/8) = 14 / (5(1+√5))
        assert!((t5.closed_form - 14.0 / (5.0 * (1.0 + 5f64.sqrt()))).abs() < 1e-12);
        assert!(matches!(
            noise_threshold(dim(7)),
            Err(Error::NoViolation { d: 7, .. })
        ));
    }

    #[test]
    fn mixture_density_is_valid_and_linear() {
        let d = dim(3);
        let psi = paper_state(d).unwrap();
        let op = paper_settings(d).unwrap().bell_operator().unwrap();
        let q = psi.expectation(&op).re;
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let mix = NoiseMixture::new(p, psi.clone()).unwrap();
            let rho = mix.density();
            assert!((rho.trace().re - 1.0).abs() < 1e-12);
            let eig = hermitian_eigensystem(&rho).unwrap();
            assert!(eig.values[0] >= -1e-10);
            assert!((mix.expectation(&op) - p * q).abs() < 1e-10);
        }
        assert!(NoiseMixture::new(1.5, psi.clone()).is_err());
        assert!(NoiseMixture::new(0.5, psi.scale(2.0.into())).is_err());
    }

    #[test]
    fn phase_conjugation_identity_holds() {
        for dev in phase_conjugation_check().unwrap() {
            assert!(dev <= 1e-12, "deviation {dev}");
        }
    }

    #[test]
    fn perfect_correlations() {
        for d in [3, 5, 7, 11] {
            for i in 0..d as i64 {
                assert!(perfect_correlation_deviation(dim(d), i).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn scenario_validation() {
        let d = dim(3);
        let s = paper_settings(d).unwrap();
        let short = s.alice()[..2].to_vec();
        assert!(BellScenario::new(d, short, s.bob().to_vec()).is_err());
        let wrong = paper_settings(dim(5)).unwrap();
        assert!(BellScenario::new(d, s.alice().to_vec(), wrong.bob()[..3].to_vec()).is_err());
        let bad_state = Ket::basis(4, 0);
        assert!(quantum_expectation(&bad_state, &s).is_err());
    }

    #[test]
    fn marginals_are_maximally_mixed() {
        for d in PrimeDim::all() {
            let psi = paper_state(d).unwrap();
            let m = psi.as_bipartite_matrix(d.size());
            let rho_a = m.matmul(&m.adjoint());
            let target = CMatrix::identity(d.size()).scale((1.0 / d.size() as f64).into());
            assert!(rho_a.max_abs_diff(&target) < 1e-12);
        }
    }
}
