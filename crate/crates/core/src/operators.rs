//! Generalized Pauli operators and measurement settings on a single qudit.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, CMatrix, Ket, RationalPhase};

/// Primes for which every construction in the crate is supported.
pub const SUPPORTED_PRIMES: [u32; 7] = [2, 3, 5, 7, 11, 13, 17];

/// A prime local dimension `2 <= d <= 17`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeDim(u32);

impl PrimeDim {
    pub fn new(d: u32) -> Result<Self> {
        if SUPPORTED_PRIMES.contains(&d) {
            Ok(Self(d))
        } else {
            Err(Error::UnsupportedDimension(d))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    /// Least non-negative residue of `k` modulo `d`.
    pub fn residue(self, k: i64) -> i64 {
        k.rem_euclid(i64::from(self.0))
    }

    /// `ω^k`, `ω = exp(2πi/d)`.
    pub fn omega(self, k: i64) -> RationalPhase {
        RationalPhase::omega(k, self.0)
    }

    /// Every supported dimension, smallest first.
    pub fn all() -> impl Iterator<Item = PrimeDim> {
        SUPPORTED_PRIMES.iter().map(|&d| PrimeDim(d))
    }
}

impl TryFrom<u32> for PrimeDim {
    type Error = Error;

    fn try_from(d: u32) -> Result<Self> {
        Self::new(d)
    }
}

impl From<PrimeDim> for u32 {
    fn from(d: PrimeDim) -> u32 {
        d.0
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Cyclic shift `X|k⟩ = |k+1⟩`.
pub fn pauli_x(d: PrimeDim) -> CMatrix {
    f_op(d, 1, 0)
}

/// Clock `Z|k⟩ = ω^k |k⟩`.
pub fn pauli_z(d: PrimeDim) -> CMatrix {
    f_op(d, 0, 1)
}

/// `f_ij = X^i Z^j`, with `i`, `j` reduced modulo `d`.
///
/// Built entrywise from `X^i Z^j |k⟩ = ω^{jk} |k+i⟩`.
pub fn f_op(d: PrimeDim, i: i64, j: i64) -> CMatrix {
    let n = d.size();
    let i = d.residue(i) as usize;
    let j = d.residue(j);
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        m[((k + i) % n, k)] = d.omega(j * k as i64).eval();
    }
    m
}

/// Closed-form eigenbasis of `f_{1i}` for qutrits:
/// `|k⟩_i = 3^{-1/2} Σ_l ω^{-i l² - k l} |l⟩`.
pub fn f1i_eigenbasis(d: PrimeDim, i: i64) -> Result<Vec<Ket>> {
    if d.get() != 3 {
        return Err(Error::Unsupported(format!(
            "closed-form f_1i eigenbasis is only available for d = 3 (got d = {d}); \
             use MeasurementSetting::weyl for a numerical basis"
        )));
    }
    let norm = 1.0 / 3f64.sqrt();
    Ok((0..3)
        .map(|k: i64| {
            Ket::new(
                (0..3)
                    .map(|l: i64| d.omega(-i * l * l - k * l).eval() * norm)
                    .collect(),
            )
        })
        .collect())
}

/// True iff every cross overlap satisfies `| |⟨b|a⟩|² - 1/d | <= tol`.
pub fn is_mutually_unbiased(basis_a: &[Ket], basis_b: &[Ket], tol: f64) -> Result<bool> {
    Ok(max_unbiasedness_deviation(basis_a, basis_b)? <= tol)
}

/// `max | |⟨b|a⟩|² - 1/d |` over all pairs of basis vectors.
pub fn max_unbiasedness_deviation(basis_a: &[Ket], basis_b: &[Ket]) -> Result<f64> {
    let d = basis_a.len();
    if basis_b.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: basis_b.len(),
        });
    }
    for k in basis_a.iter().chain(basis_b) {
        if k.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k.dim(),
            });
        }
    }
    let target = 1.0 / d as f64;
    let mut worst = 0.0f64;
    for a in basis_a {
        for b in basis_b {
            worst = worst.max((b.inner(a).norm_sqr() - target).abs());
        }
    }
    Ok(worst)
}

/// `max |⟨e_r|e_c⟩ - δ_rc|` over the basis.
pub fn orthonormality_deviation(basis: &[Ket]) -> f64 {
    let mut worst = 0.0f64;
    for (r, a) in basis.iter().enumerate() {
        for (c, b) in basis.iter().enumerate() {
            let expect = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b) - Complex64::new(expect, 0.0)).norm());
        }
    }
    worst
}

const ORTHONORMAL_TOL: f64 = 1e-10;
const SPECTRUM_TOL: f64 = 1e-9;

/// A non-degenerate measurement `M = c · Σ_m ω^{k_m} |e_m⟩⟨e_m|`.
///
/// `c` is an exact phase kept symbolic so that powers `M^n = c^n (Σ ω^{k_m} |e_m⟩⟨e_m|)^n`
/// pick up exact phases.
#[derive(Clone, Debug)]
pub struct MeasurementSetting {
    dim: PrimeDim,
    basis: Vec<Ket>,
    exponents: Vec<u32>,
    prefactor: RationalPhase,
}

impl MeasurementSetting {
    /// Setting from an explicit orthonormal basis; `exponents[m]` assigns `ω^{k_m}` to
    /// `basis[m]` and must be a permutation of `0..d`.
    pub fn new(
        dim: PrimeDim,
        basis: Vec<Ket>,
        exponents: Vec<u32>,
        prefactor: RationalPhase,
    ) -> Result<Self> {
        let d = dim.size();
        if basis.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: basis.len(),
            });
        }
        if let Some(k) = basis.iter().find(|k| k.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k.dim(),
            });
        }
        if exponents.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: exponents.len(),
            });
        }
        let mut seen = vec![false; d];
        for &k in &exponents {
            let k = k as usize;
            if k >= d || seen[k] {
                return Err(Error::InvalidArgument(format!(
                    "eigenvalue exponents {exponents:?} are not a permutation of 0..{d}"
                )));
            }
            seen[k] = true;
        }
        let deviation = orthonormality_deviation(&basis);
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self {
            dim,
            basis,
            exponents,
            prefactor,
        })
    }

    /// The clock operator `Z`: standard basis with exponents `k`.
    pub fn standard(dim: PrimeDim) -> Self {
        let d = dim.size();
        Self {
            dim,
            basis: (0..d).map(|k| Ket::basis(d, k)).collect(),
            exponents: (0..d as u32).collect(),
            prefactor: RationalPhase::ZERO,
        }
    }

    /// Recovers basis and spectrum of `prefactor · op`, where `op` must be unitary with
    /// eigenvalues exactly `{ω^0, …, ω^{d-1}}` (numerically, within 1e-9).
    pub fn from_unitary(dim: PrimeDim, op: &CMatrix, prefactor: RationalPhase) -> Result<Self> {
        let d = dim.size();
        if op.rows() != d || op.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: op.rows(),
            });
        }
        let (basis, eigenvalues) = unitary_eigenbasis(op)?;
        let mut exponents = Vec::with_capacity(d);
        let mut deviation = 0.0f64;
        for z in eigenvalues {
            let turns = z.arg() / (2.0 * PI);
            let k = (turns * d as f64).round().rem_euclid(d as f64) as i64;
            deviation = deviation.max((z - dim.omega(k).eval()).norm());
            exponents.push(k as u32);
        }
        if deviation > SPECTRUM_TOL {
            return Err(Error::BadSpectrum { deviation });
        }
        Self::new(dim, basis, exponents, prefactor).map_err(|e| match e {
            Error::InvalidArgument(_) => Error::BadSpectrum { deviation },
            other => other,
        })
    }

    /// The setting `prefactor · f_ij`.
    ///
    /// `f_ij^d = ν^d · 1` with `ν = exp(iπ·ij(d-1)/d)`, so `f_ij / ν` has spectrum
    /// `{ω^k}` and `ν` is folded into the symbolic prefactor. For odd `d`, `ν` is itself
    /// a power of ω; for `d = 2`, `f_11 = XZ` has eigenvalues `±i` and `ν = i`.
    pub fn weyl(dim: PrimeDim, prefactor: RationalPhase, i: i64, j: i64) -> Result<Self> {
        let d = i64::from(dim.get());
        let (i, j) = (dim.residue(i), dim.residue(j));
        let nu = RationalPhase::new(i * j * (d - 1), 2 * d);
        let op = f_op(dim, i, j).scale(nu.conj().eval());
        Self::from_unitary(dim, &op, prefactor + nu)
    }

    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn basis(&self) -> &[Ket] {
        &self.basis
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn prefactor(&self) -> RationalPhase {
        self.prefactor
    }

    /// Exact eigenvalue phases `c · ω^{k_m}`, aligned with [`Self::basis`].
    pub fn eigenvalue_phases(&self) -> Vec<RationalPhase> {
        self.exponents
            .iter()
            .map(|&k| self.prefactor + self.dim.omega(i64::from(k)))
            .collect()
    }

    /// `Σ_m ω^{k_m} |e_m⟩⟨e_m|` without the prefactor.
    fn spectral_sum(&self) -> CMatrix {
        let d = self.dim.size();
        let mut m = CMatrix::zeros(d, d);
        for (e, &k) in self.basis.iter().zip(&self.exponents) {
            m.add_scaled(self.dim.omega(i64::from(k)).eval(), &e.projector());
        }
        m
    }

    /// The operator `M` as a matrix.
    pub fn materialize(&self) -> CMatrix {
        self.power(1)
    }

    /// `M^n`: the prefactor enters as the exact phase `c^n`.
    pub fn power(&self, n: u32) -> CMatrix {
        let phase = self.prefactor * i64::from(n);
        self.spectral_sum().pow(n).scale(phase.eval())
    }
}

/// Eigenvectors of a unitary with distinct eigenvalue phases, plus the eigenvalues.
///
/// Diagonalizes the Hermitian part of `e^{-iδ} U`, whose eigenvalues `cos(φ - δ)` are
/// distinct for the phases `φ = 2πk/d` as long as `δ = π/(2d)`.
fn unitary_eigenbasis(u: &CMatrix) -> Result<(Vec<Ket>, Vec<Complex64>)> {
    let n = u.rows();
    let delta = PI / (2.0 * n as f64);
    let rot = Complex64::new(0.0, -delta).exp();
    let h = CMatrix::from_fn(n, n, |r, c| {
        0.5 * (rot * u[(r, c)] + (rot * u[(c, r)]).conj())
    });
    let eig = hermitian_eigensystem(&h)?;
    let basis: Vec<Ket> = (0..n).map(|k| eig.vector(k)).collect();
    let values = basis.iter().map(|v| v.expectation(u)).collect();
    Ok((basis, values))
}
