//! Hermitian eigensolver (cyclic complex Jacobi).
//!
//! Each rotation first removes the phase of the pivot `a_pq`, then applies the
//! classical real Jacobi rotation to the resulting real symmetric 2×2 block.
//! Matrices here are at most 289×289, so the O(n³) sweeps are acceptable and
//! Jacobi's small-eigenvalue accuracy is welcome.

use num_complex::Complex64;

use super::matrix::{CMatrix, Ket};
use crate::error::{Error, Result};

/// Largest `|M - M†|` entry accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct Eigensystem {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, column `k` belongs to `values[k]`.
    pub vectors: CMatrix,
}

impl Eigensystem {
    pub fn vector(&self, k: usize) -> Ket {
        self.vectors.column(k)
    }

    pub fn max_value(&self) -> f64 {
        *self.values.last().expect("empty eigensystem")
    }
}

pub fn hermitian_eigensystem(m: &CMatrix) -> Result<Eigensystem> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let asymmetry = m.hermitian_asymmetry();
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let n = m.rows();
    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    let mut a = CMatrix::from_fn(n, n, |r, c| 0.5 * (m[(r, c)] + m[(c, r)].conj()));
    let mut v = CMatrix::identity(n);

    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|k| a[(k, k)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigensystem { values, vectors })
}

/// Zeroes `a[p,q]` with the unitary `J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]` acting on
/// coordinates `p, q`, updating `a ← J† a J` and `v ← v J`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r < 1e-300 || r <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -s * phase.conj();
    let jqq = c * phase.conj();

    let n = a.rows();
    // a ← a J (columns p, q)
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * jpp + y * jqp;
        a[(k, q)] = x * jpq + y * jqq;
    }
    // a ← J† a (rows p, q)
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = jpp.conj() * x + jqp.conj() * y;
        a[(q, k)] = jpq.conj() * x + jqq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * jpp + y * jqp;
        v[(k, q)] = x * jpq + y * jqq;
    }
}

/// `exp(i H)` for Hermitian `H`, via its eigensystem.
pub fn expi_hermitian(h: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eigensystem(h)?;
    let n = h.rows();
    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&x| Complex64::new(0.0, x).exp())
        .collect();
    let v = &eig.vectors;
    Ok(CMatrix::from_fn(n, n, |r, c| {
        (0..n)
            .map(|k| v[(r, k)] * phases[k] * v[(c, k)].conj())
            .sum()
    }))
}
