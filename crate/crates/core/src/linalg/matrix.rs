use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest row or column count a tensor product may produce.
pub const MAX_TENSOR_DIM: usize = 100_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics when the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "entry count must equal rows * cols"
        );
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (k, &z) in entries.iter().enumerate() {
            m[(k, k)] = z;
        }
        m
    }

    /// Matrix whose columns are the given kets.
    pub fn from_columns(columns: &[Ket]) -> Self {
        let rows = columns.first().map_or(0, Ket::dim);
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Ket {
        Ket::new((0..self.rows).map(|r| self[(r, c)]).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: Complex64, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|k| self[(k, k)]).sum()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &CMatrix) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = ZERO;
        for r in 0..self.rows {
            for c in 0..self.cols {
                acc += self[(r, c)] * other[(c, r)];
            }
        }
        acc
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        assert_eq!(
            self.cols,
            ket.dim(),
            "operator and ket dimensions must agree"
        );
        Ket::new(
            (0..self.rows)
                .map(|r| {
                    self.data[r * self.cols..(r + 1) * self.cols]
                        .iter()
                        .zip(ket.amplitudes())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    /// `self^n` by repeated multiplication; `n = 0` gives the identity.
    pub fn pow(&self, n: u32) -> CMatrix {
        assert!(self.is_square());
        let mut acc = CMatrix::identity(self.rows);
        for _ in 0..n {
            acc = acc.matmul(self);
        }
        acc
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M - M†|` entrywise.
    pub fn hermitian_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `max |M M† - I|` entrywise.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.matmul(&self.adjoint())
            .max_abs_diff(&CMatrix::identity(self.rows))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Kronecker product `A ⊗ B` with entry `((i·rB + k), (j·cB + l)) = A[i,j]·B[k,l]`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows > MAX_TENSOR_DIM || cols > MAX_TENSOR_DIM {
        return Err(Error::DimensionTooLarge {
            rows,
            cols,
            max: MAX_TENSOR_DIM,
        });
    }
    let mut out = CMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            if s == ZERO {
                continue;
            }
            for k in 0..b.rows {
                let dst = (i * b.rows + k) * cols + j * b.cols;
                let src = k * b.cols;
                for l in 0..b.cols {
                    out.data[dst + l] = s * b.data[src + l];
                }
            }
        }
    }
    Ok(out)
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        let mut out = self.clone();
        out.add_scaled(-ONE, rhs);
        out
    }
}

impl AddAssign<&CMatrix> for CMatrix {
    fn add_assign(&mut self, rhs: &CMatrix) {
        self.add_scaled(ONE, rhs);
    }
}

/// Complex state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amps: Vec<Complex64>,
}

impl Ket {
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    /// `|index⟩` in a `dim`-dimensional space.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Ket {
        let n = self.norm();
        Ket::new(self.amps.iter().map(|z| z / n).collect())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `⟨self|op|self⟩`.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        self.inner(&op.apply(self))
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ket::new(amps)
    }

    pub fn scale(&self, s: Complex64) -> Ket {
        Ket::new(self.amps.iter().map(|z| z * s).collect())
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> CMatrix {
        CMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            self.amps[r] * self.amps[c].conj()
        })
    }

    pub fn distance(&self, other: &Ket) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Reshapes a bipartite ket of dimension `d²` into the `d × d` coefficient matrix
    /// `Ψ[k, l] = ⟨kl|ψ⟩`.
    pub fn as_bipartite_matrix(&self, d: usize) -> CMatrix {
        assert_eq!(self.dim(), d * d);
        CMatrix::from_vec(d, d, self.amps.clone())
    }
}

impl Index<usize> for Ket {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.amps[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(rows: usize, cols: usize, seed: f64) -> CMatrix {
        CMatrix::from_fn(rows, cols, |r, k| {
            c(seed + r as f64 - 0.5 * k as f64, (r * k) as f64 - seed)
        })
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = CMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), CMatrix::identity(4));
    }

    #[test]
    fn tensor_shape_and_index_convention() {
        let a = sample(3, 3, 1.0);
        let b = sample(3, 3, 2.0);
        let t = tensor(&a, &b).unwrap();
        assert_eq!((t.rows(), t.cols()), (9, 9));
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        assert_eq!(t[(i * 3 + k, j * 3 + l)], a[(i, j)] * b[(k, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_is_associative() {
        let a = sample(2, 3, 0.5);
        let b = sample(3, 2, -1.0);
        let m = sample(2, 2, 3.0);
        let left = tensor(&tensor(&a, &b).unwrap(), &m).unwrap();
        let right = tensor(&a, &tensor(&b, &m).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn tensor_rejects_oversized_result() {
        let a = CMatrix::zeros(400, 1);
        let b = CMatrix::zeros(400, 1);
        assert!(matches!(
            tensor(&a, &b),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn matmul_matches_definition() {
        let a = sample(2, 3, 1.0);
        let b = sample(3, 4, 2.0);
        let p = &a * &b;
        for r in 0..2 {
            for k in 0..4 {
                let expect: Complex64 = (0..3).map(|m| a[(r, m)] * b[(m, k)]).sum();
                assert!((p[(r, k)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_product_matches_full_product() {
        let a = sample(3, 3, 0.25);
        let b = sample(3, 3, -0.75);
        assert!((a.trace_product(&b) - (&a * &b).trace()).norm() < 1e-12);
    }

    #[test]
    fn ket_tensor_matches_matrix_tensor() {
        let u = Ket::new(vec![c(1.0, 0.5), c(-0.5, 2.0)]);
        let v = Ket::new(vec![c(0.0, 1.0), c(3.0, 0.0), c(1.0, 1.0)]);
        let um = CMatrix::from_columns(std::slice::from_ref(&u));
        let vm = CMatrix::from_columns(std::slice::from_ref(&v));
        let t = tensor(&um, &vm).unwrap();
        assert_eq!(t.column(0), u.tensor(&v));
    }

    #[test]
    fn hermitian_asymmetry_detects_skew() {
        let mut m = CMatrix::identity(2);
        assert_eq!(m.hermitian_asymmetry(), 0.0);
        m[(0, 1)] = c(0.0, 1e-3);
        assert!((m.hermitian_asymmetry() - 1e-3).abs() < 1e-15);
    }
}
