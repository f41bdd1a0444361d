//! Classical bounds of the Bell function.
//!
//! A deterministic strategy fixes `A_i = ω^{a_i}`, `B_j = ω^{b_j}`. Summing the
//! `n`-powers turns the Bell function into a count:
//!
//! ```text
//! B(λ) = d/(d-1) · (Δ - d),   Δ = #{(i, j) : a_i + b_j + i·j ≡ 0 (mod d)}
//! ```
//!
//! so bounds reduce to the extrema of Δ, which are `0` and `3d - 3`.

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::PrimeDim;

/// Largest dimension for which exhaustive enumeration is attempted.
pub const BRUTE_FORCE_MAX_D: u32 = 5;

/// One deterministic hidden-variable strategy: Alice's exponents `a_i` and Bob's `b_j`, mod `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LhvAssignment {
    d: PrimeDim,
    a: Vec<u32>,
    b: Vec<u32>,
}

impl LhvAssignment {
    pub fn new(d: PrimeDim, a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        for side in [&a, &b] {
            if side.len() != d.size() {
                return Err(Error::DimensionMismatch {
                    expected: d.size(),
                    found: side.len(),
                });
            }
            if side.iter().any(|&x| x >= d.get()) {
                return Err(Error::InvalidArgument(format!(
                    "assignment entries must lie in 0..{d}, got {side:?}"
                )));
            }
        }
        Ok(Self { d, a, b })
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    pub fn alice(&self) -> &[u32] {
        &self.a
    }

    pub fn bob(&self) -> &[u32] {
        &self.b
    }

    /// Δ: the number of cells with `a_i + b_j + i·j ≡ 0 (mod d)`.
    pub fn delta_count(&self) -> u32 {
        delta_count_raw(self.d.get(), &self.a, &self.b)
    }

    /// Exact Bell value `d/(d-1) · (Δ - d)`.
    pub fn bell_value_exact(&self) -> Rational64 {
        bell_value_from_delta(self.d, self.delta_count())
    }

    pub fn bell_value(&self) -> f64 {
        to_f64(self.bell_value_exact())
    }

    /// The same strategy with `a_i → a_i + s`, `b_j → b_j - s`; Δ is unchanged.
    pub fn shifted(&self, s: i64) -> Self {
        let d = self.d;
        let shift = |x: u32, by: i64| d.residue(i64::from(x) + by) as u32;
        Self {
            d,
            a: self.a.iter().map(|&x| shift(x, s)).collect(),
            b: self.b.iter().map(|&x| shift(x, -s)).collect(),
        }
    }
}

fn delta_count_raw(d: u32, a: &[u32], b: &[u32]) -> u32 {
    let mut count = 0;
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            if (ai + bj + (i as u32 * j as u32) % d).is_multiple_of(d) {
                count += 1;
            }
        }
    }
    count
}

/// The classical value summed directly with complex phases, without the Δ reduction:
/// `Re (1/(d-1)) Σ_{n=1}^{d-1} Σ_{i,j} ω^{n(ij + a_i + b_j)}`.
pub fn direct_bell_value(asg: &LhvAssignment) -> f64 {
    let d = asg.d;
    let mut sum = num_complex::Complex64::new(0.0, 0.0);
    for n in 1..i64::from(d.get()) {
        for (i, &a) in asg.a.iter().enumerate() {
            for (j, &b) in asg.b.iter().enumerate() {
                let k = n * ((i * j) as i64 + i64::from(a) + i64::from(b));
                sum += d.omega(k).eval();
            }
        }
    }
    sum.re / f64::from(d.get() - 1)
}

/// `d/(d-1) · (Δ - d)`.
pub fn bell_value_from_delta(d: PrimeDim, delta: u32) -> Rational64 {
    let d = i64::from(d.get());
    Rational64::new(d * (i64::from(delta) - d), d - 1)
}

pub(crate) fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Classical bounds `min <= ⟨B⟩ <= max`, held exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: Rational64,
    pub max: Rational64,
}

impl Bounds {
    pub fn min_f64(&self) -> f64 {
        to_f64(self.min)
    }

    pub fn max_f64(&self) -> f64 {
        to_f64(self.max)
    }
}

/// `(-d²/(d-1), d(2d-3)/(d-1))`, from `Δ_min = 0` and `Δ_max = 3d - 3`.
pub fn analytic_bounds(d: PrimeDim) -> Bounds {
    let n = i64::from(d.get());
    Bounds {
        min: Rational64::new(-n * n, n - 1),
        max: Rational64::new(n * (2 * n - 3), n - 1),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruteForceBounds {
    pub bounds: Bounds,
    pub argmin: LhvAssignment,
    pub argmax: LhvAssignment,
    /// Assignments visited (with `a_0 = 0` fixed).
    pub assignments_checked: u64,
}

/// Exact bounds by exhaustive search over deterministic assignments.
///
/// The shift `a_i → a_i + s, b_j → b_j - s` preserves Δ, so `a_0 = 0` is fixed and
/// `d^{2d-1}` assignments are visited. Ties keep the first assignment in
/// lexicographic order, so witnesses do not depend on thread scheduling.
pub fn brute_force_bounds(d: PrimeDim) -> Result<BruteForceBounds> {
    let n = d.get();
    if n > BRUTE_FORCE_MAX_D {
        return Err(Error::BruteForceTooLarge(n));
    }
    let size = d.size();
    let alice_count = (n as u64).pow(n - 1);
    let bob_count = (n as u64).pow(n);

    #[derive(Clone, Copy)]
    struct Extrema {
        min: (u32, u64),
        max: (u32, u64),
    }

    let merge = |x: Extrema, y: Extrema| Extrema {
        min: if y.min.0 < x.min.0 || (y.min.0 == x.min.0 && y.min.1 < x.min.1) {
            y.min
        } else {
            x.min
        },
        max: if y.max.0 > x.max.0 || (y.max.0 == x.max.0 && y.max.1 < x.max.1) {
            y.max
        } else {
            x.max
        },
    };

    let ext = (0..alice_count)
        .into_par_iter()
        .map(|alice_index| {
            let mut a = vec![0u32; size];
            decode(alice_index, n, &mut a[1..]);
            let mut b = vec![0u32; size];
            let mut ext = Extrema {
                min: (u32::MAX, u64::MAX),
                max: (0, u64::MAX),
            };
            for bob_index in 0..bob_count {
                let delta = delta_count_raw(n, &a, &b);
                let index = alice_index * bob_count + bob_index;
                if delta < ext.min.0 {
                    ext.min = (delta, index);
                }
                if delta > ext.max.0 || ext.max.1 == u64::MAX {
                    ext.max = (delta, index);
                }
                increment(&mut b, n);
            }
            ext
        })
        .reduce(
            || Extrema {
                min: (u32::MAX, u64::MAX),
                max: (0, u64::MAX),
            },
            merge,
        );

    let witness = |index: u64| {
        let mut a = vec![0u32; size];
        let mut b = vec![0u32; size];
        decode(index / bob_count, n, &mut a[1..]);
        decode(index % bob_count, n, &mut b);
        LhvAssignment { d, a, b }
    };
    Ok(BruteForceBounds {
        bounds: Bounds {
            min: bell_value_from_delta(d, ext.min.0),
            max: bell_value_from_delta(d, ext.max.0),
        },
        argmin: witness(ext.min.1),
        argmax: witness(ext.max.1),
        assignments_checked: alice_count * bob_count,
    })
}

/// Writes `index` in base `base` into `digits`, most significant digit first.
fn decode(mut index: u64, base: u32, digits: &mut [u32]) {
    for slot in digits.iter_mut().rev() {
        *slot = (index % u64::from(base)) as u32;
        index /= u64::from(base);
    }
}

/// Odometer step matching [`decode`]'s digit order.
fn increment(digits: &mut [u32], base: u32) {
    for slot in digits.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return;
        }
        *slot = 0;
    }
}
