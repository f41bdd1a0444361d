//! Exact phases measured in turns.
//!
//! A [`RationalPhase`] `p/q` stands for `exp(i 2π p/q)`. All constructions
//! in this crate (powers of ω, the fractional powers used by the phase
//! shifters, the θ_k exponents) stay rational until a matrix entry is
//! materialized, at which point [`RationalPhase::eval`] is called once.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// A unit complex number `exp(i 2π num/den)`, stored reduced and wrapped into `[0, 1)` turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPhase {
    num: i64,
    den: i64,
}

impl RationalPhase {
    pub const ZERO: RationalPhase = RationalPhase { num: 0, den: 1 };

    /// Phase of `num/den` turns. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator must be non-zero");
        Self::from_turns(Rational64::new(num, den))
    }

    pub fn from_turns(turns: Rational64) -> Self {
        let den = *turns.denom();
        let num = turns.numer().mod_floor(&den);
        let g = num.gcd(&den);
        if num == 0 {
            return Self::ZERO;
        }
        Self {
            num: num / g,
            den: den / g,
        }
    }

    /// `ω^exponent` with `ω = exp(i 2π / d)`; fractional exponents use the principal value
    /// `exp(i 2π exponent / d)`.
    pub fn omega_power(exponent: Rational64, d: u32) -> Self {
        Self::from_turns(exponent / Rational64::from_integer(i64::from(d)))
    }

    /// `ω^k` for an integer `k`.
    pub fn omega(k: i64, d: u32) -> Self {
        Self::new(k, i64::from(d))
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn turns(&self) -> Rational64 {
        Rational64::new(self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn eval(&self) -> Complex64 {
        // Quarter turns come out exact; everything else goes through sin/cos
        // of an angle already reduced into [0, 2π).
        if (4 * self.num) % self.den == 0 {
            return match 4 * self.num / self.den {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        let angle = std::f64::consts::TAU * (self.num as f64) / (self.den as f64);
        Complex64::new(angle.cos(), angle.sin())
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        -*self
    }
}

impl Default for RationalPhase {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for RationalPhase {
    type Output = RationalPhase;

    fn add(self, rhs: Self) -> Self {
        Self::from_turns(self.turns() + rhs.turns())
    }
}

impl Sub for RationalPhase {
    type Output = RationalPhase;

    fn sub(self, rhs: Self) -> Self {
        Self::from_turns(self.turns() - rhs.turns())
    }
}

impl Neg for RationalPhase {
    type Output = RationalPhase;

    fn neg(self) -> Self {
        Self::from_turns(-self.turns())
    }
}

/// Integer power of the phase.
impl Mul<i64> for RationalPhase {
    type Output = RationalPhase;

    fn mul(self, rhs: i64) -> Self {
        Self::from_turns(self.turns() * rhs)
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(2πi·{}/{})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_and_half_turn() {
        assert_eq!(RationalPhase::new(0, 1).eval(), Complex64::new(1.0, 0.0));
        assert_eq!(RationalPhase::new(1, 2).eval(), Complex64::new(-1.0, 0.0));
        assert_eq!(RationalPhase::new(0, 7), RationalPhase::ZERO);
    }

    #[test]
    fn twelfth_root_of_qutrit_omega() {
        // ω^{1/12} with ω = exp(2πi/3) is 1/36 of a turn.
        let p = RationalPhase::omega_power(Rational64::new(1, 12), 3);
        assert_eq!(p, RationalPhase::new(1, 36));
        let z = p.eval();
        assert!((z.re - (PI / 18.0).cos()).abs() < 1e-15);
        assert!((z.im - (PI / 18.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn stored_reduced_and_wrapped() {
        let p = RationalPhase::new(-6, 8);
        assert_eq!((p.numerator(), p.denominator()), (1, 4));
        let q = RationalPhase::new(14, 4);
        assert_eq!((q.numerator(), q.denominator()), (1, 2));
    }

    #[test]
    fn integer_power() {
        let w = RationalPhase::omega(1, 3);
        assert_eq!(w * 3, RationalPhase::ZERO);
        assert_eq!(w * 2, RationalPhase::omega(-1, 3));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn phase_times_inverse_is_one(num in -10_000i64..10_000, den in 1i64..5_000) {
            let p = RationalPhase::new(num, den);
            let z = p.eval() * (-p).eval();
            prop_assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
            prop_assert!((p.eval().norm() - 1.0).abs() < 1e-15);
        }

        #[test]
        fn eval_is_homomorphic(a in -500i64..500, b in 1i64..200, c in -500i64..500, e in 1i64..200) {
            let p = RationalPhase::new(a, b);
            let q = RationalPhase::new(c, e);
            let lhs = p.eval() * q.eval();
            let rhs = (p + q).eval();
            prop_assert!((lhs.norm() - rhs.norm()).abs() < 1e-14);
            let arg = (lhs / rhs).arg();
            prop_assert!(arg.abs() < 1e-14);
        }
    }
}
