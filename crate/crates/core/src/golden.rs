//! Exact arithmetic in the ring ℤ[τ], τ = (1 + √5)/2.
//!
//! Fibonacci lattice points are labelled by pairs (n, m) standing for `n + mτ`; all
//! physical and internal coordinates are derived from these labels on demand.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// `n + m·τ` with integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GoldenInteger {
    pub n: i64,
    pub m: i64,
}

impl GoldenInteger {
    pub const ZERO: Self = Self { n: 0, m: 0 };
    pub const ONE: Self = Self { n: 1, m: 0 };
    pub const TAU: Self = Self { n: 0, m: 1 };

    pub const fn new(n: i64, m: i64) -> Self {
        Self { n, m }
    }

    /// Galois conjugate, τ ↦ 1 − τ.
    pub fn conjugate(self) -> Self {
        Self::new(self.n + self.m, -self.m)
    }

    /// Star map of the Fibonacci scheme on unscaled labels: `n + mτ ↦ nτ − m`.
    ///
    /// Equals `τ · conjugate(self)`.
    pub fn star(self) -> Self {
        Self::new(-self.m, self.n)
    }

    /// Field norm `(n + mτ)(n + mτ')`.
    pub fn norm(self) -> i64 {
        self.n * self.n + self.n * self.m - self.m * self.m
    }

    pub fn to_scalar<T: Scalar>(self) -> T {
        T::of_i64(self.n) + T::of_i64(self.m) * T::golden()
    }
}

impl Add for GoldenInteger {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.n + o.n, self.m + o.m)
    }
}

impl Sub for GoldenInteger {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.n - o.n, self.m - o.m)
    }
}

impl Neg for GoldenInteger {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.n, -self.m)
    }
}

impl Mul for GoldenInteger {
    type Output = Self;
    // τ² = τ + 1
    fn mul(self, o: Self) -> Self {
        let mm = self.m * o.m;
        Self::new(self.n * o.n + mm, self.n * o.m + self.m * o.n + mm)
    }
}

impl fmt::Display for GoldenInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}τ", self.n, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tau_squared() {
        assert_eq!(GoldenInteger::TAU * GoldenInteger::TAU, GoldenInteger::new(1, 1));
    }

    #[test]
    fn star_is_tau_times_conjugate() {
        let x = GoldenInteger::new(3, -7);
        assert_eq!(x.star(), GoldenInteger::TAU * x.conjugate());
    }

    proptest! {
        #[test]
        fn ring_homomorphism_into_reals(a in -500i64..500, b in -500i64..500, c in -500i64..500, d in -500i64..500) {
            let x = GoldenInteger::new(a, b);
            let y = GoldenInteger::new(c, d);
            let fx: f64 = x.to_scalar();
            let fy: f64 = y.to_scalar();
            let tol = 1e-9 * (1.0 + (fx * fy).abs());
            prop_assert!(((x * y).to_scalar::<f64>() - fx * fy).abs() < tol);
            prop_assert!(((x + y).to_scalar::<f64>() - (fx + fy)).abs() < 1e-9);
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
        }
    }
}
