//! Floating point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; constants in this crate are written as `f64` literals.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    fn of_i64(x: i64) -> Self {
        Self::from_i64(x).expect("i64 is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// The golden mean (1 + √5) / 2.
    fn golden() -> Self {
        (Self::one() + Self::of(5.0).sqrt()) / Self::of(2.0)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `sin(π a x) / (π x)` with the removable singularity at `x = 0` handled by its series.
pub fn scaled_sinc<T: Scalar>(a: T, x: T) -> T {
    let pi = T::PI();
    let t = pi * a * x;
    if x.abs() < T::of(1e-8) {
        // sin(t)/t = 1 - t²/6 + t⁴/120
        let t2 = t * t;
        a * (T::one() - t2 / T::of(6.0) + t2 * t2 / T::of(120.0))
    } else {
        t.sin() / (pi * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_satisfies_its_quadratic() {
        let tau = f64::golden();
        assert!((tau * tau - tau - 1.0).abs() < 1e-15);
        let tau32 = f32::golden();
        assert!((tau32 - 1.618_034).abs() < 1e-6);
    }

    #[test]
    fn sinc_branches_agree_near_zero() {
        let a = 1.376_381_920_471_173_5;
        let near = scaled_sinc(a, 1.01e-8);
        let at = scaled_sinc(a, 0.99e-8);
        assert!((near - at).abs() < 1e-12);
        assert_eq!(scaled_sinc(a, 0.0), a);
    }
}
