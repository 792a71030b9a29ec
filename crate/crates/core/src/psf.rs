//! Numerical Poisson summation on lattices: `Σ_{ℓ∈L} g(ℓ) = dens(L) Σ_{k∈L⁰} ĝ(k)`.

use crate::error::Result;
use crate::euclid::Lattice;
use crate::scalar::{scaled_sinc, Scalar};

/// A test function together with its Fourier transform `ĝ(k) = ∫ g(x) e^{-2πi k·x} dx`.
pub trait PsfTestFunction<T: Scalar> {
    fn value(&self, x: &[T]) -> T;
    fn transform(&self, k: &[T]) -> T;
}

/// `e^{-π|x|²}`, its own transform.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gaussian;

impl<T: Scalar> PsfTestFunction<T> for Gaussian {
    fn value(&self, x: &[T]) -> T {
        let r2 = x.iter().fold(T::zero(), |acc, &v| acc + v * v);
        (-T::PI() * r2).exp()
    }

    fn transform(&self, k: &[T]) -> T {
        self.value(k)
    }
}

/// `f ∗ f̃` for the hat `f(x) = max(0, 1 - |x|)`, taken coordinatewise.
///
/// In one dimension this is the cubic B-spline supported on `[-2, 2]` with value `2/3` at
/// the origin; its transform is `|f̂|² = sinc⁴`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HatAutocorrelation;

impl HatAutocorrelation {
    fn profile<T: Scalar>(x: T) -> T {
        let t = x.abs();
        let (one, two, three, six) = (T::one(), T::of(2.0), T::of(3.0), T::of(6.0));
        if t >= two {
            T::zero()
        } else if t >= one {
            (two - t).powi(3) / six
        } else {
            two / three - t * t + t * t * t / two
        }
    }
}

impl<T: Scalar> PsfTestFunction<T> for HatAutocorrelation {
    fn value(&self, x: &[T]) -> T {
        x.iter().fold(T::one(), |acc, &v| acc * Self::profile(v))
    }

    fn transform(&self, k: &[T]) -> T {
        k.iter().fold(T::one(), |acc, &v| acc * scaled_sinc(T::one(), v).powi(4))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsfCheck<T> {
    /// `Σ_{ℓ∈L} g(ℓ)`.
    pub lattice_side: T,
    /// `dens(L) Σ_{k∈L⁰} ĝ(k)`.
    pub dual_side: T,
    pub abs_error: T,
    pub terms: usize,
}

fn coefficient_cube(dim: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(dim as u32);
    (0..total).map(move |mut idx| {
        let mut c = vec![0i64; dim];
        for slot in c.iter_mut() {
            *slot = (idx % side) as i64 - radius;
            idx /= side;
        }
        c
    })
}

/// Truncated sums over lattice and dual lattice points with coefficients in `[-radius, radius]^D`.
///
/// Terms are added in order of increasing magnitude of the summand so the result is stable.
pub fn poisson_sides<T: Scalar, F: PsfTestFunction<T> + ?Sized>(
    lattice: &Lattice<T>,
    g: &F,
    radius: i64,
) -> Result<PsfCheck<T>> {
    let dual = lattice.dual()?;
    let sum_sorted = |mut v: Vec<T>| {
        v.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap_or(std::cmp::Ordering::Equal));
        v.into_iter().fold(T::zero(), |acc, x| acc + x)
    };
    let direct: Vec<T> = coefficient_cube(lattice.dim(), radius).map(|c| g.value(&lattice.point(&c))).collect();
    let terms = direct.len();
    let spectral: Vec<T> = coefficient_cube(dual.dim(), radius).map(|c| g.transform(&dual.point(&c))).collect();
    let lattice_side = sum_sorted(direct);
    let dual_side = lattice.density() * sum_sorted(spectral);
    Ok(PsfCheck { lattice_side, dual_side, abs_error: (lattice_side - dual_side).abs(), terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn gaussian_on_scaled_integers() {
        for a in [0.5, 1.0, 2.0] {
            let l = Lattice::<f64>::scaled_integers(a).unwrap();
            let r = poisson_sides(&l, &Gaussian, 40).unwrap();
            assert!(r.abs_error <= 1e-10, "a = {a}: {r:?}");
            assert_eq!(r.terms, 81);
        }
        // Σ_n e^{-πn²} = π^{1/4}/Γ(3/4)
        let r = poisson_sides(&Lattice::<f64>::scaled_integers(1.0).unwrap(), &Gaussian, 40).unwrap();
        assert!((r.lattice_side - 1.086_434_811_213_308).abs() < 1e-14);
    }

    #[test]
    fn gaussian_on_skew_plane_lattice() {
        let basis = Matrix::from_columns(&[vec![1.0, 0.0], vec![0.5, 0.9]]).unwrap();
        let l = Lattice::new(basis).unwrap();
        let r = poisson_sides(&l, &Gaussian, 15).unwrap();
        assert!(r.abs_error <= 1e-10, "{r:?}");
    }

    #[test]
    fn spline_profile() {
        let g = HatAutocorrelation;
        let v = |x: f64| PsfTestFunction::<f64>::value(&g, &[x]);
        assert!((v(0.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((v(1.0) - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(v(2.0), 0.0);
        assert_eq!(v(-2.5), 0.0);
        // f ∗ f at x by midpoint quadrature
        let hat = |t: f64| (1.0 - t.abs()).max(0.0);
        for x in [0.0, 0.3, 1.2, 1.9] {
            let n = 40_000;
            let h = 4.0 / n as f64;
            let q: f64 = (0..n).map(|i| -2.0 + (i as f64 + 0.5) * h).map(|t| hat(t) * hat(x - t) * h).sum();
            assert!((q - v(x)).abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn spline_poisson_summation() {
        // on ℤ the dual sum is exactly ĝ(0) = 1, and Σ g(n) = 2/3 + 2/6 = 1
        let z = Lattice::<f64>::scaled_integers(1.0).unwrap();
        let r = poisson_sides(&z, &HatAutocorrelation, 40).unwrap();
        assert!(r.abs_error < 1e-14);
        // sinc⁴ decays like k⁻⁴, so the dual side needs a long truncation for aℤ, a = 2
        let l = Lattice::<f64>::scaled_integers(2.0).unwrap();
        let r = poisson_sides(&l, &HatAutocorrelation, 4000).unwrap();
        assert!((r.lattice_side - 2.0 / 3.0).abs() < 1e-15);
        assert!(r.abs_error < 1e-11, "{r:?}");
        let l = Lattice::<f64>::scaled_integers(0.5).unwrap();
        let r = poisson_sides(&l, &HatAutocorrelation, 40).unwrap();
        assert!(r.abs_error < 1e-12, "{r:?}");
    }

    #[test]
    fn single_precision() {
        let l = Lattice::<f32>::scaled_integers(0.5).unwrap();
        let r = poisson_sides(&l, &Gaussian, 40).unwrap();
        assert!(r.abs_error < 1e-5);
    }
}
