//! Euclidean cut-and-project schemes: a lattice in ℝ^d × ℝ^n, its dual, box windows
//! and the Fibonacci scheme.
//!
//! Lattice points are identified by their integer coefficient vectors with respect to
//! the basis. Real coordinates are derived from the coefficients, never stored as the
//! primary representation.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::golden::GoldenInteger;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Determinants below this are treated as singular.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Coefficient radius of the default injectivity spot check.
const INJECTIVITY_RADIUS: i64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Closure {
    /// `[lower, upper)`
    #[default]
    HalfOpenRight,
    /// `[lower, upper]`
    Closed,
}

/// A bounded interval of the real line, used both as a window and as a sampling region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lower: T,
    upper: T,
    closure: Closure,
}

pub type IntervalWindow<T> = Interval<T>;
pub type Region<T> = Interval<T>;

impl<T: Scalar> Interval<T> {
    pub fn new(lower: T, upper: T, closure: Closure) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::InvalidInput(format!("interval bounds must be finite, got [{lower}, {upper}]")));
        }
        if lower >= upper {
            return Err(Error::EmptyRegion);
        }
        Ok(Self { lower, upper, closure })
    }

    pub fn half_open(lower: T, upper: T) -> Result<Self> {
        Self::new(lower, upper, Closure::HalfOpenRight)
    }

    pub fn closed(lower: T, upper: T) -> Result<Self> {
        Self::new(lower, upper, Closure::Closed)
    }

    /// `[-r, r]`.
    pub fn centered(radius: T) -> Result<Self> {
        Self::closed(-radius, radius)
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    /// Lebesgue measure `upper - lower`.
    pub fn measure(&self) -> T {
        self.upper - self.lower
    }

    pub fn contains(&self, x: T) -> bool {
        match self.closure {
            Closure::HalfOpenRight => self.lower <= x && x < self.upper,
            Closure::Closed => self.lower <= x && x <= self.upper,
        }
    }

    pub fn shifted(&self, t: T) -> Self {
        Self { lower: self.lower + t, upper: self.upper + t, closure: self.closure }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        let lower_ok = other.lower <= self.lower;
        let upper_ok = match (self.closure, other.closure) {
            (Closure::Closed, Closure::HalfOpenRight) => self.upper < other.upper,
            _ => self.upper <= other.upper,
        };
        lower_ok && upper_ok
    }

    /// Covariogram `(1_W * 1̃_W)(z) = max(0, |W| - |z|)`.
    pub fn covariogram(&self, z: T) -> T {
        (self.measure() - z.abs()).max(T::zero())
    }
}

/// A window in ℝ^n that is a product of intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxWindow<T> {
    axes: Vec<Interval<T>>,
}

impl<T: Scalar> BoxWindow<T> {
    pub fn new(axes: Vec<Interval<T>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidInput("box window needs at least one axis".into()));
        }
        Ok(Self { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Interval<T>] {
        &self.axes
    }

    /// The single interval of a one-dimensional window.
    pub fn as_interval(&self) -> Option<&Interval<T>> {
        match self.axes.as_slice() {
            [w] => Some(w),
            _ => None,
        }
    }

    pub fn measure(&self) -> T {
        self.axes.iter().fold(T::one(), |acc, w| acc * w.measure())
    }

    pub fn contains(&self, y: &[T]) -> bool {
        y.len() == self.axes.len() && self.axes.iter().zip(y).all(|(w, &v)| w.contains(v))
    }

    pub fn covariogram(&self, z: &[T]) -> T {
        self.axes.iter().zip(z).fold(T::one(), |acc, (w, &v)| acc * w.covariogram(v))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.axes.iter().zip(&other.axes).all(|(a, b)| a.is_subset_of(b))
    }
}

impl<T: Scalar> From<Interval<T>> for BoxWindow<T> {
    fn from(w: Interval<T>) -> Self {
        Self { axes: vec![w] }
    }
}

/// A full-rank lattice in ℝ^D given by the columns of its basis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice<T> {
    basis: Matrix<T>,
    inverse: Matrix<T>,
    covolume: T,
}

impl<T: Scalar> Lattice<T> {
    pub fn new(basis: Matrix<T>) -> Result<Self> {
        let det = basis.determinant();
        if !det.is_finite() || det.abs() < T::of(SINGULAR_TOLERANCE) {
            return Err(Error::SingularBasis { det: det.as_f64() });
        }
        let inverse = basis.inverse().ok_or(Error::SingularBasis { det: det.as_f64() })?;
        Ok(Self { basis, inverse, covolume: det.abs() })
    }

    /// The one-dimensional lattice `aℤ`.
    pub fn scaled_integers(a: T) -> Result<Self> {
        Self::new(Matrix::diagonal(&[a]))
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn covolume(&self) -> T {
        self.covolume
    }

    pub fn density(&self) -> T {
        T::one() / self.covolume
    }

    /// Dual lattice `{y : x·y ∈ ℤ for all x ∈ L}`, with basis the inverse transpose.
    pub fn dual(&self) -> Result<Self> {
        Self::new(self.inverse.transpose())
    }

    pub fn point(&self, coeffs: &[i64]) -> Vec<T> {
        self.basis.mul_coeffs(coeffs)
    }

    /// Real coefficients of a point of ℝ^D.
    pub fn coefficients(&self, x: &[T]) -> Vec<T> {
        self.inverse.mul_vec(x)
    }

    /// Integer coefficient ranges guaranteed to cover every lattice point in the closed box,
    /// with one unit of margin on either side.
    pub fn coefficient_bounds(&self, bounds: &[(T, T)]) -> Vec<(i64, i64)> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let (mut lo, mut hi) = (T::zero(), T::zero());
                for (j, &(a, b)) in bounds.iter().enumerate() {
                    let c = self.inverse.get(i, j);
                    let (p, q) = (c * a, c * b);
                    lo = lo + p.min(q);
                    hi = hi + p.max(q);
                }
                (to_i64(lo.floor()) - 1, to_i64(hi.ceil()) + 1)
            })
            .collect()
    }

    /// All lattice points in the closed box `∏ [lo_i, hi_i]`, as (coefficients, coordinates).
    ///
    /// One coefficient is solved for directly from the constraint on the thinnest box axis,
    /// so thin strips cost time proportional to the number of points rather than the
    /// volume of the coefficient bounding box.
    pub fn points_in_box(&self, bounds: &[(T, T)]) -> Vec<(Vec<i64>, Vec<T>)> {
        let dim = self.dim();
        assert_eq!(bounds.len(), dim, "box dimension must match the lattice");
        let ranges = self.coefficient_bounds(bounds);

        let row = (0..dim)
            .min_by(|&a, &b| {
                let ea = bounds[a].1 - bounds[a].0;
                let eb = bounds[b].1 - bounds[b].0;
                ea.partial_cmp(&eb).unwrap()
            })
            .unwrap();
        let pivot = (0..dim)
            .max_by(|&a, &b| {
                self.basis.get(row, a).abs().partial_cmp(&self.basis.get(row, b).abs()).unwrap()
            })
            .unwrap();
        let slope = self.basis.get(row, pivot);
        let slack = T::of(1e-9) * (T::one() + bounds[row].0.abs().max(bounds[row].1.abs()));

        let free: Vec<usize> = (0..dim).filter(|&k| k != pivot).collect();
        let mut coeffs: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        let mut out = Vec::new();
        loop {
            let partial: T = free
                .iter()
                .map(|&k| self.basis.get(row, k) * T::of_i64(coeffs[k]))
                .sum();
            let a = (bounds[row].0 - slack - partial) / slope;
            let b = (bounds[row].1 + slack - partial) / slope;
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let lo = to_i64(a.ceil()).max(ranges[pivot].0);
            let hi = to_i64(b.floor()).min(ranges[pivot].1);
            for c in lo..=hi {
                coeffs[pivot] = c;
                let x = self.point(&coeffs);
                let inside = x
                    .iter()
                    .zip(bounds)
                    .all(|(&v, &(l, h))| v >= l - slack && v <= h + slack);
                if inside {
                    out.push((coeffs.clone(), x));
                }
            }

            // odometer step over the free coefficients
            let mut advanced = false;
            for &k in &free {
                if coeffs[k] < ranges[k].1 {
                    coeffs[k] += 1;
                    advanced = true;
                    break;
                }
                coeffs[k] = ranges[k].0;
            }
            if !advanced {
                break;
            }
        }
        out
    }
}

fn to_i64<T: Scalar>(x: T) -> i64 {
    x.to_i64().unwrap_or(if x > T::zero() { i64::MAX / 4 } else { i64::MIN / 4 })
}

/// A lattice point of a scheme together with its projections `(x, x*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint<T> {
    pub coeffs: Vec<i64>,
    pub physical: Vec<T>,
    pub internal: Vec<T>,
}

/// A cut-and-project scheme `(ℝ^d, ℝ^n, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanScheme<T> {
    dim_physical: usize,
    dim_internal: usize,
    lattice: Lattice<T>,
    injectivity_warning: bool,
}

impl<T: Scalar> EuclideanScheme<T> {
    pub fn dim_physical(&self) -> usize {
        self.dim_physical
    }

    pub fn dim_internal(&self) -> usize {
        self.dim_internal
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn basis(&self) -> &Matrix<T> {
        self.lattice.basis()
    }

    pub fn covolume(&self) -> T {
        self.lattice.covolume()
    }

    pub fn density(&self) -> T {
        self.lattice.density()
    }

    /// Set when the spot check found two lattice points with the same physical projection.
    pub fn injectivity_warning(&self) -> bool {
        self.injectivity_warning
    }

    pub fn point(&self, coeffs: &[i64]) -> LatticePoint<T> {
        let x = self.lattice.point(coeffs);
        let internal = x[self.dim_physical..].to_vec();
        let mut physical = x;
        physical.truncate(self.dim_physical);
        LatticePoint { coeffs: coeffs.to_vec(), physical, internal }
    }

    /// Internal coordinate `x*` of the lattice point with the given coefficients.
    pub fn star(&self, coeffs: &[i64]) -> Vec<T> {
        self.point(coeffs).internal
    }

    /// Lattice points whose physical part lies in the closed box `physical` and whose internal
    /// part lies in `window` (respecting the window's closure).
    pub fn points_in_strip(&self, physical: &[(T, T)], window: &BoxWindow<T>) -> Result<Vec<LatticePoint<T>>> {
        if physical.len() != self.dim_physical || window.dim() != self.dim_internal {
            return Err(Error::InvalidInput(format!(
                "strip of dimension {}+{} does not match scheme {}+{}",
                physical.len(),
                window.dim(),
                self.dim_physical,
                self.dim_internal
            )));
        }
        let mut bounds = physical.to_vec();
        bounds.extend(window.axes().iter().map(|w| (w.lower(), w.upper())));
        Ok(self
            .lattice
            .points_in_box(&bounds)
            .into_iter()
            .map(|(coeffs, _)| self.point(&coeffs))
            .filter(|p| {
                window.contains(&p.internal)
                    && p.physical.iter().zip(physical).all(|(&v, &(l, h))| v >= l && v <= h)
            })
            .collect())
    }

    /// Checks that the physical projections of all lattice points with coefficients in
    /// `[-radius, radius]^(d+n)` are pairwise distinct on a 1e-9 grid.
    pub fn projection_is_injective_on(&self, radius: i64) -> bool {
        let dim = self.lattice.dim();
        let mut seen = HashSet::new();
        let mut coeffs = vec![-radius; dim];
        loop {
            let p = self.point(&coeffs);
            let key: Vec<i64> = p.physical.iter().map(|&v| to_i64((v * T::of(1e9)).round())).collect();
            if !seen.insert(key) {
                return false;
            }
            let mut advanced = false;
            for c in coeffs.iter_mut() {
                if *c < radius {
                    *c += 1;
                    advanced = true;
                    break;
                }
                *c = -radius;
            }
            if !advanced {
                return true;
            }
        }
    }

    /// Exact labels of the Fibonacci scheme mapped to `(x, x*)`.
    pub fn fibonacci_coordinates(label: GoldenInteger) -> (T, T) {
        let s = fibonacci_scale::<T>();
        (label.to_scalar::<T>() / s, label.star().to_scalar::<T>() / s)
    }
}

/// Builds a scheme from a `(d+n)×(d+n)` basis whose columns generate the lattice; the first
/// `d` rows are the physical coordinates.
pub fn build_scheme<T: Scalar>(basis: Matrix<T>, d: usize, n: usize) -> Result<EuclideanScheme<T>> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidInput("physical and internal dimensions must be at least 1".into()));
    }
    if basis.dim() != d + n {
        return Err(Error::InvalidInput(format!(
            "basis is {0}×{0}, expected {1}×{1}",
            basis.dim(),
            d + n
        )));
    }
    let lattice = Lattice::new(basis)?;
    let mut scheme = EuclideanScheme { dim_physical: d, dim_internal: n, lattice, injectivity_warning: false };
    scheme.injectivity_warning = !scheme.projection_is_injective_on(INJECTIVITY_RADIUS);
    Ok(scheme)
}

/// Dual scheme `(ℝ^d, ℝ^n, L⁰)`.
pub fn dual_lattice<T: Scalar>(scheme: &EuclideanScheme<T>) -> Result<EuclideanScheme<T>> {
    build_scheme(scheme.lattice.dual()?.basis().clone(), scheme.dim_physical, scheme.dim_internal)
}

/// `√(2 + τ)`, the scale of the rotated square lattice.
pub fn fibonacci_scale<T: Scalar>() -> T {
    (T::of(2.0) + T::golden()).sqrt()
}

/// Length `(1 + τ)/√(2 + τ)` of the Fibonacci window: the internal projection of a unit cell.
pub fn fibonacci_window_length<T: Scalar>() -> T {
    (T::one() + T::golden()) / fibonacci_scale::<T>()
}

/// The rotated square lattice with basis `(1, τ)/√(2+τ)` and `(τ, -1)/√(2+τ)`.
///
/// Coefficients `(n, m)` give physical coordinate `(n + mτ)/√(2+τ)` and internal coordinate
/// `(nτ - m)/√(2+τ)`.
pub fn fibonacci_scheme<T: Scalar>() -> EuclideanScheme<T> {
    let tau = T::golden();
    let s = fibonacci_scale::<T>();
    let basis = Matrix::from_columns(&[vec![T::one() / s, tau / s], vec![tau / s, -T::one() / s]])
        .expect("2×2 basis");
    build_scheme(basis, 1, 1).expect("Fibonacci basis is unimodular")
}

/// Half-open window `[-ℓ/2, ℓ/2)` with `ℓ = (1 + τ)/√(2 + τ)`.
///
/// No point of `π^H(L)` lies on its boundary, so the generated set is symmetric under `x ↦ -x`.
pub fn fibonacci_window<T: Scalar>() -> IntervalWindow<T> {
    let half = fibonacci_window_length::<T>() / T::of(2.0);
    Interval::half_open(-half, half).expect("positive length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(a: f64, b: f64) -> Matrix<f64> {
        Matrix::diagonal(&[a, b])
    }

    #[test]
    fn unit_and_diagonal_densities() {
        let s = build_scheme(Matrix::<f64>::identity(2), 1, 1).unwrap();
        assert_eq!(s.density(), 1.0);
        let s = build_scheme(diag(2.0, 1.0), 1, 1).unwrap();
        assert!((s.density() - 0.5).abs() < 1e-15);
        // π^G(n, m) = 2n forgets m
        assert!(s.injectivity_warning());
    }

    #[test]
    fn fibonacci_determinant_is_one() {
        // direct 2×2 evaluation: (1/s)(-1/s) - (τ/s)(τ/s) = -(1 + τ²)/(2 + τ)
        let tau = f64::golden();
        let s2 = 2.0 + tau;
        let det = -(1.0 + tau * tau) / s2;
        assert!((det.abs() - 1.0).abs() < 1e-14);
        let fib = fibonacci_scheme::<f64>();
        assert!((fib.density() - 1.0).abs() < 1e-12);
        assert!((fib.density() * fib.covolume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_basis_is_rejected() {
        let m = Matrix::from_row_major(2, vec![1.0, 2.0, 0.5, 1.0]).unwrap();
        assert!(matches!(build_scheme(m, 1, 1), Err(Error::SingularBasis { .. })));
        assert!(build_scheme(Matrix::<f64>::identity(2), 0, 2).is_err());
    }

    #[test]
    fn rational_slope_triggers_injectivity_warning() {
        // physical row (1, 1) sends (1, -1) and (0, 0) to the same point
        let m = Matrix::from_row_major(2, vec![1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(build_scheme(m, 1, 1).unwrap().injectivity_warning());
        assert!(!fibonacci_scheme::<f64>().injectivity_warning());
    }

    #[test]
    fn fibonacci_star_map_values() {
        let fib = fibonacci_scheme::<f64>();
        let p = fib.point(&[0, 0]);
        assert_eq!((p.physical[0], p.internal[0]), (0.0, 0.0));
        let p = fib.point(&[1, 0]);
        assert!((p.physical[0] - 0.525_731_112_119_133_6).abs() < 1e-12);
        assert!((p.internal[0] - 0.850_650_808_352_039_9).abs() < 1e-12);
        for (n, m) in [(3, -2), (-7, 11), (13, 8)] {
            let p = fib.point(&[n, m]);
            let (x, xs) = EuclideanScheme::<f64>::fibonacci_coordinates(GoldenInteger::new(n, m));
            assert!((p.physical[0] - x).abs() < 1e-12);
            assert!((p.internal[0] - xs).abs() < 1e-12);
        }
    }

    #[test]
    fn dual_of_diagonal_and_identity() {
        let s = build_scheme(diag(2.0, 1.0), 1, 1).unwrap();
        let d = dual_lattice(&s).unwrap();
        assert!(d.basis().max_abs_diff(&diag(0.5, 1.0)) < 1e-15);
        assert!((d.density() - s.covolume()).abs() < 1e-15);
        let id = build_scheme(Matrix::<f64>::identity(2), 1, 1).unwrap();
        assert_eq!(dual_lattice(&id).unwrap().basis(), id.basis());
    }

    #[test]
    fn fibonacci_dual_is_involution_and_self_dual() {
        let fib = fibonacci_scheme::<f64>();
        let d = dual_lattice(&fib).unwrap();
        let dd = dual_lattice(&d).unwrap();
        assert!(dd.basis().max_abs_diff(fib.basis()) < 1e-12);

        // L⁰ = L as point sets: compare enumerations in a box
        let bounds = [(-6.0, 6.0), (-6.0, 6.0)];
        let mut a: Vec<Vec<f64>> = fib.lattice().points_in_box(&bounds).into_iter().map(|p| p.1).collect();
        let mut b: Vec<Vec<f64>> = d.lattice().points_in_box(&bounds).into_iter().map(|p| p.1).collect();
        let key = |v: &Vec<f64>| (v[0], v[1]);
        a.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        b.sort_by(|x, y| key(x).partial_cmp(&key(y)).unwrap());
        assert!(a.len() > 50);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x[0] - y[0]).abs() < 1e-9 && (x[1] - y[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn fibonacci_window_geometry() {
        let w = fibonacci_window::<f64>();
        assert!((w.measure() - 1.376_381_920_471_173_5).abs() < 1e-12);
        let fib = fibonacci_scheme::<f64>();
        let proj = fib.basis().get(1, 0).abs() + fib.basis().get(1, 1).abs();
        assert!((w.measure() - proj).abs() < 1e-12);
        assert_eq!(w.covariogram(0.0), w.measure());
        assert_eq!(w.closure(), Closure::HalfOpenRight);
        assert_eq!(w.lower(), -w.upper());
    }

    #[test]
    fn box_enumeration_matches_brute_force() {
        let fib = fibonacci_scheme::<f64>();
        let bounds = [(-10.0, 10.0), (-0.7, 0.7)];
        let fast = fib.lattice().points_in_box(&bounds);
        let mut brute = Vec::new();
        for n in -40..=40i64 {
            for m in -40..=40i64 {
                let x = fib.lattice().point(&[n, m]);
                if x[0].abs() <= 10.0 && x[1].abs() <= 0.7 {
                    brute.push(vec![n, m]);
                }
            }
        }
        let mut fast: Vec<Vec<i64>> = fast.into_iter().map(|p| p.0).collect();
        fast.sort();
        brute.sort();
        assert_eq!(fast, brute);
    }

    #[test]
    fn fibonacci_projection_has_no_collisions_up_to_100() {
        let fib = fibonacci_scheme::<f64>();
        let pts = fib.lattice().points_in_box(&[(-100.0, 100.0), (-100.0, 100.0)]);
        let mut xs: Vec<f64> = pts.iter().map(|p| p.1[0]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let min_gap = xs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        assert!(xs.len() > 30_000);
        assert!(min_gap > 1e-6, "min gap {min_gap}");
    }

    #[test]
    fn generic_over_f32() {
        let fib = fibonacci_scheme::<f32>();
        assert!((fib.density() - 1.0).abs() < 1e-5);
        assert!((fibonacci_window::<f32>().measure() - 1.376_382).abs() < 1e-5);
    }

    #[test]
    fn interval_validation_and_subsets() {
        assert!(Interval::closed(1.0, 1.0).is_err());
        assert!(Interval::closed(f64::NAN, 1.0).is_err());
        let a = Interval::half_open(0.0, 1.0).unwrap();
        let b = Interval::closed(0.0, 1.0).unwrap();
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert!(!a.contains(1.0) && b.contains(1.0));
    }

    proptest! {
        #[test]
        fn density_times_covolume_is_one(
            a in 0.5f64..2.0, b in -0.4f64..0.4, c in -0.4f64..0.4, d in 0.5f64..2.0
        ) {
            let m = Matrix::from_row_major(2, vec![a, b, c, d]).unwrap();
            let s = build_scheme(m.clone(), 1, 1).unwrap();
            prop_assert!((s.density() * m.determinant().abs() - 1.0).abs() < 1e-12);
            let dd = dual_lattice(&dual_lattice(&s).unwrap()).unwrap();
            prop_assert!(dd.basis().max_abs_diff(&m) < 1e-12);
        }

        #[test]
        fn fibonacci_coordinates_reconstruct_from_labels(n in -10_000i64..10_000, m in -10_000i64..10_000) {
            let fib = fibonacci_scheme::<f64>();
            let p = fib.point(&[n, m]);
            let back = fib.lattice().coefficients(&[p.physical[0], p.internal[0]]);
            prop_assert!((back[0] - n as f64).abs() < 1e-12 * (1.0 + n.abs() as f64 + m.abs() as f64));
            prop_assert!((back[1] - m as f64).abs() < 1e-12 * (1.0 + n.abs() as f64 + m.abs() as f64));
        }
    }
}
