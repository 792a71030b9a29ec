//! Finite samples of model sets, density estimates and autocorrelation coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::euclid::{BoxWindow, EuclideanScheme, Region};
use crate::residue::{ResidueKind, ResidueScheme, ResidueWindow};
use crate::scalar::Scalar;

/// Integer labels of the sampled lattice points, `width` entries per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    width: usize,
    data: Vec<i64>,
}

impl Labels {
    pub fn new(width: usize, data: Vec<i64>) -> Result<Self> {
        if width == 0 || !data.len().is_multiple_of(width) {
            return Err(Error::InvalidInput("label data must be a whole number of rows".into()));
        }
        Ok(Self { width, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> &[i64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    fn len(&self) -> usize {
        self.data.len() / self.width
    }
}

/// A finite weighted point set in ℝ sampled from a region.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    points: Vec<T>,
    weights: Vec<T>,
    labels: Option<Labels>,
    region: Region<T>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(points: Vec<T>, weights: Vec<T>, labels: Option<Labels>, region: Region<T>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidInput("one weight per point required".into()));
        }
        if let Some(l) = &labels {
            if l.len() != points.len() {
                return Err(Error::InvalidInput("one label per point required".into()));
            }
        }
        if points.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::InvalidInput("points must be strictly increasing".into()));
        }
        if let Some(x) = points.iter().find(|&&x| !region.contains(x)) {
            return Err(Error::InvalidInput(format!("point {x} lies outside the region")));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("weights must be finite".into()));
        }
        Ok(Self { points, weights, labels, region })
    }

    /// Unit weights, no labels.
    pub fn unweighted(points: Vec<T>, region: Region<T>) -> Result<Self> {
        let weights = vec![T::one(); points.len()];
        Self::new(points, weights, None, region)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_ref()
    }

    pub fn region(&self) -> &Region<T> {
        &self.region
    }

    pub fn region_measure(&self) -> T {
        self.region.measure()
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// Nearest-neighbour distances.
    pub fn gaps(&self) -> Vec<T> {
        self.points.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// CSV with header `x,weight`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,weight\n");
        for (x, w) in self.points.iter().zip(&self.weights) {
            let _ = writeln!(out, "{x},{w}");
        }
        out
    }
}

/// A model set `Λ(W)` that can be sampled and whose autocorrelation is known in closed form.
pub trait ModelSet<T: Scalar> {
    /// `Λ(W) ∩ region`, sorted, with exact lattice labels.
    fn sample(&self, region: &Region<T>) -> Result<PointSet<T>>;

    /// `dens(L) · θ_H(W)`.
    fn predicted_density(&self) -> T;

    /// `dens(L) · (1_W * 1̃_W)(z*)` for the displacement with lattice label `z`.
    fn covariogram_at(&self, z: &[i64]) -> Result<T>;
}

/// Euclidean scheme with `d = 1` and a box window in ℝ^n.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanModelSet<T> {
    scheme: EuclideanScheme<T>,
    window: BoxWindow<T>,
}

impl<T: Scalar> EuclideanModelSet<T> {
    pub fn new(scheme: EuclideanScheme<T>, window: impl Into<BoxWindow<T>>) -> Result<Self> {
        let window = window.into();
        if scheme.dim_physical() != 1 {
            return Err(Error::InvalidInput("point sets are sampled in one physical dimension".into()));
        }
        if window.dim() != scheme.dim_internal() {
            return Err(Error::InvalidInput(format!(
                "window has dimension {}, internal space has {}",
                window.dim(),
                scheme.dim_internal()
            )));
        }
        Ok(Self { scheme, window })
    }

    pub fn scheme(&self) -> &EuclideanScheme<T> {
        &self.scheme
    }

    pub fn window(&self) -> &BoxWindow<T> {
        &self.window
    }
}

impl<T: Scalar> ModelSet<T> for EuclideanModelSet<T> {
    fn sample(&self, region: &Region<T>) -> Result<PointSet<T>> {
        let mut pts = self.scheme.points_in_strip(&[(region.lower(), region.upper())], &self.window)?;
        pts.retain(|p| region.contains(p.physical[0]));
        pts.sort_by(|a, b| a.physical[0].partial_cmp(&b.physical[0]).unwrap());
        let width = self.scheme.dim_physical() + self.scheme.dim_internal();
        let labels = Labels::new(width, pts.iter().flat_map(|p| p.coeffs.iter().copied()).collect())?;
        let points: Vec<T> = pts.iter().map(|p| p.physical[0]).collect();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("physical projection is not injective on this sample".into()));
        }
        let weights = vec![T::one(); points.len()];
        PointSet::new(points, weights, Some(labels), *region)
    }

    fn predicted_density(&self) -> T {
        self.scheme.density() * self.window.measure()
    }

    fn covariogram_at(&self, z: &[i64]) -> Result<T> {
        if z.len() != self.scheme.dim_physical() + self.scheme.dim_internal() {
            return Err(Error::DisplacementNotInModule(format!("{z:?}")));
        }
        Ok(self.scheme.density() * self.window.covariogram(&self.scheme.star(z)))
    }
}

/// Residue scheme with its window; points are integers.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueModelSet {
    scheme: ResidueScheme,
    window: ResidueWindow,
}

impl ResidueModelSet {
    pub fn new(scheme: ResidueScheme, window: ResidueWindow) -> Result<Self> {
        let matches = matches!(
            (scheme.kind(), &window),
            (ResidueKind::Product, ResidueWindow::Product { .. })
                | (ResidueKind::Odometer, ResidueWindow::Odometer { .. })
        );
        if !matches {
            return Err(Error::KindMismatch {
                expected: if scheme.kind() == ResidueKind::Product { "product" } else { "odometer" },
            });
        }
        Ok(Self { scheme, window })
    }

    pub fn scheme(&self) -> &ResidueScheme {
        &self.scheme
    }

    pub fn window(&self) -> &ResidueWindow {
        &self.window
    }

    /// Integers `n` in `[lo, hi]` with `n* ∈ W`.
    pub fn members(&self, lo: i64, hi: i64) -> Vec<i64> {
        if lo > hi {
            return Vec::new();
        }
        match &self.window {
            ResidueWindow::Product { components } => {
                let mut keep = vec![true; (hi - lo + 1) as usize];
                for c in components {
                    let m = c.modulus() as i64;
                    for e in c.excluded() {
                        let mut n = lo + (e as i64 - lo).rem_euclid(m);
                        while n <= hi {
                            keep[(n - lo) as usize] = false;
                            n += m;
                        }
                    }
                }
                (lo..=hi).filter(|&n| keep[(n - lo) as usize]).collect()
            }
            ResidueWindow::Odometer { .. } => (lo..=hi).filter(|&n| self.window.contains(n)).collect(),
        }
    }
}

impl<T: Scalar> ModelSet<T> for ResidueModelSet {
    fn sample(&self, region: &Region<T>) -> Result<PointSet<T>> {
        let lo = region.lower().ceil();
        let mut hi = region.upper().floor();
        if !region.contains(hi) {
            hi = hi - T::one();
        }
        let (lo, hi) = (lo.to_i64().ok_or(Error::EmptyRegion)?, hi.to_i64().ok_or(Error::EmptyRegion)?);
        let members = self.members(lo, hi);
        let points = members.iter().map(|&n| T::of_i64(n)).collect::<Vec<_>>();
        let weights = vec![T::one(); points.len()];
        PointSet::new(points, weights, Some(Labels::new(1, members)?), *region)
    }

    fn predicted_density(&self) -> T {
        T::of(self.scheme.lattice_density()) * self.window.measure::<T>()
    }

    fn covariogram_at(&self, z: &[i64]) -> Result<T> {
        match z {
            [n] => Ok(T::of(self.scheme.lattice_density()) * self.window.overlap::<T>(*n)),
            _ => Err(Error::DisplacementNotInModule(format!("{z:?}"))),
        }
    }
}

/// `Λ(W) ∩ region`.
pub fn generate<T: Scalar, M: ModelSet<T> + ?Sized>(model: &M, region: &Region<T>) -> Result<PointSet<T>> {
    model.sample(region)
}

/// Weighted count per unit length of the sampling region.
pub fn density_estimate<T: Scalar>(ps: &PointSet<T>) -> T {
    ps.total_weight() / ps.region_measure()
}

/// Key of a displacement: an exact lattice label difference, or the real value on a 1e-9 grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DisplacementKey {
    Label(Vec<i64>),
    Grid(i64),
}

const GRID: f64 = 1e9;
const MAX_PACKED_WIDTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutocorrelationEntry<T> {
    pub z: T,
    pub eta: T,
}

/// Autocorrelation coefficients `η(z)` of a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationEstimate<T> {
    coefficients: BTreeMap<DisplacementKey, AutocorrelationEntry<T>>,
    region_measure: T,
}

impl<T: Scalar> AutocorrelationEstimate<T> {
    pub fn region_measure(&self) -> T {
        self.region_measure
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn get(&self, key: &DisplacementKey) -> Option<T> {
        self.coefficients.get(key).map(|e| e.eta)
    }

    /// Looks up `η(z)` for an exactly labelled displacement.
    pub fn at_label(&self, z: &[i64]) -> Option<T> {
        self.get(&DisplacementKey::Label(z.to_vec()))
    }

    /// All entries ordered by displacement.
    pub fn entries(&self) -> Vec<(DisplacementKey, AutocorrelationEntry<T>)> {
        let mut v: Vec<_> = self.coefficients.iter().map(|(k, e)| (k.clone(), *e)).collect();
        v.sort_by(|a, b| a.1.z.partial_cmp(&b.1.z).unwrap().then_with(|| a.0.cmp(&b.0)));
        v
    }

    /// The `n` smallest displacements `z ≥ 0`, including `z = 0`.
    pub fn smallest_nonnegative(&self, n: usize) -> Vec<(DisplacementKey, AutocorrelationEntry<T>)> {
        self.entries().into_iter().filter(|(_, e)| e.z >= T::zero()).take(n).collect()
    }

    /// CSV with header `z,eta`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z,eta\n");
        for (_, e) in self.entries() {
            let _ = writeln!(out, "{},{}", e.z, e.eta);
        }
        out
    }
}

/// `η(z) = (1/|A|) Σ_{x, x+z ∈ Λ∩A} w(x) w(x+z)` for every realised `|z| ≤ max_displacement`.
///
/// A two-pointer sweep over the sorted points; no edge correction is applied.
pub fn empirical_autocorrelation<T: Scalar>(ps: &PointSet<T>, max_displacement: T) -> Result<AutocorrelationEstimate<T>> {
    if max_displacement < T::zero() || max_displacement > ps.region_measure() {
        return Err(Error::InvalidInput("max displacement must lie in [0, region length]".into()));
    }
    let labels = ps.labels().filter(|l| l.width() <= MAX_PACKED_WIDTH);
    let pts = ps.points();
    let w = ps.weights();

    // packed key: [tag, c0, c1, c2, c3]; tag 0 = label, 1 = grid
    let mut acc: HashMap<[i64; MAX_PACKED_WIDTH + 1], (T, T)> = HashMap::new();
    let key_of = |i: usize, j: usize, sign: i64| -> [i64; MAX_PACKED_WIDTH + 1] {
        let mut k = [0i64; MAX_PACKED_WIDTH + 1];
        match labels {
            Some(l) => {
                for (c, (a, b)) in l.get(j).iter().zip(l.get(i)).enumerate() {
                    k[c + 1] = sign * (a - b);
                }
            }
            None => {
                k[0] = 1;
                k[1] = sign * ((pts[j] - pts[i]).as_f64() * GRID).round() as i64;
            }
        }
        k
    };
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let z = pts[j] - pts[i];
            if z > max_displacement {
                break;
            }
            let c = w[i] * w[j];
            let e = acc.entry(key_of(i, j, 1)).or_insert((z, T::zero()));
            e.1 = e.1 + c;
            if j > i {
                let e = acc.entry(key_of(i, j, -1)).or_insert((-z, T::zero()));
                e.1 = e.1 + c;
            }
        }
    }

    let measure = ps.region_measure();
    let width = labels.map_or(0, |l| l.width());
    let coefficients = acc
        .into_iter()
        .map(|(k, (z, sum))| {
            let key = if k[0] == 0 {
                DisplacementKey::Label(k[1..=width].to_vec())
            } else {
                DisplacementKey::Grid(k[1])
            };
            (key, AutocorrelationEntry { z, eta: sum / measure })
        })
        .collect();
    Ok(AutocorrelationEstimate { coefficients, region_measure: measure })
}

/// `γ({z}) = dens(L) · (1_W * 1̃_W)(z*)` for an exactly labelled displacement.
pub fn predicted_autocorrelation<T: Scalar, M: ModelSet<T> + ?Sized>(model: &M, z: &DisplacementKey) -> Result<T> {
    match z {
        DisplacementKey::Label(l) => model.covariogram_at(l),
        DisplacementKey::Grid(g) => Err(Error::DisplacementNotInModule(format!("{}", *g as f64 / GRID))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::{fibonacci_scheme, fibonacci_window, Interval};
    use crate::residue::{period_doubling_scheme, period_doubling_window, squarefree_scheme, squarefree_window};
    use crate::Lattice;
    use proptest::prelude::*;

    fn fibonacci() -> EuclideanModelSet<f64> {
        EuclideanModelSet::new(fibonacci_scheme(), fibonacci_window()).unwrap()
    }

    fn squarefree(p: u64) -> ResidueModelSet {
        let s = squarefree_scheme(p).unwrap();
        let w = squarefree_window(&s).unwrap();
        ResidueModelSet::new(s, w).unwrap()
    }

    fn period_doubling(j: u32) -> ResidueModelSet {
        let s = period_doubling_scheme(j).unwrap();
        let w = period_doubling_window(&s).unwrap();
        ResidueModelSet::new(s, w).unwrap()
    }

    /// ℤ ∩ region as a one-dimensional scheme-free sample.
    fn integers(n: i64) -> PointSet<f64> {
        let pts = (-n..=n).map(|k| k as f64).collect();
        let labels = Labels::new(1, (-n..=n).collect()).unwrap();
        let w = vec![1.0; (2 * n + 1) as usize];
        PointSet::new(pts, w, Some(labels), Interval::centered(n as f64).unwrap()).unwrap()
    }

    #[test]
    fn fibonacci_gaps_have_two_lengths_in_golden_ratio() {
        let ps = generate(&fibonacci(), &Interval::closed(0.0, 20.0).unwrap()).unwrap();
        let mut gaps = ps.gaps();
        gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (short, long) = (gaps[0], *gaps.last().unwrap());
        assert!(gaps.iter().all(|&g| (g - short).abs() < 1e-9 || (g - long).abs() < 1e-9));
        assert!((long / short - f64::golden()).abs() < 1e-9);
    }

    #[test]
    fn squarefree_sample_1_to_30() {
        let ps = generate(&squarefree(100), &Interval::closed(1.0, 30.0).unwrap()).unwrap();
        let got: Vec<i64> = ps.points().iter().map(|&x| x as i64).collect();
        // direct squarefree test
        let expect: Vec<i64> = (1..=30).filter(|&n| crate::arith::is_squarefree(n as u64)).collect();
        assert_eq!(got, expect);
        assert_eq!(got, vec![1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30]);
    }

    #[test]
    fn period_doubling_sample_0_to_15() {
        let ps = generate(&period_doubling(10), &Interval::closed(0.0, 15.0).unwrap()).unwrap();
        let got: Vec<i64> = ps.points().iter().map(|&x| x as i64).collect();
        // evens ∪ (8ℤ + 3) ∪ (32ℤ + 15)
        let expect: Vec<i64> = (0..=15).filter(|n| n % 2 == 0 || n % 8 == 3 || n % 32 == 15).collect();
        assert_eq!(got, expect);
        assert_eq!(got.len(), 11);
    }

    #[test]
    fn half_open_regions_drop_the_right_end() {
        let ps: PointSet<f64> = generate(&period_doubling(10), &Interval::half_open(0.0, 16.0).unwrap()).unwrap();
        assert_eq!(ps.len(), 11);
        assert_eq!(ps.region_measure(), 16.0);
    }

    #[test]
    fn empty_region_is_rejected() {
        assert_eq!(Interval::closed(0.0, 0.0), Err(Error::EmptyRegion));
    }

    #[test]
    fn lattice_density_and_autocorrelation() {
        let ps = integers(10_000);
        assert!((density_estimate(&ps) - 1.0).abs() < 1e-4);
        let ac = empirical_autocorrelation(&ps, 10.0).unwrap();
        for z in -10..=10i64 {
            assert!((ac.at_label(&[z]).unwrap() - 1.0).abs() < 1e-3);
        }
        let lat = Lattice::<f64>::scaled_integers(0.5).unwrap();
        assert_eq!(lat.density(), 2.0);
    }

    #[test]
    fn autocorrelation_is_symmetric_and_starts_at_density() {
        let model = fibonacci();
        let ps = generate(&model, &Interval::centered(500.0).unwrap()).unwrap();
        let ac = empirical_autocorrelation(&ps, 10.0).unwrap();
        assert!((ac.at_label(&[0, 0]).unwrap() - density_estimate(&ps)).abs() < 1e-15);
        for (key, e) in ac.entries() {
            let DisplacementKey::Label(l) = key else { panic!("labelled sample") };
            let neg: Vec<i64> = l.iter().map(|c| -c).collect();
            assert_eq!(ac.at_label(&neg).unwrap(), e.eta);
            assert!(e.eta >= 0.0);
        }
    }

    #[test]
    fn unlabelled_samples_use_the_grid() {
        let region = Interval::closed(0.0, 10.0).unwrap();
        let ps = PointSet::unweighted(vec![0.5, 1.5, 2.25], region).unwrap();
        let ac = empirical_autocorrelation(&ps, 2.0).unwrap();
        assert_eq!(ac.get(&DisplacementKey::Grid(1_000_000_000)), Some(0.1));
        assert_eq!(ac.get(&DisplacementKey::Grid(750_000_000)), Some(0.1));
        assert_eq!(ac.get(&DisplacementKey::Grid(0)), Some(0.3));
        let model = fibonacci();
        assert!(matches!(
            predicted_autocorrelation(&model, &DisplacementKey::Grid(7)),
            Err(Error::DisplacementNotInModule(_))
        ));
        assert!(ac.to_csv().starts_with("z,eta\n-1.75,0.1\n"));
    }

    #[test]
    fn predicted_autocorrelation_values() {
        let model = fibonacci();
        let zero = predicted_autocorrelation(&model, &DisplacementKey::Label(vec![0, 0])).unwrap();
        assert!((zero - model.predicted_density()).abs() < 1e-15);
        // (n, m) = (2, 0) has z* = 2τ/√(2+τ) ≈ 1.70 > window length
        let far = predicted_autocorrelation(&model, &DisplacementKey::Label(vec![2, 0])).unwrap();
        assert_eq!(far, 0.0);

        let sf = squarefree(3);
        let one: f64 = predicted_autocorrelation(&sf, &DisplacementKey::Label(vec![1])).unwrap();
        assert!((one - (2.0 / 4.0) * (7.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn point_set_validation() {
        let region = Interval::closed(0.0, 1.0).unwrap();
        assert!(PointSet::unweighted(vec![0.5, 0.5], region).is_err());
        assert!(PointSet::unweighted(vec![1.5], region).is_err());
        assert!(PointSet::new(vec![0.5], vec![f64::NAN], None, region).is_err());
        let ps = PointSet::new(vec![0.25, 0.5], vec![2.0, 1.0], None, region).unwrap();
        assert_eq!(density_estimate(&ps), 3.0);
        assert_eq!(ps.to_csv(), "x,weight\n0.25,2\n0.5,1\n");
    }

    #[test]
    fn density_bounded_by_window_closure() {
        let model = fibonacci();
        let ps = generate(&model, &Interval::centered(1.0e5).unwrap()).unwrap();
        // W̄ has the same measure as W for an interval
        assert!(density_estimate(&ps) <= model.predicted_density() + 1e-2);
    }

    proptest! {
        #[test]
        fn generation_is_monotone_in_the_window(a in -0.6f64..0.0, b in 0.05f64..0.6, shrink in 0.0f64..0.5) {
            let scheme = fibonacci_scheme::<f64>();
            let big = Interval::half_open(a, b).unwrap();
            let small = Interval::half_open(a + shrink * (b - a) / 2.0, b - shrink * (b - a) / 2.0).unwrap();
            prop_assert!(small.is_subset_of(&big));
            let region = Interval::centered(200.0).unwrap();
            let ps_big = generate(&EuclideanModelSet::new(scheme.clone(), big).unwrap(), &region).unwrap();
            let ps_small = generate(&EuclideanModelSet::new(scheme, small).unwrap(), &region).unwrap();
            for x in ps_small.points() {
                prop_assert!(ps_big.points().binary_search_by(|y| y.partial_cmp(x).unwrap()).is_ok());
            }
        }
    }
}
