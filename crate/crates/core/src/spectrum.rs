//! Pure point diffraction spectra: closed-form Bragg peak generators, the finite-sample
//! structure factor and the comparison between the two.
//!
//! Intensities are point masses of the diffraction measure `γ̂`. A finite sample over a
//! region of measure `V` estimates the mass at `k` by `|F(k)|² / V²`, where
//! `F(k) = Σ_p w(p) e^{-2πi k p}`.

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::euclid::{dual_lattice, fibonacci_scale, fibonacci_window_length, BoxWindow, EuclideanScheme, Interval, Lattice};
use crate::golden::GoldenInteger;
use crate::pointset::PointSet;
use crate::residue::{dual_frequency_module, squarefree_scheme};
use crate::scalar::{scaled_sinc, Scalar};

/// Exact label of a Bragg peak position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrequencyLabel {
    /// `(n + mτ)/√(2+τ)` in the Fibonacci Fourier module.
    Golden { n: i64, m: i64 },
    /// `m/q` in lowest terms.
    Rational { m: i64, q: i64 },
    /// `m/2^r` with `r = 0` or `m` odd.
    Dyadic { m: i64, r: u32 },
    /// Coefficients of a dual lattice point.
    Lattice { coeffs: Vec<i64> },
}

impl FrequencyLabel {
    fn shifted_by_integer(&self, k: i64) -> Option<Self> {
        match *self {
            Self::Rational { m, q } => Some(Self::Rational { m: m + k * q, q }),
            Self::Dyadic { m, r } => Some(Self::Dyadic { m: m + (k << r), r }),
            _ => None,
        }
    }
}

impl fmt::Display for FrequencyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Golden { n, m } => write!(f, "{}", GoldenInteger::new(*n, *m)),
            Self::Rational { m, q } => write!(f, "{m}/{q}"),
            Self::Dyadic { m, r } => write!(f, "{m}/2^{r}"),
            Self::Lattice { coeffs } => {
                let parts: Vec<String> = coeffs.iter().map(i64::to_string).collect();
                write!(f, "[{}]", parts.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Peak<T> {
    pub label: FrequencyLabel,
    pub frequency: T,
    pub intensity: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Point masses of `γ̂`, i.e. limits of `|F_n|² / vol²`.
    PerVolume,
}

/// Finite list of Bragg peaks, sorted by frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    peaks: Vec<Peak<T>>,
    frequency_bound: T,
    intensity_floor: T,
    normalization: Normalization,
}

impl<T: Scalar> Spectrum<T> {
    fn from_peaks(mut peaks: Vec<Peak<T>>, intensity_floor: T) -> Self {
        peaks.retain(|p| p.intensity >= intensity_floor);
        peaks.sort_by(|a, b| a.frequency.partial_cmp(&b.frequency).unwrap_or(Ordering::Equal));
        let frequency_bound = peaks.iter().map(|p| p.frequency.abs()).fold(T::zero(), T::max);
        Self { peaks, frequency_bound, intensity_floor, normalization: Normalization::PerVolume }
    }

    pub fn peaks(&self) -> &[Peak<T>] {
        &self.peaks
    }

    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn frequency_bound(&self) -> T {
        self.frequency_bound
    }

    pub fn intensity_floor(&self) -> T {
        self.intensity_floor
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn max_intensity(&self) -> T {
        self.peaks.iter().map(|p| p.intensity).fold(T::zero(), T::max)
    }

    pub fn get(&self, label: &FrequencyLabel) -> Option<&Peak<T>> {
        self.peaks.iter().find(|p| &p.label == label)
    }

    /// Peak whose frequency is within `tol` of `k`.
    pub fn near(&self, k: T, tol: T) -> Option<&Peak<T>> {
        self.peaks.iter().find(|p| (p.frequency - k).abs() <= tol)
    }

    /// Drops peaks below `floor`.
    pub fn with_floor(self, floor: T) -> Self {
        Self::from_peaks(self.peaks, floor.max(self.intensity_floor))
    }

    /// The `n` most intense peaks; ties broken by `|k|`, then by `k`.
    pub fn top(&self, n: usize) -> Vec<Peak<T>> {
        let mut v = self.peaks.clone();
        v.sort_by(|a, b| {
            b.intensity
                .partial_cmp(&a.intensity)
                .unwrap_or(Ordering::Equal)
                .then(a.frequency.abs().partial_cmp(&b.frequency.abs()).unwrap_or(Ordering::Equal))
                .then(a.frequency.partial_cmp(&b.frequency).unwrap_or(Ordering::Equal))
        });
        v.truncate(n);
        v
    }

    /// Translates a spectrum given on `[0, 1)` by all integers so that it covers
    /// `[-bound, bound]`. Only rational and dyadic labels can be shifted.
    pub fn extend_periodic(&self, bound: i64) -> Result<Self> {
        let mut peaks = Vec::new();
        for k in -bound - 1..=bound {
            for p in &self.peaks {
                let label = p
                    .label
                    .shifted_by_integer(k)
                    .ok_or_else(|| Error::InvalidInput(format!("peak {} is not ℤ-periodic", p.label)))?;
                let frequency = p.frequency + T::of_i64(k);
                if frequency.abs() <= T::of_i64(bound) {
                    peaks.push(Peak { label, frequency, intensity: p.intensity });
                }
            }
        }
        Ok(Self::from_peaks(peaks, self.intensity_floor))
    }

    /// CSV `label,frequency,intensity`; with `log_column` a `log10_intensity` column is appended.
    pub fn to_csv(&self, log_column: bool) -> String {
        let mut out = String::from("label,frequency,intensity");
        out.push_str(if log_column { ",log10_intensity\n" } else { "\n" });
        for p in &self.peaks {
            let _ = write!(out, "{},{},{}", p.label, p.frequency, p.intensity);
            if log_column {
                let _ = write!(out, ",{}", p.intensity.log10());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let peaks: Vec<_> = self
            .peaks
            .iter()
            .map(|p| {
                serde_json::json!({
                    "label": p.label,
                    "frequency": p.frequency.as_f64(),
                    "intensity": p.intensity.as_f64(),
                })
            })
            .collect();
        serde_json::json!({
            "normalization": self.normalization,
            "frequency_bound": self.frequency_bound.as_f64(),
            "intensity_floor": self.intensity_floor.as_f64(),
            "peaks": peaks,
        })
    }
}

/// Structure factor values at a list of frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureFactorSample<T> {
    pub frequencies: Vec<T>,
    pub values: Vec<Complex<T>>,
    /// `|F|² / region_measure²`.
    pub intensities: Vec<T>,
    pub region_measure: T,
}

/// `F(s) = Σ_p w(p) e^{-2πi s p}` by direct summation, parallel over frequencies.
///
/// Each sum runs over the points in ascending order, so results do not depend on scheduling.
pub fn structure_factor<T: Scalar>(ps: &PointSet<T>, frequencies: &[T]) -> StructureFactorSample<T> {
    let two_pi = T::of(2.0) * T::PI();
    let values: Vec<Complex<T>> = frequencies
        .par_iter()
        .map(|&s| {
            ps.points().iter().zip(ps.weights()).fold(Complex::zero(), |acc, (&p, &w)| {
                let t = s * p;
                let t = t - t.round();
                let (sin, cos) = (-two_pi * t).sin_cos();
                acc + Complex::new(cos, sin) * w
            })
        })
        .collect();
    let v2 = ps.region_measure() * ps.region_measure();
    let intensities = values.iter().map(|f| f.norm_sqr() / v2).collect();
    StructureFactorSample {
        frequencies: frequencies.to_vec(),
        values,
        intensities,
        region_measure: ps.region_measure(),
    }
}

/// `γ̂ = dens(L)² δ_{L⁰}` for a one-dimensional lattice, peaks with `|k| ≤ frequency_bound`.
pub fn lattice_spectrum<T: Scalar>(lattice: &Lattice<T>, frequency_bound: T) -> Result<Spectrum<T>> {
    if lattice.dim() != 1 {
        return Err(Error::InvalidInput("lattice spectra are one-dimensional".into()));
    }
    let dual = lattice.dual()?;
    let intensity = lattice.density() * lattice.density();
    let peaks = dual
        .points_in_box(&[(-frequency_bound, frequency_bound)])
        .into_iter()
        .filter(|(_, x)| x[0].abs() <= frequency_bound)
        .map(|(coeffs, x)| Peak { label: FrequencyLabel::Lattice { coeffs }, frequency: x[0], intensity })
        .collect();
    Ok(Spectrum::from_peaks(peaks, T::zero()))
}

/// Fibonacci spectrum: peaks at `k = (n + mτ)/√(2+τ)`, `|n|, |m| ≤ index_bound`, with
/// intensity `(sin(π c k*)/(π k*))²`, `c = (1+τ)/√(2+τ)`, `k* = (nτ - m)/√(2+τ)`.
pub fn fibonacci_spectrum<T: Scalar>(index_bound: i64, intensity_floor: T) -> Spectrum<T> {
    let c = fibonacci_window_length::<T>();
    let s = fibonacci_scale::<T>();
    let b = index_bound.max(0);
    let mut peaks = Vec::with_capacity(((2 * b + 1) * (2 * b + 1)) as usize);
    for n in -b..=b {
        for m in -b..=b {
            let g = GoldenInteger::new(n, m);
            let k = g.to_scalar::<T>() / s;
            let k_star = g.star().to_scalar::<T>() / s;
            let a = scaled_sinc(c, k_star);
            peaks.push(Peak { label: FrequencyLabel::Golden { n, m }, frequency: k, intensity: a * a });
        }
    }
    Spectrum::from_peaks(peaks, intensity_floor)
}

/// `1/ζ(2) = 6/π²`.
pub fn inverse_zeta2<T: Scalar>() -> T {
    T::of(6.0) / (T::PI() * T::PI())
}

/// Squarefree spectrum on `[0, 1)`: `I_{m/q} = ζ(2)^{-2} ∏_{p | q} (p² - 1)^{-2}` for reduced `m/q`,
/// `q ≤ Q` cubefree with all prime factors `≤ P`.
pub fn squarefree_spectrum<T: Scalar>(denominator_bound: u64, prime_bound: u64) -> Result<Spectrum<T>> {
    let scheme = squarefree_scheme(prime_bound)?;
    let base = inverse_zeta2::<T>() * inverse_zeta2::<T>();
    let peaks = dual_frequency_module(&scheme, denominator_bound)
        .into_iter()
        .map(|label| {
            let (m, q) = (*label.frequency.numer(), *label.frequency.denom());
            let intensity = factorize(q as u64).iter().fold(base, |acc, &(p, _)| {
                let d = T::of((p * p - 1) as f64);
                acc / (d * d)
            });
            Peak { label: FrequencyLabel::Rational { m, q }, frequency: T::of_i64(m) / T::of_i64(q), intensity }
        })
        .collect();
    Ok(Spectrum::from_peaks(peaks, T::zero()))
}

/// Period doubling spectrum: `4^{1-r}/9` at every `m/2^r` (`r = 0`, or `r ≥ 1` and `m` odd)
/// with `r ≤ r_bound` and `|m/2^r| ≤ frequency_bound`.
pub fn period_doubling_spectrum<T: Scalar>(r_bound: u32, frequency_bound: i64) -> Result<Spectrum<T>> {
    if r_bound > 40 {
        return Err(Error::InvalidInput("r bound must be at most 40".into()));
    }
    let mut peaks = Vec::new();
    for r in 0..=r_bound {
        let intensity = T::of(4.0).powi(1 - r as i32) / T::of(9.0);
        let limit = frequency_bound << r;
        for m in -limit..=limit {
            if r == 0 || m % 2 != 0 {
                let frequency = frac_to::<T>(Ratio::new(m, 1i64 << r));
                peaks.push(Peak { label: FrequencyLabel::Dyadic { m, r }, frequency, intensity });
            }
        }
    }
    Ok(Spectrum::from_peaks(peaks, T::zero()))
}

fn frac_to<T: Scalar>(x: Ratio<i64>) -> T {
    T::of_i64(*x.numer()) / T::of_i64(*x.denom())
}

/// `1̌_W(k*) = ∫_a^b e^{2πi k* y} dy = (e^{2πi k* b} - e^{2πi k* a}) / (2πi k*)`, with value
/// `b - a` at `k* = 0`.
pub fn interval_fourier_transform<T: Scalar>(window: &Interval<T>, k_star: T) -> Complex<T> {
    let two = T::of(2.0);
    let mid = (window.lower() + window.upper()) / two;
    let phase = two * T::PI() * k_star * mid;
    Complex::new(phase.cos(), phase.sin()) * scaled_sinc(window.measure(), k_star)
}

/// Diffraction of a regular model set with `d = n = 1` and an interval window:
/// `dens(L)² |1̌_W(k*)|²` at `k = π(ℓ⁰)` for dual lattice points with coefficients in
/// `[-index_bound, index_bound]²`.
pub fn euclidean_model_set_spectrum<T: Scalar>(
    scheme: &EuclideanScheme<T>,
    window: &BoxWindow<T>,
    index_bound: i64,
    intensity_floor: T,
) -> Result<Spectrum<T>> {
    let interval = match window.as_interval() {
        Some(w) if scheme.dim_physical() == 1 && scheme.dim_internal() == 1 => w,
        _ => return Err(Error::WindowNotInterval),
    };
    let dual = dual_lattice(scheme)?;
    let dens2 = scheme.density() * scheme.density();
    let b = index_bound.max(0);
    let mut peaks = Vec::new();
    for i in -b..=b {
        for j in -b..=b {
            let p = dual.point(&[i, j]);
            let f = interval_fourier_transform(interval, p.internal[0]);
            peaks.push(Peak {
                label: FrequencyLabel::Lattice { coeffs: vec![i, j] },
                frequency: p.physical[0],
                intensity: dens2 * f.norm_sqr(),
            });
        }
    }
    Ok(Spectrum::from_peaks(peaks, intensity_floor))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakComparison {
    pub label: FrequencyLabel,
    pub frequency: f64,
    pub predicted: f64,
    pub measured: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub sample_size: usize,
    pub region_measure: f64,
    pub peaks: Vec<PeakComparison>,
    pub max_relative_error: f64,
}

/// Evaluates the structure factor of `ps` at the `top_n` most intense predicted peaks.
pub fn compare<T: Scalar>(spectrum: &Spectrum<T>, ps: &PointSet<T>, top_n: usize) -> ComparisonReport {
    let top = spectrum.top(top_n);
    let freqs: Vec<T> = top.iter().map(|p| p.frequency).collect();
    let sf = structure_factor(ps, &freqs);
    let peaks: Vec<PeakComparison> = top
        .into_iter()
        .zip(&sf.intensities)
        .map(|(p, &measured)| {
            let predicted = p.intensity.as_f64();
            let measured = measured.as_f64();
            PeakComparison {
                label: p.label,
                frequency: p.frequency.as_f64(),
                predicted,
                measured,
                relative_error: (measured - predicted).abs() / predicted,
            }
        })
        .collect();
    let max_relative_error = peaks.iter().map(|p| p.relative_error).fold(0.0, f64::max);
    ComparisonReport {
        sample_size: ps.len(),
        region_measure: ps.region_measure().as_f64(),
        peaks,
        max_relative_error,
    }
}
