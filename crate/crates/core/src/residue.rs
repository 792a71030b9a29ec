//! Cut-and-project schemes with physical space ℝ and a compact internal space built from
//! residue rings: finite products `∏ ℤ/mᵢℤ` (squarefree integers) and the 2-adic odometer
//! truncated to `ℤ/2^Jℤ` (period doubling).
//!
//! In both cases the lattice is `{(n, n*) : n ∈ ℤ}` with density 1, and the Haar measure of
//! the (truncated) internal space is the uniform probability measure.
//!
//! Character convention: the internal character attached to a frequency `x` is the one with
//! `χ(n*) = e^{2πi x n}`, and window transforms are `∫_W χ(h) dh`.

use std::fmt;

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{mod_inverse, primes_up_to};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest odometer depth; residues mod 2^J must fit comfortably in `i64`.
pub const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueKind {
    Product,
    Odometer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueScheme {
    kind: ResidueKind,
    /// Product: pairwise coprime moduli. Odometer: the chain 2, 4, …, 2^J.
    moduli: Vec<u64>,
}

impl ResidueScheme {
    /// Product scheme `∏ ℤ/mᵢℤ` for pairwise coprime `mᵢ ≥ 2`.
    pub fn product(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() || moduli.iter().any(|&m| m < 2) {
            return Err(Error::InvalidInput("product moduli must be at least 2".into()));
        }
        for (i, &a) in moduli.iter().enumerate() {
            for &b in &moduli[i + 1..] {
                if a.gcd(&b) != 1 {
                    return Err(Error::InvalidInput(format!("moduli {a} and {b} are not coprime")));
                }
            }
        }
        Ok(Self { kind: ResidueKind::Product, moduli })
    }

    pub fn kind(&self) -> ResidueKind {
        self.kind
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// `dens(L)`; both shipped schemes have density 1.
    pub fn lattice_density(&self) -> f64 {
        1.0
    }

    /// Odometer depth `J`.
    pub fn depth(&self) -> Option<u32> {
        (self.kind == ResidueKind::Odometer).then_some(self.moduli.len() as u32)
    }

    /// Modulus of the canonical odometer representative, `2^J`.
    fn odometer_modulus(&self) -> u64 {
        *self.moduli.last().expect("odometer has depth ≥ 2")
    }

    /// Star map `n ↦ n*`. Odometer elements are given by their single residue mod 2^J.
    pub fn star(&self, n: i64) -> Vec<u64> {
        match self.kind {
            ResidueKind::Product => self.moduli.iter().map(|&m| rem(n, m)).collect(),
            ResidueKind::Odometer => vec![rem(n, self.odometer_modulus())],
        }
    }

    /// Number of elements of the (truncated) internal space, if it fits in a `u64`.
    pub fn internal_order(&self) -> Option<u64> {
        match self.kind {
            ResidueKind::Product => self.moduli.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m)),
            ResidueKind::Odometer => Some(self.odometer_modulus()),
        }
    }

    /// Denominators `q` for which `m/q` lies in the Fourier module of the truncated scheme.
    pub fn admits_denominator(&self, q: u64) -> bool {
        if q == 0 {
            return false;
        }
        match self.kind {
            ResidueKind::Product => {
                let mut rest = q;
                for &m in &self.moduli {
                    rest /= rest.gcd(&m);
                }
                rest == 1
            }
            ResidueKind::Odometer => q.is_power_of_two() && q <= self.odometer_modulus(),
        }
    }
}

fn rem(n: i64, m: u64) -> u64 {
    n.rem_euclid(m as i64) as u64
}

/// `∏_{p ≤ P} ℤ/p²ℤ`.
pub fn squarefree_scheme(prime_bound: u64) -> Result<ResidueScheme> {
    if prime_bound < 2 {
        return Err(Error::InvalidInput("prime bound must be at least 2".into()));
    }
    ResidueScheme::product(primes_up_to(prime_bound).into_iter().map(|p| p * p).collect())
}

/// Odometer `lim ℤ/2^jℤ` truncated at depth `J`.
pub fn period_doubling_scheme(depth: u32) -> Result<ResidueScheme> {
    if !(2..=MAX_DEPTH).contains(&depth) {
        return Err(Error::InvalidInput(format!("depth must lie in 2..={MAX_DEPTH}, got {depth}")));
    }
    Ok(ResidueScheme { kind: ResidueKind::Odometer, moduli: (1..=depth).map(|j| 1u64 << j).collect() })
}

/// Subset of `ℤ/mℤ`, stored as its complement when that is smaller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSet {
    modulus: u64,
    /// Sorted residues; excluded ones when `complement` is set.
    members: Vec<u64>,
    complement: bool,
}

impl ResidueSet {
    pub fn from_allowed(modulus: u64, allowed: impl IntoIterator<Item = u64>) -> Self {
        let mut flags = vec![false; modulus as usize];
        for h in allowed {
            flags[(h % modulus) as usize] = true;
        }
        let count = flags.iter().filter(|&&f| f).count() as u64;
        let complement = 2 * count > modulus;
        let members = (0..modulus).filter(|&h| flags[h as usize] != complement).collect();
        Self { modulus, members, complement }
    }

    /// `ℤ/mℤ ∖ excluded`.
    pub fn excluding(modulus: u64, excluded: impl IntoIterator<Item = u64>) -> Self {
        let mut ex: Vec<u64> = excluded.into_iter().map(|h| h % modulus).collect();
        ex.sort_unstable();
        ex.dedup();
        if 2 * ex.len() as u64 >= modulus {
            return Self::from_allowed(modulus, (0..modulus).filter(|h| ex.binary_search(h).is_err()));
        }
        Self { modulus, members: ex, complement: true }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, h: u64) -> bool {
        self.members.binary_search(&(h % self.modulus)).is_ok() != self.complement
    }

    pub fn len(&self) -> u64 {
        if self.complement {
            self.modulus - self.members.len() as u64
        } else {
            self.members.len() as u64
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Residues not in the set.
    pub fn excluded(&self) -> Vec<u64> {
        if self.complement {
            self.members.clone()
        } else {
            (0..self.modulus).filter(|h| self.members.binary_search(h).is_err()).collect()
        }
    }

    /// `|S ∩ (S + z)|`.
    pub fn overlap(&self, z: i64) -> u64 {
        let m = self.modulus;
        let shift = rem(z, m);
        if self.complement {
            // |S ∩ (S+z)| = m - |E ∪ (E+z)| for the excluded set E
            let both = self.members.iter().filter(|&&e| self.members.binary_search(&((e + shift) % m)).is_ok()).count();
            return m - 2 * self.members.len() as u64 + both as u64;
        }
        (0..m).filter(|&h| self.contains(h) && self.contains((h + m - shift) % m)).count() as u64
    }

    /// `(1/m) Σ_{h∈S} e^{2πi a h / m}`.
    fn transform<T: Scalar>(&self, a: u64) -> Complex<T> {
        let m = self.modulus;
        let phase = |h: u64| {
            let t = T::of(2.0) * T::PI() * T::of(((a as u128 * h as u128) % m as u128) as f64) / T::of(m as f64);
            Complex::new(t.cos(), t.sin())
        };
        let sum: Complex<T> = self.members.iter().map(|&h| phase(h)).fold(Complex::zero(), |s, z| s + z);
        let total = if self.complement {
            let full = if a.is_multiple_of(m) { Complex::new(T::of(m as f64), T::zero()) } else { Complex::zero() };
            full - sum
        } else {
            sum
        };
        total / T::of(m as f64)
    }
}

/// A residue class `residue mod modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClass {
    pub residue: u64,
    pub modulus: u64,
}

impl ResidueClass {
    pub fn contains(&self, n: i64) -> bool {
        rem(n, self.modulus) == self.residue
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResidueWindow {
    /// `∏ Sᵢ` with `Sᵢ ⊆ ℤ/mᵢℤ`.
    Product { components: Vec<ResidueSet> },
    /// Disjoint union of residue classes with moduli dividing 2^J.
    ///
    /// The boundary point `(-1)*` and every deeper class reduce to the residue `-1 mod 2^J`,
    /// which is kept out of the window; its Haar mass in the untruncated window is
    /// `truncation_defect`.
    Odometer { depth: u32, classes: Vec<ResidueClass>, truncation_defect: Ratio<i64> },
}

impl ResidueWindow {
    pub fn product(scheme: &ResidueScheme, components: Vec<ResidueSet>) -> Result<Self> {
        if scheme.kind != ResidueKind::Product {
            return Err(Error::KindMismatch { expected: "product" });
        }
        if components.len() != scheme.moduli.len()
            || components.iter().zip(&scheme.moduli).any(|(c, &m)| c.modulus != m)
        {
            return Err(Error::InvalidInput("window components must match the scheme moduli".into()));
        }
        Ok(Self::Product { components })
    }

    /// `θ_H(W)`.
    pub fn measure<T: Scalar>(&self) -> T {
        match self {
            Self::Product { components } => components
                .iter()
                .fold(T::one(), |acc, c| acc * T::of(c.len() as f64) / T::of(c.modulus as f64)),
            Self::Odometer { classes, .. } => {
                classes.iter().map(|c| T::one() / T::of(c.modulus as f64)).sum()
            }
        }
    }

    /// Exact Haar measure of a truncated odometer window.
    pub fn odometer_measure(&self) -> Option<Ratio<i64>> {
        match self {
            Self::Odometer { classes, .. } => {
                Some(classes.iter().map(|c| Ratio::new(1, c.modulus as i64)).sum())
            }
            Self::Product { .. } => None,
        }
    }

    pub fn truncation_defect<T: Scalar>(&self) -> T {
        match self {
            Self::Product { .. } => T::zero(),
            Self::Odometer { truncation_defect, .. } => {
                T::of_i64(*truncation_defect.numer()) / T::of_i64(*truncation_defect.denom())
            }
        }
    }

    /// Whether `n* ∈ W`.
    pub fn contains(&self, n: i64) -> bool {
        match self {
            Self::Product { components } => components.iter().all(|c| c.contains(rem(n, c.modulus))),
            Self::Odometer { classes, .. } => classes.iter().any(|c| c.contains(n)),
        }
    }

    /// Covariogram `θ_H(W ∩ (W + z*))`.
    pub fn overlap<T: Scalar>(&self, z: i64) -> T {
        match self {
            Self::Product { components } => components.iter().fold(T::one(), |acc, c| {
                acc * T::of(c.overlap(z) as f64) / T::of(c.modulus as f64)
            }),
            Self::Odometer { classes, .. } => {
                // Classes a mod M and b mod M' with M | M' (powers of 2) meet in
                // h ≡ a, h - z ≡ b iff a ≡ b + z mod M, in a set of measure 1/M'.
                let mut total = T::zero();
                for a in classes {
                    for b in classes {
                        let small = a.modulus.min(b.modulus);
                        let large = a.modulus.max(b.modulus);
                        let lhs = a.residue as i64;
                        let rhs = b.residue as i64 + z;
                        if (lhs - rhs).rem_euclid(small as i64) == 0 {
                            total = total + T::one() / T::of(large as f64);
                        }
                    }
                }
                total
            }
        }
    }
}

/// `W = ∏_{p ≤ P} (ℤ/p²ℤ ∖ {0})`.
pub fn squarefree_window(scheme: &ResidueScheme) -> Result<ResidueWindow> {
    let prime_squares = scheme.kind == ResidueKind::Product
        && scheme.moduli.iter().all(|&m| {
            let p = (m as f64).sqrt().round() as u64;
            p * p == m && crate::arith::factorize(p).len() == 1 && crate::arith::factorize(p)[0].1 == 1
        });
    if !prime_squares {
        return Err(Error::KindMismatch { expected: "product scheme with prime-square moduli" });
    }
    let components = scheme.moduli.iter().map(|&m| ResidueSet::excluding(m, [0])).collect();
    ResidueWindow::product(scheme, components)
}

/// `⋃_j (4^j - 1 mod 2·4^j)` over all `j` with `2·4^j ≤ 2^J`.
pub fn period_doubling_window(scheme: &ResidueScheme) -> Result<ResidueWindow> {
    let depth = scheme.depth().ok_or(Error::KindMismatch { expected: "odometer" })?;
    let classes: Vec<ResidueClass> = (0..)
        .map(|j: u32| (j, 2u64 << (2 * j)))
        .take_while(|&(_, modulus)| modulus <= 1u64 << depth)
        .map(|(j, modulus)| ResidueClass { residue: (1u64 << (2 * j)) - 1, modulus })
        .collect();
    // Σ_{j ≥ j0} 1/(2·4^j) = (2/3) · 4^{-j0}
    let j0 = classes.len() as u32;
    let truncation_defect = Ratio::new(2, 3 * (1i64 << (2 * j0)));
    Ok(ResidueWindow::Odometer { depth, classes, truncation_defect })
}

/// Element of the dual lattice of a residue scheme: a frequency `x ∈ ℝ` and the internal
/// character it pairs with.
///
/// Product schemes: `x = k - Σ ℓᵢ/mᵢ`. Odometer: `x = k + ℓ/2^r` with one component at
/// level `r`, as in the unique parametrisation `m/2^r` (`r = 0`, or `r ≥ 1` with `m` odd).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualCharacterLabel {
    pub k: i64,
    /// Nonzero components `(ℓᵢ, mᵢ)`.
    pub components: Vec<(u64, u64)>,
    pub frequency: Ratio<i64>,
}

impl fmt::Display for DualCharacterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.frequency)
    }
}

impl DualCharacterLabel {
    /// `r` with `frequency = m/2^r` in lowest terms.
    pub fn dyadic_level(&self) -> Option<u32> {
        let q = *self.frequency.denom() as u64;
        q.is_power_of_two().then(|| q.trailing_zeros())
    }
}

/// Dual label of the frequency `x`, or `LabelOutOfModule` if `x` is not in the Fourier module.
pub fn dual_label(scheme: &ResidueScheme, frequency: Ratio<i64>) -> Result<DualCharacterLabel> {
    let q = *frequency.denom() as u64;
    if !scheme.admits_denominator(q) {
        return Err(Error::LabelOutOfModule(frequency.to_string()));
    }
    let k_floor = frequency.floor().to_integer();
    let frac = frequency - Ratio::from_integer(k_floor);
    let m = *frac.numer();
    match scheme.kind {
        ResidueKind::Odometer => {
            let components = if q > 1 { vec![(m as u64, q)] } else { vec![] };
            Ok(DualCharacterLabel { k: k_floor, components, frequency })
        }
        ResidueKind::Product => {
            // m/q ≡ Σ aᵢ/qᵢ (mod 1) with qᵢ = gcd(q, mᵢ); then ℓᵢ = -aᵢ·(mᵢ/qᵢ) mod mᵢ.
            let mut components = Vec::new();
            let mut sum = Ratio::from_integer(0i64);
            for &mi in &scheme.moduli {
                let qi = q.gcd(&mi);
                if qi == 1 {
                    continue;
                }
                let cof = (q / qi) as i64;
                let inv = mod_inverse(cof.rem_euclid(qi as i64), qi as i64).expect("coprime factors");
                let ai = (m as i128 * inv as i128).rem_euclid(qi as i128) as i64;
                if ai == 0 {
                    continue;
                }
                let li = ((-(ai as i128) * (mi / qi) as i128).rem_euclid(mi as i128)) as u64;
                components.push((li, mi));
                sum += Ratio::new(li as i64, mi as i64);
            }
            let k = frequency + sum;
            debug_assert!(k.is_integer());
            Ok(DualCharacterLabel { k: k.to_integer(), components, frequency })
        }
    }
}

/// All frequencies `m/q ∈ [0, 1)` of the Fourier module with `q ≤ Q`, sorted by value.
pub fn dual_frequency_module(scheme: &ResidueScheme, denominator_bound: u64) -> Vec<DualCharacterLabel> {
    let mut out = Vec::new();
    for q in 1..=denominator_bound.max(1) {
        if !scheme.admits_denominator(q) {
            continue;
        }
        for m in 0..q {
            if m.gcd(&q) == 1 {
                let label = dual_label(scheme, Ratio::new(m as i64, q as i64)).expect("admissible denominator");
                out.push(label);
            }
        }
    }
    out.sort_by_key(|a| a.frequency);
    out
}

fn check_label(scheme: &ResidueScheme, label: &DualCharacterLabel) -> Result<()> {
    let canonical = dual_label(scheme, label.frequency)?;
    if canonical.components != label.components {
        return Err(Error::LabelOutOfModule(label.to_string()));
    }
    Ok(())
}

/// Fourier transform `1̌_W` of the window at the character of `label`.
///
/// Product windows: the finite product of per-component sums (truncated at the scheme's
/// moduli). Odometer windows: the untruncated closed form `(-1)^r (2^{1-r}/3) e^{-2πi x}`
/// at `x = m/2^r`.
pub fn window_fourier_transform<T: Scalar>(
    scheme: &ResidueScheme,
    window: &ResidueWindow,
    label: &DualCharacterLabel,
) -> Result<Complex<T>> {
    check_label(scheme, label)?;
    match window {
        ResidueWindow::Product { components } => {
            let mut value = Complex::new(T::one(), T::zero());
            for c in components {
                let l = label
                    .components
                    .iter()
                    .find(|&&(_, m)| m == c.modulus)
                    .map_or(0, |&(l, _)| l);
                // component frequency -ℓ/m
                value = value * c.transform::<T>((c.modulus - l) % c.modulus);
            }
            Ok(value)
        }
        ResidueWindow::Odometer { .. } => {
            if scheme.kind != ResidueKind::Odometer {
                return Err(Error::KindMismatch { expected: "odometer" });
            }
            let r = label.dyadic_level().expect("odometer labels are dyadic");
            Ok(odometer_closed_form(label.frequency, r))
        }
    }
}

fn odometer_closed_form<T: Scalar>(x: Ratio<i64>, r: u32) -> Complex<T> {
    let sign = if r.is_multiple_of(2) { T::one() } else { -T::one() };
    let amplitude = sign * T::of(2.0).powi(1 - r as i32) / T::of(3.0);
    let t = -T::of(2.0) * T::PI() * frac_of::<T>(x);
    Complex::new(amplitude * t.cos(), amplitude * t.sin())
}

/// Fractional part of a rational as a scalar.
pub(crate) fn frac_of<T: Scalar>(x: Ratio<i64>) -> T {
    let f = x - x.floor();
    T::of_i64(*f.numer()) / T::of_i64(*f.denom())
}

/// Finite-group evaluation of the truncated odometer window transform,
/// `2^{-J} Σ_{h ∈ W} e^{2πi x h}`, by enumerating all `2^J` residues.
pub fn odometer_direct_transform<T: Scalar>(window: &ResidueWindow, x: Ratio<i64>) -> Result<Complex<T>> {
    let ResidueWindow::Odometer { depth, .. } = window else {
        return Err(Error::KindMismatch { expected: "odometer" });
    };
    let size = 1u64 << depth;
    let (num, den) = (x.numer().rem_euclid(*x.denom()) as u128, *x.denom() as u128);
    let mut sum = Complex::zero();
    for h in 0..size {
        if window.contains(h as i64) {
            let t = T::of(2.0) * T::PI() * T::of(((num * h as u128) % den) as f64) / T::of(den as f64);
            sum = sum + Complex::new(t.cos(), t.sin());
        }
    }
    Ok(sum / T::of(size as f64))
}

/// Contribution of the mass left out by truncation, placed at the boundary point `(-1)*`:
/// `defect · e^{2πi x (2^J - 1)}`.
pub fn odometer_defect_term<T: Scalar>(window: &ResidueWindow, x: Ratio<i64>) -> Result<Complex<T>> {
    let ResidueWindow::Odometer { depth, .. } = window else {
        return Err(Error::KindMismatch { expected: "odometer" });
    };
    let h = Ratio::from_integer((1i64 << depth) - 1);
    let t = T::of(2.0) * T::PI() * frac_of::<T>(x * h);
    Ok(Complex::new(t.cos(), t.sin()) * window.truncation_defect::<T>())
}
