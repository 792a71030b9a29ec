//! Invariant checks run by `modelset verify`.
//!
//! Every check is deterministic and reports its measured value next to the tolerance it
//! was held to. Timings are deliberately absent so that reports are byte-for-byte stable.

use num_rational::Ratio;
use serde::Serialize;

use modelset::arith::primes_up_to;
use modelset::residue::{odometer_defect_term, odometer_direct_transform};
use modelset::{
    compare, density_estimate, dual_label, empirical_autocorrelation, fibonacci_scheme, fibonacci_spectrum,
    fibonacci_window, generate, lattice_spectrum, period_doubling_scheme, period_doubling_spectrum,
    period_doubling_window, poisson_sides, predicted_autocorrelation, squarefree_scheme, squarefree_spectrum,
    squarefree_window, structure_factor, window_fourier_transform, DisplacementKey, EuclideanModelSet,
    FrequencyLabel, Gaussian, HatAutocorrelation, Interval, Labels, LatticeF64, ModelSet, PointSet, PointSetF64,
    ResidueModelSet, Scalar,
};

use crate::jobs::SchemeChoice;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn at_most(name: &str, value: f64, tolerance: f64, detail: String) -> Self {
        Self { name: name.to_string(), passed: value <= tolerance, value, tolerance, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,passed,value,tolerance\n");
        for c in &self.checks {
            s.push_str(&format!("{},{},{},{}\n", c.name, c.passed, c.value, c.tolerance));
        }
        s
    }
}

/// Sizes and truncations for a verification run; `None` means the full default suite.
#[derive(Debug, Clone, Default)]
pub struct VerifyConfig {
    pub scheme: Option<SchemeChoice>,
    pub n: Option<i64>,
    pub prime_bound: Option<u64>,
    pub depth: Option<u32>,
    /// Euclidean model set read from scheme and window files.
    pub custom: Option<EuclideanModelSet<f64>>,
}

pub const LATTICE_RADIUS: i64 = 10_000;
pub const FIBONACCI_RADIUS: f64 = 10_000.0;
pub const FIBONACCI_SAMPLE_POINTS: f64 = 5000.0;
pub const SQUAREFREE_N: i64 = 1_000_000;
pub const SQUAREFREE_SIEVE_N: i64 = 100_000;
pub const SQUAREFREE_PRIME_BOUND: u64 = 100;
pub const PERIOD_DOUBLING_N: i64 = 1 << 16;
pub const PERIOD_DOUBLING_DEPTH: u32 = 20;
pub const ODOMETER_DEPTH: u32 = 10;
pub const ODOMETER_LEVELS: u32 = 8;
const AUTOCORRELATION_COUNT: usize = 20;

pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let mut checks = Vec::new();
    let all = cfg.scheme.is_none();
    if all {
        checks.push(psf_gaussian(40));
        checks.push(psf_hat_autocorrelation());
        checks.push(lattice_autocorrelation(LATTICE_RADIUS));
        checks.push(lattice_diffraction(LATTICE_RADIUS));
    }
    if all || cfg.scheme == Some(SchemeChoice::Fibonacci) {
        let r = cfg.n.map_or(FIBONACCI_RADIUS, |n| n as f64);
        checks.push(fibonacci_density(r));
        checks.push(fibonacci_gaps(r));
        checks.push(fibonacci_diffraction(FIBONACCI_SAMPLE_POINTS));
        checks.push(fibonacci_autocorrelation(r));
    }
    if all || cfg.scheme == Some(SchemeChoice::Squarefree) {
        let p = cfg.prime_bound.unwrap_or(SQUAREFREE_PRIME_BOUND);
        checks.push(squarefree_density(cfg.n.unwrap_or(SQUAREFREE_N)));
        checks.push(squarefree_window_measure(p));
        checks.push(squarefree_spectrum_values());
        checks.push(squarefree_diffraction(cfg.n.unwrap_or(SQUAREFREE_N)));
        checks.push(squarefree_sieve(p, cfg.n.unwrap_or(SQUAREFREE_SIEVE_N)));
        checks.push(squarefree_autocorrelation(cfg.n.unwrap_or(SQUAREFREE_N)));
    }
    if let Some(model) = &cfg.custom {
        checks.push(custom_density(model, cfg.n.map_or(FIBONACCI_RADIUS, |n| n as f64)));
    }
    if all || cfg.scheme == Some(SchemeChoice::PeriodDoubling) {
        let n = cfg.n.unwrap_or(PERIOD_DOUBLING_N);
        checks.push(period_doubling_levels(4));
        checks.push(period_doubling_density(n));
        checks.push(period_doubling_diffraction(n));
        checks.push(odometer_transform(cfg.depth.unwrap_or(ODOMETER_DEPTH), ODOMETER_LEVELS));
        checks.push(period_doubling_autocorrelation(n));
    }
    VerifyReport { passed: checks.iter().all(|c| c.passed), checks }
}

fn fibonacci_model() -> EuclideanModelSet<f64> {
    EuclideanModelSet::new(fibonacci_scheme(), fibonacci_window()).expect("Fibonacci window matches its scheme")
}

/// Exactly squarefree integers: the window truncated at `⌊√n⌋` decides every `k ≤ n`.
fn exact_squarefree_model(n: i64) -> ResidueModelSet {
    squarefree_model(((n.max(4) as f64).sqrt().floor() as u64).max(2))
}

fn squarefree_model(p: u64) -> ResidueModelSet {
    let s = squarefree_scheme(p).expect("prime bound ≥ 2");
    let w = squarefree_window(&s).expect("prime-square moduli");
    ResidueModelSet::new(s, w).expect("matching window")
}

fn period_doubling_model(depth: u32) -> ResidueModelSet {
    let s = period_doubling_scheme(depth).expect("valid depth");
    let w = period_doubling_window(&s).expect("odometer scheme");
    ResidueModelSet::new(s, w).expect("matching window")
}

fn integers(lo: i64, hi: i64) -> PointSetF64 {
    let pts: Vec<f64> = (lo..=hi).map(|k| k as f64).collect();
    let weights = vec![1.0; pts.len()];
    let labels = Labels::new(1, (lo..=hi).collect()).expect("width 1");
    PointSet::new(pts, weights, Some(labels), Interval::closed(lo as f64, hi as f64).expect("lo < hi"))
        .expect("sorted points inside the region")
}

/// Gaussian on `aℤ`, `a ∈ {1/2, 1, 2}`.
pub fn psf_gaussian(radius: i64) -> Check {
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        let l = LatticeF64::scaled_integers(a).expect("a > 0");
        worst = worst.max(poisson_sides(&l, &Gaussian, radius).expect("regular lattice").abs_error);
    }
    Check::at_most("psf_gaussian", worst, 1e-10, format!("a in {{0.5, 1, 2}}, radius {radius}"))
}

/// Autocorrelation of the hat function on `aℤ`, `a ∈ {1/2, 1, 2}`.
pub fn psf_hat_autocorrelation() -> Check {
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        let l = LatticeF64::scaled_integers(a).expect("a > 0");
        worst = worst.max(poisson_sides(&l, &HatAutocorrelation, 4000).expect("regular lattice").abs_error);
    }
    Check::at_most("psf_hat_autocorrelation", worst, 1e-10, "a in {0.5, 1, 2}, radius 4000".into())
}

/// `η(z) = 1` for `z ∈ {-10, …, 10}` on `ℤ ∩ [-r, r]`.
pub fn lattice_autocorrelation(r: i64) -> Check {
    let ps = integers(-r, r);
    let est = empirical_autocorrelation(&ps, 10.0).expect("displacement below region length");
    let worst = (-10..=10).map(|z| (est.at_label(&[z]).unwrap_or(0.0) - 1.0).abs()).fold(0.0, f64::max);
    Check::at_most("lattice_autocorrelation", worst, 1e-3, format!("Z on [-{r}, {r}], |z| <= 10"))
}

/// Structure factor of `ℤ ∩ [-r, r]` equals `dens² = 1` at `k ∈ {-3, …, 3}`.
pub fn lattice_diffraction(r: i64) -> Check {
    let ps = integers(-r, r);
    let spec = lattice_spectrum(&LatticeF64::scaled_integers(1.0).expect("unit lattice"), 3.0).expect("1-D");
    let freqs: Vec<f64> = spec.peaks().iter().map(|p| p.frequency).collect();
    let sf = structure_factor(&ps, &freqs);
    let worst = sf.intensities.iter().zip(spec.peaks()).map(|(m, p)| (m - p.intensity).abs()).fold(0.0, f64::max);
    Check::at_most("lattice_diffraction", worst, 1e-3, format!("Z on [-{r}, {r}], k in -3..3"))
}

pub fn fibonacci_density(r: f64) -> Check {
    let model = fibonacci_model();
    let predicted = model.predicted_density();
    match Interval::centered(r).and_then(|reg| generate(&model, &reg)) {
        Ok(ps) => {
            let est = density_estimate(&ps);
            Check::at_most(
                "fibonacci_density",
                (est - predicted).abs(),
                1e-3,
                format!("{} points on [-{r}, {r}], estimate {est}, predicted {predicted}", ps.len()),
            )
        }
        Err(e) => failed("fibonacci_density", e.to_string()),
    }
}

/// Density of a Euclidean model set on `[-r, r]` against `dens(L)·θ(W)`.
pub fn custom_density(model: &EuclideanModelSet<f64>, r: f64) -> Check {
    let predicted = model.predicted_density();
    match Interval::centered(r).and_then(|reg| generate(model, &reg)) {
        Ok(ps) => {
            let est = density_estimate(&ps);
            Check::at_most(
                "custom_density",
                (est - predicted).abs(),
                1e-3,
                format!("{} points on [-{r}, {r}], estimate {est}, predicted {predicted}", ps.len()),
            )
        }
        Err(e) => failed("custom_density", e.to_string()),
    }
}

fn failed(name: &str, detail: String) -> Check {
    Check { name: name.into(), passed: false, value: f64::NAN, tolerance: 0.0, detail }
}

/// Exactly two nearest-neighbour gaps whose ratio is `τ`.
pub fn fibonacci_gaps(r: f64) -> Check {
    let ps = match Interval::centered(r).and_then(|reg| generate(&fibonacci_model(), &reg)) {
        Ok(ps) => ps,
        Err(e) => return failed("fibonacci_gaps", e.to_string()),
    };
    let mut distinct: Vec<f64> = Vec::new();
    for g in ps.gaps() {
        if !distinct.iter().any(|d| (d - g).abs() < 1e-9) {
            distinct.push(g);
        }
    }
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite gaps"));
    if distinct.len() != 2 {
        return failed("fibonacci_gaps", format!("{} distinct gaps", distinct.len()));
    }
    let err = (distinct[1] / distinct[0] - f64::golden()).abs();
    Check::at_most("fibonacci_gaps", err, 1e-9, format!("gaps {} and {}", distinct[0], distinct[1]))
}

/// Top ten closed-form peaks against the structure factor of about `points` points.
pub fn fibonacci_diffraction(points: f64) -> Check {
    let model = fibonacci_model();
    let r = points / (2.0 * model.predicted_density());
    let ps = match Interval::centered(r).and_then(|reg| generate(&model, &reg)) {
        Ok(ps) => ps,
        Err(e) => return failed("fibonacci_diffraction", e.to_string()),
    };
    let spec = fibonacci_spectrum::<f64>(12, 1e-6 * fibonacci_window::<f64>().measure().powi(2));
    let report = compare(&spec, &ps, 10);
    Check::at_most(
        "fibonacci_diffraction",
        report.max_relative_error,
        0.05,
        format!("{} points, top 10 peaks", ps.len()),
    )
}

/// Max `|η(z) - dens·(1_W * 1̃_W)(z*)|` over the twenty smallest realised displacements `z ≥ 0`.
pub fn fibonacci_autocorrelation(r: f64) -> Check {
    let model = fibonacci_model();
    let ps = match Interval::centered(r).and_then(|reg| generate(&model, &reg)) {
        Ok(ps) => ps,
        Err(e) => return failed("fibonacci_autocorrelation", e.to_string()),
    };
    let est = match empirical_autocorrelation(&ps, 12.0f64.min(ps.region_measure())) {
        Ok(e) => e,
        Err(e) => return failed("fibonacci_autocorrelation", e.to_string()),
    };
    let entries = est.smallest_nonnegative(AUTOCORRELATION_COUNT);
    if entries.len() < AUTOCORRELATION_COUNT {
        return failed("fibonacci_autocorrelation", format!("only {} displacements", entries.len()));
    }
    let mut worst = 0.0f64;
    for (key, e) in &entries {
        match predicted_autocorrelation(&model, key) {
            Ok(p) => worst = worst.max((e.eta - p).abs()),
            Err(err) => return failed("fibonacci_autocorrelation", err.to_string()),
        }
    }
    Check::at_most(
        "fibonacci_autocorrelation",
        worst,
        5e-3,
        format!("{} points, {} smallest displacements", ps.len(), entries.len()),
    )
}

fn residue_autocorrelation(name: &str, model: &ResidueModelSet, ps: &PointSetF64) -> Check {
    let zmax = (AUTOCORRELATION_COUNT - 1) as f64;
    let est = match empirical_autocorrelation(ps, zmax.min(ps.region_measure())) {
        Ok(e) => e,
        Err(e) => return failed(name, e.to_string()),
    };
    let mut worst = 0.0f64;
    for z in 0..AUTOCORRELATION_COUNT as i64 {
        let eta = est.at_label(&[z]).unwrap_or(0.0);
        let p: f64 = predicted_autocorrelation(model, &DisplacementKey::Label(vec![z])).expect("integer displacement");
        worst = worst.max((eta - p).abs());
    }
    Check::at_most(name, worst, 5e-3, format!("{} points, z in 0..{}", ps.len(), AUTOCORRELATION_COUNT - 1))
}

fn squarefree_sample(n: i64) -> Result<(ResidueModelSet, PointSetF64), String> {
    let model = exact_squarefree_model(n);
    let ps = Interval::closed(1.0, n as f64)
        .and_then(|reg| model.sample(&reg))
        .map_err(|e| e.to_string())?;
    Ok((model, ps))
}

pub fn squarefree_density(n: i64) -> Check {
    match squarefree_sample(n) {
        Ok((_, ps)) => {
            let est = density_estimate(&ps);
            let target = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
            Check::at_most(
                "squarefree_density",
                (est - target).abs(),
                2e-3,
                format!("{} squarefree integers in [1, {n}], estimate {est}", ps.len()),
            )
        }
        Err(e) => failed("squarefree_density", e),
    }
}

/// `0 ≤ θ(W_P) - 6/π² ≤ θ(W_P)/P`, and `θ(W_p)` strictly decreasing along the primes `p ≤ P`.
pub fn squarefree_window_measure(p: u64) -> Check {
    let target = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let mut previous = 1.0f64;
    let mut monotone = true;
    let mut measure = 1.0;
    for q in primes_up_to(p) {
        let s = squarefree_scheme(q).expect("q ≥ 2");
        measure = squarefree_window(&s).expect("prime squares").measure::<f64>();
        monotone &= measure < previous;
        previous = measure;
    }
    let excess = measure - target;
    // Σ_{p > P} p⁻² < Σ_{n > P} n⁻² < 1/P
    let bound = measure / p as f64;
    let mut c = Check::at_most(
        "squarefree_window_measure",
        excess,
        bound,
        format!("P = {p}, measure {measure}, monotone {monotone}"),
    );
    c.passed &= excess >= 0.0 && monotone;
    c
}

/// Closed-form intensities at `0`, `1/4`, `1/9`.
pub fn squarefree_spectrum_values() -> Check {
    let spec = match squarefree_spectrum::<f64>(9, SQUAREFREE_PRIME_BOUND) {
        Ok(s) => s,
        Err(e) => return failed("squarefree_spectrum", e.to_string()),
    };
    let expected = [((0, 1), 0.369_576), ((1, 4), 0.041_064), ((1, 9), 0.005_775)];
    let mut worst = 0.0f64;
    for ((m, q), v) in expected {
        match spec.get(&FrequencyLabel::Rational { m, q }) {
            Some(p) => worst = worst.max((p.intensity - v).abs()),
            None => return failed("squarefree_spectrum", format!("no peak at {m}/{q}")),
        }
    }
    Check::at_most("squarefree_spectrum", worst, 1e-4, "r in {0, 1/4, 1/9}".into())
}

pub fn squarefree_diffraction(n: i64) -> Check {
    let (_, ps) = match squarefree_sample(n) {
        Ok(x) => x,
        Err(e) => return failed("squarefree_diffraction", e),
    };
    let spec = match squarefree_spectrum::<f64>(9, SQUAREFREE_PRIME_BOUND) {
        Ok(s) => s,
        Err(e) => return failed("squarefree_diffraction", e.to_string()),
    };
    let labels = [(0, 1), (1, 4), (1, 9)];
    let peaks: Vec<_> = labels
        .iter()
        .filter_map(|&(m, q)| spec.get(&FrequencyLabel::Rational { m, q }).cloned())
        .collect();
    let freqs: Vec<f64> = peaks.iter().map(|p| p.frequency).collect();
    let sf = structure_factor(&ps, &freqs);
    let worst = sf
        .intensities
        .iter()
        .zip(&peaks)
        .map(|(m, p)| (m - p.intensity).abs() / p.intensity)
        .fold(0.0, f64::max);
    Check::at_most("squarefree_diffraction", worst, 0.02, format!("[1, {n}], r in {{0, 1/4, 1/9}}"))
}

/// Truncated-window membership against an independent squarefree sieve on `[1, n]`.
///
/// Every disagreement must be a window member divisible by `p²` for a prime `p > P`; their
/// number is held to `n Σ_{P < p ≤ √n} p⁻² + π(√n)`.
pub fn squarefree_sieve(p: u64, n: i64) -> Check {
    if p < 2 || n < 1 {
        return failed("squarefree_sieve", "need P >= 2 and N >= 1".into());
    }
    let model = squarefree_model(p);
    let mut in_window = vec![false; n as usize + 1];
    for k in model.members(1, n) {
        in_window[k as usize] = true;
    }
    // smallest k ≥ 2 with k² | j, or 0
    let mut least_square = vec![0u64; n as usize + 1];
    let mut k = 2u64;
    while k * k <= n as u64 {
        let mut j = k * k;
        while j <= n as u64 {
            if least_square[j as usize] == 0 {
                least_square[j as usize] = k;
            }
            j += k * k;
        }
        k += 1;
    }
    let mut mismatches = 0u64;
    let mut bad = 0u64;
    for j in 1..=n as usize {
        let squarefree = least_square[j] == 0;
        if in_window[j] != squarefree {
            mismatches += 1;
            if !in_window[j] || least_square[j] <= p {
                bad += 1;
            }
        }
    }
    let root = (n as f64).sqrt().floor() as u64;
    let tail: f64 = primes_up_to(root).iter().filter(|&&q| q > p).map(|&q| 1.0 / (q * q) as f64).sum();
    let bound = n as f64 * tail + primes_up_to(root).len() as f64;
    let mut c = Check::at_most(
        "squarefree_sieve",
        mismatches as f64,
        bound,
        format!("P = {p}, [1, {n}], {mismatches} mismatches, {bad} not explained by p > P"),
    );
    c.passed &= bad == 0;
    c
}

pub fn squarefree_autocorrelation(n: i64) -> Check {
    match squarefree_sample(n) {
        Ok((model, ps)) => residue_autocorrelation("squarefree_autocorrelation", &model, &ps),
        Err(e) => failed("squarefree_autocorrelation", e),
    }
}

/// Closed-form intensities equal `4^{1-r}/9` for `r ≤ rmax`.
pub fn period_doubling_levels(rmax: u32) -> Check {
    let spec = match period_doubling_spectrum::<f64>(rmax, 1) {
        Ok(s) => s,
        Err(e) => return failed("period_doubling_levels", e.to_string()),
    };
    let mut worst = 0.0f64;
    for p in spec.peaks() {
        let FrequencyLabel::Dyadic { r, .. } = p.label else {
            return failed("period_doubling_levels", format!("unexpected label {}", p.label));
        };
        let exact = Ratio::new(4i64, 9) / Ratio::from_integer(4i64.pow(r));
        worst = worst.max((p.intensity - *exact.numer() as f64 / *exact.denom() as f64).abs());
    }
    Check::at_most("period_doubling_levels", worst, 1e-15, format!("r <= {rmax}"))
}

fn period_doubling_sample(n: i64) -> Result<(ResidueModelSet, PointSetF64), String> {
    let model = period_doubling_model(PERIOD_DOUBLING_DEPTH);
    let ps = Interval::half_open(0.0, n as f64)
        .and_then(|reg| model.sample(&reg))
        .map_err(|e| e.to_string())?;
    Ok((model, ps))
}

/// Density `2/3` on `[0, n)` and origin intensity `(2/3)²`.
pub fn period_doubling_density(n: i64) -> Check {
    let (_, ps) = match period_doubling_sample(n) {
        Ok(x) => x,
        Err(e) => return failed("period_doubling_density", e),
    };
    let est = density_estimate(&ps);
    let origin = period_doubling_spectrum::<f64>(0, 0).expect("r = 0").peaks()[0].intensity;
    let mut c = Check::at_most(
        "period_doubling_density",
        (est - 2.0 / 3.0).abs(),
        1e-3,
        format!("[0, {n}), estimate {est}, origin intensity {origin}"),
    );
    c.passed &= (origin - (2.0f64 / 3.0).powi(2)).abs() < 1e-15;
    c
}

pub fn period_doubling_diffraction(n: i64) -> Check {
    let (_, ps) = match period_doubling_sample(n) {
        Ok(x) => x,
        Err(e) => return failed("period_doubling_diffraction", e),
    };
    let spec = period_doubling_spectrum::<f64>(8, 1).expect("r <= 40");
    let report = compare(&spec, &ps, 10);
    Check::at_most(
        "period_doubling_diffraction",
        report.max_relative_error,
        0.02,
        format!("{} points in [0, {n}), top 10 peaks", ps.len()),
    )
}

/// Closed form of the window transform against the finite-group sum plus the truncation
/// defect, for every `x = m/2^r` with `r ≤ levels` and `|x| ≤ 1`.
pub fn odometer_transform(depth: u32, levels: u32) -> Check {
    let scheme = match period_doubling_scheme(depth) {
        Ok(s) => s,
        Err(e) => return failed("odometer_transform", e.to_string()),
    };
    let window = period_doubling_window(&scheme).expect("odometer scheme");
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for r in 0..=levels.min(depth) {
        let den = 1i64 << r;
        for m in -den..=den {
            let x = Ratio::new(m, den);
            let label = dual_label(&scheme, x).expect("dyadic of level ≤ depth");
            let closed = window_fourier_transform::<f64>(&scheme, &window, &label).expect("odometer");
            let direct = odometer_direct_transform::<f64>(&window, x).expect("odometer")
                + odometer_defect_term::<f64>(&window, x).expect("odometer");
            worst = worst.max((closed - direct).norm());
            count += 1;
        }
    }
    Check::at_most("odometer_transform", worst, 1e-10, format!("J = {depth}, {count} frequencies"))
}

pub fn period_doubling_autocorrelation(n: i64) -> Check {
    match period_doubling_sample(n) {
        Ok((model, ps)) => residue_autocorrelation("period_doubling_autocorrelation", &model, &ps),
        Err(e) => failed("period_doubling_autocorrelation", e),
    }
}
