//! Model sets from cut-and-project schemes with Euclidean and residue-ring internal spaces,
//! their densities, autocorrelations and pure point diffraction spectra.
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`); the `*F64` aliases below are
//! the usual entry points.

pub mod arith;
pub mod config;
pub mod error;
pub mod euclid;
pub mod golden;
pub mod linalg;
pub mod pointset;
pub mod psf;
pub mod residue;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};
pub use euclid::{
    build_scheme, dual_lattice, fibonacci_scheme, fibonacci_window, BoxWindow, Closure, EuclideanScheme, Interval,
    IntervalWindow, Lattice, LatticePoint, Region,
};
pub use golden::GoldenInteger;
pub use linalg::Matrix;
pub use pointset::{
    density_estimate, empirical_autocorrelation, generate, predicted_autocorrelation, AutocorrelationEstimate,
    AutocorrelationEntry, DisplacementKey, EuclideanModelSet, Labels, ModelSet, PointSet, ResidueModelSet,
};
pub use psf::{poisson_sides, Gaussian, HatAutocorrelation, PsfCheck, PsfTestFunction};
pub use residue::{
    dual_frequency_module, dual_label, period_doubling_scheme, period_doubling_window, squarefree_scheme,
    squarefree_window, window_fourier_transform, DualCharacterLabel, ResidueClass, ResidueKind, ResidueScheme,
    ResidueSet, ResidueWindow,
};
pub use scalar::Scalar;
pub use spectrum::{
    compare, euclidean_model_set_spectrum, fibonacci_spectrum, lattice_spectrum, period_doubling_spectrum,
    squarefree_spectrum, structure_factor, ComparisonReport, FrequencyLabel, Peak, Spectrum, StructureFactorSample,
};

pub type IntervalF64 = Interval<f64>;
pub type LatticeF64 = Lattice<f64>;
pub type EuclideanSchemeF64 = EuclideanScheme<f64>;
pub type PointSetF64 = PointSet<f64>;
pub type SpectrumF64 = Spectrum<f64>;
pub type AutocorrelationF64 = AutocorrelationEstimate<f64>;

pub type IntervalF32 = Interval<f32>;
pub type LatticeF32 = Lattice<f32>;
pub type EuclideanSchemeF32 = EuclideanScheme<f32>;
pub type PointSetF32 = PointSet<f32>;
pub type SpectrumF32 = Spectrum<f32>;
