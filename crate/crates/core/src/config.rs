//! JSON file formats for schemes and windows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euclid::{build_scheme, Closure, EuclideanScheme, Interval};
use crate::linalg::Matrix;
use crate::residue::{period_doubling_scheme, period_doubling_window, squarefree_scheme, squarefree_window, ResidueScheme, ResidueWindow};

/// `{ "d": 1, "n": 1, "basis": [...] }` with `(d+n)²` entries in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub d: usize,
    pub n: usize,
    pub basis: Vec<f64>,
}

impl SchemeFile {
    pub fn build(&self) -> Result<EuclideanScheme<f64>> {
        let dim = self.d + self.n;
        let basis = Matrix::from_row_major(dim, self.basis.clone()).ok_or_else(|| {
            Error::InvalidInput(format!("basis has {} entries, expected {}", self.basis.len(), dim * dim))
        })?;
        build_scheme(basis, self.d, self.n)
    }
}

/// `{ "lower": -0.5, "upper": 0.5, "closure": "half_open_right" }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowFile {
    pub lower: f64,
    pub upper: f64,
    #[serde(default)]
    pub closure: Closure,
}

impl WindowFile {
    pub fn build(&self) -> Result<Interval<f64>> {
        Interval::new(self.lower, self.upper, self.closure)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueConfigKind {
    Squarefree,
    PeriodDoubling,
}

/// `{ "kind": "squarefree", "prime_bound": 100, "depth": null }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidueConfig {
    pub kind: ResidueConfigKind,
    #[serde(default)]
    pub prime_bound: Option<u64>,
    #[serde(default)]
    pub depth: Option<u32>,
}

pub const DEFAULT_PRIME_BOUND: u64 = 100;
pub const DEFAULT_DEPTH: u32 = 20;

impl ResidueConfig {
    pub fn build(&self) -> Result<(ResidueScheme, ResidueWindow)> {
        match self.kind {
            ResidueConfigKind::Squarefree => {
                let s = squarefree_scheme(self.prime_bound.unwrap_or(DEFAULT_PRIME_BOUND))?;
                let w = squarefree_window(&s)?;
                Ok((s, w))
            }
            ResidueConfigKind::PeriodDoubling => {
                let s = period_doubling_scheme(self.depth.unwrap_or(DEFAULT_DEPTH))?;
                let w = period_doubling_window(&s)?;
                Ok((s, w))
            }
        }
    }
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
}
