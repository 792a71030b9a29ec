use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use modelset::config::{parse_json, ResidueConfig, ResidueConfigKind, SchemeFile, WindowFile};
use modelset::{
    fibonacci_scheme, fibonacci_window, period_doubling_scheme, period_doubling_window, squarefree_scheme,
    squarefree_window, EuclideanModelSet, Interval, ModelSet, PointSetF64, ResidueModelSet,
};

pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub const DEFAULT_PRIME_BOUND: u64 = 100;
pub const DEFAULT_DEPTH: u32 = 20;

#[derive(Debug)]
pub enum JobError {
    Config(String),
    Io(String),
    Verify(String),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verify(_) => EXIT_VERIFY,
            Self::Config(_) => EXIT_CONFIG,
            Self::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for JobError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::Verify(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<modelset::Error> for JobError {
    fn from(e: modelset::Error) -> Self {
        Self::Config(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SchemeChoice {
    Fibonacci,
    Squarefree,
    PeriodDoubling,
    /// Euclidean scheme and interval window read from `--scheme-file` / `--window-file`.
    Custom,
}

/// Everything needed to build a model set and its default sampling region.
#[derive(Debug, Clone, Default)]
pub struct SchemeSpec {
    pub scheme: Option<SchemeChoice>,
    pub n: Option<i64>,
    pub prime_bound: Option<u64>,
    pub depth: Option<u32>,
    pub scheme_file: Option<PathBuf>,
    pub window_file: Option<PathBuf>,
    pub config: Option<PathBuf>,
}

pub enum Model {
    Euclidean { model: EuclideanModelSet<f64>, fibonacci: bool },
    Residue { model: ResidueModelSet, kind: ResidueConfigKind, prime_bound: u64, depth: u32 },
}

pub fn read_text(path: &Path) -> Result<String, JobError> {
    fs::read_to_string(path).map_err(|e| JobError::Io(format!("{}: {e}", path.display())))
}

impl SchemeSpec {
    /// The scheme named on the command line, or the one implied by a residue config file.
    pub fn choice(&self) -> Result<SchemeChoice, JobError> {
        if let Some(path) = &self.config {
            let cfg: ResidueConfig = parse_json(&read_text(path)?)?;
            return Ok(match cfg.kind {
                ResidueConfigKind::Squarefree => SchemeChoice::Squarefree,
                ResidueConfigKind::PeriodDoubling => SchemeChoice::PeriodDoubling,
            });
        }
        Ok(self.scheme.unwrap_or(if self.scheme_file.is_some() { SchemeChoice::Custom } else { SchemeChoice::Fibonacci }))
    }

    pub fn build(&self) -> Result<Model, JobError> {
        let mut prime_bound = self.prime_bound;
        let mut depth = self.depth;
        if let Some(path) = &self.config {
            let cfg: ResidueConfig = parse_json(&read_text(path)?)?;
            prime_bound = prime_bound.or(cfg.prime_bound);
            depth = depth.or(cfg.depth);
        }
        let prime_bound = prime_bound.unwrap_or(DEFAULT_PRIME_BOUND);
        let depth = depth.unwrap_or(DEFAULT_DEPTH);
        Ok(match self.choice()? {
            SchemeChoice::Fibonacci => Model::Euclidean {
                model: EuclideanModelSet::new(fibonacci_scheme(), fibonacci_window())?,
                fibonacci: true,
            },
            SchemeChoice::Squarefree => {
                let s = squarefree_scheme(prime_bound)?;
                let w = squarefree_window(&s)?;
                Model::Residue {
                    model: ResidueModelSet::new(s, w)?,
                    kind: ResidueConfigKind::Squarefree,
                    prime_bound,
                    depth,
                }
            }
            SchemeChoice::PeriodDoubling => {
                let s = period_doubling_scheme(depth)?;
                let w = period_doubling_window(&s)?;
                Model::Residue {
                    model: ResidueModelSet::new(s, w)?,
                    kind: ResidueConfigKind::PeriodDoubling,
                    prime_bound,
                    depth,
                }
            }
            SchemeChoice::Custom => {
                let (Some(sf), Some(wf)) = (&self.scheme_file, &self.window_file) else {
                    return Err(JobError::Config("custom scheme needs --scheme-file and --window-file".into()));
                };
                let scheme: SchemeFile = parse_json(&read_text(sf)?)?;
                let window: WindowFile = parse_json(&read_text(wf)?)?;
                let scheme = scheme.build()?;
                if scheme.injectivity_warning() {
                    eprintln!("warning: physical projection is not injective on the spot-check box");
                }
                Model::Euclidean { model: EuclideanModelSet::new(scheme, window.build()?)?, fibonacci: false }
            }
        })
    }
}

impl Model {
    /// `[-N, N]` for Euclidean schemes, `[1, N]` for squarefree, `[0, N]` for period doubling.
    pub fn region(&self, n: i64) -> Result<Interval<f64>, JobError> {
        if n < 0 {
            return Err(JobError::Config("--N must be nonnegative".into()));
        }
        let n = n as f64;
        let r = match self {
            Model::Euclidean { .. } => Interval::closed(-n, n),
            Model::Residue { kind: ResidueConfigKind::Squarefree, .. } => Interval::closed(1.0, n),
            Model::Residue { kind: ResidueConfigKind::PeriodDoubling, .. } => Interval::closed(0.0, n),
        };
        Ok(r?)
    }

    /// Region sizes of the reference figures: 100 for Fibonacci, 1500 for squarefree.
    pub fn default_size(&self) -> i64 {
        match self {
            Model::Euclidean { .. } => 100,
            Model::Residue { kind: ResidueConfigKind::Squarefree, .. } => 1500,
            Model::Residue { kind: ResidueConfigKind::PeriodDoubling, .. } => 1024,
        }
    }

    pub fn as_model_set(&self) -> &dyn ModelSet<f64> {
        match self {
            Model::Euclidean { model, .. } => model,
            Model::Residue { model, .. } => model,
        }
    }

    pub fn sample(&self, n: i64) -> Result<PointSetF64, JobError> {
        let region = self.region(n)?;
        Ok(self.as_model_set().sample(&region)?)
    }
}
