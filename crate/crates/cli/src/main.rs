use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modelset::{
    compare, density_estimate, empirical_autocorrelation, euclidean_model_set_spectrum, fibonacci_spectrum,
    period_doubling_spectrum, predicted_autocorrelation, squarefree_spectrum, AutocorrelationEntry,
    DisplacementKey, PointSetF64, SpectrumF64,
};
use modelset::config::ResidueConfigKind;
use modelset_cli::jobs::{JobError, Model, SchemeChoice, SchemeSpec};
use modelset_cli::verify::{run_verify, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "modelset", version, about = "Cut-and-project point sets, autocorrelation and diffraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the model set inside the default region of size N.
    Gen(CommonArgs),
    /// Density estimate against dens(L)·θ(W).
    Density(CommonArgs),
    /// Autocorrelation coefficients at the smallest displacements.
    Autocorr(AutocorrArgs),
    /// Closed-form Bragg peaks, optionally compared with a finite sample.
    Diffract(DiffractArgs),
    /// Run the invariant suite and write a pass/fail report.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeChoice>,
    /// Region size: [-N, N] (Euclidean), [1, N] (squarefree), [0, N] (period doubling).
    #[arg(long = "N")]
    n: Option<i64>,
    /// Largest prime of the squarefree window.
    #[arg(long = "P")]
    prime_bound: Option<u64>,
    /// Odometer truncation depth J.
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    scheme_file: Option<PathBuf>,
    #[arg(long)]
    window_file: Option<PathBuf>,
    /// Residue scheme config (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Compute everything twice and fail unless the outputs are byte-identical.
    #[arg(long)]
    seedless: bool,
}

#[derive(Debug, Args)]
struct AutocorrArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of displacements z ≥ 0 to report.
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long)]
    zmax: Option<f64>,
}

#[derive(Debug, Args)]
struct DiffractArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest dyadic level r (period doubling).
    #[arg(long, default_value_t = 4)]
    rmax: u32,
    /// Index bound |n|, |m| (Euclidean schemes).
    #[arg(long, default_value_t = 20)]
    index: i64,
    /// Absolute intensity floor; defaults to 1e-6 of the largest intensity.
    #[arg(long)]
    floor: Option<f64>,
    /// Denominator bound (squarefree).
    #[arg(long = "Q", default_value_t = 100)]
    q: u64,
    /// Residue spectra are listed on [-kmax, kmax].
    #[arg(long, default_value_t = 1)]
    kmax: i64,
    /// Also compare against a sample of region size N.
    #[arg(long)]
    sample: Option<i64>,
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Where to write the comparison report; defaults to <out>.comparison.json.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Append a log10 intensity column to the CSV.
    #[arg(long)]
    plot_data: bool,
}

impl CommonArgs {
    fn spec(&self) -> SchemeSpec {
        SchemeSpec {
            scheme: self.scheme,
            n: self.n,
            prime_bound: self.prime_bound,
            depth: self.depth,
            scheme_file: self.scheme_file.clone(),
            window_file: self.window_file.clone(),
            config: self.config.clone(),
        }
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}

/// Files to write, in order; stdout when no path is given.
type Outputs = Vec<(Option<PathBuf>, String)>;
type Job<'a> = Box<dyn Fn() -> Result<Outputs, JobError> + 'a>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: &Command) -> Result<(), JobError> {
    let (common, job): (&CommonArgs, Job) = match cmd {
        Command::Gen(a) => (a, Box::new(move || cmd_gen(a))),
        Command::Density(a) => (a, Box::new(move || cmd_density(a))),
        Command::Autocorr(a) => (&a.common, Box::new(move || cmd_autocorr(a))),
        Command::Diffract(a) => (&a.common, Box::new(move || cmd_diffract(a))),
        Command::Verify(a) => (a, Box::new(move || cmd_verify(a))),
    };
    let outputs = job();
    if common.seedless {
        let again = job();
        let same = match (&outputs, &again) {
            (Ok(a), Ok(b)) => a == b,
            (Err(a), Err(b)) => a.exit_code() == b.exit_code(),
            _ => false,
        };
        if !same {
            return Err(JobError::Verify("two identical runs produced different output".into()));
        }
        eprintln!("seedless: repeated run is byte-identical");
    }
    match (outputs, cmd) {
        (Ok(o), _) => write_outputs(&o),
        // a failed verification still reports which checks failed
        (Err(JobError::Verify(report)), Command::Verify(a)) => {
            write_outputs(&vec![(a.out.clone(), report)])?;
            Err(JobError::Verify("one or more checks failed".into()))
        }
        (Err(e), _) => Err(e),
    }
}

/// Writes every file to a temporary sibling first so that an I/O failure leaves nothing behind.
fn write_outputs(outputs: &Outputs) -> Result<(), JobError> {
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let mut stdout = String::new();
    for (path, content) in outputs {
        match path {
            None => stdout.push_str(content),
            Some(p) => {
                let tmp = temp_sibling(p);
                if let Err(e) = fs::write(&tmp, content) {
                    let _ = fs::remove_file(&tmp);
                    for (t, _) in &staged {
                        let _ = fs::remove_file(t);
                    }
                    return Err(JobError::Io(format!("{}: {e}", p.display())));
                }
                staged.push((tmp, p.clone()));
            }
        }
    }
    for (tmp, dest) in &staged {
        fs::rename(tmp, dest).map_err(|e| JobError::Io(format!("{}: {e}", dest.display())))?;
    }
    print!("{stdout}");
    Ok(())
}

fn temp_sibling(p: &Path) -> PathBuf {
    let mut name = p.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    p.with_file_name(name)
}

fn region_size(a: &CommonArgs, model: &Model) -> i64 {
    a.n.unwrap_or_else(|| model.default_size())
}

fn scheme_name(model: &Model) -> &'static str {
    match model {
        Model::Euclidean { fibonacci: true, .. } => "fibonacci",
        Model::Euclidean { fibonacci: false, .. } => "custom",
        Model::Residue { kind: ResidueConfigKind::Squarefree, .. } => "squarefree",
        Model::Residue { kind: ResidueConfigKind::PeriodDoubling, .. } => "period_doubling",
    }
}

fn point_set_json(name: &str, ps: &PointSetF64, predicted: f64) -> serde_json::Value {
    serde_json::json!({
        "scheme": name,
        "region": { "lower": ps.region().lower(), "upper": ps.region().upper(), "closure": ps.region().closure() },
        "count": ps.len(),
        "density_estimate": density_estimate(ps),
        "predicted_density": predicted,
        "points": ps.points(),
        "weights": ps.weights(),
    })
}

fn json_text(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_gen(a: &CommonArgs) -> Result<Outputs, JobError> {
    let model = a.spec().build()?;
    let ps = model.sample(region_size(a, &model))?;
    let predicted = model.as_model_set().predicted_density();
    eprintln!("{} points, density estimate {} (predicted {predicted})", ps.len(), density_estimate(&ps));
    let text = match a.format() {
        Format::Csv => ps.to_csv(),
        Format::Json => json_text(&point_set_json(scheme_name(&model), &ps, predicted)),
    };
    Ok(vec![(a.out.clone(), text)])
}

fn cmd_density(a: &CommonArgs) -> Result<Outputs, JobError> {
    let model = a.spec().build()?;
    let ps = model.sample(region_size(a, &model))?;
    let est = density_estimate(&ps);
    let predicted = model.as_model_set().predicted_density();
    eprintln!("density {est}, predicted {predicted}, difference {}", (est - predicted).abs());
    let text = match a.format() {
        Format::Csv => format!(
            "count,region_measure,density_estimate,predicted_density\n{},{},{est},{predicted}\n",
            ps.len(),
            ps.region_measure()
        ),
        Format::Json => json_text(&serde_json::json!({
            "scheme": scheme_name(&model),
            "count": ps.len(),
            "region_measure": ps.region_measure(),
            "density_estimate": est,
            "predicted_density": predicted,
        })),
    };
    Ok(vec![(a.out.clone(), text)])
}

fn cmd_autocorr(a: &AutocorrArgs) -> Result<Outputs, JobError> {
    let c = &a.common;
    let model = c.spec().build()?;
    let ps = model.sample(region_size(c, &model))?;
    let span = ps.region_measure();
    let mut zmax = a.zmax.unwrap_or(match model {
        Model::Residue { .. } => a.count.saturating_sub(1) as f64,
        Model::Euclidean { .. } => a.count as f64 / model.as_model_set().predicted_density(),
    });
    let entries: Vec<(DisplacementKey, AutocorrelationEntry<f64>)> = loop {
        let est = empirical_autocorrelation(&ps, zmax.min(span))?;
        let e = est.smallest_nonnegative(a.count);
        if e.len() >= a.count || zmax >= span || a.zmax.is_some() {
            break e;
        }
        zmax *= 2.0;
    };
    let rows: Vec<(f64, f64, Option<f64>)> = entries
        .iter()
        .map(|(k, e)| (e.z, e.eta, predicted_autocorrelation(model.as_model_set(), k).ok()))
        .collect();
    let worst = rows.iter().filter_map(|(_, eta, p)| p.map(|p| (eta - p).abs())).fold(0.0, f64::max);
    eprintln!("{} displacements, max |eta - predicted| = {worst}", rows.len());
    let text = match c.format() {
        Format::Csv => {
            let mut s = String::from("z,eta\n");
            for (z, eta, _) in &rows {
                s.push_str(&format!("{z},{eta}\n"));
            }
            s
        }
        Format::Json => json_text(&serde_json::json!({
            "scheme": scheme_name(&model),
            "region_measure": span,
            "entries": rows.iter().map(|(z, eta, p)| serde_json::json!({"z": z, "eta": eta, "predicted": p})).collect::<Vec<_>>(),
        })),
    };
    Ok(vec![(c.out.clone(), text)])
}

fn default_floor(max_intensity: f64) -> f64 {
    1e-6 * max_intensity
}

fn cmd_diffract(a: &DiffractArgs) -> Result<Outputs, JobError> {
    let c = &a.common;
    let model = c.spec().build()?;
    let spectrum: SpectrumF64 = match &model {
        Model::Euclidean { model: m, fibonacci } => {
            let full = if *fibonacci {
                fibonacci_spectrum(a.index, 0.0)
            } else {
                euclidean_model_set_spectrum(m.scheme(), m.window(), a.index, 0.0)?
            };
            let floor = a.floor.unwrap_or_else(|| default_floor(full.max_intensity()));
            full.with_floor(floor)
        }
        Model::Residue { kind: ResidueConfigKind::Squarefree, prime_bound, .. } => {
            let base = squarefree_spectrum(a.q, *prime_bound)?;
            let floor = a.floor.unwrap_or_else(|| default_floor(base.max_intensity()));
            base.with_floor(floor).extend_periodic(a.kmax)?
        }
        Model::Residue { kind: ResidueConfigKind::PeriodDoubling, .. } => {
            let s = period_doubling_spectrum(a.rmax, a.kmax)?;
            match a.floor {
                Some(f) => s.with_floor(f),
                None => s,
            }
        }
    };
    eprintln!("{} peaks, largest intensity {}", spectrum.len(), spectrum.max_intensity());
    let text = match c.format() {
        Format::Csv => spectrum.to_csv(a.plot_data),
        Format::Json => json_text(&spectrum.to_json()),
    };
    let mut outputs = vec![(c.out.clone(), text)];
    if let Some(n) = a.sample {
        let ps = model.sample(n)?;
        let report = compare(&spectrum, &ps, a.top);
        eprintln!("sample of {} points, max relative error {}", ps.len(), report.max_relative_error);
        let path = a.report.clone().or_else(|| {
            c.out.as_ref().map(|o| {
                let mut name = o.file_name().map(|n| n.to_os_string()).unwrap_or_default();
                name.push(".comparison.json");
                o.with_file_name(name)
            })
        });
        if path.is_some() {
            outputs.push((path, json_text(&report)));
        }
    }
    Ok(outputs)
}

fn cmd_verify(a: &CommonArgs) -> Result<Outputs, JobError> {
    let mut cfg = VerifyConfig { scheme: a.scheme, n: a.n, prime_bound: a.prime_bound, depth: a.depth, custom: None };
    if a.scheme_file.is_some() || a.window_file.is_some() || a.config.is_some() {
        let spec = a.spec();
        cfg.scheme = Some(spec.choice()?);
        match spec.build()? {
            Model::Euclidean { model, fibonacci: false } => cfg.custom = Some(model),
            Model::Residue { prime_bound, depth, .. } => {
                cfg.prime_bound = cfg.prime_bound.or(Some(prime_bound));
                cfg.depth = cfg.depth.or(Some(depth));
            }
            Model::Euclidean { .. } => {}
        }
    } else if a.scheme == Some(SchemeChoice::Custom) {
        return Err(JobError::Config("custom scheme needs --scheme-file and --window-file".into()));
    }
    let report = run_verify(&cfg);
    for check in &report.checks {
        eprintln!("{:<34} {}", check.name, if check.passed { "pass" } else { "FAIL" });
    }
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    if report.passed {
        Ok(vec![(a.out.clone(), text)])
    } else {
        Err(JobError::Verify(text))
    }
}
