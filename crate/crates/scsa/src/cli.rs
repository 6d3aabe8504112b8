//! Batch front end: signal ingestion, parameter sweeps, CSV tables and
//! optional SVG plots.
//!
//! All outputs are deterministic: fixed column order, floats printed with 17
//! significant digits, LF line endings, and sweep rows emitted in the nested
//! (h, lambda, gamma) order regardless of the worker count.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::discretize;
use crate::eig::{self, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::model::{
    default_margin, sech2_signal, synthetic_beat, window_from_lambda, Grid, Signal, WindowK,
};
use crate::reconstruct::{
    classical_constant, classical_riesz_integral, reconstruct, riesz_mean, ReconstructionParams,
};
use crate::validate::{check_admissible, convergence_order, relative_error};

/// One run or sweep, as read from flags or a JSON config file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Builtin signal name ("sech2", "beat") or a CSV path.
    pub input: String,
    pub h_list: Vec<f64>,
    pub lambda_list: Vec<f64>,
    pub gamma_list: Vec<f64>,
    #[serde(rename = "M")]
    pub m: usize,
    /// "auto" (window from lambda) or an explicit "lo:hi" index range.
    pub window: String,
    /// Window margin; default 2% of the signal range.
    pub margin: Option<f64>,
    /// Sample spacing for single-column CSV input.
    pub spacing: Option<f64>,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: "sech2".into(),
            h_list: vec![0.1],
            lambda_list: vec![0.0],
            gamma_list: vec![0.5],
            m: 1024,
            window: "auto".into(),
            margin: None,
            spacing: None,
            output_dir: PathBuf::from("out"),
            emit_svg: false,
            workers: 1,
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(Error::io(path.display().to_string()))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        config.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.h_list.is_empty() {
            return Err(Error::Config("h_list must be non-empty".into()));
        }
        if self.lambda_list.is_empty() {
            return Err(Error::Config("lambda_list must be non-empty".into()));
        }
        if self.gamma_list.is_empty() {
            return Err(Error::Config("gamma_list must be non-empty".into()));
        }
        if let Some(h) = self.h_list.iter().find(|&&h| !(h > 0.0)) {
            return Err(Error::Config(format!("h must be > 0, got {h}")));
        }
        if let Some(g) = self.gamma_list.iter().find(|&&g| !(g >= 0.0)) {
            return Err(Error::Config(format!("gamma must be >= 0, got {g}")));
        }
        if self.m % 2 != 0 || self.m < 8 {
            return Err(Error::Config(format!("M must be even and >= 8, got {}", self.m)));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        if self.window != "auto" {
            parse_window_spec(&self.window, self.m)?;
        }
        Ok(self)
    }
}

fn parse_window_spec(spec: &str, m: usize) -> Result<(usize, usize)> {
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("window must be \"auto\" or \"lo:hi\", got {spec}")))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad window bound {lo:?}")))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad window bound {hi:?}")))?;
    if lo >= hi || hi > m {
        return Err(Error::Config(format!(
            "window {lo}:{hi} out of range for M = {m}"
        )));
    }
    Ok((lo, hi))
}

/// Floats are printed with 17 significant digits so CSV round trips are exact.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Loaded signal plus whether its values count as ground truth (builtins do,
/// measured CSV data does not).
pub struct LoadedSignal {
    pub signal: Signal,
    pub is_truth: bool,
    pub warnings: Vec<String>,
}

pub fn resolve_signal(config: &RunConfig) -> Result<LoadedSignal> {
    match config.input.as_str() {
        "sech2" => {
            let grid = Grid::new(0.0, 10.0, config.m)?;
            Ok(LoadedSignal {
                signal: sech2_signal(&grid, 5.0)?,
                is_truth: true,
                warnings: Vec::new(),
            })
        }
        "beat" => {
            let grid = Grid::new(0.0, 1.0, config.m)?;
            Ok(LoadedSignal {
                signal: synthetic_beat(&grid, 120.0, 80.0, 0.4)?,
                is_truth: true,
                warnings: Vec::new(),
            })
        }
        path => {
            let (signal, warnings) = load_signal_csv(Path::new(path), config.spacing)?;
            Ok(LoadedSignal {
                signal,
                is_truth: false,
                warnings,
            })
        }
    }
}

/// Reads a measured signal from CSV: either `x,y` columns at uniform spacing
/// (relative tolerance 1e-6) or a single `y` column plus an explicit spacing.
/// An odd sample count drops the last row (the discretization needs even M).
pub fn load_signal_csv(path: &Path, spacing: Option<f64>) -> Result<(Signal, Vec<String>)> {
    let text = fs::read_to_string(path).map_err(Error::io(path.display().to_string()))?;
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    let mut columns: Option<usize> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if lineno == 0 => continue, // header row
            Err(_) => {
                let bad = fields
                    .iter()
                    .find(|f| f.parse::<f64>().is_err())
                    .unwrap_or(&"");
                return Err(Error::Data(format!(
                    "{}: line {}: non-numeric cell {bad:?}",
                    path.display(),
                    lineno + 1
                )));
            }
        };
        let ncols = values.len();
        if !(1..=2).contains(&ncols) {
            return Err(Error::Data(format!(
                "{}: line {}: expected 1 or 2 columns, got {ncols}",
                path.display(),
                lineno + 1
            )));
        }
        if *columns.get_or_insert(ncols) != ncols {
            return Err(Error::Data(format!(
                "{}: line {}: inconsistent column count",
                path.display(),
                lineno + 1
            )));
        }
        if ncols == 2 {
            xs.push(values[0]);
            ys.push(values[1]);
        } else {
            ys.push(values[0]);
        }
    }
    if ys.len() < 8 {
        return Err(Error::Data(format!(
            "{}: need at least 8 samples, got {}",
            path.display(),
            ys.len()
        )));
    }
    let mut warnings = Vec::new();
    let (a, step) = if xs.is_empty() {
        let step = spacing.ok_or_else(|| {
            Error::Data(format!(
                "{}: single-column input needs an explicit --spacing",
                path.display()
            ))
        })?;
        if !(step > 0.0) {
            return Err(Error::Data(format!("spacing must be > 0, got {step}")));
        }
        (0.0, step)
    } else {
        let step = xs[1] - xs[0];
        if !(step > 0.0) {
            return Err(Error::Data(format!(
                "{}: x column must be strictly increasing",
                path.display()
            )));
        }
        let mut worst = (0.0f64, 1usize);
        for (i, pair) in xs.windows(2).enumerate() {
            let dev = ((pair[1] - pair[0]) - step).abs() / step;
            if dev > worst.0 {
                worst = (dev, i + 1);
            }
        }
        if worst.0 > 1e-6 {
            return Err(Error::Data(format!(
                "{}: non-uniform spacing: step before row {} deviates by {:.3e} relative",
                path.display(),
                worst.1 + 1,
                worst.0
            )));
        }
        (xs[0], step)
    };
    if ys.len() % 2 != 0 {
        warnings.push(format!(
            "odd sample count {}: dropping the last sample (even M required)",
            ys.len()
        ));
        ys.pop();
    }
    let m = ys.len();
    let grid = Grid::new(a, a + step * m as f64, m)?;
    Ok((Signal::new(grid, ys)?, warnings))
}

/// Writes a signal as an `x,y` CSV (the format `load_signal_csv` reads back).
pub fn write_signal_csv(path: &Path, signal: &Signal) -> Result<()> {
    let mut out = String::from("x,y\n");
    for (x, y) in signal.grid().points().zip(signal.values()) {
        let _ = writeln!(out, "{},{}", fmt_float(x), fmt_float(*y));
    }
    write_file(path, &out)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(Error::io(parent.display().to_string()))?;
        }
    }
    let mut file = fs::File::create(path).map_err(Error::io(path.display().to_string()))?;
    file.write_all(contents.as_bytes())
        .map_err(Error::io(path.display().to_string()))
}

fn window_for(
    config: &RunConfig,
    signal: &Signal,
    lambda: f64,
) -> Result<WindowK> {
    if config.window == "auto" {
        let margin = config.margin.unwrap_or_else(|| default_margin(signal));
        match window_from_lambda(signal, lambda, margin) {
            Ok(w) => Ok(w),
            // lambda = 0 on a positive signal always qualifies somewhere; a
            // genuinely empty window is a data-level problem
            Err(Error::LambdaTooLow) => Err(Error::Data(format!(
                "lambda = {lambda} too low for this signal (no window)"
            ))),
            Err(e) => Err(e),
        }
    } else {
        let (lo, hi) = parse_window_spec(&config.window, signal.grid().len())?;
        WindowK::new(lo, hi - lo, signal.grid().len())
    }
}

fn decompositions_for(
    config: &RunConfig,
    signal: &Signal,
) -> Result<Vec<SpectralDecomposition>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let results: Vec<Result<SpectralDecomposition>> = pool.install(|| {
        use rayon::prelude::*;
        config
            .h_list
            .par_iter()
            .map(|&h| eig::decompose(signal, h))
            .collect()
    });
    results.into_iter().collect()
}

fn warn_undersampling(config: &RunConfig, signal: &Signal) {
    for &h in &config.h_list {
        if discretize::h_undersamples(signal.grid(), h) {
            eprintln!(
                "warning: h = {h} is below twice the grid spacing {}; \
                 the semi-classical analysis may be unreliable",
                signal.grid().spacing()
            );
        }
    }
}

/// `spectrum`: negative eigenvalues per h plus counting tables per lambda.
pub fn cmd_spectrum(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let loaded = resolve_signal(config)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    warn_undersampling(config, &loaded.signal);
    let decomps = decompositions_for(config, &loaded.signal)?;

    let mut eigen_csv = String::from("h,n,lambda_hn\n");
    let mut counts_csv = String::from("h,lambda,N_h,N_h_lambda\n");
    for (h, dec) in config.h_list.iter().zip(&decomps) {
        for n in 0..dec.negative_count() {
            let _ = writeln!(
                eigen_csv,
                "{},{},{}",
                fmt_float(*h),
                n + 1,
                fmt_float(dec.eigenvalues()[n])
            );
        }
        for &lambda in &config.lambda_list {
            let _ = writeln!(
                counts_csv,
                "{},{},{},{}",
                fmt_float(*h),
                fmt_float(lambda),
                dec.negative_count(),
                dec.count_below(lambda)
            );
        }
    }
    let eigen_path = config.output_dir.join("spectrum.csv");
    let counts_path = config.output_dir.join("counts.csv");
    write_file(&eigen_path, &eigen_csv)?;
    write_file(&counts_path, &counts_csv)?;
    Ok(vec![eigen_path, counts_path])
}

struct RunRow {
    h: f64,
    lambda: f64,
    gamma: f64,
    terms: usize,
    sup_rel: Option<f64>,
    rms_rel: Option<f64>,
}

fn run_one(
    config: &RunConfig,
    loaded: &LoadedSignal,
    dec: &SpectralDecomposition,
    lambda: f64,
    gamma: f64,
    files: &mut Vec<PathBuf>,
) -> Result<RunRow> {
    let signal = &loaded.signal;
    let window = window_for(config, signal, lambda)?;
    let diag = check_admissible(signal, lambda, &window);
    if !diag.window_ok {
        eprintln!(
            "warning: h = {}, lambda = {lambda}: signal does not stay above -lambda \
             on the window; proceeding anyway",
            dec.h()
        );
    }
    let params = ReconstructionParams::new(dec.h(), gamma, lambda, window.clone())?;
    let rec = reconstruct(dec, &params)?;
    let report = if loaded.is_truth {
        Some(relative_error(&rec, signal, &window)?)
    } else {
        None
    };

    let mut csv = String::new();
    if loaded.is_truth {
        csv.push_str("x,y_true,y_rec,in_window,pointwise_rel_err\n");
    } else {
        csv.push_str("x,y_rec,in_window\n");
    }
    let floor = 1e-12
        * signal
            .values()
            .iter()
            .fold(0.0f64, |a, v| a.max(v.abs()));
    for j in 0..signal.grid().len() {
        let x = signal.grid().point(j);
        let inside = window.contains(j);
        if loaded.is_truth {
            let t = signal.values()[j];
            let err = (rec.values[j] - t).abs() / t.abs().max(floor);
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                fmt_float(x),
                fmt_float(t),
                fmt_float(rec.values[j]),
                inside as u8,
                fmt_float(err)
            );
        } else {
            let _ = writeln!(
                csv,
                "{},{},{}",
                fmt_float(x),
                fmt_float(rec.values[j]),
                inside as u8
            );
        }
    }
    let stem = format!("recon_h{}_lam{lambda}_gam{gamma}", dec.h());
    let path = config.output_dir.join(format!("{stem}.csv"));
    write_file(&path, &csv)?;
    files.push(path);

    if config.emit_svg {
        let xs: Vec<f64> = signal.grid().points().collect();
        let mut series = vec![("y_rec", xs.clone(), rec.values.clone())];
        if loaded.is_truth {
            series.push(("y_true", xs.clone(), signal.values().to_vec()));
        }
        let plot = svg_line_plot(&format!("reconstruction {stem}"), &series);
        let path = config.output_dir.join(format!("{stem}.svg"));
        write_file(&path, &plot)?;
        files.push(path);
        if let Some(report) = &report {
            let wx: Vec<f64> = window.indices().map(|j| signal.grid().point(j)).collect();
            let plot = svg_line_plot(
                &format!("relative error {stem}"),
                &[("rel_err", wx, report.pointwise_rel.clone())],
            );
            let path = config.output_dir.join(format!("{stem}_err.svg"));
            write_file(&path, &plot)?;
            files.push(path);
        }
    }

    Ok(RunRow {
        h: dec.h(),
        lambda,
        gamma,
        terms: rec.terms_used,
        sup_rel: report.as_ref().map(|r| r.sup_rel),
        rms_rel: report.as_ref().map(|r| r.rms_rel),
    })
}

fn summary_csv(rows: &[RunRow]) -> String {
    let mut csv = String::from("h,lambda,gamma,N_h_lambda,sup_rel,rms_rel\n");
    for row in rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{}",
            fmt_float(row.h),
            fmt_float(row.lambda),
            fmt_float(row.gamma),
            row.terms,
            row.sup_rel.map(fmt_float).unwrap_or_default(),
            row.rms_rel.map(fmt_float).unwrap_or_default(),
        );
    }
    csv
}

/// `reconstruct`: per-run point tables plus a summary table.
pub fn cmd_reconstruct(config: &RunConfig) -> Result<Vec<PathBuf>> {
    let loaded = resolve_signal(config)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    warn_undersampling(config, &loaded.signal);
    let decomps = decompositions_for(config, &loaded.signal)?;

    let mut files = Vec::new();
    let mut rows = Vec::new();
    for dec in &decomps {
        for &lambda in &config.lambda_list {
            for &gamma in &config.gamma_list {
                rows.push(run_one(config, &loaded, dec, lambda, gamma, &mut files)?);
            }
        }
    }
    let path = config.output_dir.join("summary.csv");
    write_file(&path, &summary_csv(&rows))?;
    files.push(path);
    Ok(files)
}

/// `sweep`: cross-product runs plus a convergence-order fit per
/// (lambda, gamma) series. Hard spectral invariants are re-checked on every
/// decomposition; a violation aborts with the invariant exit code.
pub fn cmd_sweep(config: &RunConfig) -> Result<Vec<PathBuf>> {
    if config.h_list.len() < 2 {
        return Err(Error::Config("need >=2 h values for order fit".into()));
    }
    if !config.h_list.windows(2).all(|w| w[0] > w[1]) {
        return Err(Error::Config("h_list must be strictly decreasing".into()));
    }
    let loaded = resolve_signal(config)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    warn_undersampling(config, &loaded.signal);
    let decomps = decompositions_for(config, &loaded.signal)?;
    for dec in &decomps {
        check_spectral_invariants(&loaded.signal, dec)?;
    }

    let mut files = Vec::new();
    let mut rows = Vec::new();
    for dec in &decomps {
        for &lambda in &config.lambda_list {
            for &gamma in &config.gamma_list {
                rows.push(run_one(config, &loaded, dec, lambda, gamma, &mut files)?);
            }
        }
    }
    let path = config.output_dir.join("summary.csv");
    write_file(&path, &summary_csv(&rows))?;
    files.push(path);

    let mut orders = String::from("lambda,gamma,order,r_squared\n");
    if config.h_list.len() >= 3 {
        for &lambda in &config.lambda_list {
            for &gamma in &config.gamma_list {
                let errors: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.lambda == lambda && r.gamma == gamma)
                    .filter_map(|r| r.sup_rel)
                    .collect();
                if errors.len() == config.h_list.len() && errors.iter().all(|&e| e > 0.0) {
                    let fit = convergence_order(&config.h_list, &errors)?;
                    let _ = writeln!(
                        orders,
                        "{},{},{},{}",
                        fmt_float(lambda),
                        fmt_float(gamma),
                        fmt_float(fit.order),
                        fmt_float(fit.r_squared)
                    );
                }
            }
        }
    } else {
        eprintln!("note: 2 h values: summary emitted, order fit needs >=3");
    }
    let path = config.output_dir.join("orders.csv");
    write_file(&path, &orders)?;
    files.push(path);
    Ok(files)
}

/// Orthonormality and eigen-residual spot checks on a decomposition.
fn check_spectral_invariants(signal: &Signal, dec: &SpectralDecomposition) -> Result<()> {
    let m = signal.grid().len();
    let spacing = signal.grid().spacing();
    let probe: Vec<usize> = (0..16.min(m)).map(|k| k * m / 16.min(m)).collect();
    for &i in &probe {
        for &j in &probe {
            let dot: f64 = dec
                .eigenfunction(i)
                .iter()
                .zip(dec.eigenfunction(j))
                .map(|(a, b)| a * b * spacing)
                .sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            if (dot - expect).abs() > 1e-8 {
                return Err(Error::Invariant(format!(
                    "eigenfunction Gram deviation {:.3e} at ({i},{j})",
                    (dot - expect).abs()
                )));
            }
        }
    }
    let d2 = discretize::fourier_d2(signal.grid())?;
    let ham = discretize::hamiltonian(signal, dec.h(), &d2)?;
    let radius = dec.spectral_radius();
    let sqrt_spacing = spacing.sqrt();
    for &i in &probe {
        let psi = dec.eigenfunction(i);
        let q: Vec<f64> = psi.iter().map(|v| v * sqrt_spacing).collect();
        let aq = ham.matvec(&q);
        let worst = aq
            .iter()
            .zip(&q)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - dec.eigenvalues()[i] * b).abs()));
        if worst > 1e-7 * radius {
            return Err(Error::Invariant(format!(
                "eigen-residual {worst:.3e} at index {i} exceeds 1e-7 * spectral radius"
            )));
        }
    }
    Ok(())
}

/// `validate`: runs the numerical-hygiene suite and prints one line per check.
pub fn cmd_validate(config: &RunConfig) -> Result<()> {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    // classical constants
    let l0 = classical_constant(0.0)?;
    let lh = classical_constant(0.5)?;
    check(
        "classical constants",
        (l0 - 1.0 / std::f64::consts::PI).abs() < 1e-12 && (lh - 0.25).abs() < 1e-12,
        format!("L_0 = {l0}, L_1/2 = {lh}"),
    );

    // D2 spectral exactness on a small grid
    let g = Grid::new(0.0, 10.0, 64)?;
    let d2 = discretize::fourier_d2(&g)?;
    let mut worst = 0.0f64;
    for k in 1..32 {
        let kf = std::f64::consts::TAU * k as f64 / g.length();
        let samples: Vec<f64> = g.points().map(|x| (kf * x).sin()).collect();
        let out = d2.matvec(&samples);
        for (o, s) in out.iter().zip(&samples) {
            worst = worst.max((o - (-kf * kf) * s).abs() / (kf * kf));
        }
    }
    check("D2 spectral exactness", worst <= 1e-9, format!("worst {worst:.3e}"));

    // full-pipeline invariants on the configured signal at the largest h
    let loaded = resolve_signal(config)?;
    let h = config.h_list[0];
    let dec = eig::decompose(&loaded.signal, h)?;
    let inv = check_spectral_invariants(&loaded.signal, &dec);
    check(
        "orthonormality and residuals",
        inv.is_ok(),
        match &inv {
            Ok(()) => format!("h = {h}, M = {}", loaded.signal.grid().len()),
            Err(e) => e.to_string(),
        },
    );

    // shift covariance
    let dec_shift = eig::decompose(&loaded.signal.shifted(1.0), h)?;
    let radius = dec.spectral_radius().max(1.0);
    let worst = dec
        .eigenvalues()
        .iter()
        .zip(dec_shift.eigenvalues())
        .fold(0.0f64, |a, (x, y)| a.max((x - 1.0 - y).abs()));
    check(
        "constant-shift covariance",
        worst <= 1e-9 * radius,
        format!("worst {worst:.3e}"),
    );

    // Weyl counting sanity at the configured lambda values
    for &lambda in &config.lambda_list {
        let counted = dec.count_below(lambda);
        let classical = classical_riesz_integral(&loaded.signal, lambda, 0.0)? / h;
        println!(
            "info weyl count: lambda = {lambda}: N_h_lambda = {counted}, classical ~ {classical:.2}"
        );
    }
    let s1 = riesz_mean(&dec, 0.0, 1.0)?;
    println!("info riesz mean: S_1(h, 0) = {s1:.6}");

    if failures > 0 {
        return Err(Error::Invariant(format!("{failures} validation check(s) failed")));
    }
    Ok(())
}

/// `demo`: a canned reconstruct run with plots for a builtin signal.
pub fn cmd_demo(signal: &str, out: &Path) -> Result<Vec<PathBuf>> {
    let config = match signal {
        "sech2" => RunConfig {
            input: "sech2".into(),
            h_list: vec![0.1, 0.01],
            lambda_list: vec![0.0, -0.5],
            gamma_list: vec![0.5, 1.0],
            m: 1024,
            emit_svg: true,
            output_dir: out.to_path_buf(),
            ..RunConfig::default()
        },
        "beat" => RunConfig {
            input: "beat".into(),
            h_list: vec![0.5, 0.1],
            lambda_list: vec![0.0, -90.0],
            gamma_list: vec![0.5],
            m: 512,
            emit_svg: true,
            output_dir: out.to_path_buf(),
            ..RunConfig::default()
        },
        other => {
            return Err(Error::Config(format!(
                "unknown demo signal {other:?} (expected sech2 or beat)"
            )))
        }
    };
    cmd_reconstruct(&config)
}

/// Minimal deterministic SVG line plot (text only, no renderer dependency).
pub fn svg_line_plot(title: &str, series: &[(&str, Vec<f64>, Vec<f64>)]) -> String {
    const W: f64 = 720.0;
    const H: f64 = 480.0;
    const PAD: f64 = 50.0;
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, xs, ys) in series {
        for &x in xs {
            x0 = x0.min(x);
            x1 = x1.max(x);
        }
        for &y in ys {
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#333\"/>",
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"25\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"14\">{title}</text>",
        W / 2.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"{PAD}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">{:.4} .. {:.4}</text>",
        H - 12.0,
        x0,
        x1
    );
    let _ = writeln!(
        svg,
        "<text x=\"6\" y=\"{PAD}\" font-family=\"monospace\" font-size=\"11\">{y1:.4}</text>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"6\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">{y0:.4}</text>",
        H - PAD
    );
    for (s, (label, xs, ys)) in series.iter().enumerate() {
        let color = colors[s % colors.len()];
        let mut points = String::new();
        for (x, y) in xs.iter().zip(ys) {
            let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*y));
        }
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" \
             points=\"{}\"/>",
            points.trim_end()
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" \
             fill=\"{color}\">{label}</text>",
            W - PAD - 120.0,
            PAD + 18.0 + 16.0 * s as f64
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let config = RunConfig::default().validated().unwrap();
        assert_eq!(config.m, 1024);
        assert_eq!(config.window, "auto");

        let bad = RunConfig {
            h_list: vec![],
            ..RunConfig::default()
        };
        assert!(bad.validated().is_err());

        let bad = RunConfig {
            m: 999,
            ..RunConfig::default()
        };
        assert!(bad.validated().is_err());
    }

    #[test]
    fn config_json_field_names() {
        let json = r#"{
            "input": "sech2",
            "h_list": [0.1, 0.05],
            "lambda_list": [-0.5],
            "gamma_list": [1.0],
            "M": 256,
            "window": "auto",
            "output_dir": "/tmp/x",
            "emit_svg": false
        }"#;
        let config: RunConfig = serde_json::from_str(json).unwrap();
        let config = config.validated().unwrap();
        assert_eq!(config.m, 256);
        assert_eq!(config.h_list, vec![0.1, 0.05]);
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn window_spec_parsing() {
        assert_eq!(parse_window_spec("10:20", 64).unwrap(), (10, 20));
        assert!(parse_window_spec("20:10", 64).is_err());
        assert!(parse_window_spec("0:100", 64).is_err());
        assert!(parse_window_spec("abc", 64).is_err());
    }

    #[test]
    fn float_format_round_trips() {
        for v in [0.1, -0.5, 1.0 / 3.0, 1e-17, 123456.789012345678] {
            let s = fmt_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(0.0, 1.0, 64).unwrap();
        let s = synthetic_beat(&g, 120.0, 80.0, 0.4).unwrap();
        let path = dir.path().join("beat.csv");
        write_signal_csv(&path, &s).unwrap();
        let (back, warnings) = load_signal_csv(&path, None).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(back.grid().len(), 64);
        for (a, b) in back.values().iter().zip(s.values()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn csv_odd_row_count_drops_last() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("odd.csv");
        let mut text = String::from("x,y\n");
        for i in 0..1001 {
            let _ = writeln!(text, "{},{}", i as f64 * 1e-3, (i as f64).sin());
        }
        fs::write(&path, text).unwrap();
        let (signal, warnings) = load_signal_csv(&path, None).unwrap();
        assert_eq!(signal.grid().len(), 1000);
        assert_eq!(warnings.len(), 1);
        assert!((signal.grid().length() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_jittered_x_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("jitter.csv");
        let mut text = String::from("x,y\n");
        for i in 0..100 {
            let jitter = if i == 50 { 3e-4 } else { 0.0 };
            let _ = writeln!(text, "{},{}", i as f64 * 1e-3 + jitter, 1.0);
        }
        fs::write(&path, text).unwrap();
        let err = load_signal_csv(&path, None).unwrap_err().to_string();
        assert!(err.contains("non-uniform"), "{err}");
    }

    #[test]
    fn csv_non_numeric_cell_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "x,y\n0.0,1.0\n0.001,oops\n").unwrap();
        let err = load_signal_csv(&path, None).unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        assert!(err.contains("oops"), "{err}");
    }

    #[test]
    fn svg_emission_contains_series() {
        let xs = vec![0.0, 1.0, 2.0];
        let ys = vec![0.0, 1.0, 0.5];
        let svg = svg_line_plot("demo", &[("y", xs, ys)]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));
        assert!(svg.contains("demo"));
    }
}
