use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scsa::cli::{self, RunConfig};

#[derive(Parser)]
#[command(name = "scsa", version, about = "Semi-classical spectral analysis of 1-D signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Negative eigenvalues and counting functions per h
    Spectrum(CommonArgs),
    /// Reconstruct the signal for each (h, lambda, gamma)
    Reconstruct(CommonArgs),
    /// Cross-product sweep with convergence-order fits (needs >= 2 h values)
    Sweep(CommonArgs),
    /// Run the numerical-hygiene invariant suite
    Validate(CommonArgs),
    /// Canned reconstruction runs with plots for a builtin signal
    Demo {
        /// "sech2" or "beat"
        signal: String,
        /// Output directory
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV path to analyze
    #[arg(long)]
    input: Option<String>,
    /// Builtin signal name: "sech2" or "beat" (alias for --input)
    #[arg(long)]
    signal: Option<String>,
    /// Comma-separated list of h values
    #[arg(long = "h", value_delimiter = ',')]
    h_list: Option<Vec<f64>>,
    /// Comma-separated list of lambda values
    #[arg(long = "lambda", value_delimiter = ',', allow_hyphen_values = true)]
    lambda_list: Option<Vec<f64>>,
    /// Comma-separated list of gamma values
    #[arg(long = "gamma", value_delimiter = ',')]
    gamma_list: Option<Vec<f64>>,
    /// Number of grid points (even)
    #[arg(long = "M")]
    m: Option<usize>,
    /// "auto" or explicit index range "lo:hi"
    #[arg(long)]
    window: Option<String>,
    /// Window margin (defaults to 2% of the signal range)
    #[arg(long)]
    margin: Option<f64>,
    /// Sample spacing for single-column CSV input
    #[arg(long)]
    spacing: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit SVG plots alongside the CSVs
    #[arg(long)]
    svg: bool,
    /// Worker threads for sweeps
    #[arg(long)]
    workers: Option<usize>,
}

impl CommonArgs {
    fn into_config(self) -> scsa::Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_json_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(input) = self.input {
            config.input = input;
        }
        if let Some(signal) = self.signal {
            config.input = signal;
        }
        if let Some(h) = self.h_list {
            config.h_list = h;
        }
        if let Some(l) = self.lambda_list {
            config.lambda_list = l;
        }
        if let Some(g) = self.gamma_list {
            config.gamma_list = g;
        }
        if let Some(m) = self.m {
            config.m = m;
        }
        if let Some(w) = self.window {
            config.window = w;
        }
        if self.margin.is_some() {
            config.margin = self.margin;
        }
        if self.spacing.is_some() {
            config.spacing = self.spacing;
        }
        if let Some(out) = self.out {
            config.output_dir = out;
        }
        if self.svg {
            config.emit_svg = true;
        }
        if let Some(workers) = self.workers {
            config.workers = workers;
        }
        config.validated()
    }
}

fn run() -> scsa::Result<()> {
    match Cli::parse().command {
        Command::Spectrum(args) => {
            report(cli::cmd_spectrum(&args.into_config()?)?);
        }
        Command::Reconstruct(args) => {
            report(cli::cmd_reconstruct(&args.into_config()?)?);
        }
        Command::Sweep(args) => {
            report(cli::cmd_sweep(&args.into_config()?)?);
        }
        Command::Validate(args) => {
            cli::cmd_validate(&args.into_config()?)?;
        }
        Command::Demo { signal, out } => {
            report(cli::cmd_demo(&signal, &out)?);
        }
    }
    Ok(())
}

fn report(files: Vec<PathBuf>) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
