use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use harmosync::averaging::RadialProfile;
use harmosync::coupling::validate_coupling;
use harmosync::dynamics::fmt_float;
use harmosync::harness::{
    averaging_scaling_study, load_config, omega_sweep, run_scenario, write_json, Scenario,
    SweepParams,
};
use harmosync::quadrature::QuadratureSpec;
use harmosync::topology::{build_graph, is_connected};
use harmosync::{CouplingFunction, Error, Result};

/// Coupled harmonic oscillator arrays.
#[derive(Parser)]
#[command(name = "harmosync", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write trajectories and metrics.
    Simulate {
        config: PathBuf,
        /// Output directory; overrides the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep ω over seeded batches of initial conditions.
    Sweep {
        config: PathBuf,
        /// Target residual δ.
        #[arg(long)]
        delta: f64,
        /// Initial spread bound Δ.
        #[arg(long = "Delta")]
        big_delta: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        omegas: Vec<f64>,
        /// Settle thresholds; defaults to δ.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        /// Batch size per ω.
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the averaged radial profile ρ(r) as CSV.
    Profile {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 1.0)]
        gain: f64,
        #[arg(long, default_value_t = 1.0)]
        level: f64,
        #[arg(long, default_value_t = 0.0)]
        deadzone: f64,
        #[arg(long, default_value_t = 0.0)]
        slope: f64,
        /// Norm of the output row.
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        #[arg(long)]
        rmax: f64,
        /// Number of intervals on [0, rmax].
        #[arg(long)]
        n: usize,
    },
    /// Report connectivity of a scenario's interconnection graph.
    CheckGraph { config: PathBuf },
    /// Averaging error between rotating-frame and averaged runs against ω.
    AvgError {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        omegas: Vec<f64>,
        #[arg(long)]
        horizon: Option<f64>,
        /// Also write the (ω, error) table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Zero,
    Linear,
    Cubic,
    Saturation,
    DeadzoneLinear,
}

fn scenario(path: &Path) -> Result<Scenario> {
    load_config(path)?.into_scenario()
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Simulate { config, out } => {
            let s = scenario(&config)?;
            let run = run_scenario(&s, out.as_deref())?;
            print_json(&run.report)
        }
        Command::Sweep {
            config,
            delta,
            big_delta,
            omegas,
            eps,
            seeds,
            out,
        } => {
            let s = scenario(&config)?;
            let mut p = SweepParams::new(big_delta, delta, omegas);
            p.eps = eps;
            p.batch = seeds;
            let report = omega_sweep(&s, &p)?;
            match out {
                Some(path) => write_json(&path, &report),
                None => print_json(&report),
            }
        }
        Command::Profile {
            kind,
            gain,
            level,
            deadzone,
            slope,
            amplitude,
            rmax,
            n,
        } => {
            let f = match kind {
                Kind::Zero => CouplingFunction::Zero,
                Kind::Linear => CouplingFunction::Linear { gain },
                Kind::Cubic => CouplingFunction::Cubic { gain },
                Kind::Saturation => CouplingFunction::Saturation { gain, level },
                Kind::DeadzoneLinear => CouplingFunction::DeadzoneLinear {
                    gain,
                    deadzone,
                    slope,
                },
            };
            validate_coupling(&f)?;
            if !(amplitude.is_finite() && amplitude > 0.0) {
                return Err(Error::usage("--amplitude must be positive"));
            }
            if !(rmax.is_finite() && rmax > 0.0) || n == 0 {
                return Err(Error::usage("--rmax must be positive and --n at least 1"));
            }
            let profile = RadialProfile::new(f, QuadratureSpec::default(), amplitude)?;
            let mut out = std::io::stdout().lock();
            writeln!(out, "r,rho")?;
            for k in 0..=n {
                let r = rmax * k as f64 / n as f64;
                writeln!(out, "{},{}", fmt_float(r), fmt_float(profile.eval(r)))?;
            }
            Ok(())
        }
        Command::CheckGraph { config } => {
            let s = scenario(&config)?;
            print_json(&is_connected(&build_graph(&s.net)))
        }
        Command::AvgError {
            config,
            omegas,
            horizon,
            csv,
        } => {
            let s = scenario(&config)?;
            let report = averaging_scaling_study(&s, &omegas, horizon)?;
            if let Some(path) = csv {
                let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
                report.write_csv(&mut w)?;
                w.flush()?;
            }
            print_json(&report)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("harmosync: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
