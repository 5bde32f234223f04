use clap::{Args, Parser, Subcommand};
use rfsquid::sweep::config::keys_help;
use rfsquid::sweep::output::{csv_string, svg_string};
use rfsquid::sweep::{
    analyse, build_device, read_config, read_csv, run_levels, run_sweep, validate_command, Execution,
    SweepConfig,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rfsquid", version, about = "Resonant escape in a driven rf-SQUID", after_help = keys_help())]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pair and well levels against flux, as CSV.
    Levels(Common),
    /// Print the crossing point used to label the level pair.
    Crossing(Common),
    /// Escape rate against flux for each drive frequency, as CSV.
    Sweep(Common),
    /// Compare levels, gap and matrix elements with the grid solver.
    Validate(Common),
    /// Render an SVG of W against flux from a sweep CSV.
    Plot {
        /// Sweep CSV to plot.
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Config file; without it the reference device is used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Drive frequency in Hz (repeatable).
    #[arg(long = "nu")]
    nu: Vec<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of flux points.
    #[arg(long)]
    points: Option<usize>,
    /// Effective shunt resistance in ohm.
    #[arg(long)]
    reff: Option<f64>,
    /// Flux near which the crossing is searched.
    #[arg(long = "seed-phix")]
    seed_phix: Option<f64>,
}

impl Common {
    fn config(&self) -> Result<SweepConfig, String> {
        let mut cfg = match &self.config {
            Some(p) => read_config(p).map_err(|e| e.to_string())?,
            None => SweepConfig::reference(&[]),
        };
        if !self.nu.is_empty() {
            if let Some(bad) = self.nu.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(format!("--nu {bad}: must be a positive frequency"));
            }
            cfg.drive.nu = self.nu.clone();
        }
        if let Some(n) = self.points {
            if n < 2 {
                return Err("--points must be at least 2".into());
            }
            cfg.grid.n_points = n;
        }
        if let Some(r) = self.reff {
            if !(r > 0.0 && r.is_finite()) {
                return Err(format!("--reff {r}: must be positive"));
            }
            cfg.device.r_eff = r;
        }
        if let Some(x) = self.seed_phix {
            cfg.grid.seed_phi_x = x;
        }
        if let Some(out) = &self.out {
            cfg.output.csv = Some(out.clone());
        }
        Ok(cfg)
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let err = |e: rfsquid::Error| e.to_string();
    match cli.command {
        Command::Levels(c) => {
            let cfg = c.config()?;
            let (_, rows) = run_levels(&cfg, Execution::Parallel).map_err(err)?;
            write_or_print(cfg.output.csv.as_deref(), &csv_string(&rows).map_err(err)?)?;
        }
        Command::Crossing(c) => {
            let cfg = c.config()?;
            let d = build_device(&cfg).map_err(err)?;
            let x = d.crossing;
            let text = format!(
                "phi_x0 = {:.15}\ne0 = {:.15} U0\nE0 = {:.9e} J\nlambda0 = {:.9}\nk1 = {}\nk2 = {}\n\
                 alpha1 = {:.9e}\nalpha2 = {:.9e}\nbeta1 = {:.9e}\nbeta2 = {:.9e}\ngap = {:.9e} U0\ngap = {:.9e} Hz\n",
                x.phi_x0,
                x.e0,
                d.scales.joule(x.e0),
                x.lambda0,
                x.k1,
                x.k2,
                x.alpha1,
                x.alpha2,
                x.beta1,
                x.beta2,
                x.gap,
                d.scales.joule(x.gap) / rfsquid::constants::H
            );
            write_or_print(c.out.as_deref(), &text)?;
        }
        Command::Sweep(c) => {
            let cfg = c.config()?;
            let out = run_sweep(&cfg).map_err(err)?;
            write_or_print(cfg.output.csv.as_deref(), &csv_string(&out.rows).map_err(err)?)?;
            if let Some(svg) = &cfg.output.svg {
                std::fs::write(svg, svg_string(&out.rows)).map_err(|e| format!("{}: {e}", svg.display()))?;
            }
            for &(nu, current) in &out.currents {
                eprintln!("nu = {nu:.6e} Hz, I = {current:.4e} A");
                match analyse(&out, nu) {
                    Ok(r) => {
                        eprintln!("  classification: {}", r.classification.name());
                        for p in &r.peaks {
                            eprintln!(
                                "  {:<10} phi_x = {:.9}  W = {:.4e} 1/s  fwhm = {}",
                                p.kind.name(),
                                p.phi_x,
                                p.w,
                                p.fwhm.map_or("-".into(), |f| format!("{f:.3e}"))
                            );
                        }
                    }
                    Err(e) => eprintln!("  no peak analysis: {e}"),
                }
            }
        }
        Command::Validate(c) => {
            let cfg = c.config()?;
            let report = validate_command(&cfg).map_err(err)?;
            write_or_print(c.out.as_deref(), &report.table())?;
            return Ok(report.all_passed());
        }
        Command::Plot { input, out } => {
            let rows = read_csv(&input).map_err(err)?;
            if rows.is_empty() {
                return Err(format!("{}: no rows", input.display()));
            }
            write_or_print(out.as_deref(), &svg_string(&rows))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
