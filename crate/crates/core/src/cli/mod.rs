//! Command-line front end: configuration, dispatch and CSV output.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::spectra::{
    degenerate_mismatch, detection_spectrum, frequency_angular_spectrum, gain_and_agreement_curve,
    grid_r_squared, max_normalized_deviation, transmission_spectrum, Model,
};
pub use config::{parse_config, RunConfig};
use output::{num, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit status for invalid input.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for failures inside the numerics or while writing output.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "etalon-spdc",
    version,
    about = "Photon-pair spectra from a nonlinear slab etalon"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Model for `spectrum`: rigorous, simplified or nonresonant.
    #[arg(long, global = true)]
    pub model: Option<Model>,
    /// Comma-separated schemes: ff, bb, fb, bf (or forward, backward,
    /// forward_backward for `detection`).
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    /// Output CSV path.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Frequency-angular spectrum of one model.
    Spectrum,
    /// Simplified and rigorous spectra side by side, with R².
    Compare,
    /// Gain and model agreement against the interaction strength.
    GainCurve,
    /// Linear Airy transmission at normal incidence.
    Transmission,
    /// Envelope-weighted detection spectra at normal emission.
    Detection,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Compare => "compare",
            Command::GainCurve => "gain-curve",
            Command::Transmission => "transmission",
            Command::Detection => "detection",
        }
    }
}

/// Result of a successful command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub path: PathBuf,
    pub summary: Vec<String>,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            println!("wrote {}", outcome.path.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                EXIT_CONFIG
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::config("--config", "a configuration file is required"))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(m) = cli.model {
        cfg.model = m;
    }
    if let Some(s) = &cli.scheme {
        match cli.command {
            Command::Detection => cfg.detection_schemes = Some(parse_list(s)?),
            _ => cfg.schemes = parse_list(s)?,
        }
    }
    if let Some(out) = &cli.out {
        cfg.output = Some(out.display().to_string());
    }
    if cli.threads == Some(0) {
        return Err(Error::config("--threads", "must be at least 1"));
    }
    cfg.validate()?;
    execute(cli.command, &cfg, cli.threads)
}

fn parse_list<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<Vec<T>> {
    s.split(',').map(|x| x.trim().parse()).collect()
}

fn header(table: &mut Table, command: Command, cfg: &RunConfig) {
    table.comment(&format!("etalon-spdc {VERSION}"));
    table.comment(&format!("command: {}", command.name()));
    table.comment("config:");
    table.comment(&cfg.to_toml());
}

/// Runs one command on a validated configuration and writes its CSV.
pub fn execute(command: Command, cfg: &RunConfig, threads: Option<usize>) -> Result<Outcome> {
    let path = PathBuf::from(
        cfg.output
            .clone()
            .unwrap_or_else(|| format!("{}.csv", command.name())),
    );
    let sweep = cfg.sweep()?;
    let mut summary = Vec::new();
    let table = match command {
        Command::Spectrum => {
            let grid = frequency_angular_spectrum(&sweep, cfg.model, threads)?;
            let mut cols = vec!["lambda_s_nm", "theta_deg"];
            cols.extend(cfg.schemes.iter().map(|s| s.name()));
            cols.push("masked");
            let mut t = Table::new(&cols);
            header(&mut t, command, cfg);
            t.comment(&format!("model: {}", cfg.model.name()));
            t.comment(&format!("masked pixels: {}", grid.masked_count()));
            for (il, &l) in grid.signal_wavelengths.iter().enumerate() {
                for (it, &th) in grid.internal_angles.iter().enumerate() {
                    let k = grid.index(il, it);
                    let mut row = vec![num(l), num(th.to_degrees())];
                    row.extend(cfg.schemes.iter().map(|&s| num(grid.scheme(s)[k])));
                    row.push(u8::from(grid.mask[k]).to_string());
                    t.row(&row);
                }
            }
            summary.push(format!("masked pixels: {}", grid.masked_count()));
            t
        }
        Command::Compare => {
            let s = frequency_angular_spectrum(&sweep, Model::Simplified, threads)?;
            let r = frequency_angular_spectrum(&sweep, Model::Rigorous, threads)?;
            let mut lines = Vec::new();
            for &scheme in &cfg.schemes {
                let r2 = grid_r_squared(&s, &r, scheme)?;
                let dev = max_normalized_deviation(&s, &r, scheme)?;
                lines.push(format!(
                    "{}: r_squared = {} max_deviation = {}",
                    scheme.name(),
                    num(r2),
                    num(dev)
                ));
            }
            let (sn, rn) = (s.normalized(), r.normalized());
            let names: Vec<String> = cfg
                .schemes
                .iter()
                .flat_map(|s| {
                    [
                        format!("simplified_{}", s.name()),
                        format!("rigorous_{}", s.name()),
                    ]
                })
                .collect();
            let mut cols = vec!["lambda_s_nm", "theta_deg"];
            cols.extend(names.iter().map(String::as_str));
            cols.push("masked");
            let mut t = Table::new(&cols);
            header(&mut t, command, cfg);
            for l in &lines {
                t.comment(l);
            }
            for (il, &l) in sn.signal_wavelengths.iter().enumerate() {
                for (it, &th) in sn.internal_angles.iter().enumerate() {
                    let k = sn.index(il, it);
                    let mut row = vec![num(l), num(th.to_degrees())];
                    for &scheme in &cfg.schemes {
                        row.push(num(sn.scheme(scheme)[k]));
                        row.push(num(rn.scheme(scheme)[k]));
                    }
                    row.push(u8::from(sn.mask[k] || rn.mask[k]).to_string());
                    t.row(&row);
                }
            }
            summary = lines;
            t
        }
        Command::GainCurve => {
            let delta = degenerate_mismatch(&sweep)?;
            let points = gain_and_agreement_curve(&sweep, &cfg.gain_betas(), threads)?;
            let mut t = Table::new(&["beta_plus", "beta_normalized", "re_gamma_plus", "r_squared"]);
            header(&mut t, command, cfg);
            t.comment(&format!("degenerate mismatch L*dk = {}", num(delta)));
            for p in &points {
                t.row(&[
                    num(p.beta_plus),
                    num(p.beta_normalized),
                    num(p.re_gamma_plus),
                    num(p.r_squared),
                ]);
            }
            summary.push(format!(
                "{} gain points, |delta/2| = {}",
                points.len(),
                num(0.5 * delta.abs())
            ));
            t
        }
        Command::Transmission => {
            let curve =
                transmission_spectrum(&sweep.stack, sweep.polarization, &sweep.wavelengths, 0.0)?;
            let mut t = Table::new(&["lambda_nm", "transmission"]);
            header(&mut t, command, cfg);
            for (l, v) in &curve {
                t.row(&[num(*l), num(*v)]);
            }
            summary.push(format!("{} wavelengths", curve.len()));
            t
        }
        Command::Detection => {
            let schemes = cfg.detection_schemes();
            let envelope = cfg.envelope();
            let ratio = cfg.efficiency_ratio();
            let columns = schemes
                .iter()
                .map(|&s| detection_spectrum(&sweep, s, &envelope, ratio, threads))
                .collect::<Result<Vec<_>>>()?;
            let mut cols = vec!["lambda_s_nm", "lambda_i_nm"];
            cols.extend(schemes.iter().map(|s| s.name()));
            cols.push("masked");
            let mut t = Table::new(&cols);
            header(&mut t, command, cfg);
            for (k, base) in columns[0].iter().enumerate() {
                let mut row = vec![num(base.lambda_s_nm), num(base.lambda_i_nm)];
                row.extend(columns.iter().map(|c| num(c[k].rate)));
                row.push(u8::from(base.masked).to_string());
                t.row(&row);
            }
            summary.push(format!(
                "schemes: {}",
                schemes
                    .iter()
                    .map(|s| s.name())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            t
        }
    };
    table.write(&path)?;
    Ok(Outcome { path, summary })
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Command::Spectrum,
            Command::Compare,
            Command::GainCurve,
            Command::Transmission,
            Command::Detection,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| Error::config("command", format!("unknown command `{s}`")))
    }
}
