//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on I/O or numerical failure, 2 on usage or
//! parse errors. Diagnostics are a single line on the error stream.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::analysis;
use crate::error::{Error, Result};
use crate::experiment::{self, Scheme, SweepConfig, SweepPoint};
use crate::fim::{self, FimMatrix};
use crate::format::{sci17, significant};
use crate::noise::NoiseModel;
use crate::quantizer::QuantizerSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "quantcrb",
    version,
    about = "Fisher information and CRBs from quantized data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-sample information factor of a quantizer at one working point.
    Rho {
        /// binary:<t>, lloydmax4:<scale>, equiprobable:<levels>, list:<b1,b2,...> or trivial
        #[arg(long)]
        quantizer: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// normal, laplace (unit variance) or laplace:<scale>
        #[arg(long, default_value = "normal")]
        dist: String,
    },
    /// FIM of the two-sinusoid model at one ratio `r`, as CSV.
    Fim {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        snr2_db: f64,
        #[arg(long, default_value = "unquantized")]
        scheme: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Invert a FIM CSV into a CRB CSV.
    Crb {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// CRB-versus-r sweep driven by a key=value config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_path` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// rho for equiprobable quantizers of increasing bit depth, as CSV.
    Converge {
        /// Inclusive range `lo:hi`.
        #[arg(long, default_value = "1:16")]
        bits: String,
        #[arg(long, default_value = "normal")]
        dist: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s: f64,
    },
    /// Grid check that the 1-bit information gap is nonnegative.
    Fcheck {
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        min: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        max: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
    /// Search for the b-bit quantizer maximizing rho.
    Search {
        #[arg(long)]
        bits: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s: f64,
        #[arg(long, default_value = "normal")]
        dist: String,
    },
    /// Random search for a quantizer where Laplace noise beats the normal.
    Counterexample {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
    },
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Integration(_) | Error::NotFound { .. } => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

pub fn parse_dist(text: &str) -> Result<NoiseModel> {
    match text.trim() {
        "normal" => Ok(NoiseModel::StandardNormal),
        "laplace" => Ok(NoiseModel::laplace_unit_variance()),
        other => match other.strip_prefix("laplace:") {
            Some(scale) => NoiseModel::laplace(parse_num(scale)?),
            None => Err(Error::Domain(format!("unknown distribution {other:?}"))),
        },
    }
}

fn parse_num(text: &str) -> Result<f64> {
    crate::format::parse_f64(text.trim()).ok_or_else(|| Error::Domain(format!("not a number: {text:?}")))
}

pub fn parse_quantizer(text: &str, model: &NoiseModel) -> Result<QuantizerSpec> {
    let text = text.trim();
    if text == "trivial" {
        return Ok(QuantizerSpec::trivial());
    }
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| Error::Domain(format!("quantizer {text:?} must look like kind:arg")))?;
    match kind {
        "binary" => QuantizerSpec::binary(parse_num(arg)?),
        "lloydmax4" => QuantizerSpec::lloyd_max_4bit(parse_num(arg)?),
        "equiprobable" => {
            let levels = arg
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad level count {arg:?}")))?;
            QuantizerSpec::equiprobable(model, levels)
        }
        "list" => QuantizerSpec::new(arg.split(',').map(parse_num).collect::<Result<_>>()?, "custom"),
        _ => Err(Error::Domain(format!("unknown quantizer kind {kind:?}"))),
    }
}

fn parse_bit_range(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::Domain(format!("bit range {text:?} must look like lo:hi"));
    let (lo, hi) = match text.split_once(':') {
        Some((lo, hi)) => (
            lo.trim().parse::<u32>().map_err(|_| bad())?,
            hi.trim().parse::<u32>().map_err(|_| bad())?,
        ),
        None => {
            let b = text.trim().parse::<u32>().map_err(|_| bad())?;
            (b, b)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

/// Runs `body` against `path` if given, otherwise against `stdout`.
fn with_output(
    path: Option<&PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Rho { quantizer, s, dist } => {
            let model = parse_dist(&dist)?;
            let spec = parse_quantizer(&quantizer, &model)?;
            let s = parse_num(&s)?;
            writeln!(out, "rho = {}", significant(fim::rho_general(&spec, s, &model), 12))?;
            writeln!(out, "rho0 = {}", significant(model.rho0()?, 12))?;
        }
        Command::Fim {
            n,
            r,
            snr2_db,
            scheme,
            output,
        } => {
            let scheme: Scheme = scheme.parse()?;
            let point = SweepPoint::new(n, r, snr2_db)?;
            let fim = point.fim(scheme)?;
            with_output(output.as_ref(), out, |w| fim.write_csv(w))?;
        }
        Command::Crb { input, output } => {
            let fim = FimMatrix::read_csv(BufReader::new(File::open(&input)?))?;
            let result = fim::crb(&fim);
            with_output(output.as_ref(), out, |w| result.write_csv(w))?;
        }
        Command::Sweep { config, output } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg: SweepConfig = text.parse()?;
            let rows = experiment::run_sweep(&cfg)?;
            let path = output.or(cfg.output_path.clone());
            with_output(path.as_ref(), out, |w| {
                experiment::write_sweep_csv(w, &cfg.schemes, &rows)
            })?;
        }
        Command::Converge { bits, dist, s } => {
            let model = parse_dist(&dist)?;
            let points = analysis::convergence_study(&model, &parse_bit_range(&bits)?, s)?;
            writeln!(out, "bits,levels,rho")?;
            for p in points {
                writeln!(out, "{},{},{}", p.bits, p.levels, sci17(p.rho))?;
            }
        }
        Command::Fcheck { min, max, step } => {
            let (fmin, argmin) = analysis::check_f_nonnegative(min, max, step)?;
            let (s1, s2) = analysis::binary_gap_slope_extrema();
            writeln!(out, "min_f = {}", sci17(fmin))?;
            writeln!(out, "argmin_s = {}", sci17(argmin))?;
            writeln!(out, "nonnegative = {}", fmin >= -1e-12)?;
            writeln!(out, "rho1_at_zero = {}", significant(fim::rho1(0.0), 12))?;
            writeln!(out, "slope_extrema = {}, {}", significant(s1, 12), significant(s2, 12))?;
        }
        Command::Search {
            bits,
            seed,
            iterations,
            s,
            dist,
        } => {
            let model = parse_dist(&dist)?;
            let found = analysis::rho_interval_search(&model, bits, s, iterations, seed)?;
            let bps: Vec<String> = found.spec.breakpoints().iter().map(|&b| sci17(b)).collect();
            writeln!(out, "bits = {bits}")?;
            writeln!(out, "rho = {}", significant(found.rho, 12))?;
            writeln!(out, "restart = {}", found.restart)?;
            writeln!(out, "breakpoints = {}", bps.join(", "))?;
        }
        Command::Counterexample { seed, trials } => {
            write!(out, "{}", analysis::laplace_counterexample_search(seed, trials)?)?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            return if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let first = e.to_string();
                let _ = writeln!(err, "{}", first.lines().next().unwrap_or("usage error"));
                EXIT_USAGE
            };
        }
    };
    match execute(cli.command, out).and_then(|()| out.flush().map_err(Error::from)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main_with_std() -> i32 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    run(std::env::args_os(), &mut out, &mut io::stderr())
}
