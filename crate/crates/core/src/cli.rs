//! Command-line front end. Exit codes: 0 success, 2 invalid input, 3
//! numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::config::{ResolvedConfig, RunConfig};
use crate::error::Error;
use crate::fieldmap::{magnitude_field, render_svg, sign_distance_fields, write_csv, Bbox, Levels, SvgLayer};
use crate::report::{sweep_csv, to_json, ResultDocument};
use crate::zolotarev::{degree_sweep, solve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "zolo", version, about = "Zolotarev sign and ratio problems by AAA-Lawson")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem and print the result document.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Solve for a range of degrees and tabulate tau and sigma.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// `A..B` (inclusive) or a comma-separated list.
        #[arg(long)]
        degrees: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Evaluate contour fields on a grid.
    Field {
        #[command(flatten)]
        common: Common,
        /// `x0,x1,y0,y1`; defaults to the sample bounding box padded by 20%.
        #[arg(long, allow_hyphen_values = true)]
        bbox: Option<String>,
        /// `NX,NY`.
        #[arg(long, default_value = "400,300")]
        res: String,
        #[arg(long, value_enum, default_value_t = Mode::Ratio)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Contour levels for SVG output.
        #[arg(long, value_enum, default_value_t = LevelChoice::Decades)]
        levels: LevelChoice,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    capacity: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Log the Lawson error history to standard error.
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ratio,
    Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LevelChoice {
    Decades,
    Thirds,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

/// Errors caused by the input rather than by the numerics.
fn classify(err: Error) -> Failure {
    let code = match err {
        Error::EmptySet(_)
        | Error::DegenerateSegment
        | Error::InvalidShape(_)
        | Error::NotDisjoint { .. }
        | Error::TooFewSamples { .. }
        | Error::RepeatedPoint(_)
        | Error::Domain(_)
        | Error::Config(_) => EXIT_INVALID,
        _ => EXIT_NUMERICAL,
    };
    Failure { code, message: err.to_string() }
}

fn load(common: &Common) -> Result<ResolvedConfig, Failure> {
    let mut config = match (&common.config, &common.preset) {
        (Some(path), None) => RunConfig::from_path(path).map_err(classify)?,
        (None, Some(name)) => RunConfig::from_preset(name),
        _ => return Err(invalid("give exactly one of --config or --preset")),
    };
    if common.degree.is_some() {
        config.degree = common.degree;
    }
    if common.capacity.is_some() {
        config.capacity = common.capacity;
    }
    // every failure while building the problem is an input problem
    config.resolve().map_err(|e| invalid(e.to_string()))
}

fn parse_degrees(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || invalid(format!("cannot parse degrees {text:?}"));
    let degrees: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else if text.trim().is_empty() {
        vec![]
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if degrees.is_empty() {
        return Err(invalid("degree list is empty"));
    }
    Ok(degrees)
}

fn parse_floats<const N: usize>(text: &str, what: &str) -> Result<[f64; N], Failure> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| invalid(format!("cannot parse {what} {text:?}")))?;
    parts.try_into().map_err(|_| invalid(format!("{what} needs {N} comma-separated numbers")))
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| invalid(format!("cannot write output: {e}"))),
    }
}

fn log_history(stderr: &mut dyn Write, history: &[f64]) {
    for (k, t) in history.iter().enumerate() {
        let _ = writeln!(stderr, "lawson step {k}: tau = {t:.6e}");
    }
}

fn cmd_solve(common: &Common, format: Format, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    if format != Format::Json {
        return Err(invalid("solve writes JSON only"));
    }
    let cfg = load(common)?;
    let (z4, z3) = solve(&cfg.problem()).map_err(classify)?;
    if common.verbose {
        log_history(stderr, &z4.tau_history);
    }
    let doc = ResultDocument::new(cfg.degree, &z4, z3.as_ref()).map_err(classify)?;
    emit(&common.out, &doc.to_json().map_err(classify)?, stdout)
}

fn cmd_sweep(
    common: &Common,
    degrees: &str,
    format: Format,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let degrees = parse_degrees(degrees)?;
    let cfg = load(common)?;
    let entries = degree_sweep(&cfg.problem(), &degrees).map_err(classify)?;
    if common.verbose {
        for e in &entries {
            let _ = writeln!(stderr, "n = {}: tau = {:?}, sigma = {:?}", e.degree, e.tau, e.sigma);
        }
    }
    let text = match format {
        Format::Csv => sweep_csv(&entries, cfg.capacity).map_err(classify)?,
        Format::Json => to_json(&entries).map_err(classify)?,
        Format::Svg => return Err(invalid("sweep writes CSV or JSON")),
    };
    emit(&common.out, &text, stdout)
}

#[allow(clippy::too_many_arguments)]
fn cmd_field(
    common: &Common,
    bbox: &Option<String>,
    res: &str,
    mode: Mode,
    format: Format,
    levels: LevelChoice,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    if format == Format::Json {
        return Err(invalid("field writes CSV or SVG"));
    }
    let [nx, ny] = parse_floats::<2>(res, "resolution")?;
    if nx.fract() != 0.0 || ny.fract() != 0.0 || nx < 2.0 || ny < 2.0 {
        return Err(invalid(format!("resolution must be two integers >= 2, got {res:?}")));
    }
    let (nx, ny) = (nx as usize, ny as usize);
    let cfg = load(common)?;
    let bbox = match bbox {
        Some(text) => {
            let [x0, x1, y0, y1] = parse_floats::<4>(text, "bbox")?;
            Bbox::new(x0, x1, y0, y1).map_err(|e| invalid(e.to_string()))?
        }
        None => Bbox::padded(cfg.samples.bounding_box(), 0.2).map_err(classify)?,
    };
    let (z4, z3) = solve(&cfg.problem()).map_err(classify)?;
    if common.verbose {
        log_history(stderr, &z4.tau_history);
    }
    let level_kind = match levels {
        LevelChoice::Decades => Levels::Decades,
        LevelChoice::Thirds => Levels::Thirds,
    };
    let mut markers: Vec<(Complex64, &str)> = cfg.samples.points_e.iter().map(|z| (*z, "#555555")).collect();
    markers.extend(cfg.samples.points_f.iter().map(|z| (*z, "#999999")));

    let text = match mode {
        Mode::Ratio => {
            let z3 = z3.ok_or_else(|| Failure {
                code: EXIT_NUMERICAL,
                message: format!("tau = {} >= 1: no ratio function to evaluate", z4.tau),
            })?;
            let grid = magnitude_field(|z| z3.eval(z), bbox, nx, ny).map_err(classify)?;
            match format {
                Format::Csv => {
                    let mut s = String::new();
                    write_csv(&mut s, &grid, "log10|r_star|");
                    s
                }
                _ => {
                    markers.extend(z3.zeros.iter().map(|z| (*z, "blue")));
                    markers.extend(z3.poles.iter().map(|z| (*z, "red")));
                    let floor = z3.sigma.log10();
                    let layer = SvgLayer { grid: &grid, levels: level_kind.values(floor, 200), color: "#1f5fbf" };
                    render_svg(&[layer], &markers).map_err(classify)?
                }
            }
        }
        Mode::Sign => {
            let (minus, plus) = sign_distance_fields(&z4.r_hat, bbox, nx, ny).map_err(classify)?;
            match format {
                Format::Csv => {
                    let mut s = String::new();
                    write_csv(&mut s, &minus, "log10|r_hat-1|");
                    write_csv(&mut s, &plus, "log10|r_hat+1|");
                    s
                }
                _ => {
                    let a = SvgLayer {
                        grid: &minus,
                        levels: level_kind.values(minus.min(), 200)[1..].to_vec(),
                        color: "red",
                    };
                    let b = SvgLayer {
                        grid: &plus,
                        levels: level_kind.values(plus.min(), 200)[1..].to_vec(),
                        color: "green",
                    };
                    render_svg(&[a, b], &markers).map_err(classify)?
                }
            }
        }
    };
    emit(&common.out, &text, stdout)
}

/// Runs the CLI on `args` (program name first) with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Solve { common, format } => cmd_solve(common, *format, stdout, stderr),
        Command::Sweep { common, degrees, format } => cmd_sweep(common, degrees, *format, stdout, stderr),
        Command::Field { common, bbox, res, mode, format, levels } => {
            cmd_field(common, bbox, res, *mode, *format, *levels, stdout, stderr)
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs the CLI against the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_parsing() {
        assert_eq!(parse_degrees("0..3").ok().unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_degrees("8, 12,16").ok().unwrap(), vec![8, 12, 16]);
        assert!(parse_degrees("5..2").is_err());
        assert!(parse_degrees("").is_err());
        assert!(parse_degrees("a..b").is_err());
    }

    #[test]
    fn float_lists() {
        assert_eq!(parse_floats::<2>("3,4", "res").ok().unwrap(), [3.0, 4.0]);
        assert!(parse_floats::<2>("3", "res").is_err());
        assert!(parse_floats::<4>("1,2,x,4", "bbox").is_err());
    }
}
