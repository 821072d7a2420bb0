//! The `numrad` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 precondition failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use numrad_core::eigen::eigenvalues;
use numrad_core::error::Error as CoreError;
use numrad_core::harness::{worked_examples, SuiteConfig};
use numrad_core::matrix::ComplexMatrix;
use numrad_core::range::{range_boundary, RangeShape, DEFAULT_TOL};

use crate::format::{fmt_f64, parse_matrix, Format};
use crate::plot::render_svg;
use crate::report::{
    bound_table, quantities, run_suite_parallel, write_bounds_csv, write_bounds_text, write_examples, write_quantities,
    write_suite_text,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "numrad", version, about = "Certified numerical radius and numerical-range bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Input {
    /// Matrix file (JSON or text)
    pub file: PathBuf,
    /// Matrix format; inferred from the extension or content when omitted
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Numerical radius, Crawford number, minimum norm, spectral radius and norm
    Compute {
        #[command(flatten)]
        input: Input,
        /// Relative tolerance of the certified computations
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Table of every applicable bound on the numerical radius
    Bounds {
        #[command(flatten)]
        input: Input,
        /// Read the matrix as an R x C grid of equal blocks
        #[arg(long, num_args = 2, value_names = ["R", "C"])]
        blocks: Option<Vec<usize>>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Boundary samples of the numerical range as CSV, optionally plotted
    Range {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 360)]
        samples: usize,
        /// Write an SVG figure to this path
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Randomized check of every bound
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Relative slack tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Worker threads; the report does not depend on this
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce the worked examples
    Examples {
        #[arg(long)]
        json: bool,
    },
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    fn usage(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_USAGE,
            error: error.into(),
        }
    }

    fn precondition(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_PRECONDITION,
            error: error.into(),
        }
    }
}

/// Argument validation failures are usage errors; everything else the core
/// rejects is a precondition on the input matrix.
impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(_) => Failure::usage(e),
            _ => Failure::precondition(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_FAILURE,
            error: e.into(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn load(input: &Input) -> Result<ComplexMatrix, Failure> {
    let content = fs::read_to_string(&input.file)
        .with_context(|| format!("cannot read {}", input.file.display()))
        .map_err(Failure::usage)?;
    let format = input.format.unwrap_or_else(|| Format::detect(Some(&input.file), &content));
    parse_matrix(&content, format).map_err(|e| Failure::usage(anyhow!("{}: {e}", input.file.display())))
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::usage(anyhow!("--tol must be positive and finite")))
    }
}

fn compute(out: &mut dyn Write, input: &Input, tol: f64, json: bool) -> Outcome {
    check_tol(tol)?;
    let t = load(input)?;
    let q = quantities(&t, tol)?;
    if json {
        let map: serde_json::Map<String, serde_json::Value> = q
            .iter()
            .map(|x| (x.name.to_string(), serde_json::json!({"value": x.value, "lower": x.lower, "upper": x.upper})))
            .collect();
        writeln!(out, "{}", serde_json::Value::Object(map))?;
    } else {
        write_quantities(out, &q)?;
    }
    Ok(EXIT_OK)
}

fn bounds(out: &mut dyn Write, input: &Input, blocks: Option<&[usize]>, json: bool, csv: bool) -> Outcome {
    let t = load(input)?;
    let grid = match blocks {
        None => None,
        Some(&[r, c]) => {
            if r == 0 || c == 0 {
                return Err(Failure::usage(anyhow!("--blocks needs positive counts")));
            }
            if r != c || !t.is_square() || t.rows() % r != 0 {
                return Err(Failure::precondition(anyhow!(
                    "a {}x{} matrix does not split into a {r}x{c} grid of equal square blocks",
                    t.rows(),
                    t.cols()
                )));
            }
            Some(r)
        }
        Some(_) => return Err(Failure::usage(anyhow!("--blocks takes two counts"))),
    };
    let rows = bound_table(&t, grid, DEFAULT_TOL)?;
    if json {
        writeln!(out, "{}", serde_json::to_string(&rows).expect("serializable"))?;
    } else if csv {
        write_bounds_csv(out, &rows).map_err(|e| Failure {
            code: EXIT_FAILURE,
            error: e.into(),
        })?;
    } else {
        write_bounds_text(out, &rows)?;
    }
    Ok(EXIT_OK)
}

fn shape_comment(shape: &RangeShape) -> String {
    let z = |c: Complex64| format!("{} {}", fmt_f64(c.re), fmt_f64(c.im));
    match *shape {
        RangeShape::Point(c) => format!("# degenerate: point {}", z(c)),
        RangeShape::Segment { start, end } => format!("# degenerate: segment {} {}", z(start), z(end)),
        RangeShape::Region => "# degenerate: no".into(),
    }
}

fn range(out: &mut dyn Write, input: &Input, samples: usize, svg: Option<&Path>) -> Outcome {
    let t = load(input)?;
    t.require_square()?;
    if samples < 3 {
        return Err(Failure::usage(anyhow!("--samples must be at least 3")));
    }
    let b = range_boundary(&t, samples)?;
    writeln!(out, "{}", shape_comment(&b.shape))?;
    writeln!(out, "theta,re,im,support")?;
    for s in &b.samples {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(s.theta),
            fmt_f64(s.point.re),
            fmt_f64(s.point.im),
            fmt_f64(s.support)
        )?;
    }
    if let Some(path) = svg {
        let eig = eigenvalues(&t)?;
        let doc = render_svg(&file_name(&input.file), &b, &eig.values);
        fs::write(path, doc).with_context(|| format!("cannot write {}", path.display())).map_err(|e| Failure {
            code: EXIT_FAILURE,
            error: e,
        })?;
    }
    Ok(EXIT_OK)
}

fn verify(out: &mut dyn Write, cfg: SuiteConfig, threads: Option<usize>, json: bool) -> Outcome {
    cfg.validate()?;
    let threads = threads
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1);
    if threads == 0 {
        return Err(Failure::usage(anyhow!("--threads must be positive")));
    }
    let report = run_suite_parallel(&cfg, threads)?;
    if json {
        writeln!(out, "{}", serde_json::to_string(&report).expect("serializable"))?;
    } else {
        write_suite_text(out, &report)?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
}

fn examples(out: &mut dyn Write, json: bool) -> Outcome {
    let rows = worked_examples()?;
    if json {
        writeln!(out, "{}", serde_json::to_string(&rows).expect("serializable"))?;
    } else {
        write_examples(out, &rows)?;
    }
    Ok(if rows.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_FAILURE })
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Compute { input, tol, json } => compute(out, &input, tol, json),
        Command::Bounds {
            input,
            blocks,
            json,
            csv,
        } => bounds(out, &input, blocks.as_deref(), json, csv),
        Command::Range { input, samples, svg } => range(out, &input, samples, svg.as_deref()),
        Command::Verify {
            trials,
            dims,
            seed,
            tol,
            threads,
            json,
        } => verify(out, SuiteConfig::new(trials, dims, seed, tol), threads, json),
        Command::Examples { json } => examples(out, json),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code; messages go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            f.code
        }
    }
}
