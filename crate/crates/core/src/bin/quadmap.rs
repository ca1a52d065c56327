use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadmap::cli::{
    cmd_classify, cmd_plot, cmd_scan, cmd_selftest, parse_direction, selftest_verdict, CliError, MapSpec,
    Options, PlotOptions, ScanOptions,
};

/// Classify planar quadratic maps up to affine changes of coordinates.
#[derive(Parser)]
#[command(name = "quadmap", version)]
struct Cli {
    /// Seed for all sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Relative zero tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Classify in exact rational arithmetic.
    #[arg(long, global = true)]
    exact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// JSON map spec; `-` or absent reads stdin.
    file: Option<PathBuf>,
    /// Twelve coefficients a20,a11,a02,a10,a01,a00,b20,b11,b02,b10,b01,b00.
    #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
    coeffs: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a JSON report for one map.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Single-line JSON.
        #[arg(long)]
        compact: bool,
    },
    /// Draw the image of a disk with the critical values in red.
    Plot {
        #[command(flatten)]
        input: Input,
        #[arg(long, short)]
        output: PathBuf,
        /// Disk center `x,y`.
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        center: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Points in the image cloud.
        #[arg(long, default_value_t = 3000)]
        points: usize,
    },
    /// Classify the grid `base + s·dir1 + t·dir2`.
    Scan {
        #[command(flatten)]
        input: Input,
        /// Twelve values or `key=value` pairs, e.g. `a10=1`.
        #[arg(long, allow_hyphen_values = true)]
        dir1: String,
        #[arg(long, allow_hyphen_values = true)]
        dir2: String,
        /// `lo,hi` for s.
        #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
        s_range: String,
        /// `lo,hi` for t.
        #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
        t_range: String,
        /// Cells per axis, `N` or `NxM`.
        #[arg(long, default_value = "21")]
        resolution: String,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the acceptance criteria.
    Selftest {
        /// Run one criterion only.
        #[arg(long)]
        criterion: Option<u8>,
    },
}

fn read_spec(input: &Input) -> Result<MapSpec, CliError> {
    if let Some(c) = &input.coeffs {
        return MapSpec::parse_inline(c);
    }
    let text = match &input.file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| CliError::io(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    MapSpec::from_json(&text)
}

fn pair(text: &str, what: &str) -> Result<(f64, f64), CliError> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::parse(format!("{what}: expected two numbers, got {text:?}")))?;
    match v[..] {
        [a, b] => Ok((a, b)),
        _ => Err(CliError::parse(format!("{what}: expected two numbers, got {text:?}"))),
    }
}

fn resolution(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::parse(format!("resolution: expected N or NxM, got {text:?}"));
    match text.split_once(['x', 'X']) {
        Some((a, b)) => Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            Ok((n, n))
        }
    }
}

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let opts = Options { seed: cli.seed, tol: cli.tol, exact: cli.exact };
    match cli.command {
        Command::Classify { input, compact } => {
            let report = cmd_classify(&read_spec(&input)?, &opts)?;
            if compact {
                emit(&serde_json::to_string(&report).expect("report serializes"))?;
            } else {
                emit(&report.to_json())?;
            }
        }
        Command::Plot { input, output, center, radius, points } => {
            let (x, y) = pair(&center, "center")?;
            let plot = PlotOptions { center: [x, y], radius, points };
            let summary = cmd_plot(&read_spec(&input)?, &plot, &output, &opts)?;
            emit(&serde_json::to_string(&summary).expect("summary serializes"))?;
        }
        Command::Scan { input, dir1, dir2, s_range, t_range, resolution: res, csv, svg } => {
            let scan = ScanOptions {
                dir1: parse_direction(&dir1)?,
                dir2: parse_direction(&dir2)?,
                s_range: pair(&s_range, "s-range")?,
                t_range: pair(&t_range, "t-range")?,
                resolution: resolution(&res)?,
            };
            let grid = cmd_scan(&read_spec(&input)?, &scan, &opts)?;
            grid.write(&csv, svg.as_deref())?;
        }
        Command::Selftest { criterion } => {
            let results = cmd_selftest(&opts, criterion)?;
            for r in &results {
                emit(&r.to_string())?;
                if !r.passed() {
                    for d in &r.details {
                        emit(&format!("    {d}"))?;
                    }
                }
            }
            selftest_verdict(&results)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
