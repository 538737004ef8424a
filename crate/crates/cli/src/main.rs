//! `zsc`: command-line front end for the zsc-core library.
//!
//! Exit status: 0 on success, 2 on a usage or precondition error, 1 on a
//! numerical failure. Failures print a one-line JSON object on stderr.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use zsc_core::geometry::SampledCurve;
use zsc_core::loops::{circle, fundamental_domain, wobbly_circle};
use zsc_core::selfcross::{self, IntersectionPair};
use zsc_core::series::PowerSeries;
use zsc_core::share::{decide_share_with, ShareOptions};
use zsc_core::zeta::{self, write_samples_csv};
use zsc_core::{theta, Error, EvalConfig};

#[derive(Parser, Debug)]
#[command(name = "zsc", version, about = "Zeta on the critical line: evaluation, self-intersections, phase and series-sharing diagnostics")]
struct Cli {
    /// Working precision in bits for extended-precision arithmetic.
    #[arg(long, global = true, env = "ZSC_PRECISION_BITS")]
    precision: Option<u32>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (truncated); standard output if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct Window {
    /// A single ordinate.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["from", "to"])]
    t: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "to")]
    from: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "from")]
    to: Option<f64>,
    /// Arclength step of the sampling.
    #[arg(long, default_value_t = 0.05)]
    cell: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate f(t) = ζ(1/2 + it) at a point or along a window.
    Eval {
        #[command(flatten)]
        window: Window,
        /// Absolute error target.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Find self-intersection pairs of the curve in a window.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Sampling step and grid cell size.
        #[arg(long, default_value_t = 0.05)]
        cell: f64,
    },
    /// Refine a seed (a, b) to a self-intersection pair.
    Refine {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
    },
    /// Multiplicity histogram of a pair file written by `scan`.
    Histogram {
        #[arg(long = "in")]
        input: PathBuf,
        /// Radius for merging values.
        #[arg(long, default_value_t = selfcross::CLUSTER_TOL)]
        tol: f64,
    },
    /// Local injectivity diagnostics around the zeros in a window.
    Injectivity {
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
    },
    /// The root Θ of g′.
    ThetaRoot,
    /// Phase records {t, g, g′, ϑ, N, certified} at a point or along a window.
    Phase {
        #[command(flatten)]
        window: Window,
    },
    /// Decide whether two curves given as power series share a curve at 0.
    SeriesShare {
        /// Coefficient files for F and G (pass twice).
        #[arg(long = "in", num_args = 1, required = true)]
        input: Vec<PathBuf>,
        /// Degree to which the transition map is checked.
        #[arg(long, default_value_t = ShareOptions::default().order)]
        order: usize,
    },
    /// Check that [gamma, delta) is a fundamental domain of a sampled loop.
    FundamentalDomain {
        #[arg(long, value_enum, default_value_t = CurveKind::Circle)]
        curve: CurveKind,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Number of sample intervals over the window.
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CurveKind {
    Circle,
    Wobble,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "Usage".into(), message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_)
            | Error::InvalidArgument(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::NonzeroConstantTerm
            | Error::ZeroSeries => 2,
            _ => 1,
        };
        let debug = format!("{e:?}");
        let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message, "exit_code": f.code }));
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut cfg = EvalConfig::default();
    if let Some(bits) = cli.precision {
        cfg = cfg.with_precision(bits);
    }
    cfg.validate()?;
    let text = match &cli.command {
        Command::Eval { window, tol } => {
            if let Some(tol) = tol {
                cfg.target_abs_err = *tol;
                cfg.validate()?;
            }
            let samples = match points(window)? {
                Points::One(t) => vec![zeta::zeta_critical(t, &cfg)?],
                Points::Range(lo, hi) => zeta::scan_curve(lo, hi, window.cell, &cfg)?,
            };
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_samples_csv(&mut buf, &samples)?;
                    String::from_utf8(buf).expect("CSV is ASCII")
                }
                Format::Json => to_json(&samples),
            }
        }
        Command::Scan { from, to, cell } => {
            let pairs = selfcross::find_intersections(*from, *to, &cfg, *cell)?;
            pairs_output(&pairs, cli.format)
        }
        Command::Refine { a, b } => {
            let pair = selfcross::refine_pair(*a, *b, &cfg)?;
            pairs_output(&[pair], cli.format)
        }
        Command::Histogram { input, tol } => {
            if !(*tol > 0.0) {
                return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
            }
            let file = fs::File::open(input).map_err(|e| Failure::usage(format!("{}: {e}", input.display())))?;
            let pairs = selfcross::read_pairs_csv(BufReader::new(file))?;
            let h = selfcross::multiplicity_histogram(&pairs, *tol);
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => to_json(&h),
                Format::Csv => {
                    let mut s = String::from("re_z,im_z,count,flagged,max_residual,preimages\n");
                    for r in h.zero_value.iter().chain(&h.records) {
                        let pre: Vec<String> = r.preimages.iter().map(f64::to_string).collect();
                        writeln!(s, "{},{},{},{},{},{}", r.z.re, r.z.im, r.count, r.flagged, r.max_residual, pre.join(";"))
                            .unwrap();
                    }
                    s
                }
            }
        }
        Command::Injectivity { from, to } => {
            let report = selfcross::verify_local_injectivity(*from, *to, &cfg)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => {
                    let mut s = String::from("ordinate,interval_lo,interval_hi,beyond_theta,g_decreasing,g_spread,passed\n");
                    for z in &report.zeros {
                        writeln!(
                            s,
                            "{},{},{},{},{},{},{}",
                            z.ordinate, z.interval.0, z.interval.1, z.beyond_theta, z.g_decreasing, z.g_spread, z.passed
                        )
                        .unwrap();
                    }
                    s
                }
            }
        }
        Command::ThetaRoot => {
            let root = theta::find_theta_root()?;
            let residual = theta::g_prime(root);
            match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => format!("theta,g_prime_residual\n{root},{residual}\n"),
                Format::Json => to_json(&json!({ "theta": root, "g_prime_residual": residual })),
            }
        }
        Command::Phase { window } => {
            let rcfg = EvalConfig { working_precision_bits: cfg.working_precision_bits, ..EvalConfig::certified() };
            rcfg.validate()?;
            let ts: Vec<f64> = match points(window)? {
                Points::One(t) => vec![t],
                Points::Range(lo, hi) => {
                    if !(window.cell > 0.0) {
                        return Err(Failure::usage("--cell must be positive"));
                    }
                    let n = ((hi - lo) / window.cell).ceil() as usize;
                    (0..=n).map(|i| (lo + window.cell * i as f64).min(hi)).collect()
                }
            };
            let records = ts.iter().map(|&t| theta::phase_record(t, &rcfg)).collect::<Result<Vec<_>, _>>()?;
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => to_json(&records),
                Format::Csv => {
                    let mut s = String::from("t,g,g_prime,vartheta,N,certified\n");
                    for r in &records {
                        writeln!(s, "{},{},{},{},{},{}", r.t, r.g, r.g_prime, r.vartheta, r.n, r.certified).unwrap();
                    }
                    s
                }
            }
        }
        Command::SeriesShare { input, order } => {
            if input.len() != 2 {
                return Err(Failure::usage(format!("series-share needs --in twice, got {}", input.len())));
            }
            let f = PowerSeries::read(&input[0])?;
            let g = PowerSeries::read(&input[1])?;
            let mut opts = ShareOptions { order: *order, ..ShareOptions::default() };
            if let Some(bits) = cli.precision {
                opts.precision_bits = bits;
            }
            let verdict = decide_share_with(&f, &g, &opts)?;
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&verdict),
                Format::Csv => {
                    let h = verdict.h_coeffs.as_ref().map(|c| c.join(";")).unwrap_or_default();
                    format!("kind,H_coeffs\n{:?},{}\n", verdict.kind, h)
                }
            }
        }
        Command::FundamentalDomain { curve, gamma, delta, from, to, tol, samples } => {
            if *samples < 2 {
                return Err(Failure::usage("--samples must be at least 2"));
            }
            let f = match curve {
                CurveKind::Circle => circle,
                CurveKind::Wobble => wobbly_circle,
            };
            let sampled = SampledCurve::from_fn_including(f, *from, *to, *samples, &[*gamma, *delta])?;
            let report = fundamental_domain(&sampled, *gamma, *delta, *tol)?;
            to_json(&report)
        }
    };
    emit(cli.out.as_ref(), &text)
}

enum Points {
    One(f64),
    Range(f64, f64),
}

fn points(w: &Window) -> Result<Points, Failure> {
    match (w.t, w.from, w.to) {
        (Some(t), None, None) => Ok(Points::One(t)),
        (None, Some(lo), Some(hi)) if lo < hi => Ok(Points::Range(lo, hi)),
        (None, Some(lo), Some(hi)) => Err(Failure::usage(format!("empty window [{lo}, {hi}]"))),
        _ => Err(Failure::usage("give either --t or both --from and --to")),
    }
}

fn pairs_output(pairs: &[IntersectionPair], format: Option<Format>) -> String {
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            selfcross::write_pairs_csv(&mut buf, pairs).expect("writing to memory");
            String::from_utf8(buf).expect("CSV is ASCII")
        }
        Format::Json => to_json(&pairs),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not a failure.
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}
