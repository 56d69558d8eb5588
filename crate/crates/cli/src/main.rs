//! Command-line surface for the dispersion toolkit.
//!
//! One command per process; every command prints a single JSON object (or
//! CSV for `table`) on stdout. Exit codes: 0 success, 2 input error,
//! 3 capacity guard, 4 internal invariant violation. Set
//! `DISPERSION_THREADS` to cap the worker threads used for optimizer
//! restarts.

mod pointfile;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dispersion::bounds::{bounds_report, min_points_lower_bound};
use dispersion::nets::{
    digital_net, hammersley, van_der_corput, verify_net_parameter, GeneratingMatrices,
};
use dispersion::optimizer::{minimize_dispersion, minimize_dispersion_unchecked, SearchConfig};
use dispersion::sampling::unit_f64;
use dispersion::solver::{
    candidate_grid, dispersion_bruteforce, dispersion_bruteforce_capped, dispersion_exact,
};
use dispersion::witness::guaranteed_box;
use dispersion::{Error as DispError, Point, PointSet};

use report::{BoundsJsonReport, BoxJson, DispReport, NetCheckJson, OptimizeReport, WitnessReport};

#[derive(Parser)]
#[command(
    name = "dispersion",
    version,
    about = "Largest empty box computations for point sets in the unit cube"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point-set file.
    Genpoints {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Number of points (random).
        #[arg(long)]
        n: Option<usize>,
        /// Net exponent: 2^m points (vdc, hammersley).
        #[arg(long)]
        m: Option<u32>,
        /// Dimension (random).
        #[arg(long)]
        d: Option<usize>,
        /// PRNG seed; the stream is ChaCha8 with top-53-bit mantissa
        /// conversion, identical on every platform.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generating-matrix file (net).
        #[arg(long)]
        matrices: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact dispersion of a point-set file.
    Disp {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Lift the brute-force capacity guard.
        #[arg(long)]
        force: bool,
    },
    /// Certified empty box with the proof trail.
    Witness {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Closed-form lower/upper bounds for (n, d).
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u32,
        /// Also report the inverse bound N(eps, d).
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Verify the net property of a point-set file.
    Netcheck {
        #[arg(long = "in")]
        input: PathBuf,
        /// Net exponent; inferred from the point count when omitted.
        #[arg(long)]
        m: Option<u32>,
    },
    /// Search for a low-dispersion configuration.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 1000)]
        iters: usize,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        #[arg(long, default_value_t = 0.9)]
        cooling: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the best point set here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lift the optimizer capacity guard.
        #[arg(long)]
        force: bool,
    },
    /// CSV of bound values over lists of n and d.
    Table {
        /// Comma list and/or a..b ranges, e.g. "1..10" or "1,2,5".
        #[arg(long = "n-list")]
        n_list: String,
        #[arg(long = "d-list")]
        d_list: String,
        #[arg(long, value_enum, default_value_t = Which::Bounds)]
        which: Which,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Vdc,
    Hammersley,
    Net,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Auto,
    Brute,
    Pruned,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Which {
    /// Bound columns only.
    Bounds,
    /// Append an empirical dispersion column from the optimizer.
    Emp,
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<DispError> for Failure {
    fn from(e: DispError) -> Self {
        let code = match e {
            DispError::CapacityExceeded { .. } => 3,
            DispError::InternalInvariant(_) => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<pointfile::ParseError> for Failure {
    fn from(e: pointfile::ParseError) -> Self {
        Failure::input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() {
    if let Ok(v) = std::env::var("DISPERSION_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}

fn emit_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::input(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Genpoints {
            kind,
            n,
            m,
            d,
            seed,
            matrices,
            out,
        } => cmd_genpoints(kind, n, m, d, seed, matrices, out),
        Command::Disp {
            input,
            method,
            force,
        } => cmd_disp(input, method, force),
        Command::Witness { input } => cmd_witness(input),
        Command::Bounds { n, d, eps } => cmd_bounds(n, d, eps),
        Command::Netcheck { input, m } => cmd_netcheck(input, m),
        Command::Optimize {
            n,
            d,
            restarts,
            iters,
            step,
            cooling,
            seed,
            out,
            force,
        } => cmd_optimize(n, d, restarts, iters, step, cooling, seed, out, force),
        Command::Table {
            n_list,
            d_list,
            which,
            out,
            seed,
        } => cmd_table(&n_list, &d_list, which, out, seed),
    }
}

fn cmd_genpoints(
    kind: Kind,
    n: Option<usize>,
    m: Option<u32>,
    d: Option<usize>,
    seed: u64,
    matrices: Option<PathBuf>,
    out: PathBuf,
) -> Result<(), Failure> {
    let (set, comment) = match kind {
        Kind::Random => {
            let n = n.ok_or_else(|| Failure::input("random needs --n"))?;
            let d = d.ok_or_else(|| Failure::input("random needs --d"))?;
            if d == 0 {
                return Err(Failure::input("--d must be at least 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let points = (0..n)
                .map(|_| Point::new((0..d).map(|_| unit_f64(&mut rng)).collect()))
                .collect::<Result<Vec<_>, _>>()?;
            (
                PointSet::new(d, points)?,
                format!("random: chacha8 seed={seed}, top-53-bit mantissa"),
            )
        }
        Kind::Vdc => {
            let m = m.ok_or_else(|| Failure::input("vdc needs --m"))?;
            (van_der_corput(m)?, format!("van der Corput m={m}"))
        }
        Kind::Hammersley => {
            let m = m.ok_or_else(|| Failure::input("hammersley needs --m"))?;
            (hammersley(m)?, format!("Hammersley m={m}"))
        }
        Kind::Net => {
            let path = matrices.ok_or_else(|| Failure::input("net needs --matrices FILE"))?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
            let g = GeneratingMatrices::parse(&text)?;
            (
                digital_net(&g)?,
                format!(
                    "digital net from {} (d={}, m={})",
                    path.display(),
                    g.dim(),
                    g.m()
                ),
            )
        }
    };
    write_file(&out, &pointfile::format_point_set(&set, Some(&comment)))
}

fn cmd_disp(input: PathBuf, method: Method, force: bool) -> Result<(), Failure> {
    let t = pointfile::read_point_set(&input)?;
    let cap = if force {
        None
    } else {
        Some(dispersion::solver::DEFAULT_BRUTE_BOX_CAP)
    };
    let start = std::time::Instant::now();
    let (result, label) = match method {
        Method::Brute => (dispersion_bruteforce_capped(&t, cap)?, "brute"),
        Method::Pruned => (dispersion_exact(&t), "pruned"),
        Method::Auto => {
            let result = dispersion_exact(&t);
            let boxes: u128 = candidate_grid(&t)
                .iter()
                .map(|g| {
                    let m = g.len() as u128;
                    m * (m - 1) / 2
                })
                .product();
            if boxes <= 1_000_000 {
                let brute = dispersion_bruteforce(&t)?;
                if brute.value != result.value {
                    return Err(DispError::InternalInvariant(format!(
                        "auto cross-check mismatch: brute {} vs pruned {}",
                        brute.value, result.value
                    ))
                    .into());
                }
            }
            (result, "pruned")
        }
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    emit_json(&DispReport {
        value: result.value,
        witness_lo: result.witness.lo().to_vec(),
        witness_hi: result.witness.hi().to_vec(),
        method: label,
        elapsed_ms,
    })
}

fn cmd_witness(input: PathBuf) -> Result<(), Failure> {
    let t = pointfile::read_point_set(&input)?;
    let cert = guaranteed_box(&t)?;
    emit_json(&WitnessReport {
        box_: BoxJson {
            lo: cert.empty_box.lo().to_vec(),
            hi: cert.empty_box.hi().to_vec(),
        },
        guaranteed_volume: cert.guaranteed_volume,
        ell: cert.ell,
        slab_index: cert.slab_index,
        branch: cert.branch,
    })
}

fn cmd_bounds(n: u64, d: u32, eps: Option<f64>) -> Result<(), Failure> {
    let bounds = bounds_report(n, d)?;
    let n_eps_lower = match eps {
        Some(e) => Some(min_points_lower_bound(e, d)?),
        None => None,
    };
    emit_json(&BoundsJsonReport {
        bounds,
        eps,
        n_eps_lower,
    })
}

fn cmd_netcheck(input: PathBuf, m: Option<u32>) -> Result<(), Failure> {
    let t = pointfile::read_point_set(&input)?;
    let m = match m {
        Some(m) => m,
        None => {
            let n = t.len();
            if n == 0 || !n.is_power_of_two() {
                return Err(DispError::NotPowerOfTwo { n }.into());
            }
            n.trailing_zeros()
        }
    };
    let report = verify_net_parameter(&t, m)?;
    emit_json(&NetCheckJson {
        t_star: report.t_star,
        boxes_checked: report.boxes_checked,
        failure_example: report.failure_example,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    n: usize,
    d: usize,
    restarts: usize,
    iters: usize,
    step: f64,
    cooling: f64,
    seed: u64,
    out: Option<PathBuf>,
    force: bool,
) -> Result<(), Failure> {
    let cfg = SearchConfig {
        n,
        d,
        restarts,
        iterations: iters,
        initial_step: step,
        cooling,
        seed,
    };
    let trace = if force {
        minimize_dispersion_unchecked(&cfg)?
    } else {
        minimize_dispersion(&cfg)?
    };
    let best_set_path = match out {
        Some(path) => {
            let comment = format!(
                "optimizer best: n={n} d={d} seed={seed} disp={}",
                trace.best_disp
            );
            write_file(
                &path,
                &pointfile::format_point_set(&trace.best_set, Some(&comment)),
            )?;
            Some(path.display().to_string())
        }
        None => None,
    };
    emit_json(&OptimizeReport {
        best_disp: trace.best_disp,
        best_set_path,
        evaluations: trace.evaluations,
    })
}

/// Parses "1..5" (inclusive) and comma lists, possibly mixed: "1..3,8".
fn parse_list(spec: &str) -> Result<Vec<u64>, Failure> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("bad range start '{a}'")))?;
            let b: u64 = b
                .trim()
                .parse()
                .map_err(|_| Failure::input(format!("bad range end '{b}'")))?;
            if a > b {
                return Err(Failure::input(format!("empty range '{part}'")));
            }
            out.extend(a..=b);
        } else {
            out.push(
                part.parse()
                    .map_err(|_| Failure::input(format!("bad number '{part}'")))?,
            );
        }
    }
    if out.is_empty() {
        return Err(Failure::input(format!("empty list '{spec}'")));
    }
    Ok(out)
}

fn cmd_table(
    n_list: &str,
    d_list: &str,
    which: Which,
    out: Option<PathBuf>,
    seed: u64,
) -> Result<(), Failure> {
    let ns = parse_list(n_list)?;
    let ds = parse_list(d_list)?;
    let mut csv = String::new();
    csv.push_str("n,d,lower_trivial,lower_dj,lower_main,lower_best,upper_best_log2");
    if which == Which::Emp {
        csv.push_str(",emp_disp");
    }
    csv.push('\n');
    for &n in &ns {
        for &d in &ds {
            let r = bounds_report(n, d as u32)?;
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}",
                n, d, r.lower_trivial, r.lower_dj, r.lower_main, r.lower_best, r.upper_best_log2
            ));
            if which == Which::Emp {
                let cfg = SearchConfig {
                    seed,
                    ..SearchConfig::new(n as usize, d as usize)
                };
                let trace = minimize_dispersion(&cfg)?;
                csv.push_str(&format!(",{}", trace.best_disp));
            }
            csv.push('\n');
        }
    }
    match out {
        Some(path) => write_file(&path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
