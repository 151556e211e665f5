//! Command-line front end: solve the approximation pipeline, compute LP
//! lower bounds or exact optima, generate random instances, and run
//! benchmark sweeps.
//!
//! Exit codes: 0 success, 2 parse/validation problems, 3 solver
//! failures, 4 a bench record violating the empirical guarantees.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sched_core::error::Error;
use sched_core::exact;
use sched_core::instance::{self, GenParams};
use sched_core::lp;
use sched_core::pipeline::{self, AlphaMode, BenchParams, SolveOptions};
use sched_core::report::records_to_csv;
use sched_core::schedule::Schedule;
use sched_core::svg::gantt_svg;

#[derive(Parser)]
#[command(name = "sched", version, about = "Single-machine scheduling: LP bounds, alpha-point list scheduling, exact oracle")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum AlphaArg {
    /// Derandomized: best alpha over all breakpoint intervals.
    Best,
    /// A single alpha drawn from the exponential density (needs --seed).
    Random,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full pipeline on an instance file and print a JSON report.
    Solve {
        /// Instance file ('-' for stdin).
        file: PathBuf,
        #[arg(long, default_value_t = lp::DEFAULT_TOL_SEP)]
        tol_sep: f64,
        #[arg(long, value_enum, default_value_t = AlphaArg::Best)]
        alpha: AlphaArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the exact optimum (small instances only).
        #[arg(long)]
        exact: bool,
        /// Write a Gantt chart of the final schedule to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Record wall-clock times (makes reports non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Solve only the LP relaxation and print its report.
    Lb {
        file: PathBuf,
        #[arg(long, default_value_t = lp::DEFAULT_TOL_SEP)]
        tol_sep: f64,
    },
    /// Brute-force the optimal schedule of a small instance.
    Exact {
        file: PathBuf,
        #[arg(long, default_value_t = exact::DEFAULT_OPT_LIMIT)]
        limit: usize,
    },
    /// Generate a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        p_max: u64,
        #[arg(long, default_value_t = 10)]
        r_max: u64,
        #[arg(long, default_value_t = 10)]
        w_max: u64,
        #[arg(long, default_value_t = 0.2)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout by default).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep seeded random instances and emit one record per instance.
    Bench {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        p_max: u64,
        #[arg(long, default_value_t = 10)]
        r_max: u64,
        #[arg(long, default_value_t = 10)]
        w_max: u64,
        #[arg(long, default_value_t = 0.2)]
        edge_prob: f64,
        #[arg(long, default_value_t = lp::DEFAULT_TOL_SEP)]
        tol_sep: f64,
        /// Worker threads; output order is by instance index either way.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        timings: bool,
    },
}

fn read_instance(path: &Path) -> Result<instance::Instance, Error> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Value(format!("reading stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path)
            .map_err(|e| Error::Value(format!("reading {}: {e}", path.display())))?
    };
    let inst = instance::parse(&text)?;
    instance::validate(&inst)?;
    Ok(inst)
}

fn report_schedule(segments: &[Vec<[f64; 2]>], speed: f64) -> Schedule {
    Schedule {
        speed,
        segments: segments
            .iter()
            .map(|segs| {
                segs.iter()
                    .map(|&[start, end]| sched_core::schedule::Interval { start, end })
                    .collect()
            })
            .collect(),
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Solve {
            file,
            tol_sep,
            alpha,
            seed,
            exact,
            svg,
            timings,
        } => {
            let inst = read_instance(&file)?;
            let opts = SolveOptions {
                tol_sep,
                alpha: match alpha {
                    AlphaArg::Best => AlphaMode::Best,
                    AlphaArg::Random => AlphaMode::Random { seed },
                },
                exact,
                exact_limit: exact::DEFAULT_OPT_LIMIT,
                timings,
            };
            let report = pipeline::solve_pipeline(&inst, &opts)?;
            if let Some(svg_path) = svg {
                let sched = report_schedule(&report.alpha.segments, 1.0);
                let doc = gantt_svg(
                    &report.instance,
                    &sched,
                    &format!("alpha = {}", report.alpha.best_alpha),
                );
                fs::write(&svg_path, doc)
                    .map_err(|e| Error::Value(format!("writing {}: {e}", svg_path.display())))?;
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(0)
        }
        Cmd::Lb { file, tol_sep } => {
            let inst = read_instance(&file)?;
            let norm = instance::normalize_release_dates(&inst)?;
            let sol = lp::solve_lp_relaxation(&norm, tol_sep)?;
            let doc = serde_json::json!({
                "n": norm.n(),
                "lp": {
                    "objective": sol.objective,
                    "c_star": sol.c_star,
                    "cuts": sol.cuts.len(),
                    "rounds": sol.iterations,
                    "lp_solves": sol.lp_solves,
                },
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            Ok(0)
        }
        Cmd::Exact { file, limit } => {
            let inst = read_instance(&file)?;
            let norm = instance::normalize_release_dates(&inst)?;
            let res = exact::brute_force_optimum(&norm, limit)?;
            println!("{}", serde_json::to_string_pretty(&res).expect("json"));
            Ok(0)
        }
        Cmd::Gen {
            n,
            p_max,
            r_max,
            w_max,
            edge_prob,
            seed,
            out,
        } => {
            if n == 0 {
                return Err(Error::Value("--n must be at least 1".into()));
            }
            if !(0.0..=1.0).contains(&edge_prob) {
                return Err(Error::Value("--edge-prob must lie in [0, 1]".into()));
            }
            let inst = instance::generate_random(GenParams {
                n,
                p_max,
                r_max,
                w_max,
                edge_prob,
                seed,
            });
            let text = instance::serialize(&inst);
            match out {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Error::Value(format!("writing {}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Cmd::Bench {
            count,
            n,
            seed,
            p_max,
            r_max,
            w_max,
            edge_prob,
            tol_sep,
            jobs,
            format,
            timings,
        } => {
            if n == 0 {
                return Err(Error::Value("--n must be at least 1".into()));
            }
            if !(0.0..=1.0).contains(&edge_prob) {
                return Err(Error::Value("--edge-prob must lie in [0, 1]".into()));
            }
            let params = BenchParams {
                count,
                n,
                seed,
                p_max,
                r_max,
                w_max,
                edge_prob,
                tol_sep,
                exact_limit: exact::DEFAULT_OPT_LIMIT,
                jobs: jobs.max(1),
                timings,
            };
            let (records, summary) = pipeline::run_bench(&params)?;
            match format {
                Format::Csv => {
                    print!(
                        "{}",
                        records_to_csv(&records)
                            .map_err(|e| Error::Value(format!("csv: {e}")))?
                    );
                    eprintln!("{}", serde_json::to_string(&summary).expect("json"));
                }
                Format::Json => {
                    let doc = serde_json::json!({ "records": records, "summary": summary });
                    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
                }
            }
            let mut failed = false;
            for rec in &records {
                if let Err(msg) = rec.check_invariants() {
                    eprintln!("guarantee violated: {msg}");
                    failed = true;
                }
            }
            Ok(if failed { 4 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
