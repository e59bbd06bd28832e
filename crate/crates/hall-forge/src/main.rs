//! Command-line entry point.
//!
//! Subcommands: `run` executes a JSON check suite and writes a JSON report;
//! `list-checks` prints the registry; `dilog` verifies one rank-2
//! exponential-series identity at a chosen order; `hall-number` computes one
//! structure constant.  Exit codes: 0 when nothing failed (skips allowed),
//! 1 when a check failed, 2 for unreadable or invalid configuration, 3 when
//! independent computations disagreed internally.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hall_forge::checks;
use hall_forge::hallcore::{HallAlgebra, HallError, Verdict};
use hall_forge::par;
use hall_forge::qtorus;
use hall_forge::scalar::QMode;
use hall_forge::scenario::{self, ConfigError, RunConfig};

// ============================ Argument types ============================

#[derive(Parser)]
#[command(
    name = "hall-forge",
    version,
    about = "Exact-arithmetic workbench for truncated Hall algebras of small finitary categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks named in a JSON config and write a JSON report.
    Run(RunArgs),
    /// List every registered check with a one-line summary.
    ListChecks,
    /// Verify one rank-2 exponential-series identity at a truncation order.
    Dilog(DilogArgs),
    /// Compute one structure constant F^K_{M,N} in a scenario.
    HallNumber(HallNumberArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration.
    config: PathBuf,
    /// Write the JSON report here (defaults to stdout only).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Execute independent checks concurrently.
    #[arg(long)]
    parallel: bool,
    /// Omit elapsed times so the report is byte-stable.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct DilogArgs {
    /// First weight.
    #[arg(long)]
    a0: u32,
    /// Second weight.
    #[arg(long)]
    a1: u32,
    /// First symmetriser (defaults to the minimal one, a1/gcd).
    #[arg(long)]
    d0: Option<u32>,
    /// Second symmetriser (defaults to the minimal one, a0/gcd).
    #[arg(long)]
    d1: Option<u32>,
    /// Total-degree truncation of the series comparison.
    #[arg(long, default_value_t = 8)]
    order: u32,
    /// Evaluate at a concrete q instead of symbolically.
    #[arg(long)]
    at: Option<i64>,
}

#[derive(Args)]
struct HallNumberArgs {
    /// Path to a JSON scenario description.
    #[arg(long)]
    scenario: PathBuf,
    /// Quotient class, e.g. "S1" or "S0^2 + E" (quiver) or "2,1" (nilpotent).
    #[arg(long = "M", value_name = "M")]
    m: String,
    /// Subobject class, same syntax.
    #[arg(long = "N", value_name = "N")]
    n: String,
    /// Ambient class, same syntax.
    #[arg(long = "K", value_name = "K")]
    k: String,
}

// ============================ Exit helpers ============================

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

fn config_error(err: &ConfigError) -> ExitCode {
    eprintln!("error: {}", err);
    ExitCode::from(EXIT_CONFIG)
}

fn hall_error(err: &HallError) -> ExitCode {
    eprintln!("error: {}", err);
    match err {
        HallError::Inconsistent(_) => ExitCode::from(EXIT_INCONSISTENT),
        _ => ExitCode::from(EXIT_CONFIG),
    }
}

// ============================ Subcommands ============================

fn cmd_run(args: RunArgs) -> ExitCode {
    let config = match RunConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    par::set_parallel(args.parallel);
    let echo = args.config.display().to_string();
    let (mut report, saw_inconsistency) =
        match checks::run_config(config, &echo, !args.no_timing) {
            Ok(r) => r,
            Err(e) => return hall_error(&e),
        };
    if args.no_timing {
        report.strip_timing();
    }
    for entry in &report.entries {
        println!("{}", entry.render_line());
    }
    println!(
        "{} checks: {} passed, {} failed, {} skipped, {} undecided",
        report.summary.total,
        report.summary.passed,
        report.summary.failed,
        report.summary.skipped,
        report.summary.undecided
    );
    let json = report.to_json();
    if let Some(out) = &args.out {
        if let Err(e) = std::fs::write(out, &json) {
            eprintln!("error: cannot write {}: {}", out.display(), e);
            return ExitCode::from(EXIT_CONFIG);
        }
    } else {
        println!("{}", json);
    }
    if saw_inconsistency {
        ExitCode::from(EXIT_INCONSISTENT)
    } else if report.summary.failed > 0 {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_list_checks() -> ExitCode {
    for def in checks::registry() {
        println!("{:<28} {}", def.name, def.summary);
    }
    println!("{} checks registered", checks::registry().len());
    ExitCode::SUCCESS
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cmd_dilog(args: DilogArgs) -> ExitCode {
    let g = gcd(args.a0, args.a1);
    let d0 = args.d0.unwrap_or(args.a1 / g);
    let d1 = args.d1.unwrap_or(args.a0 / g);
    let mode = match args.at {
        Some(q) => QMode::at_int(q),
        None => QMode::Symbolic,
    };
    let factors = match qtorus::middle_factors(args.a0, args.a1, d0, d1) {
        Ok(f) => f,
        Err(e) => return hall_error(&e),
    };
    println!(
        "weights ({}, {}), symmetrisers ({}, {}), {} middle factor(s), degree ≤ {}",
        args.a0,
        args.a1,
        d0,
        d1,
        factors.len(),
        args.order
    );
    for f in &factors {
        println!("  series in q^{} at q^{}·x0^{}·x1^{}", f.d, f.coeff_exp, f.m, f.n);
    }
    match qtorus::dilog_identity(args.a0, args.a1, d0, d1, args.order, mode) {
        Ok(Verdict::Pass) => {
            println!("pass: the commutator equals the ordered middle-factor product");
            ExitCode::SUCCESS
        }
        Ok(Verdict::Fail(d)) => {
            println!("fail: {}", d.message);
            for line in &d.support {
                println!("  {}", line);
            }
            ExitCode::from(EXIT_FAIL)
        }
        Err(e) => hall_error(&e),
    }
}

fn cmd_hall_number(args: HallNumberArgs) -> ExitCode {
    let spec = match scenario::load_scenario(&args.scenario) {
        Ok(s) => s,
        Err(e) => return config_error(&e),
    };
    let cat = match spec.build_cat(&[]) {
        Ok(Some(cat)) => cat,
        Ok(None) => {
            eprintln!("error: the scenario does not carry a module category");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => return config_error(&e),
    };
    let parse = |text: &str| scenario::parse_class(&cat, text);
    let (m, n, k) = match (parse(&args.m), parse(&args.n), parse(&args.k)) {
        (Ok(m), Ok(n), Ok(k)) => (m, n, k),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return config_error(&e),
    };
    let trunc = cat.grade(&k);
    let p = cat.p();
    let alg = match HallAlgebra::new(cat, trunc, QMode::at_int(p as i64)) {
        Ok(a) => a,
        Err(e) => return hall_error(&e),
    };
    match alg.hall_coeff(&m, &n, &k) {
        Ok(c) => {
            println!(
                "subobjects of {} isomorphic to {} with quotient {}: {}",
                alg.label(&k),
                alg.label(&n),
                alg.label(&m),
                c
            );
            ExitCode::SUCCESS
        }
        Err(e) => hall_error(&e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::ListChecks => cmd_list_checks(),
        Command::Dilog(args) => cmd_dilog(args),
        Command::HallNumber(args) => cmd_hall_number(args),
    }
}
