//! Command-line front end: parses arguments, runs one command on the chosen backend and
//! writes a deterministic JSON report.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report is still
//! written), 2 on input errors.

pub mod args;
pub mod commands;
pub mod report;

use std::ffi::OsString;

use anomaly_core::algebra::{set_float_tolerance, CycNumber};
use clap::error::ErrorKind;
use clap::Parser;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use args::{BackendArg, Cli};
use commands::{dispatch, CliError, Ctx};
use report::{emit, Report};

pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    let g = &cli.global;
    if !(g.tolerance > 0.0 && g.tolerance.is_finite()) {
        eprintln!("error: --tolerance must be positive");
        return 2;
    }
    if g.budget == 0 {
        eprintln!("error: --budget must be positive");
        return 2;
    }
    set_float_tolerance(g.tolerance);
    let config = serde_json::to_value(&cli).unwrap_or_default();
    let mut ctx = Ctx {
        rng: ChaCha8Rng::seed_from_u64(g.seed),
        budget: g.budget,
        report: Report::new(cli.command.name(), g.seed, config, g.timing),
    };
    let outcome = match g.backend {
        BackendArg::Exact => dispatch::<CycNumber>(&cli.command, &mut ctx),
        BackendArg::Float => dispatch::<Complex64>(&cli.command, &mut ctx),
    };
    match outcome {
        Ok(()) => {}
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            return 2;
        }
        Err(CliError::Internal(m)) => ctx.report.check("internal invariant", false, serde_json::json!({ "error": m })),
    }
    if let Err(m) = emit(&ctx.report.to_value(), g.out.as_deref()) {
        eprintln!("error: {m}");
        return 2;
    }
    if ctx.report.passed() {
        0
    } else {
        1
    }
}
