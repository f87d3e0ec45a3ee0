use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use diamond_core::dmc::{cutset_bound, lower_bound_optimize, upper_bound_thm2, BitPipes, LowerConfig, MacChannel, UpperConfig};
use diamond_core::gaussian::LowerModes;
use diamond_core::optim::SimplexConfig;
use diamond_core::sim::{run_trials, SimConfig};
use diamond_core::sweep::{sweep_adder, sweep_gaussian, to_csv, AdderSweep, GaussianSweep, Grid};
use diamond_core::verify::{run_suite, SUITES};
use diamond_core::Error;

#[derive(Parser)]
#[command(name = "diamond", version, about = "Capacity bounds for diamond networks with bit-pipe broadcast links")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Range {
    #[arg(long)]
    c_min: f64,
    #[arg(long)]
    c_max: f64,
    #[arg(long)]
    step: f64,
    /// Hold C2 fixed instead of sweeping C1 = C2.
    #[arg(long)]
    c2: Option<f64>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Range {
    fn grid(&self) -> Grid {
        Grid { c_min: self.c_min, c_max: self.c_max, step: self.step }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Bounds for the Gaussian MAC with equal relay powers.
    SweepGaussian {
        #[arg(long)]
        power: f64,
        #[command(flatten)]
        range: Range,
        /// Also search two-component mixtures for the lower bound (slow).
        #[arg(long)]
        mixture: bool,
    },
    /// Bounds for the binary adder MAC.
    SweepAdder {
        #[command(flatten)]
        range: Range,
    },
    /// Lower, cut-set and auxiliary-channel bounds for a channel file.
    BoundDmc {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        c2: f64,
        /// Fewer optimizer restarts.
        #[arg(long)]
        quick: bool,
    },
    /// Run a named property suite and print a JSON summary.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
    },
    /// Monte-Carlo run of the random coding scheme.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification(_) => 1,
        Error::Budget(_) | Error::Io(_) => 3,
        _ => 2,
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> diamond_core::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cmd: Cmd) -> diamond_core::Result<u8> {
    match cmd {
        Cmd::SweepGaussian { power, range, mixture } => {
            let modes = if mixture { LowerModes::all() } else { LowerModes::default() };
            let rows = sweep_gaussian(&GaussianSweep { power, grid: range.grid(), c2: range.c2, modes })?;
            emit(&to_csv(&rows), &range.out)?;
        }
        Cmd::SweepAdder { range } => {
            let rows = sweep_adder(&AdderSweep { grid: range.grid(), c2: range.c2 })?;
            emit(&to_csv(&rows), &range.out)?;
        }
        Cmd::BoundDmc { channel, c1, c2, quick } => {
            let mac = MacChannel::from_json(&std::fs::read_to_string(channel)?)?;
            let pipes = BitPipes::new(c1, c2)?;
            let (simplex, upper) =
                if quick { (SimplexConfig::quick(), UpperConfig::quick()) } else { (SimplexConfig::default(), UpperConfig::default()) };
            let lower = lower_bound_optimize(&mac, &pipes, &LowerConfig { u_size: None, simplex: simplex.clone() })?;
            let cutset = cutset_bound(&mac, &pipes, &simplex)?;
            let thm2 = upper_bound_thm2(&mac, &pipes, &upper)?;
            let out = json!({ "c1": c1, "c2": c2, "lower": lower, "upper_cutset": cutset, "upper_aux": thm2 });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Cmd::Verify { suite } => {
            let report = run_suite(&suite)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            return Ok(if report.passed { 0 } else { 1 });
        }
        Cmd::Simulate { config } => {
            let cfg: SimConfig = serde_json::from_str(&std::fs::read_to_string(config)?)?;
            let outcome = run_trials(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&outcome)?);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // help and version are not errors
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("DIAMOND_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|n| *n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
