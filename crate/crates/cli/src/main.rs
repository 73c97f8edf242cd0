//! `skp`: navigation, verification, diameters, bounds and spectra from the
//! command line. One JSON record per line.

mod commands;
mod config;
mod group;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{BoundsArgs, NavArgs, Outcome, VerifyArgs, CODE_BAD_INPUT};
use config::{Opts, RunConfig};

const BFS_THRESHOLD: usize = 10_000_000;
const SPECTRUM_THRESHOLD: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "skp", version, about = "Positive-word navigation in finite quotients of SL2(F_q[[t]]) and the Fabrykowski-Gupta group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Positive words for elements, with certificates
    Navigate(NavArgs),
    /// Randomised checks of the filtration hypotheses
    Verify(VerifyArgs),
    /// Exact directed and undirected diameters of a quotient
    Diameter,
    /// Closed-form length and runtime bounds
    Bounds(BoundsArgs),
    /// Spectral gap, mixing time and the diameter comparison
    Spectrum,
}

fn run(cli: &Cli) -> (Option<RunConfig>, skp_core::Result<Outcome>) {
    let (name, threshold) = match cli.command {
        Command::Navigate(_) => ("navigate", BFS_THRESHOLD),
        Command::Verify(_) => ("verify", BFS_THRESHOLD),
        Command::Diameter => ("diameter", BFS_THRESHOLD),
        Command::Bounds(_) => ("bounds", BFS_THRESHOLD),
        Command::Spectrum => ("spectrum", SPECTRUM_THRESHOLD),
    };
    let cfg = match RunConfig::new(name, &cli.opts, threshold) {
        Ok(c) => c,
        Err(e) => return (None, Err(e)),
    };
    let r = match &cli.command {
        Command::Navigate(a) => commands::navigate(&cfg, a),
        Command::Verify(a) => commands::verify(&cfg, a),
        Command::Diameter => commands::diameter(&cfg),
        Command::Bounds(a) => commands::bounds(&cfg, a),
        Command::Spectrum => commands::spectrum(&cfg),
    };
    (Some(cfg), r)
}

fn emit(cli: &Cli, lines: &[serde_json::Value]) -> std::io::Result<()> {
    let mut buf = Vec::new();
    for v in lines {
        serde_json::to_writer(&mut buf, v)?;
        buf.push(b'\n');
    }
    match &cli.opts.out {
        Some(p) => std::fs::write(p, buf),
        None => std::io::stdout().lock().write_all(&buf),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { CODE_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let (cfg, result) = run(&cli);
    let (records, code) = match result {
        Ok(o) => (o.records, o.code),
        Err(e) => {
            eprintln!("error: {e}");
            let mut v = serde_json::json!({ "error": e.to_string(), "exit_code": commands::error_code(&e) });
            if let Some(c) = &cfg {
                v["config"] = serde_json::to_value(c).unwrap();
            }
            (vec![v], commands::error_code(&e))
        }
    };
    if let Err(e) = emit(&cli, &records) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(CODE_BAD_INPUT as u8);
    }
    ExitCode::from(code as u8)
}
