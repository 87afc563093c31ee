mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Ctx;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let ctx = Ctx {
        seed: cli.seed,
        out: cli.out,
        quiet: cli.quiet,
    };
    let result = match cli.command {
        Command::Basis(a) => commands::basis(&ctx, a),
        Command::Witness(a) => commands::witness(&ctx, a),
        Command::PhaseDiagram(a) => commands::phase_diagram(&ctx, a),
        Command::Simulate(a) => commands::simulate(&ctx, a),
        Command::MixCounts(a) => commands::mix_counts(&ctx, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
