mod args;
mod cube;
mod error;
mod flat;
mod generate;
mod gm;
mod halfplane;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::Output;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output::new(cli.global.format());
    let result = match &cli.command {
        Command::Gm(cmd) => gm::run(cmd, &cli.global, &mut out),
        Command::Cube(cmd) => cube::run(cmd, &mut out),
        Command::Flat(cmd) => flat::run(cmd, &mut out),
        Command::Halfplane(cmd) => halfplane::run(cmd, &mut out),
        Command::Generate(cmd) => generate::run(cmd, &mut out),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {}", e.message);
            e.code
        }
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.text().as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code)
}
