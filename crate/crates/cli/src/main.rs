use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use ghom_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match ghom_cli::run(&cli.command) {
        Ok(mut out) => {
            out.report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            if cli.json {
                println!("{}", out.report.to_json());
            } else if let Some(text) = &out.text {
                print!("{text}");
            } else {
                print!("{}", out.report.to_text());
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
