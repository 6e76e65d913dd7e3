use std::io::Write;
use std::process::ExitCode;

use binvar::cache::write_atomic;
use binvar::report::EXIT_USAGE;
use binvar::{commands, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();
    if let Some(n) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let json = report.render_json();
    if let Some(path) = &cli.global.output {
        if let Err(e) = write_atomic(path, json.as_bytes()) {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let mut out = std::io::stdout().lock();
    let text = if cli.global.json { &json } else { &report.text };
    // A closed pipe is not worth a panic.
    let _ = out.write_all(text.as_bytes());
    ExitCode::from(report.outcome.exit_code() as u8)
}
