mod args;
mod compare;
mod config;
mod error;
mod index;
mod metrics;
mod probe;

use clap::Parser;

use args::{Cli, Command};
use config::Settings;

fn main() {
    let cli = Cli::parse();
    let level = match (cli.quiet, cli.verbose) {
        (true, _) => "error",
        (false, 0) => "warn",
        (false, 1) => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let result = match cli.command {
        Command::Probe(a) => Settings::resolve(*a).and_then(probe::run),
        Command::Index(a) => index::run(a),
        Command::Compare(a) => compare::run(a),
        Command::Metrics(a) => metrics::run(a),
    };
    if let Err(e) = result {
        eprintln!("wikiindex: {e}");
        std::process::exit(e.exit_code());
    }
}
