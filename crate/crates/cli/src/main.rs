mod commands;
mod config;
mod failure;

use clap::Parser;

fn main() {
    let cli = config::Cli::parse();
    if let Err(e) = commands::run(&cli.command) {
        eprintln!("funcseries: {e}");
        std::process::exit(e.code());
    }
}
