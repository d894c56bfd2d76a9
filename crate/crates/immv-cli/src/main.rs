use clap::Parser;

use immv_cli::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
