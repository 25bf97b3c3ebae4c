use clap::Parser;
use spheregrid_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
