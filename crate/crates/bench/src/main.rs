use clap::Parser;
use gse_bench::cli::{run, Cli};

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("gse: {e}");
        std::process::exit(e.exit_code());
    }
}
