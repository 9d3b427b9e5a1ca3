use clap::Parser;

use entdist::cli::{self, Cli};

fn main() {
    // ENTDIST_THREADS caps parallelism; unset means rayon's default.
    if let Ok(value) = std::env::var("ENTDIST_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
    let cli = Cli::parse();
    std::process::exit(cli::run(&cli));
}
