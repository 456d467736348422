use clap::Parser;
use dpboost::cli::{run, Cli};

fn main() {
    // DPBOOST_THREADS caps the worker pool for grid/CV parallelism.
    if let Ok(threads) = std::env::var("DPBOOST_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("usage error: DPBOOST_THREADS must be a positive integer");
                std::process::exit(dpboost::cli::EXIT_USAGE);
            }
        }
    }
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}
