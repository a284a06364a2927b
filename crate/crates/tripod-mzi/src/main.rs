use clap::Parser;

fn main() {
    if let Ok(raw) = std::env::var("TRIPOD_MZI_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // ignore failure: a pool may already exist in-process
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring invalid TRIPOD_MZI_THREADS value '{raw}'"),
        }
    }
    let cli = tripod_mzi::cli::Cli::parse();
    if let Err(e) = tripod_mzi::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
