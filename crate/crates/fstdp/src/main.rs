use clap::Parser;

fn main() {
    let cli = fstdp::cli::Cli::parse();
    if let Err(e) = fstdp::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(if e.is_validation() { 2 } else { 3 });
    }
}
