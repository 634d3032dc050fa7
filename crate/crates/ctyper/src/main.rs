use clap::Parser;

fn main() {
    let cli = ctyper::cli::Cli::parse();
    if let Err(e) = ctyper::cli::run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
