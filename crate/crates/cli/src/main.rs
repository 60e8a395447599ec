use clap::Parser;

fn main() {
    let cli = minannih_cli::cli::Cli::parse();
    if let Err(e) = minannih_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}
