use clap::Parser;

fn main() {
    let cli = modlie::cli::Cli::parse();
    std::process::exit(modlie::cli::run(cli));
}
