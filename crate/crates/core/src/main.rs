use clap::Parser;

fn main() {
    let cli = cimlab::cli::Cli::parse();
    std::process::exit(cimlab::cli::run(cli));
}
