use clap::Parser;

fn main() {
    let cli = signlab_cli::Cli::parse();
    std::process::exit(signlab_cli::run(cli));
}
