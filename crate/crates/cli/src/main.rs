use clap::Parser;
use tateforge_cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TATEFORGE_LOG", "off")).init();
    let cli = Cli::parse();
    std::process::exit(run(&cli));
}
