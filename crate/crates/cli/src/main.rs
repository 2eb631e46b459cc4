use clap::Parser;

use mwstems_cli::cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MWSTEMS_LOG", "warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("mwstems: {e}");
        std::process::exit(e.exit_code());
    }
}
