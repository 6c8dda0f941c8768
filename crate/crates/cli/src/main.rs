use std::process::ExitCode;

use clap::Parser;
use featherlink_cli::Cli;

fn init_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("FEATHERLINK_THREADS") else {
        return Ok(());
    };
    let n: usize =
        v.parse().map_err(|_| anyhow::anyhow!("FEATHERLINK_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| featherlink_cli::run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
