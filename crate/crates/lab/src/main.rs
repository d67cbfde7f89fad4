use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use jaclab_cli::{Experiment, ExperimentConfig};

/// Run one experiment suite and write its JSON/CSV report.
///
/// Exit status: 0 when every check passes, 2 when a check fails,
/// 3 for configuration errors, 1 for other errors.
#[derive(Debug, Parser)]
#[command(name = "lab", version)]
struct Args {
    experiment: Experiment,
    /// JSON configuration overlaid on the experiment defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// override a configuration value, e.g. `--set grid.n=64`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// output directory
    #[arg(long)]
    out: PathBuf,
    /// worker threads (defaults to the number of cores)
    #[arg(long)]
    threads: Option<usize>,
    /// print the resolved configuration and exit
    #[arg(long)]
    print_config: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match ExperimentConfig::resolve(args.experiment, args.config.as_deref(), &args.sets) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("lab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if args.print_config {
        println!("{}", serde_json::to_string_pretty(&config).expect("config serialises"));
        return ExitCode::SUCCESS;
    }
    if let Some(threads) = args.threads {
        if threads == 0 {
            eprintln!("lab: configuration error: --threads must be positive");
            return ExitCode::from(3);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("lab: cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match jaclab_cli::run(&config).and_then(|o| o.write(&config, &args.out).map(|_| o)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("lab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for c in &outcome.checks {
        eprintln!(
            "{} {}: {:e} {} {:e}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.value,
            c.relation,
            c.limit
        );
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
