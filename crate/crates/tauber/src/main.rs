use std::fs;
use std::process::ExitCode;

use clap::Parser;

use tauber::experiment::{Mode, RunConfig, DEFAULT_TOL};

/// Run one experiment over a bundled instance and emit its CSV table.
/// Exits 0 only if every mandatory check of the mode passed.
#[derive(Parser)]
#[command(name = "tauber", version, disable_help_subcommand = true)]
struct Args {
    /// Instance name from the bundled catalog.
    #[arg(long, default_value = "ergodic5")]
    instance: String,
    /// convergence | certificates | bounds | hardy
    #[arg(long, default_value = "convergence", value_parser = parse_mode)]
    mode: Mode,
    /// Horizon grid, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    n_grid: Option<Vec<u64>>,
    /// Certificate levels, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    k_list: Option<Vec<u32>>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Certified tolerance for discounted value iteration.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "convergence" => Ok(Mode::Convergence),
        "certificates" => Ok(Mode::Certificates),
        "bounds" => Ok(Mode::Bounds),
        "hardy" => Ok(Mode::Hardy),
        other => Err(format!(
            "unknown mode `{other}` (expected convergence, certificates, bounds or hardy)"
        )),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut cfg = RunConfig::new(args.instance, args.mode);
    if let Some(grid) = args.n_grid {
        cfg.n_grid = grid;
    }
    if let Some(list) = args.k_list {
        cfg.k_list = list;
    }
    cfg.tol = args.tol;
    let out = match tauber::experiment::run(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    if let Some(path) = args.out {
        if let Err(e) = fs::write(&path, &out.csv) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::FAILURE;
        }
    } else {
        print!("{}", out.csv);
    }
    if out.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
