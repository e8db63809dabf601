//! Exercise the two analytic bound families on random plays: payoff
//! robustness under small time shifts, and consistency of the discrete
//! means with the continuous means of the embedded play.
//!
//! Every sampled row must pass; the printout shows the tightest one per
//! check so the slack is visible.

use std::collections::BTreeMap;

use tauber::experiment::{run, Mode, RunConfig};

fn main() -> tauber::Result<()> {
    for name in ["cycle01", "ergodic5", "nonergodic2"] {
        let out = run(&RunConfig::new(name, Mode::Bounds))?;
        // check -> (min margin, params of that row)
        let mut tightest: BTreeMap<String, (f64, String)> = BTreeMap::new();
        for line in out.csv.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            let margin: f64 = f[5].parse().unwrap();
            let entry = tightest
                .entry(f[0].to_string())
                .or_insert((f64::INFINITY, String::new()));
            if margin < entry.0 {
                *entry = (margin, f[2].to_string());
            }
        }
        println!("{name}: all {} rows pass = {}", out.csv.lines().count() - 1, out.all_pass);
        for (check, (margin, params)) in &tightest {
            println!("  {check:<18} tightest margin {margin:.6} at {params}");
        }
    }
    Ok(())
}
