//! Two stability diagnostics on value families.
//!
//! Slow variation: along a geometric parameter grid, coarsening the
//! parameter (longer horizon, smaller discount rate) must not lose value
//! beyond the stated tolerance.
//!
//! Subsolution probes: a family is self-consistent if prepending an h-step
//! optimally played window to the table reproduces the table; the probe
//! reports the eps actually needed to protect the guarantee. Lower families
//! need essentially nothing; feeding the upper family of a game without a
//! saddle shows how much the announced side overpays.

use tauber::catalog;
use tauber::certificate::{slow_variation_check, subsolution_check};
use tauber::value::{avg_value_family, Bound, TabulatedFamily};

fn main() -> tauber::Result<()> {
    let spec = catalog::by_name("ergodic5")?;
    let fam = avg_value_family(&spec, 512, Bound::Lower)?;
    let grid: Vec<u64> = (3..=9).map(|i| 1 << i).collect();
    let tab = TabulatedFamily::from_avg_family(&fam, &grid)?;

    let sv = slow_variation_check(&tab, 2.0, 0.05)?;
    println!("slow variation on {} horizons, ratio 2: worst margin {:+.6}, pass {}",
        grid.len(), sv.worst, sv.pass);
    for pair in sv.pairs.iter().take(3) {
        println!("  T={:<4} -> {:<4} margin {:+.6}", pair.gamma, pair.gamma_p, pair.margin);
    }

    // Probing the lower family of a saddle-free game still costs nothing...
    let m = catalog::matching();
    let probes = [(1u64, 4.0), (2, 8.0), (4, 16.0)];
    let grid = [4u64, 5, 8, 10, 16, 20];
    let lo = TabulatedFamily::from_avg_family(&avg_value_family(&m, 24, Bound::Lower)?, &grid)?;
    let rep = subsolution_check(&m, &lo, 1e-9, &probes)?;
    println!();
    println!("match, lower family: pass {}", rep.pass);
    for p in &rep.probes {
        println!("  window h={} at T={:<3} needed eps {:.2e}", p.h, p.gamma, p.needed_eps);
    }

    // ...but its upper family is not a lower-game subsolution: the probes
    // quantify the saddle gap the maximizer cannot cover.
    let hi = TabulatedFamily::from_avg_family(&avg_value_family(&m, 24, Bound::Upper)?, &grid)?;
    let rep = subsolution_check(&m, &hi, 1e-9, &probes)?;
    println!();
    println!("match, upper family fed to the same check: pass {}", rep.pass);
    for p in &rep.probes {
        println!("  window h={} at T={:<3} needed eps {:.6}", p.h, p.gamma, p.needed_eps);
    }
    Ok(())
}
