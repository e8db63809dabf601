//! Publish a Max schedule, let Min respond exactly, and inspect what the
//! schedule actually guarantees. The responder is computed by backward
//! induction, so the reported values are exact up to the stated iteration
//! tolerance, and each start state comes with a witness play that
//! reproduces its value.

use tauber::catalog;
use tauber::game::{Policy, Side, SwitchSchedule};
use tauber::kernel::discrete_disc;
use tauber::value::{best_response, bolza_plan, disc_value, BolzaSpec, Bound, PayoffSpec};

fn main() -> tauber::Result<()> {
    let spec = catalog::by_name("nonergodic2")?;
    let mu = 0.2;
    let tol = 1e-12;
    let payoff = PayoffSpec::Discounted { discount: mu, tol };

    let w = disc_value(&spec, mu, Bound::Lower, tol)?;
    // One greedy step on the fixed point recovers the optimal stationary
    // policy for the announcing side.
    let greedy = bolza_plan(&spec, &BolzaSpec::discounted_step(mu, 1, &w.values), Bound::Lower)?
        .policies
        .remove(0);
    let optimal = SwitchSchedule::stationary(greedy);
    let naive = SwitchSchedule::stationary(Policy::first_action(&spec, Side::Max));

    let against_optimal = best_response(&spec, &optimal, payoff)?;
    let against_naive = best_response(&spec, &naive, payoff)?;

    println!("discounted criterion, mu = {mu}");
    println!("{:>5} {:>14} {:>16} {:>14}", "state", "w_lower", "greedy schedule", "first-action");
    for s in 0..spec.num_states() {
        println!(
            "{s:>5} {:>14.10} {:>16.10} {:>14.10}",
            w.values[s], against_optimal.values[s], against_naive.values[s],
        );
    }

    // The witness play from state 0 reproduces the responder's value.
    let z = &against_naive.trajectories[0];
    let replayed = discrete_disc(z, mu, 1e-10)?;
    println!();
    println!(
        "witness from state 0: {} steps, replayed payoff {:.10} (reported {:.10})",
        z.len() - 1,
        replayed,
        against_naive.values[0],
    );
    Ok(())
}
