//! The small algebra behind the strategy constructions: switch schedules
//! concatenate, shift and expose their stationary tails, and discrete plays
//! embed into continuous time where the payoff kernels live.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tauber::catalog;
use tauber::game::{embed, random_trajectory, simulate, Policy, Side, SwitchSchedule};
use tauber::kernel::{abel, cesaro, shift_bound_check};

fn main() -> tauber::Result<()> {
    let spec = catalog::by_name("ergodic5")?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // A two-phase plan: explore with one policy, then settle on another.
    let a = Policy::random(&spec, Side::Max, &mut rng);
    let b = Policy::random(&spec, Side::Max, &mut rng);
    let plan = SwitchSchedule::new(vec![(0, a)])?.concat(6, &SwitchSchedule::stationary(b))?;
    println!("plan switches at: {:?}", plan.segments().iter().map(|(t, _)| *t).collect::<Vec<_>>());
    println!("tail policy is stationary from step 6; policy_at(5) == policy_at(0): {}",
        plan.policy_at(5) == plan.policy_at(0));

    // Shifting by 6 discards the first phase entirely.
    let shifted = plan.backward_shift(6);
    println!("after backward shift by 6: {} segment(s), tail preserved: {}",
        shifted.segments().len(),
        shifted.tail() == plan.tail());

    // Play the plan out against a Min schedule and embed the play.
    let opponent = SwitchSchedule::stationary(Policy::first_action(&spec, Side::Min));
    let y = simulate(&spec, 0, &plan, &opponent, 4000)?;
    let z = embed(&y, 0.0)?;
    println!();
    println!("cesaro mean over [0, 100):      {:.8}", cesaro(&z, 100.0)?);
    println!("abel mean at rate 0.01:         {:.8}", abel(&z, 0.01, 1e-12)?);

    // Payoffs barely move under small time shifts; the bound quantifies it.
    let rep = shift_bound_check(&z, 100.0, 0.01, 0.5, 0.25, 1e-12)?;
    println!(
        "shift (s, r) = (0.5, 0.25): abel moved {:.6} <= {:.6}, cesaro moved {:.6} <= {:.6}",
        rep.abel.lhs, rep.abel.bound, rep.cesaro.lhs, rep.cesaro.bound,
    );

    // A long random play has the same means machinery available.
    let w = random_trajectory(&spec, 2, 4000, &mut rng)?;
    let zw = embed(&w, 0.25)?;
    println!();
    println!("random play, offset 0.25, cesaro over [0, 50): {:.8}", cesaro(&zw, 50.0)?);
    Ok(())
}
