//! Randomized invariants. Structured inputs (policies, schedules, plays) are
//! derived from a proptest-chosen seed so shrinking works on the seed while
//! the structures stay well formed.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tauber::catalog;
use tauber::game::{embed, random_trajectory, simulate, GameSpec, Policy, Side, SwitchSchedule};
use tauber::kernel::{abel, cesaro, discrete_avg, discrete_disc};
use tauber::scalar::{abel_seq, cesaro_seq, EventuallyPeriodic};
use tauber::value::{bolza_value, disc_bellman_step, BolzaSpec, Bound};

fn instances() -> Vec<GameSpec> {
    catalog::NAMES
        .iter()
        .map(|n| catalog::by_name(n).unwrap())
        .collect()
}

fn schedule(spec: &GameSpec, side: Side, rng: &mut ChaCha8Rng) -> SwitchSchedule {
    let mut segments = vec![(0u64, Policy::random(spec, side, rng))];
    let mut t = 0u64;
    for _ in 0..rng.gen_range(0..3u32) {
        t += rng.gen_range(1..=10u64);
        segments.push((t, Policy::random(spec, side, rng)));
    }
    SwitchSchedule::new(segments).unwrap()
}

proptest! {
    // Gluing schedules at n and playing equals playing the pieces and
    // gluing the plays; shifting both schedules restarts the suffix.
    #[test]
    fn schedule_algebra(seed: u64, which in 0usize..5, n in 1u64..20, extra in 1u64..24) {
        let spec = &instances()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = n + extra;
        let s0 = rng.gen_range(0..spec.num_states());
        let (head, tail) = (schedule(spec, Side::Max, &mut rng), schedule(spec, Side::Max, &mut rng));
        let (om, ot) = (schedule(spec, Side::Min, &mut rng), schedule(spec, Side::Min, &mut rng));

        let full = simulate(spec, s0, &head.concat(n, &tail).unwrap(), &om.concat(n, &ot).unwrap(), h).unwrap();
        let first = simulate(spec, s0, &head, &om, n).unwrap();
        let second = simulate(spec, first.states()[n as usize], &tail, &ot, h - n).unwrap();
        let glued = first.glue(n as usize, &second).unwrap();
        prop_assert_eq!(full.states(), glued.states());

        let y = simulate(spec, s0, &head, &om, h).unwrap();
        let w = simulate(spec, y.states()[n as usize], &head.backward_shift(n), &om.backward_shift(n), h - n).unwrap();
        prop_assert_eq!(&y.states()[n as usize..], w.states());

        let again = head.concat(n, &head.backward_shift(n)).unwrap();
        prop_assert_eq!(again.segments(), head.segments());
    }

    // At offset 0 the discrete means coincide with the continuous means of
    // the embedded play: Cesaro at integer horizons exactly, Abel under
    // mu = 1 - e^{-lambda} up to both tail cutoffs.
    #[test]
    fn embedded_means_match_discrete(seed: u64, which in 0usize..5, n in 1u64..64, lambda in 0.02f64..1.0) {
        let spec = &instances()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let steps = (-(1e-12f64).ln() / lambda).ceil() as u64 + 66;
        let y = random_trajectory(spec, rng.gen_range(0..spec.num_states()), steps, &mut rng).unwrap();
        let z = embed(&y, 0.0).unwrap();
        prop_assert!((discrete_avg(&y, n).unwrap() - cesaro(&z, n as f64).unwrap()).abs() <= 1e-12);
        let mu = -(-lambda).exp_m1();
        let diff = (discrete_disc(&y, mu, 1e-12).unwrap() - abel(&z, lambda, 1e-12).unwrap()).abs();
        prop_assert!(diff <= 3e-12);
    }

    // The one-step discounted operator contracts sup-norm distance by
    // exactly 1 - mu, for either announcing side.
    #[test]
    fn bellman_step_contracts(
        which in 0usize..5,
        mu in 0.001f64..0.999,
        seed: u64,
        upper: bool,
    ) {
        let spec = &instances()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = if upper { Bound::Upper } else { Bound::Lower };
        let w1: Vec<f64> = (0..spec.num_states()).map(|_| rng.gen_range(0.0..1.0)).collect();
        let w2: Vec<f64> = (0..spec.num_states()).map(|_| rng.gen_range(0.0..1.0)).collect();
        let d0 = w1.iter().zip(&w2).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
        let t1 = disc_bellman_step(spec, mu, bound, &w1);
        let t2 = disc_bellman_step(spec, mu, bound, &w2);
        let d1 = t1.iter().zip(&t2).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
        prop_assert!(d1 <= (1.0 - mu) * d0 + 1e-15);
    }

    // Both continuation shapes are convex combinations of stage payoffs and
    // the terminal table, so [0, 1] tables stay in [0, 1].
    #[test]
    fn bolza_preserves_range(
        which in 0usize..5,
        seed: u64,
        n in 1u64..60,
        h in 1u64..40,
        mu in 0.001f64..0.999,
        upper: bool,
    ) {
        let spec = &instances()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = if upper { Bound::Upper } else { Bound::Lower };
        let table: Vec<f64> = (0..spec.num_states()).map(|_| rng.gen_range(0.0..1.0)).collect();
        for b in [
            BolzaSpec::average_step(n, h, &table),
            BolzaSpec::discounted_step(mu, h, &table),
        ] {
            for v in bolza_value(spec, &b, bound).unwrap() {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
            }
        }
    }

    // The a-priori constant of an eventually periodic sequence dominates its
    // Cesaro/Abel gap at coupled parameters, whatever the shape.
    #[test]
    fn hardy_constant_dominates_gap(
        pre in prop::collection::vec(0.0f64..=1.0, 0..4),
        cycle in prop::collection::vec(0.0f64..=1.0, 1..6),
        n in 2u64..400,
    ) {
        let p = EventuallyPeriodic::new(pre, cycle).unwrap();
        let seq = p.sequence();
        let gap = (cesaro_seq(&seq, n).unwrap() - abel_seq(&seq, 1.0 / n as f64, 1e-12).unwrap()).abs();
        prop_assert!(gap <= p.hardy_constant() / n as f64 + 1e-9);
    }
}
