//! Built-in game instances used by examples, tests, and the experiment surface.
//!
//! - `const`: one absorbing state with payoff c; every mean equals c.
//! - `cycle01`: an uncontrolled two-cycle alternating payoffs 0 and 1.
//! - `match`: from every state, equal actions move to the payoff-1 state,
//!   unequal actions to the payoff-0 state; lower and upper values stay apart.
//! - `ergodic5`: five states on a controllable cycle; action agreement picks
//!   a step of 1, disagreement a step of 2, so both players steer the walk.
//! - `nonergodic2`: two absorbing states with different payoffs, reachable
//!   only from a shared start; long-run values depend on the state.

use crate::error::{Error, Result};
use crate::game::GameSpec;

pub const NAMES: &[&str] = &["const", "cycle01", "match", "ergodic5", "nonergodic2"];

/// Payoff used for `const` when fetched by name.
pub const DEFAULT_CONST_PAYOFF: f64 = 0.7;

/// One self-looping state with payoff `c`.
pub fn const_game(c: f64) -> Result<GameSpec> {
    GameSpec::new("const", vec![c], vec![1], vec![1], |_, _, _| 0)
}

/// Forced two-cycle `0 -> 1 -> 0` with payoffs 0 and 1.
pub fn cycle01() -> GameSpec {
    GameSpec::new("cycle01", vec![0.0, 1.0], vec![1, 1], vec![1, 1], |s, _, _| {
        1 - s
    })
    .expect("static instance")
}

/// States `{start, win, lose}` with payoffs `{0, 1, 0}`. From every state the
/// maximizer reaches `win` by matching the minimizer's action and `lose`
/// otherwise, so neither player can pin the play and the values differ.
pub fn matching() -> GameSpec {
    GameSpec::new(
        "match",
        vec![0.0, 1.0, 0.0],
        vec![2, 2, 2],
        vec![2, 2, 2],
        |_, a, b| if a == b { 1 } else { 2 },
    )
    .expect("static instance")
}

/// Five payoff-distinct states; play moves `s -> s + 1` when actions agree and
/// `s -> s + 2` (mod 5) when they differ. Strongly connected and controllable.
pub fn ergodic5() -> GameSpec {
    GameSpec::new(
        "ergodic5",
        vec![0.0, 0.8, 0.2, 0.1, 0.9],
        vec![2; 5],
        vec![2; 5],
        |s, a, b| (s + 1 + usize::from(a != b)) % 5,
    )
    .expect("static instance")
}

/// Shared start with payoff 0.5; the maximizer steers into one of two
/// absorbing states with payoffs 0.2 and 0.9. Long-run values are
/// state-dependent, so no uniform limit exists across states.
pub fn nonergodic2() -> GameSpec {
    GameSpec::new(
        "nonergodic2",
        vec![0.5, 0.2, 0.9],
        vec![2, 1, 1],
        vec![1, 1, 1],
        |s, a, _| if s == 0 { 1 + a } else { s },
    )
    .expect("static instance")
}

/// Fetches a catalog instance by name. `const` uses [`DEFAULT_CONST_PAYOFF`].
pub fn by_name(name: &str) -> Result<GameSpec> {
    match name {
        "const" => const_game(DEFAULT_CONST_PAYOFF),
        "cycle01" => Ok(cycle01()),
        "match" => Ok(matching()),
        "ergodic5" => Ok(ergodic5()),
        "nonergodic2" => Ok(nonergodic2()),
        _ => Err(Error::UnknownInstance {
            name: name.to_string(),
            catalog: NAMES.join(", "),
        }),
    }
}

/// All catalog instances in `NAMES` order.
pub fn all() -> Vec<GameSpec> {
    NAMES
        .iter()
        .map(|n| by_name(n).expect("catalog names are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_instance, write_instance};

    #[test]
    fn catalog_is_resolvable_and_rejects_unknown_names() {
        for name in NAMES {
            let spec = by_name(name).unwrap();
            assert_eq!(spec.name(), *name);
        }
        let err = by_name("mystery").unwrap_err();
        assert!(err.to_string().contains("cycle01"), "{err}");
    }

    #[test]
    fn cycle01_alternates() {
        let g = cycle01();
        assert_eq!(g.step(0, 0, 0).unwrap(), 1);
        assert_eq!(g.step(1, 0, 0).unwrap(), 0);
        assert_eq!(g.payoffs(), &[0.0, 1.0]);
    }

    #[test]
    fn match_splits_on_action_agreement() {
        let g = matching();
        assert_eq!(g.step(0, 0, 0).unwrap(), 1);
        assert_eq!(g.step(0, 0, 1).unwrap(), 2);
        assert_eq!(g.step(0, 1, 1).unwrap(), 1);
        // The same rule applies at the payoff states, so nothing is absorbing.
        assert_eq!(g.step(1, 0, 1).unwrap(), 2);
        assert_eq!(g.step(2, 1, 1).unwrap(), 1);
    }

    #[test]
    fn ergodic5_is_strongly_connected() {
        let g = ergodic5();
        // Agreement steps by 1, disagreement by 2.
        assert_eq!(g.step(3, 1, 1).unwrap(), 4);
        assert_eq!(g.step(3, 1, 0).unwrap(), 0);
        // Reachability closure from state 0 covers everything.
        let mut seen = [false; 5];
        let mut frontier = vec![0usize];
        seen[0] = true;
        while let Some(s) = frontier.pop() {
            for (a, b) in [(0, 0), (0, 1)] {
                let t = g.step(s, a, b).unwrap();
                if !seen[t] {
                    seen[t] = true;
                    frontier.push(t);
                }
            }
        }
        assert!(seen.iter().all(|&v| v));
    }

    #[test]
    fn nonergodic2_has_two_absorbing_classes() {
        let g = nonergodic2();
        assert_eq!(g.step(0, 0, 0).unwrap(), 1);
        assert_eq!(g.step(0, 1, 0).unwrap(), 2);
        assert_eq!(g.step(1, 0, 0).unwrap(), 1);
        assert_eq!(g.step(2, 0, 0).unwrap(), 2);
    }

    #[test]
    fn every_instance_round_trips_through_the_file_format() {
        for spec in all() {
            let text = write_instance(&spec);
            let back = parse_instance(&text).unwrap();
            assert_eq!(spec, back, "{}", spec.name());
        }
    }
}
