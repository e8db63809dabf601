//! Finite deterministic zero-sum game arenas and the schedules that play on them.
//!
//! A game is a finite state set with a stage payoff in [0, 1] per state, finite
//! pure action sets for the maximizer and the minimizer, and a deterministic
//! transition `next(s, a, b)`. Players move simultaneously; time is discrete.
//! Strategies are state-feedback policies switched at integer steps
//! ([`SwitchSchedule`]). Discrete plays embed into continuous time as
//! piecewise-constant processes ([`EmbeddedProcess`]) so that integral payoffs
//! can be evaluated exactly.

use crate::error::{Error, Result};
use rand::Rng;
use std::fmt;

/// State index, `0..spec.num_states()`.
pub type State = usize;
/// Pure action index, `0..spec.action_count(side, s)`.
pub type Action = usize;

/// Which player a policy or schedule belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Max,
    Min,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::Max => Side::Min,
            Side::Min => Side::Max,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Max => write!(f, "max"),
            Side::Min => write!(f, "min"),
        }
    }
}

/// A finite deterministic zero-sum game arena.
///
/// Invariants, enforced at construction: every payoff lies in [0, 1], every
/// state has at least one action per side, and the transition table is total
/// with all targets in range.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSpec {
    name: String,
    payoff: Vec<f64>,
    max_actions: Vec<usize>,
    min_actions: Vec<usize>,
    // next[s][a * min_actions[s] + b]
    next: Vec<Vec<State>>,
}

impl GameSpec {
    /// Builds a spec from a transition function. The function is sampled on
    /// every `(s, a, b)` triple, so it must be total.
    pub fn new(
        name: &str,
        payoff: Vec<f64>,
        max_actions: Vec<usize>,
        min_actions: Vec<usize>,
        next: impl Fn(State, Action, Action) -> State,
    ) -> Result<Self> {
        let n = payoff.len();
        let mut table = Vec::with_capacity(n);
        for s in 0..n {
            let (ka, kb) = (
                *max_actions.get(s).unwrap_or(&0),
                *min_actions.get(s).unwrap_or(&0),
            );
            let mut row = Vec::with_capacity(ka * kb);
            for a in 0..ka {
                for b in 0..kb {
                    row.push(next(s, a, b));
                }
            }
            table.push(row);
        }
        Self::from_tables(name, payoff, max_actions, min_actions, table)
    }

    /// Builds a spec from an explicit transition table,
    /// `next[s][a * min_actions[s] + b]`.
    pub fn from_tables(
        name: &str,
        payoff: Vec<f64>,
        max_actions: Vec<usize>,
        min_actions: Vec<usize>,
        next: Vec<Vec<State>>,
    ) -> Result<Self> {
        let n = payoff.len();
        if n == 0 {
            return Err(Error::BadParameter("game needs at least one state".into()));
        }
        if max_actions.len() != n || min_actions.len() != n || next.len() != n {
            return Err(Error::BadParameter(format!(
                "table lengths disagree with {n} states"
            )));
        }
        for (s, &g) in payoff.iter().enumerate() {
            if !(0.0..=1.0).contains(&g) || !g.is_finite() {
                return Err(Error::PayoffOutOfRange { state: s, value: g });
            }
        }
        for s in 0..n {
            if max_actions[s] == 0 || min_actions[s] == 0 {
                return Err(Error::BadParameter(format!(
                    "state {s} has an empty action set"
                )));
            }
            if next[s].len() != max_actions[s] * min_actions[s] {
                return Err(Error::BadParameter(format!(
                    "state {s} needs {} transitions, got {}",
                    max_actions[s] * min_actions[s],
                    next[s].len()
                )));
            }
            for &t in &next[s] {
                if t >= n {
                    return Err(Error::BadState { state: t, count: n });
                }
            }
        }
        Ok(GameSpec {
            name: name.to_string(),
            payoff,
            max_actions,
            min_actions,
            next,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_states(&self) -> usize {
        self.payoff.len()
    }

    /// Stage payoff of `s`; the maximizer collects it, the minimizer pays it.
    pub fn payoff(&self, s: State) -> f64 {
        self.payoff[s]
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoff
    }

    pub fn action_count(&self, side: Side, s: State) -> usize {
        match side {
            Side::Max => self.max_actions[s],
            Side::Min => self.min_actions[s],
        }
    }

    /// One transition. Rejects out-of-range states and actions.
    pub fn step(&self, s: State, a: Action, b: Action) -> Result<State> {
        let n = self.num_states();
        if s >= n {
            return Err(Error::BadState { state: s, count: n });
        }
        if a >= self.max_actions[s] {
            return Err(Error::BadAction {
                side: Side::Max,
                state: s,
                action: a,
                count: self.max_actions[s],
            });
        }
        if b >= self.min_actions[s] {
            return Err(Error::BadAction {
                side: Side::Min,
                state: s,
                action: b,
                count: self.min_actions[s],
            });
        }
        Ok(self.next[s][a * self.min_actions[s] + b])
    }

    pub(crate) fn next_unchecked(&self, s: State, a: Action, b: Action) -> State {
        self.next[s][a * self.min_actions[s] + b]
    }
}

/// A pure state-feedback policy for one side: one action per state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    side: Side,
    choice: Vec<Action>,
}

impl Policy {
    /// Validates `choice[s] < spec.action_count(side, s)` for every state.
    pub fn new(spec: &GameSpec, side: Side, choice: Vec<Action>) -> Result<Self> {
        if choice.len() != spec.num_states() {
            return Err(Error::BadParameter(format!(
                "policy covers {} states, game has {}",
                choice.len(),
                spec.num_states()
            )));
        }
        for (s, &a) in choice.iter().enumerate() {
            let count = spec.action_count(side, s);
            if a >= count {
                return Err(Error::BadAction {
                    side,
                    state: s,
                    action: a,
                    count,
                });
            }
        }
        Ok(Policy { side, choice })
    }

    /// The always-first-action policy; valid for any spec.
    pub fn first_action(spec: &GameSpec, side: Side) -> Self {
        Policy {
            side,
            choice: vec![0; spec.num_states()],
        }
    }

    /// Uniformly random valid policy.
    pub fn random(spec: &GameSpec, side: Side, rng: &mut impl Rng) -> Self {
        let choice = (0..spec.num_states())
            .map(|s| rng.gen_range(0..spec.action_count(side, s)))
            .collect();
        Policy { side, choice }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn choose(&self, s: State) -> Action {
        self.choice[s]
    }

    pub fn choices(&self) -> &[Action] {
        &self.choice
    }
}

/// A strategy for one side: feedback policies switched at integer steps.
///
/// Invariants: segments are nonempty, start steps are strictly increasing with
/// the first at 0, all policies share one side. The last segment's policy is
/// the stationary tail, active forever after its start step.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchSchedule {
    segments: Vec<(u64, Policy)>,
}

/// Drops segments that repeat the policy already active.
fn coalesce(segments: Vec<(u64, Policy)>) -> Vec<(u64, Policy)> {
    let mut out: Vec<(u64, Policy)> = Vec::with_capacity(segments.len());
    for (start, policy) in segments {
        match out.last() {
            Some((_, prev)) if *prev == policy => {}
            _ => out.push((start, policy)),
        }
    }
    out
}

impl SwitchSchedule {
    pub fn stationary(policy: Policy) -> Self {
        SwitchSchedule {
            segments: vec![(0, policy)],
        }
    }

    pub fn new(segments: Vec<(u64, Policy)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::BadSchedule("no segments".into()));
        }
        if segments[0].0 != 0 {
            return Err(Error::BadSchedule(format!(
                "first segment starts at {}, must start at 0",
                segments[0].0
            )));
        }
        for w in segments.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::BadSchedule(format!(
                    "start steps not strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        let side = segments[0].1.side();
        for (_, p) in &segments {
            if p.side() != side {
                return Err(Error::MixedSides(side, p.side()));
            }
        }
        Ok(SwitchSchedule {
            segments: coalesce(segments),
        })
    }

    pub fn side(&self) -> Side {
        self.segments[0].1.side()
    }

    pub fn segments(&self) -> &[(u64, Policy)] {
        &self.segments
    }

    /// The policy active at step `t`: the segment with the largest start <= t.
    pub fn policy_at(&self, t: u64) -> &Policy {
        let idx = match self.segments.binary_search_by_key(&t, |(s, _)| *s) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        &self.segments[idx].1
    }

    /// The stationary tail policy.
    pub fn tail(&self) -> &Policy {
        &self.segments.last().unwrap().1
    }

    /// Plays `self` on steps below `n`, then `tail` restarted at `n`.
    /// `n = 0` yields `tail` unchanged.
    pub fn concat(&self, n: u64, tail: &SwitchSchedule) -> Result<SwitchSchedule> {
        if self.side() != tail.side() {
            return Err(Error::MixedSides(self.side(), tail.side()));
        }
        if n == 0 {
            return Ok(tail.clone());
        }
        let mut segments: Vec<(u64, Policy)> = self
            .segments
            .iter()
            .take_while(|(start, _)| *start < n)
            .cloned()
            .collect();
        for (start, policy) in &tail.segments {
            segments.push((start + n, policy.clone()));
        }
        Ok(SwitchSchedule {
            segments: coalesce(segments),
        })
    }

    /// The schedule as seen from step `n`: the policy active at `n` moves to
    /// start 0 and later switches shift left by `n`. Satisfies
    /// `self.concat(n, self.backward_shift(n)) == self` for every `n`.
    pub fn backward_shift(&self, n: u64) -> SwitchSchedule {
        let mut segments = vec![(0, self.policy_at(n).clone())];
        for (start, policy) in &self.segments {
            if *start > n {
                segments.push((start - n, policy.clone()));
            }
        }
        SwitchSchedule {
            segments: coalesce(segments),
        }
    }
}

/// A realized play: the visited states with their stage payoffs.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    states: Vec<State>,
    payoffs: Vec<f64>,
}

impl Trajectory {
    pub fn from_states(spec: &GameSpec, states: Vec<State>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::BadParameter("empty trajectory".into()));
        }
        let n = spec.num_states();
        let mut payoffs = Vec::with_capacity(states.len());
        for &s in &states {
            if s >= n {
                return Err(Error::BadState { state: s, count: n });
            }
            payoffs.push(spec.payoff(s));
        }
        Ok(Trajectory { states, payoffs })
    }

    /// Number of recorded states (steps + 1).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one state
    }

    pub fn origin(&self) -> State {
        self.states[0]
    }

    pub fn state(&self, t: usize) -> State {
        self.states[t]
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn payoff(&self, t: usize) -> f64 {
        self.payoffs[t]
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }

    /// Drops the first `k` steps. Rejects `k >= len` (a trajectory is never empty).
    pub fn suffix(&self, k: usize) -> Result<Trajectory> {
        if k >= self.len() {
            return Err(Error::TrajectoryTooShort {
                have: self.len(),
                need: k + 1,
            });
        }
        Ok(Trajectory {
            states: self.states[k..].to_vec(),
            payoffs: self.payoffs[k..].to_vec(),
        })
    }

    /// Keeps steps below `n`, then appends `tail`. `tail.origin()` must equal
    /// `self.state(n)` so the glued play is a play of the same arena.
    pub fn glue(&self, n: usize, tail: &Trajectory) -> Result<Trajectory> {
        if n >= self.len() {
            return Err(Error::TrajectoryTooShort {
                have: self.len(),
                need: n + 1,
            });
        }
        if tail.origin() != self.states[n] {
            return Err(Error::BadParameter(format!(
                "glue mismatch: state {} at step {n}, tail starts at {}",
                self.states[n],
                tail.origin()
            )));
        }
        let mut states = self.states[..n].to_vec();
        states.extend_from_slice(&tail.states);
        let mut payoffs = self.payoffs[..n].to_vec();
        payoffs.extend_from_slice(&tail.payoffs);
        Ok(Trajectory { states, payoffs })
    }
}

/// Plays both schedules from `s0` for `horizon` steps; the result records
/// `horizon + 1` states.
pub fn simulate(
    spec: &GameSpec,
    s0: State,
    max_schedule: &SwitchSchedule,
    min_schedule: &SwitchSchedule,
    horizon: u64,
) -> Result<Trajectory> {
    if max_schedule.side() == min_schedule.side() {
        return Err(Error::SidesCoincide(max_schedule.side()));
    }
    if max_schedule.side() != Side::Max {
        return Err(Error::WrongSide {
            expected: Side::Max,
            got: max_schedule.side(),
        });
    }
    if s0 >= spec.num_states() {
        return Err(Error::BadState {
            state: s0,
            count: spec.num_states(),
        });
    }
    let mut states = Vec::with_capacity(horizon as usize + 1);
    let mut s = s0;
    states.push(s);
    for t in 0..horizon {
        let a = max_schedule.policy_at(t).choose(s);
        let b = min_schedule.policy_at(t).choose(s);
        s = spec.step(s, a, b)?;
        states.push(s);
    }
    Trajectory::from_states(spec, states)
}

/// A play under uniformly random actions on both sides; used by bound suites.
pub fn random_trajectory(
    spec: &GameSpec,
    s0: State,
    steps: u64,
    rng: &mut impl Rng,
) -> Result<Trajectory> {
    if s0 >= spec.num_states() {
        return Err(Error::BadState {
            state: s0,
            count: spec.num_states(),
        });
    }
    let mut states = Vec::with_capacity(steps as usize + 1);
    let mut s = s0;
    states.push(s);
    for _ in 0..steps {
        let a = rng.gen_range(0..spec.action_count(Side::Max, s));
        let b = rng.gen_range(0..spec.action_count(Side::Min, s));
        s = spec.next_unchecked(s, a, b);
        states.push(s);
    }
    Trajectory::from_states(spec, states)
}

/// A discrete play viewed as a piecewise-constant continuous-time process:
/// at time `t` the process sits at `(y(floor(t + s)), frac(t + s))`, so its
/// payoff is the stage payoff of the state visited at step `floor(t + s)`.
#[derive(Clone, Debug)]
pub struct EmbeddedProcess {
    base: Trajectory,
    offset: f64,
}

/// Embeds `base` with phase `offset` in [0, 1).
pub fn embed(base: &Trajectory, offset: f64) -> Result<EmbeddedProcess> {
    if !(0.0..1.0).contains(&offset) {
        return Err(Error::BadOffset(offset));
    }
    Ok(EmbeddedProcess {
        base: base.clone(),
        offset,
    })
}

impl EmbeddedProcess {
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn base(&self) -> &Trajectory {
        &self.base
    }

    /// Time up to which the process is defined: `len - offset`.
    pub fn horizon(&self) -> f64 {
        self.base.len() as f64 - self.offset
    }

    fn index_at(&self, t: f64) -> Result<usize> {
        debug_assert!(t >= 0.0, "negative time {t}");
        let idx = (t + self.offset).floor() as usize;
        if idx >= self.base.len() {
            return Err(Error::TrajectoryTooShort {
                have: self.base.len(),
                need: idx + 1,
            });
        }
        Ok(idx)
    }

    /// The pair `(state, phase)` occupied at time `t >= 0`.
    pub fn state_at(&self, t: f64) -> Result<(State, f64)> {
        let idx = self.index_at(t)?;
        let phase = (t + self.offset) - idx as f64;
        Ok((self.base.state(idx), phase))
    }

    /// Stage payoff seen at time `t`.
    pub fn payoff_at(&self, t: f64) -> Result<f64> {
        Ok(self.base.payoff(self.index_at(t)?))
    }

    /// The time-shifted process `t -> z(t + s)` for `s >= 0`.
    pub fn shift(&self, s: f64) -> Result<EmbeddedProcess> {
        if s < 0.0 || !s.is_finite() {
            return Err(Error::BadParameter(format!("shift {s} must be >= 0")));
        }
        let total = self.offset + s;
        let whole = total.floor();
        let offset = total - whole;
        let base = self.base.suffix(whole as usize)?;
        Ok(EmbeddedProcess { base, offset })
    }
}
